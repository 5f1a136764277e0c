//! Permutations of `{0, …, N−1}` and explicit-element permutation groups.
//!
//! Groups here are small (degree ≤ 64, order ≤ ~10^5), so everything is done by
//! naive closure over element lists. Element lists are kept sorted
//! lexicographically by image sequence so that every report is stable.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Default bound on the number of elements a closure may produce.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image sequence is not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("group closure exceeded cap of {0} elements")]
    CapExceeded(usize),
}

/// A permutation stored as its image sequence: `p(i) = images[i]`.
///
/// Composition follows the usual right-to-left convention:
/// `f.compose(&g)` is `f ∘ g`, i.e. `x ↦ f(g(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Builds a permutation from disjoint cycles on `degree` points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Perm, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(PermError::NotBijection(degree));
                }
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm {
            images: rhs.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Cycles (including fixed points), each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted list of cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.compose(other) == other.compose(self)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return write!(f, "()");
        }
        for c in nontrivial {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn check_degrees(gens: &[Perm], degree: usize) -> Result<(), PermError> {
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                got: g.degree(),
            });
        }
    }
    Ok(())
}

/// All elements of `⟨gens⟩`, sorted lexicographically by image sequence.
///
/// Breadth-first multiplication by generators; in a finite group this reaches
/// inverses as well.
pub fn group_closure(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>, PermError> {
    check_degrees(gens, degree)?;
    let id = Perm::identity(degree);
    let gens: Vec<&Perm> = {
        let uniq: BTreeSet<&Perm> = gens.iter().filter(|g| !g.is_identity()).collect();
        uniq.into_iter().collect()
    };
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = g.compose(&x);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(PermError::CapExceeded(cap));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Orbit of `point` under `⟨gens⟩` by BFS on points; no closure needed.
pub fn orbit(gens: &[Perm], point: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    out.insert(point);
    let mut queue = VecDeque::from([point]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.apply(x);
            if out.insert(y) {
                queue.push_back(y);
            }
        }
    }
    out
}

pub fn point_stabilizer(group_elements: &[Perm], point: usize) -> Vec<Perm> {
    group_elements
        .iter()
        .filter(|g| g.apply(point) == point)
        .cloned()
        .collect()
}

/// A permutation group with its full element list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActionPredicates {
    pub is_transitive: bool,
    pub is_regular: bool,
    pub is_abelian: bool,
    pub is_cyclic: bool,
}

impl PermGroup {
    pub fn generate(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<PermGroup, PermError> {
        let elements = group_closure(degree, &generators, cap)?;
        Ok(PermGroup {
            degree,
            generators,
            elements,
        })
    }

    /// Wraps an element list already known to be a group (e.g. all automorphisms).
    pub fn from_elements(degree: usize, mut elements: Vec<Perm>) -> Result<PermGroup, PermError> {
        check_degrees(&elements, degree)?;
        elements.sort_unstable();
        elements.dedup();
        Ok(PermGroup {
            degree,
            generators: elements.clone(),
            elements,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn orbit(&self, point: usize) -> BTreeSet<usize> {
        orbit(&self.generators, point)
    }

    pub fn stabilizer(&self, point: usize) -> Vec<Perm> {
        point_stabilizer(&self.elements, point)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    /// Closed under conjugation by every generator of `ambient`.
    pub fn is_normal_in(&self, ambient: &PermGroup) -> bool {
        ambient.generators.iter().all(|s| {
            let s_inv = s.inverse();
            self.generators
                .iter()
                .all(|g| self.contains(&s.compose(g).compose(&s_inv)))
        })
    }

    pub fn intersection(&self, other: &PermGroup) -> Vec<Perm> {
        self.elements
            .iter()
            .filter(|g| other.contains(g))
            .cloned()
            .collect()
    }

    pub fn predicates(&self) -> ActionPredicates {
        let is_transitive = self.degree == 0 || self.orbit(0).len() == self.degree;
        let is_regular = is_transitive && self.order() == self.degree.max(1);
        let is_abelian = self
            .generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)));
        let n = self.order() as u64;
        let is_cyclic = is_abelian && self.elements.iter().any(|g| g.order() == n);
        ActionPredicates {
            is_transitive,
            is_regular,
            is_abelian,
            is_cyclic,
        }
    }
}

/// Transitivity, regularity, commutativity and cyclicity of `⟨gens⟩`.
pub fn action_predicates(degree: usize, gens: &[Perm], cap: usize) -> Result<ActionPredicates, PermError> {
    Ok(PermGroup::generate(degree, gens.to_vec(), cap)?.predicates())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Perm {
        Perm::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap()
    }

    #[test]
    fn rejects_non_bijection() {
        assert_eq!(
            Perm::from_images(vec![0, 0, 1]),
            Err(PermError::NotBijection(3))
        );
    }

    #[test]
    fn compose_is_right_to_left() {
        let f = Perm::from_images(vec![1, 0, 2]).unwrap();
        let g = Perm::from_images(vec![0, 2, 1]).unwrap();
        // f∘g: 0 -> g 0 -> f 1
        assert_eq!(f.compose(&g).images(), vec![1, 2, 0]);
        assert_eq!(f.compose(&f.inverse()), Perm::identity(3));
    }

    #[test]
    fn pow_and_order() {
        let c = cycle(6);
        assert_eq!(c.order(), 6);
        assert_eq!(c.pow(6), Perm::identity(6));
        assert_eq!(c.pow(-1), c.inverse());
        assert_eq!(c.pow(2).cycle_type(), vec![3, 3]);
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = group_closure(4, &[], DEFAULT_CAP).unwrap();
        assert_eq!(g, vec![Perm::identity(4)]);
    }

    #[test]
    fn symmetric_group_closure() {
        let t = Perm::from_images(vec![1, 0, 2, 3]).unwrap();
        let g = group_closure(4, &[t, cycle(4)], DEFAULT_CAP).unwrap();
        assert_eq!(g.len(), 24);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let t = Perm::from_images(vec![1, 0, 2, 3]).unwrap();
        assert_eq!(
            group_closure(4, &[t, cycle(4)], 10),
            Err(PermError::CapExceeded(10))
        );
    }

    #[test]
    fn orbits() {
        assert_eq!(orbit(&[Perm::identity(5)], 3), BTreeSet::from([3]));
        assert_eq!(orbit(&[cycle(5)], 2).len(), 5);
    }

    #[test]
    fn regular_cyclic_group() {
        let p = action_predicates(7, &[cycle(7)], DEFAULT_CAP).unwrap();
        assert_eq!(
            p,
            ActionPredicates {
                is_transitive: true,
                is_regular: true,
                is_abelian: true,
                is_cyclic: true
            }
        );
        let g = PermGroup::generate(7, vec![cycle(7)], DEFAULT_CAP).unwrap();
        for x in 0..7 {
            assert_eq!(g.stabilizer(x), vec![Perm::identity(7)]);
        }
    }

    #[test]
    fn klein_four_is_not_cyclic() {
        let a = Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
        let b = Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
        let p = action_predicates(4, &[a, b], DEFAULT_CAP).unwrap();
        assert!(p.is_regular && p.is_abelian && !p.is_cyclic);
    }

    #[test]
    fn closure_is_a_group_and_orbit_stabilizer_holds() {
        let a = Perm::from_cycles(6, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(6, &[&[2, 3], &[4, 5]]).unwrap();
        let g = PermGroup::generate(6, vec![a.clone(), b.clone()], DEFAULT_CAP).unwrap();
        let elems = g.elements();
        assert!(elems.contains(&Perm::identity(6)));
        for x in elems {
            assert!(g.contains(&x.inverse()));
            for y in elems {
                assert!(g.contains(&x.compose(y)));
            }
        }
        assert_eq!(720 % g.order(), 0);
        for p in 0..6 {
            assert_eq!(g.orbit(p).len() * g.stabilizer(p).len(), g.order());
        }
        let swapped = PermGroup::generate(6, vec![b, a], DEFAULT_CAP).unwrap();
        assert_eq!(swapped.elements(), g.elements());
    }
}
