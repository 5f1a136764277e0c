//! Small left braces stored as dense tables, and the uniconnected solutions
//! they produce.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::intlat::{subgroup_generated, AbElem, AbGroup, IntMatrix};
use crate::permkit::Perm;
use crate::ybecore::{permutation_group_capped, FinSolution, YbeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraceError {
    #[error("tables are not {0}×{0}")]
    Shape(usize),
    #[error("(B,+) is not an abelian group")]
    NotAbelianGroup,
    #[error("(B,∘) is not a group")]
    NotGroup,
    #[error("additive and multiplicative identities differ")]
    IdentityMismatch,
    #[error("brace law fails at ({0}, {1}, {2})")]
    BraceLaw(usize, usize, usize),
    #[error("alpha does not define an automorphism of the group")]
    BadAutomorphism,
    #[error("alpha^n is not the identity")]
    BadOrder,
    #[error("the lambda-orbit of {0} does not generate (B,+)")]
    NotCycleBase(usize),
    #[error("unsupported parameter: {0}")]
    BadParam(String),
    #[error(transparent)]
    Solution(#[from] YbeError),
}

pub type Result<T> = std::result::Result<T, BraceError>;

/// Left brace on `{0,…,N−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Brace {
    n: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    neg: Vec<usize>,
    inv: Vec<usize>,
}

fn group_identity(n: usize, op: &[usize]) -> Option<usize> {
    (0..n).find(|&e| (0..n).all(|x| op[e * n + x] == x && op[x * n + e] == x))
}

fn is_group(n: usize, op: &[usize]) -> Option<(usize, Vec<usize>)> {
    let e = group_identity(n, op)?;
    for a in 0..n {
        for b in 0..n {
            let ab = op[a * n + b];
            if ab >= n {
                return None;
            }
            for c in 0..n {
                if op[ab * n + c] != op[a * n + op[b * n + c]] {
                    return None;
                }
            }
        }
    }
    let inv: Option<Vec<usize>> = (0..n).map(|a| (0..n).find(|&b| op[a * n + b] == e)).collect();
    Some((e, inv?))
}

/// First `(a,b,c)` violating `a∘b + a∘c = a∘(b+c) + a`.
pub fn brace_law_witness(n: usize, add: &[usize], mul: &[usize]) -> Option<(usize, usize, usize)> {
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = add[mul[a * n + b] * n + mul[a * n + c]];
                let rhs = add[mul[a * n + add[b * n + c]] * n + a];
                if lhs != rhs {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

impl Brace {
    pub fn from_tables(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Result<Brace> {
        let n = add.len();
        if mul.len() != n || add.iter().chain(&mul).any(|r| r.len() != n) {
            return Err(BraceError::Shape(n));
        }
        let (add, mul): (Vec<usize>, Vec<usize>) = (add.concat(), mul.concat());
        let (zero, neg) = is_group(n, &add).ok_or(BraceError::NotAbelianGroup)?;
        if (0..n).any(|a| (0..n).any(|b| add[a * n + b] != add[b * n + a])) {
            return Err(BraceError::NotAbelianGroup);
        }
        let (one, inv) = is_group(n, &mul).ok_or(BraceError::NotGroup)?;
        if one != zero {
            return Err(BraceError::IdentityMismatch);
        }
        if let Some((a, b, c)) = brace_law_witness(n, &add, &mul) {
            return Err(BraceError::BraceLaw(a, b, c));
        }
        Ok(Brace {
            n,
            add,
            mul,
            zero,
            neg,
            inv,
        })
    }

    fn from_fns(n: usize, add: impl Fn(usize, usize) -> usize, mul: impl Fn(usize, usize) -> usize) -> Result<Brace> {
        let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
            (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect()
        };
        Self::from_tables(table(&add), table(&mul))
    }

    /// `a∘b = a+b` on a finite abelian group.
    pub fn trivial(g: &AbGroup) -> Brace {
        Self::from_fns(
            g.order(),
            |a, b| g.index_of(&g.add(&g.element_at(a), &g.element_at(b))),
            |a, b| g.index_of(&g.add(&g.element_at(a), &g.element_at(b))),
        )
        .expect("trivial braces are braces")
    }

    /// Cyclic brace on `Z_{2^m}` with `a∘b = a + u^a·b`, where `u = −1`
    /// (dihedral adjoint group) or `u = 2^{m−1}−1` (generalized quaternion).
    pub fn cyclic(kind: CyclicKind, m: u32) -> Result<Brace> {
        if !(2..=20).contains(&m) {
            return Err(BraceError::BadParam(format!("m = {m}")));
        }
        let n = 1usize << m;
        let u = match kind {
            CyclicKind::Dihedral => n - 1,
            CyclicKind::Quaternion => (n / 2 - 1) % n,
        };
        Self::from_fns(n, |a, b| (a + b) % n, |a, b| if a % 2 == 0 { (a + b) % n } else { (a + u * b) % n })
    }

    /// `(a,i)∘(b,j) = (a + α^i(b), i+j)` on `G×Z_n`, points `index_of(a)·n + i`.
    /// `alpha` maps coordinate vectors: column `k` is the image of the `k`-th
    /// standard generator.
    pub fn semidirect_trivial(g: &AbGroup, n: usize, alpha: &IntMatrix) -> Result<Brace> {
        let pow = alpha_powers(g, alpha, n)?;
        let size = g.order() * n;
        let split = |x: usize| (g.element_at(x / n), x % n);
        Self::from_fns(
            size,
            |x, y| {
                let ((a, i), (b, j)) = (split(x), split(y));
                g.index_of(&g.add(&a, &b)) * n + (i + j) % n
            },
            |x, y| {
                let ((a, i), (b, j)) = (split(x), split(y));
                g.index_of(&g.add(&a, &pow[i][g.index_of(&b)])) * n + (i + j) % n
            },
        )
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    /// Inverse in `(B,∘)`.
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `λ_a(b) = a∘b − a`.
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        self.sub(self.mul(a, b), a)
    }

    pub fn lambda_map(&self, a: usize) -> Perm {
        Perm::from_images((0..self.n).map(|b| self.lambda(a, b)).collect()).expect("λ_a is bijective")
    }

    /// `{a : λ_a = id}`, checked to be closed under `+`, `−`, `∘` and `∘`-inverse.
    pub fn socle(&self) -> Vec<usize> {
        let soc: Vec<usize> = (0..self.n).filter(|&a| (0..self.n).all(|b| self.lambda(a, b) == b)).collect();
        let set: BTreeSet<usize> = soc.iter().copied().collect();
        debug_assert!(soc.iter().all(|&a| {
            set.contains(&self.neg(a))
                && set.contains(&self.inv(a))
                && soc.iter().all(|&b| set.contains(&self.add(a, b)) && set.contains(&self.mul(a, b)))
        }));
        soc
    }

    /// `λ_{a∘b} = λ_a λ_b` and every `λ_a` additive.
    pub fn lambda_is_action(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| {
                    self.lambda(ab, c) == self.lambda(a, self.lambda(b, c))
                        && self.lambda(a, self.add(b, c)) == self.add(self.lambda(a, b), self.lambda(a, c))
                })
            })
        })
    }

    pub fn lambda_orbit(&self, g: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = (0..self.n).map(|x| self.lambda(x, g)).collect();
        set.into_iter().collect()
    }

    /// Whether `elems` generate `(B,+)`.
    pub fn generates_additively(&self, elems: &[usize]) -> bool {
        let mut seen = vec![false; self.n];
        seen[self.zero] = true;
        let mut stack = vec![self.zero];
        while let Some(x) = stack.pop() {
            for &e in elems {
                let y = self.add(x, e);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// `None` if the brace law holds, else the first failing triple.
pub fn verify_brace(b: &Brace) -> Option<(usize, usize, usize)> {
    brace_law_witness(b.n, &b.add, &b.mul)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicKind {
    Dihedral,
    Quaternion,
}

/// Tables of `α^i` on element indices for `0 ≤ i < n`, after checking that
/// `α` is an automorphism with `α^n = id`.
fn alpha_powers(g: &AbGroup, alpha: &IntMatrix, n: usize) -> Result<Vec<Vec<AbElem>>> {
    let k = g.rank();
    if alpha.rows() != k || alpha.cols() != k || n == 0 {
        return Err(BraceError::BadAutomorphism);
    }
    let images: Vec<AbElem> = (0..k)
        .map(|col| g.elem(&alpha.column(col)))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| BraceError::BadAutomorphism)?;
    for (col, img) in images.iter().enumerate() {
        if !g.is_zero(&g.scale(g.factors()[col], img)) {
            return Err(BraceError::BadAutomorphism);
        }
    }
    let apply = |a: &AbElem| {
        let parts: Vec<AbElem> = a.coords().iter().zip(&images).map(|(&x, im)| g.scale(x, im)).collect();
        g.sum(&parts)
    };
    let once: Vec<AbElem> = g.elements().map(|a| apply(&a)).collect();
    let distinct: BTreeSet<&AbElem> = once.iter().collect();
    if distinct.len() != g.order() {
        return Err(BraceError::BadAutomorphism);
    }
    let mut pow = vec![g.elements().collect::<Vec<_>>()];
    for i in 1..=n {
        let next: Vec<AbElem> = pow[i - 1].iter().map(|x| once[g.index_of(x)].clone()).collect();
        pow.push(next);
    }
    if pow[n].iter().enumerate().any(|(idx, x)| g.index_of(x) != idx) {
        return Err(BraceError::BadOrder);
    }
    pow.truncate(n);
    Ok(pow)
}

/// `Σ_{i=1}^n α^i(b) = 0` for every `b`.
pub fn alpha_sum_vanishes(g: &AbGroup, alpha: &IntMatrix, n: usize) -> Result<bool> {
    let pow = alpha_powers(g, alpha, n)?;
    Ok(g.elements().enumerate().all(|(idx, _)| {
        let terms: Vec<AbElem> = (1..=n).map(|i| pow[i % n][idx].clone()).collect();
        g.is_zero(&g.sum(&terms))
    }))
}

/// `σ_x(y) = (λ_x(g))^− ∘ y`, after checking that the `λ`-orbit of `g`
/// generates `(B,+)`; the result is checked to be uniconnected.
pub fn rump_solution(b: &Brace, g: usize) -> Result<FinSolution> {
    if g >= b.n || !b.generates_additively(&b.lambda_orbit(g)) {
        return Err(BraceError::NotCycleBase(g));
    }
    let s = FinSolution::from_fn(b.n, |x, y| b.mul(b.inv(b.lambda(x, g)), y))?;
    let regular = permutation_group_capped(&s, b.n)
        .map(|grp| grp.order() == b.n)
        .unwrap_or(false);
    debug_assert!(regular, "Rump solution is not uniconnected");
    Ok(s)
}

/// Uniconnected solution on `Z_{2^m}` from the cyclic brace of the given kind, `g = 1`.
pub fn cyclic_brace_family(kind: CyclicKind, m: u32) -> Result<FinSolution> {
    if m < 3 {
        return Err(BraceError::BadParam(format!("m must be at least 3, got {m}")));
    }
    rump_solution(&Brace::cyclic(kind, m)?, 1)
}

/// The 12-element brace `(Z_2×Z_2)⋊Z_3` with `α = [[0,1],[1,1]]`.
pub fn klein_semidirect_brace() -> Brace {
    let g = AbGroup::new(vec![2, 2]).expect("valid");
    let alpha = IntMatrix::from_rows(&[vec![0, 1], vec![1, 1]]).expect("square");
    Brace::semidirect_trivial(&g, 3, &alpha).expect("alpha has order 3")
}

/// Its uniconnected solution with `g = ((1,0),1)`.
pub fn klein_semidirect_solution() -> FinSolution {
    let g = AbGroup::new(vec![2, 2]).expect("valid");
    let gen = g.index_of(&g.elem(&[1, 0]).expect("valid")) * 3 + 1;
    rump_solution(&klein_semidirect_brace(), gen).expect("transitive cycle base")
}

/// Whether a subset of an abelian group generates it (exposed for fixtures).
pub fn generates(g: &AbGroup, elems: &[AbElem]) -> bool {
    subgroup_generated(g, elems).order() == g.order()
}
