//! Finite abelian groups, integer normal forms and finite-index sublattices.
//!
//! All arithmetic is checked 64-bit; anything that would overflow is reported
//! as [`IntLatError::Overflow`] instead of wrapping.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntLatError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("invariant factor must be >= 1, got {0}")]
    BadFactor(i64),
    #[error("coordinate vector has length {got}, group has {expected} factors")]
    Arity { expected: usize, got: usize },
    #[error("matrix shape mismatch")]
    Shape,
    #[error("too large: {0}")]
    TooLarge(String),
}

type Result<T> = std::result::Result<T, IntLatError>;

fn cadd(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(IntLatError::Overflow)
}

fn cmul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(IntLatError::Overflow)
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> IntMatrix {
        let mut m = IntMatrix::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(IntLatError::Shape);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(IntLatError::Shape);
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0i64;
                for k in 0..self.cols {
                    acc = cadd(acc, cmul(self.get(i, k), rhs.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free Bareiss elimination (square matrices only).
    pub fn determinant(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(IntLatError::Shape);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| IntLatError::Overflow)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        for j in 0..self.cols {
            let v = cadd(self.get(dst, j), cmul(k, self.get(src, j))?)?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        for i in 0..self.rows {
            let v = cadd(self.get(i, dst), cmul(k, self.get(i, src))?)?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | …`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<Snf> {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    'outer: for t in 0..r.min(c) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = a.get(i, j);
                    if x != 0 && pivot.map_or(true, |(pi, pj)| x.unsigned_abs() < a.get(pi, pj).unsigned_abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = a.get(t, t);
            let mut dirty = false;
            for i in t + 1..r {
                let q = a.get(i, t) / p;
                if q != 0 {
                    a.add_row(i, t, -q)?;
                    u.add_row(i, t, -q)?;
                }
                dirty |= a.get(i, t) != 0;
            }
            for j in t + 1..c {
                let q = a.get(t, j) / p;
                if q != 0 {
                    a.add_col(j, t, -q)?;
                    v.add_col(j, t, -q)?;
                }
                dirty |= a.get(t, j) != 0;
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| a.get(i, j) % p != 0));
            if let Some(i) = offender {
                a.add_row(t, i, 1)?;
                u.add_row(t, i, 1)?;
                continue;
            }
            if p < 0 {
                a.negate_row(t);
                u.negate_row(t);
            }
            break;
        }
    }
    Ok(Snf { u, d: a, v })
}

/// A finite abelian group `Z_{d_1} × … × Z_{d_k}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbGroup {
    factors: Vec<i64>,
}

/// Element of an [`AbGroup`] as reduced coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbElem(Vec<i64>);

impl AbElem {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Debug for AbElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z_1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z_{d}")).collect();
        write!(f, "{}", parts.join("×"))
    }
}

impl AbGroup {
    pub fn new(factors: Vec<i64>) -> Result<AbGroup> {
        if let Some(&d) = factors.iter().find(|&&d| d < 1) {
            return Err(IntLatError::BadFactor(d));
        }
        factors.iter().try_fold(1i64, |acc, &d| cmul(acc, d))?;
        Ok(AbGroup { factors })
    }

    pub fn cyclic(n: i64) -> AbGroup {
        AbGroup::new(vec![n]).expect("cyclic order must be positive")
    }

    pub fn trivial() -> AbGroup {
        AbGroup { factors: vec![] }
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product::<i64>() as usize
    }

    pub fn zero(&self) -> AbElem {
        AbElem(vec![0; self.factors.len()])
    }

    /// Reduces arbitrary integer coordinates (negative allowed) into the group.
    pub fn elem(&self, coords: &[i64]) -> Result<AbElem> {
        if coords.len() != self.factors.len() {
            return Err(IntLatError::Arity {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        Ok(AbElem(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(x, d)| x.rem_euclid(*d))
                .collect(),
        ))
    }

    /// `i`-th standard generator.
    pub fn basis(&self, i: usize) -> AbElem {
        let mut v = vec![0; self.factors.len()];
        v[i] = 1 % self.factors[i];
        AbElem(v)
    }

    pub fn contains(&self, e: &AbElem) -> bool {
        e.0.len() == self.factors.len() && e.0.iter().zip(&self.factors).all(|(x, d)| 0 <= *x && x < d)
    }

    pub fn add(&self, a: &AbElem, b: &AbElem) -> AbElem {
        AbElem(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &AbElem) -> AbElem {
        AbElem(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn sub(&self, a: &AbElem, b: &AbElem) -> AbElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i64, a: &AbElem) -> AbElem {
        AbElem(
            a.0.iter()
                .zip(&self.factors)
                .map(|(x, d)| ((k.rem_euclid(*d) as i128 * *x as i128) % *d as i128) as i64)
                .collect(),
        )
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a AbElem>) -> AbElem {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    pub fn is_zero(&self, a: &AbElem) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    pub fn element_order(&self, a: &AbElem) -> u64 {
        a.0.iter().zip(&self.factors).fold(1u64, |acc, (x, d)| {
            let o = (*d / gcd_i64(*x, *d)) as u64;
            crate::permkit::lcm(acc, o)
        })
    }

    /// Mixed-radix index, first coordinate most significant.
    pub fn index_of(&self, a: &AbElem) -> usize {
        a.0.iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (x, d)| acc * *d as usize + *x as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> AbElem {
        let mut v = vec![0i64; self.factors.len()];
        for (k, d) in self.factors.iter().enumerate().rev() {
            v[k] = (idx % *d as usize) as i64;
            idx /= *d as usize;
        }
        AbElem(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = AbElem> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Canonical invariant factors `d_1 | d_2 | …` with `d_1 > 1`.
pub fn abelian_iso_type(g: &AbGroup) -> Result<Vec<i64>> {
    let snf = smith_normal_form(&IntMatrix::diagonal(g.factors()))?;
    Ok(snf.diagonal().into_iter().filter(|&d| d != 1).collect())
}

/// A subgroup of an [`AbGroup`] held as an explicit sorted element set.
#[derive(Clone)]
pub struct Subgroup {
    parent: AbGroup,
    elements: Vec<usize>,
    member: Vec<bool>,
    generators: Vec<AbElem>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.elements()).finish()
    }
}

impl Subgroup {
    pub fn trivial(parent: &AbGroup) -> Subgroup {
        subgroup_generated(parent, &[])
    }

    pub fn whole(parent: &AbGroup) -> Subgroup {
        let gens: Vec<AbElem> = (0..parent.rank()).map(|i| parent.basis(i)).collect();
        subgroup_generated(parent, &gens)
    }

    pub fn parent(&self) -> &AbGroup {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn generators(&self) -> &[AbElem] {
        &self.generators
    }

    pub fn element_indices(&self) -> &[usize] {
        &self.elements
    }

    pub fn elements(&self) -> Vec<AbElem> {
        self.elements.iter().map(|&i| self.parent.element_at(i)).collect()
    }

    pub fn contains(&self, a: &AbElem) -> bool {
        self.member[self.parent.index_of(a)]
    }

    /// Least element (by index) of the coset `a + H`.
    pub fn coset_rep(&self, a: &AbElem) -> AbElem {
        self.elements
            .iter()
            .map(|&h| self.parent.index_of(&self.parent.add(a, &self.parent.element_at(h))))
            .min()
            .map(|i| self.parent.element_at(i))
            .expect("subgroup contains zero")
    }

    /// One representative (the least) per coset, in increasing index order.
    pub fn coset_reps(&self) -> Vec<AbElem> {
        let mut seen = vec![false; self.parent.order()];
        let mut reps = Vec::new();
        for i in 0..self.parent.order() {
            if seen[i] {
                continue;
            }
            let a = self.parent.element_at(i);
            for &h in &self.elements {
                seen[self.parent.index_of(&self.parent.add(&a, &self.parent.element_at(h)))] = true;
            }
            reps.push(a);
        }
        reps
    }
}

/// Smallest subgroup containing `gens`, by BFS closure.
pub fn subgroup_generated(g: &AbGroup, gens: &[AbElem]) -> Subgroup {
    let n = g.order();
    let mut member = vec![false; n];
    member[0] = true;
    let mut queue = VecDeque::from([g.zero()]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = g.add(&x, s);
            let iy = g.index_of(&y);
            if !member[iy] {
                member[iy] = true;
                queue.push_back(y);
            }
        }
    }
    let elements = (0..n).filter(|&i| member[i]).collect();
    Subgroup {
        parent: g.clone(),
        elements,
        member,
        generators: gens.to_vec(),
    }
}

/// All subgroups containing `base`, ordered by size then by sorted element set.
pub fn subgroups_containing(base: &Subgroup, cap: usize) -> Result<Vec<Subgroup>> {
    let g = base.parent().clone();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut found = vec![base.clone()];
    seen.insert(base.elements.clone());
    let mut cursor = 0;
    while cursor < found.len() {
        let h = found[cursor].clone();
        cursor += 1;
        for rep in h.coset_reps() {
            if h.contains(&rep) {
                continue;
            }
            let mut gens = h.generators.clone();
            gens.push(rep);
            let bigger = subgroup_generated(&g, &gens);
            if seen.insert(bigger.elements.clone()) {
                if found.len() >= cap {
                    return Err(IntLatError::TooLarge(format!("more than {cap} subgroups")));
                }
                found.push(bigger);
            }
        }
    }
    found.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    Ok(found)
}

/// Surjection `G → G/H` realised through a Smith normal form.
#[derive(Clone, Debug)]
pub struct Projection {
    source: AbGroup,
    target: AbGroup,
    rows: Vec<Vec<i64>>,
}

impl Projection {
    pub fn source(&self) -> &AbGroup {
        &self.source
    }

    pub fn target(&self) -> &AbGroup {
        &self.target
    }

    pub fn apply(&self, a: &AbElem) -> AbElem {
        let coords: Vec<i64> = self
            .rows
            .iter()
            .zip(self.target.factors())
            .map(|(row, d)| {
                let s: i128 = row
                    .iter()
                    .zip(a.coords())
                    .map(|(u, x)| *u as i128 * *x as i128)
                    .sum();
                s.rem_euclid(*d as i128) as i64
            })
            .collect();
        AbElem(coords)
    }
}

/// `G/H` in invariant-factor form together with the projection map.
pub fn quotient_group(g: &AbGroup, h: &Subgroup) -> Result<(AbGroup, Projection)> {
    let k = g.rank();
    let gens = h.generators();
    let mut rel = IntMatrix::zeros(k, k + gens.len());
    for (i, &d) in g.factors().iter().enumerate() {
        rel.set(i, i, d);
    }
    for (j, s) in gens.iter().enumerate() {
        for (i, &x) in s.coords().iter().enumerate() {
            rel.set(i, k + j, x);
        }
    }
    let snf = smith_normal_form(&rel)?;
    let diag = snf.diagonal();
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
    let target = AbGroup::new(keep.iter().map(|&i| diag[i]).collect())?;
    let rows = keep.iter().map(|&i| snf.u.row(i)).collect();
    Ok((
        target.clone(),
        Projection {
            source: g.clone(),
            target,
            rows,
        },
    ))
}

/// A sublattice `K ≤ Z^r` of finite index, in column Hermite normal form,
/// with its quotient `Z^r/K` and the images of the standard basis there.
///
/// Normal form: upper triangular, positive diagonal, and every entry to the
/// right of the diagonal in row `i` lies in `[0, hnf[i][i])`.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    rank: usize,
    hnf: IntMatrix,
    quotient: AbGroup,
    gen_images: Vec<AbElem>,
}

impl LatticeQuotient {
    pub fn from_hnf(hnf: IntMatrix) -> Result<LatticeQuotient> {
        let rank = hnf.rows();
        if hnf.cols() != rank {
            return Err(IntLatError::Shape);
        }
        let snf = smith_normal_form(&hnf)?;
        let diag = snf.diagonal();
        let keep: Vec<usize> = (0..rank).filter(|&i| diag[i] != 1).collect();
        let quotient = AbGroup::new(keep.iter().map(|&i| diag[i]).collect())?;
        let gen_images = (0..rank)
            .map(|col| {
                let coords: Vec<i64> = keep.iter().map(|&i| snf.u.get(i, col)).collect();
                quotient.elem(&coords)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeQuotient {
            rank,
            hnf,
            quotient,
            gen_images,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    pub fn quotient(&self) -> &AbGroup {
        &self.quotient
    }

    pub fn gen_images(&self) -> &[AbElem] {
        &self.gen_images
    }

    pub fn index(&self) -> usize {
        self.quotient.order()
    }

    /// Short stable hex digest of the HNF entries, used in file names.
    pub fn hnf_digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("{}:{:?}", self.rank, self.hnf.to_rows()).as_bytes());
        hasher.finalize()[..4].iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn ordered_factorizations(n: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if n == 1 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for d in 1..=n {
        if n % d == 0 {
            for mut rest in ordered_factorizations(n / d, parts - 1) {
                rest.insert(0, d);
                out.push(rest);
            }
        }
    }
    out
}

/// All sublattices of `Z^rank` of index `index`, in lexicographic order of
/// (diagonal, off-diagonal entries read row by row).
pub fn sublattices_of_index(rank: usize, index: usize) -> Result<Vec<LatticeQuotient>> {
    let mut out = Vec::new();
    for diag in ordered_factorizations(index as i64, rank) {
        let slots: Vec<(usize, usize)> = (0..rank)
            .flat_map(|i| (i + 1..rank).map(move |j| (i, j)))
            .collect();
        let mut counter = vec![0i64; slots.len()];
        loop {
            let mut m = IntMatrix::diagonal(&diag);
            for (&(i, j), &v) in slots.iter().zip(&counter) {
                m.set(i, j, v);
            }
            out.push(LatticeQuotient::from_hnf(m)?);
            // odometer, last slot fastest
            let mut k = slots.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                counter[k] += 1;
                if counter[k] < diag[slots[k].0] {
                    break;
                }
                counter[k] = 0;
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX || slots.is_empty() {
                break;
            }
        }
    }
    Ok(out)
}

/// Iso type key used for grouping, e.g. `[2, 2]` for `Z_2²`.
pub fn iso_type_label(factors: &[i64]) -> String {
    if factors.is_empty() {
        return "Z_1".to_string();
    }
    let set: BTreeSet<i64> = factors.iter().copied().collect();
    set.iter()
        .map(|d| {
            let k = factors.iter().filter(|&&x| x == *d).count();
            if k == 1 {
                format!("Z_{d}")
            } else {
                format!("Z_{d}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("×")
}
