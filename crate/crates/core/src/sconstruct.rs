//! The solutions `S(G×Z_n, c)` and their quotient-style twisted variants.
//!
//! Points of `G×Z_n` are numbered `index_of(a)·n + i`, group element major.
//! Subscripts of `c` are always reduced with `rem_euclid`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{abelian_iso_type, subgroup_generated, AbElem, AbGroup, IntLatError};
use crate::permkit::DEFAULT_CAP;
use crate::ybecore::{
    displacement_group, is_indecomposable, is_mpl2_local, permutation_group, FinSolution, TwoReductive, YbeError,
};

/// Largest point count a builder will materialize.
pub const MAX_POINTS: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Lattice(#[from] IntLatError),
    #[error(transparent)]
    Solution(#[from] YbeError),
}

pub type Result<T> = std::result::Result<T, SError>;

/// Parameters `(G, n, c)` of `S(G×Z_n, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SParams {
    group: AbGroup,
    n: usize,
    c: Vec<AbElem>,
}

/// `{"factors":[...], "n":N, "c":[[...],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SParamsJson {
    pub factors: Vec<i64>,
    pub n: usize,
    pub c: Vec<Vec<i64>>,
}

impl SParams {
    pub fn new(group: AbGroup, n: usize, c: Vec<AbElem>) -> Result<SParams> {
        if n == 0 {
            return Err(SError::BadParams("n must be at least 1".into()));
        }
        if c.len() != n {
            return Err(SError::BadParams(format!("expected {n} constants, got {}", c.len())));
        }
        if let Some(bad) = c.iter().find(|x| !group.contains(x)) {
            return Err(SError::BadParams(format!("{bad:?} is not an element of {group:?}")));
        }
        if !group.is_zero(&c[0]) {
            return Err(SError::BadParams("c_0 must be 0".into()));
        }
        if subgroup_generated(&group, &c).order() != group.order() {
            return Err(SError::BadParams("the constants do not generate the group".into()));
        }
        Ok(SParams { group, n, c })
    }

    /// Convenience constructor from raw coordinates (reduced into the group).
    pub fn from_raw(factors: &[i64], n: usize, c: &[Vec<i64>]) -> Result<SParams> {
        let group = AbGroup::new(factors.to_vec())?;
        let c = c.iter().map(|x| group.elem(x)).collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(group, n, c)
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> &[AbElem] {
        &self.c
    }

    /// `c_k` with `k` taken modulo `n`.
    pub fn c_at(&self, k: i64) -> &AbElem {
        &self.c[k.rem_euclid(self.n as i64) as usize]
    }

    pub fn size(&self) -> usize {
        self.group.order() * self.n
    }

    pub fn point(&self, a: &AbElem, i: usize) -> usize {
        self.group.index_of(a) * self.n + i
    }

    pub fn unpoint(&self, x: usize) -> (AbElem, usize) {
        (self.group.element_at(x / self.n), x % self.n)
    }

    pub fn to_json(&self) -> SParamsJson {
        SParamsJson {
            factors: self.group.factors().to_vec(),
            n: self.n,
            c: self.c.iter().map(|x| x.coords().to_vec()).collect(),
        }
    }

    pub fn from_json(j: &SParamsJson) -> Result<SParams> {
        Self::from_raw(&j.factors, j.n, &j.c)
    }
}

/// Solution on `A×Z_m` with
/// `σ_{(a,i)}((b,j)) = (b + c̄_{i−j−1} − c̄_{−j−1} + [j+1 = m]·r̄, j+1 mod m)`.
///
/// With `r̄ = 0` this is exactly `S(A×Z_m, c̄)`; a nonzero `r̄` is how the
/// quotient by a congruence with twist `r` looks on representatives `0 ≤ j < m`.
pub fn twisted_solution(a: &AbGroup, m: usize, cbar: &[AbElem], rbar: &AbElem) -> Result<FinSolution> {
    twisted_sigma(a, m, cbar, rbar).and_then(|rows| Ok(FinSolution::from_sigma(rows)?))
}

/// The raw `σ` table of [`twisted_solution`], without validation.
pub fn twisted_sigma(a: &AbGroup, m: usize, cbar: &[AbElem], rbar: &AbElem) -> Result<Vec<Vec<usize>>> {
    if m == 0 || cbar.len() != m {
        return Err(SError::BadParams("need exactly m constants".into()));
    }
    let size = a.order() * m;
    if size > MAX_POINTS {
        return Err(SError::TooLarge(format!("{size} points exceeds {MAX_POINTS}")));
    }
    let mi = m as i64;
    let at = |k: i64| &cbar[k.rem_euclid(mi) as usize];
    let elems: Vec<AbElem> = a.elements().collect();
    let mut rows = vec![vec![0usize; size]; size];
    for i in 0..mi {
        for j in 0..mi {
            let mut shift = a.sub(at(i - j - 1), at(-j - 1));
            if j + 1 == mi {
                shift = a.add(&shift, rbar);
            }
            let jn = ((j + 1) % mi) as usize;
            for (bi, b) in elems.iter().enumerate() {
                let target = a.index_of(&a.add(b, &shift)) * m + jn;
                for ai in 0..a.order() {
                    rows[ai * m + i as usize][bi * m + j as usize] = target;
                }
            }
        }
    }
    Ok(rows)
}

pub fn build_solution(p: &SParams) -> Result<FinSolution> {
    twisted_solution(&p.group, p.n, &p.c, &p.group.zero())
}

/// `c_{i,j} = c_{i−j} − c_{−j}`, indexed `[i][j]`.
pub fn c_matrix(p: &SParams) -> Vec<Vec<AbElem>> {
    let n = p.n as i64;
    (0..n)
        .map(|i| (0..n).map(|j| p.group.sub(p.c_at(i - j), p.c_at(-j))).collect())
        .collect()
}

/// `L_{(a,i)}((b,j)) = (b + c_{i,j}, j)`, `R_{(a,i)}((b,j)) = (b − c_{i,j}, j)`.
pub fn two_reductive_layer(p: &SParams) -> Result<TwoReductive> {
    let g = &p.group;
    let cm = c_matrix(p);
    for j in 0..p.n {
        debug_assert_eq!(&cm[j][0], &p.c[j]);
        debug_assert!(g.is_zero(&cm[0][j]));
    }
    let size = p.size();
    if size > MAX_POINTS {
        return Err(SError::TooLarge(format!("{size} points exceeds {MAX_POINTS}")));
    }
    let mut l = vec![vec![0; size]; size];
    let mut r = vec![vec![0; size]; size];
    for x in 0..size {
        let (_, i) = p.unpoint(x);
        for y in 0..size {
            let (b, j) = p.unpoint(y);
            l[x][y] = p.point(&g.add(&b, &cm[i][j]), j);
            r[x][y] = p.point(&g.sub(&b, &cm[i][j]), j);
        }
    }
    Ok(TwoReductive::new(l, r)?)
}

/// `c_{i mod n} = i·c_1` for all integers `i` (checked for `0 ≤ i ≤ n`).
pub fn is_abelian_params(p: &SParams) -> bool {
    if p.n == 1 {
        return true;
    }
    let c1 = &p.c[1];
    (0..=p.n).all(|i| p.c_at(i as i64) == &p.group.scale(i as i64, c1))
}

/// Enumerates homomorphisms `G → G'` by the images of the standard generators
/// and reports whether one is bijective and maps every `c_i` to `c'_i`.
pub fn params_isomorphic(p1: &SParams, p2: &SParams) -> Result<bool> {
    params_isomorphic_capped(p1, p2, DEFAULT_CAP)
}

pub fn params_isomorphic_capped(p1: &SParams, p2: &SParams, cap: usize) -> Result<bool> {
    if p1.n != p2.n || p1.group.order() != p2.group.order() {
        return Ok(false);
    }
    let (g, h) = (&p1.group, &p2.group);
    if abelian_iso_type(g)? != abelian_iso_type(h)? {
        return Ok(false);
    }
    let candidates: Vec<Vec<AbElem>> = g
        .factors()
        .iter()
        .map(|&d| h.elements().filter(|x| h.is_zero(&h.scale(d, x))).collect())
        .collect();
    let total = candidates.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
    match total {
        Some(t) if t <= cap => {}
        _ => return Err(SError::TooLarge(format!("more than {cap} generator assignments"))),
    }
    let image = |choice: &[usize], a: &AbElem| {
        let parts: Vec<AbElem> = a
            .coords()
            .iter()
            .enumerate()
            .map(|(k, &x)| h.scale(x, &candidates[k][choice[k]]))
            .collect();
        h.sum(&parts)
    };
    let mut choice = vec![0usize; candidates.len()];
    loop {
        if p1.c.iter().zip(&p2.c).all(|(a, b)| &image(&choice, a) == b) {
            let mut hit = vec![false; h.order()];
            let bijective = g.elements().all(|a| !std::mem::replace(&mut hit[h.index_of(&image(&choice, &a))], true));
            if bijective {
                return Ok(true);
            }
        }
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(false);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Free `Z_k`-module of rank `r` with `n = 2r`, `c_i = e_1+…+e_i` and
/// `c_{i+r} = e_{i+1}+…+e_r`.
pub fn module_construction(k: i64, r: usize) -> Result<SParams> {
    if k < 2 || r < 1 {
        return Err(SError::BadParams("need k >= 2 and r >= 1".into()));
    }
    let g = AbGroup::new(vec![k; r])?;
    let mut c = vec![g.zero(); 2 * r];
    for i in 1..=r {
        let head: Vec<AbElem> = (0..i).map(|t| g.basis(t)).collect();
        c[i] = g.sum(&head);
        let tail: Vec<AbElem> = (i..r).map(|t| g.basis(t)).collect();
        c[(i + r) % (2 * r)] = g.sum(&tail);
    }
    SParams::new(g, 2 * r, c)
}

/// `Dis ∩ ⟨σ_0⟩ = {id}` and `G(X)_0 ⊆ Dis`, the criterion for being
/// isomorphic to some `S(G×Z_n, c)`.
pub fn is_s_representable(s: &FinSolution) -> Result<bool> {
    if s.size() >= 2 && !is_mpl2_local(s) {
        return Err(YbeError::NotLevel2.into());
    }
    if !is_indecomposable(s) {
        return Err(SError::BadParams("solution is decomposable".into()));
    }
    let g = permutation_group(s)?;
    let dis = displacement_group(s)?;
    let pi = s.sigma_perm(0);
    let order = pi.order() as i64;
    let trivial_meet = (1..order).all(|k| !dis.contains(&pi.pow(k)));
    let stab_inside = g.stabilizer(0).iter().all(|x| dis.contains(x));
    Ok(trivial_meet && stab_inside)
}

/// Every generating `c` with `c_0 = 0` for the given group and `n`.
pub fn all_params(group: &AbGroup, n: usize) -> Vec<SParams> {
    let elems: Vec<AbElem> = group.elements().collect();
    let mut out = Vec::new();
    let slots = n.saturating_sub(1);
    let mut idx = vec![0usize; slots];
    loop {
        let mut c = vec![group.zero()];
        c.extend(idx.iter().map(|&k| elems[k].clone()));
        if let Ok(p) = SParams::new(group.clone(), n, c) {
            out.push(p);
        }
        let mut k = slots;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < elems.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Independent check that `c_i ↦ c'_i` extends to a group isomorphism,
/// by propagating along the Cayley graph of the `c_i`.
pub fn params_isomorphic_by_extension(p1: &SParams, p2: &SParams) -> bool {
    if p1.n != p2.n || p1.group.order() != p2.group.order() {
        return false;
    }
    let (g, h) = (&p1.group, &p2.group);
    let mut map: Vec<Option<usize>> = vec![None; g.order()];
    map[0] = Some(0);
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        let (gx, hx) = (g.element_at(x), h.element_at(map[x].unwrap()));
        for (ci, di) in p1.c.iter().zip(&p2.c) {
            let y = g.index_of(&g.add(&gx, ci));
            let fy = h.index_of(&h.add(&hx, di));
            match map[y] {
                None => {
                    map[y] = Some(fy);
                    stack.push(y);
                }
                Some(v) if v != fy => return false,
                _ => {}
            }
        }
    }
    let mut hit = vec![false; h.order()];
    map.iter().all(|m| m.is_some_and(|v| !std::mem::replace(&mut hit[v], true)))
}

/// Group-theoretic facts about a built solution, checked against the theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SReport {
    pub size: usize,
    pub group_order: usize,
    pub dis_order: usize,
    pub cycle_lengths_all_n: bool,
    pub semidirect_order: bool,
    pub dis_quotient_order: usize,
}

pub fn s_report(p: &SParams) -> Result<SReport> {
    let s = build_solution(p)?;
    let g = permutation_group(&s)?;
    let dis = displacement_group(&s)?;
    let cycle_lengths_all_n = (0..s.size()).all(|x| s.sigma_perm(x).cycle_type().iter().all(|&l| l == p.n));
    let stab = dis.stabilizer(0).len();
    Ok(SReport {
        size: s.size(),
        group_order: g.order(),
        dis_order: dis.order(),
        cycle_lengths_all_n,
        semidirect_order: g.order() == dis.order() * p.n,
        dis_quotient_order: dis.order() / stab,
    })
}
