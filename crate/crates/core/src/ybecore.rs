//! Finite involutive non-degenerate solutions and the oracles run on them.
//!
//! A solution is stored by its `σ` table only; `τ` is always derived through
//! involutivity, `τ_y(x) = σ^{-1}_{σ_x(y)}(x)`, so the two tables can never
//! disagree.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permkit::{PermError, PermGroup, Perm, DEFAULT_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum YbeError {
    #[error("sigma table is not square")]
    NotSquare,
    #[error("row sigma_{0} is not a permutation")]
    NotPermutationRow(usize),
    #[error("r is not involutive at ({0}, {1})")]
    NotInvolutive(usize, usize),
    #[error("braid relation fails at ({0}, {1}, {2})")]
    BraidFails(usize, usize, usize),
    #[error("tau_{0} is not a permutation")]
    DegenerateTau(usize),
    #[error("supplied tau disagrees with the derived one at ({0}, {1})")]
    TauMismatch(usize, usize),
    #[error("retraction classes from tau and from sigma differ")]
    RetractMismatch,
    #[error("induced retraction table is inconsistent")]
    RetractIllFormed,
    #[error("solution is not a multipermutation solution")]
    NotMultipermutation,
    #[error("solution has multipermutation level above 2")]
    NotLevel2,
    #[error("no point a with L_a = id")]
    NoUnitRow,
    #[error("pi violates the compatibility condition at ({0}, {1})")]
    PiIncompatible(usize, usize),
    #[error("L table is not 2-reductive at ({0}, {1})")]
    NotTwoReductive(usize, usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("partition has length {got}, solution has size {expected}")]
    BadPartition { expected: usize, got: usize },
    #[error("partition is not a congruence")]
    NotCongruence,
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("malformed solution file: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, YbeError>;

/// `{"size": N, "sigma": [[...], ...]}` with rows in point order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub size: usize,
    pub sigma: Vec<Vec<usize>>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSolution {
    n: usize,
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    tau: Vec<usize>,
}

impl std::fmt::Debug for FinSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinSolution")
            .field("size", &self.n)
            .field("sigma", &self.sigma_rows())
            .finish()
    }
}

fn is_permutation(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    row.iter().all(|&x| x < row.len() && !std::mem::replace(&mut seen[x], true))
}

/// Exhaustive braid check on raw `σ`/`τ` tables (`tau[y*n+x] = τ_y(x)`).
pub fn braid_witness_tables(n: usize, sigma: &[usize], tau: &[usize]) -> Option<(usize, usize, usize)> {
    let r = |x: usize, y: usize| (sigma[x * n + y], tau[y * n + x]);
    for x in 0..n {
        for y in 0..n {
            let (a, b) = r(x, y);
            for z in 0..n {
                let (y1, z1) = r(y, z);
                let (x2, y2) = r(x, y1);
                let lhs = (x2, r(y2, z1));
                let (b1, c1) = r(b, z);
                let rhs = (r(a, b1), c1);
                if lhs.0 != rhs.0 .0 || lhs.1 .0 != rhs.0 .1 || lhs.1 .1 != rhs.1 {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

impl FinSolution {
    /// Validates a `σ` table and derives `τ`.
    pub fn from_sigma(rows: Vec<Vec<usize>>) -> Result<FinSolution> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(YbeError::NotSquare);
        }
        for (x, row) in rows.iter().enumerate() {
            if !is_permutation(row) {
                return Err(YbeError::NotPermutationRow(x));
            }
        }
        let sigma: Vec<usize> = rows.concat();
        Self::from_flat(n, sigma)
    }

    fn from_flat(n: usize, sigma: Vec<usize>) -> Result<FinSolution> {
        let mut sigma_inv = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                sigma_inv[x * n + sigma[x * n + y]] = y;
            }
        }
        let mut tau = vec![0; n * n];
        for y in 0..n {
            for x in 0..n {
                tau[y * n + x] = sigma_inv[sigma[x * n + y] * n + x];
            }
        }
        for y in 0..n {
            if !is_permutation(&tau[y * n..(y + 1) * n]) {
                return Err(YbeError::DegenerateTau(y));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let (u, v) = (sigma[x * n + y], tau[y * n + x]);
                if (sigma[u * n + v], tau[v * n + u]) != (x, y) {
                    return Err(YbeError::NotInvolutive(x, y));
                }
            }
        }
        if let Some((x, y, z)) = braid_witness_tables(n, &sigma, &tau) {
            return Err(YbeError::BraidFails(x, y, z));
        }
        Ok(FinSolution {
            n,
            sigma,
            sigma_inv,
            tau,
        })
    }

    /// Like [`from_sigma`](Self::from_sigma) but also compares a supplied `τ`
    /// table (`tau_rows[y][x] = τ_y(x)`) against the derived one.
    pub fn from_sigma_tau(rows: Vec<Vec<usize>>, tau_rows: &[Vec<usize>]) -> Result<FinSolution> {
        let s = Self::from_sigma(rows)?;
        if tau_rows.len() != s.n || tau_rows.iter().any(|r| r.len() != s.n) {
            return Err(YbeError::NotSquare);
        }
        for y in 0..s.n {
            for x in 0..s.n {
                if tau_rows[y][x] != s.tau(y, x) {
                    return Err(YbeError::TauMismatch(y, x));
                }
            }
        }
        Ok(s)
    }

    /// Builds a solution from `σ_x(y) = f(x, y)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<FinSolution> {
        Self::from_sigma((0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect())
    }

    /// `σ_x = id` for every `x`.
    pub fn trivial(n: usize) -> FinSolution {
        Self::permutation_solution(&Perm::identity(n))
    }

    /// `σ_x = p` for every `x`.
    pub fn permutation_solution(p: &Perm) -> FinSolution {
        let n = p.degree();
        let row = p.images();
        Self::from_sigma(vec![row; n]).expect("permutation solutions are solutions")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn sigma(&self, x: usize, y: usize) -> usize {
        self.sigma[x * self.n + y]
    }

    #[inline]
    pub fn sigma_inv(&self, x: usize, y: usize) -> usize {
        self.sigma_inv[x * self.n + y]
    }

    /// `τ_y(x)`.
    #[inline]
    pub fn tau(&self, y: usize, x: usize) -> usize {
        self.tau[y * self.n + x]
    }

    pub fn r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.sigma(x, y), self.tau(y, x))
    }

    pub fn sigma_row(&self, x: usize) -> &[usize] {
        &self.sigma[x * self.n..(x + 1) * self.n]
    }

    pub fn sigma_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| self.sigma_row(x).to_vec()).collect()
    }

    pub fn tau_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|y| self.tau[y * self.n..(y + 1) * self.n].to_vec())
            .collect()
    }

    pub fn sigma_perm(&self, x: usize) -> Perm {
        Perm::from_images(self.sigma_row(x).to_vec()).expect("rows are permutations")
    }

    pub fn tau_perm(&self, y: usize) -> Perm {
        Perm::from_images(self.tau[y * self.n..(y + 1) * self.n].to_vec()).expect("tau rows are permutations")
    }

    pub fn sigma_perms(&self) -> Vec<Perm> {
        (0..self.n).map(|x| self.sigma_perm(x)).collect()
    }

    /// Relabels points: point `x` becomes `phi[x]`.
    pub fn relabel(&self, phi: &[usize]) -> Result<FinSolution> {
        let n = self.n;
        if phi.len() != n || !is_permutation(phi) {
            return Err(YbeError::BadPartition { expected: n, got: phi.len() });
        }
        let mut rows = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                rows[phi[x]][phi[y]] = phi[self.sigma(x, y)];
            }
        }
        Self::from_sigma(rows)
    }

    pub fn to_json(&self) -> SolutionJson {
        SolutionJson {
            size: self.n,
            sigma: self.sigma_rows(),
        }
    }

    pub fn from_json(j: &SolutionJson) -> Result<FinSolution> {
        if j.sigma.len() != j.size {
            return Err(YbeError::Json(format!(
                "size {} but {} rows",
                j.size,
                j.sigma.len()
            )));
        }
        Self::from_sigma(j.sigma.clone())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data serializes")
    }

    pub fn from_json_str(text: &str) -> Result<FinSolution> {
        let j: SolutionJson = serde_json::from_str(text).map_err(|e| YbeError::Json(e.to_string()))?;
        Self::from_json(&j)
    }
}

/// `None` if the braid relation holds, else the first failing triple.
pub fn verify_braid(s: &FinSolution) -> Option<(usize, usize, usize)> {
    braid_witness_tables(s.n, &s.sigma, &s.tau)
}

pub fn is_square_free(s: &FinSolution) -> bool {
    (0..s.n).all(|x| s.sigma(x, x) == x && s.tau(x, x) == x)
}

/// Labels `0, 1, …` in order of first appearance for equal keys.
fn classes_by<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    keys.map(|k| {
        let next = ids.len();
        *ids.entry(k).or_insert(next)
    })
    .collect()
}

/// Class labels of `x ~ y ⇔ σ_x = σ_y`.
pub fn sigma_classes(s: &FinSolution) -> Vec<usize> {
    classes_by((0..s.n).map(|x| s.sigma_row(x)))
}

/// Retraction: classes of `τ_x = τ_y`, checked against `σ_x = σ_y`.
pub fn retract(s: &FinSolution) -> Result<(FinSolution, Vec<usize>)> {
    let n = s.n;
    let by_tau = classes_by((0..n).map(|x| &s.tau[x * n..(x + 1) * n]));
    if by_tau != sigma_classes(s) {
        return Err(YbeError::RetractMismatch);
    }
    let k = by_tau.iter().copied().max().map_or(0, |m| m + 1);
    let mut reps = vec![usize::MAX; k];
    for x in 0..n {
        if reps[by_tau[x]] == usize::MAX {
            reps[by_tau[x]] = x;
        }
    }
    let mut rows = vec![vec![usize::MAX; k]; k];
    for x in 0..n {
        for y in 0..n {
            let v = by_tau[s.sigma(x, y)];
            let slot = &mut rows[by_tau[x]][by_tau[y]];
            if *slot == usize::MAX {
                *slot = v;
            } else if *slot != v {
                return Err(YbeError::RetractIllFormed);
            }
        }
    }
    let ret = FinSolution::from_sigma(rows).map_err(|_| YbeError::RetractIllFormed)?;
    Ok((ret, by_tau))
}

/// Number of retractions needed to reach one point.
pub fn multipermutation_level(s: &FinSolution) -> Result<usize> {
    let mut cur = s.clone();
    let mut level = 0;
    while cur.n > 1 {
        let (next, _) = retract(&cur)?;
        if next.n == cur.n {
            return Err(YbeError::NotMultipermutation);
        }
        cur = next;
        level += 1;
    }
    Ok(level)
}

/// `σ_{σ_y(x)} = σ_{σ_z(x)}` for all `x, y, z`.
pub fn is_mpl2_local(s: &FinSolution) -> bool {
    let cls = sigma_classes(s);
    (0..s.n).all(|x| {
        let first = cls[s.sigma(0, x)];
        (0..s.n).all(|y| cls[s.sigma(y, x)] == first)
    })
}

/// `σ_{σ_y(x)} = σ_x` for all `x, y`.
pub fn is_2_reductive(s: &FinSolution) -> bool {
    let cls = sigma_classes(s);
    (0..s.n).all(|x| (0..s.n).all(|y| cls[s.sigma(y, x)] == cls[x]))
}

fn level_at_most_2(s: &FinSolution) -> bool {
    s.n < 2 || is_mpl2_local(s)
}

/// A 2-reductive solution given by its `L` and `R` tables
/// (`l[x][y] = L_x(y)`, `r[y][x] = R_y(x)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoReductive {
    n: usize,
    l: Vec<Vec<usize>>,
    r: Vec<Vec<usize>>,
}

impl TwoReductive {
    pub fn new(l: Vec<Vec<usize>>, r: Vec<Vec<usize>>) -> Result<TwoReductive> {
        let n = l.len();
        let sol = FinSolution::from_sigma_tau(l.clone(), &r)?;
        let t = TwoReductive { n, l, r };
        if let Some((x, y)) = t.reductive_witness() {
            return Err(YbeError::NotTwoReductive(x, y));
        }
        debug_assert!(is_2_reductive(&sol));
        Ok(t)
    }

    /// Only `L` given; `R` is derived through involutivity.
    pub fn from_l(l: Vec<Vec<usize>>) -> Result<TwoReductive> {
        let sol = FinSolution::from_sigma(l.clone())?;
        Self::new(l, sol.tau_rows())
    }

    fn reductive_witness(&self) -> Option<(usize, usize)> {
        for x in 0..self.n {
            for y in 0..self.n {
                if self.l[self.l[y][x]] != self.l[x] {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn l(&self, x: usize, y: usize) -> usize {
        self.l[x][y]
    }

    pub fn r(&self, y: usize, x: usize) -> usize {
        self.r[y][x]
    }

    pub fn l_rows(&self) -> &[Vec<usize>] {
        &self.l
    }

    pub fn r_rows(&self) -> &[Vec<usize>] {
        &self.r
    }

    pub fn l_perm(&self, x: usize) -> Perm {
        Perm::from_images(self.l[x].clone()).expect("validated")
    }

    pub fn as_solution(&self) -> FinSolution {
        FinSolution::from_sigma(self.l.clone()).expect("validated")
    }
}

/// The `σ_e^{-1}`-isotope: `L_x = σ_xσ_e^{-1}`, `R_y = σ_eτ_{σ_e^{-1}(y)}`.
pub fn isotope(s: &FinSolution, e: usize) -> Result<TwoReductive> {
    if !level_at_most_2(s) {
        return Err(YbeError::NotLevel2);
    }
    let n = s.n;
    let l: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| s.sigma(x, s.sigma_inv(e, y))).collect())
        .collect();
    let r: Vec<Vec<usize>> = (0..n)
        .map(|y| {
            let t = s.sigma_inv(e, y);
            (0..n).map(|x| s.sigma(e, s.tau(t, x))).collect()
        })
        .collect();
    TwoReductive::new(l, r)
}

/// `σ_x = L_x∘π`, after checking `L_{π(y)}πL_x = L_{π(x)}πL_y`.
/// The resulting `τ` is also checked against `τ_y = π^{-1}R_{π(y)}`.
pub fn assemble(t: &TwoReductive, pi: &Perm) -> Result<FinSolution> {
    let n = t.n;
    if pi.degree() != n {
        return Err(YbeError::NotSquare);
    }
    if !(0..n).any(|a| (0..n).all(|y| t.l[a][y] == y)) {
        return Err(YbeError::NoUnitRow);
    }
    for x in 0..n {
        for y in x + 1..n {
            let (px, py) = (pi.apply(x), pi.apply(y));
            if (0..n).any(|z| t.l[py][pi.apply(t.l[x][z])] != t.l[px][pi.apply(t.l[y][z])]) {
                return Err(YbeError::PiIncompatible(x, y));
            }
        }
    }
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| t.l[x][pi.apply(y)]).collect())
        .collect();
    let pinv = pi.inverse();
    let tau: Vec<Vec<usize>> = (0..n)
        .map(|y| (0..n).map(|x| pinv.apply(t.r[pi.apply(y)][x])).collect())
        .collect();
    FinSolution::from_sigma_tau(rows, &tau)
}

/// `π = σ_base`, `ĩ = π^i(base)`, `L_ĩ = σ_ĩπ^{-1}` and `D_ĩ = L_ĩL_{ĩ-1}^{-1}`,
/// indexed over one period of the `π`-orbit of the base point.
#[derive(Clone, Debug)]
pub struct BasepointFrame {
    pub base: usize,
    pub pi: Perm,
    pub tilde: Vec<usize>,
    pub lseq: Vec<Perm>,
    pub dseq: Vec<Perm>,
}

pub fn basepoint_frame(s: &FinSolution, base: usize) -> Result<BasepointFrame> {
    if !level_at_most_2(s) {
        return Err(YbeError::NotLevel2);
    }
    let pi = s.sigma_perm(base);
    let pinv = pi.inverse();
    let mut tilde = vec![base];
    loop {
        let next = pi.apply(*tilde.last().unwrap());
        if next == base {
            break;
        }
        tilde.push(next);
    }
    let lseq: Vec<Perm> = tilde.iter().map(|&x| s.sigma_perm(x).compose(&pinv)).collect();
    let k = tilde.len();
    let dseq: Vec<Perm> = (0..k)
        .map(|i| lseq[i].compose(&lseq[(i + k - 1) % k].inverse()))
        .collect();
    debug_assert!(lseq[0].is_identity());
    Ok(BasepointFrame {
        base,
        pi,
        tilde,
        lseq,
        dseq,
    })
}

pub fn permutation_group(s: &FinSolution) -> Result<PermGroup> {
    permutation_group_capped(s, DEFAULT_CAP)
}

pub fn permutation_group_capped(s: &FinSolution, cap: usize) -> Result<PermGroup> {
    Ok(PermGroup::generate(s.n, s.sigma_perms(), cap)?)
}

/// `⟨σ_xσ_e^{-1}⟩` with `e = 0`.
pub fn displacement_group(s: &FinSolution) -> Result<PermGroup> {
    displacement_group_capped(s, DEFAULT_CAP)
}

pub fn displacement_group_capped(s: &FinSolution, cap: usize) -> Result<PermGroup> {
    if s.n == 0 {
        return Ok(PermGroup::generate(0, vec![], cap)?);
    }
    let einv = s.sigma_perm(0).inverse();
    let gens = (0..s.n).map(|x| s.sigma_perm(x).compose(&einv)).collect();
    Ok(PermGroup::generate(s.n, gens, cap)?)
}

/// `{Πσ_{x_i}^{ε_i} : Σε_i = 0}`, computed independently of the displacement
/// generators: close `⟨(σ_x, 1)⟩` inside `G(X) × Z_M` with `M` the order of `σ_0`
/// and keep the elements whose second coordinate is 0.
pub fn exponent_sum_zero_elements(s: &FinSolution, cap: usize) -> Result<Vec<Perm>> {
    let n = s.n;
    if n == 0 {
        return Ok(vec![Perm::identity(0)]);
    }
    let m = s.sigma_perm(0).order() as usize;
    let gens: Vec<Perm> = (0..n)
        .map(|x| {
            let mut img = s.sigma_row(x).to_vec();
            img.extend((0..m).map(|k| n + (k + 1) % m));
            Perm::from_images(img).expect("block permutation")
        })
        .collect();
    let big = crate::permkit::group_closure(n + m, &gens, cap)?;
    let mut out: Vec<Perm> = big
        .into_iter()
        .filter(|g| g.apply(n) == n)
        .map(|g| Perm::from_images(g.images()[..n].to_vec()).expect("restriction"))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Outcome of the displacement-group laws for one solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplacementLaws {
    pub group_order: usize,
    pub dis_order: usize,
    pub dis_normal: bool,
    pub dis_abelian: bool,
    pub equals_exponent_sum_zero: bool,
    pub conjugation_closed: bool,
    /// `G(X) = ⟨σ_0̃, σ_1̃⟩` (checked only for indecomposable solutions).
    pub two_generated: Option<bool>,
    /// All `σ_x` share one order (checked only for indecomposable solutions).
    pub equal_orders: Option<bool>,
    /// `Dis = ⟨L_ĩ⟩ = ⟨D_ĩ⟩` (checked only for indecomposable solutions).
    pub frame_generates: Option<bool>,
}

impl DisplacementLaws {
    pub fn all_hold(&self) -> bool {
        self.dis_normal
            && self.dis_abelian
            && self.equals_exponent_sum_zero
            && self.conjugation_closed
            && self.two_generated != Some(false)
            && self.equal_orders != Some(false)
            && self.frame_generates != Some(false)
    }
}

pub fn displacement_laws(s: &FinSolution) -> Result<DisplacementLaws> {
    if !level_at_most_2(s) {
        return Err(YbeError::NotLevel2);
    }
    let g = permutation_group(s)?;
    let dis = displacement_group(s)?;
    let esz = exponent_sum_zero_elements(s, DEFAULT_CAP)?;
    let conjugation_closed = s.sigma_perms().iter().all(|sx| {
        let inv = sx.inverse();
        dis.elements().iter().all(|d| dis.contains(&sx.compose(d).compose(&inv)))
    });
    let (mut two_generated, mut equal_orders, mut frame_generates) = (None, None, None);
    if s.n > 0 && is_indecomposable(s) {
        let t1 = s.sigma(0, 0);
        let sub = PermGroup::generate(s.n, vec![s.sigma_perm(0), s.sigma_perm(t1)], DEFAULT_CAP)?;
        two_generated = Some(sub.order() == g.order());
        let o = s.sigma_perm(0).order();
        equal_orders = Some((0..s.n).all(|x| s.sigma_perm(x).order() == o));
        let frame = basepoint_frame(s, 0)?;
        let by_l = PermGroup::generate(s.n, frame.lseq.clone(), DEFAULT_CAP)?;
        let by_d = PermGroup::generate(s.n, frame.dseq.clone(), DEFAULT_CAP)?;
        frame_generates = Some(by_l.elements() == dis.elements() && by_d.elements() == dis.elements());
    }
    Ok(DisplacementLaws {
        group_order: g.order(),
        dis_order: dis.order(),
        dis_normal: dis.is_subgroup_of(&g) && dis.is_normal_in(&g),
        dis_abelian: dis.predicates().is_abelian,
        equals_exponent_sum_zero: esz.as_slice() == dis.elements(),
        conjugation_closed,
        two_generated,
        equal_orders,
        frame_generates,
    })
}

/// `G(X)` transitive; decided from the orbit of 0, no closure needed.
pub fn is_indecomposable(s: &FinSolution) -> bool {
    s.n <= 1 || crate::permkit::orbit(&s.sigma_perms(), 0).len() == s.n
}

/// `G(X)` regular.
pub fn is_uniconnected(s: &FinSolution) -> Result<bool> {
    if !is_indecomposable(s) {
        return Ok(false);
    }
    // a transitive group of order above N cannot be regular; stop early
    match permutation_group_capped(s, s.n.max(1)) {
        Ok(g) => Ok(g.order() == s.n.max(1)),
        Err(YbeError::Perm(PermError::CapExceeded(_))) => Ok(false),
        Err(e) => Err(e),
    }
}

struct PartialIso<'a> {
    s1: &'a FinSolution,
    s2: &'a FinSolution,
    map: Vec<usize>,
    inv: Vec<usize>,
    mapped: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl<'a> PartialIso<'a> {
    fn new(s1: &'a FinSolution, s2: &'a FinSolution) -> Self {
        PartialIso {
            s1,
            s2,
            map: vec![UNSET; s1.n],
            inv: vec![UNSET; s2.n],
            mapped: Vec::new(),
        }
    }

    fn assign(&mut self, x: usize, y: usize, queue: &mut Vec<usize>) -> bool {
        if self.map[x] != UNSET {
            return self.map[x] == y;
        }
        if self.inv[y] != UNSET {
            return false;
        }
        self.map[x] = y;
        self.inv[y] = x;
        self.mapped.push(x);
        queue.push(x);
        true
    }

    /// Sets `x ↦ y` and closes under `Φ(σ^{±1}_q(p)) = σ'^{±1}_{Φq}(Φp)`.
    fn extend(&mut self, x: usize, y: usize) -> bool {
        let mut queue = Vec::new();
        if !self.assign(x, y, &mut queue) {
            return false;
        }
        while let Some(p) = queue.pop() {
            let fp = self.map[p];
            let known = self.mapped.clone();
            for q in known {
                let fq = self.map[q];
                let derived = [
                    (self.s1.sigma(q, p), self.s2.sigma(fq, fp)),
                    (self.s1.sigma_inv(q, p), self.s2.sigma_inv(fq, fp)),
                    (self.s1.sigma(p, q), self.s2.sigma(fp, fq)),
                    (self.s1.sigma_inv(p, q), self.s2.sigma_inv(fp, fq)),
                ];
                for (a, b) in derived {
                    if !self.assign(a, b, &mut queue) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn rollback(&mut self, len: usize) {
        while self.mapped.len() > len {
            let x = self.mapped.pop().unwrap();
            self.inv[self.map[x]] = UNSET;
            self.map[x] = UNSET;
        }
    }
}

/// `Φσ_x = σ'_{Φ(x)}Φ` for all `x`.
pub fn is_homomorphism(s1: &FinSolution, s2: &FinSolution, phi: &[usize]) -> bool {
    phi.len() == s1.n
        && (0..s1.n).all(|x| (0..s1.n).all(|y| phi[s1.sigma(x, y)] == s2.sigma(phi[x], phi[y])))
}

fn cycle_types(s: &FinSolution) -> Vec<Vec<usize>> {
    (0..s.n).map(|x| s.sigma_perm(x).cycle_type()).collect()
}

fn backtrack(
    st: &mut PartialIso,
    ct1: &[Vec<usize>],
    ct2: &[Vec<usize>],
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let Some(x) = (0..st.s1.n).find(|&x| st.map[x] == UNSET) else {
        if is_homomorphism(st.s1, st.s2, &st.map) {
            out.push(st.map.clone());
        }
        return;
    };
    for y in 0..st.s2.n {
        if st.inv[y] != UNSET || ct1[x] != ct2[y] {
            continue;
        }
        let mark = st.mapped.len();
        if st.extend(x, y) {
            backtrack(st, ct1, ct2, out, limit);
        }
        st.rollback(mark);
        if out.len() >= limit {
            return;
        }
    }
}

/// Up to `limit` isomorphisms found by full backtracking, in lexicographic
/// order of the image sequence.
pub fn isomorphisms_backtrack(s1: &FinSolution, s2: &FinSolution, limit: usize) -> Vec<Vec<usize>> {
    if s1.n != s2.n {
        return vec![];
    }
    let (ct1, ct2) = (cycle_types(s1), cycle_types(s2));
    let mut a: Vec<_> = ct1.clone();
    let mut b: Vec<_> = ct2.clone();
    a.sort();
    b.sort();
    if a != b {
        return vec![];
    }
    let mut st = PartialIso::new(s1, s2);
    let mut out = Vec::new();
    backtrack(&mut st, &ct1, &ct2, &mut out, limit);
    out
}

pub fn find_isomorphism_backtrack(s1: &FinSolution, s2: &FinSolution) -> Option<Vec<usize>> {
    isomorphisms_backtrack(s1, s2, 1).pop()
}

fn fast_path_applies(s: &FinSolution) -> bool {
    s.n >= 1 && is_indecomposable(s) && level_at_most_2(s)
}

/// All isomorphisms via the rigidity of indecomposable level-≤2 solutions:
/// one candidate per image of the point 0.
fn fast_isomorphisms(s1: &FinSolution, s2: &FinSolution, first_only: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for e2 in 0..s2.n {
        let mut st = PartialIso::new(s1, s2);
        if st.extend(0, e2) && st.mapped.len() == s1.n && is_homomorphism(s1, s2, &st.map) {
            out.push(st.map);
            if first_only {
                break;
            }
        }
    }
    out.sort();
    out
}

/// First isomorphism `s1 → s2` in lexicographic order, or `None`.
pub fn find_isomorphism(s1: &FinSolution, s2: &FinSolution) -> Option<Vec<usize>> {
    if s1.n != s2.n {
        return None;
    }
    if fast_path_applies(s1) && fast_path_applies(s2) {
        fast_isomorphisms(s1, s2, false).into_iter().next()
    } else {
        find_isomorphism_backtrack(s1, s2)
    }
}

pub fn automorphisms(s: &FinSolution, cap: usize) -> Result<Vec<Vec<usize>>> {
    let all = if fast_path_applies(s) {
        fast_isomorphisms(s, s, false)
    } else {
        isomorphisms_backtrack(s, s, cap.saturating_add(1))
    };
    if all.len() > cap {
        return Err(YbeError::Perm(PermError::CapExceeded(cap)));
    }
    Ok(all)
}

pub fn automorphism_group(s: &FinSolution) -> Result<PermGroup> {
    let elems = automorphisms(s, DEFAULT_CAP)?
        .into_iter()
        .map(|m| Perm::from_images(m).expect("automorphisms are bijections"))
        .collect();
    Ok(PermGroup::from_elements(s.n, elems)?)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    fn labels(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|x| self.find(x)).collect();
        classes_by(roots.into_iter())
    }
}

/// Canonical labels (first-appearance order) for any class labelling.
pub fn canonical_partition(labels: &[usize]) -> Vec<usize> {
    classes_by(labels.iter().copied())
}

fn close_congruence(s: &FinSolution, uf: &mut UnionFind) {
    let n = s.n;
    loop {
        let mut changed = false;
        for x in 0..n {
            let rx = uf.find(x);
            for y in 0..n {
                let ry = uf.find(y);
                changed |= uf.union(s.sigma(x, y), s.sigma(rx, ry));
                changed |= uf.union(s.sigma_inv(x, y), s.sigma_inv(rx, ry));
            }
        }
        if !changed {
            break;
        }
    }
}

/// Whether the labelling is compatible with `σ` and `σ^{-1}`.
pub fn is_congruence(s: &FinSolution, labels: &[usize]) -> bool {
    let n = s.n;
    if labels.len() != n {
        return false;
    }
    let mut rep: HashMap<usize, usize> = HashMap::new();
    for x in 0..n {
        rep.entry(labels[x]).or_insert(x);
    }
    (0..n).all(|x| {
        (0..n).all(|y| {
            let (rx, ry) = (rep[&labels[x]], rep[&labels[y]]);
            labels[s.sigma(x, y)] == labels[s.sigma(rx, ry)]
                && labels[s.sigma_inv(x, y)] == labels[s.sigma_inv(rx, ry)]
        })
    })
}

pub const DEFAULT_CONGRUENCE_LIMIT: usize = 16;

pub fn brute_congruences(s: &FinSolution) -> Result<Vec<Vec<usize>>> {
    brute_congruences_limited(s, DEFAULT_CONGRUENCE_LIMIT)
}

/// Every congruence, as canonical label vectors ordered by decreasing number
/// of classes and then lexicographically.
pub fn brute_congruences_limited(s: &FinSolution, max_size: usize) -> Result<Vec<Vec<usize>>> {
    let n = s.n;
    if n > max_size {
        return Err(YbeError::TooLarge(format!(
            "congruence search limited to {max_size} points, got {n}"
        )));
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert((0..n).collect());
    let mut principal: HashSet<Vec<usize>> = HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut uf = UnionFind::new(n);
            uf.union(a, b);
            close_congruence(s, &mut uf);
            principal.insert(uf.labels());
        }
    }
    let mut work: Vec<Vec<usize>> = principal.into_iter().collect();
    work.sort();
    while let Some(p) = work.pop() {
        if !found.insert(p.clone()) {
            continue;
        }
        for q in found.iter() {
            let mut uf = UnionFind::new(n);
            for x in 0..n {
                // labels are canonical, so the first point with each label is its class root
                uf.union(x, p.iter().position(|&l| l == p[x]).unwrap());
                uf.union(x, q.iter().position(|&l| l == q[x]).unwrap());
            }
            close_congruence(s, &mut uf);
            let j = uf.labels();
            if !found.contains(&j) {
                work.push(j);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    let classes = |p: &Vec<usize>| p.iter().copied().max().map_or(0, |m| m + 1);
    out.sort_by(|a, b| classes(b).cmp(&classes(a)).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Solution induced on the classes of a congruence (class `k` = label `k`).
pub fn quotient_by_partition(s: &FinSolution, labels: &[usize]) -> Result<FinSolution> {
    let n = s.n;
    if labels.len() != n {
        return Err(YbeError::BadPartition {
            expected: n,
            got: labels.len(),
        });
    }
    let labels = canonical_partition(labels);
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut rows = vec![vec![UNSET; k]; k];
    for x in 0..n {
        for y in 0..n {
            let v = labels[s.sigma(x, y)];
            let slot = &mut rows[labels[x]][labels[y]];
            if *slot != UNSET && *slot != v {
                return Err(YbeError::NotCongruence);
            }
            *slot = v;
        }
    }
    FinSolution::from_sigma(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cyclic_perm(n: usize) -> Perm {
        Perm::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap()
    }

    /// `S(Z_2, n=2, c=(0,1))` on points `a·2 + i`.
    fn s_z2_n2() -> FinSolution {
        let c = [0i64, 1];
        FinSolution::from_fn(4, |x, y| {
            let (_a, i) = ((x / 2) as i64, (x % 2) as i64);
            let (b, j) = ((y / 2) as i64, (y % 2) as i64);
            let nb = (b + c[(i - j - 1).rem_euclid(2) as usize] - c[(-j - 1).rem_euclid(2) as usize]).rem_euclid(2);
            (nb * 2 + (j + 1) % 2) as usize
        })
        .unwrap()
    }

    fn dihedral(m: u32) -> FinSolution {
        let n = 1usize << m;
        FinSolution::from_fn(n, |a, b| {
            let b = b as i64;
            let n = n as i64;
            (if a % 2 == 0 { 1 - b } else { -1 - b }).rem_euclid(n) as usize
        })
        .unwrap()
    }

    #[test]
    fn trivial_solution_is_accepted() {
        let s = FinSolution::trivial(3);
        assert!(verify_braid(&s).is_none());
        assert!(is_square_free(&s));
        assert!(is_2_reductive(&s));
        assert_eq!(multipermutation_level(&s), Ok(1));
        assert_eq!(multipermutation_level(&FinSolution::trivial(1)), Ok(0));
    }

    #[test]
    fn rejects_repeated_row_entry() {
        let err = FinSolution::from_sigma(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, YbeError::NotPermutationRow(1));
    }

    #[test]
    fn braid_failure_is_reported() {
        // σ_0 = id, σ_1 = (01) is not a solution
        let err = FinSolution::from_sigma(vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 1, 2]]).unwrap_err();
        assert!(matches!(err, YbeError::BraidFails(..) | YbeError::DegenerateTau(_)), "{err:?}");
    }

    #[test]
    fn s_z2_n2_behaves() {
        let s = s_z2_n2();
        // σ_{(0,1)}((0,0)) = (1,1)
        assert_eq!(s.sigma(1, 0), 3);
        assert!(!is_square_free(&s));
        assert!(!is_2_reductive(&s));
        let (ret, _) = retract(&s).unwrap();
        assert_eq!(ret.size(), 2);
        assert_eq!(multipermutation_level(&s), Ok(2));
        assert!(is_mpl2_local(&s));
    }

    #[test]
    fn permutation_solution_level_and_groups() {
        let s = FinSolution::permutation_solution(&cyclic_perm(5));
        assert_eq!(multipermutation_level(&s), Ok(1));
        assert!(!is_square_free(&s));
        let g = permutation_group(&s).unwrap();
        assert_eq!(g.order(), 5);
        assert!(g.predicates().is_cyclic);
        assert_eq!(displacement_group(&s).unwrap().order(), 1);
        assert_eq!(retract(&s).unwrap().0.size(), 1);
        let iso = isotope(&s, 2).unwrap();
        assert!(iso.l_rows().iter().enumerate().all(|(_, r)| r.iter().enumerate().all(|(i, &v)| i == v)));
        let frame = basepoint_frame(&s, 0).unwrap();
        assert!(frame.lseq.iter().all(Perm::is_identity));
    }

    #[test]
    fn prime_cycle_has_two_congruences() {
        for p in [2usize, 3, 5, 7] {
            let s = FinSolution::permutation_solution(&cyclic_perm(p));
            assert_eq!(brute_congruences(&s).unwrap().len(), 2);
        }
        assert_eq!(brute_congruences(&FinSolution::trivial(1)).unwrap().len(), 1);
    }

    #[test]
    fn congruences_are_congruences() {
        let s = dihedral(3);
        let all = brute_congruences(&s).unwrap();
        for p in &all {
            assert!(is_congruence(&s, p));
            quotient_by_partition(&s, p).unwrap();
        }
        assert_eq!(all.first().unwrap(), &(0..8).collect::<Vec<_>>());
        assert_eq!(all.last().unwrap(), &vec![0; 8]);
    }

    #[test]
    fn dihedral_isotope_matches_closed_form() {
        let s = dihedral(3);
        let iso = isotope(&s, 0).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let want = if a % 2 == 0 { b } else { (b + 6) % 8 };
                assert_eq!(iso.l(a, b), want);
            }
        }
        let frame = basepoint_frame(&s, 0).unwrap();
        let d = PermGroup::generate(8, frame.dseq.clone(), DEFAULT_CAP).unwrap();
        assert_eq!(d.order(), 4);
        assert!(is_uniconnected(&s).unwrap());
        assert_eq!(multipermutation_level(&s), Ok(2));
    }

    #[test]
    fn isotope_assemble_round_trip() {
        for s in [s_z2_n2(), dihedral(3), dihedral(2)] {
            for e in 0..s.size() {
                let t = isotope(&s, e).unwrap();
                assert!(is_2_reductive(&t.as_solution()));
                let back = assemble(&t, &s.sigma_perm(e)).unwrap();
                assert_eq!(back, s);
            }
        }
    }

    #[test]
    fn assemble_identity_pi_returns_two_reductive_solution() {
        let t = isotope(&dihedral(3), 0).unwrap();
        let s = assemble(&t, &Perm::identity(8)).unwrap();
        assert_eq!(s, t.as_solution());
    }

    #[test]
    fn assemble_rejects_bad_pi() {
        let t = isotope(&s_z2_n2(), 0).unwrap();
        let bad = Perm::from_images(vec![0, 2, 1, 3]).unwrap();
        assert!(matches!(assemble(&t, &bad), Err(YbeError::PiIncompatible(..))));
    }

    #[test]
    fn exponent_sum_zero_matches_displacement() {
        for s in [s_z2_n2(), dihedral(3), FinSolution::permutation_solution(&cyclic_perm(4))] {
            let laws = displacement_laws(&s).unwrap();
            assert!(laws.all_hold(), "{laws:?}");
        }
    }

    #[test]
    fn isomorphism_paths_agree() {
        let s = dihedral(3);
        let phi = vec![3, 0, 6, 1, 7, 2, 5, 4];
        let t = s.relabel(&phi).unwrap();
        let found = find_isomorphism(&s, &t).unwrap();
        assert!(is_homomorphism(&s, &t, &found));
        assert_eq!(Some(found), find_isomorphism_backtrack(&s, &t));
        assert_eq!(find_isomorphism(&s, &s).unwrap(), (0..8).collect::<Vec<_>>());
        assert!(find_isomorphism(&s, &FinSolution::trivial(8)).is_none());
    }

    #[test]
    fn automorphisms_of_uniconnected() {
        let aut = automorphism_group(&dihedral(3)).unwrap();
        assert!(aut.order() >= 1);
        assert_eq!(automorphism_group(&FinSolution::trivial(1)).unwrap().order(), 1);
        assert_eq!(automorphism_group(&FinSolution::trivial(3)).unwrap().order(), 6);
    }

    #[test]
    fn decomposable_union() {
        let s = FinSolution::trivial(2);
        assert!(!is_indecomposable(&s));
        assert!(!is_uniconnected(&s).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let s = s_z2_n2();
        let text = s.to_json_string();
        assert!(text.starts_with(r#"{"size":4,"sigma":[["#));
        assert_eq!(FinSolution::from_json_str(&text).unwrap(), s);
        assert!(FinSolution::from_json_str(r#"{"size":2,"sigma":[[0,1]]}"#).is_err());
    }

    #[test]
    fn tau_cross_check() {
        let s = s_z2_n2();
        assert!(FinSolution::from_sigma_tau(s.sigma_rows(), &s.tau_rows()).is_ok());
        let mut bad = s.tau_rows();
        bad[0].swap(0, 1);
        assert!(matches!(
            FinSolution::from_sigma_tau(s.sigma_rows(), &bad),
            Err(YbeError::TauMismatch(..))
        ));
    }

    /// Indecomposable, level 3: a two-point cover of a level-2 solution of size 4.
    pub(crate) fn level_three_eight() -> FinSolution {
        let a = vec![2, 3, 1, 0, 6, 7, 5, 4];
        let b = vec![7, 6, 5, 4, 3, 2, 1, 0];
        let c = vec![3, 2, 0, 1, 7, 6, 4, 5];
        let d = vec![6, 7, 4, 5, 2, 3, 0, 1];
        FinSolution::from_sigma(vec![a.clone(), a, b.clone(), b, c.clone(), c, d.clone(), d]).unwrap()
    }

    #[test]
    fn level_three_fixture() {
        let s = level_three_eight();
        assert!(is_indecomposable(&s));
        assert_eq!(multipermutation_level(&s).unwrap(), 3);
        assert!(!is_mpl2_local(&s));
        assert!(matches!(displacement_laws(&s), Err(YbeError::NotLevel2)));
    }
}
