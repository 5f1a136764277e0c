//! Congruences `θ(m, H, r)` of `S(G×Z_n, c)` and the quotients they induce.
//!
//! `(a,i) θ (a',i')` iff `m | i−i'` and `a'−a ≡ ((i−i')/m)·r (mod H)`.
//! Quotient points are numbered `index_of(ā)·m + j` on `G/H × Z_m`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{quotient_group, subgroups_containing, AbElem, AbGroup, IntLatError, Projection, Subgroup};
use crate::permkit::{Perm, PermError, DEFAULT_CAP};
use crate::sconstruct::{build_solution, twisted_solution, SError, SParams};
use crate::ybecore::{
    automorphism_group, displacement_group_capped, permutation_group_capped, FinSolution, YbeError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("group closure exceeded its cap")]
    CapExceeded,
    #[error(transparent)]
    Lattice(#[from] IntLatError),
    #[error(transparent)]
    Construction(#[from] SError),
    #[error(transparent)]
    Solution(YbeError),
}

impl From<YbeError> for QuotientError {
    fn from(e: YbeError) -> Self {
        match e {
            YbeError::Perm(PermError::CapExceeded(_)) => QuotientError::CapExceeded,
            other => QuotientError::Solution(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, QuotientError>;

/// The triple `(m, H, r)`, with `r` kept as the least element of `r + H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceDescriptor {
    pub m: usize,
    pub h: Subgroup,
    pub r: AbElem,
}

/// `{"m":m, "H":[[...],...], "r":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorJson {
    pub m: usize,
    #[serde(rename = "H")]
    pub h: Vec<Vec<i64>>,
    pub r: Vec<i64>,
}

impl CongruenceDescriptor {
    /// Builds and validates `θ(m, ⟨gens⟩, r)` for `p`.
    pub fn new(p: &SParams, m: usize, h: Subgroup, r: &AbElem) -> Result<CongruenceDescriptor> {
        let d = CongruenceDescriptor {
            m,
            r: h.coset_rep(r),
            h,
        };
        validate(p, &d)?;
        Ok(d)
    }

    /// Identity relation `θ(n, {0}, 0)`.
    pub fn identity(p: &SParams) -> CongruenceDescriptor {
        let g = p.group();
        CongruenceDescriptor {
            m: p.n(),
            h: Subgroup::trivial(g),
            r: g.zero(),
        }
    }

    /// Total relation `θ(1, G, 0)`.
    pub fn total(p: &SParams) -> CongruenceDescriptor {
        let g = p.group();
        CongruenceDescriptor {
            m: 1,
            h: Subgroup::whole(g),
            r: g.zero(),
        }
    }

    pub fn to_json(&self) -> DescriptorJson {
        DescriptorJson {
            m: self.m,
            h: self.h.elements().iter().map(|x| x.coords().to_vec()).collect(),
            r: self.r.coords().to_vec(),
        }
    }

    pub fn from_json(p: &SParams, j: &DescriptorJson) -> Result<CongruenceDescriptor> {
        let g = p.group();
        let gens = j.h.iter().map(|x| g.elem(x)).collect::<std::result::Result<Vec<_>, _>>()?;
        let h = crate::intlat::subgroup_generated(g, &gens);
        if h.order() != gens.len() {
            return Err(QuotientError::BadDescriptor("H is not listed as a full subgroup".into()));
        }
        let r = g.elem(&j.r)?;
        CongruenceDescriptor::new(p, j.m, h, &r)
    }

    /// `θ(m,H,r)` in the notation used by reports, with `H` given by its order.
    pub fn label(&self) -> String {
        format!("θ({}, |H|={}, r={:?})", self.m, self.h.order(), self.r.coords())
    }
}

/// Checks `m | n`, `c_i − c_{i+m} ∈ H` and `(n/m)·r ∈ H`.
pub fn validate(p: &SParams, d: &CongruenceDescriptor) -> Result<()> {
    let g = p.group();
    let n = p.n();
    if d.h.parent() != g {
        return Err(QuotientError::BadDescriptor("H lives in a different group".into()));
    }
    if d.m == 0 || n % d.m != 0 {
        return Err(QuotientError::BadDescriptor(format!("m = {} does not divide n = {n}", d.m)));
    }
    if !g.contains(&d.r) {
        return Err(QuotientError::BadDescriptor("r is not an element of G".into()));
    }
    for i in 0..n as i64 {
        if !d.h.contains(&g.sub(p.c_at(i), p.c_at(i + d.m as i64))) {
            return Err(QuotientError::BadDescriptor(format!("c_{i} − c_{{{i}+m}} is not in H")));
        }
    }
    if !d.h.contains(&g.scale((n / d.m) as i64, &d.r)) {
        return Err(QuotientError::BadDescriptor("(n/m)·r is not in H".into()));
    }
    Ok(())
}

/// Every congruence of `S(G×Z_n, c)`, one descriptor per relation.
///
/// Order: `H` by increasing order then element set, `m` decreasing, `r` by index.
pub fn enumerate_congruences(p: &SParams) -> Result<Vec<CongruenceDescriptor>> {
    enumerate_congruences_capped(p, DEFAULT_CAP)
}

pub fn enumerate_congruences_capped(p: &SParams, subgroup_cap: usize) -> Result<Vec<CongruenceDescriptor>> {
    let g = p.group();
    let n = p.n();
    let subgroups = subgroups_containing(&Subgroup::trivial(g), subgroup_cap)?;
    let mut divisors: Vec<usize> = (1..=n).filter(|m| n % m == 0).collect();
    divisors.reverse();
    let per_m: Vec<Vec<(usize, CongruenceDescriptor)>> = divisors
        .par_iter()
        .map(|&m| {
            let mut out = Vec::new();
            for (hi, h) in subgroups.iter().enumerate() {
                let fits = (0..n as i64).all(|i| h.contains(&g.sub(p.c_at(i), p.c_at(i + m as i64))));
                if !fits {
                    continue;
                }
                for r in h.coset_reps() {
                    if h.contains(&g.scale((n / m) as i64, &r)) {
                        out.push((hi, CongruenceDescriptor { m, h: h.clone(), r }));
                    }
                }
            }
            out
        })
        .collect();
    let mut all: Vec<(usize, CongruenceDescriptor)> = per_m.into_iter().flatten().collect();
    all.sort_by_key(|(hi, d)| (*hi, std::cmp::Reverse(d.m), g.index_of(&d.r)));
    Ok(all.into_iter().map(|(_, d)| d).collect())
}

/// Image of each point `(a,i)` of `S(G×Z_n, c)` in the quotient on `G/H × Z_m`.
pub fn projection_map(p: &SParams, d: &CongruenceDescriptor) -> Result<Vec<usize>> {
    validate(p, d)?;
    let (a, proj) = quotient_group(p.group(), &d.h)?;
    Ok(projection_with(p, d, &a, &proj))
}

fn projection_with(p: &SParams, d: &CongruenceDescriptor, a: &AbGroup, proj: &Projection) -> Vec<usize> {
    let g = p.group();
    (0..p.size())
        .map(|x| {
            let (b, i) = p.unpoint(x);
            let (q, j) = (i / d.m, i % d.m);
            let lifted = g.add(&b, &g.scale(q as i64, &d.r));
            a.index_of(&proj.apply(&lifted)) * d.m + j
        })
        .collect()
}

/// Class labels of `θ(m,H,r)` on the points of `S(G×Z_n, c)`, in first-appearance order.
///
/// Evaluated pairwise from the defining relation, independently of [`projection_map`].
pub fn descriptor_partition(p: &SParams, d: &CongruenceDescriptor) -> Result<Vec<usize>> {
    validate(p, d)?;
    let g = p.group();
    let size = p.size();
    let mut labels = vec![usize::MAX; size];
    let mut next = 0;
    for x in 0..size {
        if labels[x] != usize::MAX {
            continue;
        }
        let (a, i) = p.unpoint(x);
        for y in x..size {
            let (b, j) = p.unpoint(y);
            let diff = i as i64 - j as i64;
            if diff.rem_euclid(d.m as i64) != 0 {
                continue;
            }
            let twist = g.scale(diff / d.m as i64, &d.r);
            if d.h.contains(&g.sub(&g.sub(&b, &a), &twist)) {
                labels[y] = next;
            }
        }
        next += 1;
    }
    Ok(labels)
}

/// Quotient `S(G×Z_n, c)/θ` built directly on `G/H × Z_m`.
pub fn quotient_by(p: &SParams, d: &CongruenceDescriptor) -> Result<FinSolution> {
    validate(p, d)?;
    let (a, proj) = quotient_group(p.group(), &d.h)?;
    let cbar: Vec<AbElem> = p.c()[..d.m].iter().map(|x| proj.apply(x)).collect();
    Ok(twisted_solution(&a, d.m, &cbar, &proj.apply(&d.r))?)
}

/// Quotient computed from the class partition of the materialized solution.
pub fn quotient_by_classes(p: &SParams, d: &CongruenceDescriptor) -> Result<FinSolution> {
    let s = build_solution(p)?;
    Ok(crate::ybecore::quotient_by_partition(&s, &descriptor_partition(p, d)?)?)
}

/// Whether two congruences give isomorphic quotients: same `m`, same `H`, `r_1 ≡ r_2 (mod H)`.
pub fn quotients_isomorphic(p: &SParams, d1: &CongruenceDescriptor, d2: &CongruenceDescriptor) -> bool {
    let g = p.group();
    d1.m == d2.m && d1.h == d2.h && d2.h.contains(&g.sub(&d1.r, &d2.r))
}

/// Measured structure of a quotient `Y` against the values predicted by `(m, H, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageReport {
    pub size: usize,
    pub group_index: usize,
    pub m: usize,
    pub r_order: usize,
    pub dis_ratio: usize,
    pub frame_index: usize,
    pub cycle_lengths: Vec<usize>,
    pub powers_equal: bool,
    pub size_ok: bool,
    pub dis_ok: bool,
    pub frame_ok: bool,
    pub cycles_ok: bool,
}

impl ImageReport {
    pub fn all_hold(&self) -> bool {
        self.size_ok && self.dis_ok && self.frame_ok && self.cycles_ok && self.powers_equal
    }

    /// Common cycle length `ℓ` of all `ρ_y`, when there is one.
    pub fn cycle_length(&self) -> Option<usize> {
        match self.cycle_lengths.as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }
}

/// Checks the image invariants of `y` given the expected `[G:H]`, `m` and order of `r̄`.
pub fn image_report(y: &FinSolution, group_index: usize, m: usize, r_order: usize, cap: usize) -> Result<ImageReport> {
    let e = 0;
    let gy = permutation_group_capped(y, cap)?;
    let dis = displacement_group_capped(y, cap)?;
    let dis_e = dis.stabilizer(e).len();
    let g_e = gy.stabilizer(e);
    let meet = g_e.iter().filter(|p| dis.contains(p)).count();
    let product = g_e.len() * dis.order() / meet;
    let mut lengths: Vec<usize> = y.sigma_perms().iter().flat_map(|p| p.cycle_type()).collect();
    lengths.sort_unstable();
    lengths.dedup();
    let power: Vec<Perm> = y.sigma_perms().iter().map(|p| p.pow(m as i64)).collect();
    let ell = r_order * m;
    Ok(ImageReport {
        size: y.size(),
        group_index,
        m,
        r_order,
        dis_ratio: dis.order() / dis_e,
        frame_index: gy.order() / product,
        powers_equal: power.windows(2).all(|w| w[0] == w[1]),
        size_ok: y.size() == m * group_index,
        dis_ok: dis.order() / dis_e == group_index,
        frame_ok: gy.order() / product == m,
        cycles_ok: lengths == [ell],
        cycle_lengths: lengths,
    })
}

/// [`image_report`] for `quotient_by(p, d)`.
pub fn quotient_invariant_report(p: &SParams, d: &CongruenceDescriptor) -> Result<ImageReport> {
    let y = quotient_by(p, d)?;
    let (a, proj) = quotient_group(p.group(), &d.h)?;
    let k = a.element_order(&proj.apply(&d.r)) as usize;
    image_report(&y, d.h.index(), d.m, k, DEFAULT_CAP)
}

/// Whether `Aut(y)` acts regularly.
pub fn aut_is_regular(y: &FinSolution) -> Result<bool> {
    Ok(automorphism_group(y)?.predicates().is_regular)
}
