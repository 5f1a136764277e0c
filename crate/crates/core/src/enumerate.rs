//! Census of indecomposable solutions of multipermutation level at most 2.
//!
//! A solution of size `s` is a pair `(m, K, r̄)` with `m | s`, `K ≤ Z^{m−1}` of
//! index `s/m` and `r̄ ∈ A = Z^{m−1}/K`. Its constants are the partial sums
//! `c̄_i = ē_1 + … + ē_i` of the basis images, and the solution itself is the
//! twisted solution on `A×Z_m`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{iso_type_label, sublattices_of_index, AbElem, IntLatError, LatticeQuotient};
use crate::permkit::{PermError, DEFAULT_CAP};
use crate::sconstruct::{twisted_solution, SError};
use crate::ybecore::{
    is_indecomposable, multipermutation_level, permutation_group_capped, verify_braid, FinSolution, YbeError,
};

/// Default ceiling on census sizes.
pub const MAX_CENSUS_SIZE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
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

impl From<YbeError> for EnumError {
    fn from(e: YbeError) -> Self {
        match e {
            YbeError::Perm(PermError::CapExceeded(_)) => EnumError::CapExceeded,
            other => EnumError::Solution(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, EnumError>;

/// One census solution.
#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub size: usize,
    pub m: usize,
    pub lattice: LatticeQuotient,
    pub rbar: AbElem,
}

impl CensusEntry {
    /// `c̄_0, …, c̄_{m−1}` in `A`.
    pub fn cbar(&self) -> Vec<AbElem> {
        let a = self.lattice.quotient();
        let mut out = vec![a.zero()];
        for e in self.lattice.gen_images() {
            let next = a.add(out.last().unwrap(), e);
            out.push(next);
        }
        out
    }

    pub fn solution(&self) -> Result<FinSolution> {
        let a = self.lattice.quotient();
        Ok(twisted_solution(a, self.m, &self.cbar(), &self.rbar)?)
    }

    /// Iso type of `A`, e.g. `Z_2^2`.
    pub fn group_label(&self) -> String {
        iso_type_label(self.lattice.quotient().factors())
    }

    /// Stable file stem `s{size}_m{m}_{digest}_r{coords}`.
    pub fn file_stem(&self) -> String {
        let r: Vec<String> = self.rbar.coords().iter().map(|x| x.to_string()).collect();
        let r = if r.is_empty() { "0".to_string() } else { r.join("-") };
        format!("s{}_m{}_{}_r{}", self.size, self.m, self.lattice.hnf_digest(), r)
    }

    /// Provenance block for emitted files.
    pub fn meta(&self) -> CensusMeta {
        CensusMeta {
            size: self.size,
            m: self.m,
            hnf: self.lattice.hnf().to_rows(),
            group: self.lattice.quotient().factors().to_vec(),
            rbar: self.rbar.coords().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusMeta {
    pub size: usize,
    pub m: usize,
    pub hnf: Vec<Vec<i64>>,
    pub group: Vec<i64>,
    pub rbar: Vec<i64>,
}

fn check_size(size: usize, max: usize) -> Result<()> {
    if size == 0 {
        return Err(EnumError::TooLarge("size must be positive".into()));
    }
    if size > max {
        return Err(EnumError::TooLarge(format!("size {size} exceeds the census limit {max}")));
    }
    Ok(())
}

/// The `(m, K)` pairs for `size`, ordered by `m` and then by HNF.
pub fn census_lattices(size: usize) -> Result<Vec<(usize, LatticeQuotient)>> {
    let mut out = Vec::new();
    for m in (1..=size).filter(|m| size % m == 0) {
        for k in sublattices_of_index(m - 1, size / m)? {
            out.push((m, k));
        }
    }
    Ok(out)
}

/// All census entries of the given size, in `(m, HNF, r̄)` order.
pub fn census(size: usize) -> Result<Vec<CensusEntry>> {
    census_limited(size, MAX_CENSUS_SIZE)
}

pub fn census_limited(size: usize, max: usize) -> Result<Vec<CensusEntry>> {
    check_size(size, max)?;
    let mut out = Vec::new();
    for (m, lattice) in census_lattices(size)? {
        for rbar in lattice.quotient().elements() {
            out.push(CensusEntry {
                size,
                m,
                lattice: lattice.clone(),
                rbar,
            });
        }
    }
    Ok(out)
}

/// Number of census solutions, without building any of them.
pub fn census_count(size: usize) -> Result<usize> {
    check_size(size, usize::MAX)?;
    Ok(census_lattices(size)?.iter().map(|(m, _)| size / m).sum())
}

/// Census counts keyed by `(m, iso type of A)`.
pub fn census_breakdown(size: usize) -> Result<BTreeMap<(usize, String), usize>> {
    let mut out = BTreeMap::new();
    for (m, k) in census_lattices(size)? {
        *out.entry((m, iso_type_label(k.quotient().factors()))).or_insert(0) += k.index();
    }
    Ok(out)
}

/// One row of the census table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub size: usize,
    pub by_m: BTreeMap<usize, usize>,
    pub total: usize,
    pub abelian: usize,
    pub cyclic: usize,
}

/// Builds every solution of the given size and classifies its permutation group.
pub fn census_report(size: usize, max: usize) -> Result<CensusReport> {
    let entries = census_limited(size, max)?;
    let flags: Vec<(usize, bool, bool)> = entries
        .par_iter()
        .map(|e| {
            let s = e.solution()?;
            let pr = permutation_group_capped(&s, DEFAULT_CAP)?.predicates();
            Ok((e.m, pr.is_abelian, pr.is_cyclic))
        })
        .collect::<Result<_>>()?;
    let mut by_m = BTreeMap::new();
    for (m, _, _) in &flags {
        *by_m.entry(*m).or_insert(0) += 1;
    }
    Ok(CensusReport {
        size,
        by_m,
        total: flags.len(),
        abelian: flags.iter().filter(|f| f.1).count(),
        cyclic: flags.iter().filter(|f| f.2).count(),
    })
}

/// Census reports for sizes `1..=max`.
pub fn table1_report(max: usize) -> Result<Vec<CensusReport>> {
    check_size(max, MAX_CENSUS_SIZE)?;
    (1..=max).map(|s| census_report(s, MAX_CENSUS_SIZE)).collect()
}

/// Aligned text table with one column per size.
pub fn format_table(rows: &[CensusReport]) -> String {
    let width = rows
        .iter()
        .map(|r| r.total.to_string().len())
        .max()
        .unwrap_or(1)
        .max(2);
    let line = |name: &str, f: &dyn Fn(&CensusReport) -> usize| {
        let cells: Vec<String> = rows.iter().map(|r| format!("{:>width$}", f(r))).collect();
        format!("{name:<8} {}\n", cells.join(" "))
    };
    let mut out = String::new();
    out += &line("size", &|r| r.size);
    out += &line("total", &|r| r.total);
    out += &line("abelian", &|r| r.abelian);
    out += &line("cyclic", &|r| r.cyclic);
    out
}

/// Oracle verdicts for one solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub braid: bool,
    pub involutive: bool,
    pub nondegenerate: bool,
    pub indecomposable: bool,
    pub level: Option<usize>,
}

impl OracleCheck {
    pub fn passes(&self) -> bool {
        self.braid && self.involutive && self.nondegenerate && self.indecomposable && self.level.is_some_and(|l| l <= 2)
    }
}

pub fn oracle_check(s: &FinSolution) -> OracleCheck {
    let n = s.size();
    let bijective = |row: Vec<usize>| {
        let mut seen = vec![false; n];
        row.into_iter().all(|v| v < n && !std::mem::replace(&mut seen[v], true))
    };
    OracleCheck {
        braid: verify_braid(s).is_none(),
        involutive: (0..n).all(|x| {
            (0..n).all(|y| {
                let (u, v) = s.r(x, y);
                s.r(u, v) == (x, y)
            })
        }),
        nondegenerate: (0..n).all(|x| bijective(s.sigma_row(x).to_vec()) && bijective((0..n).map(|z| s.tau(x, z)).collect())),
        indecomposable: is_indecomposable(s),
        level: multipermutation_level(s).ok(),
    }
}

/// `n(A, m)` for `A` elementary abelian of order `p^k`.
pub fn count_formula_elementary(p: u64, k: u32, m: u32) -> u128 {
    let p = p as u128;
    if m <= k {
        return 0;
    }
    let pk = p.pow(k);
    if m == k + 1 {
        return pk;
    }
    // Gaussian binomial [m−1, k]_p, built up so every partial value is an integer
    let gauss = (1..m - k).fold(1u128, |acc, j| acc * (p.pow(k + j) - 1) / (p.pow(j) - 1));
    pk * gauss
}

/// `n(A, m)` for `A` cyclic of order `p^k`, `k ≥ 1`, `m ≥ 2`.
pub fn count_formula_cyclic(p: u64, k: u32, m: u32) -> u128 {
    let p = p as u128;
    p.pow(k * m + 2 - m - k) * (p.pow(m - 1) - 1) / (p - 1)
}

/// `2^{s/2} − 1` for `s = 2^e`.
pub fn power_of_two_lower_bound(exponent: u32) -> u128 {
    let s = 1u32 << exponent;
    (1u128 << (s / 2)) - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ybecore::find_isomorphism;

    #[test]
    fn small_totals() {
        let got: Vec<usize> = (1..=16).map(|s| census_count(s).unwrap()).collect();
        assert_eq!(got, [1, 1, 1, 3, 1, 10, 1, 19, 13, 36, 1, 136, 1, 134, 151, 403]);
    }

    #[test]
    fn size_eight_split() {
        let by_m: Vec<(usize, usize)> = census_breakdown(8)
            .unwrap()
            .into_iter()
            .map(|((m, _), c)| (m, c))
            .fold(Vec::new(), |mut acc, (m, c)| {
                match acc.last_mut() {
                    Some((lm, lc)) if *lm == m => *lc += c,
                    _ => acc.push((m, c)),
                }
                acc
            });
        assert_eq!(by_m, [(2, 4), (4, 14), (8, 1)]);
    }

    #[test]
    fn size_sixteen_breakdown() {
        let b = census_breakdown(16).unwrap();
        let want: BTreeMap<(usize, String), usize> = [
            ((2, "Z_8"), 8),
            ((4, "Z_4"), 112),
            ((4, "Z_2^2"), 28),
            ((8, "Z_2"), 254),
            ((16, "Z_1"), 1),
        ]
        .into_iter()
        .map(|((m, g), c)| ((m, g.to_string()), c))
        .collect();
        assert_eq!(b, want);
    }

    #[test]
    fn formulas() {
        assert_eq!(count_formula_elementary(2, 2, 4), 28);
        assert_eq!(count_formula_elementary(3, 1, 3), 12);
        assert_eq!(count_formula_elementary(5, 3, 3), 0);
        assert_eq!(count_formula_cyclic(2, 2, 4), 112);
        assert_eq!(count_formula_cyclic(2, 3, 2), 8);
        for p in [2u64, 3, 5] {
            for m in 2..=6u32 {
                let closed = ((p as u128).pow(m) - p as u128) / (p as u128 - 1);
                assert_eq!(count_formula_elementary(p, 1, m), closed);
                assert_eq!(count_formula_cyclic(p, 1, m), closed);
            }
        }
        assert_eq!(power_of_two_lower_bound(3), 15);
        assert_eq!(power_of_two_lower_bound(4), 255);
    }

    #[test]
    fn entries_are_solutions() {
        for s in 1..=8 {
            let entries = census(s).unwrap();
            assert_eq!(entries.len(), census_count(s).unwrap());
            let mut level_one = 0;
            for e in &entries {
                let sol = e.solution().unwrap();
                let check = oracle_check(&sol);
                assert!(check.passes(), "{} {check:?}", e.file_stem());
                level_one += usize::from(check.level.unwrap() <= 1);
            }
            assert_eq!(level_one, 1);
        }
    }

    #[test]
    fn size_six_pairwise_distinct() {
        let sols: Vec<FinSolution> = census(6).unwrap().iter().map(|e| e.solution().unwrap()).collect();
        for i in 0..sols.len() {
            for j in i + 1..sols.len() {
                assert!(find_isomorphism(&sols[i], &sols[j]).is_none(), "{i} {j}");
            }
        }
    }

    #[test]
    fn report_json() {
        let r = census_report(4, MAX_CENSUS_SIZE).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"size":4,"by_m":{"2":2,"4":1},"total":3,"abelian":3,"cyclic":2}"#
        );
        assert!(matches!(census(21), Err(EnumError::TooLarge(_))));
    }
}
