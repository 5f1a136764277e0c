mod common;

use mpl2::intlat::AbGroup;
use mpl2::quotients::{
    aut_is_regular, enumerate_congruences, projection_map, quotient_by, quotient_by_classes,
    quotient_invariant_report, quotients_isomorphic,
};
use mpl2::sconstruct::{build_solution, SParams};
use mpl2::ybecore::{
    displacement_laws, find_isomorphism, is_homomorphism, is_mpl2_local, multipermutation_level, FinSolution,
};
use proptest::prelude::*;

fn factor_choices() -> Vec<Vec<i64>> {
    vec![vec![2], vec![3], vec![4], vec![2, 2], vec![5], vec![6]]
}

/// Random generating parameters with `|G|·n ≤ 24`; non-generating draws are rejected.
fn params() -> impl Strategy<Value = SParams> {
    (0..factor_choices().len(), 1usize..=6)
        .prop_filter("small enough", |(fi, n)| {
            let order: i64 = factor_choices()[*fi].iter().product();
            order as usize * n <= 24
        })
        .prop_flat_map(|(fi, n)| {
            let factors = factor_choices()[fi].clone();
            let rank = factors.len();
            (Just(factors), Just(n), prop::collection::vec(prop::collection::vec(0i64..6, rank), n - 1))
        })
        .prop_filter_map("constants must generate", |(factors, n, tail)| {
            let mut c = vec![vec![0; factors.len()]];
            c.extend(tail);
            SParams::from_raw(&factors, n, &c).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn built_solutions_have_level_two_laws(p in params()) {
        let s = build_solution(&p).unwrap();
        prop_assert!(is_mpl2_local(&s));
        prop_assert!(multipermutation_level(&s).unwrap() <= 2);
        let laws = displacement_laws(&s).unwrap();
        prop_assert!(laws.all_hold(), "{:?}", laws);
    }

    #[test]
    fn every_quotient_matches_its_class_construction(p in params()) {
        let s = build_solution(&p).unwrap();
        for d in enumerate_congruences(&p).unwrap() {
            let y = quotient_by(&p, &d).unwrap();
            prop_assert_eq!(y.size(), d.m * d.h.index());
            prop_assert!(is_homomorphism(&s, &y, &projection_map(&p, &d).unwrap()));
            let by_classes = quotient_by_classes(&p, &d).unwrap();
            prop_assert!(find_isomorphism(&y, &by_classes).is_some());
            let rep = quotient_invariant_report(&p, &d).unwrap();
            prop_assert!(rep.all_hold(), "{} {:?}", d.label(), rep);
        }
    }

    #[test]
    fn untwisted_quotient_is_an_s_solution(p in params()) {
        let g = p.group();
        for d in enumerate_congruences(&p).unwrap().into_iter().filter(|d| g.is_zero(&d.r)) {
            let (a, proj) = mpl2::intlat::quotient_group(g, &d.h).unwrap();
            let cbar: Vec<_> = p.c()[..d.m].iter().map(|x| proj.apply(x)).collect();
            let small = SParams::new(a, d.m, cbar).unwrap();
            let direct = build_solution(&small).unwrap();
            let classes = quotient_by_classes(&p, &d).unwrap();
            prop_assert!(find_isomorphism(&direct, &classes).is_some(), "{}", d.label());
        }
    }
}

#[test]
fn quotient_classification_agrees_with_isomorphism_search() {
    let mut checked = 0;
    for factors in [vec![2], vec![3], vec![4], vec![2, 2]] {
        let g = AbGroup::new(factors).unwrap();
        for n in 1..=12 / g.order() {
            for p in mpl2::sconstruct::all_params(&g, n) {
                let ds = enumerate_congruences(&p).unwrap();
                let ys: Vec<FinSolution> = ds.iter().map(|d| quotient_by(&p, d).unwrap()).collect();
                for i in 0..ds.len() {
                    for j in 0..ds.len() {
                        let iso = find_isomorphism(&ys[i], &ys[j]).is_some();
                        assert_eq!(iso, quotients_isomorphic(&p, &ds[i], &ds[j]), "{:?}", p.to_json());
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 20);
}

#[test]
fn built_quotients_have_regular_automorphism_groups() {
    let p = common::twelve_point();
    for d in enumerate_congruences(&p).unwrap() {
        assert!(aut_is_regular(&quotient_by(&p, &d).unwrap()).unwrap(), "{}", d.label());
    }
    for m in [3, 4] {
        let (p, d) = common::quaternion_params(m);
        assert!(aut_is_regular(&quotient_by(&p, &d).unwrap()).unwrap());
    }
}
