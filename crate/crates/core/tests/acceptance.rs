mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use mpl2::braceforge::{cyclic_brace_family, klein_semidirect_solution, CyclicKind};
use mpl2::enumerate::{
    census, census_breakdown, count_formula_cyclic, count_formula_elementary, format_table,
    oracle_check, table1_report,
};
use mpl2::intlat::{iso_type_label, AbGroup};
use mpl2::permkit::DEFAULT_CAP;
use mpl2::quotients::{aut_is_regular, descriptor_partition, enumerate_congruences, image_report, quotient_by};
use mpl2::sconstruct::{all_params, build_solution, is_s_representable};
use mpl2::ybecore::{
    automorphism_group, brute_congruences, displacement_group, displacement_laws, find_isomorphism,
    is_indecomposable, is_uniconnected, multipermutation_level, permutation_group, FinSolution,
};

use common::{twelve_point, dihedral_params, thirty_two_point, quaternion_params, theta};

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table1() -> Outcome {
    let start = Instant::now();
    let rows = table1_report(16).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let totals: Vec<usize> = rows.iter().map(|r| r.total).collect();
    let abelian: Vec<usize> = rows.iter().map(|r| r.abelian).collect();
    let cyclic: Vec<usize> = rows.iter().map(|r| r.cyclic).collect();
    ensure(
        totals == [1, 1, 1, 3, 1, 10, 1, 19, 13, 36, 1, 136, 1, 134, 151, 403]
            && abelian == [1, 1, 1, 3, 1, 1, 1, 3, 4, 1, 1, 3, 1, 1, 1, 7]
            && cyclic == [1, 1, 1, 2, 1, 1, 1, 2, 3, 1, 1, 2, 1, 1, 1, 4],
        || format!("\n{}", format_table(&rows)),
    )?;
    ensure(secs < 60.0, || format!("took {secs:.1}s"))
}

fn breakdown16() -> Outcome {
    let got: Vec<(usize, String, usize)> =
        census_breakdown(16).map_err(|e| e.to_string())?.into_iter().map(|((m, g), c)| (m, g, c)).collect();
    let want = vec![
        (2, "Z_8".to_string(), 8),
        (4, "Z_2^2".to_string(), 28),
        (4, "Z_4".to_string(), 112),
        (8, "Z_2".to_string(), 254),
        (16, "Z_1".to_string(), 1),
    ];
    ensure(got == want, || format!("{got:?}"))
}

fn formulas() -> Outcome {
    let mut cache: BTreeMap<usize, BTreeMap<(usize, String), usize>> = BTreeMap::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        for k in 0u32..=4 {
            let pk = p.pow(k) as usize;
            for m in 1..=16 / pk {
                let s = pk * m;
                let b = cache.entry(s).or_insert_with(|| census_breakdown(s).unwrap());
                let elementary = iso_type_label(&vec![p as i64; k as usize]);
                let have = *b.get(&(m, elementary.clone())).unwrap_or(&0) as u128;
                let want = count_formula_elementary(p, k, m as u32);
                ensure(have == want, || format!("elementary p={p} k={k} m={m}: census {have}, formula {want}"))?;
                if k >= 1 && m >= 2 {
                    let cyclic = iso_type_label(&[pk as i64]);
                    let have = *b.get(&(m, cyclic)).unwrap_or(&0) as u128;
                    let want = count_formula_cyclic(p, k, m as u32);
                    ensure(have == want, || format!("cyclic p={p} k={k} m={m}: census {have}, formula {want}"))?;
                }
                if k == 1 {
                    let closed = ((p as u128).pow(m as u32) - p as u128) / (p as u128 - 1);
                    ensure(count_formula_elementary(p, 1, m as u32) == closed, || format!("k=1 p={p} m={m}"))?;
                }
            }
        }
    }
    let nine_cycles = census(9)
        .map_err(|e| e.to_string())?
        .iter()
        .filter(|e| {
            let s = e.solution().unwrap();
            s.sigma_perms().iter().all(|q| q.cycle_type() == [9])
        })
        .count();
    ensure(nine_cycles == 9, || format!("{nine_cycles} solutions of size 9 made of 9-cycles"))
}

fn oracles() -> Outcome {
    let start = Instant::now();
    for size in 1..=16 {
        let mut level_one = 0;
        for e in census(size).map_err(|e| e.to_string())? {
            let s = e.solution().map_err(|e| e.to_string())?;
            let check = oracle_check(&s);
            ensure(check.passes(), || format!("{} {check:?}", e.file_stem()))?;
            level_one += usize::from(check.level.unwrap() <= 1);
        }
        ensure(level_one == 1, || format!("size {size}: {level_one} solutions of level at most 1"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {secs:.1}s"))
}

fn completeness() -> Outcome {
    let mut groups = vec![AbGroup::trivial()];
    for f in [vec![2], vec![3], vec![4], vec![2, 2], vec![5], vec![6]] {
        groups.push(AbGroup::new(f).unwrap());
    }
    for g in groups {
        for n in 1..=12 / g.order() {
            for p in all_params(&g, n) {
                let s = build_solution(&p).map_err(|e| e.to_string())?;
                let brute: BTreeSet<Vec<usize>> = brute_congruences(&s).map_err(|e| e.to_string())?.into_iter().collect();
                let ours: Vec<Vec<usize>> = enumerate_congruences(&p)
                    .map_err(|e| e.to_string())?
                    .iter()
                    .map(|d| descriptor_partition(&p, d).unwrap())
                    .collect();
                let set: BTreeSet<Vec<usize>> = ours.iter().cloned().collect();
                ensure(set.len() == ours.len() && set == brute, || format!("{:?}", p.to_json()))?;
            }
        }
    }
    let p = twelve_point();
    let got: Vec<(usize, usize, i64)> = enumerate_congruences(&p)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|d| (d.m, d.h.order(), d.r.coords()[0]))
        .collect();
    ensure(
        got == [(6, 1, 0), (3, 1, 0), (3, 1, 1), (6, 2, 0), (3, 2, 0), (2, 2, 0), (1, 2, 0)],
        || format!("{got:?}"),
    )
}

fn six_point_quotient() -> Outcome {
    let p = twelve_point();
    let y = quotient_by(&p, &theta(&p, 3, &[], &[1])).map_err(|e| e.to_string())?;
    let g = permutation_group(&y).map_err(|e| e.to_string())?;
    let dis = displacement_group(&y).map_err(|e| e.to_string())?;
    let aut = automorphism_group(&y).map_err(|e| e.to_string())?;
    let klein = dis.order() == 4 && dis.predicates().is_abelian && dis.elements().iter().all(|x| x.order() <= 2);
    ensure(y.size() == 6, || format!("size {}", y.size()))?;
    ensure(g.order() == 24, || format!("|G(Y)| = {}", g.order()))?;
    ensure(klein, || format!("Dis(Y) has order {}", dis.order()))?;
    ensure(aut.order() == 6 && aut.predicates().is_regular, || format!("|Aut(Y)| = {}", aut.order()))?;
    ensure(!is_s_representable(&y).map_err(|e| e.to_string())?, || "representable".into())
}

fn thirty_two_point_solution() -> Outcome {
    let s = build_solution(&thirty_two_point()).map_err(|e| e.to_string())?;
    let dis = displacement_group(&s).map_err(|e| e.to_string())?.order();
    let g = permutation_group(&s).map_err(|e| e.to_string())?.order();
    let level = multipermutation_level(&s).map_err(|e| e.to_string())?;
    let uni = is_uniconnected(&s).map_err(|e| e.to_string())?;
    ensure(
        dis == 32 && g == 128 && is_indecomposable(&s) && !uni && level == 2,
        || format!("|Dis|={dis} |G|={g} level={level} uniconnected={uni}"),
    )
}

fn braces() -> Outcome {
    for m in [3u32, 4] {
        let dihedral = cyclic_brace_family(CyclicKind::Dihedral, m).map_err(|e| e.to_string())?;
        let p = dihedral_params(m);
        let image = quotient_by(&p, &theta(&p, 2, &[], &[0])).map_err(|e| e.to_string())?;
        ensure(find_isomorphism(&dihedral, &image).is_some(), || format!("dihedral m={m}"))?;
        let quaternion = cyclic_brace_family(CyclicKind::Quaternion, m).map_err(|e| e.to_string())?;
        let (p, d) = quaternion_params(m);
        let image = quotient_by(&p, &d).map_err(|e| e.to_string())?;
        ensure(find_isomorphism(&quaternion, &image).is_some(), || format!("quaternion m={m}"))?;
    }
    let s = klein_semidirect_solution();
    let g = permutation_group(&s).map_err(|e| e.to_string())?;
    ensure(
        s.size() == 12 && is_uniconnected(&s).unwrap() && g.order() == 12 && !g.predicates().is_abelian,
        || format!("size {} |G| {}", s.size(), g.order()),
    )
}

fn properties() -> Outcome {
    let mut corpus: Vec<(String, FinSolution, Option<(usize, usize, usize)>)> = Vec::new();
    for size in 1..=12 {
        for e in census(size).map_err(|e| e.to_string())? {
            let a = e.lattice.quotient();
            let k = a.element_order(&e.rbar) as usize;
            corpus.push((e.file_stem(), e.solution().unwrap(), Some((a.order(), e.m, k))));
        }
    }
    let p = thirty_two_point();
    corpus.push(("thirty_two_point".into(), build_solution(&p).unwrap(), Some((p.group().order(), p.n(), 1))));
    let p = twelve_point();
    for d in enumerate_congruences(&p).unwrap() {
        let a = d.h.index();
        let y = quotient_by(&p, &d).unwrap();
        let k = mpl2::quotients::quotient_invariant_report(&p, &d).unwrap().r_order;
        corpus.push((format!("twelve_point {}", d.label()), y, Some((a, d.m, k))));
    }
    for m in [3u32, 4] {
        corpus.push((format!("dihedral {m}"), cyclic_brace_family(CyclicKind::Dihedral, m).unwrap(), None));
        corpus.push((format!("quaternion {m}"), cyclic_brace_family(CyclicKind::Quaternion, m).unwrap(), None));
    }
    corpus.push(("klein semidirect".into(), klein_semidirect_solution(), None));
    for (name, s, expected) in &corpus {
        let laws = displacement_laws(s).map_err(|e| format!("{name}: {e}"))?;
        ensure(laws.all_hold(), || format!("{name}: {laws:?}"))?;
        ensure(aut_is_regular(s).map_err(|e| e.to_string())?, || format!("{name}: Aut not regular"))?;
        if let Some((index, m, k)) = expected {
            let rep = image_report(s, *index, *m, *k, DEFAULT_CAP).map_err(|e| e.to_string())?;
            ensure(rep.all_hold(), || format!("{name}: {rep:?}"))?;
        }
    }
    Ok(())
}

fn pairwise() -> Outcome {
    for size in 1..=10 {
        let sols: Vec<FinSolution> = census(size).unwrap().iter().map(|e| e.solution().unwrap()).collect();
        let mut pairs = 0;
        for i in 0..sols.len() {
            for j in i + 1..sols.len() {
                ensure(find_isomorphism(&sols[i], &sols[j]).is_none(), || format!("size {size}: {i} ≅ {j}"))?;
                pairs += 1;
            }
        }
        let expected = sols.len() * sols.len().saturating_sub(1) / 2;
        ensure(pairs == expected, || format!("size {size}: {pairs} pairs"))?;
        if size == 6 {
            ensure(pairs == 45, || format!("{pairs} pairs at size 6"))?;
        }
        if size == 8 {
            ensure(pairs == 171, || format!("{pairs} pairs at size 8"))?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("table 1 reproduction", table1),
        ("size 16 breakdown", breakdown16),
        ("counting formulas", formulas),
        ("census oracle soundness", oracles),
        ("congruence completeness", completeness),
        ("six point quotient", six_point_quotient),
        ("32 point example", thirty_two_point_solution),
        ("brace cross-ties", braces),
        ("property suites", properties),
        ("pairwise non-isomorphism", pairwise),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
