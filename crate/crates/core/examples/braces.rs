//! Uniconnected solutions from cyclic and semidirect braces.

use mpl2::braceforge::{cyclic_brace_family, klein_semidirect_brace, klein_semidirect_solution, verify_brace, CyclicKind};
use mpl2::ybecore::{is_uniconnected, multipermutation_level, permutation_group};

fn main() {
    for kind in [CyclicKind::Dihedral, CyclicKind::Quaternion] {
        for m in 3..=5 {
            let s = cyclic_brace_family(kind, m).unwrap();
            println!(
                "{kind:?} m={m}: size {} level {} uniconnected {}",
                s.size(),
                multipermutation_level(&s).unwrap(),
                is_uniconnected(&s).unwrap()
            );
        }
    }
    let b = klein_semidirect_brace();
    println!("semidirect brace of size {} valid: {}", b.size(), verify_brace(&b).is_none());
    let s = klein_semidirect_solution();
    let g = permutation_group(&s).unwrap();
    println!("its solution: |G| = {}, abelian {}", g.order(), g.predicates().is_abelian);
}
