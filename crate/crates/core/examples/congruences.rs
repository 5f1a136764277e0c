//! All congruences of S(Z_2×Z_6, (0,1,1,0,1,1)) and the invariants of each quotient.

use mpl2::quotients::{enumerate_congruences, quotient_invariant_report};
use mpl2::sconstruct::SParams;

fn main() {
    let p = SParams::from_raw(&[2], 6, &[vec![0], vec![1], vec![1], vec![0], vec![1], vec![1]]).unwrap();
    for d in enumerate_congruences(&p).unwrap() {
        let rep = quotient_invariant_report(&p, &d).unwrap();
        println!(
            "{:<28} size {:>2}  cycle length {:?}  checks {}",
            d.label(),
            rep.size,
            rep.cycle_length(),
            if rep.all_hold() { "ok" } else { "FAILED" }
        );
    }
}
