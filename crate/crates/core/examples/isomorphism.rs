//! Isomorphism search between quotients of one solution.

use mpl2::quotients::{enumerate_congruences, quotient_by, quotients_isomorphic};
use mpl2::sconstruct::SParams;
use mpl2::ybecore::find_isomorphism;

fn main() {
    let p = SParams::from_raw(&[4], 4, &[vec![0], vec![1], vec![0], vec![1]]).unwrap();
    let ds = enumerate_congruences(&p).unwrap();
    for a in &ds {
        for b in &ds {
            let ya = quotient_by(&p, a).unwrap();
            let yb = quotient_by(&p, b).unwrap();
            if ya.size() == yb.size() && a != b {
                let found = find_isomorphism(&ya, &yb).is_some();
                println!("{} vs {}: {found} (predicted {})", a.label(), b.label(), quotients_isomorphic(&p, a, b));
            }
        }
    }
}
