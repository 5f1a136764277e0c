//! Closure, orbits and stabilizers of a small permutation group.

use mpl2::permkit::{Perm, PermGroup, DEFAULT_CAP};

fn main() {
    let a = Perm::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap();
    let b = Perm::from_cycles(6, &[&[1, 5], &[2, 4]]).unwrap();
    let g = PermGroup::generate(6, vec![a, b], DEFAULT_CAP).unwrap();
    println!("order {}", g.order());
    println!("orbit of 0: {:?}", g.orbit(0));
    println!("stabilizer of 0 has {} elements", g.stabilizer(0).len());
    println!("{:?}", g.predicates());
}
