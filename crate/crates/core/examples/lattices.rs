//! Smith normal form, finite abelian quotients and sublattices of Z^r.

use mpl2::intlat::{iso_type_label, smith_normal_form, sublattices_of_index, IntMatrix};

fn main() {
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
    let snf = smith_normal_form(&m).unwrap();
    println!("invariant factors {:?}", snf.diagonal());

    let lattices = sublattices_of_index(3, 4).unwrap();
    println!("{} sublattices of index 4 in Z^3", lattices.len());
    for k in lattices.iter().take(5) {
        println!("  {:?} -> {}", k.hnf().to_rows(), iso_type_label(k.quotient().factors()));
    }
}
