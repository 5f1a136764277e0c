//! S(G×Z_n, c) for G = Z_4×Z_2, n = 4 and its structural report.

use mpl2::sconstruct::{build_solution, c_matrix, s_report, SParams};

fn main() {
    let p = SParams::from_raw(&[4, 2], 4, &[vec![0, 0], vec![1, 0], vec![1, 0], vec![2, 1]]).unwrap();
    let s = build_solution(&p).unwrap();
    println!("{} points", s.size());
    for (i, row) in c_matrix(&p).iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| format!("{:?}", x.coords())).collect();
        println!("c_{i},j: {}", cells.join(" "));
    }
    println!("{:#?}", s_report(&p).unwrap());
}
