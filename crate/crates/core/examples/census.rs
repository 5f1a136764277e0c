//! Counts of indecomposable solutions of level at most 2, by size.
//!
//! cargo run --example census [max_size]

use mpl2::enumerate::{census_breakdown, format_table, table1_report};

fn main() {
    let max: usize = std::env::args().nth(1).map_or(16, |s| s.parse().unwrap());
    print!("{}", format_table(&table1_report(max).unwrap()));
    println!();
    for ((m, g), c) in census_breakdown(max).unwrap() {
        println!("size {max}: m = {m:>2}, A = {g:<6} {c}");
    }
}
