//! Oracles on a solution read from a JSON file, or on a built-in one.
//!
//! cargo run --example verify_solution [path.json]

use mpl2::ybecore::{
    displacement_group, is_indecomposable, is_uniconnected, multipermutation_level, permutation_group, retract,
    FinSolution,
};

fn main() {
    let s = match std::env::args().nth(1) {
        Some(path) => FinSolution::from_json_str(&std::fs::read_to_string(path).unwrap()).unwrap(),
        None => FinSolution::from_fn(4, |x, y| if x % 2 == 0 { y ^ 1 } else { y ^ 3 }).unwrap(),
    };
    println!("size {}", s.size());
    println!("indecomposable {}", is_indecomposable(&s));
    println!("uniconnected {}", is_uniconnected(&s).unwrap());
    println!("level {:?}", multipermutation_level(&s).ok());
    println!("|G| {}  |Dis| {}", permutation_group(&s).unwrap().order(), displacement_group(&s).unwrap().order());
    let (ret, labels) = retract(&s).unwrap();
    println!("retraction has {} points, classes {:?}", ret.size(), labels);
}
