//! Consistency and LP-consistency of small 0-1 sets, and how one valid
//! inequality repairs each.

use logopt::clausal::{is_consistent_set, is_lp_consistent_set, Constraint};
use logopt::lp::text::parse_constraint;

fn rows(lines: &[&str]) -> Vec<Constraint> {
    lines.iter().map(|l| parse_constraint(1, l).expect("valid row").into()).collect()
}

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn main() {
    let mut s = rows(&["x1 + x2 + x3 >= 1", "x2 - x3 >= 0"]);
    let universe = vars(&["x1", "x2", "x3"]);
    let (ok, witness) = is_consistent_set(&s, &universe).expect("small universe");
    println!("consistent: {ok}, witness {}", witness.map_or("-".into(), |w| w.to_string()));
    s.extend(rows(&["x1 + x2 >= 1"]));
    println!("with x1 + x2 >= 1: {}", is_consistent_set(&s, &universe).expect("small universe").0);

    let mut t = rows(&["2 x1 + 2 x2 >= 1", "2 x1 - 2 x2 >= -1"]);
    let universe = vars(&["x1", "x2"]);
    let (ok, witness) = is_lp_consistent_set(&t, &universe).expect("small universe");
    println!("LP-consistent: {ok}, witness {}", witness.map_or("-".into(), |w| w.to_string()));
    t.extend(rows(&["x1 >= 1"]));
    println!("with x1 >= 1: {}", is_lp_consistent_set(&t, &universe).expect("small universe").0);
}
