//! Specialize a method call to a term free of open functions and zeroes.

use systemfd::analysis::{check_no_zero_syntactic, specialize};
use systemfd::syntax::{parse_term, print_term};

fn main() {
    let env = systemfd::corpus::elaborate(systemfd::corpus::SUPERCLASSES).unwrap();
    for e in ["lte [Bool] dOrdBool False True", "eq [Bool] (ordEq [Bool] dOrdBool) True False"] {
        let s = specialize(&env, &parse_term(e).unwrap()).unwrap();
        println!("{e}\n  => {}\n  zero-free: {}", print_term(&s), check_no_zero_syntactic(&s));
    }
}
