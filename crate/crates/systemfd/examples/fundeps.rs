//! Functional dependencies: an improving coercion lets `f` use `not` at an
//! unknown type, and conflicting instances are rejected.

use systemfd::reduce::{whnf, Whnf};
use systemfd::syntax::{parse_term, print_term};

fn main() {
    let env = systemfd::corpus::elaborate(systemfd::corpus::FUNDEPS_POLYMORPHIC).unwrap();
    let m = parse_term("f [Bool] dFIB True").unwrap();
    match whnf(&env, &m, 10_000) {
        Whnf::Value { term, steps } => println!("f [Bool] dFIB True = {} ({steps} steps)", print_term(&term)),
        other => println!("{other:?}"),
    }
    for d in systemfd::corpus::elaborate(systemfd::corpus::FUNDEPS_ERRONEOUS).unwrap_err() {
        println!("{}", d.render());
    }
}
