//! Elaborate a class hierarchy with a superclass and run a method.

use systemfd::reduce::{whnf, Whnf, DEFAULT_FUEL};
use systemfd::syntax::{parse_term, print_core, print_term};

fn main() {
    let sp = systemfd::surface::parse_surface(systemfd::corpus::SUPERCLASSES).unwrap();
    let opts = systemfd::elab::Options::default();
    let (core, env) = systemfd::elab::elaborate_program(&sp, &systemfd::prelude::env(), &opts).unwrap();
    print!("{}", print_core(&core));
    let m = parse_term("lte [Bool] dOrdBool False True").unwrap();
    if let Whnf::Value { term, .. } = whnf(&env, &m, DEFAULT_FUEL) {
        println!("lte False True = {}", print_term(&term));
    }
}
