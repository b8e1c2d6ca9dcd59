//! Reduce terms step by step and to weak-head normal form.

use systemfd::reduce::{explore, whnf_traced, Whnf, DEFAULT_FUEL};
use systemfd::syntax::{parse_term, print_term};

fn main() {
    let env = systemfd::prelude::env();
    let m = parse_term("(\\b:Bool. if b is True then 0 else b) True <+> (\\b:Bool. b) False").unwrap();
    println!("{}", print_term(&m));
    let r = whnf_traced(&env, &m, DEFAULT_FUEL, &mut |s| println!("  --{}--> {}", s.rule.tag(), print_term(&s.term)));
    match r {
        Whnf::Value { term, steps } => println!("value {} after {steps} steps", print_term(&term)),
        Whnf::ZeroResult { steps } => println!("0 after {steps} steps"),
        other => println!("{other:?}"),
    }
    let all = explore(&env, &m, 1000);
    println!("every path: {:?} (zero reached: {})", all.values.iter().map(print_term).collect::<Vec<_>>(), all.reached_zero);
}
