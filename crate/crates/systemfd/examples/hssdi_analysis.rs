//! Statically determined instances: a complete program passes, and removing
//! one instance makes saturation fail.

use systemfd::analysis::{check_hssdi, check_hssdi_with};
use systemfd::syntax::{parse_core, print_core};
use systemfd::typing::check_program;

fn main() {
    let sp = systemfd::surface::parse_surface(systemfd::corpus::FUNDEPS_POLYMORPHIC).unwrap();
    let opts = systemfd::elab::Options::default();
    let (core, env) = systemfd::elab::elaborate_program(&sp, &systemfd::prelude::env(), &opts).unwrap();
    print!("complete program:\n{}", check_hssdi(&env).render());

    let text: String = print_core(&core)
        .lines()
        .filter(|l| !(l.starts_with("instance fdFwd") && l.contains("guard d1 is FIB") && l.contains("guard d2 is FMM")))
        .map(|l| format!("{l}\n"))
        .collect();
    let (env, _) = check_program(&systemfd::prelude::env(), &parse_core(&text).unwrap());
    print!("without fdFwd (FIB, FMM):\n{}", check_hssdi(&env).render());
    print!("same, exempting contradictory tuples:\n{}", check_hssdi_with(&env, true).render());
}
