//! The bundled class-language programs and their elaborated environments.

use crate::diag::Diagnostic;
use crate::elab::{elaborate_program, Options};
use crate::env::Env;
use crate::surface::parse_surface;

pub const SUPERCLASSES: &str = include_str!("../corpus/superclasses.hsk");
pub const FUNDEPS: &str = include_str!("../corpus/fundeps.hsk");
pub const FUNDEPS_POLYMORPHIC: &str = include_str!("../corpus/fundeps_polymorphic.hsk");
pub const FUNDEPS_ERRONEOUS: &str = include_str!("../corpus/fundeps_erroneous.hsk");
pub const H98: &str = include_str!("../corpus/h98.hsk");

/// Every bundled program by file name.
pub const ALL: [(&str, &str); 5] = [
    ("superclasses.hsk", SUPERCLASSES),
    ("fundeps.hsk", FUNDEPS),
    ("fundeps_polymorphic.hsk", FUNDEPS_POLYMORPHIC),
    ("fundeps_erroneous.hsk", FUNDEPS_ERRONEOUS),
    ("h98.hsk", H98),
];

/// Elaborate `text` over the bundled prelude with default options.
pub fn elaborate(text: &str) -> Result<Env, Vec<Diagnostic>> {
    let p = parse_surface(text).map_err(|e| vec![Diagnostic::from(e)])?;
    elaborate_program(&p, &crate::prelude::env(), &Options::default()).map(|(_, env)| env)
}
