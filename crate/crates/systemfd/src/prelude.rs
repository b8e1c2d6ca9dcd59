//! The bundled prelude: Booleans, `Maybe`, an opaque `Int`, and Boolean
//! operations written with `if`.

use std::sync::OnceLock;

use crate::diag::Diagnostic;
use crate::env::Env;
use crate::syntax::parse_core;
use crate::typing::check_program;

pub const PRELUDE: &str = r"-- bundled prelude
data Bool : *;
ctor True : Bool;
ctor False : Bool;
data Maybe : * -> *;
ctor Nothing : forall a. Maybe a;
ctor Just : forall a. a -> Maybe a;
data Int : *;
let not : Bool -> Bool = \b:Bool. if b is True then False else True;
let xor : Bool -> Bool -> Bool = \b:Bool. \c:Bool. if b is True then not c else c;
let or : Bool -> Bool -> Bool = \b:Bool. \c:Bool. if b is True then True else c;
let and : Bool -> Bool -> Bool = \b:Bool. \c:Bool. if b is True then c else False;
";

/// Check prelude text and return the environment it declares.
pub fn load(text: &str) -> Result<Env, Vec<Diagnostic>> {
    let prog = parse_core(text).map_err(|e| vec![Diagnostic::from(e).in_file("<prelude>")])?;
    let (env, diags) = check_program(&Env::new(), &prog);
    if diags.is_empty() {
        Ok(env)
    } else {
        Err(diags)
    }
}

/// The bundled prelude environment, checked once.
pub fn env() -> Env {
    static ENV: OnceLock<Env> = OnceLock::new();
    ENV.get_or_init(|| load(PRELUDE).expect("bundled prelude typechecks")).clone()
}

/// Prelude named by `FDC_PRELUDE`, or the bundled one.
pub fn from_environment() -> Result<Env, Vec<Diagnostic>> {
    match std::env::var("FDC_PRELUDE") {
        Ok(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| vec![Diagnostic::new("io", format!("cannot read prelude `{path}`: {e}"))])?;
            load(&text)
        }
        Err(_) => Ok(env()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_prelude_checks() {
        let e = env();
        assert!(e.let_body("xor").is_some());
        assert_eq!(e.ctors_of("Bool"), ["True".to_string(), "False".to_string()]);
        crate::typing::check_env(&e).unwrap();
    }
}
