//! A core calculus with open data types, open functions, guarded choice and
//! first-class type-equality coercions, together with an elaborator that
//! translates type classes, superclasses and functional dependencies into it.
//!
//! Layers, bottom up:
//!
//! - [`syntax`]: one tree type for kinds, types, terms and coercions; the
//!   `.fd` reader and printer.
//! - [`subst`]: parallel de Bruijn substitutions.
//! - [`typing`]: kinding, typing, coercion typing, declaration checking.
//! - [`reduce`]: values, evaluation contexts, small-step reduction.
//! - [`surface`]: the `.hsk` class language.
//! - [`elab`]: classes and instances to core declarations.
//! - [`analysis`]: statically-determined-instance checks and specialization.
//! - [`propcheck`]: random well-typed terms and executable metatheory.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod diag;
pub mod elab;
pub mod env;
pub mod prelude;
pub mod propcheck;
pub mod reduce;
pub mod subst;
pub mod surface;
pub mod syntax;
pub mod typing;

pub use diag::Diagnostic;
pub use env::Env;
pub use syntax::{Decl, Node, Pattern, Program};

/// Run `f` on a thread with a large stack: checking and reducing recurse
/// over the tree, and generated or unfolded terms can be deep.
pub fn with_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(f)
        .expect("spawn worker thread")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}
