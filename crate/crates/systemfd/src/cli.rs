//! The `fdc` command-line driver.
//!
//! Files ending in `.hsk` are class-language programs and are elaborated;
//! anything else is read as core declarations. Both are checked on top of
//! the bundled prelude, or the file named by `FDC_PRELUDE`.
//!
//! Exit codes: 0 on success, 1 when diagnostics were reported, 2 on usage
//! and I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{check_hssdi_with, specialize};
use crate::diag::Diagnostic;
use crate::elab::{elaborate_program, Absurd, Options, Overlap};
use crate::env::Env;
use crate::propcheck::{run_property, GenConfig, PreludeKind, PROPERTIES};
use crate::reduce::{choice_leaves, explore_bounded, whnf, Whnf, DEFAULT_FUEL};
use crate::surface::parse_surface;
use crate::syntax::{parse_core, parse_term, print_core, print_term, print_type, Program};
use crate::typing::{check_program, infer_term, TypeResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Node budget for the terms `eval --all` keeps in memory.
const EXPLORE_NODES: usize = 20_000_000;

#[derive(Parser, Debug)]
#[command(name = "fdc", version, about = "Check, elaborate, evaluate and analyze core and class-language programs")]
pub struct Cli {
    /// Print line-delimited JSON records instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Typecheck programs.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        elab: ElabArgs,
    },
    /// Print the core translation of class-language programs.
    Elab {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        elab: ElabArgs,
    },
    /// Evaluate an expression in the scope of a program.
    Eval {
        file: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Enumerate every reduction path breadth first.
        #[arg(long, conflicts_with = "det")]
        all: bool,
        /// Follow the deterministic strategy to weak-head normal form (default).
        #[arg(long)]
        det: bool,
        #[command(flatten)]
        elab: ElabArgs,
    },
    /// Remove open functions, guards and zeroes from an expression.
    Specialize {
        file: PathBuf,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[command(flatten)]
        elab: ElabArgs,
    },
    /// Check that open functions have statically determined instances.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        elab: ElabArgs,
    },
    /// Run metatheory properties on generated terms.
    Fuzz {
        /// Property to run; all of them when absent.
        #[arg(long)]
        prop: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 30)]
        size: usize,
        /// bool, maybe, eq-ord or fundep-f; all of them when absent.
        #[arg(long)]
        prelude: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ElabArgs {
    #[arg(long, value_enum, default_value_t = OverlapArg::Reject)]
    pub overlap: OverlapArg,
    #[arg(long, value_enum, default_value_t = AbsurdArg::Diverge)]
    pub absurd: AbsurdArg,
    #[arg(long, default_value_t = 64)]
    pub synth_depth: usize,
    #[arg(long, default_value_t = 16)]
    pub resolve_depth: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapArg {
    Reject,
    First,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbsurdArg {
    Diverge,
    Omit,
}

impl ElabArgs {
    fn options(&self) -> Options {
        Options {
            overlap: match self.overlap {
                OverlapArg::Reject => Overlap::Reject,
                OverlapArg::First => Overlap::First,
            },
            absurd: match self.absurd {
                AbsurdArg::Diverge => Absurd::Diverge,
                AbsurdArg::Omit => Absurd::Omit,
            },
            synth_depth: self.synth_depth,
            resolve_depth: self.resolve_depth,
        }
    }
}

/// Errors that are not diagnostics about the input program.
#[derive(Debug, thiserror::Error)]
enum Fatal {
    #[error("cannot read `{0}`: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Usage(String),
}

enum Failure {
    Diags(Vec<Diagnostic>),
    Fatal(Fatal),
}

impl From<Vec<Diagnostic>> for Failure {
    fn from(d: Vec<Diagnostic>) -> Self {
        Failure::Diags(d)
    }
}

impl From<Diagnostic> for Failure {
    fn from(d: Diagnostic) -> Self {
        Failure::Diags(vec![d])
    }
}

impl From<Fatal> for Failure {
    fn from(f: Fatal) -> Self {
        Failure::Fatal(f)
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn line(&mut self, s: &str) {
        let _ = writeln!(self.out, "{s}");
    }

    fn record(&mut self, v: serde_json::Value) {
        let _ = writeln!(self.out, "{v}");
    }

    fn diags(&mut self, ds: &[Diagnostic]) {
        for d in ds {
            if self.json {
                let _ = writeln!(self.out, "{}", d.to_json());
            } else {
                let _ = writeln!(self.err, "{}", d.render());
            }
        }
    }
}

/// A checked program with the environment it extends the prelude to.
struct Loaded {
    program: Program,
    env: Env,
}

fn read(path: &Path) -> Result<String, Fatal> {
    std::fs::read_to_string(path).map_err(|e| Fatal::Io(path.display().to_string(), e))
}

/// Attach the line of each failing declaration, found by scanning the
/// source for the declarations in order.
fn locate(text: &str, p: &Program, diags: Vec<Diagnostic>) -> Vec<Diagnostic> {
    let mut lines = vec![];
    let mut from = 0;
    for d in &p.decls {
        let found = text[from..].match_indices(d.name()).find(|(i, _)| {
            let at = from + i;
            let before = text[..at].trim_end();
            let word = before.rsplit(|c: char| c.is_whitespace()).next().unwrap_or("");
            let after = text[at + d.name().len()..].chars().next();
            ["data", "ctor", "open", "openctor", "method", "instance", "let"].contains(&word)
                && !after.is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        });
        match found {
            Some((i, _)) => {
                let at = from + i;
                let line = text[..at].matches('\n').count() + 1;
                let col = at - text[..at].rfind('\n').map_or(0, |j| j + 1) + 1;
                lines.push((d.name().to_string(), line, col));
                from = at + d.name().len();
            }
            None => lines.push((d.name().to_string(), 0, 0)),
        }
    }
    let mut used = vec![false; lines.len()];
    diags
        .into_iter()
        .map(|d| {
            let hit = d.decl.as_ref().and_then(|n| (0..lines.len()).find(|&i| !used[i] && lines[i].0 == *n && lines[i].1 > 0));
            match hit {
                Some(i) if d.line.is_none() => {
                    used[i] = true;
                    d.at(lines[i].1, lines[i].2)
                }
                _ => d,
            }
        })
        .collect()
}

fn load(path: &Path, prelude: &Env, opts: &Options) -> Result<Loaded, Failure> {
    let text = read(path)?;
    let name = path.display().to_string();
    let tag = |ds: Vec<Diagnostic>| ds.into_iter().map(|d| d.in_file(&name)).collect::<Vec<_>>();
    if path.extension().is_some_and(|e| e == "hsk") {
        let sp = parse_surface(&text).map_err(|e| tag(vec![Diagnostic::from(e)]))?;
        let (program, env) = elaborate_program(&sp, prelude, opts).map_err(tag)?;
        Ok(Loaded { program, env })
    } else {
        let program = parse_core(&text).map_err(|e| tag(vec![Diagnostic::from(e)]))?;
        let (env, diags) = check_program(prelude, &program);
        if diags.is_empty() {
            Ok(Loaded { program, env })
        } else {
            Err(Failure::Diags(tag(locate(&text, &program, diags))))
        }
    }
}

/// Parse and typecheck a closed expression in `env`.
fn expression(env: &Env, expr: &str) -> Result<(crate::syntax::Node, TypeResult), Failure> {
    let m = parse_term(expr).map_err(|e| Diagnostic::from(e).in_file("<expr>"))?;
    let ty = infer_term(env, &m).map_err(|d| d.in_file("<expr>"))?;
    Ok((m, ty))
}

fn prelude() -> Result<Env, Failure> {
    crate::prelude::from_environment().map_err(Failure::Diags)
}

fn cmd_check(io: &mut Io, files: &[PathBuf], opts: &Options) -> Result<(), Failure> {
    let prelude = prelude()?;
    let mut all = vec![];
    for f in files {
        match load(f, &prelude, opts) {
            Ok(l) => {
                let n = l.program.decls.len();
                if io.json {
                    io.record(json!({"file": f.display().to_string(), "status": "ok", "decls": n}));
                } else {
                    io.line(&format!("{}: ok ({n} declarations)", f.display()));
                }
            }
            Err(Failure::Diags(d)) => all.extend(d),
            Err(e) => return Err(e),
        }
    }
    if all.is_empty() {
        Ok(())
    } else {
        Err(Failure::Diags(all))
    }
}

fn cmd_elab(io: &mut Io, files: &[PathBuf], opts: &Options) -> Result<(), Failure> {
    let prelude = prelude()?;
    for f in files {
        let l = load(f, &prelude, opts)?;
        let core = print_core(&l.program);
        if io.json {
            io.record(json!({"file": f.display().to_string(), "core": core}));
        } else {
            let _ = write!(io.out, "{core}");
        }
    }
    Ok(())
}

fn cmd_eval(io: &mut Io, file: &Path, expr: &str, fuel: usize, all: bool, opts: &Options) -> Result<(), Failure> {
    let l = load(file, &prelude()?, opts)?;
    let (m, ty) = expression(&l.env, expr)?;
    let ty = print_type(&ty.pattern());
    if all {
        let ex = explore_bounded(&l.env, &m, fuel, EXPLORE_NODES);
        let mut values: Vec<String> = vec![];
        for v in ex.values.iter().flat_map(choice_leaves) {
            let v = print_term(v);
            if !values.contains(&v) {
                values.push(v);
            }
        }
        if io.json {
            io.record(json!({"values": values, "zero": ex.reached_zero, "type": ty, "expanded": ex.expanded, "exhausted": ex.exhausted}));
        } else {
            for v in &values {
                io.line(v);
            }
            if ex.reached_zero {
                io.line("0");
            }
            if ex.exhausted {
                let _ = writeln!(io.err, "note: fuel exhausted after {} terms", ex.expanded);
            }
        }
        if let Some(s) = ex.stuck.first() {
            return Err(Diagnostic::new("stuck", format!("no rule applies to `{}`", print_term(s))).into());
        }
        return Ok(());
    }
    match whnf(&l.env, &m, fuel) {
        Whnf::Value { term, steps } => {
            if io.json {
                io.record(json!({"result": "value", "term": print_term(&term), "type": ty, "steps": steps}));
            } else {
                io.line(&print_term(&term));
            }
            Ok(())
        }
        Whnf::ZeroResult { steps } => {
            if io.json {
                io.record(json!({"result": "zero", "type": ty, "steps": steps}));
            } else {
                io.line("0");
            }
            Ok(())
        }
        Whnf::OutOfFuel(t) => Err(Diagnostic::new("out-of-fuel", format!("no value after {fuel} steps"))
            .with_path(vec![print_term(&t).chars().take(200).collect()])
            .into()),
        Whnf::Stuck(t) => Err(Diagnostic::new("stuck", format!("no rule applies to `{}`", print_term(&t))).into()),
    }
}

fn cmd_specialize(io: &mut Io, file: &Path, expr: &str, opts: &Options) -> Result<(), Failure> {
    let l = load(file, &prelude()?, opts)?;
    let (m, ty) = expression(&l.env, expr)?;
    let s = specialize(&l.env, &m)?;
    let ty2 = infer_term(&l.env, &s)?;
    if ty2.pattern() != ty.pattern() {
        return Err(Diagnostic::mismatch(
            "specialize-type",
            "specialized term changed type",
            print_type(&ty.pattern()),
            print_type(&ty2.pattern()),
        )
        .into());
    }
    if io.json {
        io.record(json!({"term": print_term(&s), "type": print_type(&ty.pattern())}));
    } else {
        io.line(&print_term(&s));
    }
    Ok(())
}

fn cmd_analyze(io: &mut Io, files: &[PathBuf], opts: &Options) -> Result<(), Failure> {
    let prelude = prelude()?;
    let mut ok = true;
    for f in files {
        let l = load(f, &prelude, opts)?;
        let report = check_hssdi_with(&l.env, opts.absurd == Absurd::Omit);
        ok &= report.ok();
        if io.json {
            io.record(json!({"file": f.display().to_string(), "ok": report.ok(), "functions": report.functions}));
        } else {
            io.line(&format!("{}:", f.display()));
            let _ = write!(io.out, "{}", report.render());
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Diags(vec![]))
    }
}

fn cmd_fuzz(io: &mut Io, prop: Option<&str>, prelude: Option<&str>, seed: u64, count: usize, size: usize) -> Result<(), Failure> {
    let props: Vec<&str> = match prop {
        Some(p) if PROPERTIES.contains(&p) => vec![p],
        Some(p) => {
            return Err(Fatal::Usage(format!("unknown property `{p}`; expected one of {}", PROPERTIES.join(", "))).into())
        }
        None => PROPERTIES.to_vec(),
    };
    let preludes = match prelude {
        Some(p) => vec![p.parse::<PreludeKind>().map_err(|e| Fatal::Usage(e.to_string()))?],
        None => PreludeKind::ALL.to_vec(),
    };
    let mut failed = false;
    for p in &preludes {
        for prop in &props {
            let cfg = GenConfig { seed, size, prelude: *p, ..GenConfig::default() };
            let r = run_property(prop, &cfg, count).map_err(|e| Fatal::Usage(e.to_string()))?;
            failed |= !r.passed();
            if io.json {
                io.record(serde_json::to_value(&r).expect("results serialize"));
            } else {
                io.line(&r.render());
            }
        }
    }
    if failed {
        Err(Failure::Diags(vec![]))
    } else {
        Ok(())
    }
}

/// Run `fdc` with `args` (including the program name), writing to `out`
/// and `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let mut io = Io { out, err, json: cli.json };
    let r = match &cli.command {
        Command::Check { files, elab } => cmd_check(&mut io, files, &elab.options()),
        Command::Elab { files, elab } => cmd_elab(&mut io, files, &elab.options()),
        Command::Eval { file, expr, fuel, all, elab, .. } => cmd_eval(&mut io, file, expr, *fuel, *all, &elab.options()),
        Command::Specialize { file, expr, elab } => cmd_specialize(&mut io, file, expr, &elab.options()),
        Command::Analyze { files, elab } => cmd_analyze(&mut io, files, &elab.options()),
        Command::Fuzz { prop, seed, count, size, prelude } => {
            cmd_fuzz(&mut io, prop.as_deref(), prelude.as_deref(), *seed, *count, *size)
        }
    };
    match r {
        Ok(()) => EXIT_OK,
        Err(Failure::Diags(ds)) => {
            io.diags(&ds);
            EXIT_DIAGNOSTICS
        }
        Err(Failure::Fatal(f)) => {
            if io.json {
                io.record(json!({"code": "usage", "message": f.to_string()}));
            } else {
                let _ = writeln!(io.err, "fdc: {f}");
            }
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests;
