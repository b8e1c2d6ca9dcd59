//! Specialization: substitute lets, unfold open functions applied to
//! concrete evidence into the choice of their instances, resolve the guard
//! preambles, and absorb the zeroes left by the instances that miss.

use super::{check_no_zero_syntactic, evidence_positions};
use crate::diag::Diagnostic;
use crate::env::{Env, Local};
use crate::reduce::{a_positions, get_at, replace_at, top_rules, Rule};
use crate::syntax::{print_term, Arg, Node, OwnedArg};

type R<T> = Result<T, Diagnostic>;

const FUEL: usize = 200_000;

struct Spec {
    env: Env,
    fuel: usize,
}

fn owned(args: &[Arg]) -> Vec<OwnedArg> {
    args.iter()
        .map(|a| match a {
            Arg::Term(t) => OwnedArg::Term((*t).clone()),
            Arg::Type(t) => OwnedArg::Type((*t).clone()),
        })
        .collect()
}

fn is_concrete(m: &Node) -> bool {
    matches!(m.spine().0, Node::Con(_))
}

impl Spec {
    fn tick(&mut self) -> R<()> {
        if self.fuel == 0 {
            return Err(Diagnostic::new("not-hssdi", "specialization does not terminate"));
        }
        self.fuel -= 1;
        Ok(())
    }

    /// Rewrite `m` until no rule applies anywhere.
    fn go(&mut self, m: &Node) -> R<Node> {
        self.tick()?;
        let mut m = m.clone();
        for &i in a_positions(&m) {
            let c = self.under(&m, i)?;
            m = replace_at(&m, &[i], c);
        }
        if let Some(r) = self.step(&m)? {
            return self.go(&r);
        }
        m = self.rest(&m)?;
        match self.step(&m)? {
            Some(r) => self.go(&r),
            None => Ok(m),
        }
    }

    fn under(&mut self, m: &Node, i: usize) -> R<Node> {
        let c = get_at(m, &[i]).clone();
        if let Node::Univ(h, k, _) = m {
            self.env.push_local(Local::TyVar(h.clone(), (**k).clone()));
            let r = self.go(&c);
            self.env.pop_local();
            return r;
        }
        self.go(&c)
    }

    /// Children outside evaluation positions.
    fn rest(&mut self, m: &Node) -> R<Node> {
        use Node::*;
        let bind = |s: &mut Self, l: Local, b: &Node| -> R<Node> {
            s.env.push_local(l);
            let r = s.go(b);
            s.env.pop_local();
            r
        };
        Ok(match m {
            Lam(h, t, b) => Node::lam(h.clone(), (**t).clone(), bind(self, Local::TmVar(h.clone(), (**t).clone()), b)?),
            TyLam(h, k, b) => Node::ty_lam(h.clone(), (**k).clone(), bind(self, Local::TyVar(h.clone(), (**k).clone()), b)?),
            App(f, a) => Node::app((**f).clone(), self.go(a)?),
            Cast(t, e) => Node::cast(self.go(t)?, (**e).clone()),
            If(s, p, c, a) => Node::if_((**s).clone(), p.clone(), self.go(c)?, self.go(a)?),
            Guard(s, p, c) => Node::guard((**s).clone(), p.clone(), self.go(c)?),
            Choice(a, b) => Node::choice(self.go(a)?, self.go(b)?),
            _ => m.clone(),
        })
    }

    /// One rewrite at the root.
    fn step(&mut self, m: &Node) -> R<Option<Node>> {
        // Zeroes and choices in evaluation positions.
        for &i in a_positions(m) {
            match get_at(m, &[i]) {
                Node::Zero => return Ok(Some(Node::Zero)),
                Node::Choice(a, b) => {
                    return Ok(Some(Node::choice(
                        replace_at(m, &[i], (**a).clone()),
                        replace_at(m, &[i], (**b).clone()),
                    )))
                }
                _ => {}
            }
        }
        if let Node::Ref(x) = m {
            if let Some(body) = self.env.let_body(x) {
                return Ok(Some(body.clone()));
            }
        }
        if let Some(r) = self.unfold(m)? {
            return Ok(Some(r));
        }
        for (rule, r) in top_rules(&self.env, m) {
            if !matches!(rule, Rule::Open | Rule::Let | Rule::If1 | Rule::If2) {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// An open function applied to concrete evidence becomes the choice of
    /// the instances that match it.
    fn unfold(&mut self, m: &Node) -> R<Option<Node>> {
        let (head, args) = m.spine();
        let Node::Ref(x) = head else { return Ok(None) };
        let Some(sigma) = self.env.method(x).cloned() else { return Ok(None) };
        let ev = evidence_positions(&self.env, &sigma);
        if ev.is_empty() {
            return Ok(None);
        }
        let term_args: Vec<&Node> = args
            .iter()
            .filter_map(|a| match a {
                Arg::Term(t) => Some(*t),
                _ => None,
            })
            .collect();
        // Unfold at the smallest spine holding all the evidence.
        if term_args.len() != ev.iter().max().unwrap() + 1 || !ev.iter().all(|&p| is_concrete(term_args[p])) {
            return Ok(None);
        }
        let args = owned(&args);
        let mut hits = vec![];
        for inst in self.env.instances(x).to_vec() {
            let r = self.go(&Node::apply_args(inst, args.clone()))?;
            if r != Node::Zero {
                hits.push(r);
            }
        }
        let Some(first) = hits.first().cloned() else {
            let shown: Vec<String> = ev.iter().map(|&p| print_term(term_args[p])).collect();
            return Err(Diagnostic::new(
                "unsaturated",
                format!("no instance of `{x}` matches evidence {}", shown.join(", ")),
            ));
        };
        Ok(Some(hits.into_iter().skip(1).fold(first, Node::choice)))
    }
}

/// Specialize `m`: the result has no guards, zeroes, open functions or lets
/// and agrees with `m` under evaluation. Terms already free of them are
/// returned unchanged.
pub fn specialize(env: &Env, m: &Node) -> Result<Node, Diagnostic> {
    if check_no_zero_syntactic(m) {
        return Ok(m.clone());
    }
    let mut s = Spec { env: env.clone(), fuel: FUEL };
    let r = s.go(m)?;
    if check_no_zero_syntactic(&r) {
        return Ok(r);
    }
    let mut culprit = None;
    r.visit(&mut |n| {
        if culprit.is_none() && matches!(n, Node::Guard(..) | Node::Zero | Node::Ref(_)) {
            culprit = Some(print_term(n));
        }
    });
    Err(Diagnostic::new(
        "not-hssdi",
        format!("evidence is not concrete; `{}` remains after specialization", culprit.unwrap_or_default()),
    ))
}
