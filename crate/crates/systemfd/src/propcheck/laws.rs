//! Substitution laws checked against a direct recursive oracle that walks
//! binders and shifts replacements itself.

use rand::rngs::StdRng;
use rand::RngExt;

use crate::subst::{apply, instantiate, shift, Action, Subst};
use crate::syntax::{Hint, Node, Pattern};

/// Shift free variables at or above `cutoff` by `k`.
fn oracle_shift(n: &Node, cutoff: usize, k: usize) -> Node {
    oracle(n, cutoff, &|i| Action::Rename(i + k))
}

/// Apply the variable map `f` to the free variables of `n`, where `depth`
/// binders have been crossed.
fn oracle(n: &Node, depth: usize, f: &dyn Fn(usize) -> Action) -> Node {
    use Node::*;
    let go = |m: &Node| Box::new(oracle(m, depth, f));
    let under = |m: &Node| Box::new(oracle(m, depth + 1, f));
    match n {
        Var(i) if *i < depth => Var(*i),
        Var(i) => match f(i - depth) {
            Action::Rename(j) => Var(j + depth),
            Action::Replace(m) => oracle_shift(&m, 0, depth),
        },
        Star | TCon(_) | Wild | Con(_) | Ref(_) | Zero => n.clone(),
        KArrow(a, b) => KArrow(go(a), go(b)),
        TApp(a, b) => TApp(go(a), go(b)),
        EqTy(a, b, c) => EqTy(go(a), go(b), go(c)),
        Forall(h, k, b) => Forall(h.clone(), go(k), under(b)),
        Lam(h, t, b) => Lam(h.clone(), go(t), under(b)),
        TyLam(h, k, b) => TyLam(h.clone(), go(k), under(b)),
        Univ(h, k, b) => Univ(h.clone(), go(k), under(b)),
        App(a, b) => App(go(a), go(b)),
        TyApp(a, b) => TyApp(go(a), go(b)),
        Cast(a, b) => Cast(go(a), go(b)),
        Choice(a, b) => Choice(go(a), go(b)),
        Trans(a, b) => Trans(go(a), go(b)),
        CApp(a, b) => CApp(go(a), go(b)),
        CInst(a, b) => CInst(go(a), go(b)),
        Sim(a, b) => Sim(go(a), go(b)),
        Refl(a) => Refl(go(a)),
        Sym(a) => Sym(go(a)),
        Fst(a) => Fst(go(a)),
        Snd(a) => Snd(go(a)),
        If(s, p, c, a) => If(go(s), pattern(p, depth, f), go(c), go(a)),
        Guard(s, p, c) => Guard(go(s), pattern(p, depth, f), go(c)),
    }
}

fn pattern(p: &Pattern, depth: usize, f: &dyn Fn(usize) -> Action) -> Pattern {
    Pattern::new(p.head.clone(), p.type_args.iter().map(|t| oracle(t, depth, f)).collect())
}

/// An arbitrary tree (not necessarily well-typed) with free variables.
pub(crate) fn random_node(rng: &mut StdRng, size: usize) -> Node {
    let leaf = |rng: &mut StdRng| match rng.random_range(0..5) {
        0 => Node::tcon("Bool"),
        1 => Node::con("True"),
        2 => Node::Zero,
        _ => Node::Var(rng.random_range(0..6)),
    };
    if size == 0 {
        return leaf(rng);
    }
    let s = size - 1;
    let h = || Hint::new("v");
    let sub = |rng: &mut StdRng| random_node(rng, s / 2);
    match rng.random_range(0..14) {
        0 => leaf(rng),
        1 => Node::tapp(sub(rng), sub(rng)),
        2 => Node::arrow(sub(rng), sub(rng)),
        3 => Node::forall(h(), Node::Star, sub(rng)),
        4 => Node::eq_ty(sub(rng), sub(rng), Node::Star),
        5 => Node::lam(h(), sub(rng), sub(rng)),
        6 => Node::app(sub(rng), sub(rng)),
        7 => Node::ty_lam(h(), Node::Star, sub(rng)),
        8 => Node::ty_app(sub(rng), sub(rng)),
        9 => Node::cast(sub(rng), Node::refl(sub(rng))),
        10 => Node::choice(sub(rng), sub(rng)),
        11 => Node::if_(sub(rng), Pattern::new("Just", vec![sub(rng)]), sub(rng), sub(rng)),
        12 => Node::univ(h(), Node::Star, Node::sym(sub(rng))),
        _ => Node::cinst(Node::trans(sub(rng), sub(rng)), sub(rng)),
    }
}

pub(crate) fn random_subst(rng: &mut StdRng) -> Subst {
    let len = rng.random_range(0..4);
    let prefix = (0..len)
        .map(|_| {
            if rng.random_bool(0.5) {
                Action::Rename(rng.random_range(0..6))
            } else {
                Action::Replace(random_node(rng, 3))
            }
        })
        .collect();
    Subst::new(prefix, rng.random_range(0..3))
}

/// Check every law on one random triple; the error names the failed law.
pub(crate) fn check(rng: &mut StdRng, size: usize) -> Result<(), (String, Node)> {
    let n = random_node(rng, size);
    let s1 = random_subst(rng);
    let s2 = random_subst(rng);
    let fail = |law: &str, s: &Subst| Err((format!("{law} fails for {s}"), n.clone()));
    if apply(&Subst::id(), &n) != n {
        return fail("identity", &Subst::id());
    }
    if apply(&s1, &n) != oracle(&n, 0, &|i| s1.at(i)) {
        return fail("application", &s1);
    }
    if apply(&Subst::compose(&s1, &s2), &n) != apply(&s2, &apply(&s1, &n)) {
        return fail("composition", &Subst::compose(&s1, &s2));
    }
    let lifted = |i: usize| match i {
        0 => Action::Rename(0),
        _ => match s1.at(i - 1) {
            Action::Rename(j) => Action::Rename(j + 1),
            Action::Replace(m) => Action::Replace(oracle_shift(&m, 0, 1)),
        },
    };
    if apply(&s1.lift(), &n) != oracle(&n, 0, &lifted) {
        return fail("lifting", &s1.lift());
    }
    let k = rng.random_range(0..3);
    if shift(&n, k) != oracle_shift(&n, 0, k) {
        return fail("shifting", &Subst::shift(k));
    }
    let arg = random_node(rng, 2);
    let single = |i: usize| if i == 0 { Action::Replace(arg.clone()) } else { Action::Rename(i - 1) };
    if instantiate(&n, &arg) != oracle(&n, 0, &single) {
        return fail("instantiation", &Subst::single(arg.clone()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn oracle_agrees_on_a_binder() {
        // (forall v. #0 -> #1)[0 ↦ Bool]
        let n = Node::forall(Hint::new("v"), Node::Star, Node::arrow(Node::Var(0), Node::Var(1)));
        let s = Subst::single(Node::tcon("Bool"));
        let expected = Node::forall(Hint::new("v"), Node::Star, Node::arrow(Node::Var(0), Node::tcon("Bool")));
        assert_eq!(oracle(&n, 0, &|i| s.at(i)), expected);
        assert_eq!(apply(&s, &n), expected);
    }

    #[test]
    fn laws_hold_on_random_pairs() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            check(&mut rng, 12).unwrap();
        }
    }
}
