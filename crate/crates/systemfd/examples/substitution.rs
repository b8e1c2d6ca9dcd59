//! Parallel de Bruijn substitution: apply, compose, lift and instantiate.

use systemfd::subst::{apply, instantiate, Action, Subst};
use systemfd::syntax::{parse_type, print_type, Node};

fn main() {
    // forall a. a -> #0 -> #1, with two free variables.
    let t = Node::forall(
        systemfd::syntax::Hint::new("a"),
        Node::Star,
        Node::arrow(Node::Var(0), Node::arrow(Node::Var(1), Node::Var(2))),
    );
    println!("t         = {}", print_type(&t));
    let s1 = Subst::new(vec![Action::Replace(parse_type("Bool").unwrap()), Action::Rename(0)], 1);
    let s2 = Subst::single(parse_type("Maybe Bool").unwrap());
    println!("s1        = {s1}");
    println!("s1 t      = {}", print_type(&apply(&s1, &t)));
    println!("s2 (s1 t) = {}", print_type(&apply(&s2, &apply(&s1, &t))));
    println!("(s1;s2) t = {}", print_type(&apply(&Subst::compose(&s1, &s2), &t)));
    if let Node::Forall(_, _, body) = &t {
        println!("t [Bool]  = {}", print_type(&instantiate(body, &parse_type("Bool").unwrap())));
    }
}
