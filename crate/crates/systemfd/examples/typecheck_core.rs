//! Typecheck a core program, then infer the types of some expressions.

use systemfd::syntax::{parse_core, parse_term, print_type};
use systemfd::typing::{check_program, infer_term};

fn main() {
    let program = parse_core(
        "let not2 : Bool -> Bool = \\b:Bool. if b is True then False else True;
         let oops : Bool = not2 not2;",
    )
    .unwrap();
    let (env, diags) = check_program(&systemfd::prelude::env(), &program);
    for d in &diags {
        println!("{}", d.render());
    }
    for e in ["not2", "not2 True", "True <+> False", "0", "/\\a:*. \\x:a. x"] {
        match infer_term(&env, &parse_term(e).unwrap()) {
            Ok(t) => println!("{e} : {}", print_type(&t.pattern())),
            Err(d) => println!("{e}: {}", d.render()),
        }
    }
}
