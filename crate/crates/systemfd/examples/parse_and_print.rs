//! Parse core declarations and print them back in canonical form.

use systemfd::syntax::{parse_core, print_core};

fn main() {
    let text = "data Pair : * -> * -> *; ctor MkPair : forall a b. a -> b -> Pair a b;
        let swap : forall a b. Pair a b -> Pair b a =
          /\\a:*. /\\b:*. \\p:Pair a b. if p is MkPair [a] [b] then \\x:a. \\y:b. MkPair [b] [a] y x else 0;";
    let program = parse_core(text).expect("parses");
    let printed = print_core(&program);
    print!("{printed}");
    assert_eq!(print_core(&parse_core(&printed).unwrap()), printed);
}
