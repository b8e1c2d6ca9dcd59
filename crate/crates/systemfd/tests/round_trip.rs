//! Printing then parsing gives back the same tree, for core terms, types,
//! programs and class-language programs.

use proptest::prelude::*;
use systemfd::propcheck::{gen_well_typed, GenConfig, PreludeKind};
use systemfd::surface::{parse_surface, print_surface};
use systemfd::syntax::{parse_core, parse_term, parse_type, print_core, print_term, print_type};

fn prelude_kind() -> impl Strategy<Value = PreludeKind> {
    proptest::sample::select(PreludeKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generated_terms_and_types_round_trip(seed in any::<u64>(), prelude in prelude_kind(), size in 1usize..30) {
        let cfg = GenConfig { seed, size, prelude, ..GenConfig::default() };
        let (_, m, ty) = gen_well_typed(&cfg).unwrap();
        let text = print_term(&m);
        prop_assert_eq!(parse_term(&text).unwrap(), m, "{}", text);
        let text = print_type(&ty);
        prop_assert_eq!(parse_type(&text).unwrap(), ty, "{}", text);
    }
}

#[test]
fn corpus_round_trips() {
    for (name, text) in systemfd::corpus::ALL {
        let p = parse_surface(text).unwrap();
        let printed = print_surface(&p);
        assert_eq!(parse_surface(&printed).unwrap(), p, "{name}");
    }
    let prelude = parse_core(systemfd::prelude::PRELUDE).unwrap();
    assert_eq!(parse_core(&print_core(&prelude)).unwrap(), prelude);
}
