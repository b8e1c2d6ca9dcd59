//! Check progress, preservation and the other metatheory properties on
//! generated well-typed terms.

use systemfd::propcheck::{gen_well_typed, run_property, GenConfig, PreludeKind, PROPERTIES};
use systemfd::syntax::{print_term, print_type};

fn main() {
    let cfg = GenConfig { seed: 1, size: 12, prelude: PreludeKind::Maybe, ..GenConfig::default() };
    let (_, m, ty) = gen_well_typed(&cfg).unwrap();
    println!("sample: {} : {}", print_term(&m), print_type(&ty));
    for kind in PreludeKind::ALL {
        for prop in PROPERTIES {
            let cfg = GenConfig { seed: 0, prelude: kind, ..GenConfig::default() };
            println!("{}", run_property(prop, &cfg, 50).unwrap().render());
        }
    }
}
