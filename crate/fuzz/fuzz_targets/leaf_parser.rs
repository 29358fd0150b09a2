#![no_main]

use connint::simplicial::{build_prism_complex, parse_leaf, DiagonalRule};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(leaf) = parse_leaf(s) {
        if leaf.tetrahedra().len() <= 8 {
            if let Ok(cx) = build_prism_complex(&leaf, 2, DiagonalRule::Staircase) {
                cx.check_incidence().unwrap();
            }
        }
    }
});
