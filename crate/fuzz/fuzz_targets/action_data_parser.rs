#![no_main]

use std::sync::OnceLock;

use connint::simplicial::{action, build_prism_complex, parse_action_data, DiagonalRule, LeafComplex3, SimplicialComplex4};
use connint::special_fn::CouplingConfig;
use libfuzzer_sys::fuzz_target;

fn prism() -> &'static SimplicialComplex4 {
    static CX: OnceLock<SimplicialComplex4> = OnceLock::new();
    CX.get_or_init(|| build_prism_complex(&LeafComplex3::single_tetrahedron(), 2, DiagonalRule::Staircase).unwrap())
}

fuzz_target!(|s: &str| {
    let cx = prism();
    if let Ok(data) = parse_action_data(s, cx) {
        if let Ok(curv) = data.curvatures() {
            let _ = action(cx, &data.areas, &curv, &CouplingConfig::new(1.0).unwrap());
        }
    }
});
