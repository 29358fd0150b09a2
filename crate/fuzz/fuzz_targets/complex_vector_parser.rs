#![no_main]

use connint::basic_integrals::MultiIndex;
use connint::simplicial::parse_complex_vector;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(v) = parse_complex_vector(s) {
        assert!(v.to_array().iter().all(|z| z.is_finite()));
    }
    if let Ok(idx) = MultiIndex::parse(s) {
        assert_eq!(MultiIndex::parse(&idx.to_string()).unwrap(), idx);
    }
});
