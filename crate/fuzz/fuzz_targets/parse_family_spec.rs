#![no_main]

use hodge_core::families::{gen_family, FamilySpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = FamilySpec::parse(text) else {
        return;
    };
    let reparsed = FamilySpec::parse(&spec.to_string()).expect("canonical text reparses");
    assert_eq!(reparsed, spec);
    if spec.order().is_ok_and(|n| n <= 64) {
        let _ = gen_family(&spec);
    }
});
