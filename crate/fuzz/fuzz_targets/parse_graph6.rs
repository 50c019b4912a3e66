#![no_main]

use hodge_core::io::{encode_graph6, parse_graph6};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_graph6(text) {
        let back = parse_graph6(&encode_graph6(&g)).expect("encoded graph6 decodes");
        assert_eq!(back, g);
    }
});
