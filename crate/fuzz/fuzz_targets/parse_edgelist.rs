#![no_main]

use hodge_core::io::{emit_edgelist, parse_edgelist};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(el) = parse_edgelist(text) {
        let again = parse_edgelist(&emit_edgelist(&el.graph, &el.orientation)).expect("emitted edge lists reparse");
        assert_eq!(again.graph, el.graph);
        assert_eq!(again.orientation, el.orientation);
    }
});
