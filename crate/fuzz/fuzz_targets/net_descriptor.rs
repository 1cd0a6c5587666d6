#![no_main]

use libfuzzer_sys::fuzz_target;
use meshforge::io::{motif_from_json, motif_to_json};

fuzz_target!(|data: &[u8]| {
    // A validated motif serializes and re-parses to itself.
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = motif_from_json(s) {
            let back = motif_from_json(&motif_to_json(&m)).expect("written descriptor re-parses");
            assert_eq!(back, m);
        }
    }
});
