#![no_main]

use libfuzzer_sys::fuzz_target;
use meshforge::io::{truncation_from_json, truncation_to_json};

fuzz_target!(|data: &[u8]| {
    // Keep inputs small: reassembly intersects every pair of strings.
    if data.len() > 8192 {
        return;
    }
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(t) = truncation_from_json(s) {
            let back = truncation_from_json(&truncation_to_json(&t)).expect("written truncation re-parses");
            assert_eq!(back, t);
        }
    }
});
