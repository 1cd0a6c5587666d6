#![no_main]

use libfuzzer_sys::fuzz_target;
use meshforge::exact::ExactScalar;

fuzz_target!(|data: &[u8]| {
    // Parsing never panics, and accepted input prints back to an equal value.
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(x) = s.parse::<ExactScalar>() {
            let again: ExactScalar = x.to_string().parse().expect("printed form re-parses");
            assert_eq!(again, x);
        }
    }
});
