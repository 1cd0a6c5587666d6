#![no_main]

use libfuzzer_sys::fuzz_target;
use meshforge::supernatural::Supernatural;

fuzz_target!(|data: &[u8]| {
    // Accepted text round-trips through the Display syntax.
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(n) = s.parse::<Supernatural>() {
            let again: Supernatural = n.to_string().parse().expect("printed form re-parses");
            assert_eq!(again, n);
            let _ = n.predicates();
        }
    }
});
