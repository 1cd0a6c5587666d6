#![no_main]

use libfuzzer_sys::fuzz_target;
use meshforge::exact::ExactScalar;
use meshforge::io::{parse_mesh_arg, MeshSpec};

fuzz_target!(|data: &[u8]| {
    // Both the `base@group` argument and the JSON spec parse without panicking.
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_mesh_arg(s, 1, ExactScalar::one()) {
            let json = serde_json::to_string(&spec).expect("serializable");
            let back: MeshSpec = serde_json::from_str(&json).expect("written spec re-parses");
            assert_eq!(back, spec);
        }
        let _ = serde_json::from_str::<MeshSpec>(s);
    }
});
