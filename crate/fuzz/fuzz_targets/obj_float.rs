#![no_main]

use libfuzzer_sys::fuzz_target;
use meshforge::io::{fmt_sig, OBJ_DIGITS};

fuzz_target!(|data: &[u8]| {
    // OBJ coordinates keep 12 significant digits.
    let Ok(bytes) = <[u8; 8]>::try_from(data) else {
        return;
    };
    let x = f64::from_le_bytes(bytes);
    let text = fmt_sig(x, OBJ_DIGITS);
    if x.is_finite() {
        let y: f64 = text.parse().expect("formatted float parses");
        assert!((y - x).abs() <= 1e-11 * x.abs(), "{x} printed as {text}");
    }
});
