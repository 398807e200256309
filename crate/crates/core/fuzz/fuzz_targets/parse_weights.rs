#![no_main]

use hyperpack_core::complex::parse_weights;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse_weights(text) else { return };
    assert!(parsed.values().iter().all(|x| x.is_finite()));
    let again = parse_weights(&serde_json::to_string(parsed.values()).unwrap()).expect("round trip parses");
    assert_eq!(again.values(), parsed.values());
});
