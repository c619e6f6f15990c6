#![no_main]

use libfuzzer_sys::fuzz_target;
use qkoszul::format::{algebra_from_input, parse_algebra};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(alg) = parse_algebra(text, None, None) else { return };
    let _ = alg.check_relations();
    let back = algebra_from_input(&alg.to_input(), None, None).expect("serialized input parses");
    assert_eq!(back, alg);
});
