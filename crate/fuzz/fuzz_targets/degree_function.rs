#![no_main]

use libfuzzer_sys::fuzz_target;
use qkoszul::koszul::DegreeFunction;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(f) = text.parse::<DegreeFunction>() else { return };
    assert_eq!(f.to_string().parse::<DegreeFunction>().unwrap(), f);
    for n in 0..16 {
        if let Some(v) = f.eval(n) {
            assert!(v >= n);
        }
    }
});
