#![no_main]

use libfuzzer_sys::fuzz_target;
use qkoszul::field::Field;

// First line: field descriptor. Second line: coefficient.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (desc, coeff) = text.split_once('\n').unwrap_or(("rational", text));
    let Ok(field) = desc.parse::<Field>() else { return };
    assert_eq!(field.to_string().parse::<Field>().unwrap(), field);
    if let Ok(x) = field.parse(coeff) {
        assert_eq!(field.parse(&x.to_string()).unwrap(), x);
    }
});
