#![no_main]

use libfuzzer_sys::fuzz_target;
use qkoszul::experiment::{generate, ExperimentSpec};
use qkoszul::format::from_json;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(mut spec) = from_json::<ExperimentSpec>(text) else { return };
    if spec.validate().is_err() {
        return;
    }
    spec.count = spec.count.min(2);
    spec.vertices = spec.vertices.min(3);
    spec.arrows = spec.arrows.min(4);
    spec.profile.iter_mut().for_each(|e| *e = (*e).min(5));
    let _ = generate(&spec);
});
