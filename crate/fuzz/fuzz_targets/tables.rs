#![no_main]

use libfuzzer_sys::fuzz_target;
use qkoszul::format::{
    betti_from_dto, betti_to_dto, chains_from_dto, chains_to_dto, from_json, groebner_from_dto, groebner_to_dto,
    BettiDto, ChainTableDto, GroebnerDto,
};
use qkoszul::quiver::Quiver;

// Decodes serialized tables over a fixed two-vertex quiver; the first byte
// picks the decoder.
fuzz_target!(|data: &[u8]| {
    let Some((&kind, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let q = Quiver::new(
        ["1", "2"],
        [("x", "1", "1"), ("y", "1", "1"), ("a", "1", "2"), ("b", "2", "1")]
            .map(|(n, s, t)| (n.to_string(), s.to_string(), t.to_string())),
    )
    .unwrap();
    match kind % 3 {
        0 => {
            let Ok(dto) = from_json::<GroebnerDto>(text) else { return };
            if let Ok((field, gb)) = groebner_from_dto(&q, &dto) {
                let again = groebner_from_dto(&q, &groebner_to_dto(&q, field, &gb)).unwrap();
                assert_eq!(again, (field, gb));
            }
        }
        1 => {
            let Ok(dto) = from_json::<ChainTableDto>(text) else { return };
            if let Ok(t) = chains_from_dto(&q, &dto) {
                assert_eq!(chains_from_dto(&q, &chains_to_dto(&q, &t)).unwrap(), t);
            }
        }
        _ => {
            let Ok(dto) = from_json::<BettiDto>(text) else { return };
            if let Ok(t) = betti_from_dto(&q, &dto) {
                assert_eq!(betti_from_dto(&q, &betti_to_dto(&q, &t)).unwrap(), t);
            }
        }
    }
});
