//! Replays the checked-in fuzz corpus through the same decoders and
//! round-trip checks as the fuzz targets.

use std::fs;
use std::path::PathBuf;

use qkoszul::experiment::{generate, ExperimentSpec};
use qkoszul::field::Field;
use qkoszul::format::{
    algebra_from_input, betti_from_dto, betti_to_dto, chains_from_dto, chains_to_dto, from_json, groebner_from_dto,
    groebner_to_dto, parse_algebra, BettiDto, ChainTableDto, GroebnerDto,
};
use qkoszul::koszul::DegreeFunction;
use qkoszul::quiver::Quiver;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let mut dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    dir.push("../../fuzz/corpus");
    dir.push(target);
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn algebra_input_seeds() {
    for (name, data) in seeds("algebra_input") {
        let text = std::str::from_utf8(&data).unwrap();
        let alg = parse_algebra(text, None, None).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(alg.check_relations().is_ok(), name != "inhomogeneous.json", "{name}");
        assert_eq!(algebra_from_input(&alg.to_input(), None, None).unwrap(), alg, "{name}");
    }
}

#[test]
fn coefficient_seeds() {
    for (name, data) in seeds("coefficient") {
        let text = std::str::from_utf8(&data).unwrap();
        let (desc, coeff) = text.split_once('\n').unwrap();
        let field: Field = desc.parse().unwrap();
        let x = field.parse(coeff).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(field.parse(&x.to_string()).unwrap(), x, "{name}");
    }
}

#[test]
fn degree_function_seeds() {
    for (name, data) in seeds("degree_function") {
        let f: DegreeFunction = std::str::from_utf8(&data).unwrap().parse().unwrap();
        assert_eq!(f.to_string().parse::<DegreeFunction>().unwrap(), f, "{name}");
    }
}

#[test]
fn table_seeds() {
    let q = Quiver::new(
        ["1", "2"],
        [("x", "1", "1"), ("y", "1", "1"), ("a", "1", "2"), ("b", "2", "1")]
            .map(|(n, s, t)| (n.to_string(), s.to_string(), t.to_string())),
    )
    .unwrap();
    for (name, data) in seeds("tables") {
        let (kind, rest) = data.split_first().unwrap();
        let text = std::str::from_utf8(rest).unwrap();
        match kind % 3 {
            0 => {
                let (f, gb) = groebner_from_dto(&q, &from_json::<GroebnerDto>(text).unwrap()).unwrap();
                assert_eq!(groebner_from_dto(&q, &groebner_to_dto(&q, f, &gb)).unwrap(), (f, gb), "{name}");
            }
            1 => {
                let t = chains_from_dto(&q, &from_json::<ChainTableDto>(text).unwrap()).unwrap();
                assert_eq!(chains_from_dto(&q, &chains_to_dto(&q, &t)).unwrap(), t, "{name}");
            }
            _ => {
                let t = betti_from_dto(&q, &from_json::<BettiDto>(text).unwrap()).unwrap();
                assert_eq!(betti_from_dto(&q, &betti_to_dto(&q, &t)).unwrap(), t, "{name}");
            }
        }
    }
}

#[test]
fn experiment_spec_seeds() {
    for (name, data) in seeds("experiment_spec") {
        let spec: ExperimentSpec = from_json(std::str::from_utf8(&data).unwrap()).unwrap();
        spec.validate().unwrap();
        let inst = generate(&spec).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(inst.len(), spec.count, "{name}");
    }
}
