#![allow(dead_code)]

use qkoszul::field::Field;
use qkoszul::freealg::{AdmissibleOrder, AlgebraElement, OrderKind};
use qkoszul::groebner::TipSet;
use qkoszul::quiver::{Path, Quiver, VertexId};

pub fn loops(names: &[&str]) -> Quiver {
    Quiver::one_vertex_loops(names)
}

pub fn quiver(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Quiver {
    Quiver::new(
        vertices.iter().copied(),
        arrows.iter().map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())),
    )
    .unwrap()
}

/// A few small quivers with cycles, used by the property tests.
pub fn sample_quivers() -> Vec<Quiver> {
    vec![
        loops(&["x", "y"]),
        loops(&["x", "y", "z"]),
        quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1"), ("d", "1", "1")]),
        quiver(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2"), ("c", "2", "1"), ("x", "1", "1")]),
    ]
}

/// Walks from vertex `start` choosing outgoing arrows by `choices`; stops
/// early at a sink.
pub fn walk(q: &Quiver, start: usize, choices: &[usize]) -> Path {
    let v = VertexId((start % q.num_vertices()) as u32);
    let mut ids = Vec::new();
    let mut cur = v;
    for &c in choices {
        let out = q.arrows_from(cur);
        if out.is_empty() {
            break;
        }
        let a = out[c % out.len()];
        ids.push(a);
        cur = q.arrow(a).target;
    }
    if ids.is_empty() {
        q.vertex_path(v)
    } else {
        q.path_from_ids(&ids).unwrap()
    }
}

pub fn words(q: &Quiver, ws: &[&str]) -> Vec<Path> {
    ws.iter().map(|w| q.word(w).unwrap()).collect()
}

pub fn rho(q: &Quiver, ws: &[&str]) -> TipSet {
    TipSet::new(q, words(q, ws)).unwrap()
}

/// `Σ c_i w_i` over single-letter arrow words.
pub fn element(q: &Quiver, f: Field, terms: &[(i64, &str)]) -> AlgebraElement {
    AlgebraElement::from_terms(terms.iter().map(|(c, w)| (q.word(w).unwrap(), f.from_i64(*c))))
}

pub fn deglex(q: &Quiver) -> AdmissibleOrder {
    AdmissibleOrder::declaration(q, OrderKind::DegLex)
}

/// Gröbner fixtures: quiver and generators.
pub fn groebner_fixtures() -> Vec<(Quiver, Vec<AlgebraElement>)> {
    let f = Field::Rational;
    let xy = loops(&["x", "y"]);
    let xyz = loops(&["x", "y", "z"]);
    let abc = quiver(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]);
    vec![
        (xy.clone(), vec![element(&xy, f, &[(1, "yx"), (-1, "xy")])]),
        (xy.clone(), vec![element(&xy, f, &[(1, "xx"), (-1, "yy")]), element(&xy, f, &[(1, "xy")])]),
        (xy.clone(), vec![element(&xy, f, &[(1, "yyx"), (-1, "xxy")]), element(&xy, f, &[(1, "xyx"), (2, "xxy")])]),
        (
            xyz.clone(),
            vec![
                element(&xyz, f, &[(1, "yx"), (-1, "xy")]),
                element(&xyz, f, &[(1, "zx"), (-1, "xz")]),
                element(&xyz, f, &[(1, "zy"), (-1, "yz")]),
            ],
        ),
        (abc.clone(), vec![element(&abc, f, &[(1, "abc")]), element(&abc, f, &[(1, "ca")])]),
    ]
}
