//! Acceptance criteria. Prints one line per criterion and exits non-zero if
//! any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use serde_json::Value;

use common::*;
use qkoszul::betti::BettiTable;
use qkoszul::chains::{build_chains, degree_table, maximal_overlap_set};
use qkoszul::experiment::{perturb, random_instance, Lcg};
use qkoszul::field::Field;
use qkoszul::format::{groebner_to_dto, to_json};
use qkoszul::freealg::{AdmissibleOrder, AlgebraElement, OrderKind};
use qkoszul::groebner::{buchberger, TipSet};
use qkoszul::koszul::{
    check_ext_generation_012, check_f_determined, classify, delta, is_2d_determined_monomial, is_d_koszul_monomial,
    ClassifyOptions, DegreeFunction, FMode,
};
use qkoszul::quiver::{Path, Quiver};
use qkoszul::resolution::{d_squared_failures, oracle_resolution, oracle_resolution_monomial};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Monomial instances with at most 3 vertices, 4 arrows and relation
/// lengths at most 4.
fn small_monomial_instances() -> Vec<(Quiver, TipSet)> {
    let mut rng = Lcg::new(20_240_601);
    let mut out = Vec::new();
    while out.len() < 30 {
        let vertices = 1 + rng.below(3);
        let arrows = 1 + rng.below(4);
        let mask = 1 + rng.below(7);
        let profile: Vec<usize> = (0..3).filter(|b| mask >> b & 1 == 1).map(|b| b + 2).collect();
        if let Some(inst) = random_instance(&mut rng, vertices, arrows, &profile, 3) {
            out.push(inst);
        }
    }
    out
}

fn two_d_instances() -> Vec<(Quiver, TipSet, usize)> {
    let mut rng = Lcg::new(4_242);
    let mut out = Vec::new();
    while out.len() < 60 {
        let d = 3 + rng.below(2);
        let vertices = 1 + rng.below(2);
        let arrows = 2 + rng.below(2);
        if let Some((q, rho)) = random_instance(&mut rng, vertices, arrows, &[2, d], 3) {
            out.push((q, rho, d));
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let q = loops(&["x"]);
    for d in 2..=5 {
        let rho = rho(&q, &["x".repeat(d).as_str()]);
        let t = degree_table(&build_chains(&q, &rho, 10, None));
        for n in 0..=10 {
            if t.rows[n].degrees() != vec![delta(n, d)] {
                return outcome(false, format!("d={d}, n={n}: {:?}", t.rows[n].degrees()));
            }
        }
        if !is_d_koszul_monomial(&q, &rho, d).unwrap().holds() {
            return outcome(false, format!("x^{d} not reported d-Koszul"));
        }
    }
    outcome(true, "x^d for d = 2..5, n <= 10")
}

fn criterion_2() -> Outcome {
    let insts = small_monomial_instances();
    let mut rows = 0;
    for (i, (q, rho)) in insts.iter().enumerate() {
        let chains = degree_table(&build_chains(q, rho, 6, None));
        let oracle = oracle_resolution_monomial(q, rho, 6, 10);
        if let Some(n) = chains.first_disagreement(&oracle, 6, 10) {
            return outcome(false, format!("instance {i}, row {n}"));
        }
        rows += oracle.rows.iter().filter(|r| !r.truncated).count();
    }
    outcome(
        true,
        format!("{} instances, n <= 6, degree <= 10 ({rows} rows untruncated)", insts.len()),
    )
}

fn criterion_3() -> Outcome {
    let mut rng = Lcg::new(77);
    let mut n = 0;
    let (mut yes, mut no) = (0, 0);
    while n < 120 {
        let d = 3 + rng.below(2);
        let vertices = 1 + rng.below(3);
        let arrows = 1 + rng.below(4);
        let Some((q, rho)) = random_instance(&mut rng, vertices, arrows, &[d], 4) else { continue };
        let c = is_d_koszul_monomial(&q, &rho, d).unwrap();
        if !c.routes_agree() {
            return outcome(false, format!("routes disagree on {:?}", show(&q, rho.paths())));
        }
        if c.holds() {
            yes += 1;
        } else {
            no += 1;
        }
        n += 1;
    }
    outcome(true, format!("{n} instances ({yes} d-Koszul, {no} not)"))
}

fn show(q: &Quiver, ps: &[Path]) -> Vec<String> {
    ps.iter().map(|p| q.display_path(p)).collect()
}

fn criterion_4() -> Outcome {
    let insts = two_d_instances();
    let (mut yes, mut no) = (0, 0);
    for (q, rho, d) in &insts {
        let verdict = is_2d_determined_monomial(q, rho, *d).unwrap().verdict().expect("degree-d stratum nonempty");
        let table = degree_table(&build_chains(q, rho, 8, None));
        let weak = check_f_determined(&table, &DegreeFunction::Delta { d: *d }, FMode::Weak, 8)
            .unwrap()
            .holds;
        let ap3 = maximal_overlap_set(q, rho).iter().all(|w| w.len() <= d + 1);
        if verdict != weak || verdict != ap3 {
            return outcome(
                false,
                format!("{:?} d={d}: verdict {verdict}, weak {weak}, ap3 {ap3}", show(q, rho.paths())),
            );
        }
        if verdict {
            yes += 1;
        } else {
            no += 1;
        }
    }
    outcome(true, format!("{} instances ({yes} 2-d-determined, {no} not)", insts.len()))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for (q, rho, d) in two_d_instances() {
        if is_2d_determined_monomial(&q, &rho, d).unwrap().verdict() != Some(true) {
            continue;
        }
        let ext = check_ext_generation_012(&build_chains(&q, &rho, 10, None));
        if !ext.holds {
            return outcome(false, format!("{:?}: {} witnesses", show(&q, rho.paths()), ext.witnesses.len()));
        }
        checked += 1;
    }
    outcome(checked > 0, format!("{checked} 2-d-determined instances, n <= 10"))
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect()
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

fn criterion_6() -> Outcome {
    let golden: Value =
        serde_json::from_str(include_str!("golden/fixtures.json")).expect("golden file parses");
    let mut bad = Vec::new();

    let g = &golden["two_three"];
    let q = loops(&["x", "y"]);
    let r: Vec<String> = strings(&g["rho"]);
    let rs: Vec<&str> = r.iter().map(|s| s.as_str()).collect();
    let t = build_chains(&q, &rho(&q, &rs), 4, None);
    for (n, key) in [(3, "ap3"), (4, "ap4")] {
        if sorted(show(&q, &t.words(n))) != sorted(strings(&g[key])) {
            bad.push(format!("two_three {key}"));
        }
    }

    let g = &golden["aabaa"];
    let q = loops(&["a", "b"]);
    let rh = rho(&q, &["aabaa"]);
    if sorted(show(&q, &maximal_overlap_set(&q, &rh))) != sorted(strings(&g["maximal_overlaps"])) {
        bad.push("aabaa overlaps".into());
    }
    let want: Vec<usize> = g["oracle_row3_degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    if oracle_resolution_monomial(&q, &rh, 3, 10).rows[3].degrees() != want {
        bad.push("aabaa oracle row 3".into());
    }

    let g = &golden["plane"];
    let q = loops(&["x", "y"]);
    let f = Field::Rational;
    let gens = vec![element(&q, f, &[(1, "yx"), (-1, "xy")])];
    let order = deglex(&q);
    let gb = buchberger(&q, &gens, &order, 10).unwrap();
    let dto = serde_json::to_value(groebner_to_dto(&q, f, &gb)).unwrap();
    if dto["elements"] != g["gb"] || dto["complete"] != true {
        bad.push("plane basis".into());
    }
    let tips = qkoszul::groebner::tip_ideal(&q, &gb);
    if !build_chains(&q, &tips, 3, None).level(3).is_empty() || !g["ap3"].as_array().unwrap().is_empty() {
        bad.push("plane AP(3)".into());
    }
    let report = classify(&q, &gens, &order, &ClassifyOptions::default()).unwrap();
    let status = serde_json::to_value(report.verdicts.d_koszul.status).unwrap();
    if status != g["d_koszul"] {
        bad.push(format!("plane Koszul verdict {status}"));
    }
    outcome(bad.is_empty(), if bad.is_empty() { "3 fixtures match".to_string() } else { bad.join(", ") })
}

fn criterion_7() -> Outcome {
    let f = Field::Rational;
    let mut rng = Lcg::new(7);
    for (fi, (q, gens)) in groebner_fixtures().iter().enumerate() {
        let order = deglex(q);
        let reference = to_json(&groebner_to_dto(q, f, &buchberger(q, gens, &order, 8).unwrap()));
        for s in 0..20 {
            let mut g: Vec<AlgebraElement> = gens
                .iter()
                .map(|x| x.scale(&f.from_i64(1 + rng.below(9) as i64)))
                .collect();
            for i in (1..g.len()).rev() {
                g.swap(i, rng.below(i + 1));
            }
            let got = to_json(&groebner_to_dto(q, f, &buchberger(q, &g, &order, 8).unwrap()));
            if got != reference {
                return outcome(false, format!("fixture {fi}, shuffle {s}"));
            }
        }
    }
    let fixtures = groebner_fixtures();
    let mut members = 0;
    while members < 100 {
        let (q, gens) = &fixtures[rng.below(fixtures.len())];
        let order = deglex(q);
        let gb = buchberger(q, gens, &order, 8).unwrap();
        let mut x = AlgebraElement::zero();
        for _ in 0..1 + rng.below(3) {
            let g = &gens[rng.below(gens.len())];
            let p = g.support().next().unwrap();
            let room = 8 - p.len();
            let lu = rng.below(room + 1);
            let lv = rng.below(room - lu + 1);
            let (Some(u), Some(v)) = (walk_into(q, p.source(), lu, &mut rng), walk_out(q, p.target(), lv, &mut rng))
            else {
                continue;
            };
            x = x.add(&g.sandwich(&u, &v).scale(&f.from_i64(rng.below(7) as i64 - 3)));
        }
        if x.is_zero() {
            continue;
        }
        if !gb.reducer(q).reduce(&x).is_zero() {
            return outcome(false, "an ideal member has nonzero normal form");
        }
        members += 1;
    }
    outcome(true, format!("20 shuffles x {} fixtures identical, {members} members reduce to 0", fixtures.len()))
}

fn walk_out(q: &Quiver, v: qkoszul::quiver::VertexId, len: usize, rng: &mut Lcg) -> Option<Path> {
    let mut p = q.vertex_path(v);
    for _ in 0..len {
        let out = q.arrows_from(p.target());
        if out.is_empty() {
            return None;
        }
        p = p.mul(&q.arrow_path(out[rng.below(out.len())]))?;
    }
    Some(p)
}

fn walk_into(q: &Quiver, v: qkoszul::quiver::VertexId, len: usize, rng: &mut Lcg) -> Option<Path> {
    let mut p = q.vertex_path(v);
    for _ in 0..len {
        let into: Vec<_> = q.arrow_ids().filter(|&a| q.arrow(a).target == p.source()).collect();
        if into.is_empty() {
            return None;
        }
        p = q.arrow_path(into[rng.below(into.len())]).mul(&p)?;
    }
    Some(p)
}

fn criterion_8() -> Outcome {
    let insts = small_monomial_instances();
    let mut maps = 0;
    for (i, (q, rho)) in insts.iter().enumerate() {
        let t = build_chains(q, rho, 6, None);
        let bad = d_squared_failures(&t);
        if !bad.is_empty() {
            return outcome(false, format!("instance {i}: {} failures", bad.len()));
        }
        maps += (2..=6).map(|n| t.level(n).len()).sum::<usize>();
    }
    outcome(true, format!("{} instances, {maps} composites checked", insts.len()))
}

fn criterion_9() -> Outcome {
    const TRIALS: usize = 10_000;
    let mut rng = Lcg::new(9);
    let rand_path = |q: &Quiver, start: qkoszul::quiver::VertexId, rng: &mut Lcg| {
        let len = rng.below(6);
        walk_out(q, start, len, rng)
    };
    for q in sample_quivers() {
        let nv = q.num_vertices();
        for kind in OrderKind::ALL {
            let order = AdmissibleOrder::declaration(&q, kind);
            let vtx = |rng: &mut Lcg| qkoszul::quiver::VertexId(rng.below(nv) as u32);
            let mut done = [0usize; 4];
            while done.iter().any(|&c| c < TRIALS) {
                // Well order: total and transitive on random triples.
                let (Some(a), Some(b), Some(c)) = (
                    rand_path(&q, vtx(&mut rng), &mut rng),
                    rand_path(&q, vtx(&mut rng), &mut rng),
                    rand_path(&q, vtx(&mut rng), &mut rng),
                ) else {
                    continue;
                };
                let ab = order.compare(&a, &b);
                if ab != order.compare(&b, &a).reverse() || (ab.is_eq() != (a == b)) {
                    return outcome(false, format!("{kind:?}: not a total order"));
                }
                if ab.is_lt() && order.compare(&b, &c).is_lt() && !order.compare(&a, &c).is_lt() {
                    return outcome(false, format!("{kind:?}: not transitive"));
                }
                done[0] += 1;

                // Left and right multiplication.
                let Some(r) = rand_path(&q, vtx(&mut rng), &mut rng) else { continue };
                let start = r.target();
                let (Some(p), Some(p2)) = (rand_path(&q, start, &mut rng), rand_path(&q, start, &mut rng)) else {
                    continue;
                };
                if p != p2 {
                    let (hi, lo) = if order.compare(&p, &p2).is_gt() { (&p, &p2) } else { (&p2, &p) };
                    if !order.compare(&r.mul(hi).unwrap(), &r.mul(lo).unwrap()).is_gt() {
                        return outcome(false, format!("{kind:?}: left multiplication"));
                    }
                    done[1] += 1;
                }
                let end = r.source();
                let into = |rng: &mut Lcg| walk_into(&q, end, rng.below(6), rng);
                if let (Some(s1), Some(s2)) = (into(&mut rng), into(&mut rng)) {
                    if s1 != s2 {
                        let (hi, lo) = if order.compare(&s1, &s2).is_gt() { (&s1, &s2) } else { (&s2, &s1) };
                        if !order.compare(&hi.mul(&r).unwrap(), &lo.mul(&r).unwrap()).is_gt() {
                            return outcome(false, format!("{kind:?}: right multiplication"));
                        }
                        done[2] += 1;
                    }
                }

                // Subpaths are not larger.
                if let Some(s) = rand_path(&q, p.target(), &mut rng) {
                    let whole = r.mul(&p).unwrap().mul(&s).unwrap();
                    if order.compare(&whole, &p).is_lt() {
                        return outcome(false, format!("{kind:?}: subpath larger than path"));
                    }
                    done[3] += 1;
                }
            }
        }
    }
    outcome(
        true,
        format!("{TRIALS}+ triples per axiom, {} quivers x {} orders", sample_quivers().len(), OrderKind::ALL.len()),
    )
}

fn criterion_10() -> Outcome {
    const N: usize = 5;
    const D: usize = 8;
    let f = Field::Rational;
    let mut rng = Lcg::new(10);
    let insts = small_monomial_instances();
    let (mut perturbed, mut skipped) = (0, 0);
    for (i, (q, rho)) in insts.iter().enumerate() {
        let order = deglex(q);
        let Some((_, gb)) = perturb(&mut rng, q, rho, &order, f, D, 16) else {
            skipped += 1;
            continue;
        };
        let oracle = oracle_resolution(q, &gb, N, D).unwrap();
        let chains = degree_table(&build_chains(q, rho, N, None));
        if !oracle.is_sub_multiset_of(&chains, N, D) {
            return outcome(false, format!("instance {i}: oracle not within tip chains"));
        }
        for func in weak_bounds(&chains, rho) {
            let mon = check_f_determined(&chains, &func, FMode::Weak, N).unwrap();
            if !mon.holds {
                continue;
            }
            if !weakly_bounded(&oracle, &func, N, D) {
                return outcome(false, format!("instance {i}: weak {func} fails for the perturbed algebra"));
            }
        }
        perturbed += 1;
    }
    outcome(
        perturbed > 0,
        format!("{perturbed} perturbed instances, {skipped} without admissible perturbation, n <= {N}, degree <= {D}"),
    )
}

/// δ for the largest relation length, and the tight bound read off the
/// tip-chain table.
fn weak_bounds(chains: &BettiTable, rho: &TipSet) -> Vec<DegreeFunction> {
    let mut v = Vec::new();
    if let Some(&d) = rho.lengths().iter().max() {
        if d >= 2 {
            v.push(DegreeFunction::Delta { d });
        }
    }
    let tight: Vec<usize> = chains
        .rows
        .iter()
        .enumerate()
        .map(|(n, r)| r.max_degree().unwrap_or(n).max(n))
        .collect();
    v.push(DegreeFunction::Table { values: tight });
    v
}

/// Entries of degree at most `max_degree` lie in `n..=F(n)`.
fn weakly_bounded(t: &BettiTable, f: &DegreeFunction, max_n: usize, max_degree: usize) -> bool {
    (0..=max_n.min(t.max_n())).all(|n| {
        let Some(fv) = f.eval(n) else { return true };
        t.rows[n]
            .entries
            .keys()
            .all(|&(_, g)| g > max_degree || (g >= n && g <= fv))
    })
}

fn main() -> ExitCode {
    let criteria: [(usize, &str, fn() -> Outcome, Option<Duration>); 10] = [
        (1, "delta exactness on x^d", criterion_1, Some(Duration::from_secs(1))),
        (2, "chains agree with the oracle", criterion_2, Some(Duration::from_secs(60))),
        (3, "two d-Koszul routes agree", criterion_3, Some(Duration::from_secs(10))),
        (4, "2-d-determined consistency", criterion_4, None),
        (5, "Ext generation for 2-d-determined", criterion_5, None),
        (6, "worked fixtures", criterion_6, None),
        (7, "Groebner determinism and membership", criterion_7, None),
        (8, "d o d = 0 on monomial differentials", criterion_8, None),
        (9, "admissible order axioms", criterion_9, None),
        (10, "transfer to perturbed ideals", criterion_10, None),
    ];
    let mut failed = 0;
    for (n, name, f, limit) in criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f));
        let took = start.elapsed();
        let (pass, detail) = match res {
            Ok(o) => (o.pass, o.detail),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        let late = limit.is_some_and(|l| took > l);
        let ok = pass && !late;
        if !ok {
            failed += 1;
        }
        let limit_note = limit.map_or(String::new(), |l| format!(" / limit {}s", l.as_secs()));
        println!(
            "criterion {n:>2} {:<4} {name}: {detail} [{:.2}s{limit_note}]{}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            if late { " over time limit" } else { "" }
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
