//! Seeded random instances and sweeps over them.
//!
//! Randomness comes from a 64-bit linear congruential generator
//! `s <- s * 6364136223846793005 + 1442695040888963407 (mod 2^64)`, starting
//! from the seed itself. `below(n)` takes the top 31 bits of the new state
//! modulo `n`.
//!
//! An instance is drawn as follows. The quiver has vertices `1..=V` and
//! arrows named `a, b, c, ...` (then `a26, a27, ...`); each arrow draws its
//! source, then its target. For each degree `e` of the profile in ascending
//! order, draw `m = 1 + below(per_degree)`, then draw up to `32 m` random
//! paths of length `e`: a uniform start vertex, then a uniform outgoing arrow
//! at each step, discarding dead ends. A path is kept when it neither contains
//! nor is contained in a path already kept. An instance where some degree
//! keeps no path is discarded and drawing restarts from the quiver, with the
//! generator state carried over.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{build_chains, degree_table, maximal_overlap_set};
use crate::field::Field;
use crate::freealg::{AdmissibleOrder, AlgebraElement, OrderKind};
use crate::groebner::{buchberger, tip_ideal, GroebnerBasis, TipSet};
use crate::koszul::{
    check_ext_generation_012, check_f_determined, classify, is_2d_determined_monomial, is_d_koszul_monomial,
    ClassifyOptions, DegreeFunction, FMode, KoszulError, KoszulReport, Status,
};
use crate::quiver::{is_subpath, Path, Quiver};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcg(u64);

impl Lcg {
    pub const MUL: u64 = 6364136223846793005;
    pub const INC: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(Self::MUL).wrapping_add(Self::INC);
        self.0
    }

    /// Uniform-ish in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() >> 33) % n as u64) as usize
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("could not draw instance {0} after {1} attempts")]
    Exhausted(usize, usize),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn default_per_degree() -> usize {
    2
}

fn default_max_degree() -> usize {
    8
}

fn default_max_n() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub vertices: usize,
    pub arrows: usize,
    /// Relation lengths, e.g. `[3]` or `[2, 3]`.
    pub profile: Vec<usize>,
    pub count: usize,
    pub seed: u64,
    /// Upper bound on relations drawn per degree.
    #[serde(default = "default_per_degree")]
    pub per_degree: usize,
    /// Add lower-order terms while keeping the tips.
    #[serde(default)]
    pub perturb: bool,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    #[serde(default = "default_max_n")]
    pub max_n: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Invalid(m.to_string()));
        if self.vertices == 0 || self.arrows == 0 {
            return bad("need at least one vertex and one arrow");
        }
        if self.profile.is_empty() || self.profile.iter().any(|&e| e < 2) {
            return bad("profile lengths must be at least 2");
        }
        if self.per_degree == 0 {
            return bad("per_degree must be positive");
        }
        if self.vertices > 64 || self.arrows > 256 || self.profile.iter().any(|&e| e > 32) {
            return bad("instance size out of range");
        }
        Ok(())
    }

    /// The largest profile degree.
    pub fn d(&self) -> usize {
        self.profile.iter().copied().max().unwrap_or(0)
    }
}

fn arrow_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{i}")
    }
}

pub fn random_quiver(rng: &mut Lcg, vertices: usize, arrows: usize) -> Quiver {
    let names: Vec<String> = (1..=vertices).map(|v| v.to_string()).collect();
    let arrow_list: Vec<(String, String, String)> = (0..arrows)
        .map(|i| {
            let s = rng.below(vertices);
            let t = rng.below(vertices);
            (arrow_name(i), names[s].clone(), names[t].clone())
        })
        .collect();
    Quiver::new(names.iter().cloned(), arrow_list).expect("generated names are distinct")
}

pub fn random_path(rng: &mut Lcg, q: &Quiver, len: usize) -> Option<Path> {
    let mut ids = Vec::with_capacity(len);
    let mut v = crate::quiver::VertexId(rng.below(q.num_vertices()) as u32);
    for _ in 0..len {
        let out = q.arrows_from(v);
        if out.is_empty() {
            return None;
        }
        let a = out[rng.below(out.len())];
        ids.push(a);
        v = q.arrow(a).target;
    }
    q.path_from_ids(&ids).ok()
}

/// An anti-chain with at least one path of each profile length, or `None`.
pub fn random_antichain(rng: &mut Lcg, q: &Quiver, profile: &[usize], per_degree: usize) -> Option<TipSet> {
    let mut lens = profile.to_vec();
    lens.sort_unstable();
    lens.dedup();
    let mut kept: Vec<Path> = Vec::new();
    for e in lens {
        let m = 1 + rng.below(per_degree);
        let mut made = 0;
        for _ in 0..32 * m {
            if made == m {
                break;
            }
            let Some(p) = random_path(rng, q, e) else { continue };
            if kept.iter().any(|t| is_subpath(t, &p, false) || is_subpath(&p, t, false)) {
                continue;
            }
            kept.push(p);
            made += 1;
        }
        if made == 0 {
            return None;
        }
    }
    TipSet::new(q, kept).ok()
}

/// Draws a quiver and an anti-chain, restarting on failure.
pub fn random_instance(
    rng: &mut Lcg,
    vertices: usize,
    arrows: usize,
    profile: &[usize],
    per_degree: usize,
) -> Option<(Quiver, TipSet)> {
    for _ in 0..1000 {
        let q = random_quiver(rng, vertices, arrows);
        if let Some(rho) = random_antichain(rng, &q, profile, per_degree) {
            return Some((q, rho));
        }
    }
    None
}

/// Adds lower-order terms to the monomial relations `rho` so that the
/// reduced Gröbner basis (to `max_degree`) still has tips exactly `rho`.
///
/// Candidate terms are normal paths parallel to and smaller than the tip;
/// rearrangements of the tip's arrows are preferred. Returns `None` when no
/// attempt yields a non-monomial ideal with the same tips.
pub fn perturb(
    rng: &mut Lcg,
    q: &Quiver,
    rho: &TipSet,
    order: &AdmissibleOrder,
    field: Field,
    max_degree: usize,
    attempts: usize,
) -> Option<(Vec<AlgebraElement>, GroebnerBasis)> {
    let candidates: Vec<Vec<Path>> = rho
        .paths()
        .iter()
        .map(|t| {
            let all: Vec<Path> = q
                .paths_of_length(t.len())
                .into_iter()
                .filter(|p| p.is_parallel(t) && order.compare(p, t).is_lt() && !rho.contains_any(p.arrows()))
                .collect();
            let mut key = t.arrows().to_vec();
            key.sort_unstable();
            let same: Vec<Path> = all
                .iter()
                .filter(|p| {
                    let mut k = p.arrows().to_vec();
                    k.sort_unstable();
                    k == key
                })
                .cloned()
                .collect();
            if same.is_empty() {
                all
            } else {
                same
            }
        })
        .collect();
    if candidates.iter().all(|c| c.is_empty()) {
        return None;
    }
    for _ in 0..attempts {
        let mut rels = Vec::new();
        let mut touched = false;
        for (t, cands) in rho.paths().iter().zip(&candidates) {
            let mut x = AlgebraElement::from_path(t.clone(), field);
            if !cands.is_empty() && rng.below(2) == 0 {
                let p = cands[rng.below(cands.len())].clone();
                let c = field.from_i64(rng.below(5) as i64 - 2);
                if !c.is_zero() {
                    x.add_term(p, &c);
                    touched = true;
                }
            }
            rels.push(x);
        }
        if !touched {
            continue;
        }
        let Ok(gb) = buchberger(q, &rels, order, max_degree) else { continue };
        if !gb.is_monomial() && tip_ideal(q, &gb) == *rho {
            return Some((rels, gb));
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub index: usize,
    pub quiver: Quiver,
    pub rho: TipSet,
    pub relations: Vec<AlgebraElement>,
}

/// Draws `spec.count` instances from one generator stream.
pub fn generate(spec: &ExperimentSpec) -> Result<Vec<Instance>, ExperimentError> {
    spec.validate()?;
    let mut rng = Lcg::new(spec.seed);
    let field = Field::Rational;
    let mut out = Vec::with_capacity(spec.count);
    for index in 0..spec.count {
        let mut drawn = None;
        for _ in 0..100 {
            let Some((q, rho)) = random_instance(&mut rng, spec.vertices, spec.arrows, &spec.profile, spec.per_degree)
            else {
                break;
            };
            if !spec.perturb {
                let relations = rho.paths().iter().map(|p| AlgebraElement::from_path(p.clone(), field)).collect();
                drawn = Some((q, rho, relations));
                break;
            }
            let order = AdmissibleOrder::declaration(&q, OrderKind::DegLex);
            if let Some((relations, _)) = perturb(&mut rng, &q, &rho, &order, field, spec.max_degree, 8) {
                drawn = Some((q, rho, relations));
                break;
            }
        }
        let (quiver, rho, relations) = drawn.ok_or(ExperimentError::Exhausted(index, 100))?;
        out.push(Instance {
            index,
            quiver,
            rho,
            relations,
        });
    }
    Ok(out)
}

/// One CSV row. Empty cells mean "not applicable".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub quiver: String,
    pub tips: String,
    pub monomial: bool,
    pub d: usize,
    pub overlap_route: Option<bool>,
    pub subpath_route: Option<bool>,
    pub routes_agree: Option<bool>,
    pub two_d_determined: Option<bool>,
    pub weak_delta_chains: bool,
    pub ap3_within_d_plus_1: bool,
    pub ext012_factorizes: bool,
    pub ext012_witnesses: usize,
    pub d_koszul: String,
    pub two_d_determined_report: String,
    pub ext_generated_012: String,
    pub ags_minimal: String,
}

fn status_name(s: Status) -> String {
    match s {
        Status::Yes => "yes",
        Status::No => "no",
        Status::Inconclusive => "inconclusive",
        Status::OutOfScope => "out_of_scope",
    }
    .to_string()
}

fn describe_quiver(q: &Quiver) -> String {
    q.arrow_ids()
        .map(|a| {
            let ar = q.arrow(a);
            format!("{}:{}>{}", ar.name, q.vertex_name(ar.source), q.vertex_name(ar.target))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn evaluate(spec: &ExperimentSpec, inst: &Instance) -> Result<(InstanceRecord, KoszulReport), ExperimentError> {
    let q = &inst.quiver;
    let d = spec.d();
    let lens = inst.rho.lengths();
    let (mut overlap_route, mut subpath_route, mut two_d) = (None, None, None);
    if lens.iter().all(|&l| l == d) {
        let c = is_d_koszul_monomial(q, &inst.rho, d)?;
        overlap_route = Some(c.by_overlaps);
        subpath_route = Some(c.by_subpaths);
    } else if d >= 3 && lens.iter().all(|&l| l == 2 || l == d) {
        let c = is_2d_determined_monomial(q, &inst.rho, d)?;
        if let Some(inner) = &c.inner {
            overlap_route = Some(inner.by_overlaps);
            subpath_route = Some(inner.by_subpaths);
        }
        two_d = c.verdict();
    }
    let chains = build_chains(q, &inst.rho, spec.max_n.max(3), None);
    let weak = check_f_determined(&degree_table(&chains), &DegreeFunction::Delta { d }, FMode::Weak, spec.max_n)?;
    let ap3 = maximal_overlap_set(q, &inst.rho).iter().all(|w| w.len() <= d + 1);
    let ext = check_ext_generation_012(&chains);

    let order = AdmissibleOrder::declaration(q, OrderKind::DegLex);
    let opts = ClassifyOptions {
        max_degree: spec.max_degree,
        max_n: spec.max_n,
        d: Some(d),
        f_checks: Vec::new(),
        label: format!("instance {}", inst.index),
    };
    let report = classify(q, &inst.relations, &order, &opts)?;
    let record = InstanceRecord {
        index: inst.index,
        quiver: describe_quiver(q),
        tips: inst.rho.paths().iter().map(|p| q.display_path(p)).collect::<Vec<_>>().join(" "),
        monomial: report.groebner.monomial,
        d,
        overlap_route,
        subpath_route,
        routes_agree: overlap_route.zip(subpath_route).map(|(a, b)| a == b),
        two_d_determined: two_d,
        weak_delta_chains: weak.holds,
        ap3_within_d_plus_1: ap3,
        ext012_factorizes: ext.holds,
        ext012_witnesses: ext.witnesses.len(),
        d_koszul: status_name(report.verdicts.d_koszul.status),
        two_d_determined_report: status_name(report.verdicts.two_d_determined.status),
        ext_generated_012: status_name(report.verdicts.ext_generated_012.status),
        ags_minimal: status_name(report.ags_minimal.status),
    };
    Ok((record, report))
}

pub struct ExperimentOutput {
    pub records: Vec<InstanceRecord>,
    pub reports: Vec<KoszulReport>,
    /// Wall time per instance; kept apart from the records so that the CSV
    /// is reproducible.
    pub timings: Vec<Duration>,
}

/// Generates and evaluates every instance; results are in index order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput, ExperimentError> {
    let instances = generate(spec)?;
    let results: Vec<Result<(InstanceRecord, KoszulReport, Duration), ExperimentError>> = instances
        .par_iter()
        .map(|inst| {
            let start = Instant::now();
            let (r, k) = evaluate(spec, inst)?;
            Ok((r, k, start.elapsed()))
        })
        .collect();
    let mut out = ExperimentOutput {
        records: Vec::new(),
        reports: Vec::new(),
        timings: Vec::new(),
    };
    for r in results {
        let (rec, rep, t) = r?;
        out.records.push(rec);
        out.reports.push(rep);
        out.timings.push(t);
    }
    Ok(out)
}

const HEADER: [&str; 17] = [
    "index",
    "quiver",
    "tips",
    "monomial",
    "d",
    "overlap_route",
    "subpath_route",
    "routes_agree",
    "two_d_determined",
    "weak_delta_chains",
    "ap3_within_d_plus_1",
    "ext012_factorizes",
    "ext012_witnesses",
    "d_koszul",
    "two_d_determined_report",
    "ext_generated_012",
    "ags_minimal",
];

pub fn records_to_csv(records: &[InstanceRecord]) -> Result<String, ExperimentError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| ExperimentError::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn timings_to_csv(timings: &[Duration]) -> String {
    let mut s = String::from("index,micros\n");
    for (i, t) in timings.iter().enumerate() {
        s.push_str(&format!("{i},{}\n", t.as_micros()));
    }
    s
}
