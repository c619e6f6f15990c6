//! Decision procedures: δ, d-Koszul for monomial anti-chains, (weakly)
//! F-determined degree tables, 2-d-determined, generation of Ext in degrees
//! 0, 1, 2, and the classification pipeline that transfers verdicts between
//! an algebra and its associated monomial algebra.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::betti::BettiTable;
use crate::chains::{build_chains, degree_table, maximal_overlap_set, ChainTable};
use crate::freealg::{AdmissibleOrder, AlgebraElement};
use crate::groebner::{buchberger, stratify_by_degree, tip_ideal, GroebnerBasis, GroebnerError, TipSet};
use crate::quiver::{self, Path, Quiver};
use crate::resolution::{oracle_resolution, ResolutionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error("relation of length {found} in a set expected to be concentrated in degree {expected}")]
    MixedDegree { expected: usize, found: usize },
    #[error("relation lengths must lie in {{2, {d}}} with d >= 3")]
    WrongDegreeProfile { d: usize },
    #[error("degree d must be at least 2, got {0}")]
    InvalidD(usize),
    #[error("row {0} of the degree table is truncated")]
    TruncatedRow(usize),
    #[error("bad degree function `{0}`")]
    BadDegreeFunction(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}

/// `nd/2` for even `n`, `(n-1)d/2 + 1` for odd `n`.
pub fn delta(n: usize, d: usize) -> usize {
    if n % 2 == 0 {
        n * d / 2
    } else {
        (n - 1) * d / 2 + 1
    }
}

/// A degree bound `F` with `F(n) >= n` on its domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegreeFunction {
    Delta { d: usize },
    /// `F(n) = values[n]`; undefined past the end.
    Table { values: Vec<usize> },
    /// `F(n) = slope * n + offset`.
    Affine { slope: usize, offset: usize },
}

impl DegreeFunction {
    pub fn eval(&self, n: usize) -> Option<usize> {
        match self {
            DegreeFunction::Delta { d } => Some(delta(n, *d)),
            DegreeFunction::Table { values } => values.get(n).copied(),
            DegreeFunction::Affine { slope, offset } => Some(slope * n + offset),
        }
    }

    pub fn validate(&self) -> Result<(), KoszulError> {
        let ok = match self {
            DegreeFunction::Delta { d } => *d >= 2,
            DegreeFunction::Table { values } => values.iter().enumerate().all(|(n, &f)| f >= n),
            DegreeFunction::Affine { slope, .. } => *slope >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(KoszulError::BadDegreeFunction(self.to_string()))
        }
    }
}

impl fmt::Display for DegreeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeFunction::Delta { d } => write!(f, "delta:{d}"),
            DegreeFunction::Table { values } => {
                let v: Vec<String> = values.iter().map(|x| x.to_string()).collect();
                write!(f, "table:{}", v.join(","))
            }
            DegreeFunction::Affine { slope, offset } => write!(f, "affine:{slope},{offset}"),
        }
    }
}

impl FromStr for DegreeFunction {
    type Err = KoszulError;

    /// `delta:D`, `table:F0,F1,...` or `affine:A,B` (meaning `A*n + B`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || KoszulError::BadDegreeFunction(s.to_string());
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums: Result<Vec<usize>, _> = rest.split(',').map(|t| t.trim().parse::<usize>()).collect();
        let nums = nums.map_err(|_| bad())?;
        let f = match (kind.trim(), nums.as_slice()) {
            ("delta", [d]) => DegreeFunction::Delta { d: *d },
            ("table", v) if !v.is_empty() => DegreeFunction::Table { values: v.to_vec() },
            ("affine", [a, b]) => DegreeFunction::Affine { slope: *a, offset: *b },
            _ => return Err(bad()),
        };
        f.validate()?;
        Ok(f)
    }
}

/// Both finite d-Koszul criteria for a monomial anti-chain concentrated in
/// degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DKoszulCheck {
    pub d: usize,
    /// Every maximal overlap has length `d + 1`.
    pub by_overlaps: bool,
    /// Every length-`d` subpath of every overlap word lies in the set.
    pub by_subpaths: bool,
    pub long_overlaps: Vec<Path>,
    /// `(overlap word, offending subpath)`.
    pub foreign_subpaths: Vec<(Path, Path)>,
}

impl DKoszulCheck {
    pub fn holds(&self) -> bool {
        self.by_overlaps
    }

    pub fn routes_agree(&self) -> bool {
        self.by_overlaps == self.by_subpaths
    }
}

pub fn is_d_koszul_monomial(quiver: &Quiver, rho: &TipSet, d: usize) -> Result<DKoszulCheck, KoszulError> {
    if d < 2 {
        return Err(KoszulError::InvalidD(d));
    }
    if let Some(&found) = rho.lengths().iter().find(|&&l| l != d) {
        return Err(KoszulError::MixedDegree { expected: d, found });
    }
    let long_overlaps: Vec<Path> = maximal_overlap_set(quiver, rho)
        .into_iter()
        .filter(|p| p.len() != d + 1)
        .collect();

    let mut foreign_subpaths = Vec::new();
    for p in rho.paths() {
        for q in rho.paths() {
            for ov in quiver::overlaps(quiver, p, q) {
                if ov.r.is_empty() || ov.r.len() >= d {
                    continue;
                }
                let w = ov.word.arrows();
                for off in 0..=w.len() - d {
                    if rho.lookup(&w[off..off + d]).is_none() {
                        foreign_subpaths.push((ov.word.clone(), quiver.subpath(&ov.word, off, off + d)));
                        break;
                    }
                }
            }
        }
    }
    Ok(DKoszulCheck {
        d,
        by_overlaps: long_overlaps.is_empty(),
        by_subpaths: foreign_subpaths.is_empty(),
        long_overlaps,
        foreign_subpaths,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FMode {
    /// Row `n` generated exactly in degree `F(n)`.
    Strict,
    /// Row `n` generated in degrees `n..=F(n)`.
    Weak,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FCheck {
    pub mode: FMode,
    /// Largest row examined.
    pub max_n: usize,
    pub holds: bool,
    /// `(n, internal degree)` of offending entries.
    pub witnesses: Vec<(usize, usize)>,
}

/// Offending `(n, degree)` entries and rows that are truncated, for
/// `n <= max_n` within the domain of `f`.
fn scan_f(table: &BettiTable, f: &DegreeFunction, mode: FMode, max_n: usize) -> (usize, Vec<(usize, usize)>, Vec<usize>) {
    let mut last = 0;
    let mut bad = Vec::new();
    let mut truncated = Vec::new();
    for n in 0..=max_n.min(table.max_n()) {
        let Some(fv) = f.eval(n) else { break };
        let row = &table.rows[n];
        last = n;
        if row.truncated {
            truncated.push(n);
        }
        for (&(_, deg), _) in &row.entries {
            let ok = match mode {
                FMode::Strict => deg == fv,
                FMode::Weak => deg >= n && deg <= fv,
            };
            if !ok {
                bad.push((n, deg));
            }
        }
    }
    (last, bad, truncated)
}

pub fn check_f_determined(
    table: &BettiTable,
    f: &DegreeFunction,
    mode: FMode,
    max_n: usize,
) -> Result<FCheck, KoszulError> {
    let (last, witnesses, truncated) = scan_f(table, f, mode, max_n);
    if let Some(&n) = truncated.first() {
        return Err(KoszulError::TruncatedRow(n));
    }
    Ok(FCheck {
        mode,
        max_n: last,
        holds: witnesses.is_empty(),
        witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoDCheck {
    pub d: usize,
    pub stratum: Vec<Path>,
    /// `None` when the degree-`d` stratum is empty.
    pub inner: Option<DKoszulCheck>,
}

impl TwoDCheck {
    pub fn verdict(&self) -> Option<bool> {
        self.inner.as_ref().map(|c| c.holds())
    }
}

/// 2-d-determinedness of `KΓ/⟨rho⟩`, decided by d-Koszulity of the
/// degree-`d` stratum.
pub fn is_2d_determined_monomial(quiver: &Quiver, rho: &TipSet, d: usize) -> Result<TwoDCheck, KoszulError> {
    if d < 3 || rho.lengths().iter().any(|&l| l != 2 && l != d) {
        return Err(KoszulError::WrongDegreeProfile { d });
    }
    let stratum = rho.stratum(d);
    let inner = if stratum.is_empty() {
        None
    } else {
        let rho_d = TipSet::new(quiver, stratum.clone())?;
        Some(is_d_koszul_monomial(quiver, &rho_d, d)?)
    };
    Ok(TwoDCheck { d, stratum, inner })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtCheck {
    pub max_n: usize,
    pub holds: bool,
    /// `(level, index)` of chains factoring neither as `arrow · a_{n-1}` nor
    /// as `relation · a_{n-2}`.
    pub witnesses: Vec<(usize, usize)>,
}

pub fn check_ext_generation_012(table: &ChainTable) -> ExtCheck {
    let mut witnesses = Vec::new();
    for n in 3..=table.n_max() {
        for (i, c) in table.level(n).iter().enumerate() {
            if c.prefix.len() == 1 {
                continue;
            }
            let parent = table.parent_of(c).expect("chains above level 0 have parents");
            let grand = table.parent_of(parent).expect("chains above level 1 have parents");
            let cut = c.word.len().saturating_sub(grand.word.len());
            let splits = c.word.arrows().ends_with(grand.word.arrows())
                && table.rho().lookup(&c.word.arrows()[..cut]).is_some();
            if !splits {
                witnesses.push((n, i));
            }
        }
    }
    ExtCheck {
        max_n: table.n_max(),
        holds: witnesses.is_empty(),
        witnesses,
    }
}

// ---------------------------------------------------------------------------
// Classification.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Yes,
    No,
    Inconclusive,
    OutOfScope,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    Exact,
    /// Checked for homological degrees `n <= max_n` and internal degrees
    /// `<= max_degree`.
    Bounded { max_n: usize, max_degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
}

impl Witness {
    fn words(kind: &str, words: Vec<String>) -> Self {
        Witness {
            kind: kind.to_string(),
            n: None,
            degree: None,
            words,
        }
    }

    fn entry(kind: &str, n: usize, degree: usize) -> Self {
        Witness {
            kind: kind.to_string(),
            n: Some(n),
            degree: Some(degree),
            words: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scope: Option<Scope>,
    /// Results applied to reach the verdict.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reasons: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    fn new(status: Status, scope: Option<Scope>) -> Self {
        Verdict {
            status,
            scope,
            reasons: Vec::new(),
            witnesses: Vec::new(),
            note: None,
        }
    }

    fn exact(status: Status) -> Self {
        Self::new(status, Some(Scope::Exact))
    }

    fn out_of_scope(note: &str) -> Self {
        Self::new(Status::OutOfScope, None).note(note)
    }

    fn reason(mut self, r: &str) -> Self {
        self.reasons.push(r.to_string());
        self
    }

    fn note(mut self, n: &str) -> Self {
        self.note = Some(n.to_string());
        self
    }

    fn with_witnesses(mut self, w: Vec<Witness>) -> Self {
        self.witnesses = w;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// No relations.
    Free,
    /// Every basis element has degree `d`.
    Concentrated,
    /// Degrees `{2, d}` with `d >= 3`.
    TwoD,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerSummary {
    pub elements: usize,
    pub degrees: Vec<usize>,
    pub complete: bool,
    pub valid_to_degree: usize,
    pub monomial: bool,
    pub tips: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVerdict {
    pub function: String,
    pub mode: FMode,
    pub algebra: Verdict,
    pub monomial_algebra: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub d_koszul: Verdict,
    pub two_d_determined: Verdict,
    pub ext_generated_012: Verdict,
    pub two_d_koszul: Verdict,
    #[serde(default)]
    pub f_determined: Vec<FVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub n: usize,
    pub degrees: Vec<usize>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulReport {
    pub input: String,
    pub max_degree: usize,
    pub max_n: usize,
    pub groebner: GroebnerSummary,
    pub shape: Shape,
    pub d: Option<usize>,
    pub verdicts: Verdicts,
    /// Whether the resolution indexed by tip chains is minimal.
    pub ags_minimal: Verdict,
    pub chain_degrees: Vec<DegreeRow>,
    pub oracle_degrees: Vec<DegreeRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub max_degree: usize,
    pub max_n: usize,
    pub d: Option<usize>,
    pub f_checks: Vec<(DegreeFunction, FMode)>,
    pub label: String,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_degree: 10,
            max_n: 6,
            d: None,
            f_checks: Vec::new(),
            label: String::new(),
        }
    }
}

fn degree_rows(t: &BettiTable) -> Vec<DegreeRow> {
    t.rows
        .iter()
        .enumerate()
        .map(|(n, r)| DegreeRow {
            n,
            degrees: r.degrees(),
            truncated: r.truncated,
        })
        .collect()
}

fn shape_of(degrees: &BTreeSet<usize>, d_override: Option<usize>) -> (Shape, Option<usize>) {
    let v: Vec<usize> = degrees.iter().copied().collect();
    if v.is_empty() {
        return (Shape::Free, d_override);
    }
    let d = d_override.unwrap_or(*v.last().expect("nonempty"));
    let shape = match v.as_slice() {
        [x] if *x == d => Shape::Concentrated,
        [2] if d >= 3 => Shape::TwoD,
        [2, y] if *y == d && d >= 3 => Shape::TwoD,
        _ => Shape::Mixed,
    };
    (shape, Some(d))
}

/// Runs the whole pipeline: Gröbner basis to `max_degree`, tip chains and
/// the oracle to `max_n`, then every applicable decision procedure.
pub fn classify(
    quiver: &Quiver,
    generators: &[AlgebraElement],
    order: &AdmissibleOrder,
    opts: &ClassifyOptions,
) -> Result<KoszulReport, KoszulError> {
    let gb = buchberger(quiver, generators, order, opts.max_degree)?;
    classify_basis(quiver, &gb, opts)
}

pub fn classify_basis(quiver: &Quiver, gb: &GroebnerBasis, opts: &ClassifyOptions) -> Result<KoszulReport, KoszulError> {
    let (dmax, nmax) = (opts.max_degree, opts.max_n);
    let bounded = Some(Scope::Bounded {
        max_n: nmax,
        max_degree: dmax,
    });
    let tips = tip_ideal(quiver, gb);
    let strata = stratify_by_degree(gb);
    let degrees: BTreeSet<usize> = strata.keys().copied().collect();
    let (shape, d) = shape_of(&degrees, opts.d);
    let complete = gb.is_complete();
    let monomial = gb.is_monomial();

    let chains = build_chains(quiver, &tips, nmax, None);
    let chain_table = degree_table(&chains);
    let oracle = oracle_resolution(quiver, gb, nmax, dmax)?;
    let show = |p: &Path| quiver.display_path(p);

    let incomplete = || {
        Verdict::new(Status::Inconclusive, bounded.clone())
            .note("the Gröbner basis did not stabilize below the degree bound")
    };

    // AGS minimality, tested on the common window.
    let ags_minimal = match oracle.first_disagreement(&chain_table, nmax, dmax) {
        None => Verdict::new(Status::Yes, bounded.clone()).reason("oracle and tip-chain tables agree"),
        Some(n) => Verdict::exact(Status::No)
            .reason("oracle and tip-chain tables differ")
            .with_witnesses(vec![Witness {
                kind: "row".into(),
                n: Some(n),
                degree: None,
                words: Vec::new(),
            }]),
    };
    let ags_holds = ags_minimal.status == Status::Yes;

    // d-Koszul.
    let d_koszul = match (shape, d) {
        (Shape::Free, _) => Verdict::out_of_scope("no relations"),
        (Shape::Concentrated, Some(d)) if complete => {
            let check = is_d_koszul_monomial(quiver, &tips, d)?;
            let mut w: Vec<Witness> = check
                .long_overlaps
                .iter()
                .map(|p| Witness::words("maximal_overlap", vec![show(p)]))
                .collect();
            w.extend(
                check
                    .foreign_subpaths
                    .iter()
                    .map(|(o, s)| Witness::words("overlap_subpath", vec![show(o), show(s)])),
            );
            let status = if check.holds() { Status::Yes } else { Status::No };
            let mut v = Verdict::exact(status)
                .reason("maximal-overlap length criterion")
                .reason("overlap subpath criterion")
                .with_witnesses(w);
            if !monomial {
                v = v.reason("d-Koszul transfers both ways between an algebra and its tip algebra when the basis is concentrated in one degree");
            }
            if !check.routes_agree() {
                v = v.note("the two finite criteria disagree");
            }
            v
        }
        (Shape::Concentrated, Some(_)) => incomplete(),
        (_, Some(d)) => {
            let (_, bad, _) = scan_f(&oracle, &DegreeFunction::Delta { d }, FMode::Strict, nmax);
            if bad.is_empty() {
                Verdict::new(Status::Inconclusive, bounded.clone())
                    .note("basis not concentrated in one degree; no violation of strict δ within the bounds")
            } else {
                Verdict::exact(Status::No)
                    .reason("minimal resolution not generated in degrees δ(n)")
                    .with_witnesses(bad.iter().map(|&(n, g)| Witness::entry("oracle_entry", n, g)).collect())
            }
        }
        _ => Verdict::out_of_scope("degree d undefined"),
    };

    // 2-d-determined and its companions.
    let mut two_d_koszul = Verdict::out_of_scope("requires relations in degrees 2 and d with d >= 3");
    let mut ext_012 = Verdict::out_of_scope("requires a monomial algebra with relations in degrees 2 and d");
    let two_d_determined = match (shape, d) {
        (Shape::Concentrated | Shape::TwoD, Some(d)) if d >= 3 => {
            let stratum = TipSet::new(quiver, tips.stratum(d))?;
            let weak = scan_f(&oracle, &DegreeFunction::Delta { d }, FMode::Weak, nmax).1;
            let check = if stratum.is_empty() { None } else { Some(is_d_koszul_monomial(quiver, &stratum, d)?) };
            let v = match (&check, complete) {
                (_, false) => incomplete(),
                (None, true) => Verdict::out_of_scope("no relations of degree d"),
                (Some(c), true) if c.holds() => Verdict::exact(Status::Yes)
                    .reason("tip algebra of the degree-d stratum is d-Koszul")
                    .reason(if monomial {
                        "monomial 2-d-determined criterion"
                    } else {
                        "2-d-determined sufficient criterion"
                    }),
                (Some(c), true) => {
                    let w: Vec<Witness> = c
                        .long_overlaps
                        .iter()
                        .map(|p| Witness::words("maximal_overlap", vec![show(p)]))
                        .collect();
                    if monomial {
                        Verdict::exact(Status::No)
                            .reason("monomial 2-d-determined criterion")
                            .with_witnesses(w)
                    } else if !weak.is_empty() {
                        Verdict::exact(Status::No)
                            .reason("minimal resolution exceeds δ(n)")
                            .with_witnesses(weak.iter().map(|&(n, g)| Witness::entry("oracle_entry", n, g)).collect())
                    } else if ags_holds {
                        Verdict::new(Status::No, bounded.clone())
                            .reason("equivalence under AGS minimality")
                            .with_witnesses(w)
                            .note("conditional on AGS minimality, which holds within the bounds")
                    } else {
                        Verdict::new(Status::Inconclusive, bounded.clone())
                            .with_witnesses(w)
                            .note("stratum is not d-Koszul and AGS minimality fails; no weak-δ violation within the bounds")
                    }
                }
            };
            if monomial && complete {
                let ext = check_ext_generation_012(&chains);
                let ext_w: Vec<Witness> = ext
                    .witnesses
                    .iter()
                    .map(|&(n, i)| {
                        let mut w = Witness::words("chain", vec![show(&chains.level(n)[i].word)]);
                        w.n = Some(n);
                        w
                    })
                    .collect();
                ext_012 = match v.status {
                    Status::Yes => {
                        let mut e = Verdict::exact(Status::Yes)
                            .reason("2-d-determined monomial algebras have Ext generated in degrees 0, 1, 2")
                            .with_witnesses(ext_w);
                        if !ext.holds {
                            e = e.note("chain factorization check failed within the bounds");
                        }
                        e
                    }
                    _ if ext.holds => Verdict::new(Status::Yes, bounded.clone()).reason("chain factorization criterion"),
                    _ => Verdict::new(Status::Inconclusive, bounded.clone())
                        .with_witnesses(ext_w)
                        .note("chain factorization criterion fails; it is only sufficient"),
                };
                two_d_koszul = match v.status {
                    Status::Yes => Verdict::exact(Status::Yes).reason("monomial 2-d-determined iff 2-d-Koszul"),
                    Status::No => Verdict::exact(Status::No)
                        .reason("monomial 2-d-determined iff 2-d-Koszul")
                        .with_witnesses(v.witnesses.clone()),
                    _ => Verdict::new(Status::Inconclusive, bounded.clone()),
                };
            } else if complete {
                two_d_koszul = Verdict::new(Status::Inconclusive, None)
                    .note("finite generation of Ext is open for non-monomial 2-d-determined algebras");
                ext_012 = Verdict::new(Status::Inconclusive, None)
                    .note("finite generation of Ext is open for non-monomial 2-d-determined algebras");
            }
            v
        }
        (Shape::Concentrated, Some(2)) => Verdict::out_of_scope("quadratic relations only; d undefined"),
        (Shape::Free, _) => Verdict::out_of_scope("no relations"),
        _ => Verdict::out_of_scope("relations not in degrees {2, d}"),
    };

    // Supplied degree functions.
    let mut f_determined = Vec::new();
    for (f, mode) in &opts.f_checks {
        let (_, mon_bad, _) = scan_f(&chain_table, f, *mode, nmax);
        let monomial_algebra = if mon_bad.is_empty() {
            Verdict::new(Status::Yes, bounded.clone())
        } else {
            Verdict::exact(Status::No)
                .with_witnesses(mon_bad.iter().map(|&(n, g)| Witness::entry("chain_entry", n, g)).collect())
        };
        let (_, alg_bad, truncated) = scan_f(&oracle, f, *mode, nmax);
        let algebra = if !alg_bad.is_empty() {
            Verdict::exact(Status::No)
                .with_witnesses(alg_bad.iter().map(|&(n, g)| Witness::entry("oracle_entry", n, g)).collect())
        } else if mon_bad.is_empty() {
            Verdict::new(Status::Yes, bounded.clone()).reason(match mode {
                FMode::Weak => "weak F-bounds transfer from the tip algebra",
                FMode::Strict => "F-determinedness transfers from the tip algebra",
            })
        } else if truncated.is_empty() {
            Verdict::new(Status::Yes, bounded.clone())
        } else {
            Verdict::new(Status::Inconclusive, bounded.clone()).note("oracle rows truncated at the degree bound")
        };
        f_determined.push(FVerdict {
            function: f.to_string(),
            mode: *mode,
            algebra,
            monomial_algebra,
        });
    }

    Ok(KoszulReport {
        input: opts.label.clone(),
        max_degree: dmax,
        max_n: nmax,
        groebner: GroebnerSummary {
            elements: gb.elements().len(),
            degrees: degrees.into_iter().collect(),
            complete,
            valid_to_degree: gb.valid_to_degree(),
            monomial,
            tips: tips.paths().iter().map(show).collect(),
        },
        shape,
        d,
        verdicts: Verdicts {
            d_koszul,
            two_d_determined,
            ext_generated_012: ext_012,
            two_d_koszul,
            f_determined,
        },
        ags_minimal,
        chain_degrees: degree_rows(&chain_table),
        oracle_degrees: degree_rows(&oracle),
    })
}

impl KoszulReport {
    /// Whether any verdict is inconclusive.
    pub fn has_inconclusive(&self) -> bool {
        let v = &self.verdicts;
        [&v.d_koszul, &v.two_d_determined, &v.ext_generated_012, &v.two_d_koszul]
            .into_iter()
            .chain(v.f_determined.iter().flat_map(|f| [&f.algebra, &f.monomial_algebra]))
            .any(|x| x.status == Status::Inconclusive)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        if !self.input.is_empty() {
            line(&mut out, format!("input: {}", self.input));
        }
        line(&mut out, format!("bounds: degree <= {}, n <= {}", self.max_degree, self.max_n));
        let g = &self.groebner;
        line(
            &mut out,
            format!(
                "groebner basis: {} elements, degrees {:?}, {}",
                g.elements,
                g.degrees,
                if g.complete { "complete" } else { "incomplete" }
            ),
        );
        line(&mut out, format!("tips: {}", g.tips.join(" ")));
        let d = self.d.map_or("-".to_string(), |d| d.to_string());
        line(&mut out, format!("shape: {:?}, d = {d}", self.shape));
        let v = &self.verdicts;
        for (name, x) in [
            ("d-koszul", &v.d_koszul),
            ("2-d-determined", &v.two_d_determined),
            ("ext generated in 0,1,2", &v.ext_generated_012),
            ("2-d-koszul", &v.two_d_koszul),
            ("ags minimal", &self.ags_minimal),
        ] {
            line(&mut out, format!("{name}: {}", render_verdict(x)));
        }
        for f in &v.f_determined {
            line(
                &mut out,
                format!(
                    "{:?} {}: algebra {}; tip algebra {}",
                    f.mode,
                    f.function,
                    render_verdict(&f.algebra),
                    render_verdict(&f.monomial_algebra)
                ),
            );
        }
        line(&mut out, "degrees (tip chains | oracle):".to_string());
        for (c, o) in self.chain_degrees.iter().zip(&self.oracle_degrees) {
            line(
                &mut out,
                format!(
                    "  n={}: {:?} | {:?}{}",
                    c.n,
                    c.degrees,
                    o.degrees,
                    if o.truncated { " (truncated)" } else { "" }
                ),
            );
        }
        out
    }
}

fn render_verdict(v: &Verdict) -> String {
    let mut s = match v.status {
        Status::Yes => "yes".to_string(),
        Status::No => "no".to_string(),
        Status::Inconclusive => "inconclusive".to_string(),
        Status::OutOfScope => "out of scope".to_string(),
    };
    match &v.scope {
        Some(Scope::Exact) => s.push_str(" (exact)"),
        Some(Scope::Bounded { max_n, max_degree }) => s.push_str(&format!(" (n <= {max_n}, degree <= {max_degree})")),
        None => {}
    }
    if !v.witnesses.is_empty() {
        let w: Vec<String> = v
            .witnesses
            .iter()
            .take(4)
            .map(|w| {
                let mut parts = Vec::new();
                if let Some(n) = w.n {
                    parts.push(format!("n={n}"));
                }
                if let Some(d) = w.degree {
                    parts.push(format!("degree={d}"));
                }
                parts.extend(w.words.iter().cloned());
                format!("{}[{}]", w.kind, parts.join(" "))
            })
            .collect();
        s.push_str(&format!("; witnesses: {}", w.join(", ")));
    }
    if let Some(n) = &v.note {
        s.push_str(&format!("; {n}"));
    }
    s
}
