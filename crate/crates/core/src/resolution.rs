//! Resolution degree data of the vertex module `Λ₀` computed two ways: from
//! chain tables (see [`crate::chains::degree_table`]) and by an exact
//! linear-algebra oracle that works only with normal words and reduction.
//!
//! Modules are left modules. The free module `Λ e_u` has basis the normal
//! words ending at `u`; an element `w · gen_i` of a free module is packed as
//! `(id(w) << 32) | i`.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

pub use crate::betti::{BettiRow, BettiTable, Method};
use crate::chains::ChainTable;
use crate::field::{Field, Scalar};
use crate::freealg::{AdmissibleOrder, AlgebraElement, Reducer};
use crate::groebner::{tip_ideal, GroebnerBasis, TipSet};
use crate::linalg::{self, Echelon, SparseVec};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("Gröbner basis is only valid to degree {valid}, degree {needed} requested")]
    IncompleteGb { valid: usize, needed: usize },
}

const NONE: u32 = u32::MAX;

/// Paths avoiding every tip, up to a degree cap. Words are numbered in
/// order of increasing length.
#[derive(Debug, Clone)]
pub struct NormalBasis {
    words: Vec<Path>,
    starts: Vec<usize>,
    by_target: Vec<HashMap<VertexId, Vec<u32>>>,
    /// `left[id * num_arrows + a]`: id of `a · word` when that is normal.
    left: Vec<u32>,
    /// Id of the word with its first arrow removed.
    tail: Vec<u32>,
    /// Position of each word among the words of its length and target.
    pos: Vec<u32>,
    num_arrows: usize,
}

impl NormalBasis {
    pub fn max_degree(&self) -> usize {
        self.starts.len() - 2
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self, len: usize) -> &[Path] {
        if len + 1 >= self.starts.len() {
            return &[];
        }
        &self.words[self.starts[len]..self.starts[len + 1]]
    }

    pub fn word(&self, id: u32) -> &Path {
        &self.words[id as usize]
    }

    pub fn ending_at(&self, len: usize, v: VertexId) -> impl Iterator<Item = u32> + '_ {
        let ids = self.by_target.get(len).and_then(|m| m.get(&v));
        ids.into_iter().flatten().copied()
    }

    /// Id of `a · word` if it is normal (a monomial left multiplication).
    pub fn left(&self, a: ArrowId, id: u32) -> Option<u32> {
        let x = self.left[id as usize * self.num_arrows + a.0 as usize];
        (x != NONE).then_some(x)
    }

    /// Smallest length with no normal words, if reached below the cap.
    pub fn vanishing_length(&self) -> Option<usize> {
        (0..self.starts.len() - 1).find(|&k| self.words(k).is_empty())
    }
}

/// Normal words grown by left extension: `a · w` is normal for normal `w`
/// exactly when no tip is a prefix of it.
pub fn normal_words(quiver: &Quiver, tips: &TipSet, max_degree: usize) -> NormalBasis {
    let na = quiver.num_arrows();
    let mut into: Vec<Vec<ArrowId>> = vec![Vec::new(); quiver.num_vertices()];
    for a in quiver.arrow_ids() {
        into[quiver.arrow(a).target.0 as usize].push(a);
    }
    let mut words: Vec<Path> = quiver.vertex_ids().map(|v| quiver.vertex_path(v)).collect();
    let mut tail = vec![NONE; words.len()];
    let mut starts = vec![0, words.len()];
    let mut left = vec![NONE; words.len() * na];
    for _ in 0..max_degree {
        let (lo, hi) = (starts[starts.len() - 2], starts[starts.len() - 1]);
        for id in lo..hi {
            for &a in &into[words[id].source().0 as usize] {
                let p = quiver.arrow_path(a).compose(&words[id]).expect("a ends where w starts");
                if tips.prefix_of(p.arrows()).is_some() {
                    continue;
                }
                left[id * na + a.0 as usize] = words.len() as u32;
                words.push(p);
                tail.push(id as u32);
                left.extend(std::iter::repeat(NONE).take(na));
            }
        }
        starts.push(words.len());
    }
    let mut pos = vec![0; words.len()];
    let by_target = (0..starts.len() - 1)
        .map(|k| {
            let mut m: HashMap<VertexId, Vec<u32>> = HashMap::new();
            for id in starts[k]..starts[k + 1] {
                let list = m.entry(words[id].target()).or_default();
                pos[id] = list.len() as u32;
                list.push(id as u32);
            }
            m
        })
        .collect();
    NormalBasis {
        words,
        starts,
        by_target,
        left,
        tail,
        pos,
        num_arrows: na,
    }
}

/// Finest grading the ideal is known to respect; blocks of the oracle's
/// linear algebra never mix grades.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    /// Monomial ideals: graded by the word itself.
    Word,
    /// Every relation is a combination of rearrangements of one arrow multiset.
    ArrowCounts,
    Length,
}

impl Grading {
    pub fn detect(gb: &GroebnerBasis, num_arrows: usize) -> Grading {
        if gb.is_monomial() {
            return Grading::Word;
        }
        let multi = gb.elements().iter().all(|g| {
            let mut it = g.support().map(|p| arrow_counts(p, num_arrows));
            let first = it.next();
            it.all(|c| Some(c) == first)
        });
        if multi {
            Grading::ArrowCounts
        } else {
            Grading::Length
        }
    }
}

fn arrow_counts(p: &Path, num_arrows: usize) -> Vec<u32> {
    let mut c = vec![0u32; num_arrows];
    for a in p.arrows() {
        c[a.0 as usize] += 1;
    }
    c
}

/// Interned grades; id 0 is the unit grade.
struct Grades {
    mode: Grading,
    num_arrows: usize,
    /// `child[g * num_arrows + a]`: grade of `a · x` for `x` of grade `g`.
    child: Vec<u32>,
    counts: Vec<Vec<u32>>,
    by_counts: HashMap<Vec<u32>, u32>,
    len: u32,
}

impl Grades {
    fn new(mode: Grading, num_arrows: usize) -> Self {
        let unit = vec![0; num_arrows];
        Grades {
            mode,
            num_arrows,
            child: vec![NONE; num_arrows],
            by_counts: HashMap::from([(unit.clone(), 0)]),
            counts: vec![unit],
            len: 1,
        }
    }

    fn left(&mut self, g: u32, a: ArrowId) -> u32 {
        if self.mode == Grading::Length {
            return 0;
        }
        let slot = g as usize * self.num_arrows + a.0 as usize;
        if self.child[slot] != NONE {
            return self.child[slot];
        }
        let id = match self.mode {
            Grading::ArrowCounts => {
                let mut c = self.counts[g as usize].clone();
                c[a.0 as usize] += 1;
                match self.by_counts.get(&c) {
                    Some(&id) => id,
                    None => self.push(Some(c)),
                }
            }
            _ => self.push(None),
        };
        self.child[slot] = id;
        id
    }

    fn push(&mut self, counts: Option<Vec<u32>>) -> u32 {
        let id = self.len;
        self.len += 1;
        self.child.extend(std::iter::repeat(NONE).take(self.num_arrows));
        if let Some(c) = counts {
            self.by_counts.insert(c.clone(), id);
            self.counts.push(c);
        }
        id
    }
}

fn elem(word: u32, gen: usize) -> usize {
    ((word as usize) << 32) | gen
}

fn elem_word(e: usize) -> u32 {
    (e >> 32) as u32
}

fn elem_gen(e: usize) -> usize {
    e & 0xffff_ffff
}

fn block(v: VertexId, grade: u32) -> u64 {
    ((v.0 as u64) << 32) | grade as u64
}

fn block_vertex(b: u64) -> VertexId {
    VertexId((b >> 32) as u32)
}

fn block_grade(b: u64) -> u32 {
    b as u32
}

#[derive(Debug, Clone)]
struct Generator {
    vertex: VertexId,
    degree: usize,
    grade: u32,
    /// Image in the previous free module.
    image: SparseVec,
}

/// One internal degree of one free module. The elements of generator `i`
/// start at `offsets[i]`, in the order of [`NormalBasis::ending_at`].
#[derive(Default)]
struct Layer {
    offsets: Vec<u32>,
    grade: Vec<u32>,
    images: Vec<SparseVec>,
    elems: Vec<usize>,
    /// Element indices sorted by block, and the block boundaries.
    order: Vec<u32>,
    blocks: Vec<(u64, std::ops::Range<usize>)>,
}

impl Layer {
    fn index(&self, w_pos: u32, gen: usize) -> usize {
        (self.offsets[gen] + w_pos) as usize
    }
}

struct Ctx<'a> {
    quiver: &'a Quiver,
    reducer: Option<Reducer<'a>>,
    field: Field,
    normal: NormalBasis,
    ids: HashMap<Path, u32>,
    memo: HashMap<(ArrowId, u32), Vec<(u32, Scalar)>>,
    grades: Grades,
}

impl Ctx<'_> {
    /// Normal form of `a · w` for the normal word `w`.
    fn left_nf(&mut self, a: ArrowId, w: u32) -> Vec<(u32, Scalar)> {
        if let Some(x) = self.normal.left(a, w) {
            return vec![(x, self.field.one())];
        }
        let Some(reducer) = &self.reducer else { return Vec::new() };
        if let Some(hit) = self.memo.get(&(a, w)) {
            return hit.clone();
        }
        let p = self.quiver.arrow_path(a).compose(self.normal.word(w)).expect("a ends where w starts");
        let nf: Vec<(u32, Scalar)> = reducer
            .reduce(&AlgebraElement::from_path(p, self.field))
            .terms()
            .map(|(q, c)| (self.ids[q], c.clone()))
            .collect();
        self.memo.insert((a, w), nf.clone());
        nf
    }

    fn left_mul(&mut self, a: ArrowId, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        let monomial = self.reducer.is_none();
        for (&e, c) in v {
            let (w, i) = (elem_word(e), elem_gen(e));
            if monomial {
                if let Some(x) = self.normal.left(a, w) {
                    out.insert(elem(x, i), c.clone());
                }
                continue;
            }
            for (x, d) in self.left_nf(a, w) {
                let key = elem(x, i);
                let t = c * &d;
                let nv = match out.get(&key) {
                    Some(cur) => cur + &t,
                    None => t,
                };
                if nv.is_zero() {
                    out.remove(&key);
                } else {
                    out.insert(key, nv);
                }
            }
        }
        out
    }
}

/// Minimal graded projective resolution of `Λ₀` for `Λ = KΓ/⟨gb⟩`, rows
/// `0..=max_n`, generators of internal degree `<= max_degree`.
pub fn oracle_resolution(
    quiver: &Quiver,
    gb: &GroebnerBasis,
    max_n: usize,
    max_degree: usize,
) -> Result<BettiTable, ResolutionError> {
    if !gb.is_complete() && gb.valid_to_degree() < max_degree {
        return Err(ResolutionError::IncompleteGb {
            valid: gb.valid_to_degree(),
            needed: max_degree,
        });
    }
    let field = gb
        .elements()
        .iter()
        .flat_map(|g| g.terms())
        .map(|(_, c)| c.field())
        .next()
        .unwrap_or_default();
    let mode = Grading::detect(gb, quiver.num_arrows());
    let normal = normal_words(quiver, &tip_ideal(quiver, gb), max_degree);
    let monomial = gb.is_monomial();
    let ids = if monomial {
        HashMap::new()
    } else {
        normal.words.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect()
    };
    let mut ctx = Ctx {
        quiver,
        reducer: (!monomial).then(|| gb.reducer(quiver)),
        field,
        normal,
        ids,
        memo: HashMap::new(),
        grades: Grades::new(mode, quiver.num_arrows()),
    };
    Ok(run(&mut ctx, max_n, max_degree))
}

/// The oracle for the monomial algebra `KΓ/⟨rho⟩`.
pub fn oracle_resolution_monomial(quiver: &Quiver, rho: &TipSet, max_n: usize, max_degree: usize) -> BettiTable {
    let order = AdmissibleOrder::deglex(quiver);
    let elements = rho
        .paths()
        .iter()
        .map(|p| AlgebraElement::from_path(p.clone(), Field::Rational))
        .collect();
    let gb = GroebnerBasis::from_parts(quiver, elements, order, usize::MAX, true)
        .expect("an anti-chain of paths is a reduced Gröbner basis");
    oracle_resolution(quiver, &gb, max_n, max_degree).expect("monomial bases are complete")
}

fn run(ctx: &mut Ctx<'_>, max_n: usize, max_degree: usize) -> BettiTable {
    let quiver = ctx.quiver;
    let mut table = BettiTable::new(Method::Oracle, Some(max_degree), max_n + 1);
    for v in quiver.vertex_ids() {
        table.rows[0].add(v, 0, 1);
    }
    if max_n == 0 {
        return table;
    }
    // The arrows minimally generate the radical: a ↦ a · gen(target a).
    let mut gens: Vec<Generator> = Vec::new();
    if max_degree >= 1 {
        for a in quiver.arrow_ids() {
            let arrow = quiver.arrow(a);
            let id = ctx.normal.left(a, arrow.target.0).expect("relations have length >= 2");
            let grade = ctx.grades.left(0, a);
            gens.push(Generator {
                vertex: arrow.source,
                degree: 1,
                grade,
                image: SparseVec::from([(elem(id, arrow.target.0 as usize), ctx.field.one())]),
            });
            table.rows[1].add(arrow.source, 1, 1);
        }
    }
    // A row is exact when the kernel of the previous map was computed in
    // every degree where it can live.
    let top = ctx.normal.vanishing_length().map(|l| l.saturating_sub(1));
    let mut exact = true;
    for n in 1..max_n {
        let max_gen = gens.iter().map(|g| g.degree).max().unwrap_or(0);
        exact = exact && (gens.is_empty() || top.map_or(false, |t| max_gen + t <= max_degree));
        let next = next_generators(ctx, &gens, max_degree);
        for g in &next {
            table.rows[n + 1].add(g.vertex, g.degree, 1);
        }
        table.rows[n + 1].truncated = !exact;
        gens = next;
    }
    table
}

/// Minimal generators of the kernel of the map defined by `gens`, degree by
/// degree.
fn next_generators(ctx: &mut Ctx<'_>, gens: &[Generator], max_degree: usize) -> Vec<Generator> {
    let one = ctx.field.one();
    let mut out = Vec::new();
    let mut prev: Option<Layer> = None;
    let mut prev_kernel: Vec<(u64, Vec<SparseVec>)> = Vec::new();
    let min_degree = gens.iter().map(|g| g.degree).min().unwrap_or(usize::MAX);

    for k in min_degree..=max_degree {
        let layer = build_layer(ctx, gens, prev.as_ref(), k);
        let blocks: Vec<(u64, &[u32])> = layer.blocks.iter().map(|(b, r)| (*b, &layer.order[r.clone()])).collect();
        let kernels: Vec<Vec<SparseVec>> = blocks
            .par_iter()
            .map(|(_, idx)| block_kernel(&layer, idx, &one))
            .collect();

        // Λ₁ · (kernel in degree k - 1), by block.
        let mut generated: HashMap<u64, Vec<SparseVec>> = HashMap::new();
        for (b, vs) in &prev_kernel {
            let (src, g) = (block_vertex(*b), block_grade(*b));
            for a in ctx.quiver.arrow_ids().filter(|&a| ctx.quiver.arrow(a).target == src) {
                let key = block(ctx.quiver.arrow(a).source, ctx.grades.left(g, a));
                for v in vs {
                    let w = ctx.left_mul(a, v);
                    if !w.is_empty() {
                        generated.entry(key).or_default().push(w);
                    }
                }
            }
        }

        let fresh: Vec<Vec<SparseVec>> = blocks
            .par_iter()
            .zip(kernels.par_iter())
            .map(|((key, _), ker)| {
                if ker.is_empty() {
                    return Vec::new();
                }
                let mut ech = Echelon::new();
                for v in generated.get(key).into_iter().flatten() {
                    ech.insert(v);
                }
                if ech.rank() == ker.len() {
                    return Vec::new();
                }
                ker.iter().filter(|v| ech.insert(v)).cloned().collect()
            })
            .collect();

        for ((b, _), new) in blocks.iter().zip(fresh) {
            for image in new {
                out.push(Generator {
                    vertex: block_vertex(*b),
                    degree: k,
                    grade: block_grade(*b),
                    image,
                });
            }
        }

        prev_kernel = blocks
            .iter()
            .map(|(b, _)| *b)
            .zip(kernels)
            .filter(|(_, v)| !v.is_empty())
            .collect();
        prev = Some(layer);
    }
    out
}

/// The degree-`k` part of the free module on `gens`, with the images of its
/// basis elements.
fn build_layer(ctx: &mut Ctx<'_>, gens: &[Generator], prev: Option<&Layer>, k: usize) -> Layer {
    let mut layer = Layer::default();
    let mut keys: Vec<u64> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        layer.offsets.push(layer.elems.len() as u32);
        if g.degree > k {
            continue;
        }
        let ids: Vec<u32> = ctx.normal.ending_at(k - g.degree, g.vertex).collect();
        for w in ids {
            let path = ctx.normal.word(w);
            let (src, first) = (path.source(), path.arrows().first().copied());
            let (image, grade) = if let Some(a) = first {
                let prev = prev.expect("lower degree layer exists");
                let j = prev.index(ctx.normal.pos[ctx.normal.tail[w as usize] as usize], i);
                let grade = ctx.grades.left(prev.grade[j], a);
                (ctx.left_mul(a, &prev.images[j]), grade)
            } else {
                (g.image.clone(), g.grade)
            };
            keys.push(block(src, grade));
            layer.elems.push(elem(w, i));
            layer.grade.push(grade);
            layer.images.push(image);
        }
    }
    let mut order: Vec<u32> = (0..keys.len() as u32).collect();
    order.sort_unstable_by_key(|&i| (keys[i as usize], i));
    let mut start = 0;
    while start < order.len() {
        let b = keys[order[start] as usize];
        let mut end = start + 1;
        while end < order.len() && keys[order[end] as usize] == b {
            end += 1;
        }
        layer.blocks.push((b, start..end));
        start = end;
    }
    layer.order = order;
    layer
}

/// Kernel of the block's map, as vectors over the block's basis elements.
fn block_kernel(layer: &Layer, idx: &[u32], one: &Scalar) -> Vec<SparseVec> {
    if let [i] = idx {
        let i = *i as usize;
        return if layer.images[i].is_empty() {
            vec![SparseVec::from([(layer.elems[i], one.clone())])]
        } else {
            Vec::new()
        };
    }
    let rows: Vec<SparseVec> = idx.iter().map(|&i| layer.images[i as usize].clone()).collect();
    linalg::kernel(&rows, one)
        .into_iter()
        .map(|y| y.into_iter().map(|(r, c)| (layer.elems[idx[r] as usize], c)).collect())
        .collect()
}

/// Image of the generator indexed by a chain: `r · gen(parent)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialImage {
    pub coefficient: Path,
    pub parent: usize,
}

/// For each level `n >= 1`, the images of the level-`n` generators in the
/// level-`(n-1)` free module of the minimal resolution of a monomial algebra.
pub fn monomial_differential(table: &ChainTable) -> Vec<Vec<DifferentialImage>> {
    table
        .levels()
        .iter()
        .map(|level| {
            level
                .iter()
                .filter_map(|c| {
                    c.parent.map(|p| DifferentialImage {
                        coefficient: c.prefix.clone(),
                        parent: p,
                    })
                })
                .collect()
        })
        .collect()
}

/// Chains `(level, index)` whose composite `r · s · gen(grandparent)` is not
/// zero in the monomial algebra.
pub fn d_squared_failures(table: &ChainTable) -> Vec<(usize, usize)> {
    let diff = monomial_differential(table);
    let mut bad = Vec::new();
    for n in 2..diff.len() {
        for (i, img) in diff[n].iter().enumerate() {
            let s = &diff[n - 1][img.parent].coefficient;
            let rs = img.coefficient.compose(s).expect("consecutive prefixes compose");
            if !table.rho().contains_any(rs.arrows()) {
                bad.push((n, i));
            }
        }
    }
    bad
}
