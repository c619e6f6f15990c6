//! Quivers, paths, and the word combinatorics on arrow sequences.
//!
//! Paths are read left to right in traversal order: `p.compose(q)` is "p then
//! q" and is defined when `p.target() == q.source()`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowId(pub u32);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("empty vertex or arrow name")]
    EmptyName,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows `{0}` and `{1}` do not compose")]
    Discontinuous(String, String),
    #[error("composition mismatch: path ends at vertex {0} but the next one starts at vertex {1}")]
    CompositionMismatch(u32, u32),
    #[error("a path needs at least one arrow or a base vertex")]
    EmptyPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A finite quiver. Declaration order of vertices and arrows is preserved and
/// is the default tie-breaking order for admissible orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
    out_arrows: Vec<Vec<ArrowId>>,
}

impl Quiver {
    pub fn new<V, A>(vertices: V, arrows: A) -> Result<Self, QuiverError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let mut vertex_names = Vec::new();
        let mut vertex_index = HashMap::new();
        for name in vertices {
            let name: String = name.into();
            if name.is_empty() {
                return Err(QuiverError::EmptyName);
            }
            let id = VertexId(vertex_names.len() as u32);
            if vertex_index.insert(name.clone(), id).is_some() {
                return Err(QuiverError::DuplicateVertex(name));
            }
            vertex_names.push(name);
        }
        let mut arrow_list = Vec::new();
        let mut arrow_index = HashMap::new();
        let mut out_arrows = vec![Vec::new(); vertex_names.len()];
        for (name, source, target) in arrows {
            if name.is_empty() {
                return Err(QuiverError::EmptyName);
            }
            let source = *vertex_index
                .get(&source)
                .ok_or_else(|| QuiverError::UnknownVertex(source.clone()))?;
            let target = *vertex_index
                .get(&target)
                .ok_or_else(|| QuiverError::UnknownVertex(target.clone()))?;
            let id = ArrowId(arrow_list.len() as u32);
            if arrow_index.insert(name.clone(), id).is_some() {
                return Err(QuiverError::DuplicateArrow(name));
            }
            out_arrows[source.0 as usize].push(id);
            arrow_list.push(Arrow { name, source, target });
        }
        Ok(Quiver {
            vertices: vertex_names,
            arrows: arrow_list,
            vertex_index,
            arrow_index,
            out_arrows,
        })
    }

    /// One vertex with a loop for each name.
    pub fn one_vertex_loops(names: &[&str]) -> Self {
        Quiver::new(
            ["v"],
            names
                .iter()
                .map(|n| (n.to_string(), "v".to_string(), "v".to_string())),
        )
        .expect("loop quiver is well formed")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len() as u32).map(ArrowId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0 as usize]
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0 as usize]
    }

    pub fn arrows_from(&self, v: VertexId) -> &[ArrowId] {
        &self.out_arrows[v.0 as usize]
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId, QuiverError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId, QuiverError> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| QuiverError::UnknownArrow(name.to_string()))
    }

    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path {
            arrows: Vec::new(),
            source: v,
            target: v,
        }
    }

    pub fn arrow_path(&self, a: ArrowId) -> Path {
        let arrow = self.arrow(a);
        Path {
            arrows: vec![a],
            source: arrow.source,
            target: arrow.target,
        }
    }

    /// Builds a path of positive length from arrow ids, checking that
    /// consecutive arrows compose.
    pub fn path_from_ids(&self, ids: &[ArrowId]) -> Result<Path, QuiverError> {
        let (first, last) = match (ids.first(), ids.last()) {
            (Some(f), Some(l)) => (*f, *l),
            _ => return Err(QuiverError::EmptyPath),
        };
        for pair in ids.windows(2) {
            if self.arrow(pair[0]).target != self.arrow(pair[1]).source {
                return Err(QuiverError::Discontinuous(
                    self.arrow(pair[0]).name.clone(),
                    self.arrow(pair[1]).name.clone(),
                ));
            }
        }
        Ok(Path {
            arrows: ids.to_vec(),
            source: self.arrow(first).source,
            target: self.arrow(last).target,
        })
    }

    /// Builds a path from arrow names.
    pub fn path<S: AsRef<str>>(&self, names: &[S]) -> Result<Path, QuiverError> {
        let ids = names
            .iter()
            .map(|n| self.arrow_id(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        self.path_from_ids(&ids)
    }

    /// Parses a word of single-character arrow names, e.g. `"xyy"`.
    pub fn word(&self, letters: &str) -> Result<Path, QuiverError> {
        let names: Vec<String> = letters.chars().map(|c| c.to_string()).collect();
        self.path(&names)
    }

    /// The subpath occupying arrow positions `start..end` of `p`; an empty
    /// range yields the vertex at that position.
    pub fn subpath(&self, p: &Path, start: usize, end: usize) -> Path {
        if start == end {
            let v = if start == 0 {
                p.source
            } else {
                self.arrow(p.arrows[start - 1]).target
            };
            return self.vertex_path(v);
        }
        let ids = &p.arrows[start..end];
        Path {
            arrows: ids.to_vec(),
            source: self.arrow(ids[0]).source,
            target: self.arrow(ids[ids.len() - 1]).target,
        }
    }

    /// All paths of exactly `len` arrows, in arrow-id lexicographic order.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        if len == 0 {
            return self.vertex_ids().map(|v| self.vertex_path(v)).collect();
        }
        let mut current: Vec<Path> = self.arrow_ids().map(|a| self.arrow_path(a)).collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for p in &current {
                for &a in self.arrows_from(p.target) {
                    next.push(p.extend_right(a, self.arrow(a).target));
                }
            }
            current = next;
        }
        current
    }

    pub fn display_path(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e_{}", self.vertex_name(p.source));
        }
        let single = p
            .arrows
            .iter()
            .all(|&a| self.arrow(a).name.chars().count() == 1);
        let sep = if single { "" } else { "*" };
        p.arrows
            .iter()
            .map(|&a| self.arrow(a).name.as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn arrow_names(&self, p: &Path) -> Vec<String> {
        p.arrows.iter().map(|&a| self.arrow(a).name.clone()).collect()
    }
}

/// A path in a quiver, stored as arrow ids together with its endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    arrows: Vec<ArrowId>,
    source: VertexId,
    target: VertexId,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn is_parallel(&self, other: &Path) -> bool {
        self.source == other.source && self.target == other.target
    }

    /// "self then other".
    pub fn compose(&self, other: &Path) -> Result<Path, QuiverError> {
        if self.target != other.source {
            return Err(QuiverError::CompositionMismatch(self.target.0, other.source.0));
        }
        let mut arrows = Vec::with_capacity(self.len() + other.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Ok(Path {
            arrows,
            source: self.source,
            target: other.target,
        })
    }

    /// Path-algebra product: `None` stands for zero.
    pub fn mul(&self, other: &Path) -> Option<Path> {
        self.compose(other).ok()
    }

    fn extend_right(&self, a: ArrowId, new_target: VertexId) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.push(a);
        Path {
            arrows,
            source: self.source,
            target: new_target,
        }
    }
}

/// Offsets at which `needle` occurs inside `hay`.
pub fn occurrences(needle: &[ArrowId], hay: &[ArrowId]) -> Vec<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return Vec::new();
    }
    hay.windows(needle.len())
        .enumerate()
        .filter(|(_, w)| *w == needle)
        .map(|(i, _)| i)
        .collect()
}

/// Offsets `i` with `p = r·q·s`, `ℓ(r) = i`. With `proper` set only offsets
/// leaving both `r` and `s` nonempty are returned.
pub fn subpath_offsets(q: &Path, p: &Path, proper: bool) -> Vec<usize> {
    if q.is_vertex() {
        return Vec::new();
    }
    let mut offs = occurrences(q.arrows(), p.arrows());
    if proper {
        offs.retain(|&i| i >= 1 && i + q.len() < p.len());
    }
    offs
}

pub fn is_subpath(q: &Path, p: &Path, proper: bool) -> bool {
    !subpath_offsets(q, p, proper).is_empty()
}

/// A witness `p·r = s·q` of `p` overlapping `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub r: Path,
    pub s: Path,
    pub word: Path,
}

impl Overlap {
    /// Number of arrows shared by `p` and `q`.
    pub fn amount(&self, p: &Path) -> usize {
        p.len() - self.s.len()
    }
}

/// All proper overlaps `p·r = s·q` with `r`, `s` nonempty, ordered by
/// increasing overlap-word length.
pub fn overlaps(quiver: &Quiver, p: &Path, q: &Path) -> Vec<Overlap> {
    let (lp, lq) = (p.len(), q.len());
    if lp == 0 || lq == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let lo = if lp >= lq { lp - lq + 1 } else { 1 };
    for ls in lo..lp {
        let amount = lp - ls;
        if p.arrows()[ls..] == q.arrows()[..amount] {
            let r = quiver.subpath(q, amount, lq);
            let s = quiver.subpath(p, 0, ls);
            let word = p.compose(&r).expect("overlap word composes");
            out.push(Overlap { r, s, word });
        }
    }
    out
}

/// Does some element of `rho` occur in `word` strictly inside (both flanks
/// nonempty)?
pub fn has_proper_occurrence(word: &Path, rho: &[Path]) -> bool {
    rho.iter().any(|t| is_subpath(t, word, true))
}

/// Overlap words `t'·s = w·t` (`ℓ(w) ≥ 1`, overlap amount ≥ 1) containing
/// no element of `rho` as a proper subpath. A single pair can produce more
/// than one such word.
pub fn maximal_overlaps(quiver: &Quiver, t_prime: &Path, t: &Path, rho: &[Path]) -> Vec<Path> {
    overlaps(quiver, t_prime, t)
        .into_iter()
        .map(|o| o.word)
        .filter(|w| !has_proper_occurrence(w, rho))
        .collect()
}

pub struct DisplayPath<'a>(pub &'a Quiver, pub &'a Path);

impl fmt::Display for DisplayPath<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.display_path(self.1))
    }
}
