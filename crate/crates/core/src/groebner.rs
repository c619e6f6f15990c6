//! Degree-truncated Buchberger completion for homogeneous ideals of path
//! algebras, tip sets, and degree strata of a reduced basis.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::freealg::{AdmissibleOrder, AlgebraElement, FreeAlgError, Reducer};
use crate::quiver::{self, ArrowId, Path, Quiver};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("generator {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("generator {0} has a component of degree {1}; relations must lie in J^2")]
    DegreeTooLow(usize, usize),
    #[error("tip set is not an anti-chain: {0} is a subpath of {1}")]
    NotAntichain(String, String),
    #[error("basis element {0} is not monic")]
    NotMonic(usize),
    #[error("tip of length {0} < 2")]
    ShortTip(usize),
    #[error(transparent)]
    Algebra(#[from] FreeAlgError),
}

/// Truncation of the reduced Gröbner basis at `valid_to_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    elements: Vec<AlgebraElement>,
    order: AdmissibleOrder,
    valid_to_degree: usize,
    complete: bool,
}

impl GroebnerBasis {
    /// Assembles a basis from parts, checking reducedness.
    pub fn from_parts(
        quiver: &Quiver,
        mut elements: Vec<AlgebraElement>,
        order: AdmissibleOrder,
        valid_to_degree: usize,
        complete: bool,
    ) -> Result<Self, GroebnerError> {
        for (i, g) in elements.iter().enumerate() {
            if g.degree().is_none() {
                return Err(GroebnerError::Inhomogeneous(i));
            }
        }
        sort_by_tip(&mut elements, &order);
        let gb = GroebnerBasis {
            elements,
            order,
            valid_to_degree,
            complete,
        };
        gb.check_reduced(quiver)?;
        Ok(gb)
    }

    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }

    pub fn order(&self) -> &AdmissibleOrder {
        &self.order
    }

    pub fn valid_to_degree(&self) -> usize {
        self.valid_to_degree
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_monomial(&self) -> bool {
        self.elements.iter().all(|g| g.is_monomial())
    }

    pub fn tips(&self) -> Vec<Path> {
        self.elements
            .iter()
            .map(|g| self.order.tip_path(g).expect("basis elements are nonzero"))
            .collect()
    }

    pub fn reducer<'a>(&'a self, quiver: &'a Quiver) -> Reducer<'a> {
        Reducer::new(quiver, &self.order, &self.elements).expect("basis elements are uniform")
    }

    /// Tips form an anti-chain and no support path contains another tip;
    /// elements are monic, uniform, and of degree at most the bound.
    pub fn check_reduced(&self, quiver: &Quiver) -> Result<(), GroebnerError> {
        let tips = self.tips();
        TipSet::new(quiver, tips.clone())?;
        for (i, g) in self.elements.iter().enumerate() {
            if !g.is_uniform() {
                return Err(FreeAlgError::NotUniform.into());
            }
            if !self.order.tip(g)?.1.is_one() {
                return Err(GroebnerError::NotMonic(i));
            }
            for p in g.support() {
                for (j, t) in tips.iter().enumerate() {
                    if j != i && quiver::is_subpath(t, p, false) {
                        return Err(GroebnerError::NotAntichain(
                            quiver.display_path(t),
                            quiver.display_path(p),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

fn sort_by_tip(elements: &mut [AlgebraElement], order: &AdmissibleOrder) {
    elements.sort_by_cached_key(|g| order.key(&order.tip_path(g).expect("nonzero element")));
}

/// An anti-chain of paths of length at least two, indexed for substring
/// matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TipSet {
    paths: Vec<Path>,
    index: HashMap<Vec<ArrowId>, usize>,
    lengths: Vec<usize>,
}

impl TipSet {
    pub fn new(quiver: &Quiver, mut paths: Vec<Path>) -> Result<Self, GroebnerError> {
        paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        paths.dedup();
        for p in &paths {
            if p.len() < 2 {
                return Err(GroebnerError::ShortTip(p.len()));
            }
        }
        for (i, p) in paths.iter().enumerate() {
            for q in &paths[i + 1..] {
                if quiver::is_subpath(p, q, false) {
                    return Err(GroebnerError::NotAntichain(
                        quiver.display_path(p),
                        quiver.display_path(q),
                    ));
                }
            }
        }
        Ok(Self::build(paths))
    }

    /// Minimal paths among `paths`: drops any path containing another.
    pub fn minimalize(quiver: &Quiver, paths: Vec<Path>) -> Result<Self, GroebnerError> {
        let mut sorted = paths;
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        sorted.dedup();
        let mut kept: Vec<Path> = Vec::new();
        for p in sorted {
            if !kept.iter().any(|k| quiver::is_subpath(k, &p, false)) {
                kept.push(p);
            }
        }
        TipSet::new(quiver, kept)
    }

    fn build(paths: Vec<Path>) -> Self {
        let mut lengths: Vec<usize> = paths.iter().map(|p| p.len()).collect();
        lengths.sort_unstable();
        lengths.dedup();
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.arrows().to_vec(), i))
            .collect();
        TipSet {
            paths,
            index,
            lengths,
        }
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn max_len(&self) -> usize {
        self.lengths.last().copied().unwrap_or(0)
    }

    /// Index of the element equal to `word`, if any.
    pub fn lookup(&self, word: &[ArrowId]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// `(offset, element index)` for each occurrence of an element in `word`.
    pub fn occurrences_in(&self, word: &[ArrowId]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &len in &self.lengths {
            if len > word.len() {
                break;
            }
            for off in 0..=word.len() - len {
                if let Some(i) = self.lookup(&word[off..off + len]) {
                    out.push((off, i));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn contains_any(&self, word: &[ArrowId]) -> bool {
        self.lengths.iter().any(|&len| {
            len <= word.len() && (0..=word.len() - len).any(|off| self.index.contains_key(&word[off..off + len]))
        })
    }

    /// Some element occurs with both flanks nonempty.
    pub fn has_proper_occurrence(&self, word: &[ArrowId]) -> bool {
        self.occurrences_in(word)
            .iter()
            .any(|&(off, i)| off >= 1 && off + self.paths[i].len() < word.len())
    }

    /// The element occurring as a prefix of `word`, if any (unique for an
    /// anti-chain).
    pub fn prefix_of(&self, word: &[ArrowId]) -> Option<usize> {
        self.lengths
            .iter()
            .filter(|&&l| l <= word.len())
            .find_map(|&l| self.lookup(&word[..l]))
    }

    /// Elements of a given length.
    pub fn stratum(&self, len: usize) -> Vec<Path> {
        self.paths.iter().filter(|p| p.len() == len).cloned().collect()
    }
}

/// The tips of a reduced basis.
pub fn tip_ideal(quiver: &Quiver, gb: &GroebnerBasis) -> TipSet {
    TipSet::new(quiver, gb.tips()).expect("reduced basis has anti-chain tips")
}

/// Partition of the basis by homogeneous degree.
pub fn stratify_by_degree(gb: &GroebnerBasis) -> BTreeMap<usize, Vec<AlgebraElement>> {
    let mut out: BTreeMap<usize, Vec<AlgebraElement>> = BTreeMap::new();
    for g in gb.elements() {
        out.entry(g.degree().expect("homogeneous")).or_default().push(g.clone());
    }
    out
}

/// S-elements `f·r - s·g` for every overlap `tip(f)·r = s·tip(g)`.
fn s_elements(
    quiver: &Quiver,
    order: &AdmissibleOrder,
    f: &AlgebraElement,
    g: &AlgebraElement,
) -> Vec<(usize, AlgebraElement)> {
    let tf = order.tip_path(f).expect("nonzero");
    let tg = order.tip_path(g).expect("nonzero");
    quiver::overlaps(quiver, &tf, &tg)
        .into_iter()
        .map(|o| {
            let s = f.right_mul(&o.r).sub(&g.left_mul(&o.s));
            (o.word.len(), s)
        })
        .collect()
}

/// Degree-by-degree Buchberger completion, exact in all degrees up to
/// `max_degree`.
pub fn buchberger(
    quiver: &Quiver,
    generators: &[AlgebraElement],
    order: &AdmissibleOrder,
    max_degree: usize,
) -> Result<GroebnerBasis, GroebnerError> {
    let mut pending: BTreeMap<usize, Vec<AlgebraElement>> = BTreeMap::new();
    let mut beyond = false;
    for (i, g) in generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let deg = g.degree().ok_or(GroebnerError::Inhomogeneous(i))?;
        for comp in g.uniform_components() {
            if deg < 2 {
                return Err(GroebnerError::DegreeTooLow(i, deg));
            }
            if deg > max_degree {
                beyond = true;
            } else {
                pending.entry(deg).or_default().push(comp);
            }
        }
    }

    let mut basis: Vec<AlgebraElement> = Vec::new();
    while let Some((deg, candidates)) = pending.pop_first() {
        let reducer = Reducer::new(quiver, order, &basis)?;
        let remainders: Vec<AlgebraElement> = candidates
            .par_iter()
            .map(|c| reducer.reduce(c))
            .collect();

        let mut level: Vec<AlgebraElement> = Vec::new();
        for r in remainders {
            if r.is_zero() {
                continue;
            }
            let r = Reducer::new(quiver, order, &level)?.reduce(&r);
            if !r.is_zero() {
                level.push(r.monic(order)?);
            }
        }
        // Inter-reduce the tails within this degree.
        for i in 0..level.len() {
            let (tip, one) = order.tip(&level[i]).map(|(p, c)| (p.clone(), c.clone()))?;
            let others: Vec<AlgebraElement> = level
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, e)| e.clone())
                .collect();
            let mut tail = level[i].clone();
            tail.add_term(tip.clone(), &-&one);
            let tail = Reducer::new(quiver, order, &others)?.reduce(&tail);
            let mut e = tail;
            e.add_term(tip, &one);
            level[i] = e;
        }

        let old_len = basis.len();
        basis.extend(level);
        let mut new_pairs = Vec::new();
        for i in old_len..basis.len() {
            for j in 0..basis.len() {
                new_pairs.extend(s_elements(quiver, order, &basis[i], &basis[j]));
                if j < old_len {
                    new_pairs.extend(s_elements(quiver, order, &basis[j], &basis[i]));
                }
            }
        }
        for (d, s) in new_pairs {
            debug_assert!(d > deg);
            if s.is_zero() {
                continue;
            }
            if d > max_degree {
                beyond = true;
            } else {
                pending.entry(d).or_default().push(s);
            }
        }
    }

    sort_by_tip(&mut basis, order);
    Ok(GroebnerBasis {
        elements: basis,
        order: order.clone(),
        valid_to_degree: max_degree,
        complete: !beyond,
    })
}
