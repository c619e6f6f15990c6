//! Elements of the path algebra, admissible orders, tips and reduction.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeAlgError {
    #[error("the zero element has no tip")]
    ZeroElement,
    #[error("element is not uniform")]
    NotUniform,
    #[error("reducer elements need tips of positive length")]
    VertexTip,
    #[error("arrow priority list must name every arrow exactly once")]
    BadPriority,
    #[error("unknown order kind `{0}` (expected `deglex` or `degrevlex`)")]
    UnknownOrder(String),
}

/// How ties between paths of equal length are broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Compare arrow priorities from the first arrow onward.
    DegLex,
    /// Compare arrow priorities from the last arrow backward.
    DegRevLex,
}

impl OrderKind {
    pub fn name(&self) -> &'static str {
        match self {
            OrderKind::DegLex => "deglex",
            OrderKind::DegRevLex => "degrevlex",
        }
    }

    pub fn parse(s: &str) -> Result<Self, FreeAlgError> {
        match s {
            "deglex" => Ok(OrderKind::DegLex),
            "degrevlex" => Ok(OrderKind::DegRevLex),
            other => Err(FreeAlgError::UnknownOrder(other.to_string())),
        }
    }

    pub const ALL: [OrderKind; 2] = [OrderKind::DegLex, OrderKind::DegRevLex];
}

/// Sort key realizing an admissible order; comparing keys compares paths.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey {
    len: usize,
    letters: Vec<u32>,
}

/// A length-first admissible order on paths. Arrows later in the priority
/// list are larger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleOrder {
    kind: OrderKind,
    priority: Vec<ArrowId>,
    rank: Vec<u32>,
}

impl AdmissibleOrder {
    pub fn new(kind: OrderKind, priority: Vec<ArrowId>, num_arrows: usize) -> Result<Self, FreeAlgError> {
        if priority.len() != num_arrows {
            return Err(FreeAlgError::BadPriority);
        }
        let mut rank = vec![u32::MAX; num_arrows];
        for (i, a) in priority.iter().enumerate() {
            let slot = rank.get_mut(a.0 as usize).ok_or(FreeAlgError::BadPriority)?;
            if *slot != u32::MAX {
                return Err(FreeAlgError::BadPriority);
            }
            *slot = i as u32;
        }
        Ok(AdmissibleOrder { kind, priority, rank })
    }

    /// Declaration order of the quiver's arrows as priority.
    pub fn declaration(quiver: &Quiver, kind: OrderKind) -> Self {
        AdmissibleOrder::new(kind, quiver.arrow_ids().collect(), quiver.num_arrows())
            .expect("declaration order is a permutation")
    }

    pub fn deglex(quiver: &Quiver) -> Self {
        Self::declaration(quiver, OrderKind::DegLex)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[ArrowId] {
        &self.priority
    }

    pub fn key(&self, p: &Path) -> OrderKey {
        if p.is_vertex() {
            return OrderKey {
                len: 0,
                letters: vec![p.source().0],
            };
        }
        let ranks = p.arrows().iter().map(|a| self.rank[a.0 as usize]);
        let letters = match self.kind {
            OrderKind::DegLex => ranks.collect(),
            OrderKind::DegRevLex => ranks.rev().collect(),
        };
        OrderKey { len: p.len(), letters }
    }

    pub fn compare(&self, p: &Path, q: &Path) -> Ordering {
        if p.len() != q.len() {
            return p.len().cmp(&q.len());
        }
        self.key(p).cmp(&self.key(q))
    }

    /// The order-largest support path and its coefficient.
    pub fn tip<'a>(&self, x: &'a AlgebraElement) -> Result<(&'a Path, &'a Scalar), FreeAlgError> {
        x.terms
            .iter()
            .max_by(|a, b| self.compare(a.0, b.0))
            .ok_or(FreeAlgError::ZeroElement)
    }

    pub fn tip_path(&self, x: &AlgebraElement) -> Result<Path, FreeAlgError> {
        self.tip(x).map(|(p, _)| p.clone())
    }

    /// Support of `x`, order-largest first.
    pub fn sorted_terms<'a>(&self, x: &'a AlgebraElement) -> Vec<(&'a Path, &'a Scalar)> {
        let mut v: Vec<_> = x.terms.iter().collect();
        v.sort_by(|a, b| self.compare(b.0, a.0));
        v
    }
}

/// A finite linear combination of paths with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Path, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn from_path(p: Path, field: Field) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, field.one());
        AlgebraElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Path, Scalar)>>(iter: I) -> Self {
        let mut x = AlgebraElement::zero();
        for (p, c) in iter {
            x.add_term(p, &c);
        }
        x
    }

    pub fn add_term(&mut self, p: Path, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&p);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(p, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Path> {
        self.terms.keys()
    }

    pub fn coeff(&self, p: &Path) -> Option<&Scalar> {
        self.terms.get(p)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), &-c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(p, d)| (p.clone(), c * d)).collect(),
        }
    }

    /// `u · self · v`, dropping terms whose composition is zero.
    pub fn sandwich(&self, u: &Path, v: &Path) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (p, c) in &self.terms {
            if let Some(up) = u.mul(p) {
                if let Some(upv) = up.mul(v) {
                    out.add_term(upv, c);
                }
            }
        }
        out
    }

    pub fn left_mul(&self, u: &Path) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (p, c) in &self.terms {
            if let Some(up) = u.mul(p) {
                out.add_term(up, c);
            }
        }
        out
    }

    pub fn right_mul(&self, v: &Path) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (p, c) in &self.terms {
            if let Some(pv) = p.mul(v) {
                out.add_term(pv, c);
            }
        }
        out
    }

    /// Nonzero and all support paths share their source and their target.
    pub fn is_uniform(&self) -> bool {
        let mut it = self.terms.keys();
        match it.next() {
            None => false,
            Some(first) => it.all(|p| p.is_parallel(first)),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys();
        match it.next() {
            None => true,
            Some(first) => it.all(|p| p.len() == first.len()),
        }
    }

    /// Common length of the support, when homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() || !self.is_homogeneous() {
            return None;
        }
        self.terms.keys().next().map(|p| p.len())
    }

    /// Split into the uniform pieces `v·x·w`.
    pub fn uniform_components(&self) -> Vec<AlgebraElement> {
        let mut groups: BTreeMap<(VertexId, VertexId), AlgebraElement> = BTreeMap::new();
        for (p, c) in &self.terms {
            groups
                .entry((p.source(), p.target()))
                .or_default()
                .add_term(p.clone(), c);
        }
        groups.into_values().collect()
    }

    /// Divides by the tip coefficient.
    pub fn monic(&self, order: &AdmissibleOrder) -> Result<AlgebraElement, FreeAlgError> {
        let (_, c) = order.tip(self)?;
        let inv = c.inv().expect("tip coefficient is nonzero");
        Ok(self.scale(&inv))
    }

    pub fn display(&self, quiver: &Quiver, order: &AdmissibleOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (p, c)) in order.sorted_terms(self).into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&quiver.display_path(p));
        }
        out
    }
}

/// One rewrite step `coeff · left · g · right` subtracted during reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub coeff: Scalar,
    pub left: Path,
    pub generator: usize,
    pub right: Path,
}

/// Which reducible site to rewrite first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SitePolicy {
    /// Largest reducible support path; within it the largest tip, leftmost.
    #[default]
    LargestTipLeftmost,
    /// Largest reducible support path; within it the smallest tip, rightmost.
    SmallestTipRightmost,
}

/// Precomputed tip data for reducing modulo a fixed set of uniform elements.
pub struct Reducer<'a> {
    quiver: &'a Quiver,
    order: &'a AdmissibleOrder,
    gens: &'a [AlgebraElement],
    tips: Vec<Path>,
    lead_inv: Vec<Scalar>,
    by_word: HashMap<Vec<ArrowId>, usize>,
    lengths: Vec<usize>,
    policy: SitePolicy,
}

struct Site {
    generator: usize,
    offset: usize,
}

impl<'a> Reducer<'a> {
    pub fn new(
        quiver: &'a Quiver,
        order: &'a AdmissibleOrder,
        gens: &'a [AlgebraElement],
    ) -> Result<Self, FreeAlgError> {
        let mut tips = Vec::with_capacity(gens.len());
        let mut lead_inv = Vec::with_capacity(gens.len());
        let mut by_word = HashMap::new();
        let mut lengths = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if !g.is_uniform() {
                return Err(if g.is_zero() {
                    FreeAlgError::ZeroElement
                } else {
                    FreeAlgError::NotUniform
                });
            }
            let (t, c) = order.tip(g)?;
            if t.is_vertex() {
                return Err(FreeAlgError::VertexTip);
            }
            by_word.entry(t.arrows().to_vec()).or_insert(i);
            if !lengths.contains(&t.len()) {
                lengths.push(t.len());
            }
            tips.push(t.clone());
            lead_inv.push(c.inv().expect("tip coefficient is nonzero"));
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Reducer {
            quiver,
            order,
            gens,
            tips,
            lead_inv,
            by_word,
            lengths,
            policy: SitePolicy::default(),
        })
    }

    pub fn with_policy(mut self, policy: SitePolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn tips(&self) -> &[Path] {
        &self.tips
    }

    pub fn is_reducible(&self, w: &Path) -> bool {
        self.find_site(w).is_some()
    }

    fn find_site(&self, w: &Path) -> Option<Site> {
        let word = w.arrows();
        let mut best: Option<(usize, usize)> = None;
        let lengths: Box<dyn Iterator<Item = &usize>> = match self.policy {
            SitePolicy::LargestTipLeftmost => Box::new(self.lengths.iter()),
            SitePolicy::SmallestTipRightmost => Box::new(self.lengths.iter().rev()),
        };
        for &len in lengths {
            if len > word.len() {
                continue;
            }
            for off in 0..=word.len() - len {
                if let Some(&g) = self.by_word.get(&word[off..off + len]) {
                    best = match best {
                        None => Some((g, off)),
                        Some((bg, boff)) => {
                            let c = self.order.compare(&self.tips[g], &self.tips[bg]);
                            let better = match self.policy {
                                SitePolicy::LargestTipLeftmost => c == Ordering::Greater,
                                SitePolicy::SmallestTipRightmost => {
                                    c == Ordering::Less || (c == Ordering::Equal && off > boff)
                                }
                            };
                            if better {
                                Some((g, off))
                            } else {
                                Some((bg, boff))
                            }
                        }
                    };
                }
            }
            if best.is_some() {
                break;
            }
        }
        best.map(|(generator, offset)| Site { generator, offset })
    }

    pub fn reduce(&self, x: &AlgebraElement) -> AlgebraElement {
        self.run(x, None)
    }

    /// Normal form together with the rewrites applied, so that
    /// `x - nf = Σ coeff · left · g · right`.
    pub fn reduce_traced(&self, x: &AlgebraElement) -> (AlgebraElement, Vec<Rewrite>) {
        let mut trace = Vec::new();
        let nf = self.run(x, Some(&mut trace));
        (nf, trace)
    }

    fn run(&self, x: &AlgebraElement, mut trace: Option<&mut Vec<Rewrite>>) -> AlgebraElement {
        let mut work: BTreeMap<OrderKey, (Path, Scalar)> = BTreeMap::new();
        for (p, c) in x.terms() {
            work.insert(self.order.key(p), (p.clone(), c.clone()));
        }
        let mut done = AlgebraElement::zero();
        while let Some((_, (w, c))) = work.pop_last() {
            let Some(site) = self.find_site(&w) else {
                done.add_term(w, &c);
                continue;
            };
            let g = &self.gens[site.generator];
            let tlen = self.tips[site.generator].len();
            let u = self.quiver.subpath(&w, 0, site.offset);
            let v = self.quiver.subpath(&w, site.offset + tlen, w.len());
            let factor = &c * &self.lead_inv[site.generator];
            let tip = &self.tips[site.generator];
            for (p, d) in g.terms() {
                if p == tip {
                    continue;
                }
                let upv = u
                    .mul(p)
                    .and_then(|up| up.mul(&v))
                    .expect("uniform generator terms share endpoints with its tip");
                let delta = -&(&factor * d);
                let key = self.order.key(&upv);
                match work.get_mut(&key) {
                    Some((_, e)) => {
                        let sum = &*e + &delta;
                        if sum.is_zero() {
                            work.remove(&key);
                        } else {
                            *e = sum;
                        }
                    }
                    None => {
                        work.insert(key, (upv, delta));
                    }
                }
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(Rewrite {
                    coeff: factor,
                    left: u,
                    generator: site.generator,
                    right: v,
                });
            }
        }
        done
    }
}

/// Convenience wrapper over [`Reducer`].
pub fn reduce(
    quiver: &Quiver,
    x: &AlgebraElement,
    gens: &[AlgebraElement],
    order: &AdmissibleOrder,
) -> Result<AlgebraElement, FreeAlgError> {
    Ok(Reducer::new(quiver, order, gens)?.reduce(x))
}
