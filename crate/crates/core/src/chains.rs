//! Admissible paths `AP(n)` for a tip anti-chain: the index sets of the
//! Gröbner-basis resolution of the vertex module.
//!
//! Chains grow on the left. A level-`n` word factors uniquely as `r · a`
//! with `a` a level-`(n-1)` word; if `a = s · b` is the parent's own
//! factorization, then `r · s` starts with a relation `a2` that reaches into
//! `s` (`ℓ(r) < ℓ(a2)`), and `a2` is the only relation occurring in `r · s`.

use std::collections::HashMap;

use crate::betti::{BettiTable, Method};
use crate::groebner::TipSet;
use crate::quiver::{self, Path, Quiver};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub word: Path,
    pub level: usize,
    /// Index of the parent chain in the previous level.
    pub parent: Option<usize>,
    /// `r` in `word = r · parent.word`; the vertex itself at level 0.
    pub prefix: Path,
    /// Index in `rho` of the relation starting this word (levels >= 2).
    pub relation: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTable {
    rho: TipSet,
    levels: Vec<Vec<Chain>>,
    word_cap: Option<usize>,
    truncated: Vec<bool>,
    duplicates: usize,
}

impl ChainTable {
    pub fn rho(&self) -> &TipSet {
        &self.rho
    }

    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Vec<Chain>] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &[Chain] {
        self.levels.get(n).map(|l| l.as_slice()).unwrap_or(&[])
    }

    pub fn words(&self, n: usize) -> Vec<Path> {
        self.level(n).iter().map(|c| c.word.clone()).collect()
    }

    pub fn word_cap(&self) -> Option<usize> {
        self.word_cap
    }

    /// Chains longer than the word cap may be missing from this level.
    pub fn is_truncated(&self, n: usize) -> bool {
        self.truncated.get(n).copied().unwrap_or(false)
    }

    /// Words reached twice with different parents (zero when factorizations
    /// are unique).
    pub fn duplicate_count(&self) -> usize {
        self.duplicates
    }

    pub(crate) fn with_duplicate_count(mut self, n: usize) -> Self {
        self.duplicates = n;
        self
    }

    pub fn parent_of(&self, c: &Chain) -> Option<&Chain> {
        c.parent.map(|p| &self.levels[c.level - 1][p])
    }

    /// Assemble a table from already-built levels, re-checking the parent
    /// links.
    pub fn from_levels(
        rho: TipSet,
        levels: Vec<Vec<Chain>>,
        word_cap: Option<usize>,
        truncated: Vec<bool>,
    ) -> Option<Self> {
        if levels.is_empty() || truncated.len() != levels.len() {
            return None;
        }
        for (n, level) in levels.iter().enumerate() {
            for c in level {
                if c.level != n {
                    return None;
                }
                match (n, c.parent) {
                    (0, None) => {}
                    (0, Some(_)) => return None,
                    (_, Some(p)) => {
                        let parent = levels[n - 1].get(p)?;
                        if c.prefix.compose(&parent.word).ok()? != c.word {
                            return None;
                        }
                    }
                    (_, None) => return None,
                }
            }
        }
        Some(ChainTable {
            rho,
            levels,
            word_cap,
            truncated,
            duplicates: 0,
        })
    }
}

fn sort_level(level: &mut [Chain]) {
    level.sort_by(|a, b| {
        a.word
            .len()
            .cmp(&b.word.len())
            .then_with(|| a.word.arrows().cmp(b.word.arrows()))
            .then_with(|| a.word.source().cmp(&b.word.source()))
    });
}

/// `AP(0..=n_max)` for `rho`; words longer than `word_cap` are dropped and
/// the affected levels flagged as truncated.
pub fn build_chains(quiver: &Quiver, rho: &TipSet, n_max: usize, word_cap: Option<usize>) -> ChainTable {
    let fits = |len: usize| word_cap.map_or(true, |cap| len <= cap);
    let mut levels: Vec<Vec<Chain>> = Vec::new();
    let mut truncated = Vec::new();
    let mut duplicates = 0;

    let mut l0: Vec<Chain> = quiver
        .vertex_ids()
        .map(|v| Chain {
            word: quiver.vertex_path(v),
            level: 0,
            parent: None,
            prefix: quiver.vertex_path(v),
            relation: None,
        })
        .collect();
    sort_level(&mut l0);
    levels.push(l0);
    truncated.push(false);

    if n_max >= 1 {
        let vertex_pos: HashMap<Path, usize> = levels[0]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.word.clone(), i))
            .collect();
        let mut l1: Vec<Chain> = quiver
            .arrow_ids()
            .filter(|_| fits(1))
            .map(|a| {
                let word = quiver.arrow_path(a);
                let end = quiver.vertex_path(word.target());
                Chain {
                    parent: Some(vertex_pos[&end]),
                    prefix: word.clone(),
                    word,
                    level: 1,
                    relation: None,
                }
            })
            .collect();
        sort_level(&mut l1);
        truncated.push(!fits(1) && quiver.num_arrows() > 0);
        levels.push(l1);
    }

    if n_max >= 2 {
        let arrow_pos: HashMap<Path, usize> = levels[1]
            .iter()
            .enumerate()
            .map(|(i, c)| (c.word.clone(), i))
            .collect();
        let mut dropped = truncated[1];
        let mut l2 = Vec::new();
        for (k, t) in rho.paths().iter().enumerate() {
            if !fits(t.len()) {
                dropped = true;
                continue;
            }
            let last = quiver.subpath(t, t.len() - 1, t.len());
            l2.push(Chain {
                word: t.clone(),
                level: 2,
                parent: Some(arrow_pos[&last]),
                prefix: quiver.subpath(t, 0, t.len() - 1),
                relation: Some(k),
            });
        }
        sort_level(&mut l2);
        levels.push(l2);
        truncated.push(dropped);
    }

    for n in 3..=n_max {
        let prev = &levels[n - 1];
        let mut seen: HashMap<Path, usize> = HashMap::new();
        let mut next: Vec<Chain> = Vec::new();
        let mut dropped = truncated[n - 1];
        for (pi, parent) in prev.iter().enumerate() {
            let s = &parent.prefix;
            for (k, a2) in rho.paths().iter().enumerate() {
                for j in 1..a2.len() {
                    let reach = a2.len() - j;
                    if reach > s.len() || a2.arrows()[j..] != s.arrows()[..reach] {
                        continue;
                    }
                    let r = quiver.subpath(a2, 0, j);
                    let rs = r.compose(s).expect("relation continues into s");
                    if rho.contains_any(&rs.arrows()[1..]) {
                        continue;
                    }
                    let word = r.compose(&parent.word).expect("r ends where the parent starts");
                    if !fits(word.len()) {
                        dropped = true;
                        continue;
                    }
                    if seen.contains_key(&word) {
                        duplicates += 1;
                        continue;
                    }
                    seen.insert(word.clone(), next.len());
                    next.push(Chain {
                        word,
                        level: n,
                        parent: Some(pi),
                        prefix: r,
                        relation: Some(k),
                    });
                }
            }
        }
        sort_level(&mut next);
        levels.push(next);
        truncated.push(dropped);
    }

    ChainTable {
        rho: rho.clone(),
        levels,
        word_cap,
        truncated,
        duplicates,
    }
}

/// Union of the maximal overlaps over all ordered pairs of `rho`, sorted
/// and deduplicated.
pub fn maximal_overlap_set(quiver: &Quiver, rho: &TipSet) -> Vec<Path> {
    let mut out = Vec::new();
    for tp in rho.paths() {
        for t in rho.paths() {
            out.extend(quiver::maximal_overlaps(quiver, tp, t, rho.paths()));
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.arrows().cmp(b.arrows())));
    out.dedup();
    out
}

/// `(p_{n-1}, ..., p_1)`: the relation starting each word along the parent
/// chain, from `c` down to level 2.
pub fn admissible_sequence(table: &ChainTable, c: &Chain) -> Vec<Path> {
    let rho = table.rho().paths();
    let mut out = Vec::new();
    let mut cur = Some(c);
    while let Some(ch) = cur {
        if ch.level < 2 {
            break;
        }
        out.push(rho[ch.relation.expect("levels >= 2 carry a relation")].clone());
        cur = table.parent_of(ch);
    }
    out
}

/// Exhaustive search for all `(r, a)` with `word = r · a`, `ℓ(r) >= 1` and
/// `a` a chain of level `n - 1`; returns the indices of such `a`.
pub fn factorizations(table: &ChainTable, n: usize, word: &Path) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    table
        .level(n - 1)
        .iter()
        .enumerate()
        .filter(|(_, a)| {
            a.word.len() < word.len()
                && word.target() == a.word.target()
                && word.arrows().ends_with(a.word.arrows())
        })
        .map(|(i, _)| i)
        .collect()
}

/// Summand descriptors `(source vertex, ℓ(word))` for each level.
pub fn degree_table(table: &ChainTable) -> BettiTable {
    let mut bt = BettiTable::new(Method::Chains, table.word_cap(), table.levels().len());
    for (n, level) in table.levels().iter().enumerate() {
        for c in level {
            bt.rows[n].add(c.word.source(), c.word.len(), 1);
        }
        bt.rows[n].truncated = table.is_truncated(n);
    }
    bt
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loops(names: &[&str]) -> Quiver {
        Quiver::one_vertex_loops(names)
    }

    fn rho(q: &Quiver, words: &[&str]) -> TipSet {
        TipSet::new(q, words.iter().map(|w| q.word(w).unwrap()).collect()).unwrap()
    }

    fn shown(q: &Quiver, t: &ChainTable, n: usize) -> Vec<String> {
        t.words(n).iter().map(|p| q.display_path(p)).collect()
    }

    #[test]
    fn single_cube_gives_delta_lengths() {
        let q = loops(&["x"]);
        let r = rho(&q, &["xxx"]);
        let t = build_chains(&q, &r, 6, None);
        let lens: Vec<Vec<usize>> = (0..=6)
            .map(|n| t.words(n).iter().map(|p| p.len()).collect())
            .collect();
        assert_eq!(lens, vec![vec![0], vec![1], vec![3], vec![4], vec![6], vec![7], vec![9]]);
        assert_eq!(t.duplicate_count(), 0);
    }

    #[test]
    fn mixed_degree_fixture() {
        let q = loops(&["x", "y"]);
        let r = rho(&q, &["xy", "yyy"]);
        let t = build_chains(&q, &r, 4, None);
        assert_eq!(shown(&q, &t, 3), vec!["xyyy", "yyyy"]);
        assert_eq!(shown(&q, &t, 4), vec!["xyyyy", "yyyyyy"]);
        assert_eq!(maximal_overlap_set(&q, &r), t.words(3));
        let y6 = &t.level(4)[1];
        let seq: Vec<_> = admissible_sequence(&t, y6).iter().map(|p| q.display_path(p)).collect();
        assert_eq!(seq, vec!["yyy", "yyy", "yyy"]);
    }

    #[test]
    fn commutative_tip_stops_at_two() {
        let q = loops(&["x", "y"]);
        let r = rho(&q, &["yx"]);
        let t = build_chains(&q, &r, 5, None);
        assert!(t.level(3).is_empty());
        assert!(t.level(5).is_empty());
    }

    #[test]
    fn admissible_sequences() {
        let q = loops(&["x"]);
        let r = rho(&q, &["xxx"]);
        let t = build_chains(&q, &r, 3, None);
        let seq = admissible_sequence(&t, &t.level(3)[0]);
        assert_eq!(seq, vec![q.word("xxx").unwrap(); 2]);
        assert_eq!(admissible_sequence(&t, &t.level(2)[0]), vec![q.word("xxx").unwrap()]);
    }

    #[test]
    fn degree_table_rows() {
        let q = loops(&["x"]);
        let r = rho(&q, &["xxx"]);
        let bt = degree_table(&build_chains(&q, &r, 3, None));
        let v = q.vertex_id("v").unwrap();
        assert_eq!(bt.rows[0].entries.get(&(v, 0)), Some(&1));
        assert_eq!(bt.rows[1].entries.get(&(v, 1)), Some(&1));
        assert_eq!(bt.rows[3].entries.get(&(v, 4)), Some(&1));
    }

    #[test]
    fn word_cap_flags_truncation() {
        let q = loops(&["x"]);
        let r = rho(&q, &["xxx"]);
        let t = build_chains(&q, &r, 6, Some(6));
        assert!(!t.is_truncated(4));
        assert!(t.is_truncated(5));
        assert!(t.is_truncated(6));
        assert!(t.level(5).is_empty());
    }

    #[test]
    fn parents_are_unique() {
        let q = loops(&["a", "b"]);
        let r = rho(&q, &["aabaa", "bb"]);
        let t = build_chains(&q, &r, 6, None);
        for n in 2..=6 {
            for c in t.level(n) {
                assert_eq!(factorizations(&t, n, &c.word), vec![c.parent.unwrap()]);
            }
        }
    }
}
