//! Graded Betti tables: per homological degree, the multiset of
//! `(vertex, internal degree)` of the generators of a projective resolution.

use std::collections::BTreeMap;

use crate::quiver::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Chains,
    Oracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Chains => "chains",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiRow {
    pub entries: BTreeMap<(VertexId, usize), usize>,
    /// Entries above the table's degree cap may be missing.
    pub truncated: bool,
}

impl BettiRow {
    pub fn add(&mut self, v: VertexId, degree: usize, mult: usize) {
        if mult > 0 {
            *self.entries.entry((v, degree)).or_insert(0) += mult;
        }
    }

    /// Internal degrees with multiplicity, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (&(_, d), &m) in &self.entries {
            out.extend(std::iter::repeat(d).take(m));
        }
        out.sort_unstable();
        out
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.entries.keys().map(|&(_, d)| d).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.keys().map(|&(_, d)| d).max()
    }

    fn restricted(&self, max_degree: usize) -> BTreeMap<(VertexId, usize), usize> {
        self.entries
            .iter()
            .filter(|((_, d), _)| *d <= max_degree)
            .map(|(k, m)| (*k, *m))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub method: Method,
    /// Internal degrees above this cap were not computed.
    pub max_degree: Option<usize>,
    pub rows: Vec<BettiRow>,
}

impl BettiTable {
    pub fn new(method: Method, max_degree: Option<usize>, num_rows: usize) -> Self {
        BettiTable {
            method,
            max_degree,
            rows: vec![BettiRow::default(); num_rows],
        }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn row(&self, n: usize) -> Option<&BettiRow> {
        self.rows.get(n)
    }

    /// Row-by-row equality of entries with internal degree `<= max_degree`
    /// for `n <= max_n`.
    pub fn agrees_below(&self, other: &BettiTable, max_n: usize, max_degree: usize) -> bool {
        self.first_disagreement(other, max_n, max_degree).is_none()
    }

    pub fn first_disagreement(&self, other: &BettiTable, max_n: usize, max_degree: usize) -> Option<usize> {
        let empty = BettiRow::default();
        (0..=max_n).find(|&n| {
            let a = self.row(n).unwrap_or(&empty).restricted(max_degree);
            let b = other.row(n).unwrap_or(&empty).restricted(max_degree);
            a != b
        })
    }

    /// Every entry of `self` (degree `<= max_degree`, `n <= max_n`) appears in
    /// `other` with at least the same multiplicity.
    pub fn is_sub_multiset_of(&self, other: &BettiTable, max_n: usize, max_degree: usize) -> bool {
        let empty = BettiRow::default();
        (0..=max_n).all(|n| {
            let a = self.row(n).unwrap_or(&empty).restricted(max_degree);
            let b = other.row(n).unwrap_or(&empty).restricted(max_degree);
            a.iter().all(|(k, m)| b.get(k).copied().unwrap_or(0) >= *m)
        })
    }
}
