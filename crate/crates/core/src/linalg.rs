//! Sparse exact linear algebra: incremental row echelon forms and kernels.
//!
//! Vectors are maps from column index to nonzero scalar. The leading entry of
//! a vector is its largest column index.

use std::collections::{BTreeMap, HashMap};

use crate::field::Scalar;

pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn lead(v: &SparseVec) -> Option<usize> {
    v.keys().next_back().copied()
}

/// `v -= c * row`.
pub fn sub_scaled(v: &mut SparseVec, c: &Scalar, row: &SparseVec) {
    for (&j, x) in row {
        let d = c * x;
        match v.get_mut(&j) {
            Some(cur) => {
                let nv = &*cur - &d;
                if nv.is_zero() {
                    v.remove(&j);
                } else {
                    *cur = nv;
                }
            }
            None => {
                v.insert(j, -&d);
            }
        }
    }
}

/// Rows in echelon form with distinct leading columns, each normalized to a
/// leading coefficient of one.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    by_lead: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates leading entries until the lead is not a pivot column.
    pub fn reduce(&self, v: &mut SparseVec) {
        while let Some(c) = lead(v) {
            let Some(&r) = self.by_lead.get(&c) else { return };
            let f = v[&c].clone();
            sub_scaled(v, &f, &self.rows[r]);
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        let Some(c) = lead(&w) else { return false };
        let inv = w[&c].inv().expect("leading entry is nonzero");
        for x in w.values_mut() {
            *x = &*x * &inv;
        }
        self.by_lead.insert(c, self.rows.len());
        self.rows.push(w);
        true
    }
}

/// Basis of `{ y : Σ y_j rows[j] = 0 }`, each as a vector over row indices.
pub fn kernel(rows: &[SparseVec], one: &Scalar) -> Vec<SparseVec> {
    let mut pivots: HashMap<usize, (SparseVec, SparseVec)> = HashMap::new();
    let mut out = Vec::new();
    for (j, row) in rows.iter().enumerate() {
        let mut img = row.clone();
        let mut combo = SparseVec::new();
        combo.insert(j, one.clone());
        loop {
            match lead(&img) {
                None => {
                    out.push(combo);
                    break;
                }
                Some(c) => match pivots.get(&c) {
                    Some((pimg, pcombo)) => {
                        let f = &img[&c] * &pimg[&c].inv().expect("pivot is nonzero");
                        sub_scaled(&mut img, &f, pimg);
                        sub_scaled(&mut combo, &f, pcombo);
                    }
                    None => {
                        pivots.insert(c, (img, combo));
                        break;
                    }
                },
            }
        }
    }
    out
}
