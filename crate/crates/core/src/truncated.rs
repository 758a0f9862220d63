//! Sparse matrices over a box-truncated multi-index basis.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64 as C64;

use crate::error::{FockError, Result};
use crate::index::{box_position, enumerate_box, CoeffVector, MultiIndex};

/// Sparse complex matrix over `enumerate_box(n, N)`.
///
/// Entry `(row, col)` is the coefficient of basis element `row` in the image
/// of basis element `col`. Images that leave the box are dropped, so the
/// matrix acts exactly only on vectors far enough from the upper faces.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub name: String,
    n: usize,
    big_n: usize,
    basis: Vec<MultiIndex>,
    entries: BTreeMap<(usize, usize), C64>,
    shift_profile: BTreeSet<Vec<i64>>,
}

impl TruncatedOperator {
    /// Build from the images of basis elements.
    pub fn from_action<F>(name: &str, n: usize, big_n: usize, shifts: &[Vec<i64>], action: F) -> Self
    where
        F: Fn(&MultiIndex) -> Vec<(MultiIndex, C64)>,
    {
        let basis = enumerate_box(n, big_n);
        let mut entries = BTreeMap::new();
        for (col, alpha) in basis.iter().enumerate() {
            for (target, value) in action(alpha) {
                if value == C64::new(0.0, 0.0) {
                    continue;
                }
                if let Some(row) = box_position(&target, big_n) {
                    *entries.entry((row, col)).or_insert(C64::new(0.0, 0.0)) += value;
                }
            }
        }
        TruncatedOperator {
            name: name.to_string(),
            n,
            big_n,
            basis,
            entries,
            shift_profile: shifts.iter().cloned().collect(),
        }
    }

    pub fn identity(n: usize, big_n: usize) -> Self {
        TruncatedOperator::from_action("I", n, big_n, &[vec![0; n]], |a| vec![(a.clone(), C64::new(1.0, 0.0))])
    }

    pub fn zero(n: usize, big_n: usize) -> Self {
        TruncatedOperator::from_action("0", n, big_n, &[], |_| Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn shift_profile(&self) -> &BTreeSet<Vec<i64>> {
        &self.shift_profile
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Nonzero entries as `(row index, column index, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, C64)> {
        self.entries
            .iter()
            .map(|(&(r, c), &v)| (&self.basis[r], &self.basis[c], v))
    }

    /// Coefficient of `row` in the image of `col`.
    pub fn entry(&self, row: &MultiIndex, col: &MultiIndex) -> C64 {
        match (box_position(row, self.big_n), box_position(col, self.big_n)) {
            (Some(r), Some(c)) => self.entries.get(&(r, c)).copied().unwrap_or_default(),
            _ => C64::new(0.0, 0.0),
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Every nonzero entry's index shift lies in the declared profile.
    pub fn respects_shift_profile(&self) -> bool {
        self.entries()
            .all(|(row, col, _)| self.shift_profile.contains(&row.diff(col)))
    }

    pub fn apply(&self, f: &CoeffVector) -> CoeffVector {
        assert_eq!(f.dim(), self.n, "vector dimension mismatch");
        let dense = f.to_dense(self.big_n);
        let mut out = vec![C64::new(0.0, 0.0); self.basis.len()];
        for (&(r, c), v) in &self.entries {
            out[r] += v * dense[c];
        }
        CoeffVector::from_entries(
            self.n,
            self.basis
                .iter()
                .zip(out)
                .filter(|(_, c)| *c != C64::new(0.0, 0.0))
                .map(|(a, c)| (a.clone(), c)),
        )
    }

    fn same_box(&self, other: &TruncatedOperator) -> Result<()> {
        if self.n != other.n || self.big_n != other.big_n {
            return Err(FockError::BasisMismatch);
        }
        Ok(())
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &TruncatedOperator) -> Result<TruncatedOperator> {
        self.same_box(other)?;
        let mut by_row: BTreeMap<usize, Vec<(usize, C64)>> = BTreeMap::new();
        for (&(r, c), &v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut entries: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for (&(r, k), &v) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, w) in row {
                    *entries.entry((r, c)).or_default() += v * w;
                }
            }
        }
        entries.retain(|_, v| *v != C64::new(0.0, 0.0));
        let shift_profile = self
            .shift_profile
            .iter()
            .flat_map(|s| {
                other
                    .shift_profile
                    .iter()
                    .map(move |t| s.iter().zip(t).map(|(a, b)| a + b).collect())
            })
            .collect();
        Ok(TruncatedOperator {
            name: format!("{}{}", self.name, other.name),
            n: self.n,
            big_n: self.big_n,
            basis: self.basis.clone(),
            entries,
            shift_profile,
        })
    }

    pub fn linear_combination(&self, s: C64, other: &TruncatedOperator, t: C64) -> Result<TruncatedOperator> {
        self.same_box(other)?;
        let mut entries: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for (&k, &v) in &self.entries {
            *entries.entry(k).or_default() += s * v;
        }
        for (&k, &v) in &other.entries {
            *entries.entry(k).or_default() += t * v;
        }
        entries.retain(|_, v| *v != C64::new(0.0, 0.0));
        Ok(TruncatedOperator {
            name: format!("({}+{})", self.name, other.name),
            n: self.n,
            big_n: self.big_n,
            basis: self.basis.clone(),
            entries,
            shift_profile: self.shift_profile.union(&other.shift_profile).cloned().collect(),
        })
    }

    pub fn add(&self, other: &TruncatedOperator) -> Result<TruncatedOperator> {
        self.linear_combination(C64::new(1.0, 0.0), other, C64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &TruncatedOperator) -> Result<TruncatedOperator> {
        self.linear_combination(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: C64) -> TruncatedOperator {
        let mut out = self.clone();
        out.entries.values_mut().for_each(|v| *v *= s);
        out.entries.retain(|_, v| *v != C64::new(0.0, 0.0));
        out
    }

    pub fn conjugate_transpose(&self) -> TruncatedOperator {
        TruncatedOperator {
            name: format!("{}*", self.name),
            n: self.n,
            big_n: self.big_n,
            basis: self.basis.clone(),
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.conj())).collect(),
            shift_profile: self
                .shift_profile
                .iter()
                .map(|s| s.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    /// Largest entry modulus of `self - other` over rows and columns with
    /// every component `<= N - margin`.
    pub fn max_deviation_on_block(&self, other: &TruncatedOperator, margin: usize) -> Result<f64> {
        self.same_box(other)?;
        let top = self.big_n.saturating_sub(margin);
        let inside = |a: &MultiIndex| a.components().iter().all(|&c| c <= top);
        let keys: BTreeSet<(usize, usize)> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        Ok(keys
            .into_iter()
            .filter(|&(r, c)| inside(&self.basis[r]) && inside(&self.basis[c]))
            .map(|k| {
                (self.entries.get(&k).copied().unwrap_or_default() - other.entries.get(&k).copied().unwrap_or_default())
                    .norm()
            })
            .fold(0.0, f64::max))
    }
}

/// `PQ - QP`.
pub fn commutator(p: &TruncatedOperator, q: &TruncatedOperator) -> Result<TruncatedOperator> {
    let pq = p.compose(q)?;
    let qp = q.compose(p)?;
    Ok(pq.sub(&qp)?.named(&format!("[{},{}]", p.name, q.name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raise(n: usize, big_n: usize) -> TruncatedOperator {
        TruncatedOperator::from_action("b", n, big_n, &[vec![1]], |a| {
            vec![(a.shifted(0, 1).unwrap(), C64::new((a.get(0) as f64 + 1.0).sqrt(), 0.0))]
        })
    }

    #[test]
    fn boundary_images_are_dropped() {
        let b = raise(1, 3);
        assert_eq!(b.nnz(), 3);
        let top = CoeffVector::unit(MultiIndex::one(3));
        assert_eq!(b.apply(&top).norm(), 0.0);
    }

    #[test]
    fn compose_and_adjoint() {
        let b = raise(1, 4);
        let bs = b.conjugate_transpose();
        let n_op = bs.compose(&b).unwrap();
        for k in 0..4 {
            let v = n_op.entry(&MultiIndex::one(k), &MultiIndex::one(k));
            assert!((v.re - (k as f64 + 1.0)).abs() < 1e-14);
        }
        assert!(n_op.respects_shift_profile());
        assert!(n_op.shift_profile().contains(&vec![0]));
    }

    #[test]
    fn mismatched_boxes_rejected() {
        assert_eq!(commutator(&raise(1, 3), &raise(1, 4)), Err(FockError::BasisMismatch));
    }
}
