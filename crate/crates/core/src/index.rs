//! Multi-indices, box truncation and truncated coefficient vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use rand::Rng;
use smallvec::{smallvec, SmallVec};

use crate::error::{FockError, Result};

/// Tuple of non-negative integers indexing a monomial basis element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(SmallVec<[usize; 2]>);

impl MultiIndex {
    pub fn new(components: Vec<usize>) -> Self {
        MultiIndex(SmallVec::from_vec(components))
    }

    pub fn one(k: usize) -> Self {
        MultiIndex(smallvec![k])
    }

    pub fn two(a1: usize, a2: usize) -> Self {
        MultiIndex(smallvec![a1, a2])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, j: usize) -> usize {
        self.0[j]
    }

    /// Shift coordinate `j` by `delta`; `None` if the result would be negative.
    pub fn shifted(&self, j: usize, delta: i64) -> Option<MultiIndex> {
        let v = self.0[j] as i64 + delta;
        if v < 0 {
            return None;
        }
        let mut c = self.0.clone();
        c[j] = v as usize;
        Some(MultiIndex(c))
    }

    /// Componentwise difference `self - other`.
    pub fn diff(&self, other: &MultiIndex) -> Vec<i64> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a as i64 - b as i64)
            .collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All indices with every component `<= big_n`, in lexicographic order.
pub fn enumerate_box(n: usize, big_n: usize) -> Vec<MultiIndex> {
    assert!(n == 1 || n == 2, "only n = 1, 2 are supported");
    match n {
        1 => (0..=big_n).map(MultiIndex::one).collect(),
        _ => (0..=big_n)
            .flat_map(|a| (0..=big_n).map(move |b| MultiIndex::two(a, b)))
            .collect(),
    }
}

/// Position of `alpha` in `enumerate_box(n, big_n)`, if it lies in the box.
pub fn box_position(alpha: &MultiIndex, big_n: usize) -> Option<usize> {
    let side = big_n + 1;
    let mut pos = 0;
    for &a in alpha.components() {
        if a > big_n {
            return None;
        }
        pos = pos * side + a;
    }
    Some(pos)
}

/// Distance of a coefficient vector's support from the truncation boundary.
///
/// A vector is interior with margin `m` when every nonzero index satisfies
/// `m <= alpha_j <= N - m`. Truncated shift operators never leave the box
/// through the lower face, so exactness of `m` applications of a shift-1
/// operator only needs the upper half of that condition; see
/// [`InteriorMargin::admits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteriorMargin {
    pub margin: usize,
}

impl InteriorMargin {
    pub fn new(margin: usize) -> Self {
        InteriorMargin { margin }
    }

    /// Two-sided interior test.
    pub fn is_interior(&self, f: &CoeffVector, big_n: usize) -> bool {
        f.support().all(|a| {
            a.components()
                .iter()
                .all(|&c| c >= self.margin && c + self.margin <= big_n)
        })
    }

    /// Upper-face test: `alpha_j <= N - m` for all support indices.
    pub fn admits(&self, f: &CoeffVector, big_n: usize) -> bool {
        f.support()
            .all(|a| a.components().iter().all(|&c| c + self.margin <= big_n))
    }

    pub fn check(&self, f: &CoeffVector, big_n: usize) -> Result<()> {
        if let Some(bad) = f
            .support()
            .find(|a| a.components().iter().any(|&c| c + self.margin > big_n))
        {
            return Err(FockError::MarginViolation {
                margin: self.margin,
                index: bad.components().to_vec(),
                big_n,
            });
        }
        Ok(())
    }
}

/// Finite coefficient vector `f = sum f_alpha psi_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    n: usize,
    entries: BTreeMap<MultiIndex, C64>,
}

impl CoeffVector {
    pub fn zeros(n: usize) -> Self {
        CoeffVector {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(alpha: MultiIndex) -> Self {
        let mut f = CoeffVector::zeros(alpha.dim());
        f.set(alpha, C64::new(1.0, 0.0));
        f
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (MultiIndex, C64)>) -> Self {
        let mut f = CoeffVector::zeros(n);
        for (a, c) in entries {
            f.add_to(a, c);
        }
        f
    }

    /// Dense vector over `enumerate_box(n, big_n)`. Entries outside the box are dropped.
    pub fn from_dense(n: usize, big_n: usize, values: &[C64]) -> Self {
        CoeffVector::from_entries(
            n,
            enumerate_box(n, big_n)
                .into_iter()
                .zip(values.iter().copied())
                .filter(|(_, c)| *c != C64::new(0.0, 0.0)),
        )
    }

    pub fn to_dense(&self, big_n: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); (big_n + 1).pow(self.n as u32)];
        for (a, c) in &self.entries {
            if let Some(p) = box_position(a, big_n) {
                v[p] = *c;
            }
        }
        v
    }

    /// Random vector with Gaussian entries supported on the indices with
    /// `alpha_j <= N - margin`, normalized to unit coefficient norm.
    pub fn random_interior<R: Rng + ?Sized>(rng: &mut R, n: usize, big_n: usize, margin: usize) -> Self {
        let top = big_n.saturating_sub(margin);
        let mut f = CoeffVector::zeros(n);
        for a in enumerate_box(n, top) {
            let re: f64 = rng.random::<f64>() * 2.0 - 1.0;
            let im: f64 = rng.random::<f64>() * 2.0 - 1.0;
            f.set(a, C64::new(re, im));
        }
        let norm = f.norm_sq().sqrt();
        f.scale(C64::new(1.0 / norm, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, alpha: &MultiIndex) -> C64 {
        self.entries.get(alpha).copied().unwrap_or_default()
    }

    pub fn set(&mut self, alpha: MultiIndex, value: C64) {
        assert_eq!(alpha.dim(), self.n, "index dimension mismatch");
        if value == C64::new(0.0, 0.0) {
            self.entries.remove(&alpha);
        } else {
            self.entries.insert(alpha, value);
        }
    }

    pub fn add_to(&mut self, alpha: MultiIndex, value: C64) {
        assert_eq!(alpha.dim(), self.n, "index dimension mismatch");
        *self.entries.entry(alpha).or_default() += value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.entries.iter()
    }

    /// Indices carrying a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.entries
            .iter()
            .filter(|(_, c)| **c != C64::new(0.0, 0.0))
            .map(|(a, _)| a)
    }

    pub fn max_degree(&self) -> usize {
        self.support()
            .flat_map(|a| a.components().iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Plain l2 norm squared of the coefficients.
    pub fn norm_sq(&self) -> f64 {
        self.entries.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// l2 inner product `sum f_alpha conj(g_alpha)`.
    pub fn dot(&self, other: &CoeffVector) -> C64 {
        self.entries
            .iter()
            .map(|(a, c)| c * other.get(a).conj())
            .sum()
    }

    pub fn scale(&self, s: C64) -> CoeffVector {
        CoeffVector {
            n: self.n,
            entries: self.entries.iter().map(|(a, c)| (a.clone(), c * s)).collect(),
        }
    }

    pub fn add(&self, other: &CoeffVector) -> CoeffVector {
        let mut out = self.clone();
        for (a, c) in &other.entries {
            out.add_to(a.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &CoeffVector) -> CoeffVector {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }
}
