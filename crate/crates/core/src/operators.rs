//! Annihilation and multiplication operators on `H_A` in coefficient space.
//!
//! In the orthonormal basis `psi_alpha` of `H_A`,
//!
//! ```text
//! b_1 psi_a = sqrt(a1+1) psi_{a1+1,a2}
//! a_1 psi_a = sqrt(a1) psi_{a1-1,a2} + beta1 sqrt(a1+1) psi_{a1+1,a2} + kappa sqrt(a2+1) psi_{a1,a2+1}
//! ```
//!
//! and symmetrically for the second coordinate. All norms here are exact l2
//! sums over the coefficients; quadrature is only used to cross-check the
//! matrix entries.

use num_complex::Complex64 as C64;

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::basis::{eval_box, scaled_power};
use crate::error::{FockError, Result};
use crate::index::{enumerate_box, CoeffVector, InteriorMargin, MultiIndex};
use crate::quadrature::SpaceIntegrator;
use crate::space::SpaceParams;
use crate::truncated::TruncatedOperator;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn axis(j: usize) -> usize {
    assert!(j == 1 || j == 2, "coordinate index must be 1 or 2");
    j - 1
}

fn unit_shift(k: usize, delta: i64) -> Vec<i64> {
    let mut s = vec![0, 0];
    s[k] = delta;
    s
}

/// Multiplication by `z_j`: raises index `j` with weight `sqrt(alpha_j + 1)`.
pub fn matrix_b(j: usize, big_n: usize) -> TruncatedOperator {
    let k = axis(j);
    TruncatedOperator::from_action(&format!("b{j}"), 2, big_n, &[unit_shift(k, 1)], |a| {
        vec![(a.shifted(k, 1).unwrap(), re((a.get(k) as f64 + 1.0).sqrt()))]
    })
}

/// Adjoint of `b_j` in `H_A`: lowers index `j` with weight `sqrt(alpha_j)`.
pub fn matrix_b_star(j: usize, big_n: usize) -> TruncatedOperator {
    let k = axis(j);
    TruncatedOperator::from_action(&format!("b{j}*"), 2, big_n, &[unit_shift(k, -1)], |a| {
        a.shifted(k, -1)
            .map(|t| vec![(t, re((a.get(k) as f64).sqrt()))])
            .unwrap_or_default()
    })
}

/// Differentiation `d/dz_j` on `H_A` with `A = [[beta1, kappa], [kappa, beta2]]`.
pub fn matrix_a(j: usize, big_n: usize, beta1: f64, beta2: f64, kappa: f64) -> TruncatedOperator {
    let k = axis(j);
    let other = 1 - k;
    let beta = if k == 0 { beta1 } else { beta2 };
    let shifts = [unit_shift(k, -1), unit_shift(k, 1), unit_shift(other, 1)];
    TruncatedOperator::from_action(&format!("a{j}"), 2, big_n, &shifts, |a| {
        let mut img = Vec::with_capacity(3);
        if let Some(t) = a.shifted(k, -1) {
            img.push((t, re((a.get(k) as f64).sqrt())));
        }
        img.push((a.shifted(k, 1).unwrap(), re(beta * (a.get(k) as f64 + 1.0).sqrt())));
        img.push((a.shifted(other, 1).unwrap(), re(kappa * (a.get(other) as f64 + 1.0).sqrt())));
        img
    })
}

/// Explicit adjoint `a_j* = b_j + beta_j b_j*`, available for diagonal `A` only.
pub fn matrix_a_star(j: usize, big_n: usize, beta1: f64, beta2: f64, kappa: f64) -> Result<TruncatedOperator> {
    if kappa != 0.0 {
        return Err(FockError::Unsupported(
            "explicit a_j* needs kappa = 0; use matrix_a(..).conjugate_transpose()".into(),
        ));
    }
    let k = axis(j);
    let beta = if k == 0 { beta1 } else { beta2 };
    let op = matrix_b(j, big_n).linear_combination(re(1.0), &matrix_b_star(j, big_n), re(beta))?;
    Ok(op.named(&format!("a{j}*")))
}

/// All ladder operators of one `H_A` on one truncation box.
///
/// `a_star` is always the conjugate transpose of `a`; for diagonal `A` it
/// coincides with [`matrix_a_star`].
#[derive(Debug, Clone)]
pub struct LadderOperators {
    pub big_n: usize,
    pub beta: [f64; 2],
    pub kappa: f64,
    pub a: [TruncatedOperator; 2],
    pub a_star: [TruncatedOperator; 2],
    pub b: [TruncatedOperator; 2],
    pub b_star: [TruncatedOperator; 2],
}

impl LadderOperators {
    pub fn new(big_n: usize, beta1: f64, beta2: f64, kappa: f64) -> Self {
        let a = [1, 2].map(|j| matrix_a(j, big_n, beta1, beta2, kappa));
        let a_star = [a[0].conjugate_transpose(), a[1].conjugate_transpose()];
        LadderOperators {
            big_n,
            beta: [beta1, beta2],
            kappa,
            a,
            a_star,
            b: [1, 2].map(|j| matrix_b(j, big_n)),
            b_star: [1, 2].map(|j| matrix_b_star(j, big_n)),
        }
    }
}

/// Residuals of the diagonal-case identities for one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisResiduals {
    /// `| ||a*f||^2 - ||af||^2 - (1 - beta^2)||f||^2 |`
    pub a_norm_identity: f64,
    /// `| ||bf||^2 - ||b*f||^2 - ||f||^2 |`
    pub b_norm_identity: f64,
    /// `|| a*f - beta a f - (1 - beta^2) b f ||`
    pub adjoint_formula: f64,
    /// `max(0, ||f||^2 - (||a*f||^2 + ||af||^2) / |1 - beta^2|)`; `None` at `|beta| = 1`.
    pub basic_estimate_slack: Option<f64>,
}

impl AxisResiduals {
    pub fn max(&self) -> f64 {
        self.a_norm_identity
            .max(self.b_norm_identity)
            .max(self.adjoint_formula)
            .max(self.basic_estimate_slack.unwrap_or(0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremReport {
    pub axes: [AxisResiduals; 2],
    pub f_norm_sq: f64,
}

impl TheoremReport {
    pub fn max_residual(&self) -> f64 {
        self.axes[0].max().max(self.axes[1].max())
    }
}

/// Norm identities, the adjoint formula and the basic estimate for diagonal `A`.
///
/// `f` must stay one step away from the upper faces of the box.
pub fn verify_theorem_2(f: &CoeffVector, beta1: f64, beta2: f64, big_n: usize) -> Result<TheoremReport> {
    verify_theorem_2_with(&LadderOperators::new(big_n, beta1, beta2, 0.0), f)
}

/// [`verify_theorem_2`] with prebuilt operators, for repeated calls on one box.
pub fn verify_theorem_2_with(ops: &LadderOperators, f: &CoeffVector) -> Result<TheoremReport> {
    check_dim(f)?;
    require_diagonal(ops)?;
    InteriorMargin::new(1).check(f, ops.big_n)?;
    let f_norm_sq = f.norm_sq();
    let mut axes = [AxisResiduals {
        a_norm_identity: 0.0,
        b_norm_identity: 0.0,
        adjoint_formula: 0.0,
        basic_estimate_slack: None,
    }; 2];
    for (k, beta) in ops.beta.into_iter().enumerate() {
        let af = ops.a[k].apply(f);
        let asf = ops.a_star[k].apply(f);
        let bf = ops.b[k].apply(f);
        let bsf = ops.b_star[k].apply(f);
        let gap = 1.0 - beta * beta;
        let adjoint_residual = asf.sub(&af.scale(re(beta))).sub(&bf.scale(re(gap)));
        axes[k] = AxisResiduals {
            a_norm_identity: (asf.norm_sq() - af.norm_sq() - gap * f_norm_sq).abs(),
            b_norm_identity: (bf.norm_sq() - bsf.norm_sq() - f_norm_sq).abs(),
            adjoint_formula: adjoint_residual.norm(),
            basic_estimate_slack: (gap != 0.0)
                .then(|| (f_norm_sq - (asf.norm_sq() + af.norm_sq()) / gap.abs()).max(0.0)),
        };
    }
    Ok(TheoremReport { axes, f_norm_sq })
}

fn require_diagonal(ops: &LadderOperators) -> Result<()> {
    if ops.kappa != 0.0 {
        return Err(FockError::Unsupported("identities need diagonal A (kappa = 0)".into()));
    }
    Ok(())
}

fn check_dim(f: &CoeffVector) -> Result<()> {
    if f.dim() != 2 {
        return Err(FockError::DimensionMismatch {
            expected: 2,
            got: f.dim(),
        });
    }
    Ok(())
}

/// `[P, Q] f = P(Qf) - Q(Pf)`, exact for `f` two steps inside the box.
fn bracket(p: &TruncatedOperator, q: &TruncatedOperator, f: &CoeffVector) -> CoeffVector {
    p.apply(&q.apply(f)).sub(&q.apply(&p.apply(f)))
}

/// Commutator residuals for diagonal `A`, on a vector two steps inside the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutationReport {
    /// `|| [a_j, a_j*] f - (1 - beta_j^2) f ||`
    pub a_a_star: [f64; 2],
    /// `|| [a_j, b_j] f - f ||`
    pub a_b: [f64; 2],
    /// `|| [a_1, a_2] f ||`
    pub a_a: f64,
    /// `|| [a_1*, a_2*] f ||`
    pub a_star_a_star: f64,
}

impl CommutationReport {
    pub fn max_residual(&self) -> f64 {
        [self.a_a_star[0], self.a_a_star[1], self.a_b[0], self.a_b[1], self.a_a, self.a_star_a_star]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn verify_commutation(f: &CoeffVector, beta1: f64, beta2: f64, big_n: usize) -> Result<CommutationReport> {
    verify_commutation_with(&LadderOperators::new(big_n, beta1, beta2, 0.0), f)
}

pub fn verify_commutation_with(ops: &LadderOperators, f: &CoeffVector) -> Result<CommutationReport> {
    check_dim(f)?;
    require_diagonal(ops)?;
    InteriorMargin::new(2).check(f, ops.big_n)?;
    let (a, a_star, b, betas) = (&ops.a, &ops.a_star, &ops.b, ops.beta);
    let mut a_a_star = [0.0; 2];
    let mut a_b = [0.0; 2];
    for k in 0..2 {
        let gap = 1.0 - betas[k] * betas[k];
        a_a_star[k] = bracket(&a[k], &a_star[k], f).sub(&f.scale(re(gap))).norm();
        a_b[k] = bracket(&a[k], &b[k], f).sub(f).norm();
    }
    Ok(CommutationReport {
        a_a_star,
        a_b,
        a_a: bracket(&a[0], &a[1], f).norm(),
        a_star_a_star: bracket(&a_star[0], &a_star[1], f).norm(),
    })
}

/// Residuals for the antidiagonal case `A = [[0, kappa], [kappa, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewReport {
    /// `|| a_1 f - kappa a_2* f - (1 - kappa^2) b_1* f ||`
    pub first_relation: f64,
    /// `|| a_2 f - kappa a_1* f - (1 - kappa^2) b_2* f ||`
    pub second_relation: f64,
    /// `|| [a_j, a_k*] f - delta_jk (1 - kappa^2) f ||`
    pub mixed_commutators: [[f64; 2]; 2],
    /// `|| [a_1*, a_2*] f ||`
    pub star_commutator: f64,
    /// `|| a_1 f - kappa a_2* f ||` when `|kappa| = 1`.
    pub degeneration: Option<f64>,
}

impl SkewReport {
    pub fn max_residual(&self) -> f64 {
        let m = self.mixed_commutators.iter().flatten().copied().fold(0.0, f64::max);
        self.first_relation
            .max(self.second_relation)
            .max(m)
            .max(self.star_commutator)
            .max(self.degeneration.unwrap_or(0.0))
    }
}

/// The antidiagonal relations, with `a_j*` taken as the conjugate transpose
/// of the truncated `a_j`. `f` must stay two steps inside the box because
/// the commutators apply two shift operators.
pub fn verify_skew(f: &CoeffVector, kappa: f64, big_n: usize) -> Result<SkewReport> {
    verify_skew_with(&LadderOperators::new(big_n, 0.0, 0.0, kappa), f)
}

pub fn verify_skew_with(ops: &LadderOperators, f: &CoeffVector) -> Result<SkewReport> {
    check_dim(f)?;
    if ops.beta != [0.0, 0.0] {
        return Err(FockError::Unsupported("skew relations need beta1 = beta2 = 0".into()));
    }
    InteriorMargin::new(2).check(f, ops.big_n)?;
    let kappa = ops.kappa;
    let gap = 1.0 - kappa * kappa;
    let rel = |k: usize| {
        let other = 1 - k;
        ops.a[k]
            .apply(f)
            .sub(&ops.a_star[other].apply(f).scale(re(kappa)))
            .sub(&ops.b_star[k].apply(f).scale(re(gap)))
            .norm()
    };
    let mut mixed = [[0.0; 2]; 2];
    for (j, row) in mixed.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let target = if j == k { gap } else { 0.0 };
            *cell = bracket(&ops.a[j], &ops.a_star[k], f).sub(&f.scale(re(target))).norm();
        }
    }
    let degeneration = (kappa.abs() == 1.0).then(|| {
        ops.a[0]
            .apply(f)
            .sub(&ops.a_star[1].apply(f).scale(re(kappa)))
            .norm()
    });
    Ok(SkewReport {
        first_relation: rel(0),
        second_relation: rel(1),
        mixed_commutators: mixed,
        star_commutator: bracket(&ops.a_star[0], &ops.a_star[1], f).norm(),
        degeneration,
    })
}

/// Quadrature matrix `G[alpha, alpha'] = (d/dz_j psi_alpha, psi_alpha')` on `H_A`,
/// with `alpha` running over the box of size `alpha_n` and `alpha'` over the
/// box of size `big_n`. The derivative is taken analytically from the closed
/// form of `psi_alpha`, independent of the ladder coefficients.
pub fn quadrature_a_matrix(
    j: usize,
    beta1: f64,
    beta2: f64,
    kappa: f64,
    alpha_n: usize,
    big_n: usize,
    m: usize,
) -> Result<DMatrix<C64>> {
    let k = axis(j);
    let space = SpaceParams::h_a(beta1, beta2, kappa)?;
    let integ = SpaceIntegrator::new(&space, m)?;
    let alphas = enumerate_box(2, alpha_n);
    let beta = if k == 0 { beta1 } else { beta2 };
    let left = |z: &[C64], out: &mut [C64]| {
        let az = beta1 * z[0] * z[0] + 2.0 * kappa * z[0] * z[1] + beta2 * z[1] * z[1];
        let g = (0.5 * az).exp() / PI;
        let inner = beta * z[k] + kappa * z[1 - k];
        for (o, a) in out.iter_mut().zip(&alphas) {
            let p = [scaled_power(z[0], a.get(0)), scaled_power(z[1], a.get(1))];
            let d = if a.get(k) == 0 {
                C64::new(0.0, 0.0)
            } else {
                let mut q = p;
                q[k] = (a.get(k) as f64).sqrt() * scaled_power(z[k], a.get(k) - 1);
                q[0] * q[1]
            };
            *o = (d + p[0] * p[1] * inner) * g;
        }
    };
    let right = |z: &[C64], out: &mut [C64]| eval_box(&space, big_n, z, out);
    Ok(integ.gram(alphas.len(), left, (big_n + 1) * (big_n + 1), right))
}

/// Matrix element `(a_j psi_alpha, psi_alpha')` from the truncated matrix.
pub fn a_matrix_element(op: &TruncatedOperator, alpha: &MultiIndex, alpha_prime: &MultiIndex) -> C64 {
    op.entry(alpha_prime, alpha)
}
