//! Orthogonal monomial-times-Gaussian bases of the weighted spaces, synthesis
//! and analysis of coefficient vectors, and the isometry from the
//! Segal-Bargmann space onto `H_A`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{FockError, Result};
use crate::index::{enumerate_box, CoeffVector, MultiIndex};
use crate::quadrature::{pointwise_bound_constant, SpaceIntegrator};
use crate::space::SpaceParams;

/// Basis normalization convention.
///
/// `AsPrinted` uses `(sqrt(kappa) z)^j / sqrt(pi j!) * exp(-l z^2 / 2)` for
/// `H_{kappa,l}` literally; those functions have squared norm `1/kappa`.
/// `UnitGram` rescales them by `sqrt(kappa)` so the Gram matrix is the
/// identity. The two agree on every space without a `kappa` parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    AsPrinted,
    UnitGram,
}

/// A single basis element `psi_alpha` of a space.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    pub space: SpaceParams,
    pub index: MultiIndex,
}

impl BasisFunction {
    pub fn new(space: SpaceParams, index: MultiIndex) -> Result<Self> {
        if index.dim() != space.dim() {
            return Err(FockError::DimensionMismatch {
                expected: space.dim(),
                got: index.dim(),
            });
        }
        Ok(BasisFunction { space, index })
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        eval_basis(&self.space, &self.index, z)
    }
}

/// `(kappa, l)` of the one-variable space `exp(-kappa|z|^2 + Re(l z^2))`
/// that a one-variable space is written as.
pub(crate) fn kappa_l_form(space: &SpaceParams) -> Option<(f64, C64)> {
    match *space {
        SpaceParams::SegalBargmann { n: 1 } => Some((1.0, C64::new(0.0, 0.0))),
        SpaceParams::HBeta { beta } => Some((1.0, C64::new(-beta, 0.0))),
        SpaceParams::HKappaL { kappa, l } => Some((kappa, l)),
        SpaceParams::HTauKappaL { tau, kappa, l } => Some((4.0 * PI * tau * kappa, -4.0 * PI * tau * l)),
        _ => None,
    }
}

/// `z^k / sqrt(k!)`, in log space once `k > 20`.
pub fn scaled_power(z: C64, k: usize) -> C64 {
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    if k <= 20 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        return z.powu(k as u32) / fact.sqrt();
    }
    if z == C64::new(0.0, 0.0) {
        return z;
    }
    let log_fact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
    (z.ln() * k as f64 - 0.5 * log_fact).exp()
}

/// Gaussian factor `exp(q(z))` that multiplies the monomials of the basis.
fn gaussian_factor(space: &SpaceParams, z: &[C64]) -> C64 {
    match *space {
        SpaceParams::SegalBargmann { .. } => C64::new(1.0, 0.0),
        SpaceParams::HA { beta1, beta2, kappa } => {
            let az = beta1 * z[0] * z[0] + 2.0 * kappa * z[0] * z[1] + beta2 * z[1] * z[1];
            (0.5 * az).exp()
        }
        _ => {
            let (_, l) = kappa_l_form(space).expect("one-variable space");
            (-0.5 * l * z[0] * z[0]).exp()
        }
    }
}

/// Monomial scale: `sqrt(kappa)` for `H_{kappa,l}` style spaces, else 1.
fn monomial_scale(space: &SpaceParams) -> f64 {
    match space {
        SpaceParams::HKappaL { .. } | SpaceParams::HTauKappaL { .. } => kappa_l_form(space).unwrap().0.sqrt(),
        _ => 1.0,
    }
}

/// Value of the basis function `psi_alpha` of `space` at `z`.
pub fn eval_basis(space: &SpaceParams, alpha: &MultiIndex, z: &[C64]) -> C64 {
    debug_assert_eq!(alpha.dim(), space.dim());
    debug_assert_eq!(z.len(), space.dim());
    let s = monomial_scale(space);
    let mono: C64 = alpha
        .components()
        .iter()
        .zip(z)
        .map(|(&k, &zj)| scaled_power(zj * s, k) / PI.sqrt())
        .product();
    mono * gaussian_factor(space, z)
}

pub fn eval_basis_with(space: &SpaceParams, alpha: &MultiIndex, z: &[C64], norm: Normalization) -> C64 {
    let v = eval_basis(space, alpha, z);
    match norm {
        Normalization::AsPrinted => v,
        Normalization::UnitGram => v / basis_norm_sq(space).sqrt(),
    }
}

/// Analytic squared norm of every printed basis function (index independent).
pub fn basis_norm_sq(space: &SpaceParams) -> f64 {
    match space {
        SpaceParams::HKappaL { .. } | SpaceParams::HTauKappaL { .. } => 1.0 / kappa_l_form(space).unwrap().0,
        _ => 1.0,
    }
}

/// Writes `psi_alpha(z)` for every alpha of `enumerate_box(n, big_n)` into `out`.
pub fn eval_box(space: &SpaceParams, big_n: usize, z: &[C64], out: &mut [C64]) {
    let s = monomial_scale(space);
    let g = gaussian_factor(space, z);
    let inv_sqrt_pi = 1.0 / PI.sqrt();
    let powers = |zj: C64| {
        let mut p = Vec::with_capacity(big_n + 1);
        let mut u = C64::new(inv_sqrt_pi, 0.0);
        p.push(u);
        for k in 1..=big_n {
            u = u * zj * s / (k as f64).sqrt();
            p.push(u);
        }
        p
    };
    match space.dim() {
        1 => {
            for (o, p) in out.iter_mut().zip(powers(z[0])) {
                *o = p * g;
            }
        }
        _ => {
            let (p1, p2) = (powers(z[0]), powers(z[1]));
            let mut i = 0;
            for a in &p1 {
                for b in &p2 {
                    out[i] = a * b * g;
                    i += 1;
                }
            }
        }
    }
}

/// Quadrature Gram matrix of the printed basis over `enumerate_box(n, N)`.
pub fn gram_matrix(space: &SpaceParams, big_n: usize, m: usize) -> Result<DMatrix<C64>> {
    let integ = SpaceIntegrator::new(space, m)?;
    let size = (big_n + 1).pow(space.dim() as u32);
    let sp = *space;
    let f = move |z: &[C64], out: &mut [C64]| eval_box(&sp, big_n, z, out);
    Ok(integ.gram(size, f, size, f))
}

/// `Phi(f)(z) = f(z) exp(<Az,z>/2)` for `f` given in the Segal-Bargmann basis of C^2.
pub fn apply_isometry(f: &CoeffVector, beta1: f64, beta2: f64, kappa: f64, z: &[C64]) -> C64 {
    let sb = SpaceParams::SegalBargmann { n: 2 };
    let fz: C64 = f.iter().map(|(a, c)| c * eval_basis(&sb, a, z)).sum();
    let az = beta1 * z[0] * z[0] + 2.0 * kappa * z[0] * z[1] + beta2 * z[1] * z[1];
    fz * (0.5 * az).exp()
}

/// The function `z -> sum f_alpha psi_alpha(z)`.
pub fn synthesize(f: &CoeffVector, space: &SpaceParams) -> impl Fn(&[C64]) -> C64 + Sync + Send + Clone {
    let terms: Vec<(MultiIndex, C64)> = f.iter().map(|(a, c)| (a.clone(), *c)).collect();
    let sp = *space;
    move |z: &[C64]| terms.iter().map(|(a, c)| c * eval_basis(&sp, a, z)).sum()
}

/// Coefficients `f_alpha = (g, psi_alpha) / ||psi_alpha||^2` over the box.
pub fn analyze<G>(g: G, space: &SpaceParams, big_n: usize, m: usize) -> Result<CoeffVector>
where
    G: Fn(&[C64]) -> C64 + Sync,
{
    let integ = SpaceIntegrator::new(space, m)?;
    let size = (big_n + 1).pow(space.dim() as u32);
    let sp = *space;
    let col = integ.gram(
        1,
        |z, out| out[0] = g(z),
        size,
        move |z, out| eval_box(&sp, big_n, z, out),
    );
    let scale = 1.0 / basis_norm_sq(space);
    Ok(CoeffVector::from_entries(
        space.dim(),
        enumerate_box(space.dim(), big_n)
            .into_iter()
            .enumerate()
            .map(|(i, a)| (a, col[(0, i)] * scale)),
    ))
}

/// Squared norm of `sum f_alpha psi_alpha` by Parseval.
pub fn coeff_norm_sq(space: &SpaceParams, f: &CoeffVector) -> f64 {
    f.norm_sq() * basis_norm_sq(space)
}

/// Outcome of `|f(z)| <= C(z, r) ||f||` over a set of points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseReport {
    pub checks: usize,
    pub violations: usize,
    /// Largest `|f(z)| / (C ||f||)`.
    pub worst_ratio: f64,
}

/// Checks the mean-value bound at every point, with `||f||` by Parseval
/// and the constant from [`pointwise_bound_constant`].
pub fn verify_pointwise_bound(
    space: &SpaceParams,
    f: &CoeffVector,
    points: &[Vec<C64>],
    r: f64,
    m: usize,
) -> Result<PointwiseReport> {
    let norm = coeff_norm_sq(space, f).sqrt();
    let g = synthesize(f, space);
    let mut violations = 0;
    let mut worst_ratio: f64 = 0.0;
    for z in points {
        let bound = pointwise_bound_constant(space, z, r, m)? * norm;
        let v = g(z).norm();
        if v > bound {
            violations += 1;
        }
        worst_ratio = worst_ratio.max(v / bound);
    }
    Ok(PointwiseReport {
        checks: points.len(),
        violations,
        worst_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gaussian_inner_product;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_values() {
        let ha = SpaceParams::h_a(0.3, -0.2, 0.5).unwrap();
        let v = eval_basis(&ha, &MultiIndex::two(0, 0), &[c(0.0, 0.0), c(0.0, 0.0)]);
        assert!((v - c(1.0 / PI, 0.0)).norm() < 1e-15);

        let hb = SpaceParams::h_beta(1.0).unwrap();
        let v = eval_basis(&hb, &MultiIndex::one(0), &[c(1.0, 0.0)]);
        assert!((v.re - 0.5f64.exp() / PI.sqrt()).abs() < 1e-15);
        assert!((v.re - 0.93019).abs() < 5e-5);

        let kl = SpaceParams::h_kappa_l(4.0, c(0.0, 0.0)).unwrap();
        let v = eval_basis(&kl, &MultiIndex::one(1), &[c(0.5, 0.0)]);
        assert!((v.re - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn log_space_powers_match_direct() {
        let z = c(1.3, -0.7);
        let mut u = C64::new(1.0, 0.0);
        for k in 1..=60usize {
            u = u * z / (k as f64).sqrt();
            let direct = scaled_power(z, k);
            assert!((direct - u).norm() <= 1e-12 * u.norm(), "k = {k}");
        }
        assert_eq!(scaled_power(c(0.0, 0.0), 25), c(0.0, 0.0));
    }

    #[test]
    fn box_evaluation_matches_single() {
        let sp = SpaceParams::h_a(0.4, 0.2, 0.3).unwrap();
        let z = [c(0.3, -0.2), c(-0.5, 0.9)];
        let mut out = vec![C64::default(); 16];
        eval_box(&sp, 3, &z, &mut out);
        for (i, a) in enumerate_box(2, 3).iter().enumerate() {
            assert!((out[i] - eval_basis(&sp, a, &z)).norm() < 1e-14);
        }
    }

    fn max_dev_from_identity(g: &DMatrix<C64>, diag: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let target = if i == j { diag } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).norm());
            }
        }
        worst
    }

    #[test]
    fn gram_h_beta_is_identity() {
        let g = gram_matrix(&SpaceParams::h_beta(0.5).unwrap(), 4, 20).unwrap();
        assert!(max_dev_from_identity(&g, 1.0) < 1e-9);
    }

    #[test]
    fn gram_h_a_is_identity() {
        let g = gram_matrix(&SpaceParams::h_a(0.3, 0.6, 0.0).unwrap(), 2, 20).unwrap();
        assert!(max_dev_from_identity(&g, 1.0) < 1e-8);
    }

    #[test]
    fn gram_h_kappa_l_diagonal_is_inverse_kappa() {
        let g = gram_matrix(&SpaceParams::h_kappa_l(2.0, c(0.0, 0.5)).unwrap(), 4, 20).unwrap();
        assert!(max_dev_from_identity(&g, 0.5) < 1e-12);
    }

    #[test]
    fn gram_refuses_degenerate_weight() {
        assert!(matches!(
            gram_matrix(&SpaceParams::h_beta(1.0).unwrap(), 2, 20),
            Err(FockError::DegenerateWeight { .. })
        ));
    }

    #[test]
    fn gram_converges_in_m() {
        let sp = SpaceParams::h_kappa_l(1.5, c(0.4, -0.3)).unwrap();
        let a = gram_matrix(&sp, 5, 20).unwrap();
        let b = gram_matrix(&sp, 5, 40).unwrap();
        assert!((a - b).iter().map(|v| v.norm()).fold(0.0, f64::max) <= 1e-10);
    }

    #[test]
    fn orthonormality_examples() {
        let sp = SpaceParams::h_beta(0.5).unwrap();
        let psi = |k: usize| move |z: &[C64]| eval_basis(&sp, &MultiIndex::one(k), z);
        let v = gaussian_inner_product(psi(1), psi(1), &sp, 20).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-12);
        let v = gaussian_inner_product(psi(0), psi(1), &sp, 20).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn isometry_examples() {
        let f = CoeffVector::unit(MultiIndex::two(0, 0));
        let v = apply_isometry(&f, 0.3, 0.1, 0.2, &[c(0.0, 0.0), c(0.0, 0.0)]);
        assert!((v - c(1.0 / PI, 0.0)).norm() < 1e-15);
        let zero = CoeffVector::zeros(2);
        assert_eq!(apply_isometry(&zero, 0.3, 0.1, 0.2, &[c(1.0, 2.0), c(-1.0, 0.5)]), c(0.0, 0.0));
    }

    #[test]
    fn round_trip_synthesis_analysis() {
        let sp = SpaceParams::h_beta(0.5).unwrap();
        let f = CoeffVector::from_entries(
            1,
            [(MultiIndex::one(0), c(1.0, 0.0)), (MultiIndex::one(3), c(2.0, -1.0))],
        );
        let back = analyze(synthesize(&f, &sp), &sp, 5, 24).unwrap();
        for a in enumerate_box(1, 5) {
            assert!((back.get(&a) - f.get(&a)).norm() < 1e-9, "{a:?}");
        }
        let psi2 = CoeffVector::unit(MultiIndex::one(2));
        let back = analyze(synthesize(&psi2, &sp), &sp, 4, 20).unwrap();
        for a in enumerate_box(1, 4) {
            let target = if a.get(0) == 2 { 1.0 } else { 0.0 };
            assert!((back.get(&a) - c(target, 0.0)).norm() < 1e-10);
        }
        let unit0 = CoeffVector::unit(MultiIndex::one(0));
        let v = synthesize(&unit0, &sp)(&[c(0.0, 0.0)]);
        assert!((v - c(1.0 / PI.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn round_trip_in_kappa_l_uses_gram_diagonal() {
        let sp = SpaceParams::h_kappa_l(2.0, c(0.3, 0.4)).unwrap();
        let f = CoeffVector::from_entries(1, [(MultiIndex::one(1), c(0.5, 1.0)), (MultiIndex::one(4), c(-1.0, 0.0))]);
        let back = analyze(synthesize(&f, &sp), &sp, 6, 24).unwrap();
        assert!(back.sub(&f).norm() < 1e-10);
    }

    #[test]
    fn unit_gram_normalization() {
        let sp = SpaceParams::h_kappa_l(3.0, c(0.5, 0.0)).unwrap();
        let f = |z: &[C64]| eval_basis_with(&sp, &MultiIndex::one(2), z, Normalization::UnitGram);
        let v = gaussian_inner_product(f, f, &sp, 20).unwrap();
        assert!((v.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pointwise_bound_on_random_functions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let sp = SpaceParams::h_beta(0.5).unwrap();
        let points: Vec<Vec<C64>> = (0..20)
            .map(|_| {
                let rho = rng.random_range(0.0f64..1.0).sqrt();
                vec![C64::from_polar(rho, rng.random_range(0.0..2.0 * PI))]
            })
            .collect();
        for _ in 0..20 {
            let f = CoeffVector::random_interior(&mut rng, 1, 8, 0);
            let r = verify_pointwise_bound(&sp, &f, &points, 1.0, 64).unwrap();
            assert_eq!(r.violations, 0, "{r:?}");
            assert_eq!(r.checks, 20);
        }
    }
}
