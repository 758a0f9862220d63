//! One-variable Bargmann transform, Hermite functions, position and momentum.
//!
//! `B(f)(z) = pi^{-1/4} int f(x) exp(-z^2/2 + sqrt(2) z x - x^2/2) dx` maps
//! `h_k` to `z^k / sqrt(k!)`. Against `exp(-|z|^2) d lambda` those images have
//! squared norm `pi`, so `B` is unitary only up to the constant measured by
//! [`unitarity_constant`].

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::basis::scaled_power;
use crate::error::{FockError, Result};
use crate::index::{CoeffVector, InteriorMargin, MultiIndex};
use crate::quadrature::{hermite_rule, Rule1D, SpaceIntegrator};
use crate::space::SpaceParams;
use crate::truncated::TruncatedOperator;

pub const DEFAULT_BARGMANN_M: usize = 60;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Polynomial parts `P_k(x) = h_k(x) exp(x^2/2)` for `k <= big_k`.
fn hermite_polys(big_k: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(big_k + 1);
    p.push(PI.powf(-0.25));
    if big_k >= 1 {
        p.push(SQRT_2 * x * p[0]);
    }
    for k in 1..big_k {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * p[k] - (kf / (kf + 1.0)).sqrt() * p[k - 1];
        p.push(next);
    }
    p
}

/// Orthonormal Hermite function `h_k(x)`.
pub fn hermite_function(k: usize, x: f64) -> f64 {
    hermite_polys(k, x)[k] * (-0.5 * x * x).exp()
}

/// `u = sum c_k h_k` in `L^2(R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    coeffs: CoeffVector,
}

impl HermiteExpansion {
    pub fn zero() -> Self {
        HermiteExpansion {
            coeffs: CoeffVector::zeros(1),
        }
    }

    pub fn unit(k: usize) -> Self {
        HermiteExpansion {
            coeffs: CoeffVector::unit(MultiIndex::one(k)),
        }
    }

    pub fn from_coeffs(values: &[C64]) -> Self {
        HermiteExpansion {
            coeffs: CoeffVector::from_entries(1, values.iter().enumerate().map(|(k, &c)| (MultiIndex::one(k), c))),
        }
    }

    pub fn from_coeff_vector(coeffs: CoeffVector) -> Result<Self> {
        if coeffs.dim() != 1 {
            return Err(FockError::DimensionMismatch {
                expected: 1,
                got: coeffs.dim(),
            });
        }
        Ok(HermiteExpansion { coeffs })
    }

    /// Unit-norm random expansion supported on `k <= N - margin`.
    pub fn random_interior<R: Rng + ?Sized>(rng: &mut R, big_n: usize, margin: usize) -> Self {
        HermiteExpansion {
            coeffs: CoeffVector::random_interior(rng, 1, big_n, margin),
        }
    }

    pub fn coeffs(&self) -> &CoeffVector {
        &self.coeffs
    }

    pub fn get(&self, k: usize) -> C64 {
        self.coeffs.get(&MultiIndex::one(k))
    }

    pub fn max_index(&self) -> usize {
        self.coeffs.max_degree()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.norm_sq()
    }

    /// Polynomial part `u(x) exp(x^2/2)`.
    fn poly(&self, x: f64) -> C64 {
        let p = hermite_polys(self.max_index(), x);
        self.coeffs.iter().map(|(a, c)| c * p[a.get(0)]).sum()
    }

    pub fn eval(&self, x: f64) -> C64 {
        self.poly(x) * (-0.5 * x * x).exp()
    }
}

/// Bargmann transform of `u` at `z` by `m`-point Gauss-Hermite.
///
/// The kernel times `h_k` is `pi^{-1/4} P_k(x) exp(-(x - z/sqrt 2)^2)`.
/// Shifting `x = s + Re(z)/sqrt 2` leaves `exp(-s^2)` times
/// `P(s + Re z/sqrt 2) exp(i sqrt 2 Im(z) s) exp(Im(z)^2 / 2)`.
pub fn bargmann_transform(u: &HermiteExpansion, z: C64, m: usize) -> Result<C64> {
    Ok(bargmann_transform_with(u, z, &hermite_rule(m)?))
}

/// [`bargmann_transform`] with a prebuilt Gauss-Hermite rule.
pub fn bargmann_transform_with(u: &HermiteExpansion, z: C64, rule: &Rule1D) -> C64 {
    let shift = z.re / SQRT_2;
    let b = z.im;
    let mut sum = C64::new(0.0, 0.0);
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let phase = C64::from_polar(1.0, SQRT_2 * b * s);
        sum += u.poly(s + shift) * phase * w;
    }
    sum * (0.5 * b * b).exp() * PI.powf(-0.25)
}

/// Position `X` and momentum `D = -i d/dx` in the Hermite basis `h_0..h_N`.
pub fn xd_matrices(big_n: usize) -> (TruncatedOperator, TruncatedOperator) {
    let shifts = [vec![-1], vec![1]];
    let x = TruncatedOperator::from_action("X", 1, big_n, &shifts, |a| {
        let k = a.get(0) as f64;
        let mut img = vec![(MultiIndex::one(a.get(0) + 1), re(((k + 1.0) / 2.0).sqrt()))];
        if let Some(t) = a.shifted(0, -1) {
            img.push((t, re((k / 2.0).sqrt())));
        }
        img
    });
    let d = TruncatedOperator::from_action("D", 1, big_n, &shifts, |a| {
        let k = a.get(0) as f64;
        let mut img = vec![(MultiIndex::one(a.get(0) + 1), C64::new(0.0, ((k + 1.0) / 2.0).sqrt()))];
        if let Some(t) = a.shifted(0, -1) {
            img.push((t, C64::new(0.0, -(k / 2.0).sqrt())));
        }
        img
    });
    (x, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub u_norm_sq: f64,
    pub x_norm: f64,
    pub d_norm: f64,
    /// `||(X-a)u|| ||(D-b)u|| - ||u||^2 / 2`
    pub shifted_product_slack: f64,
    /// `||Xu||^2 + ||Du||^2 - ||u||^2`
    pub sum_of_squares_slack: f64,
    /// `||Xu|| ||Du|| - ||u||^2 / 2`, the product slack at `a = b = 0`
    pub product_slack: f64,
    /// `sum_of_squares_slack - 2 product_slack - (||Xu|| - ||Du||)^2`, zero up to rounding.
    pub am_gm_gap: f64,
}

/// Both uncertainty slacks for `u`, in the truncated Hermite box.
pub fn verify_uncertainty(u: &HermiteExpansion, a: f64, b: f64, big_n: usize) -> Result<UncertaintyReport> {
    InteriorMargin::new(2).check(u.coeffs(), big_n)?;
    let (x, d) = xd_matrices(big_n);
    let f = u.coeffs();
    let xu = x.apply(f);
    let du = d.apply(f);
    let u_norm_sq = f.norm_sq();
    let xa = xu.sub(&f.scale(re(a))).norm();
    let db = du.sub(&f.scale(re(b))).norm();
    let (xn, dn) = (xu.norm(), du.norm());
    let sum_of_squares_slack = xn * xn + dn * dn - u_norm_sq;
    let product_slack = xn * dn - 0.5 * u_norm_sq;
    Ok(UncertaintyReport {
        u_norm_sq,
        x_norm: xn,
        d_norm: dn,
        shifted_product_slack: xa * db - 0.5 * u_norm_sq,
        sum_of_squares_slack,
        product_slack,
        am_gm_gap: sum_of_squares_slack - 2.0 * product_slack - (xn - dn) * (xn - dn),
    })
}

/// Measured ratio `t_k = B(h_k)(z0) / (z0^k / sqrt(k!))` for `k <= N`.
pub fn transport_constants(big_n: usize, z0: C64, m: usize) -> Result<Vec<C64>> {
    let rule = hermite_rule(m)?;
    (0..=big_n)
        .map(|k| Ok(bargmann_transform_with(&HermiteExpansion::unit(k), z0, &rule) / scaled_power(z0, k)))
        .collect()
}

/// Gram matrix of `B(h_k)`, `k <= K`, against `exp(-|z|^2) d lambda`, with
/// every value of `B(h_k)` computed by [`bargmann_transform`].
pub fn bargmann_gram(big_k: usize, m_fock: usize, m_line: usize) -> Result<DMatrix<C64>> {
    let integ = SpaceIntegrator::new(&SpaceParams::segal_bargmann(1)?, m_fock)?;
    let rule = hermite_rule(m_line)?;
    let units: Vec<HermiteExpansion> = (0..=big_k).map(HermiteExpansion::unit).collect();
    let images = |z: &[C64], out: &mut [C64]| {
        for (o, u) in out.iter_mut().zip(&units) {
            *o = bargmann_transform_with(u, z[0], &rule);
        }
    };
    Ok(integ.gram(big_k + 1, images, big_k + 1, images))
}

/// Unitarity constant `c` with `(B h_k, B h_k') = c delta_kk'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityReport {
    pub constant: f64,
    /// Largest `|G_kk / c - 1|`.
    pub diagonal_spread: f64,
    /// Largest off-diagonal `|G_kk'| / c`.
    pub off_diagonal: f64,
}

pub fn unitarity_constant(big_k: usize, m_fock: usize, m_line: usize) -> Result<UnitarityReport> {
    let g = bargmann_gram(big_k, m_fock, m_line)?;
    let n = big_k + 1;
    let constant = (0..n).map(|k| g[(k, k)].re).sum::<f64>() / n as f64;
    let mut diagonal_spread: f64 = 0.0;
    let mut off_diagonal: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                diagonal_spread = diagonal_spread.max((g[(i, i)] / constant - 1.0).norm());
            } else {
                off_diagonal = off_diagonal.max(g[(i, j)].norm() / constant);
            }
        }
    }
    Ok(UnitarityReport {
        constant,
        diagonal_spread,
        off_diagonal,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationReport {
    /// Largest entry of `T^{-1} A T - (X + iD)/sqrt 2` on the interior block.
    pub annihilation_residual: f64,
    /// Same for the creation operator against `(X - iD)/sqrt 2`.
    pub creation_residual: f64,
    /// Largest relative deviation of `||Xu||^2 + ||Du||^2` from
    /// `(||a Bu||^2 + ||a* Bu||^2) / c` over the samples.
    pub equivalence_residual: f64,
    /// Smallest `(||a Bu||^2 + ||a* Bu||^2 - ||Bu||^2) / c` over the samples.
    pub fock_slack_min: f64,
    pub unitarity: UnitarityReport,
    pub samples: usize,
}

/// Fock-space annihilation on `e_k = z^k / sqrt(k!)`: `a e_k = sqrt(k) e_{k-1}`.
fn fock_annihilation(big_n: usize) -> TruncatedOperator {
    TruncatedOperator::from_action("a", 1, big_n, &[vec![-1]], |a| {
        a.shifted(0, -1)
            .map(|t| vec![(t, re((a.get(0) as f64).sqrt()))])
            .unwrap_or_default()
    })
}

fn diagonal(big_n: usize, d: &[C64]) -> TruncatedOperator {
    TruncatedOperator::from_action("T", 1, big_n, &[vec![0]], |a| vec![(a.clone(), d[a.get(0)])])
}

/// Pulls the Fock ladder operators back through `B` and compares them with
/// `(X +- iD)/sqrt 2`, then checks the norm equivalence on random `u`.
pub fn verify_conjugation<R: Rng + ?Sized>(
    big_n: usize,
    samples: usize,
    m: usize,
    rng: &mut R,
) -> Result<ConjugationReport> {
    if big_n < 4 {
        return Err(FockError::InvalidParams("conjugation check needs N >= 4".into()));
    }
    // z0 near the peak of |z^N| e^{-|z|^2/2} keeps the ratios free of cancellation
    let z0 = C64::new((big_n as f64).sqrt().max(2.0), 0.0);
    let t = transport_constants(big_n, z0, m)?;
    let t_inv: Vec<C64> = t.iter().map(|v| v.inv()).collect();
    let a_f = fock_annihilation(big_n);
    let a_f_star = a_f.conjugate_transpose();
    let pull = |op: &TruncatedOperator| diagonal(big_n, &t_inv).compose(&op.compose(&diagonal(big_n, &t))?);
    let (x, d) = xd_matrices(big_n);
    let i = C64::new(0.0, 1.0);
    let target_a = x.linear_combination(re(1.0 / SQRT_2), &d, i / SQRT_2)?;
    let target_c = x.linear_combination(re(1.0 / SQRT_2), &d, -i / SQRT_2)?;
    let annihilation_residual = pull(&a_f)?.max_deviation_on_block(&target_a, 1)?;
    let creation_residual = pull(&a_f_star)?.max_deviation_on_block(&target_c, 1)?;

    let unitarity = unitarity_constant(6.min(big_n), 24, m)?;
    let c = unitarity.constant;
    let integ = SpaceIntegrator::new(&SpaceParams::segal_bargmann(1)?, big_n + 4)?;
    let mut equivalence_residual: f64 = 0.0;
    let mut fock_slack_min = f64::INFINITY;
    for s in 0..samples {
        let u = if s == 0 {
            HermiteExpansion::unit(0)
        } else {
            HermiteExpansion::random_interior(rng, big_n, 2)
        };
        let r = verify_uncertainty(&u, 0.0, 0.0, big_n)?;
        let lhs = r.x_norm * r.x_norm + r.d_norm * r.d_norm;
        // Bu in the e_k basis, then a and a* by differentiation and multiplication
        let bu: Vec<(usize, C64)> = u.coeffs().iter().map(|(a, v)| (a.get(0), v * t[a.get(0)])).collect();
        let g = |z: &[C64]| bu.iter().map(|&(k, v)| v * scaled_power(z[0], k)).sum::<C64>();
        let ag = |z: &[C64]| {
            bu.iter()
                .filter(|&&(k, _)| k > 0)
                .map(|&(k, v)| v * (k as f64).sqrt() * scaled_power(z[0], k - 1))
                .sum::<C64>()
        };
        let zg = |z: &[C64]| z[0] * g(z);
        let nrm = |f: &(dyn Fn(&[C64]) -> C64 + Sync)| integ.inner_product(f, f).re;
        let (n_a, n_c, n_g) = (nrm(&ag), nrm(&zg), nrm(&g));
        let rhs = (n_a + n_c) / c;
        equivalence_residual = equivalence_residual.max((lhs - rhs).abs() / lhs);
        fock_slack_min = fock_slack_min.min((n_a + n_c - n_g) / c);
    }
    Ok(ConjugationReport {
        annihilation_residual,
        creation_residual,
        equivalence_residual,
        fock_slack_min,
        unitarity,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn c(a: f64, b: f64) -> C64 {
        C64::new(a, b)
    }

    #[test]
    fn hermite_function_values() {
        assert!((hermite_function(0, 0.0) - PI.powf(-0.25)).abs() < 1e-15);
        assert!((hermite_function(0, 0.0) - 0.7511).abs() < 1e-4);
        assert_eq!(hermite_function(1, 0.0), 0.0);
        // h_2 = pi^{-1/4} (2x^2 - 1) / sqrt 2 e^{-x^2/2}
        let x: f64 = 0.8;
        let h2 = PI.powf(-0.25) * (2.0 * x * x - 1.0) / SQRT_2 * (-0.5 * x * x).exp();
        assert!((hermite_function(2, x) - h2).abs() < 1e-15);
    }

    #[test]
    fn hermite_functions_orthonormal() {
        let rule = hermite_rule(30).unwrap();
        for j in 0..8 {
            for k in 0..8 {
                // h_j h_k = P_j P_k e^{-x^2}
                let v = rule.integrate(|x| hermite_polys(8, x)[j] * hermite_polys(8, x)[k]);
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-13, "{j} {k} {v}");
            }
        }
    }

    #[test]
    fn transform_examples() {
        let h0 = HermiteExpansion::unit(0);
        let h1 = HermiteExpansion::unit(1);
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(-0.5, 0.3), c(1.2, -0.8), c(0.3, 1.5), c(-1.0, -1.0), c(2.0, 0.1), c(0.1, -2.0), c(-0.7, 0.7)];
        for &z in &pts {
            assert!((bargmann_transform(&h0, z, 60).unwrap() - 1.0).norm() < 1e-12, "{z}");
            assert!((bargmann_transform(&h1, z, 60).unwrap() - z).norm() < 1e-12, "{z}");
        }
        assert!((bargmann_transform(&h1, c(0.4, 0.9), 30).unwrap() - c(0.4, 0.9)).norm() < 1e-12);
        assert_eq!(bargmann_transform(&HermiteExpansion::zero(), c(1.0, 1.0), 20).unwrap(), c(0.0, 0.0));
        // higher functions go to z^k / sqrt(k!)
        for k in 2..10 {
            let z = c(0.6, -0.9);
            let v = bargmann_transform(&HermiteExpansion::unit(k), z, 60).unwrap();
            assert!((v - scaled_power(z, k)).norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn transform_against_direct_integral() {
        // independent route: trapezoid rule on the unshifted integrand
        let u = HermiteExpansion::from_coeffs(&[c(0.3, 0.0), c(0.0, -0.5), c(0.2, 0.1)]);
        let z = c(0.5, 0.4);
        let (a, n) = (12.0, 4000);
        let hstep = 2.0 * a / n as f64;
        let mut direct = c(0.0, 0.0);
        for i in 0..=n {
            let x = -a + i as f64 * hstep;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            direct += u.eval(x) * (-z * z / 2.0 + SQRT_2 * z * x - x * x / 2.0).exp() * w * hstep;
        }
        direct *= PI.powf(-0.25);
        assert!((bargmann_transform(&u, z, 60).unwrap() - direct).norm() < 1e-11);
    }

    #[test]
    fn xd_examples() {
        let (x, d) = xd_matrices(6);
        let h0 = HermiteExpansion::unit(0);
        let xh0 = x.apply(h0.coeffs());
        assert!((xh0.get(&MultiIndex::one(1)).re - 1.0 / SQRT_2).abs() < 1e-15);
        let rule = hermite_rule(30).unwrap();
        let q = rule.integrate(|t| t * hermite_polys(1, t)[0] * hermite_polys(1, t)[1]);
        assert!((q - 1.0 / SQRT_2).abs() < 1e-14);
        assert_eq!(d.apply(h0.coeffs()).get(&MultiIndex::one(0)), c(0.0, 0.0));
        assert_eq!(x.conjugate_transpose().max_deviation_on_block(&x, 1).unwrap(), 0.0);
        assert_eq!(d.conjugate_transpose().max_deviation_on_block(&d, 1).unwrap(), 0.0);
        // [X, D] = i on interior vectors
        let comm = crate::truncated::commutator(&x, &d).unwrap();
        let i_id = TruncatedOperator::identity(1, 6).scale(c(0.0, 1.0));
        assert!(comm.max_deviation_on_block(&i_id, 2).unwrap() < 1e-14);
    }

    #[test]
    fn momentum_matches_finite_differences() {
        let (_, d) = xd_matrices(12);
        let u = HermiteExpansion::from_coeffs(&[c(0.2, 0.1), c(-0.4, 0.0), c(0.0, 0.3), c(0.5, -0.2), c(0.1, 0.1)]);
        let du = HermiteExpansion::from_coeff_vector(d.apply(u.coeffs())).unwrap();
        let h = 1e-4;
        for &x in &[-1.3, -0.2, 0.0, 0.7, 1.9] {
            let deriv = (u.eval(x + h) - u.eval(x - h)) / (2.0 * h);
            let fd = c(0.0, -1.0) * deriv;
            assert!((du.eval(x) - fd).norm() < 1e-7, "x = {x}");
        }
    }

    #[test]
    fn uncertainty_examples() {
        let r = verify_uncertainty(&HermiteExpansion::unit(0), 0.0, 0.0, 6).unwrap();
        assert!((r.x_norm * r.x_norm - 0.5).abs() < 1e-15);
        assert!((r.d_norm * r.d_norm - 0.5).abs() < 1e-15);
        assert!(r.shifted_product_slack.abs() < 1e-15);
        assert!(r.sum_of_squares_slack.abs() < 1e-15);
        let r = verify_uncertainty(&HermiteExpansion::unit(1), 0.0, 0.0, 6).unwrap();
        assert!((r.x_norm * r.x_norm - 1.5).abs() < 1e-14);
        assert!((r.x_norm * r.x_norm + r.d_norm * r.d_norm - 3.0).abs() < 1e-14);
        assert!(verify_uncertainty(&HermiteExpansion::unit(5), 0.0, 0.0, 6).is_err());

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let u = HermiteExpansion::random_interior(&mut rng, 16, 2);
            let a = rng.random_range(-1.0..1.0);
            let b = rng.random_range(-1.0..1.0);
            let r = verify_uncertainty(&u, a, b, 16).unwrap();
            assert!(r.shifted_product_slack >= -1e-12);
            assert!(r.sum_of_squares_slack >= -1e-12);
            assert!(r.am_gm_gap.abs() < 1e-12);
        }
    }

    #[test]
    fn unitarity_constant_is_pi() {
        let u = unitarity_constant(6, 24, 60).unwrap();
        assert!((u.constant - PI).abs() < 1e-9, "{u:?}");
        assert!(u.diagonal_spread < 1e-9 && u.off_diagonal < 1e-9, "{u:?}");
    }

    #[test]
    fn conjugation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let r = verify_conjugation(10, 20, 60, &mut rng).unwrap();
        assert!(r.annihilation_residual <= 1e-12, "{r:?}");
        assert!(r.creation_residual <= 1e-12, "{r:?}");
        assert!(r.equivalence_residual <= 1e-10, "{r:?}");
        assert!(r.fock_slack_min >= -1e-12);
        assert!(verify_conjugation(3, 1, 60, &mut rng).is_err());
    }
}
