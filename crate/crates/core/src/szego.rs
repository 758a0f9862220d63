//! Bergman kernels `K_{tau,kappa,l}` and the Szego kernel of the model
//! domain `Im z > kappa |z'|^2 + Re(l z'^2)` in C^2.
//!
//! The numeric kernel is the `tau`-integral of `K_{tau,kappa,l}(z', w')`
//! against `exp(-2 pi i tau (conj(w) - z))`. Integrating the literal
//! `K = 4 tau exp(...)` gives `1 / (pi^2 B^2)`, while the closed form has
//! `kappa / (pi^2 B^2)`; [`TauKernelConvention`] selects which prefactor
//! the numeric route uses.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::basis::eval_basis;
use crate::error::{FockError, Result};
use crate::index::MultiIndex;
use crate::quadrature::{semi_infinite_integral_with, DEFAULT_LAGUERRE};
use crate::space::SpaceParams;

/// A point `(z', z)` of C^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub zprime: C64,
    pub z: C64,
}

impl SurfacePoint {
    pub fn new(zprime: C64, z: C64) -> Self {
        SurfacePoint { zprime, z }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelDomain {
    pub kappa: f64,
    pub l: C64,
}

impl ModelDomain {
    pub fn new(kappa: f64, l: C64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) || !l.re.is_finite() || !l.im.is_finite() {
            return Err(FockError::InvalidParams(format!("model domain needs kappa > 0, got {kappa}")));
        }
        Ok(ModelDomain { kappa, l })
    }

    /// `Im z - kappa |z'|^2 - Re(l z'^2)`.
    pub fn margin(&self, p: &SurfacePoint) -> f64 {
        p.z.im - self.kappa * p.zprime.norm_sqr() - (self.l * p.zprime * p.zprime).re
    }
}

/// Membership margin and whether it is strictly positive.
pub fn in_domain(p: &SurfacePoint, d: &ModelDomain) -> (f64, bool) {
    let m = d.margin(p);
    (m, m > 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauKernelConvention {
    /// `4 tau exp(-2 pi tau l (z^2 + conj(w)^2) + 4 pi tau kappa z conj(w))`.
    #[default]
    Printed,
    /// The printed kernel times `kappa`.
    KappaCorrected,
}

pub fn kernel_tau(tau: f64, kappa: f64, l: C64, z: C64, w: C64) -> C64 {
    kernel_tau_with(tau, kappa, l, z, w, TauKernelConvention::Printed)
}

pub fn kernel_tau_with(tau: f64, kappa: f64, l: C64, z: C64, w: C64, convention: TauKernelConvention) -> C64 {
    let wb = w.conj();
    let k = 4.0 * tau * (-2.0 * PI * tau * l * (z * z + wb * wb) + 4.0 * PI * tau * kappa * z * wb).exp();
    match convention {
        TauKernelConvention::Printed => k,
        TauKernelConvention::KappaCorrected => k * kappa,
    }
}

/// One-variable space whose printed-basis series reproduces the shape of
/// `K_{tau,kappa,l}`: weight `exp(-4 pi tau (kappa |z|^2 - Re(l z^2)))`.
pub fn tau_series_space(tau: f64, kappa: f64, l: C64) -> Result<SpaceParams> {
    SpaceParams::h_kappa_l(4.0 * PI * tau * kappa, 4.0 * PI * tau * l)
}

/// `sum_{k <= terms} psi_k(z) conj(psi_k(w))` over the basis of `space`.
pub fn basis_series(space: &SpaceParams, z: C64, w: C64, terms: usize) -> C64 {
    (0..=terms)
        .map(|k| eval_basis(space, &MultiIndex::one(k), &[z]) * eval_basis(space, &MultiIndex::one(k), &[w]).conj())
        .sum()
}

fn check_margins(p: &SurfacePoint, q: &SurfacePoint, d: &ModelDomain) -> Result<(f64, f64)> {
    let (mp, mq) = (d.margin(p), d.margin(q));
    if !(mp > 0.0 && mq > 0.0) {
        return Err(FockError::InvalidParams(format!(
            "points must lie strictly inside the domain (margins {mp:.3e}, {mq:.3e})"
        )));
    }
    Ok((mp, mq))
}

/// `int_0^inf K_tau(z', w') exp(-2 pi i tau (conj(w) - z)) d tau` on `DEFAULT_LAGUERRE` nodes.
pub fn szego_numeric(p: &SurfacePoint, q: &SurfacePoint, d: &ModelDomain) -> Result<C64> {
    szego_numeric_with(p, q, d, TauKernelConvention::Printed, DEFAULT_LAGUERRE)
}

/// [`szego_numeric`] with an explicit prefactor convention and node count.
/// The Laguerre scale is `2 pi (margin(p) + margin(q))`.
pub fn szego_numeric_with(
    p: &SurfacePoint,
    q: &SurfacePoint,
    d: &ModelDomain,
    convention: TauKernelConvention,
    nodes: usize,
) -> Result<C64> {
    let (mp, mq) = check_margins(p, q, d)?;
    let decay = 2.0 * PI * (mp + mq);
    let phase = q.z.conj() - p.z;
    let i = C64::new(0.0, 1.0);
    semi_infinite_integral_with(
        |tau| kernel_tau_with(tau, d.kappa, d.l, p.zprime, q.zprime, convention) * (-2.0 * PI * i * tau * phase).exp(),
        decay,
        nodes,
    )
}

/// `i (conj(w) - z) - 2 kappa z' conj(w') + l (z'^2 + conj(w')^2)`.
pub fn szego_bracket(p: &SurfacePoint, q: &SurfacePoint, d: &ModelDomain) -> C64 {
    let i = C64::new(0.0, 1.0);
    let wpb = q.zprime.conj();
    i * (q.z.conj() - p.z) - 2.0 * d.kappa * p.zprime * wpb + d.l * (p.zprime * p.zprime + wpb * wpb)
}

/// `kappa / pi^2 * bracket^{-2}`.
pub fn szego_closed(p: &SurfacePoint, q: &SurfacePoint, d: &ModelDomain) -> Result<C64> {
    let b = szego_bracket(p, q, d);
    if b.norm() < 1e-14 {
        return Err(FockError::Singular(format!("bracket vanishes at p = {p:?}, q = {q:?}")));
    }
    Ok(d.kappa / (PI * PI) / (b * b))
}

/// Random pairs inside the domain with small `|z'|`, chosen so that
/// `Im z - kappa |z'|^2 - |l| |z'|^2 >= 0.5`: both points have positive
/// margin whichever sign the `Re(l z'^2)` term carries.
pub fn sample_pairs<R: Rng + ?Sized>(rng: &mut R, d: &ModelDomain, count: usize) -> Vec<(SurfacePoint, SurfacePoint)> {
    let point = |rng: &mut R| {
        let zp = C64::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
        let floor = (d.kappa + d.l.norm()) * zp.norm_sqr();
        let z = C64::new(rng.random_range(-0.5..0.5), floor + rng.random_range(0.5..2.0));
        SurfacePoint::new(zp, z)
    };
    (0..count).map(|_| (point(rng), point(rng))).collect()
}

/// Ratio `numeric / closed` over a set of pairs, with the largest relative
/// deviation from the first ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefactorReport {
    pub ratio: C64,
    pub spread: f64,
}

pub fn prefactor_ratio(pairs: &[(SurfacePoint, SurfacePoint)], d: &ModelDomain) -> Result<PrefactorReport> {
    let mut ratios = Vec::with_capacity(pairs.len());
    for (p, q) in pairs {
        ratios.push(szego_numeric(p, q, d)? / szego_closed(p, q, d)?);
    }
    let first = *ratios
        .first()
        .ok_or_else(|| FockError::InvalidParams("no point pairs".into()))?;
    let spread = ratios.iter().map(|r| (r - first).norm() / first.norm()).fold(0.0, f64::max);
    Ok(PrefactorReport { ratio: first, spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn c(a: f64, b: f64) -> C64 {
        C64::new(a, b)
    }

    #[test]
    fn domain_examples() {
        let d = ModelDomain::new(1.0, c(0.5, 0.0)).unwrap();
        assert_eq!(in_domain(&SurfacePoint::new(c(0.0, 0.0), c(0.0, 1.0)), &d), (1.0, true));
        assert_eq!(in_domain(&SurfacePoint::new(c(0.0, 0.0), c(0.0, 0.0)), &d), (0.0, false));
        let (m, inside) = in_domain(&SurfacePoint::new(c(1.0, 0.0), c(0.0, 2.0)), &d);
        assert!((m - 0.5).abs() < 1e-15 && inside);
        assert!(ModelDomain::new(0.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn kernel_tau_examples() {
        assert!((kernel_tau(0.7, 1.3, c(0.2, 0.1), c(0.0, 0.0), c(0.0, 0.0)) - 2.8).norm() < 1e-15);
        let (z, w) = (c(0.3, 0.1), c(-0.2, 0.4));
        let want = 4.0 * 0.5 * (4.0 * PI * 0.5 * z * w.conj()).exp();
        assert!((kernel_tau(0.5, 1.0, c(0.0, 0.0), z, w) - want).norm() < 1e-14);
        let k = kernel_tau_with(0.5, 2.0, c(0.1, 0.0), z, w, TauKernelConvention::KappaCorrected);
        assert!((k - 2.0 * kernel_tau(0.5, 2.0, c(0.1, 0.0), z, w)).norm() < 1e-14);
    }

    #[test]
    fn kernel_tau_series_oracle() {
        let (tau, kappa, l) = (0.3, 1.5, c(0.2, 0.0));
        let (z, w) = (c(0.2, 0.0), c(0.1, 0.1));
        let sp = tau_series_space(tau, kappa, l).unwrap();
        let series = basis_series(&sp, z, w, 40);
        let k = kernel_tau(tau, kappa, l, z, w);
        // printed basis series carries 1/pi, K carries 4 tau
        assert!((k / series - 4.0 * PI * tau).norm() < 1e-9);
        // the reproducing kernel is kappa' * series = kappa * K
        let repro = 4.0 * PI * tau * kappa * series;
        assert!((repro / k - kappa).norm() < 1e-9);

        // the space with weight exp(-4 pi tau (kappa|z|^2 + Re(l z^2))) has the opposite sign on l
        let literal = SpaceParams::h_tau_kappa_l(tau, kappa, l).unwrap();
        let other = basis_series(&literal, z, w, 40);
        assert!((k / other - 4.0 * PI * tau).norm() > 1e-3);
    }

    #[test]
    fn numeric_diagonal_example() {
        let p = SurfacePoint::new(c(0.0, 0.0), c(0.0, 1.0));
        for (kappa, l) in [(1.0, c(0.0, 0.0)), (2.0, c(0.3, -0.1)), (0.5, c(0.0, 0.2))] {
            let d = ModelDomain::new(kappa, l).unwrap();
            let v = szego_numeric(&p, &p, &d).unwrap();
            assert!((v - 1.0 / (4.0 * PI * PI)).norm() < 1e-12, "{v}");
            let cl = szego_closed(&p, &p, &d).unwrap();
            assert!((cl - kappa / (4.0 * PI * PI)).norm() < 1e-15);
        }
    }

    #[test]
    fn boundary_refused() {
        let d = ModelDomain::new(1.0, c(0.0, 0.0)).unwrap();
        let p = SurfacePoint::new(c(0.0, 0.0), c(0.0, 1.0));
        let b = SurfacePoint::new(c(1.0, 0.0), c(0.0, 1.0));
        assert!(szego_numeric(&p, &b, &d).is_err());
        assert!(szego_numeric(&b, &p, &d).is_err());
    }

    #[test]
    fn oracle_example() {
        let d = ModelDomain::new(1.0, c(0.1, 0.0)).unwrap();
        let p = SurfacePoint::new(c(0.3, 0.0), c(0.0, 2.0));
        let q = SurfacePoint::new(c(0.2, 0.0), c(0.0, 1.0));
        let n = szego_numeric(&p, &q, &d).unwrap();
        let cl = szego_closed(&p, &q, &d).unwrap();
        assert!((n - cl).norm() / cl.norm() < 1e-8);
    }

    #[test]
    fn ratio_is_one_over_kappa() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for (kappa, l) in [(1.0, c(0.0, 0.0)), (1.0, c(0.2, 0.0)), (2.0, c(0.0, 0.1))] {
            let d = ModelDomain::new(kappa, l).unwrap();
            let pairs = sample_pairs(&mut rng, &d, 10);
            let r = prefactor_ratio(&pairs, &d).unwrap();
            assert!(r.spread < 1e-7, "{r:?}");
            assert!((r.ratio - 1.0 / kappa).norm() < 1e-7, "{r:?}");
            // node refinement does not move the values
            for (p, q) in &pairs {
                let a = szego_numeric_with(p, q, &d, TauKernelConvention::Printed, 64).unwrap();
                let b = szego_numeric_with(p, q, &d, TauKernelConvention::Printed, 128).unwrap();
                assert!((a - b).norm() / a.norm() < 1e-9);
                let k = szego_numeric_with(p, q, &d, TauKernelConvention::KappaCorrected, 64).unwrap();
                assert!((k - szego_closed(p, q, &d).unwrap()).norm() / k.norm() < 1e-8);
            }
        }
    }

    #[test]
    fn closed_symmetry_real_l() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let d = ModelDomain::new(1.3, c(0.2, 0.0)).unwrap();
        for (p, q) in sample_pairs(&mut rng, &d, 20) {
            let a = szego_closed(&p, &q, &d).unwrap();
            let b = szego_closed(&q, &p, &d).unwrap();
            assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn closed_asymmetry_complex_l() {
        let d = ModelDomain::new(1.0, c(0.0, 0.3)).unwrap();
        let p = SurfacePoint::new(c(0.2, 0.1), c(0.1, 1.0));
        let q = SurfacePoint::new(c(-0.1, 0.25), c(-0.2, 1.5));
        let a = szego_closed(&p, &q, &d).unwrap();
        let b = szego_closed(&q, &p, &d).unwrap();
        assert!((a - b.conj()).norm() > 1e-4 * a.norm());
    }

    #[test]
    fn heisenberg_limit_and_scaling() {
        let d = ModelDomain::new(1.0, c(0.0, 0.0)).unwrap();
        let p = SurfacePoint::new(c(0.1, -0.2), c(0.3, 1.2));
        let q = SurfacePoint::new(c(-0.05, 0.1), c(-0.1, 0.8));
        let i = c(0.0, 1.0);
        let b = i * (q.z.conj() - p.z) - 2.0 * p.zprime * q.zprime.conj();
        let want = 1.0 / (PI * PI) / (b * b);
        assert!((szego_closed(&p, &q, &d).unwrap() - want).norm() < 1e-15 * want.norm().max(1.0));
        // homogeneity with z' = w' = 0
        let d2 = ModelDomain::new(1.7, c(0.2, 0.1)).unwrap();
        let p0 = SurfacePoint::new(c(0.0, 0.0), c(0.2, 1.0));
        let q0 = SurfacePoint::new(c(0.0, 0.0), c(-0.3, 2.0));
        let s = 3.0;
        let ps = SurfacePoint::new(c(0.0, 0.0), p0.z / s);
        let qs = SurfacePoint::new(c(0.0, 0.0), q0.z / s);
        let ratio = szego_closed(&ps, &qs, &d2).unwrap() / szego_closed(&p0, &q0, &d2).unwrap();
        assert!((ratio - s * s).norm() < 1e-12);
    }

    #[test]
    fn divergent_pair_inside_domain_refused() {
        // inside the domain with margin 0.05, but the integrand grows like exp(0.35 * 4 pi tau)
        let d = ModelDomain::new(1.0, c(0.2, 0.0)).unwrap();
        let p = SurfacePoint::new(c(0.0, 1.0), c(0.0, 0.85));
        assert!(in_domain(&p, &d).1);
        assert!(szego_bracket(&p, &p, &d).re < 0.0);
        assert!(matches!(szego_numeric(&p, &p, &d), Err(FockError::NonConvergent(_))));
    }

    #[test]
    fn singular_bracket() {
        let d = ModelDomain::new(1.0, c(0.0, 0.0)).unwrap();
        let p = SurfacePoint::new(c(0.0, 0.0), c(0.0, 0.0));
        assert!(matches!(szego_closed(&p, &p, &d), Err(FockError::Singular(_))));
    }
}
