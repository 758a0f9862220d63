//! Gaussian quadrature oracles.
//!
//! One-dimensional rules come from the Jacobi matrix of the orthonormal
//! three-term recurrence (Golub-Welsch), followed by a Newton polish of
//! each node and Christoffel weights `1 / sum_k p_k(x)^2`. The Christoffel
//! form keeps full relative accuracy in the tiny tail weights, which matter
//! once the integrand grows like a Gaussian of its own.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{FockError, Result};
use crate::space::{to_complex, weight_form, SpaceParams, WeightForm};

/// Default points per axis for Gaussian inner products.
pub const DEFAULT_M: usize = 20;
/// Default Gauss-Laguerre order on the half line.
pub const DEFAULT_LAGUERRE: usize = 64;
/// Default radius x angle points for disk integrals.
pub const DEFAULT_DISK_M: usize = 64;

/// One-dimensional Gauss rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Orthonormal recurrence `b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1}`.
struct Recurrence {
    p0: f64,
    coeffs: fn(usize) -> (f64, f64),
}

impl Recurrence {
    /// `(p_m(x), p_m'(x), sum_{k<m} p_k(x)^2)`.
    fn eval(&self, m: usize, x: f64) -> (f64, f64, f64) {
        let (mut p_prev, mut p) = (0.0, self.p0);
        let (mut d_prev, mut d) = (0.0, 0.0);
        let mut sum_sq = 0.0;
        for k in 0..m {
            sum_sq += p * p;
            let (a, b) = (self.coeffs)(k);
            let (_, b_next) = (self.coeffs)(k + 1);
            let p_next = ((x - a) * p - b * p_prev) / b_next;
            let d_next = (p + (x - a) * d - b * d_prev) / b_next;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
        }
        (p, d, sum_sq)
    }

    fn rule(&self, m: usize) -> Rule1D {
        let mut jacobi = DMatrix::<f64>::zeros(m, m);
        for k in 0..m {
            jacobi[(k, k)] = (self.coeffs)(k).0;
            if k + 1 < m {
                let b = (self.coeffs)(k + 1).1;
                jacobi[(k, k + 1)] = b;
                jacobi[(k + 1, k)] = b;
            }
        }
        let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        guesses.sort_by(f64::total_cmp);

        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for x0 in guesses {
            let mut x = x0;
            for _ in 0..4 {
                let (p, d, _) = self.eval(m, x);
                if d == 0.0 || !d.is_finite() {
                    break;
                }
                let step = p / d;
                x -= step;
                if step.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, _, sum_sq) = self.eval(m, x);
            nodes.push(x);
            weights.push(1.0 / sum_sq);
        }
        Rule1D { nodes, weights }
    }
}

fn hermite_coeffs(k: usize) -> (f64, f64) {
    (0.0, (k as f64 / 2.0).sqrt())
}

fn legendre_coeffs(k: usize) -> (f64, f64) {
    if k == 0 {
        return (0.0, 0.0);
    }
    let k = k as f64;
    (0.0, k / (4.0 * k * k - 1.0).sqrt())
}

fn laguerre_coeffs(k: usize) -> (f64, f64) {
    (2.0 * k as f64 + 1.0, k as f64)
}

/// Gauss-Hermite rule for `exp(-t^2)` on R; exact to degree `2m - 1`.
pub fn hermite_rule(m: usize) -> Result<Rule1D> {
    if m == 0 {
        return Err(FockError::InvalidParams("hermite rule needs m >= 1".into()));
    }
    Ok(Recurrence {
        p0: PI.powf(-0.25),
        coeffs: hermite_coeffs,
    }
    .rule(m))
}

/// Gauss-Legendre rule on `[-1, 1]`.
pub fn legendre_rule(m: usize) -> Result<Rule1D> {
    if m == 0 {
        return Err(FockError::InvalidParams("legendre rule needs m >= 1".into()));
    }
    Ok(Recurrence {
        p0: std::f64::consts::FRAC_1_SQRT_2,
        coeffs: legendre_coeffs,
    }
    .rule(m))
}

/// Gauss-Laguerre rule for `exp(-t)` on `[0, inf)`.
pub fn laguerre_rule(m: usize) -> Result<Rule1D> {
    if m == 0 {
        return Err(FockError::InvalidParams("laguerre rule needs m >= 1".into()));
    }
    Ok(Recurrence {
        p0: 1.0,
        coeffs: laguerre_coeffs,
    }
    .rule(m))
}

/// Tensor Gauss-Hermite rule for `exp(-x . Q x)` on R^d.
///
/// With `Q = V L V^T` the change of variables `x = V L^{-1/2} t` turns the
/// weight into `exp(-|t|^2)`; nodes are stored implicitly and the Jacobian
/// `det(L)^{-1/2}` is folded into every weight.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub dim: usize,
    pub form: WeightForm,
    axis: Rule1D,
    transform: DMatrix<f64>,
    jacobian: f64,
}

impl QuadratureRule {
    pub fn new(form: &WeightForm, m: usize) -> Result<Self> {
        form.require_positive_definite()?;
        let axis = hermite_rule(m)?;
        let dim = form.dim;
        let mut transform = form.eigenvectors.clone();
        for j in 0..dim {
            let s = form.eigenvalues[j].sqrt().recip();
            for i in 0..dim {
                transform[(i, j)] *= s;
            }
        }
        let jacobian = form.eigenvalues.iter().map(|l| l.sqrt().recip()).product();
        Ok(QuadratureRule {
            dim,
            form: form.clone(),
            axis,
            transform,
            jacobian,
        })
    }

    pub fn points_per_axis(&self) -> usize {
        self.axis.len()
    }

    pub fn len(&self) -> usize {
        self.axis.len().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis_indices(&self, mut i: usize) -> [usize; 4] {
        let m = self.axis.len();
        let mut idx = [0usize; 4];
        for k in (0..self.dim).rev() {
            idx[k] = i % m;
            i /= m;
        }
        idx
    }

    fn node_from_axes(&self, idx: &[usize; 4]) -> ([f64; 4], f64) {
        let mut t = [0.0; 4];
        let mut w = self.jacobian;
        for k in 0..self.dim {
            t[k] = self.axis.nodes[idx[k]];
            w *= self.axis.weights[idx[k]];
        }
        let mut x = [0.0; 4];
        for (i, xi) in x.iter_mut().enumerate().take(self.dim) {
            *xi = (0..self.dim).map(|j| self.transform[(i, j)] * t[j]).sum();
        }
        (x, w)
    }

    /// Node `i` in the original coordinates and its weight.
    pub fn node(&self, i: usize) -> (Vec<f64>, f64) {
        let (x, w) = self.node_from_axes(&self.axis_indices(i));
        (x[..self.dim].to_vec(), w)
    }

    /// `sum_i W_i f(x_i)`, approximating `int f(x) exp(-x.Qx) dx`.
    pub fn integrate<F>(&self, f: F) -> C64
    where
        F: Fn(&[f64]) -> C64 + Sync,
    {
        self.accumulate(1, |x, out| out[0] = f(x))[0]
    }

    /// Weighted sums of `k` integrands evaluated together at every node.
    ///
    /// Chunks follow the first axis and are summed in a fixed order, so the
    /// result does not depend on thread scheduling.
    pub fn accumulate<F>(&self, k: usize, f: F) -> Vec<C64>
    where
        F: Fn(&[f64], &mut [C64]) + Sync,
    {
        let m = self.axis.len();
        let per_chunk = self.len() / m;
        let partials: Vec<Vec<C64>> = (0..m)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![C64::new(0.0, 0.0); k];
                let mut buf = vec![C64::new(0.0, 0.0); k];
                for i in c * per_chunk..(c + 1) * per_chunk {
                    let (x, w) = self.node_from_axes(&self.axis_indices(i));
                    f(&x[..self.dim], &mut buf);
                    for (a, b) in acc.iter_mut().zip(&buf) {
                        *a += b * w;
                    }
                }
                acc
            })
            .collect();
        let mut total = vec![C64::new(0.0, 0.0); k];
        for p in partials {
            for (t, v) in total.iter_mut().zip(p) {
                *t += v;
            }
        }
        total
    }

    /// Matrix of `sum_i W_i L_a(x_i) conj(R_b(x_i))`.
    pub fn outer<FL, FR>(&self, nl: usize, left: FL, nr: usize, right: FR) -> DMatrix<C64>
    where
        FL: Fn(&[f64], &mut [C64]) + Sync,
        FR: Fn(&[f64], &mut [C64]) + Sync,
    {
        let m = self.axis.len();
        let per_chunk = self.len() / m;
        let partials: Vec<DMatrix<C64>> = (0..m)
            .into_par_iter()
            .map(|c| {
                let mut acc = DMatrix::from_element(nl, nr, C64::new(0.0, 0.0));
                let mut lb = vec![C64::new(0.0, 0.0); nl];
                let mut rb = vec![C64::new(0.0, 0.0); nr];
                for i in c * per_chunk..(c + 1) * per_chunk {
                    let (x, w) = self.node_from_axes(&self.axis_indices(i));
                    left(&x[..self.dim], &mut lb);
                    right(&x[..self.dim], &mut rb);
                    for b in 0..nr {
                        let rc = rb[b].conj() * w;
                        for a in 0..nl {
                            acc[(a, b)] += lb[a] * rc;
                        }
                    }
                }
                acc
            })
            .collect();
        let mut total = DMatrix::from_element(nl, nr, C64::new(0.0, 0.0));
        for p in partials {
            total += p;
        }
        total
    }
}

/// Inner-product integrator for one of the weighted spaces.
///
/// The tensor rule is built on the rotation-invariant part `R` of the weight
/// form; the pluriharmonic remainder `exp(-x.(Q-R)x)` multiplies the
/// integrand. For basis-function pairs that remainder cancels the
/// `|exp(q(z)/2)|^2` factor of the basis, leaving a polynomial against a
/// Gaussian that the rule integrates exactly.
#[derive(Debug, Clone)]
pub struct SpaceIntegrator {
    pub params: SpaceParams,
    rule: QuadratureRule,
    remainder: WeightForm,
}

impl SpaceIntegrator {
    pub fn new(params: &SpaceParams, m: usize) -> Result<Self> {
        params.validate()?;
        let form = weight_form(params);
        form.require_positive_definite()?;
        let reference = form.hermitian_part();
        let remainder = WeightForm::from_matrix(&form.q - &reference.q);
        Ok(SpaceIntegrator {
            params: *params,
            rule: QuadratureRule::new(&reference, m)?,
            remainder,
        })
    }

    pub fn node_count(&self) -> usize {
        self.rule.len()
    }

    /// `int f(z) conj(g(z)) exp(-x.Qx) d lambda`.
    pub fn inner_product<F, G>(&self, f: F, g: G) -> C64
    where
        F: Fn(&[C64]) -> C64 + Sync,
        G: Fn(&[C64]) -> C64 + Sync,
    {
        self.rule.integrate(|x| {
            let z = to_complex(x);
            f(&z) * g(&z).conj() * (-self.remainder.exponent(x)).exp()
        })
    }

    /// `int f exp(-x.Qx) d lambda` for a single integrand.
    pub fn integral<F>(&self, f: F) -> C64
    where
        F: Fn(&[C64]) -> C64 + Sync,
    {
        self.rule
            .integrate(|x| f(&to_complex(x)) * (-self.remainder.exponent(x)).exp())
    }

    /// Matrix of inner products `(L_a, R_b)` for two function families.
    pub fn gram<FL, FR>(&self, nl: usize, left: FL, nr: usize, right: FR) -> DMatrix<C64>
    where
        FL: Fn(&[C64], &mut [C64]) + Sync,
        FR: Fn(&[C64], &mut [C64]) + Sync,
    {
        let rem = &self.remainder;
        self.rule.outer(
            nl,
            |x, out| {
                left(&to_complex(x), out);
                let s = (-rem.exponent(x)).exp();
                out.iter_mut().for_each(|v| *v *= s);
            },
            nr,
            |x, out| right(&to_complex(x), out),
        )
    }
}

/// `int f(z) conj(g(z)) exp(-x.Qx) d lambda(z)` over C^n.
pub fn gaussian_inner_product<F, G>(f: F, g: G, params: &SpaceParams, m: usize) -> Result<C64>
where
    F: Fn(&[C64]) -> C64 + Sync,
    G: Fn(&[C64]) -> C64 + Sync,
{
    Ok(SpaceIntegrator::new(params, m)?.inner_product(f, g))
}

/// Constant of the pointwise estimate `sup_K |f| <= C ||f||` at `z`:
/// `C = (pi r^2)^{-n} (int_{P(z,r)} exp(phi) d lambda)^{1/2}` with `phi`
/// the weight exponent and `P` the (poly)disk of radius `r` about `z`.
pub fn pointwise_bound_constant(params: &SpaceParams, z: &[C64], r: f64, m: usize) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(FockError::InvalidParams("disk radius must be positive".into()));
    }
    params.validate()?;
    let n = params.dim();
    if z.len() != n {
        return Err(FockError::DimensionMismatch {
            expected: n,
            got: z.len(),
        });
    }
    let form = weight_form(params);
    form.require_positive_definite()?;
    let gl = legendre_rule(m)?;
    // polar points of one disk: (offset, weight including the radial Jacobian)
    let mut disk = Vec::with_capacity(m * m);
    for (&u, &wu) in gl.nodes.iter().zip(&gl.weights) {
        let rho = 0.5 * r * (u + 1.0);
        for (&v, &wv) in gl.nodes.iter().zip(&gl.weights) {
            let theta = PI * (v + 1.0);
            let w = wu * 0.5 * r * wv * PI * rho;
            disk.push((C64::from_polar(rho, theta), w));
        }
    }
    let integral: f64 = if n == 1 {
        disk.iter()
            .map(|&(d, w)| {
                let p = z[0] + d;
                w * form.exponent(&[p.re, p.im]).exp()
            })
            .sum()
    } else {
        let partials: Vec<f64> = disk
            .par_iter()
            .map(|&(d1, w1)| {
                let p1 = z[0] + d1;
                disk.iter()
                    .map(|&(d2, w2)| {
                        let p2 = z[1] + d2;
                        w1 * w2 * form.exponent(&[p1.re, p1.im, p2.re, p2.im]).exp()
                    })
                    .sum::<f64>()
            })
            .collect();
        partials.iter().sum()
    };
    Ok((PI * r * r).powi(-(n as i32)) * integral.sqrt())
}

/// `int_0^inf h(t) dt` for `|h(t)| <= poly(t) exp(-decay t)`, by Gauss-Laguerre
/// in the rescaled variable `s = decay t`.
pub fn semi_infinite_integral<H>(h: H, decay: f64) -> Result<C64>
where
    H: Fn(f64) -> C64,
{
    semi_infinite_integral_with(h, decay, DEFAULT_LAGUERRE)
}

pub fn semi_infinite_integral_with<H>(h: H, decay: f64, nodes: usize) -> Result<C64>
where
    H: Fn(f64) -> C64,
{
    if !(decay > 0.0 && decay.is_finite()) {
        return Err(FockError::InvalidParams(format!(
            "decay rate must be positive, got {decay}"
        )));
    }
    // tail sanity: the integrand must shrink at roughly the stated rate
    let (t1, t2) = (20.0 / decay, 40.0 / decay);
    let (a1, a2) = (h(t1).norm(), h(t2).norm());
    if !a1.is_finite() || !a2.is_finite() {
        return Err(FockError::NonConvergent("integrand is not finite in the tail".into()));
    }
    if a2 > 0.0 {
        let rate = if a1 > 0.0 { (a1 / a2).ln() / (t2 - t1) } else { f64::NEG_INFINITY };
        if rate < 0.5 * decay {
            return Err(FockError::NonConvergent(format!(
                "integrand decays at rate {rate:.3e}, stated rate {decay:.3e}"
            )));
        }
    }
    let rule = laguerre_rule(nodes)?;
    let mut sum = C64::new(0.0, 0.0);
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let scale = (w.ln() + s).exp();
        sum += h(s / decay) * scale;
    }
    Ok(sum / decay)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceParams;

    #[test]
    fn hermite_small_rules() {
        let r = hermite_rule(1).unwrap();
        assert!(r.nodes[0].abs() < 1e-15);
        assert!((r.weights[0] - PI.sqrt()).abs() < 1e-14);
        let r = hermite_rule(2).unwrap();
        assert!((r.nodes[0] + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((r.nodes[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        for w in &r.weights {
            assert!((w - PI.sqrt() / 2.0).abs() < 1e-14);
        }
        assert!(hermite_rule(0).is_err());
    }

    #[test]
    fn hermite_moments_and_exactness() {
        for m in [2, 5, 20, 40, 80] {
            let r = hermite_rule(m).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert!((total - PI.sqrt()).abs() < 1e-13, "m = {m}");
            assert!((r.integrate(|t| t * t) - PI.sqrt() / 2.0).abs() < 1e-13);
            assert!(r.weights.iter().all(|&w| w > 0.0));
            // degree 2m-1 exactness: t^(2k) moments Gamma(k + 1/2)
            let mut gamma = PI.sqrt();
            for k in 0..m {
                let approx = r.integrate(|t| t.powi(2 * k as i32));
                assert!((approx - gamma).abs() <= 1e-12 * gamma, "m = {m}, k = {k}");
                gamma *= k as f64 + 0.5;
            }
        }
    }

    #[test]
    fn legendre_and_laguerre() {
        let r = legendre_rule(64).unwrap();
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!((r.integrate(|x| x.powi(10)) - 2.0 / 11.0).abs() < 1e-14);
        let r = laguerre_rule(64).unwrap();
        assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        // int t^5 e^-t = 120
        assert!((r.integrate(|t| t.powi(5)) - 120.0).abs() < 1e-9);
    }

    #[test]
    fn constant_in_segal_bargmann() {
        let p = SpaceParams::segal_bargmann(1).unwrap();
        for m in [1, 3, 20] {
            let v = gaussian_inner_product(|_| C64::new(1.0, 0.0), |_| C64::new(1.0, 0.0), &p, m).unwrap();
            assert!((v.re - PI).abs() < 1e-13 && v.im.abs() < 1e-15);
        }
    }

    #[test]
    fn weight_form_rule_moments() {
        // int x^2 exp(-x.Qx) over R^2 with Q = diag(1.5, 0.5): (1/(2*1.5)) pi/sqrt(0.75)
        let w = weight_form(&SpaceParams::h_beta(0.5).unwrap());
        let rule = QuadratureRule::new(&w, 20).unwrap();
        let v = rule.integrate(|x| C64::new(x[0] * x[0], 0.0));
        let exact = PI / 0.75f64.sqrt() / 3.0;
        assert!((v.re - exact).abs() < 1e-13);
    }

    #[test]
    fn degenerate_weight_refused() {
        let p = SpaceParams::h_beta(1.0).unwrap();
        match gaussian_inner_product(|_| C64::new(1.0, 0.0), |_| C64::new(1.0, 0.0), &p, 20) {
            Err(FockError::DegenerateWeight { eigenvalue }) => assert!(eigenvalue.abs() < 1e-12),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn pointwise_constant_segal_bargmann() {
        let sb = SpaceParams::segal_bargmann(1).unwrap();
        let origin = [C64::new(0.0, 0.0)];
        let c = pointwise_bound_constant(&sb, &origin, 1.0, DEFAULT_DISK_M).unwrap();
        let exact = (PI * (std::f64::consts::E - 1.0)).sqrt() / PI;
        assert!((c - exact).abs() < 1e-13, "{c} vs {exact}");
        let c0 = pointwise_bound_constant(&SpaceParams::h_beta(0.0).unwrap(), &origin, 1.0, 64).unwrap();
        assert!((c - c0).abs() < 1e-15);
        // moving the disk outward raises max phi and the constant
        let c1 = pointwise_bound_constant(&sb, &[C64::new(1.0, 0.0)], 1.0, 64).unwrap();
        assert!(c1 > c);
        assert!(pointwise_bound_constant(&sb, &origin, 0.0, 64).is_err());
        assert!(pointwise_bound_constant(&sb, &origin, -1.0, 64).is_err());
    }

    #[test]
    fn semi_infinite_examples() {
        let v = semi_infinite_integral(|t| C64::new((-t).exp(), 0.0), 1.0).unwrap();
        assert!((v.re - 1.0).abs() < 1e-13);
        let c = 4.0 * PI;
        let v = semi_infinite_integral(|t| C64::new(4.0 * t * (-c * t).exp(), 0.0), c).unwrap();
        assert!((v.re - 1.0 / (4.0 * PI * PI)).abs() < 1e-15);
        assert!(matches!(
            semi_infinite_integral(|t| C64::new(t * t, 0.0), 1.0),
            Err(FockError::NonConvergent(_))
        ));
        assert!(semi_infinite_integral(|t| C64::new((-t).exp(), 0.0), 0.0).is_err());
        assert!(semi_infinite_integral(|t| C64::new((-t).exp(), 0.0), -2.0).is_err());
    }

    #[test]
    fn semi_infinite_oscillatory_complex_rate() {
        // int 4 t exp(-c t) = 4 / c^2 for complex c with Re c >= decay
        for c in [C64::new(3.0, 1.5), C64::new(5.0, -4.0), C64::new(2.0, 0.0)] {
            let v = semi_infinite_integral(|t| 4.0 * t * (-c * t).exp(), c.re).unwrap();
            let exact = 4.0 / (c * c);
            assert!((v - exact).norm() <= 1e-9 * exact.norm(), "{c}: {v} vs {exact}");
        }
    }
}
