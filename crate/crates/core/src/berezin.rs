//! Reproducing kernels of the one-variable spaces `H_beta` and
//! `H_{kappa,l}`, and Berezin transforms of `a = d/dz`, `a*`, `ab`, `ba`
//! with `b` multiplication by `z`.
//!
//! Every numeric value here is an inner product `(T k_w, k_w)` computed by
//! quadrature, with `T k_w` obtained by exact differentiation of the
//! Gaussian form of `k_w`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::basis::{basis_norm_sq, kappa_l_form, Normalization};
use crate::error::{FockError, Result};
use crate::quadrature::SpaceIntegrator;
use crate::space::SpaceParams;

pub const DEFAULT_BEREZIN_M: usize = 24;

/// Which reproducing kernel and normalization to use.
///
/// With `AsPrinted` the kernel is `sum_k psi_k(z) conj(psi_k(w))` over the
/// printed basis; on `H_{kappa,l}` that is `1/kappa` times the reproducing
/// kernel. `UnitGram` divides by `gram_diagonal`, which is the analytic
/// squared basis norm unless replaced by a measured value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub space: SpaceParams,
    pub normalization: Normalization,
    pub gram_diagonal: f64,
}

impl KernelSpec {
    pub fn new(space: SpaceParams, normalization: Normalization) -> Result<Self> {
        space.validate()?;
        match space {
            SpaceParams::HBeta { .. } | SpaceParams::HKappaL { .. } => {}
            _ => {
                return Err(FockError::Unsupported(format!(
                    "Berezin kernels are defined on H_beta and H_kappa_l, not {}",
                    space.name()
                )))
            }
        }
        Ok(KernelSpec {
            space,
            normalization,
            gram_diagonal: basis_norm_sq(&space),
        })
    }

    /// Replace the analytic Gram diagonal by the quadrature value of `||psi_0||^2`.
    pub fn with_measured_diagonal(mut self, m: usize) -> Result<Self> {
        let integ = SpaceIntegrator::new(&self.space, m)?;
        let sp = self.space;
        let psi0 = move |z: &[C64]| crate::basis::eval_basis(&sp, &crate::index::MultiIndex::one(0), z);
        self.gram_diagonal = integ.inner_product(psi0, psi0).re;
        Ok(self)
    }

    fn kappa_l(&self) -> (f64, C64) {
        kappa_l_form(&self.space).expect("one-variable space")
    }

    fn scale(&self) -> f64 {
        match self.normalization {
            Normalization::AsPrinted => 1.0,
            Normalization::UnitGram => 1.0 / self.gram_diagonal,
        }
    }

    /// Kernel as the Gaussian `(coefficient, q2, q1)` in `z`: `c exp(q2 z^2 + q1 z)`.
    fn gaussian(&self, w: C64) -> (C64, C64, C64) {
        let (kappa, l) = self.kappa_l();
        let c = self.scale() / PI * (-0.5 * l.conj() * w.conj() * w.conj()).exp();
        (c, -0.5 * l, kappa * w.conj())
    }

    /// Hermitian kernel `K(z, w)`.
    pub fn kernel(&self, z: C64, w: C64) -> C64 {
        let (c, q2, q1) = self.gaussian(w);
        c * (q2 * z * z + q1 * z).exp()
    }

    /// `K(w, w)`, real and positive.
    pub fn diagonal(&self, w: C64) -> Result<f64> {
        let d = self.kernel(w, w);
        if !(d.re > 0.0 && d.re.is_finite()) || d.im.abs() > 1e-12 * d.re {
            return Err(FockError::Singular(format!("kernel diagonal {d} at w = {w}")));
        }
        Ok(d.re)
    }

    /// `k_w = K(., w) / sqrt(K(w, w))` in symbolic form.
    pub fn normalized_kernel_form(&self, w: C64) -> Result<GaussianPoly> {
        let (c, q2, q1) = self.gaussian(w);
        let d = self.diagonal(w)?;
        Ok(GaussianPoly {
            poly: vec![c / d.sqrt()],
            q2,
            q1,
        })
    }

    /// `z -> k_w(z)`.
    pub fn normalized_kernel(&self, w: C64) -> Result<impl Fn(C64) -> C64 + Sync + Send + Clone> {
        let g = self.normalized_kernel_form(w)?;
        Ok(move |z: C64| g.eval(z))
    }
}

/// The kernel formula exactly as displayed, `(1/pi) exp(-l (z^2 + conj(w)^2)/2 + kappa z conj(w))`.
///
/// For non-real `l` this is not Hermitian; [`KernelSpec::kernel`] carries
/// `conj(l)` on the `conj(w)^2` term instead.
pub fn kernel_printed(space: &SpaceParams, z: C64, w: C64) -> Result<C64> {
    let (kappa, l) = kappa_l_form(space)
        .ok_or_else(|| FockError::Unsupported(format!("no one-variable kernel for {}", space.name())))?;
    let wb = w.conj();
    Ok((-0.5 * l * (z * z + wb * wb) + kappa * z * wb).exp() / PI)
}

/// `p(z) exp(q2 z^2 + q1 z)` with `p` given by its coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPoly {
    pub poly: Vec<C64>,
    pub q2: C64,
    pub q1: C64,
}

impl GaussianPoly {
    pub fn eval(&self, z: C64) -> C64 {
        let p = self.poly.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
        p * (self.q2 * z * z + self.q1 * z).exp()
    }

    /// `d/dz`: `(p' + p (2 q2 z + q1)) exp(...)`.
    pub fn derivative(&self) -> GaussianPoly {
        let mut out = vec![C64::new(0.0, 0.0); self.poly.len() + 1];
        for (k, &c) in self.poly.iter().enumerate() {
            if k > 0 {
                out[k - 1] += c * k as f64;
            }
            out[k] += c * self.q1;
            out[k + 1] += c * 2.0 * self.q2;
        }
        GaussianPoly {
            poly: out,
            q2: self.q2,
            q1: self.q1,
        }
    }

    pub fn times_z(&self) -> GaussianPoly {
        let mut out = vec![C64::new(0.0, 0.0)];
        out.extend_from_slice(&self.poly);
        GaussianPoly {
            poly: out,
            q2: self.q2,
            q1: self.q1,
        }
    }

    pub fn scale(&self, s: C64) -> GaussianPoly {
        GaussianPoly {
            poly: self.poly.iter().map(|c| c * s).collect(),
            q2: self.q2,
            q1: self.q1,
        }
    }

    /// Sum of two forms sharing the same exponent.
    pub fn add(&self, other: &GaussianPoly) -> GaussianPoly {
        debug_assert!(self.q2 == other.q2 && self.q1 == other.q1);
        let n = self.poly.len().max(other.poly.len());
        let get = |p: &[C64], k: usize| p.get(k).copied().unwrap_or_default();
        GaussianPoly {
            poly: (0..n).map(|k| get(&self.poly, k) + get(&other.poly, k)).collect(),
            q2: self.q2,
            q1: self.q1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BerezinOp {
    A,
    AStar,
    AB,
    BA,
}

impl BerezinOp {
    pub const ALL: [BerezinOp; 4] = [BerezinOp::A, BerezinOp::AStar, BerezinOp::AB, BerezinOp::BA];

    pub fn name(&self) -> &'static str {
        match self {
            BerezinOp::A => "a",
            BerezinOp::AStar => "a*",
            BerezinOp::AB => "ab",
            BerezinOp::BA => "ba",
        }
    }
}

fn unsupported_products(spec: &KernelSpec, op: BerezinOp) -> Result<()> {
    if matches!(spec.space, SpaceParams::HKappaL { .. }) && matches!(op, BerezinOp::AB | BerezinOp::BA) {
        return Err(FockError::Unsupported(format!(
            "no closed form for the Berezin transform of {} on H_kappa_l",
            op.name()
        )));
    }
    Ok(())
}

/// Closed forms obtained from the reproducing property `(p K_w, K_w) = p(w) K(w, w)`.
///
/// On `H_beta`: `a~ = beta w + conj(w)`, `(ab)~ = 1 + beta w^2 + |w|^2`,
/// `(ba)~ = beta w^2 + |w|^2`. On `H_{kappa,l}`: `a~ = kappa conj(w) - l w`
/// times the kernel scale, i.e. `conj(w) - l w / kappa` for the printed basis.
/// `a*~` is always `conj(a~)`.
pub fn berezin_closed(op: BerezinOp, spec: &KernelSpec, w: C64) -> Result<C64> {
    unsupported_products(spec, op)?;
    let wb = w.conj();
    let one = C64::new(1.0, 0.0);
    let a = |spec: &KernelSpec| {
        let (kappa, l) = spec.kappa_l();
        // (a K_w, K_w) / K(w,w) = kappa conj(w) - l w; k_w has squared norm scale * kappa
        let norm = spec.scale() * kappa_norm_factor(spec);
        (kappa * wb - l * w) * norm
    };
    Ok(match op {
        BerezinOp::A => a(spec),
        BerezinOp::AStar => a(spec).conj(),
        BerezinOp::AB | BerezinOp::BA => {
            let SpaceParams::HBeta { beta } = spec.space else { unreachable!() };
            let base = beta * w * w + w * wb;
            if op == BerezinOp::AB {
                one + base
            } else {
                base
            }
        }
    })
}

/// `||k_w||^2 / scale`: the printed basis has `||psi||^2 = 1/kappa`.
fn kappa_norm_factor(spec: &KernelSpec) -> f64 {
    basis_norm_sq(&spec.space)
}

/// The closed forms exactly as displayed.
///
/// `(ab)~ = 1 + w^2 + |w|^2`, `(ba)~ = w^2 + |w|^2` on `H_beta`, and
/// `a~ = conj(w) exp(Re(l w^2)/2 - Re(l conj(w)^2)/2) - l w / kappa` on
/// `H_{kappa,l}`.
pub fn berezin_printed(op: BerezinOp, space: &SpaceParams, w: C64) -> Result<C64> {
    let wb = w.conj();
    let one = C64::new(1.0, 0.0);
    match (*space, op) {
        (SpaceParams::HBeta { beta }, BerezinOp::A) => Ok(beta * w + wb),
        (SpaceParams::HBeta { beta }, BerezinOp::AStar) => Ok((beta * w + wb).conj()),
        (SpaceParams::HBeta { .. }, BerezinOp::AB) => Ok(one + w * w + w * wb),
        (SpaceParams::HBeta { .. }, BerezinOp::BA) => Ok(w * w + w * wb),
        (SpaceParams::HKappaL { kappa, l }, BerezinOp::A | BerezinOp::AStar) => {
            let e = 0.5 * (l * w * w).re - 0.5 * (l * wb * wb).re;
            let v = wb * e.exp() - l * w / kappa;
            Ok(if op == BerezinOp::A { v } else { v.conj() })
        }
        (SpaceParams::HKappaL { .. }, _) => Err(FockError::Unsupported(format!(
            "no displayed Berezin transform of {} on H_kappa_l",
            op.name()
        ))),
        _ => Err(FockError::Unsupported(format!("no Berezin transform on {}", space.name()))),
    }
}

/// `(T k_w, k_w)` by quadrature with `m` nodes per real axis.
///
/// On `H_beta`, `a* k_w` is formed independently as
/// `beta a k_w + (1 - beta^2) z k_w`; on `H_{kappa,l}` the value is
/// `(k_w, a k_w)`. `beta = 1` has a degenerate weight and is refused.
pub fn berezin_numeric(op: BerezinOp, spec: &KernelSpec, w: C64, m: usize) -> Result<C64> {
    if let SpaceParams::HBeta { beta } = spec.space {
        if beta >= 1.0 {
            return Err(FockError::Unsupported(
                "beta = 1 has a degenerate weight; use berezin_closed".into(),
            ));
        }
    }
    let integ = SpaceIntegrator::new(&spec.space, m)?;
    let k = spec.normalized_kernel_form(w)?;
    let ak = k.derivative();
    let bk = k.times_z();
    let ip = |f: &GaussianPoly, g: &GaussianPoly| integ.inner_product(|z| f.eval(z[0]), |z| g.eval(z[0]));
    Ok(match op {
        BerezinOp::A => ip(&ak, &k),
        BerezinOp::AStar => match spec.space {
            SpaceParams::HBeta { beta } => {
                let a_star_k = ak.scale(C64::new(beta, 0.0)).add(&bk.scale(C64::new(1.0 - beta * beta, 0.0)));
                ip(&a_star_k, &k)
            }
            _ => ip(&k, &ak),
        },
        BerezinOp::AB => ip(&bk.derivative(), &k),
        BerezinOp::BA => ip(&ak.times_z(), &k),
    })
}
