//! Parameter records for the weighted spaces and their Gaussian weight forms.
//!
//! Every space here is a space of entire functions on C^n square integrable
//! against `exp(-x . Q x)` for a real symmetric form `Q` in the real
//! coordinates `(x1, y1, x2, y2)` with `z_j = x_j + i y_j`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{FockError, Result};

/// Smallest eigenvalue that still counts as positive definite.
pub const PD_TOLERANCE: f64 = 1e-10;

/// Which weighted space of entire functions is meant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceParams {
    /// `exp(-|z|^2)` on C^n, n in {1, 2}.
    SegalBargmann { n: usize },
    /// Two variables, weight `exp(-Re<Az,z> - |z|^2)` with `A = [[beta1, kappa], [kappa, beta2]]`.
    HA { beta1: f64, beta2: f64, kappa: f64 },
    /// One variable, weight `exp(-(1+beta) x^2 - (1-beta) y^2)`, `0 <= beta <= 1`.
    HBeta { beta: f64 },
    /// One variable, weight `exp(-kappa |z|^2 + Re(l z^2))`, `kappa > 0`.
    HKappaL { kappa: f64, l: C64 },
    /// One variable, weight `exp(-4 pi tau (kappa |z|^2 + Re(l z^2)))`, `tau, kappa > 0`.
    HTauKappaL { tau: f64, kappa: f64, l: C64 },
}

impl SpaceParams {
    pub fn segal_bargmann(n: usize) -> Result<Self> {
        SpaceParams::SegalBargmann { n }.validated()
    }

    pub fn h_a(beta1: f64, beta2: f64, kappa: f64) -> Result<Self> {
        SpaceParams::HA { beta1, beta2, kappa }.validated()
    }

    pub fn h_beta(beta: f64) -> Result<Self> {
        SpaceParams::HBeta { beta }.validated()
    }

    pub fn h_kappa_l(kappa: f64, l: C64) -> Result<Self> {
        SpaceParams::HKappaL { kappa, l }.validated()
    }

    pub fn h_tau_kappa_l(tau: f64, kappa: f64, l: C64) -> Result<Self> {
        SpaceParams::HTauKappaL { tau, kappa, l }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        let bad = |msg: &str| Err(FockError::InvalidParams(msg.to_string()));
        match *self {
            SpaceParams::SegalBargmann { n } if n == 1 || n == 2 => Ok(()),
            SpaceParams::SegalBargmann { .. } => bad("Segal-Bargmann dimension must be 1 or 2"),
            SpaceParams::HA { beta1, beta2, kappa } => {
                if finite(&[beta1, beta2, kappa]) {
                    Ok(())
                } else {
                    bad("H_A entries must be finite")
                }
            }
            SpaceParams::HBeta { beta } => {
                if (0.0..=1.0).contains(&beta) {
                    Ok(())
                } else {
                    bad("H_beta requires 0 <= beta <= 1")
                }
            }
            SpaceParams::HKappaL { kappa, l } => {
                if !finite(&[kappa, l.re, l.im]) || kappa <= 0.0 {
                    bad("H_{kappa,l} requires kappa > 0")
                } else {
                    Ok(())
                }
            }
            SpaceParams::HTauKappaL { tau, kappa, l } => {
                if !finite(&[tau, kappa, l.re, l.im]) || tau <= 0.0 || kappa <= 0.0 {
                    bad("H_{tau,kappa,l} requires tau > 0 and kappa > 0")
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Complex dimension n.
    pub fn dim(&self) -> usize {
        match *self {
            SpaceParams::SegalBargmann { n } => n,
            SpaceParams::HA { .. } => 2,
            _ => 1,
        }
    }

    /// Real dimension 2n.
    pub fn real_dim(&self) -> usize {
        2 * self.dim()
    }

    pub fn name(&self) -> String {
        match *self {
            SpaceParams::SegalBargmann { n } => format!("SegalBargmann(n={n})"),
            SpaceParams::HA { beta1, beta2, kappa } => {
                format!("H_A(beta1={beta1}, beta2={beta2}, kappa={kappa})")
            }
            SpaceParams::HBeta { beta } => format!("H_beta(beta={beta})"),
            SpaceParams::HKappaL { kappa, l } => format!("H_kappa_l(kappa={kappa}, l={l})"),
            SpaceParams::HTauKappaL { tau, kappa, l } => {
                format!("H_tau_kappa_l(tau={tau}, kappa={kappa}, l={l})")
            }
        }
    }
}

/// Real quadratic form `Q` of the weight `exp(-x . Q x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightForm {
    pub dim: usize,
    pub q: DMatrix<f64>,
    /// Eigenvalues of `q`, ascending.
    pub eigenvalues: DVector<f64>,
    /// Orthonormal eigenvectors as columns, matching `eigenvalues`.
    pub eigenvectors: DMatrix<f64>,
    pub positive_definite: bool,
}

impl WeightForm {
    pub fn from_matrix(q: DMatrix<f64>) -> Self {
        assert!(q.is_square());
        let q = (&q + q.transpose()) * 0.5;
        let dim = q.nrows();
        let eig = SymmetricEigen::new(q.clone());
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = DVector::from_iterator(dim, order.iter().map(|&i| eig.eigenvalues[i]));
        let eigenvectors = DMatrix::from_columns(
            &order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>(),
        );
        let positive_definite = eigenvalues[0] > PD_TOLERANCE;
        WeightForm {
            dim,
            q,
            eigenvalues,
            eigenvectors,
            positive_definite,
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `x . Q x`.
    pub fn exponent(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += x[i] * self.q[(i, j)] * x[j];
            }
        }
        s
    }

    /// Part of the form invariant under `z -> i z` in every coordinate.
    ///
    /// The remainder `Q - R` is the form of a pluriharmonic function
    /// `Re(q(z))`, exactly the factor that the basis functions of these
    /// spaces carry in `|psi|^2`.
    pub fn hermitian_part(&self) -> WeightForm {
        let n = self.dim / 2;
        let mut j = DMatrix::zeros(self.dim, self.dim);
        for k in 0..n {
            j[(2 * k, 2 * k + 1)] = -1.0;
            j[(2 * k + 1, 2 * k)] = 1.0;
        }
        let rotated = j.transpose() * &self.q * &j;
        WeightForm::from_matrix((&self.q + rotated) * 0.5)
    }

    pub fn require_positive_definite(&self) -> Result<()> {
        if self.positive_definite {
            Ok(())
        } else {
            Err(FockError::DegenerateWeight {
                eigenvalue: self.min_eigenvalue(),
            })
        }
    }
}

pub fn weight_form(params: &SpaceParams) -> WeightForm {
    let q = match *params {
        SpaceParams::SegalBargmann { n } => DMatrix::identity(2 * n, 2 * n),
        SpaceParams::HA { beta1, beta2, kappa } => {
            // Re(beta1 z1^2 + 2 kappa z1 z2 + beta2 z2^2) + |z|^2
            let mut q = DMatrix::from_diagonal(&DVector::from_vec(vec![
                1.0 + beta1,
                1.0 - beta1,
                1.0 + beta2,
                1.0 - beta2,
            ]));
            q[(0, 2)] = kappa;
            q[(2, 0)] = kappa;
            q[(1, 3)] = -kappa;
            q[(3, 1)] = -kappa;
            q
        }
        SpaceParams::HBeta { beta } => DMatrix::from_row_slice(2, 2, &[1.0 + beta, 0.0, 0.0, 1.0 - beta]),
        SpaceParams::HKappaL { kappa, l } => {
            // kappa |z|^2 - Re(l z^2)
            DMatrix::from_row_slice(2, 2, &[kappa - l.re, l.im, l.im, kappa + l.re])
        }
        SpaceParams::HTauKappaL { tau, kappa, l } => {
            // 4 pi tau (kappa |z|^2 + Re(l z^2))
            DMatrix::from_row_slice(2, 2, &[kappa + l.re, -l.im, -l.im, kappa - l.re]) * (4.0 * PI * tau)
        }
    };
    WeightForm::from_matrix(q)
}

/// Gate for every quadrature-based oracle.
pub fn validate_for_quadrature(params: &SpaceParams) -> bool {
    weight_form(params).positive_definite
}

/// `(x1, y1, x2, y2, ...)` to `(z1, z2, ...)`.
pub fn to_complex(x: &[f64]) -> Vec<C64> {
    x.chunks(2).map(|c| C64::new(c[0], c[1])).collect()
}

pub fn to_real(z: &[C64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}
