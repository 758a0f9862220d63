//! Numerics for generalized Segal-Bargmann (Fock) spaces.
//!
//! Coefficient-space models of the annihilation and creation operators on
//! weighted spaces of entire functions, together with independent
//! quadrature oracles for every closed form: Gram matrices, reproducing
//! kernels, Berezin transforms and the Szego kernel of model hypersurfaces.

pub mod bargmann;
pub mod basis;
pub mod berezin;
pub mod error;
pub mod index;
pub mod operators;
pub mod quadrature;
pub mod space;
pub mod szego;
pub mod truncated;

pub use error::{FockError, Result};
pub use index::{box_position, enumerate_box, CoeffVector, InteriorMargin, MultiIndex};
pub use space::{validate_for_quadrature, weight_form, SpaceParams, WeightForm};
pub use truncated::{commutator, TruncatedOperator};

pub use num_complex::Complex64 as C64;
