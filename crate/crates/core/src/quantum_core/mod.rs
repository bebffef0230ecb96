//! Basis-labelled complex state vectors and Hermitian operators.
//!
//! Everything here is immutable after construction. Dense matrices are
//! stored as full Hermitian `nalgebra` matrices.

mod basis;
pub(crate) mod eigen;
mod operator;
pub(crate) mod state;

use num_complex::Complex64;

pub use basis::{BasisDescriptor, BasisKind, MAX_DIM, MAX_FULL_REGISTER_QUBITS};
pub use eigen::{ground_state, ground_state_near, lowest_eigenvalues, GroundState, MAX_DENSE_DIM};
pub use operator::{build_interpolated, expectation, uncertainty, Operator, OperatorRepr};
pub use state::{bures_angle, overlap_sq, StateVector};

/// Complex amplitude type used throughout the crate.
pub type C64 = Complex64;

/// Normalization tolerance for [`StateVector`] construction.
pub const NORM_TOL: f64 = 1e-12;
