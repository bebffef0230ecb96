use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::state::inner;
use super::{BasisDescriptor, StateVector, C64};
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const IMAG_TOL: f64 = 1e-10;
const VARIANCE_CLAMP_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "snake_case")]
pub enum OperatorRepr {
    Dense { matrix: DMatrix<C64> },
    /// Real values indexed by basis index (a cost function on labels).
    Diagonal { values: Vec<f64> },
    /// `I − |target⟩⟨target|`.
    ProjectorComplement { target: StateVector },
    /// `(1 − lambda) h0 + lambda h1`, kept unevaluated.
    ConvexPair {
        h0: Box<Operator>,
        h1: Box<Operator>,
        lambda: f64,
    },
}

/// Hermitian operator over a labelled basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOperator")]
pub struct Operator {
    basis: BasisDescriptor,
    repr: OperatorRepr,
}

#[derive(Deserialize)]
struct RawOperator {
    basis: BasisDescriptor,
    repr: OperatorRepr,
}

impl TryFrom<RawOperator> for Operator {
    type Error = Error;

    fn try_from(raw: RawOperator) -> Result<Self> {
        match raw.repr {
            OperatorRepr::Dense { matrix } => Operator::dense(raw.basis, matrix),
            OperatorRepr::Diagonal { values } => Operator::diagonal(raw.basis, values),
            OperatorRepr::ProjectorComplement { target } => {
                target.basis().ensure_same(&raw.basis)?;
                Ok(Operator::projector_complement(target))
            }
            OperatorRepr::ConvexPair { h0, h1, lambda } => {
                h0.basis.ensure_same(&raw.basis)?;
                build_interpolated(&h0, &h1, lambda)
            }
        }
    }
}

impl Operator {
    pub fn dense(basis: BasisDescriptor, matrix: DMatrix<C64>) -> Result<Self> {
        let d = basis.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let mut deviation = 0.0_f64;
        for j in 0..d {
            for i in 0..=j {
                let dev = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                deviation = deviation.max(dev);
            }
        }
        if !deviation.is_finite() || deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            basis,
            repr: OperatorRepr::Dense { matrix },
        })
    }

    pub fn diagonal(basis: BasisDescriptor, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericIntegrity("non-finite diagonal entry".into()));
        }
        Ok(Self {
            basis,
            repr: OperatorRepr::Diagonal { values },
        })
    }

    pub fn projector_complement(target: StateVector) -> Self {
        Self {
            basis: *target.basis(),
            repr: OperatorRepr::ProjectorComplement { target },
        }
    }

    pub fn identity(basis: BasisDescriptor) -> Self {
        Self {
            basis,
            repr: OperatorRepr::Diagonal {
                values: vec![1.0; basis.dim()],
            },
        }
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn repr(&self) -> &OperatorRepr {
        &self.repr
    }

    pub fn as_diagonal(&self) -> Option<&[f64]> {
        match &self.repr {
            OperatorRepr::Diagonal { values } => Some(values),
            _ => None,
        }
    }

    pub fn projector_target(&self) -> Option<&StateVector> {
        match &self.repr {
            OperatorRepr::ProjectorComplement { target } => Some(target),
            _ => None,
        }
    }

    /// `out = self · x`.
    pub fn apply_into(&self, x: &[C64], out: &mut [C64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        match &self.repr {
            OperatorRepr::Dense { matrix } => {
                out.fill(C64::new(0.0, 0.0));
                for (j, col) in matrix.column_iter().enumerate() {
                    let xj = x[j];
                    if xj == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for (o, m) in out.iter_mut().zip(col.iter()) {
                        *o += m * xj;
                    }
                }
            }
            OperatorRepr::Diagonal { values } => {
                for ((o, v), xi) in out.iter_mut().zip(values).zip(x) {
                    *o = xi * v;
                }
            }
            OperatorRepr::ProjectorComplement { target } => {
                let phi = target.amps();
                let ov = inner(phi, x);
                for ((o, p), xi) in out.iter_mut().zip(phi).zip(x) {
                    *o = xi - p * ov;
                }
            }
            OperatorRepr::ConvexPair { h0, h1, lambda } => {
                let mut tmp = vec![C64::new(0.0, 0.0); x.len()];
                h0.apply_into(x, out);
                h1.apply_into(x, &mut tmp);
                for (o, t) in out.iter_mut().zip(&tmp) {
                    *o = *o * (1.0 - lambda) + t * lambda;
                }
            }
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); x.len()];
        self.apply_into(x, &mut out);
        out
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.dim();
        match &self.repr {
            OperatorRepr::Dense { matrix } => matrix.clone(),
            OperatorRepr::Diagonal { values } => {
                DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    d,
                    values.iter().map(|&v| C64::new(v, 0.0)),
                ))
            }
            OperatorRepr::ProjectorComplement { target } => {
                let phi = target.amps();
                DMatrix::from_fn(d, d, |i, j| {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    C64::new(delta, 0.0) - phi[i] * phi[j].conj()
                })
            }
            OperatorRepr::ConvexPair { h0, h1, lambda } => {
                h0.to_dense() * C64::new(1.0 - lambda, 0.0) + h1.to_dense() * C64::new(*lambda, 0.0)
            }
        }
    }

    /// The operator squared, in the cheapest exact representation.
    pub fn squared(&self) -> Operator {
        let repr = match &self.repr {
            OperatorRepr::Diagonal { values } => OperatorRepr::Diagonal {
                values: values.iter().map(|v| v * v).collect(),
            },
            OperatorRepr::ProjectorComplement { .. } => self.repr.clone(),
            _ => {
                let m = self.to_dense();
                let sq = &m * &m;
                // The product of a Hermitian matrix with itself is Hermitian;
                // symmetrize away roundoff.
                OperatorRepr::Dense {
                    matrix: (&sq + sq.adjoint()) * C64::new(0.5, 0.0),
                }
            }
        };
        Operator {
            basis: self.basis,
            repr,
        }
    }

    /// Cheap upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        match &self.repr {
            OperatorRepr::Dense { matrix } => {
                let frob = matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let row_sum = matrix
                    .row_iter()
                    .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
                    .fold(0.0, f64::max);
                frob.min(row_sum)
            }
            OperatorRepr::Diagonal { values } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
            OperatorRepr::ProjectorComplement { .. } => 1.0,
            OperatorRepr::ConvexPair { h0, h1, lambda } => {
                (1.0 - lambda) * h0.norm_bound() + lambda * h1.norm_bound()
            }
        }
    }
}

/// Lazy `(1 − λ) h0 + λ h1`.
pub fn build_interpolated(h0: &Operator, h1: &Operator, lambda: f64) -> Result<Operator> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "interpolation parameter {lambda} outside [0, 1]"
        )));
    }
    h0.basis.ensure_same(&h1.basis)?;
    Ok(Operator {
        basis: h0.basis,
        repr: OperatorRepr::ConvexPair {
            h0: Box::new(h0.clone()),
            h1: Box::new(h1.clone()),
            lambda,
        },
    })
}

/// Raw `⟨ψ|op|ψ⟩` together with `op|ψ⟩`.
fn bracket(op: &Operator, psi: &StateVector) -> Result<(f64, Vec<C64>)> {
    op.basis.ensure_same(psi.basis())?;
    let hpsi = op.apply(psi.amps());
    let raw = inner(psi.amps(), &hpsi);
    if !raw.re.is_finite() || raw.im.abs() >= IMAG_TOL {
        return Err(Error::NumericIntegrity(format!(
            "expectation value has imaginary part {:e}",
            raw.im
        )));
    }
    Ok((raw.re, hpsi))
}

/// `⟨ψ|op|ψ⟩`.
pub fn expectation(op: &Operator, psi: &StateVector) -> Result<f64> {
    bracket(op, psi).map(|(e, _)| e)
}

/// Standard deviation `sqrt(⟨op²⟩ − ⟨op⟩²)` of `op` in `ψ`, with
/// `⟨op²⟩ = ‖op ψ‖²`.
pub fn uncertainty(op: &Operator, psi: &StateVector) -> Result<f64> {
    let (mean, hpsi) = bracket(op, psi)?;
    let second: f64 = hpsi.iter().map(|z| z.norm_sqr()).sum();
    let var = second - mean * mean;
    if var < -VARIANCE_CLAMP_TOL {
        return Err(Error::NumericIntegrity(format!(
            "negative variance {var:e} beyond roundoff"
        )));
    }
    Ok(var.max(0.0).sqrt())
}
