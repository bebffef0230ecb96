use serde::{Deserialize, Serialize};

use super::{BasisDescriptor, C64, NORM_TOL};
use crate::{Error, Result};

/// Unit-norm pure state over a labelled basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct StateVector {
    basis: BasisDescriptor,
    amps: Vec<C64>,
}

#[derive(Deserialize)]
struct RawState {
    basis: BasisDescriptor,
    amps: Vec<C64>,
}

impl TryFrom<RawState> for StateVector {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        StateVector::new(raw.basis, raw.amps)
    }
}

impl StateVector {
    /// Wraps `amps`, which must already be normalized to within 1e-12.
    pub fn new(basis: BasisDescriptor, amps: Vec<C64>) -> Result<Self> {
        check_len(&basis, amps.len())?;
        let norm_sqr = norm_sqr(&amps);
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { basis, amps })
    }

    /// Normalizes `amps` before wrapping them.
    pub fn normalized(basis: BasisDescriptor, mut amps: Vec<C64>) -> Result<Self> {
        check_len(&basis, amps.len())?;
        let norm = norm_sqr(&amps).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(Self { basis, amps })
    }

    pub fn from_real(basis: BasisDescriptor, amps: &[f64]) -> Result<Self> {
        Self::normalized(basis, amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis_state(basis: BasisDescriptor, index: usize) -> Result<Self> {
        if index >= basis.dim() {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {}",
                basis.dim()
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); basis.dim()];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { basis, amps })
    }

    /// Uniform superposition over the given basis indices.
    pub fn uniform_over(basis: BasisDescriptor, indices: &[usize]) -> Result<Self> {
        let mut amps = vec![C64::new(0.0, 0.0); basis.dim()];
        for &i in indices {
            if i >= basis.dim() {
                return Err(Error::InvalidParameter(format!("basis index {i} out of range")));
            }
            amps[i] = C64::new(1.0, 0.0);
        }
        Self::normalized(basis, amps)
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.basis.ensure_same(&other.basis)?;
        Ok(inner(&self.amps, &other.amps))
    }
}

fn check_len(basis: &BasisDescriptor, len: usize) -> Result<()> {
    if len != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: len,
        });
    }
    Ok(())
}

pub(crate) fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// Conjugate-linear in the first argument.
pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|⟨a|b⟩|²`, clamped to `[0, 1]`.
pub fn overlap_sq(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}

/// Bures angle `arccos |⟨a|b⟩|` in `[0, π/2]`.
///
/// Evaluated as `atan2(‖b − a⟨a|b⟩‖, |⟨a|b⟩|)`, which equals the arccos form
/// but keeps full relative accuracy for nearly parallel states.
pub fn bures_angle(a: &StateVector, b: &StateVector) -> Result<f64> {
    a.basis.ensure_same(&b.basis)?;
    let (cos, sin) = cos_sin_angle(&a.amps, &b.amps);
    Ok(sin.atan2(cos))
}

/// `(|⟨a|b⟩|, ‖b − a⟨a|b⟩‖)` for unit vectors; both clamped to `[0, 1]`.
pub(crate) fn cos_sin_angle(a: &[C64], b: &[C64]) -> (f64, f64) {
    let ov = inner(a, b);
    let perp: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (y - x * ov).norm_sqr())
        .sum::<f64>()
        .sqrt();
    (ov.norm().clamp(0.0, 1.0), perp.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn qubit() -> BasisDescriptor {
        BasisDescriptor::full_register(1).unwrap()
    }

    #[test]
    fn rejects_unnormalized() {
        let err = StateVector::new(qubit(), vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(err, Err(Error::NotNormalized { .. })));
        let err = StateVector::new(qubit(), vec![C64::new(1.0, 0.0)]);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        assert!(StateVector::from_real(qubit(), &[0.0, 0.0]).is_err());
    }

    #[test]
    fn bures_examples() {
        let zero = StateVector::basis_state(qubit(), 0).unwrap();
        let one = StateVector::basis_state(qubit(), 1).unwrap();
        let plus = StateVector::from_real(qubit(), &[1.0, 1.0]).unwrap();
        assert_eq!(bures_angle(&zero, &zero).unwrap(), 0.0);
        assert!((bures_angle(&zero, &one).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((bures_angle(&plus, &zero).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((overlap_sq(&plus, &plus).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let a = StateVector::basis_state(qubit(), 0).unwrap();
        let b = StateVector::basis_state(BasisDescriptor::full_register(2).unwrap(), 0).unwrap();
        assert!(overlap_sq(&a, &b).is_err());
        let h = BasisDescriptor::hamming_subspace(2, 1).unwrap();
        let c = StateVector::basis_state(h, 0).unwrap();
        assert!(matches!(bures_angle(&a, &c), Err(Error::BasisMismatch)));
    }
}
