use serde::{Deserialize, Serialize};

use crate::graph_tools::{binomial, colex_rank, colex_unrank};
use crate::{Error, Result};

/// Largest register (in qubits) any constructor accepts.
pub const MAX_FULL_REGISTER_QUBITS: usize = 20;

/// Largest basis dimension accepted anywhere in the crate.
pub const MAX_DIM: usize = 1 << MAX_FULL_REGISTER_QUBITS;

/// Shape of a basis. Labels are `u64` bit strings with bit `i` holding the
/// value of qubit `i`.
///
/// - `FullRegister`: index == label.
/// - `HammingSubspace`: index is the colexicographic rank of the weight-`k`
///   label (see [`crate::graph_tools::SubspaceIndex`]).
/// - `TensorAB`: index == label with register A in the high bits and
///   register B in the low `n_b` bits, i.e. `index = (a << n_b) | b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisKind {
    FullRegister { n: usize },
    HammingSubspace { n: usize, k: usize },
    TensorAB { n_a: usize, n_b: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBasis")]
pub struct BasisDescriptor {
    kind: BasisKind,
    dim: usize,
}

#[derive(Deserialize)]
struct RawBasis {
    kind: BasisKind,
    dim: usize,
}

impl TryFrom<RawBasis> for BasisDescriptor {
    type Error = Error;

    fn try_from(raw: RawBasis) -> Result<Self> {
        let basis = BasisDescriptor::new(raw.kind)?;
        if basis.dim != raw.dim {
            return Err(Error::DimensionMismatch {
                expected: basis.dim,
                found: raw.dim,
            });
        }
        Ok(basis)
    }
}

impl BasisDescriptor {
    pub fn new(kind: BasisKind) -> Result<Self> {
        let dim = match kind {
            BasisKind::FullRegister { n } => {
                if n == 0 || n > MAX_FULL_REGISTER_QUBITS {
                    return Err(Error::SizeCap {
                        what: format!("full register with {n} qubits"),
                        limit: MAX_FULL_REGISTER_QUBITS,
                    });
                }
                1usize << n
            }
            BasisKind::HammingSubspace { n, k } => {
                if k > n {
                    return Err(Error::InvalidParameter(format!(
                        "Hamming weight k = {k} exceeds n = {n}"
                    )));
                }
                if n > 63 {
                    return Err(Error::SizeCap {
                        what: format!("Hamming subspace over {n} qubits"),
                        limit: 63,
                    });
                }
                let dim = binomial(n, k);
                if dim > MAX_DIM as u64 {
                    return Err(Error::SizeCap {
                        what: format!("C({n},{k}) = {dim} basis states"),
                        limit: MAX_DIM,
                    });
                }
                dim as usize
            }
            BasisKind::TensorAB { n_a, n_b } => {
                let n = n_a + n_b;
                if n_a == 0 || n_b == 0 || n > MAX_FULL_REGISTER_QUBITS {
                    return Err(Error::SizeCap {
                        what: format!("tensor register with {n_a}+{n_b} qubits"),
                        limit: MAX_FULL_REGISTER_QUBITS,
                    });
                }
                1usize << n
            }
        };
        Ok(Self { kind, dim })
    }

    pub fn full_register(n: usize) -> Result<Self> {
        Self::new(BasisKind::FullRegister { n })
    }

    pub fn hamming_subspace(n: usize, k: usize) -> Result<Self> {
        Self::new(BasisKind::HammingSubspace { n, k })
    }

    pub fn tensor_ab(n_a: usize, n_b: usize) -> Result<Self> {
        Self::new(BasisKind::TensorAB { n_a, n_b })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total number of qubits the labels range over.
    pub fn qubits(&self) -> usize {
        match self.kind {
            BasisKind::FullRegister { n } | BasisKind::HammingSubspace { n, .. } => n,
            BasisKind::TensorAB { n_a, n_b } => n_a + n_b,
        }
    }

    /// Bit-string label of basis index `index`.
    pub fn label(&self, index: usize) -> u64 {
        debug_assert!(index < self.dim);
        match self.kind {
            BasisKind::HammingSubspace { n, k } => colex_unrank(n, k, index as u64),
            _ => index as u64,
        }
    }

    /// Basis index of `label`, if the label belongs to this basis.
    pub fn index_of(&self, label: u64) -> Option<usize> {
        match self.kind {
            BasisKind::HammingSubspace { n, k } => {
                if label >> n != 0 || label.count_ones() as usize != k {
                    return None;
                }
                Some(colex_rank(label) as usize)
            }
            _ => ((label as u128) < self.dim as u128).then_some(label as usize),
        }
    }

    pub(crate) fn ensure_same(&self, other: &BasisDescriptor) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.kind != other.kind {
            return Err(Error::BasisMismatch);
        }
        Ok(())
    }
}
