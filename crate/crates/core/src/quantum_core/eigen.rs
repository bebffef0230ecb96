use nalgebra::{DMatrix, SymmetricEigen};

use super::state::inner;
use super::{Operator, OperatorRepr, StateVector, C64};
use crate::{Error, Result};

/// Largest dimension handed to the dense Hermitian eigensolver.
pub const MAX_DENSE_DIM: usize = 4096;

const DEGENERACY_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-10;
const EIGEN_EPS: f64 = f64::EPSILON;
const EIGEN_MAX_ITER: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
}

/// Lowest eigenpair of `op`. Degenerate ground spaces resolve to the lowest
/// basis index with weight in the ground space.
pub fn ground_state(op: &Operator) -> Result<GroundState> {
    ground_state_near(op, None)
}

/// Lowest eigenpair of `op`.
///
/// When the ground space is degenerate (splitting below 1e-12) the returned
/// vector is the normalized projection of `reference` onto it, i.e. the
/// ground state of maximal overlap with `reference`. Without a usable
/// reference the projection of the lowest basis vector with nonzero weight
/// in the ground space is used instead.
///
/// The global phase makes the first largest-magnitude amplitude real and
/// positive.
pub fn ground_state_near(op: &Operator, reference: Option<&StateVector>) -> Result<GroundState> {
    if let Some(r) = reference {
        op.basis().ensure_same(r.basis())?;
    }
    let scale = op.norm_bound().max(1.0);
    let (energy, mut amps) = match op.repr() {
        OperatorRepr::Diagonal { values } => {
            let e0 = values.iter().copied().fold(f64::INFINITY, f64::min);
            let ground: Vec<usize> = (0..values.len())
                .filter(|&i| values[i] - e0 <= DEGENERACY_TOL * scale)
                .collect();
            let basis_vecs: Vec<Vec<C64>> = ground
                .iter()
                .map(|&i| unit_vector(values.len(), i))
                .collect();
            (e0, select_in_span(&basis_vecs, reference))
        }
        OperatorRepr::ProjectorComplement { target } if target.dim() > 1 => {
            (0.0, target.amps().to_vec())
        }
        _ => {
            let (evals, evecs) = hermitian_eigen(op)?;
            let e0 = evals[0];
            let span: Vec<Vec<C64>> = evals
                .iter()
                .take_while(|&&e| e - e0 <= DEGENERACY_TOL * scale)
                .enumerate()
                .map(|(j, _)| evecs.column(j).iter().copied().collect())
                .collect();
            (e0, select_in_span(&span, reference))
        }
    };
    fix_phase(&mut amps);
    let state = StateVector::normalized(*op.basis(), amps)?;

    let hv = op.apply(state.amps());
    let residual = hv
        .iter()
        .zip(state.amps())
        .map(|(h, v)| (h - v * energy).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual.is_nan() || residual >= RESIDUAL_TOL * scale {
        return Err(Error::NumericIntegrity(format!(
            "ground-state residual {residual:e} exceeds tolerance"
        )));
    }
    Ok(GroundState { energy, state })
}

/// The `count` smallest eigenvalues of `op` in ascending order.
pub fn lowest_eigenvalues(op: &Operator, count: usize) -> Result<Vec<f64>> {
    let mut evals = match op.repr() {
        OperatorRepr::Diagonal { values } => {
            let mut v = values.clone();
            v.sort_by(f64::total_cmp);
            v
        }
        _ => {
            check_dense_cap(op.dim())?;
            hermitian_eigenvalues(op.to_dense())?
        }
    };
    evals.truncate(count);
    Ok(evals)
}

/// Full eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub(crate) fn hermitian_eigen(op: &Operator) -> Result<(Vec<f64>, DMatrix<C64>)> {
    check_dense_cap(op.dim())?;
    hermitian_eigen_matrix(op.to_dense())
}

pub(crate) fn hermitian_eigen_matrix(m: DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    check_dense_cap(m.nrows())?;
    let eig = SymmetricEigen::try_new(m, EIGEN_EPS, EIGEN_MAX_ITER).ok_or(Error::EigenNonConvergence)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    if eig.eigenvalues.iter().any(|e| !e.is_finite()) {
        return Err(Error::EigenNonConvergence);
    }
    let evals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let evecs = eig.eigenvectors.select_columns(order.iter());
    Ok((evals, evecs))
}

/// Ascending eigenvalues of a dense Hermitian matrix.
pub(crate) fn hermitian_eigenvalues(m: DMatrix<C64>) -> Result<Vec<f64>> {
    check_dense_cap(m.nrows())?;
    let mut evals: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    if evals.iter().any(|e| !e.is_finite()) {
        return Err(Error::EigenNonConvergence);
    }
    evals.sort_by(f64::total_cmp);
    Ok(evals)
}

pub(crate) fn check_dense_cap(dim: usize) -> Result<()> {
    if dim > MAX_DENSE_DIM {
        return Err(Error::SizeCap {
            what: format!("dense eigensolve of dimension {dim}"),
            limit: MAX_DENSE_DIM,
        });
    }
    Ok(())
}

fn unit_vector(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim];
    v[i] = C64::new(1.0, 0.0);
    v
}

/// Projection of `reference` (or of the first usable basis vector) onto the
/// span of the orthonormal vectors `span`.
fn select_in_span(span: &[Vec<C64>], reference: Option<&StateVector>) -> Vec<C64> {
    debug_assert!(!span.is_empty());
    if span.len() == 1 {
        return span[0].clone();
    }
    let project = |r: &[C64]| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); r.len()];
        for v in span {
            let c = inner(v, r);
            for (o, x) in out.iter_mut().zip(v) {
                *o += x * c;
            }
        }
        out
    };
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if let Some(r) = reference {
        let p = project(r.amps());
        if norm(&p) > 1e-8 {
            return p;
        }
    }
    let dim = span[0].len();
    for i in 0..dim {
        let p = project(&unit_vector(dim, i));
        if norm(&p) > 1e-8 {
            return p;
        }
    }
    span[0].clone()
}

fn fix_phase(amps: &mut [C64]) {
    let max = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = amps
        .iter()
        .position(|a| a.norm() >= max - 1e-12)
        .expect("maximum exists");
    let phase = amps[pivot].conj() / amps[pivot].norm();
    for a in amps.iter_mut() {
        *a *= phase;
    }
}
