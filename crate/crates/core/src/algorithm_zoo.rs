//! Constructors for the adiabatic algorithms under study.
//!
//! Every constructor returns a [`Problem`] holding the driver `h0`, the
//! problem Hamiltonian `h1`, the initial state `phi0` (a ground state of
//! `h0`) and, when known in closed form, the target `phi1` (a ground state
//! of `h1`).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::graph_tools::{count_kcliques, cost_values, Graph, SubspaceIndex};
use crate::quantum_core::{
    expectation, BasisDescriptor, Operator, StateVector, C64, MAX_DENSE_DIM, MAX_FULL_REGISTER_QUBITS,
};
use crate::{Error, Result};

/// Register cap for Bernstein–Vazirani, whose driver is stored densely.
pub const MAX_BV_QUBITS: usize = 10;

const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

/// A bundled adiabatic instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProblem")]
pub struct Problem {
    name: String,
    basis: BasisDescriptor,
    h0: Operator,
    h1: Operator,
    phi0: StateVector,
    phi1: Option<StateVector>,
    meta: BTreeMap<String, Value>,
}

#[derive(Deserialize)]
struct RawProblem {
    name: String,
    basis: BasisDescriptor,
    h0: Operator,
    h1: Operator,
    phi0: StateVector,
    phi1: Option<StateVector>,
    #[serde(default)]
    meta: BTreeMap<String, Value>,
}

impl TryFrom<RawProblem> for Problem {
    type Error = Error;

    fn try_from(raw: RawProblem) -> Result<Self> {
        raw.basis.ensure_same(raw.h0.basis())?;
        Problem::new(raw.name, raw.h0, raw.h1, raw.phi0, raw.phi1, raw.meta)
    }
}

impl Problem {
    /// Assembles a problem, checking that the operands share a basis and
    /// that `phi0` (and `phi1`, if given) are eigenvectors of `h0` (`h1`).
    pub fn new(
        name: impl Into<String>,
        h0: Operator,
        h1: Operator,
        phi0: StateVector,
        phi1: Option<StateVector>,
        meta: BTreeMap<String, Value>,
    ) -> Result<Self> {
        let basis = *h0.basis();
        basis.ensure_same(h1.basis())?;
        basis.ensure_same(phi0.basis())?;
        check_eigenvector(&h0, &phi0, "phi0 of h0")?;
        if let Some(p1) = &phi1 {
            basis.ensure_same(p1.basis())?;
            check_eigenvector(&h1, p1, "phi1 of h1")?;
        }
        Ok(Self {
            name: name.into(),
            basis,
            h0,
            h1,
            phi0,
            phi1,
            meta,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn h0(&self) -> &Operator {
        &self.h0
    }

    pub fn h1(&self) -> &Operator {
        &self.h1
    }

    pub fn phi0(&self) -> &StateVector {
        &self.phi0
    }

    pub fn phi1(&self) -> Option<&StateVector> {
        self.phi1.as_ref()
    }

    pub fn meta(&self) -> &BTreeMap<String, Value> {
        &self.meta
    }

    /// Same instance with `h1` replaced by `h0` and `phi1` by `phi0`: the
    /// interpolation is then stationary.
    pub fn stationary(&self) -> Self {
        let mut meta = self.meta.clone();
        meta.insert("degenerate".into(), Value::Bool(true));
        Self {
            name: format!("{}-stationary", self.name),
            basis: self.basis,
            h0: self.h0.clone(),
            h1: self.h0.clone(),
            phi0: self.phi0.clone(),
            phi1: Some(self.phi0.clone()),
            meta,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn check_eigenvector(op: &Operator, psi: &StateVector, what: &str) -> Result<()> {
    let e = expectation(op, psi)?;
    let hv = op.apply(psi.amps());
    let residual = hv
        .iter()
        .zip(psi.amps())
        .map(|(h, v)| (h - v * e).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > EIGEN_RESIDUAL_TOL * op.norm_bound().max(1.0) {
        return Err(Error::NumericIntegrity(format!(
            "{what} is not an eigenvector (residual {residual:e})"
        )));
    }
    Ok(())
}

/// Boolean oracle `f: {0,1}ⁿ → {0,1}`; bit `i` of `z` is `z_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BooleanFunctionSpec {
    Constant { bit: bool },
    /// `f(z) = z_{variant mod n} XOR ((variant / n) mod 2)`: exactly half ones.
    Balanced { variant: u32 },
    /// `f(z) = Σ z_i s_i mod 2`.
    InnerProduct { s: u64 },
    /// Explicit values indexed by `z`.
    TruthTable { values: Vec<bool> },
}

impl BooleanFunctionSpec {
    pub fn eval(&self, n: usize, z: u64) -> bool {
        match self {
            Self::Constant { bit } => *bit,
            Self::Balanced { variant } => {
                let i = (*variant as usize) % n;
                let flip = (*variant as usize / n) % 2 == 1;
                ((z >> i) & 1 == 1) ^ flip
            }
            Self::InnerProduct { s } => (z & s).count_ones() % 2 == 1,
            Self::TruthTable { values } => values[z as usize],
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Self::InnerProduct { s } if n < 64 && s >> n != 0 => Err(Error::InvalidParameter(format!(
                "secret string {s:#b} has more than {n} bits"
            ))),
            Self::TruthTable { values } if values.len() != 1usize << n => Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: values.len(),
            }),
            _ => Ok(()),
        }
    }
}

/// `μ_f = |Σ_z (−1)^{f(z)}| / 2ⁿ`, which is 1 for constant and 0 for
/// balanced functions.
pub fn mu_f(n: usize, f: &BooleanFunctionSpec) -> Result<f64> {
    check_register(n)?;
    f.validate(n)?;
    let size = 1i64 << n;
    let sum: i64 = (0..size as u64).map(|z| if f.eval(n, z) { -1 } else { 1 }).sum();
    match sum.abs() {
        0 => Ok(0.0),
        s if s == size => Ok(1.0),
        s => Err(Error::NotConstantOrBalanced {
            mu: s as f64 / size as f64,
        }),
    }
}

/// Parses `constant:B`, `balanced:V`, `ip:BITS` or `table:BITS`, where
/// `BITS` lists bit 0 first.
impl std::str::FromStr for BooleanFunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad function spec '{s}'"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "constant" => match value {
                "0" => Ok(Self::Constant { bit: false }),
                "1" => Ok(Self::Constant { bit: true }),
                _ => Err(bad()),
            },
            "balanced" => value.parse().map(|variant| Self::Balanced { variant }).map_err(|_| bad()),
            "ip" => parse_bitstring(value).map(|(_, s)| Self::InnerProduct { s }),
            "table" => value
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>>>()
                .map(|values| Self::TruthTable { values }),
            _ => Err(bad()),
        }
    }
}

/// Parses a bit string such as `"0110"`; character `i` is bit `i`.
pub fn parse_bitstring(s: &str) -> Result<(usize, u64)> {
    if s.is_empty() || s.len() > 63 {
        return Err(Error::InvalidParameter(format!("bad bit string '{s}'")));
    }
    let mut bits = 0u64;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => bits |= 1 << i,
            _ => return Err(Error::InvalidParameter(format!("bad bit string '{s}'"))),
        }
    }
    Ok((s.len(), bits))
}

pub fn format_bitstring(n: usize, bits: u64) -> String {
    (0..n).map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

fn check_register(n: usize) -> Result<()> {
    if n == 0 || n > MAX_FULL_REGISTER_QUBITS {
        return Err(Error::SizeCap {
            what: format!("register of {n} qubits"),
            limit: MAX_FULL_REGISTER_QUBITS,
        });
    }
    Ok(())
}

/// `|+⟩^{⊗n}`.
pub fn uniform_superposition(n: usize) -> Result<StateVector> {
    check_register(n)?;
    let basis = BasisDescriptor::full_register(n)?;
    let amp = C64::new((basis.dim() as f64).sqrt().recip(), 0.0);
    StateVector::normalized(basis, vec![amp; basis.dim()])
}

/// Uniform superposition of the weight-`k` strings, in the Hamming-subspace
/// basis.
pub fn dicke_state(n: usize, k: usize) -> Result<StateVector> {
    let basis = BasisDescriptor::hamming_subspace(n, k)?;
    let amp = C64::new((basis.dim() as f64).sqrt().recip(), 0.0);
    StateVector::normalized(basis, vec![amp; basis.dim()])
}

fn meta(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Deutsch–Jozsa with target `μ_f|0⟩ + (1 − μ_f)/√(N−1) Σ_{i≥1} |i⟩`.
///
/// The amplitude on `i ≥ 1` is normalized over the `N − 1` nonzero labels,
/// which gives `|⟨Φ₁|Φ₀⟩|² = (1/N)(μ_f + (1 − μ_f)√(N−1))²`.
pub fn dj_das(n: usize, f: &BooleanFunctionSpec) -> Result<Problem> {
    let mu = mu_f(n, f)?;
    let phi0 = uniform_superposition(n)?;
    let basis = *phi0.basis();
    let rest = if basis.dim() > 1 {
        (1.0 - mu) / ((basis.dim() - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut amps = vec![C64::new(rest, 0.0); basis.dim()];
    amps[0] = C64::new(mu, 0.0);
    let phi1 = StateVector::normalized(basis, amps)?;
    Problem::new(
        "dj-das",
        Operator::projector_complement(phi0.clone()),
        Operator::projector_complement(phi1.clone()),
        phi0,
        Some(phi1),
        meta(&[
            ("n", json!(n)),
            ("N", json!(basis.dim())),
            ("mu_f", json!(mu)),
            ("f", serde_json::to_value(f)?),
        ]),
    )
}

/// Deutsch–Jozsa with the amplitude-symmetric target
/// `√(2/N) (μ_f Σ_i |2i⟩ + (1 − μ_f) Σ_i |2i+1⟩)`.
pub fn dj_wei(n: usize, f: &BooleanFunctionSpec) -> Result<Problem> {
    let mu = mu_f(n, f)?;
    let phi0 = uniform_superposition(n)?;
    let basis = *phi0.basis();
    let scale = (2.0 / basis.dim() as f64).sqrt();
    let amps = (0..basis.dim())
        .map(|i| C64::new(scale * if i % 2 == 0 { mu } else { 1.0 - mu }, 0.0))
        .collect();
    let phi1 = StateVector::normalized(basis, amps)?;
    Problem::new(
        "dj-wei",
        Operator::projector_complement(phi0.clone()),
        Operator::projector_complement(phi1.clone()),
        phi0,
        Some(phi1),
        meta(&[
            ("n", json!(n)),
            ("N", json!(basis.dim())),
            ("mu_f", json!(mu)),
            ("f", serde_json::to_value(f)?),
        ]),
    )
}

/// Bernstein–Vazirani on `n` query qubits plus one answer qubit.
///
/// Basis index `(z << 1) | b`. `h1 = I − Σ_z |z⟩⟨z| ⊗ |f(z)⟩⟨f(z)|` is
/// diagonal; `h0 = I_A ⊗ |−⟩⟨−|` is stored densely; `phi0 = |+⟩^{⊗(n+1)}`
/// is pinned explicitly since `h0` has a `2ⁿ`-fold degenerate ground space.
pub fn bernstein_vazirani(n: usize, s: u64) -> Result<Problem> {
    if n == 0 || n > MAX_BV_QUBITS {
        return Err(Error::SizeCap {
            what: format!("Bernstein-Vazirani with {n} query qubits"),
            limit: MAX_BV_QUBITS,
        });
    }
    let f = BooleanFunctionSpec::InnerProduct { s };
    f.validate(n)?;
    let basis = BasisDescriptor::tensor_ab(n, 1)?;
    let d = basis.dim();

    let h1_values: Vec<f64> = (0..d)
        .map(|idx| {
            let (z, b) = ((idx >> 1) as u64, idx & 1 == 1);
            if b == f.eval(n, z) {
                0.0
            } else {
                1.0
            }
        })
        .collect();
    let h1 = Operator::diagonal(basis, h1_values)?;

    let mut h0 = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for z in 0..d / 2 {
        let (i0, i1) = (2 * z, 2 * z + 1);
        h0[(i0, i0)] = C64::new(0.5, 0.0);
        h0[(i1, i1)] = C64::new(0.5, 0.0);
        h0[(i0, i1)] = C64::new(-0.5, 0.0);
        h0[(i1, i0)] = C64::new(-0.5, 0.0);
    }
    let h0 = Operator::dense(basis, h0)?;

    let phi0 = StateVector::normalized(basis, vec![C64::new(1.0, 0.0); d])?;
    let solution: Vec<usize> = (0..d / 2)
        .map(|z| (z << 1) | usize::from(f.eval(n, z as u64)))
        .collect();
    let phi1 = StateVector::uniform_over(basis, &solution)?;
    Problem::new(
        "bv",
        h0,
        h1,
        phi0,
        Some(phi1),
        meta(&[("n", json!(n)), ("s", json!(format_bitstring(n, s)))]),
    )
}

/// How the Grover problem Hamiltonian is represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroverForm {
    /// Cost function: 0 on marked labels, 1 elsewhere.
    Diagonal,
    /// `I − |Φ₁⟩⟨Φ₁|` with `Φ₁` uniform over the marked labels. Equal to the
    /// diagonal form when `M = 1`; for `M > 1` both agree on the
    /// two-dimensional subspace the evolution explores.
    Projector,
}

pub fn grover(n: usize, marked: &[u64], form: GroverForm) -> Result<Problem> {
    let phi0 = uniform_superposition(n)?;
    let basis = *phi0.basis();
    let mut marked: Vec<u64> = marked.to_vec();
    marked.sort_unstable();
    marked.dedup();
    let m = marked.len();
    if m == 0 || m >= basis.dim() {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= M < N marked items, got M = {m}, N = {}",
            basis.dim()
        )));
    }
    let indices = marked
        .iter()
        .map(|&l| {
            basis
                .index_of(l)
                .ok_or_else(|| Error::InvalidParameter(format!("marked label {l} out of range")))
        })
        .collect::<Result<Vec<_>>>()?;
    let phi1 = StateVector::uniform_over(basis, &indices)?;
    let h1 = match form {
        GroverForm::Diagonal => {
            let mut values = vec![1.0; basis.dim()];
            for &i in &indices {
                values[i] = 0.0;
            }
            Operator::diagonal(basis, values)?
        }
        GroverForm::Projector => Operator::projector_complement(phi1.clone()),
    };
    Problem::new(
        "grover",
        Operator::projector_complement(phi0.clone()),
        h1,
        phi0,
        Some(phi1),
        meta(&[
            ("n", json!(n)),
            ("N", json!(basis.dim())),
            ("M", json!(m)),
            ("marked", json!(marked)),
            ("form", serde_json::to_value(form)?),
        ]),
    )
}

/// Periodic Ising chain `H₁ = −Σ_{i=0}^{n−1} Z_i Z_{(i+1) mod n}` (diagonal in
/// the computational basis) with uniform `phi0`.
///
/// Only `h1` and `phi0` matter for the bound; the driver is set to
/// `I − |Φ₀⟩⟨Φ₀|` so the instance is complete, and `phi1` is left absent.
pub fn ising_counterexample(n: usize) -> Result<Problem> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("Ising chain needs n >= 3, got {n}")));
    }
    let phi0 = uniform_superposition(n)?;
    let basis = *phi0.basis();
    let spin = |z: usize, i: usize| if (z >> i) & 1 == 0 { 1.0 } else { -1.0 };
    let values = (0..basis.dim())
        .map(|z| -(0..n).map(|i| spin(z, i) * spin(z, (i + 1) % n)).sum::<f64>())
        .collect();
    Problem::new(
        "ising",
        Operator::projector_complement(phi0.clone()),
        Operator::diagonal(basis, values)?,
        phi0,
        None,
        meta(&[("n", json!(n)), ("fragment", json!(true))]),
    )
}

/// The hopping driver `−Σ_{i>j} (|1_i 0_j⟩⟨0_i 1_j| + h.c.)` restricted to
/// the weight-`k` sector, as a dense matrix over the colex index.
pub fn hopping_driver(n: usize, k: usize) -> Result<Operator> {
    let basis = BasisDescriptor::hamming_subspace(n, k)?;
    let d = basis.dim();
    if d > MAX_DENSE_DIM {
        return Err(Error::SizeCap {
            what: format!("dense hopping driver of dimension {d}"),
            limit: MAX_DENSE_DIM,
        });
    }
    let index = SubspaceIndex::new(n, k)?;
    let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for (a, &z) in index.labels().iter().enumerate() {
        for i in (0..n).filter(|&i| (z >> i) & 1 == 1) {
            for j in (0..n).filter(|&j| (z >> j) & 1 == 0) {
                let moved = z ^ (1 << i) ^ (1 << j);
                let b = index.rank(moved).expect("hop preserves weight");
                m[(b, a)] = C64::new(-1.0, 0.0);
            }
        }
    }
    Operator::dense(basis, m)
}

/// Childs-style k-clique search in the weight-`k` sector: Dicke initial
/// state, hopping driver and the clique cost `h_C` (or `min(h_C, 1)` when
/// `deformed`). `phi1` is the uniform superposition of the k-cliques when at
/// least one exists.
pub fn kclique(graph: &Graph, k: usize, deformed: bool) -> Result<Problem> {
    let n = graph.n();
    let values = cost_values(graph, k, deformed)?;
    let m = count_kcliques(graph, k)?;
    let h0 = hopping_driver(n, k)?;
    let basis = *h0.basis();
    let phi0 = dicke_state(n, k)?;
    let cliques: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, &h)| h == 0.0)
        .map(|(i, _)| i)
        .collect();
    debug_assert_eq!(cliques.len() as u64, m);
    let phi1 = if cliques.is_empty() {
        None
    } else {
        Some(StateVector::uniform_over(basis, &cliques)?)
    };
    Problem::new(
        if deformed { "kclique-deformed" } else { "kclique" },
        h0,
        Operator::diagonal(basis, values)?,
        phi0,
        phi1,
        meta(&[
            ("n", json!(n)),
            ("k", json!(k)),
            ("M", json!(m)),
            ("deformed", json!(deformed)),
            ("graph", json!(graph.to_edge_list())),
        ]),
    )
}
