//! Runtime lower bounds for adiabatic quantum algorithms (AQAs) from the
//! quantum uncertainty of the final Hamiltonian, together with the exact
//! small-scale simulation machinery needed to check them.
//!
//! An AQA interpolates `H(λ) = (1 − λ) H₀ + λ H₁` along a schedule `λ(t)`.
//! For any allowance `ε` on the final adiabatic infidelity, the runtime
//! must satisfy
//!
//! ```text
//! T ≥ arcsin(max(1 − ε − C(1), 0)) / (λ̄ · δV)
//! ```
//!
//! where `C(1) = |⟨Φ₁|Φ₀⟩|²`, `λ̄` is the time average of the schedule and
//! `δV` is the standard deviation of `H₁` in the initial state.
//!
//! Module map:
//!
//! - [`quantum_core`]: basis-labelled states, Hermitian operators, moments,
//!   overlaps and dense ground states.
//! - [`algorithm_zoo`]: Deutsch–Jozsa (two variants), Bernstein–Vazirani,
//!   Grover, the Ising counterexample and k-clique problem constructors.
//! - [`bound_engine`]: δV, the moments condition, the runtime bound, the
//!   asymptotic scan and the randomized k-clique estimators.
//! - [`dynamics`]: schedules, RK4 integration of the Schrödinger equation,
//!   the fidelity/speed-limit inequality chain and minimal adiabatic times.
//! - [`gap_analysis`]: spectral gap sweeps and the projector-case gap
//!   relations.
//! - [`graph_tools`]: graphs, edge lists, brute-force clique counting and
//!   the Hamming-weight subspace index.

pub mod algorithm_zoo;
pub mod bound_engine;
pub mod dynamics;
mod error;
pub mod gap_analysis;
pub mod graph_tools;
pub mod quantum_core;

pub use error::{Error, Result};

/// Identifier of the pseudo-random generator behind every seeded routine.
pub const PRNG_ID: &str = "rand_chacha::ChaCha8Rng/seed_from_u64 (rand_chacha 0.9)";

/// Crate version, embedded in every machine-readable report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Formats a float for CSV output: 17 significant digits, '.' decimal point.
pub fn fmt_csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_csv_float;

    #[test]
    fn csv_float_roundtrips_exactly() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, -2.5e-300, 0.0] {
            let s = fmt_csv_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(fmt_csv_float(f64::INFINITY), "inf");
    }
}
