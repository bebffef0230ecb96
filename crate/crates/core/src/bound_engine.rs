//! Runtime lower bounds from the quantum uncertainty of the final
//! Hamiltonian.
//!
//! For an instance with initial state `Φ₀` and final Hamiltonian `H₁`,
//! `δV = sqrt(⟨H₁²⟩₀ − ⟨H₁⟩₀²)` and any runtime reaching adiabatic fidelity
//! `1 − ε` obeys `T ≥ arcsin(max(1 − ε − C(1), 0)) / (λ̄ δV)`. That number
//! is only a meaningful complexity lower bound when `1/δV` stays away from
//! zero as the instance grows, which [`asymptotic_scan`] checks empirically.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algorithm_zoo::Problem;
use crate::graph_tools::{cost_values, random_graph};
use crate::quantum_core::{expectation, overlap_sq, uncertainty};
use crate::{fmt_csv_float, Error, Result};

/// Below this δV the bound is reported as degenerate instead of infinite.
pub const DEGENERATE_DELTA_V: f64 = 1e-14;

/// Moments condition tolerance on `|⟨H₁²⟩₀ − ⟨H₁⟩₀|`.
pub const MOMENTS_TOL: f64 = 1e-10;

/// Log-log slope of `1/δV` against `n` below which a family is flagged.
pub const INVALID_SLOPE: f64 = -0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AsymptoticClass {
    Valid,
    /// `δV = 0`: the initial state already is an `H₁` eigenstate.
    Degenerate,
    /// `1/δV → 0` with growing `n`: the necessary time is not a lower bound
    /// on complexity.
    AsymptoticallyInvalid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub problem: String,
    pub params: BTreeMap<String, Value>,
    /// `⟨H₁⟩₀`
    pub mean1: f64,
    /// `⟨H₁²⟩₀`
    pub mean2: f64,
    pub delta_v: f64,
    pub moments_residual: f64,
    /// `C(1) = |⟨Φ₁|Φ₀⟩|²`
    pub overlap_c1: Option<f64>,
    pub epsilon: f64,
    pub lambda_bar: f64,
    pub t_lower: f64,
    pub asymptotic_class: AsymptoticClass,
}

/// First and second moments of `H₁` in `Φ₀`.
fn moments(p: &Problem) -> Result<(f64, f64, f64)> {
    let mean1 = expectation(p.h1(), p.phi0())?;
    let delta_v = uncertainty(p.h1(), p.phi0())?;
    let hpsi = p.h1().apply(p.phi0().amps());
    let mean2: f64 = hpsi.iter().map(|z| z.norm_sqr()).sum();
    Ok((mean1, mean2, delta_v))
}

/// `arcsin(max(1 − ε − C(1), 0)) / (λ̄ δV)`, or 0 for a degenerate `δV`.
pub fn runtime_bound(epsilon: f64, c1: f64, lambda_bar: f64, delta_v: f64) -> f64 {
    if delta_v < DEGENERATE_DELTA_V {
        return 0.0;
    }
    let numerator = (1.0 - epsilon - c1).clamp(0.0, 1.0).asin();
    numerator / (lambda_bar * delta_v)
}

pub fn compute_bound(p: &Problem, epsilon: f64, lambda_bar: f64) -> Result<BoundReport> {
    compute_bound_with_overlap(p, epsilon, lambda_bar, None)
}

/// As [`compute_bound`], with `C(1)` supplied by the caller when the
/// problem carries no `phi1` (or to override it).
pub fn compute_bound_with_overlap(
    p: &Problem,
    epsilon: f64,
    lambda_bar: f64,
    overlap_override: Option<f64>,
) -> Result<BoundReport> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside [0, 1]")));
    }
    if !(lambda_bar > 0.0 && lambda_bar <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "schedule average {lambda_bar} outside (0, 1]"
        )));
    }
    let c1 = match (overlap_override, p.phi1()) {
        (Some(c), _) => {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::InvalidParameter(format!("overlap {c} outside [0, 1]")));
            }
            c
        }
        (None, Some(phi1)) => overlap_sq(phi1, p.phi0())?,
        (None, None) => return Err(Error::MissingOverlap),
    };
    let (mean1, mean2, delta_v) = moments(p)?;
    let asymptotic_class = if delta_v < DEGENERATE_DELTA_V {
        AsymptoticClass::Degenerate
    } else {
        AsymptoticClass::Valid
    };
    Ok(BoundReport {
        problem: p.name().to_string(),
        params: p.meta().clone(),
        mean1,
        mean2,
        delta_v,
        moments_residual: (mean2 - mean1).abs(),
        overlap_c1: Some(c1),
        epsilon,
        lambda_bar,
        t_lower: runtime_bound(epsilon, c1, lambda_bar, delta_v),
        asymptotic_class,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentsCheck {
    pub holds: bool,
    pub residual: f64,
}

/// Checks `⟨H₁²⟩₀ = ⟨H₁⟩₀`.
pub fn moments_check(p: &Problem) -> Result<MomentsCheck> {
    let (mean1, mean2, _) = moments(p)?;
    let residual = (mean2 - mean1).abs();
    Ok(MomentsCheck {
        holds: residual < MOMENTS_TOL,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanRow {
    pub n: usize,
    pub delta_v: f64,
    pub inv_delta_v: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    /// Least-squares slope of `ln(1/δV)` against `ln n`.
    pub slope: f64,
    pub class: AsymptoticClass,
}

impl ScanTable {
    pub fn to_csv(&self) -> String {
        let class = format!("{:?}", self.class);
        let mut out = String::from("n,deltaV,invDeltaV,class\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.n,
                fmt_csv_float(r.delta_v),
                fmt_csv_float(r.inv_delta_v),
                class
            ));
        }
        out
    }
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Evaluates δV along a family and classifies its asymptotic behaviour.
///
/// The family is `AsymptoticallyInvalid` when `1/δV` falls with `n` faster
/// than `n^{-1/4}` (fitted log-log slope below [`INVALID_SLOPE`]); a zero δV
/// anywhere makes it `Degenerate`.
pub fn asymptotic_scan<F>(mut family: F, n_values: &[usize]) -> Result<ScanTable>
where
    F: FnMut(usize) -> Result<Problem>,
{
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 {
        return Err(Error::InvalidParameter(
            "asymptotic scan needs at least three distinct n values".into(),
        ));
    }
    let rows = ns
        .iter()
        .map(|&n| {
            let p = family(n)?;
            let delta_v = uncertainty(p.h1(), p.phi0())?;
            Ok(ScanRow {
                n,
                delta_v,
                inv_delta_v: delta_v.recip(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().any(|r| r.delta_v < DEGENERATE_DELTA_V) {
        return Ok(ScanTable {
            rows,
            slope: f64::NAN,
            class: AsymptoticClass::Degenerate,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.inv_delta_v.ln()).collect();
    let slope = fit_slope(&xs, &ys);
    let class = if slope < INVALID_SLOPE {
        AsymptoticClass::AsymptoticallyInvalid
    } else {
        AsymptoticClass::Valid
    };
    Ok(ScanTable { rows, slope, class })
}

/// Expected cost moments of randomized k-clique, with
/// `δV_rand = sqrt(E[h̄²] − E[h̄]²)` and `T_rand,inf = 1/δV_rand`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RandomizedMoments {
    pub e_h: f64,
    pub e_h2: f64,
    pub delta_v_rand: f64,
    pub t_rand_inf: f64,
}

fn check_randomized_args(n: usize, k: usize, p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p} must lie strictly inside (0, 1)"
        )));
    }
    if k < 2 || k > n {
        return Err(Error::InvalidParameter(format!(
            "clique size k = {k} must satisfy 2 <= k <= n = {n}"
        )));
    }
    Ok(())
}

/// Edges of a k-vertex clique, `L_k = C(k, 2)`.
pub fn clique_edges(k: usize) -> usize {
    k * (k.saturating_sub(1)) / 2
}

/// Closed-form moments from replacing each `G_ij` by its expectation `p`:
/// `E[h̄] = (1−p) L_k`, `E[h̄²] = (1−p)² L_k² + p(1−p) L_k`.
pub fn kclique_meanfield(n: usize, k: usize, p: f64) -> Result<RandomizedMoments> {
    check_randomized_args(n, k, p)?;
    let l = clique_edges(k) as f64;
    let q = 1.0 - p;
    let delta_v_rand = (p * q * l).sqrt();
    Ok(RandomizedMoments {
        e_h: q * l,
        e_h2: q * q * l * l + p * q * l,
        delta_v_rand,
        t_rand_inf: delta_v_rand.recip(),
    })
}

/// Real-valued binomial coefficient.
fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Expected number of weight-`k` strings with cost `α`:
/// `m_α = p^{L_k−α} (1−p)^α C(L_k, α) C(n, k)` for `α = 0..=L_k`.
pub fn kclique_multiplicities(n: usize, k: usize, p: f64) -> Result<Vec<f64>> {
    check_randomized_args(n, k, p)?;
    let l = clique_edges(k);
    let total = binomial_f64(n, k);
    Ok((0..=l)
        .map(|alpha| {
            p.powi((l - alpha) as i32) * (1.0 - p).powi(alpha as i32) * binomial_f64(l, alpha) * total
        })
        .collect())
}

/// Same moments as [`kclique_meanfield`], by explicit summation over the
/// cost multiplicities.
pub fn kclique_combinatorial(n: usize, k: usize, p: f64) -> Result<RandomizedMoments> {
    let m = kclique_multiplicities(n, k, p)?;
    let total = binomial_f64(n, k);
    let e_h = m.iter().enumerate().map(|(a, ma)| ma * a as f64).sum::<f64>() / total;
    let e_h2 = m
        .iter()
        .enumerate()
        .map(|(a, ma)| ma * (a * a) as f64)
        .sum::<f64>()
        / total;
    let delta_v_rand = (e_h2 - e_h * e_h).max(0.0).sqrt();
    Ok(RandomizedMoments {
        e_h,
        e_h2,
        delta_v_rand,
        t_rand_inf: delta_v_rand.recip(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MonteCarloMoments {
    pub trials: usize,
    pub seed: u64,
    pub sample_mean_h: f64,
    pub sample_mean_h2: f64,
    /// Standard errors of the two sample means; NaN for a single trial.
    pub stderr_h: f64,
    pub stderr_h2: f64,
}

/// Averages `h̄_C` and `h̄²_C` over `trials` random graphs. Trial `t` uses
/// seed `seed + t`, so the result does not depend on the thread count.
pub fn kclique_montecarlo(n: usize, k: usize, p: f64, seed: u64, trials: usize) -> Result<MonteCarloMoments> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let samples = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = random_graph(n, p, seed.wrapping_add(t as u64))?;
            let h = cost_values(&g, k, false)?;
            let len = h.len() as f64;
            let mean = h.iter().sum::<f64>() / len;
            let mean_sq = h.iter().map(|x| x * x).sum::<f64>() / len;
            Ok((mean, mean_sq))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let stats = |values: Vec<f64>| -> (f64, f64) {
        let m = values.len() as f64;
        let mean = values.iter().sum::<f64>() / m;
        if values.len() < 2 {
            return (mean, f64::NAN);
        }
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (mean, (var / m).sqrt())
    };
    let (mean_h, stderr_h) = stats(samples.iter().map(|s| s.0).collect());
    let (mean_h2, stderr_h2) = stats(samples.iter().map(|s| s.1).collect());
    Ok(MonteCarloMoments {
        trials,
        seed,
        sample_mean_h: mean_h,
        sample_mean_h2: mean_h2,
        stderr_h,
        stderr_h2,
    })
}
