use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evolve::{evolve_final, MIN_STEPS};
use super::{Schedule, ScheduleShape};
use crate::algorithm_zoo::Problem;
use crate::bound_engine::{compute_bound, fit_slope};
use crate::quantum_core::state::inner;
use crate::quantum_core::{ground_state_near, StateVector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MinTimeOptions {
    /// Relative width of the final bisection bracket.
    pub rel_tol: f64,
    /// Largest `T` tried while bracketing.
    pub t_cap: f64,
    /// First `T` tried while bracketing.
    pub t_start: f64,
    /// Integration steps per unit of `T · ‖H‖`.
    pub steps_per_unit: f64,
}

impl Default for MinTimeOptions {
    fn default() -> Self {
        MinTimeOptions {
            rel_tol: 0.02,
            t_cap: 1e5,
            t_start: 0.25,
            steps_per_unit: 200.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MinTime {
    /// Smallest `T` found meeting `1 − F(1) ≤ ε` (the upper bracket edge),
    /// or the lower edge when the search hit the cap.
    pub t_min: f64,
    /// False when no bracket was found below the cap. Minimality is not
    /// guaranteed either way since `1 − F(1)` may oscillate in `T`.
    pub converged: bool,
    pub lower: f64,
    pub upper: f64,
    pub final_infidelity: f64,
    pub evaluations: usize,
}

/// Infidelity `1 − |⟨Φ₁|Ψ(T)⟩|²` at the end of one run, with `Φ₁` the
/// ground state of `H₁` closest to the problem's target state.
pub struct FinalInfidelity<'a> {
    problem: &'a Problem,
    target: StateVector,
    scale: f64,
}

impl<'a> FinalInfidelity<'a> {
    pub fn new(problem: &'a Problem) -> Result<Self> {
        let reference = problem.phi1().unwrap_or(problem.phi0());
        let target = ground_state_near(problem.h1(), Some(reference))?.state;
        let scale = problem.h0().norm_bound().max(problem.h1().norm_bound()).max(1.0);
        Ok(FinalInfidelity {
            problem,
            target,
            scale,
        })
    }

    pub fn eval(&self, shape: &ScheduleShape, total_time: f64, steps_per_unit: f64) -> Result<f64> {
        let psi = if total_time == 0.0 {
            self.problem.phi0().amps().to_vec()
        } else {
            let steps = ((steps_per_unit * total_time * self.scale).ceil() as usize).max(MIN_STEPS);
            evolve_final(self.problem, &Schedule::new(shape.clone(), total_time)?, steps)?
        };
        Ok((1.0 - inner(self.target.amps(), &psi).norm_sqr()).max(0.0))
    }
}

/// First `T` (to within `rel_tol`) at which `1 − F(1) ≤ ε`, by doubling from
/// `t_start` and then bisecting the bracket.
pub fn min_adiabatic_time(
    p: &Problem,
    shape: &ScheduleShape,
    epsilon: f64,
    opts: &MinTimeOptions,
) -> Result<MinTime> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0, 1)")));
    }
    shape.validate()?;
    let f = FinalInfidelity::new(p)?;
    let run = |t: f64| f.eval(shape, t, opts.steps_per_unit);
    let mut evaluations = 1;
    let sudden = run(0.0)?;
    if sudden <= epsilon {
        return Ok(MinTime {
            t_min: 0.0,
            converged: true,
            lower: 0.0,
            upper: 0.0,
            final_infidelity: sudden,
            evaluations,
        });
    }
    let (mut lo, mut hi) = (0.0, opts.t_start);
    let mut at_hi = loop {
        let inf = run(hi)?;
        evaluations += 1;
        if inf <= epsilon {
            break inf;
        }
        if hi >= opts.t_cap {
            return Ok(MinTime {
                t_min: hi,
                converged: false,
                lower: hi,
                upper: f64::INFINITY,
                final_infidelity: inf,
                evaluations,
            });
        }
        lo = hi;
        hi = (2.0 * hi).min(opts.t_cap);
    };
    while hi - lo > opts.rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        let inf = run(mid)?;
        evaluations += 1;
        if inf <= epsilon {
            hi = mid;
            at_hi = inf;
        } else {
            lo = mid;
        }
    }
    Ok(MinTime {
        t_min: hi,
        converged: true,
        lower: lo,
        upper: hi,
        final_infidelity: at_hi,
        evaluations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalingRow {
    pub n: usize,
    pub dim: usize,
    pub t_min: f64,
    pub converged: bool,
    /// Runtime bound with the schedule's own `λ̄`.
    pub t_lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// Fitted slope of `log₂ T_min` against `log₂ dim`, over rows with a
    /// positive `T_min`; NaN with fewer than two such rows.
    pub slope: f64,
}

/// Minimal adiabatic times and runtime bounds along a problem family.
pub fn scaling_experiment<F>(
    mut family: F,
    n_values: &[usize],
    epsilon: f64,
    shape: &ScheduleShape,
    opts: &MinTimeOptions,
) -> Result<ScalingTable>
where
    F: FnMut(usize) -> Result<Problem>,
{
    let problems = n_values
        .iter()
        .map(|&n| family(n).map(|p| (n, p)))
        .collect::<Result<Vec<_>>>()?;
    let lambda_bar = shape.average();
    let rows = problems
        .par_iter()
        .map(|(n, p)| {
            let mt = min_adiabatic_time(p, shape, epsilon, opts)?;
            let bound = compute_bound(p, epsilon, lambda_bar)?;
            Ok(ScalingRow {
                n: *n,
                dim: p.basis().dim(),
                t_min: mt.t_min,
                converged: mt.converged,
                t_lower: bound.t_lower,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit: Vec<&ScalingRow> = rows.iter().filter(|r| r.t_min > 0.0).collect();
    let slope = if fit.len() >= 2 {
        let xs: Vec<f64> = fit.iter().map(|r| (r.dim as f64).log2()).collect();
        let ys: Vec<f64> = fit.iter().map(|r| r.t_min.log2()).collect();
        fit_slope(&xs, &ys)
    } else {
        f64::NAN
    };
    Ok(ScalingTable { rows, slope })
}
