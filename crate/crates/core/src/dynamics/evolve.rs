use std::f64::consts::FRAC_PI_2;

use super::Schedule;
use crate::algorithm_zoo::Problem;
use crate::quantum_core::state::{cos_sin_angle, inner, norm_sqr};
use crate::quantum_core::{build_interpolated, ground_state_near, Operator, StateVector, C64};
use crate::{fmt_csv_float, Error, Result};

pub const MIN_STEPS: usize = 100;
/// Integration steps per unit of `T · ‖H‖` in [`default_steps`].
pub const STEPS_PER_UNIT: f64 = 2000.0;
/// Cumulative norm drift above which a run is rejected.
pub const MAX_NORM_DRIFT: f64 = 1e-6;
/// Tolerance of the chain inequalities in [`verify_chain`].
pub const CHAIN_TOL: f64 = 1e-8;
const TARGET_SAMPLES: usize = 400;

/// One recorded point of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub lambda: f64,
    pub state: StateVector,
    /// `|⟨Φ_λ|Ψ⟩|²`
    pub fidelity: f64,
    /// `|⟨Φ_λ|Φ₀⟩|²`
    pub overlap_c: f64,
    /// Bures angle between `Ψ` and `Ψ₀`.
    pub theta: f64,
    /// `sin θ`, kept separately because it is accurate near zero.
    pub sin_theta: f64,
    /// `∫ δE₀ dt`
    pub r: f64,
}

impl Sample {
    pub fn sin_r_clamped(&self) -> f64 {
        self.r.min(FRAC_PI_2).sin()
    }

    /// `sin θ − |F − C|`
    pub fn slack_left(&self) -> f64 {
        self.sin_theta - (self.fidelity - self.overlap_c).abs()
    }

    /// `sin R̃ − sin θ`
    pub fn slack_right(&self) -> f64 {
        self.sin_r_clamped() - self.sin_theta
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub problem: String,
    pub schedule: Schedule,
    pub steps: usize,
    pub samples: Vec<Sample>,
    pub norm_drift: f64,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectories are never empty")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "t,lambda,fidelity,overlapC,bures,R,sinR_clamped,chain_slack_left,chain_slack_right\n",
        );
        for s in &self.samples {
            let cols = [
                s.t,
                s.lambda,
                s.fidelity,
                s.overlap_c,
                s.theta,
                s.r,
                s.sin_r_clamped(),
                s.slack_left(),
                s.slack_right(),
            ];
            let row: Vec<String> = cols.iter().map(|&x| fmt_csv_float(x)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Copy with the fidelity at `index` shifted by `delta`, for exercising
    /// [`verify_chain`].
    pub fn with_corrupted_fidelity(&self, index: usize, delta: f64) -> Trajectory {
        let mut t = self.clone();
        if let Some(s) = t.samples.get_mut(index) {
            s.fidelity += delta;
        }
        t
    }
}

/// `max(1000, 2000 · T · ‖H‖)` integration steps.
pub fn default_steps(p: &Problem, s: &Schedule) -> usize {
    let scale = p.h0().norm_bound().max(p.h1().norm_bound()).max(1.0);
    ((STEPS_PER_UNIT * s.total_time * scale).ceil() as usize).max(1000)
}

/// Moments of `H₀`, `H₁` in `Φ₀` giving `δE₀(λ)` in closed form.
struct InitialUncertainty {
    var0: f64,
    var1: f64,
    cov: f64,
}

impl InitialUncertainty {
    fn new(p: &Problem) -> Self {
        let phi = p.phi0().amps();
        let h0phi = p.h0().apply(phi);
        let h1phi = p.h1().apply(phi);
        let m0 = inner(phi, &h0phi).re;
        let m1 = inner(phi, &h1phi).re;
        InitialUncertainty {
            var0: norm_sqr(&h0phi) - m0 * m0,
            var1: norm_sqr(&h1phi) - m1 * m1,
            cov: inner(&h0phi, &h1phi).re - m0 * m1,
        }
    }

    /// Uncertainty of `H_λ` in `Φ₀`.
    fn at(&self, lambda: f64) -> f64 {
        let a = 1.0 - lambda;
        (a * a * self.var0 + lambda * lambda * self.var1 + 2.0 * a * lambda * self.cov)
            .max(0.0)
            .sqrt()
    }
}

/// Right-hand side `−i H_λ ψ` with reusable buffers.
pub(crate) struct Propagator<'a> {
    h0: &'a Operator,
    h1: &'a Operator,
    buf0: Vec<C64>,
    buf1: Vec<C64>,
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
}

impl<'a> Propagator<'a> {
    pub(crate) fn new(p: &'a Problem) -> Self {
        let d = p.basis().dim();
        let z = || vec![C64::new(0.0, 0.0); d];
        Propagator {
            h0: p.h0(),
            h1: p.h1(),
            buf0: z(),
            buf1: z(),
            k: [z(), z(), z(), z()],
            tmp: z(),
        }
    }

    /// `k[slot] = −i H_λ x`, with `x = psi` or the staged `tmp` vector.
    fn derivative(&mut self, lambda: f64, psi: Option<&[C64]>, slot: usize) {
        let src: &[C64] = psi.unwrap_or(&self.tmp);
        self.h0.apply_into(src, &mut self.buf0);
        self.h1.apply_into(src, &mut self.buf1);
        let a = 1.0 - lambda;
        let minus_i = C64::new(0.0, -1.0);
        for ((o, x0), x1) in self.k[slot].iter_mut().zip(&self.buf0).zip(&self.buf1) {
            *o = minus_i * (x0 * a + x1 * lambda);
        }
    }

    /// One classical RK4 step from `t` to `t + h`; returns `‖ψ‖² − 1` before
    /// renormalization.
    pub(crate) fn step(&mut self, s: &Schedule, t: f64, h: f64, psi: &mut [C64]) -> f64 {
        let l0 = s.lambda(t);
        let lm = s.lambda(t + 0.5 * h);
        let l1 = s.lambda(t + h);
        self.derivative(l0, Some(psi), 0);
        for (slot, (lambda, coeff)) in [(lm, 0.5 * h), (lm, 0.5 * h), (l1, h)].into_iter().enumerate() {
            for ((tv, p), kv) in self.tmp.iter_mut().zip(psi.iter()).zip(&self.k[slot]) {
                *tv = p + kv * coeff;
            }
            self.derivative(lambda, None, slot + 1);
        }
        let w = h / 6.0;
        for (i, p) in psi.iter_mut().enumerate() {
            *p += (self.k[0][i] + self.k[1][i] * 2.0 + self.k[2][i] * 2.0 + self.k[3][i]) * w;
        }
        let n = norm_sqr(psi);
        let scale = n.sqrt().recip();
        psi.iter_mut().for_each(|z| *z *= scale);
        n - 1.0
    }
}

fn sample_at(
    p: &Problem,
    t: f64,
    lambda: f64,
    psi: &[C64],
    r: f64,
    previous_ground: &StateVector,
) -> Result<(Sample, StateVector)> {
    let h = build_interpolated(p.h0(), p.h1(), lambda)?;
    let ground = ground_state_near(&h, Some(previous_ground))?.state;
    let phi0 = p.phi0().amps();
    let fidelity = inner(ground.amps(), psi).norm_sqr().min(1.0);
    let overlap_c = inner(ground.amps(), phi0).norm_sqr().min(1.0);
    let (cos_t, sin_t) = cos_sin_angle(psi, phi0);
    let sin_theta = sin_t.min(1.0);
    let sample = Sample {
        t,
        lambda,
        state: StateVector::normalized(*p.basis(), psi.to_vec())?,
        fidelity,
        overlap_c,
        theta: sin_theta.atan2(cos_t),
        sin_theta,
        r,
    };
    Ok((sample, ground))
}

/// Integrates `i dΨ/dt = H_{λ(t)} Ψ` from `Ψ(0) = Φ₀` with fixed-step RK4.
///
/// Roughly 400 evenly strided samples are recorded, always including both
/// endpoints. `F` is measured against the instantaneous ground state chosen
/// continuously from the previous sample, and `R` is integrated with
/// Simpson's rule on every step.
pub fn integrate(p: &Problem, s: &Schedule, steps: usize) -> Result<Trajectory> {
    if steps < MIN_STEPS {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_STEPS} integration steps are required, got {steps}"
        )));
    }
    let h = s.total_time / steps as f64;
    let stride = steps.div_ceil(TARGET_SAMPLES).max(1);
    let unc = InitialUncertainty::new(p);
    let mut prop = Propagator::new(p);
    let mut psi = p.phi0().amps().to_vec();
    let mut r = 0.0;
    let mut drift = 0.0;

    let (first, mut ground) = sample_at(p, 0.0, 0.0, &psi, 0.0, p.phi0())?;
    let mut samples = vec![first];
    for i in 0..steps {
        let t = i as f64 * h;
        let t_next = if i + 1 == steps { s.total_time } else { (i + 1) as f64 * h };
        let g0 = unc.at(s.lambda(t));
        let gm = unc.at(s.lambda(t + 0.5 * h));
        let g1 = unc.at(s.lambda(t_next));
        r += h / 6.0 * (g0 + 4.0 * gm + g1);
        drift += prop.step(s, t, h, &mut psi).abs();
        if !psi.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NumericIntegrity("state became non-finite".into()));
        }
        if drift > MAX_NORM_DRIFT {
            return Err(Error::IntegrationQuality { drift });
        }
        if (i + 1) % stride == 0 || i + 1 == steps {
            let (sample, g) = sample_at(p, t_next, s.lambda(t_next), &psi, r, &ground)?;
            ground = g;
            samples.push(sample);
        }
    }
    Ok(Trajectory {
        problem: p.name().to_string(),
        schedule: s.clone(),
        steps,
        samples,
        norm_drift: drift,
    })
}

/// Final state `Ψ(T)` only, without recording samples.
pub(crate) fn evolve_final(p: &Problem, s: &Schedule, steps: usize) -> Result<Vec<C64>> {
    let h = s.total_time / steps as f64;
    let mut prop = Propagator::new(p);
    let mut psi = p.phi0().amps().to_vec();
    let mut drift = 0.0;
    for i in 0..steps {
        drift += prop.step(s, i as f64 * h, h, &mut psi).abs();
    }
    if drift.is_nan() || drift > MAX_NORM_DRIFT {
        return Err(Error::IntegrationQuality { drift });
    }
    Ok(psi)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainReport {
    pub samples: usize,
    /// Smallest `sin θ − |F − C|` and where it occurs.
    pub min_slack_left: f64,
    pub lambda_left: f64,
    /// Smallest `sin R̃ − sin θ` and where it occurs.
    pub min_slack_right: f64,
    pub lambda_right: f64,
}

/// Checks `|F − C| ≤ sin θ ≤ sin R̃` at every sample to within [`CHAIN_TOL`].
pub fn verify_chain(traj: &Trajectory) -> Result<ChainReport> {
    let mut report = ChainReport {
        samples: traj.samples.len(),
        min_slack_left: f64::INFINITY,
        lambda_left: 0.0,
        min_slack_right: f64::INFINITY,
        lambda_right: 0.0,
    };
    for (index, s) in traj.samples.iter().enumerate() {
        let (left, right) = (s.slack_left(), s.slack_right());
        if left < report.min_slack_left {
            report.min_slack_left = left;
            report.lambda_left = s.lambda;
        }
        if right < report.min_slack_right {
            report.min_slack_right = right;
            report.lambda_right = s.lambda;
        }
        for (what, slack) in [("|F - C| <= sin theta", left), ("sin theta <= sin R", right)] {
            if slack.is_nan() || slack < -CHAIN_TOL {
                return Err(Error::PropertyViolation {
                    what: what.into(),
                    index,
                    lambda: s.lambda,
                    slack,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithm_zoo::{dj_wei, grover, BooleanFunctionSpec, GroverForm};
    use crate::dynamics::ScheduleShape;

    fn balanced(n: usize) -> Problem {
        dj_wei(n, &BooleanFunctionSpec::Balanced { variant: 0 }).unwrap()
    }

    #[test]
    fn first_sample_is_trivial() {
        let p = balanced(3);
        let s = Schedule::linear(2.0).unwrap();
        let traj = integrate(&p, &s, 400).unwrap();
        let first = &traj.samples[0];
        assert_eq!((first.t, first.lambda, first.r), (0.0, 0.0, 0.0));
        assert!((first.fidelity - 1.0).abs() < 1e-12);
        assert!(first.sin_theta.abs() < 1e-12);
        assert_eq!(traj.last().lambda, 1.0);
        assert!(traj.samples.windows(2).all(|w| w[1].lambda > w[0].lambda && w[1].r >= w[0].r));
        verify_chain(&traj).unwrap();
    }

    #[test]
    fn r_matches_closed_form() {
        // phi0 is an H0 eigenstate, so δE₀(λ) = λ δV and R(T) = T λ̄ δV.
        let p = balanced(3);
        for shape in [ScheduleShape::Linear, ScheduleShape::Power { exponent: 2.0 }] {
            let s = Schedule::new(shape, 5.0).unwrap();
            let traj = integrate(&p, &s, default_steps(&p, &s)).unwrap();
            let want = 5.0 * s.average() * 0.5;
            assert!((traj.last().r / want - 1.0).abs() < 1e-6);
            assert!(traj.norm_drift < 1e-9);
        }
    }

    #[test]
    fn stationary_problem_keeps_full_fidelity() {
        let p = grover(2, &[1], GroverForm::Projector).unwrap().stationary();
        let s = Schedule::linear(3.0).unwrap();
        let traj = integrate(&p, &s, 500).unwrap();
        assert!(traj.samples.iter().all(|x| (x.fidelity - 1.0).abs() < 1e-10));
    }

    #[test]
    fn slow_grover_is_adiabatic() {
        let p = grover(2, &[3], GroverForm::Diagonal).unwrap();
        let s = Schedule::linear(100.0).unwrap();
        let traj = integrate(&p, &s, default_steps(&p, &s)).unwrap();
        assert!(traj.last().fidelity >= 0.99);
        let coarse = integrate(&p, &s, default_steps(&p, &s) / 2).unwrap();
        assert!((coarse.last().fidelity - traj.last().fidelity).abs() < 1e-7);
    }

    #[test]
    fn corrupted_fidelity_is_caught() {
        let p = balanced(2);
        let s = Schedule::linear(1.0).unwrap();
        let traj = integrate(&p, &s, 400).unwrap();
        let bad = traj.with_corrupted_fidelity(traj.samples.len() / 2, 0.2);
        assert!(matches!(verify_chain(&bad), Err(Error::PropertyViolation { .. })));
    }

    #[test]
    fn rejects_too_few_steps() {
        let p = balanced(2);
        let s = Schedule::linear(1.0).unwrap();
        assert!(integrate(&p, &s, 10).is_err());
        let drifted = integrate(&p, &Schedule::linear(400.0).unwrap(), 100);
        assert!(matches!(drifted, Err(Error::IntegrationQuality { .. }) | Err(Error::NumericIntegrity(_))));
    }

    #[test]
    fn csv_layout() {
        let p = balanced(2);
        let traj = integrate(&p, &Schedule::linear(1.0).unwrap(), 200).unwrap();
        let csv = traj.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,lambda,fidelity,overlapC,bures,R,sinR_clamped,chain_slack_left,chain_slack_right"
        );
        assert_eq!(lines.count(), traj.samples.len());
    }
}
