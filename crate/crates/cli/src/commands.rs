use aqabound::algorithm_zoo::{
    bernstein_vazirani, dj_das, dj_wei, grover, kclique, BooleanFunctionSpec, GroverForm, Problem,
};
use aqabound::bound_engine::{
    asymptotic_scan, compute_bound_with_overlap, kclique_combinatorial, kclique_meanfield, kclique_montecarlo,
    kclique_multiplicities, moments_check, AsymptoticClass, BoundReport,
};
use aqabound::dynamics::{default_steps, integrate, verify_chain, Schedule, ScheduleShape};
use aqabound::gap_analysis::{compare_bounds, projector_case_check, sweep};
use aqabound::graph_tools::{binomial, count_kcliques, random_graph, Graph};
use aqabound::quantum_core::{expectation, ground_state_near, overlap_sq, uncertainty};
use aqabound::{fmt_csv_float, Error};
use serde_json::{json, Value};

use crate::args::{BoundArgs, GapArgs, KcliqueArgs, SimulateArgs, Suite, TimingArgs, VerifyArgs};
use crate::problem::{build, build_with_n, default_scan, load_graph};
use crate::CliError;

pub const EXIT_ASYMPTOTICALLY_INVALID: u8 = 2;
pub const EXIT_PROPERTY_VIOLATION: u8 = 3;

pub struct Outcome {
    pub result: Value,
    pub csv: Option<String>,
    pub exit: u8,
}

impl TimingArgs {
    fn lambda_bar(&self) -> f64 {
        match (&self.lambda_bar, &self.schedule) {
            (Some(l), _) => *l,
            (None, Some(shape)) => shape.average(),
            (None, None) => 1.0,
        }
    }
}

/// `C(1)` and where it came from. Without a target state the ground state of
/// `H₁` closest to `Φ₀` stands in for `Φ₁`.
fn resolve_overlap(p: &Problem, explicit: Option<f64>) -> Result<(f64, &'static str), CliError> {
    if let Some(c) = explicit {
        return Ok((c, "override"));
    }
    if let Some(phi1) = p.phi1() {
        return Ok((overlap_sq(phi1, p.phi0())?, "target state"));
    }
    let g = ground_state_near(p.h1(), Some(p.phi0()))?;
    Ok((overlap_sq(&g.state, p.phi0())?, "nearest ground state of h1"))
}

fn bound_csv(r: &BoundReport) -> String {
    let mut out = String::from(
        "problem,epsilon,lambdaBar,mean1,mean2,deltaV,momentsResidual,overlapC1,tLower,asymptoticClass\n",
    );
    let nums = [
        r.epsilon,
        r.lambda_bar,
        r.mean1,
        r.mean2,
        r.delta_v,
        r.moments_residual,
        r.overlap_c1.unwrap_or(f64::NAN),
        r.t_lower,
    ];
    let cols: Vec<String> = nums.iter().map(|&x| fmt_csv_float(x)).collect();
    out.push_str(&format!("{},{},{:?}\n", r.problem, cols.join(","), r.asymptotic_class));
    out
}

pub fn bound(a: &BoundArgs, seed: u64) -> Result<Outcome, CliError> {
    let p = build(&a.problem, seed)?;
    let (c1, source) = resolve_overlap(&p, a.overlap)?;
    let mut report = compute_bound_with_overlap(&p, a.epsilon, a.timing.lambda_bar(), Some(c1))?;
    let mut exit = 0;
    let mut scan_value = Value::Null;
    let mut csv = bound_csv(&report);
    if a.scan || !a.scan_n.is_empty() {
        let ns = if a.scan_n.is_empty() {
            default_scan(&a.problem)?
        } else {
            a.scan_n.clone()
        };
        let scan = asymptotic_scan(
            |n| {
                build_with_n(&a.problem, Some(n), seed).map_err(|e| match e {
                    CliError::Core(inner) => inner,
                    other => Error::InvalidParameter(other.to_string()),
                })
            },
            &ns,
        )?;
        if report.asymptotic_class != AsymptoticClass::Degenerate {
            report.asymptotic_class = scan.class;
        }
        if scan.class == AsymptoticClass::AsymptoticallyInvalid {
            exit = EXIT_ASYMPTOTICALLY_INVALID;
        }
        csv = scan.to_csv();
        scan_value = serde_json::to_value(&scan)?;
    }
    Ok(Outcome {
        result: json!({
            "report": report,
            "overlapSource": source,
            "scan": scan_value,
        }),
        csv: Some(csv),
        exit,
    })
}

pub fn simulate(a: &SimulateArgs, seed: u64) -> Result<Outcome, CliError> {
    let p = build(&a.problem, seed)?;
    let s = Schedule::new(a.schedule.clone(), a.total_time)?;
    let steps = a.steps.unwrap_or_else(|| default_steps(&p, &s));
    let mut traj = integrate(&p, &s, steps)?;
    if a.inject_fault {
        // Raising F where F ≥ C and the slack is below 0.2 always breaks
        // |F − C| ≤ sin θ; the λ = 0 sample qualifies with zero slack.
        let index = (0..traj.samples.len())
            .filter(|&i| traj.samples[i].fidelity >= traj.samples[i].overlap_c)
            .min_by(|&i, &j| traj.samples[i].slack_left().total_cmp(&traj.samples[j].slack_left()))
            .unwrap_or(0);
        traj = traj.with_corrupted_fidelity(index, 0.2);
    }
    let mut exit = 0;
    let chain = match verify_chain(&traj) {
        Ok(r) => serde_json::to_value(r)?,
        Err(e @ Error::PropertyViolation { .. }) => {
            exit = EXIT_PROPERTY_VIOLATION;
            json!({ "violation": e.to_string() })
        }
        Err(e) => return Err(e.into()),
    };
    let last = traj.last();
    let infidelity = 1.0 - last.fidelity;
    let runtime = if infidelity <= a.epsilon {
        let (c1, _) = resolve_overlap(&p, None)?;
        let r = compute_bound_with_overlap(&p, a.epsilon, s.average(), Some(c1))?;
        let satisfied = a.total_time >= r.t_lower - 1e-9;
        if !satisfied {
            exit = EXIT_PROPERTY_VIOLATION;
        }
        json!({ "applicable": true, "tLower": r.t_lower, "satisfied": satisfied })
    } else {
        json!({ "applicable": false })
    };
    let csv = traj.to_csv();
    if let Some(path) = &a.csv {
        std::fs::write(path, &csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome {
        result: json!({
            "problem": p.name(),
            "params": p.meta(),
            "schedule": s,
            "lambdaBar": s.average(),
            "steps": traj.steps,
            "samples": traj.samples.len(),
            "normDrift": traj.norm_drift,
            "final": {
                "fidelity": last.fidelity,
                "overlapC": last.overlap_c,
                "bures": last.theta,
                "R": last.r,
                "sinRClamped": last.sin_r_clamped(),
            },
            "chain": chain,
            "runtimeBound": {
                "epsilon": a.epsilon,
                "finalInfidelity": infidelity,
                "check": runtime,
            },
        }),
        csv: Some(csv),
        exit,
    })
}

pub fn gap(a: &GapArgs, seed: u64) -> Result<Outcome, CliError> {
    let p = build(&a.problem, seed)?;
    let profile = sweep(&p, a.grid)?;
    let mut exit = 0;
    let projector = match projector_case_check(&p, &profile) {
        Ok(r) => serde_json::to_value(r)?,
        Err(e @ Error::PropertyViolation { .. }) => {
            exit = EXIT_PROPERTY_VIOLATION;
            json!({ "status": "violated", "violation": e.to_string() })
        }
        Err(e) => return Err(e.into()),
    };
    let (c1, _) = resolve_overlap(&p, None)?;
    let report = compute_bound_with_overlap(&p, a.epsilon, a.timing.lambda_bar(), Some(c1))?;
    let comparison = match compare_bounds(&p, &profile, &report) {
        Ok(c) => serde_json::to_value(c)?,
        Err(e @ Error::PropertyViolation { .. }) => {
            exit = EXIT_PROPERTY_VIOLATION;
            json!({ "violation": e.to_string() })
        }
        Err(e) => return Err(e.into()),
    };
    let csv = profile.to_csv();
    if let Some(path) = &a.csv {
        std::fs::write(path, &csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome {
        result: json!({
            "problem": p.name(),
            "params": p.meta(),
            "grid": a.grid,
            "gMin": profile.g_min,
            "argMin": profile.arg_min,
            "projectorCheck": projector,
            "comparison": comparison,
        }),
        csv: Some(csv),
        exit,
    })
}

pub fn kclique_cmd(a: &KcliqueArgs, seed: u64) -> Result<Outcome, CliError> {
    let g = load_graph(a.file.as_deref(), a.random, a.n, a.p, seed)?;
    let n = g.n();
    let p = kclique(&g, a.k, a.deformed)?;
    let m = count_kcliques(&g, a.k)?;
    let mean1 = expectation(p.h1(), p.phi0())?;
    let delta_v = uncertainty(p.h1(), p.phi0())?;
    let moments = moments_check(&p)?;
    let bound = match p.phi1() {
        Some(_) => serde_json::to_value(compute_bound_with_overlap(&p, a.epsilon, 1.0, None)?)?,
        None => Value::Null,
    };
    let subsets = binomial(n, a.k) as f64;
    let randomized = if a.p > 0.0 && a.p < 1.0 {
        let mf = kclique_meanfield(n, a.k, a.p)?;
        let comb = kclique_combinatorial(n, a.k, a.p)?;
        let multiplicity_sum: f64 = kclique_multiplicities(n, a.k, a.p)?.iter().sum();
        let ratio_next = if a.k < n {
            Some(mf.t_rand_inf / kclique_meanfield(n, a.k + 1, a.p)?.t_rand_inf)
        } else {
            None
        };
        let mc = if a.trials > 0 {
            let mc = kclique_montecarlo(n, a.k, a.p, seed, a.trials)?;
            json!({
                "estimate": mc,
                "zScoreH": (mc.sample_mean_h - mf.e_h) / mc.stderr_h,
                "zScoreH2": (mc.sample_mean_h2 - mf.e_h2) / mc.stderr_h2,
            })
        } else {
            Value::Null
        };
        json!({
            "meanField": mf,
            "combinatorial": comb,
            "multiplicitySum": multiplicity_sum,
            "tRandInfRatioToNextK": ratio_next,
            "monteCarlo": mc,
        })
    } else {
        Value::Null
    };
    Ok(Outcome {
        result: json!({
            "graph": { "n": n, "edges": g.edge_count(), "source": if a.random { "random" } else { "file" } },
            "k": a.k,
            "deformed": a.deformed,
            "cliqueCount": m,
            "subsets": subsets,
            "mean1": mean1,
            "deltaV": delta_v,
            "moments": moments,
            "deformedIdentity": a.deformed.then(|| 1.0 - m as f64 / subsets),
            "bound": bound,
            "randomized": randomized,
        }),
        csv: None,
        exit: 0,
    })
}

fn single_triangle_graph() -> Result<Graph, Error> {
    Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (1, 4)])
}

fn chain_suite() -> Result<Vec<Value>, Error> {
    let constant = BooleanFunctionSpec::Constant { bit: true };
    let balanced = BooleanFunctionSpec::Balanced { variant: 1 };
    let g = single_triangle_graph()?;
    let problems = [
        dj_das(3, &constant)?,
        dj_das(3, &balanced)?,
        dj_wei(3, &balanced)?,
        bernstein_vazirani(2, 0b01)?,
        grover(2, &[3], GroverForm::Diagonal)?,
        grover(3, &[1, 6], GroverForm::Projector)?,
        kclique(&g, 3, false)?,
        kclique(&g, 3, true)?,
    ];
    let mut checks = Vec::new();
    for p in &problems {
        for shape in [ScheduleShape::Linear, ScheduleShape::Power { exponent: 2.0 }] {
            for t in [0.5, 5.0] {
                let s = Schedule::new(shape.clone(), t)?;
                let traj = integrate(p, &s, default_steps(p, &s))?;
                let name = format!("{} {:?} T={t}", p.name(), shape);
                checks.push(match verify_chain(&traj) {
                    Ok(r) => json!({ "check": name, "passed": true, "detail": r }),
                    Err(e) => json!({ "check": name, "passed": false, "detail": e.to_string() }),
                });
            }
        }
    }
    Ok(checks)
}

fn moments_suite() -> Result<Vec<Value>, Error> {
    let balanced = BooleanFunctionSpec::Balanced { variant: 0 };
    let g = random_graph(6, 0.5, 7)?;
    let cases: Vec<(Problem, bool)> = vec![
        (dj_das(4, &balanced)?, true),
        (dj_wei(4, &balanced)?, true),
        (bernstein_vazirani(4, 0b1010)?, true),
        (grover(4, &[3], GroverForm::Projector)?, true),
        (grover(4, &[3, 9], GroverForm::Diagonal)?, true),
        (kclique(&g, 3, true)?, true),
        (kclique(&g, 3, false)?, false),
    ];
    cases
        .into_iter()
        .map(|(p, expected)| {
            let m = moments_check(&p)?;
            Ok(json!({
                "check": p.name(),
                "expectedToHold": expected,
                "holds": m.holds,
                "residual": m.residual,
                "passed": m.holds == expected,
            }))
        })
        .collect()
}

fn sm5_suite() -> Result<Vec<Value>, Error> {
    let mut checks = Vec::new();
    for (n, k) in [(6, 3), (8, 4), (10, 5)] {
        for p in [0.25, 0.5, 0.75] {
            let a = kclique_meanfield(n, k, p)?;
            let b = kclique_combinatorial(n, k, p)?;
            let mismatch = (a.e_h - b.e_h).abs().max((a.e_h2 - b.e_h2).abs() / a.e_h2.max(1.0));
            let sum: f64 = kclique_multiplicities(n, k, p)?.iter().sum();
            let sum_err = (sum / binomial(n, k) as f64 - 1.0).abs();
            checks.push(json!({
                "check": format!("n={n} k={k} p={p}"),
                "mismatch": mismatch,
                "multiplicitySumError": sum_err,
                "passed": mismatch < 1e-12 && sum_err < 1e-9,
            }));
        }
    }
    Ok(checks)
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let suites: &[Suite] = match a.suite {
        Suite::All => &[Suite::Chain, Suite::Moments, Suite::Sm5],
        Suite::Chain => &[Suite::Chain],
        Suite::Moments => &[Suite::Moments],
        Suite::Sm5 => &[Suite::Sm5],
    };
    let mut results = serde_json::Map::new();
    let (mut passed, mut failed) = (0usize, 0usize);
    for suite in suites {
        let (name, checks) = match suite {
            Suite::Chain => ("chain", chain_suite()?),
            Suite::Moments => ("moments", moments_suite()?),
            _ => ("sm5", sm5_suite()?),
        };
        for c in &checks {
            if c["passed"] == json!(true) {
                passed += 1;
            } else {
                failed += 1;
            }
        }
        results.insert(name.to_string(), Value::Array(checks));
    }
    Ok(Outcome {
        result: json!({ "suites": results, "passed": passed, "failed": failed }),
        csv: None,
        exit: if failed == 0 { 0 } else { EXIT_PROPERTY_VIOLATION },
    })
}
