//! Spectral gap of `H(λ)` along the interpolation and its relation to the
//! ground-state overlap when both Hamiltonians are projector complements.
//!
//! For `H₀ = I − |Φ₀⟩⟨Φ₀|` and `H₁ = I − |Φ₁⟩⟨Φ₁|` the dynamics is confined
//! to span{Φ₀, Φ₁}, where the gap is `sqrt(1 − 4(1 − c)λ(1 − λ))` with
//! `c = |⟨Φ₁|Φ₀⟩|²`; its minimum `sqrt(c)` sits at `λ = 1/2`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithm_zoo::Problem;
use crate::bound_engine::{AsymptoticClass, BoundReport};
use crate::quantum_core::{build_interpolated, lowest_eigenvalues, overlap_sq};
use crate::{fmt_csv_float, Error, Result};

pub const MIN_GRID: usize = 11;
/// Width in `λ` at which golden-section refinement stops.
pub const REFINE_TOL: f64 = 1e-6;
const PROJECTOR_GAP_TOL: f64 = 1e-10;
const PROJECTOR_MIN_TOL: f64 = 1e-6;
const DEGENERATE_GAP: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GapProfile {
    pub lambdas: Vec<f64>,
    pub gaps: Vec<f64>,
    /// Refined minimum, never above any grid sample.
    pub g_min: f64,
    pub arg_min: f64,
}

impl GapProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,gap\n");
        for (l, g) in self.lambdas.iter().zip(&self.gaps) {
            out.push_str(&format!("{},{}\n", fmt_csv_float(*l), fmt_csv_float(*g)));
        }
        out
    }
}

/// `E₁ − E₀` of `H(λ)`, clamped at zero.
pub fn gap_at(p: &Problem, lambda: f64) -> Result<f64> {
    let h = build_interpolated(p.h0(), p.h1(), lambda)?;
    let e = lowest_eigenvalues(&h, 2)?;
    Ok((e[1] - e[0]).max(0.0))
}

/// Two-level gap `sqrt(1 − 4(1 − c)λ(1 − λ))` of a projector pair with
/// squared overlap `c`.
pub fn projector_gap(c: f64, lambda: f64) -> f64 {
    (1.0 - 4.0 * (1.0 - c) * lambda * (1.0 - lambda)).max(0.0).sqrt()
}

/// Gap on a uniform grid of `grid_size` points in `[0, 1]`, followed by
/// golden-section refinement of the minimum between the neighbours of the
/// smallest grid sample.
pub fn sweep(p: &Problem, grid_size: usize) -> Result<GapProfile> {
    if grid_size < MIN_GRID {
        return Err(Error::InvalidParameter(format!(
            "gap grid needs at least {MIN_GRID} points, got {grid_size}"
        )));
    }
    if p.basis().dim() < 2 {
        return Err(Error::InvalidParameter("a gap needs at least two levels".into()));
    }
    let last = (grid_size - 1) as f64;
    let lambdas: Vec<f64> = (0..grid_size).map(|i| i as f64 / last).collect();
    let gaps = lambdas
        .par_iter()
        .map(|&l| gap_at(p, l))
        .collect::<Result<Vec<_>>>()?;
    let i_min = (0..grid_size)
        .min_by(|&a, &b| gaps[a].total_cmp(&gaps[b]))
        .expect("grid is non-empty");
    let lo = lambdas[i_min.saturating_sub(1)];
    let hi = lambdas[(i_min + 1).min(grid_size - 1)];
    let (arg, value) = golden_section(|l| gap_at(p, l), lo, hi, REFINE_TOL)?;
    let (g_min, arg_min) = if value < gaps[i_min] {
        (value, arg)
    } else {
        (gaps[i_min], lambdas[i_min])
    };
    Ok(GapProfile {
        lambdas,
        gaps,
        g_min,
        arg_min,
    })
}

fn golden_section<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ProjectorCheck {
    /// One of the Hamiltonians is not of the form `I − |Φ⟩⟨Φ|`.
    NotApplicable,
    #[serde(rename_all = "camelCase")]
    Passed {
        overlap: f64,
        g_min: f64,
        /// Smallest `gap − |⟨Φ₁|Φ₀⟩|` over the grid.
        min_slack: f64,
        /// Largest deviation of the grid gaps from [`projector_gap`].
        closed_form_residual: f64,
    },
}

/// Checks `g(H(λ)) ≥ |⟨Φ₁|Φ₀⟩|` on the profile grid and `g_min = |⟨Φ₁|Φ₀⟩|`.
pub fn projector_case_check(p: &Problem, profile: &GapProfile) -> Result<ProjectorCheck> {
    let (Some(a), Some(b)) = (p.h0().projector_target(), p.h1().projector_target()) else {
        return Ok(ProjectorCheck::NotApplicable);
    };
    let c = overlap_sq(a, b)?;
    let overlap = c.sqrt();
    let mut min_slack = f64::INFINITY;
    let mut residual: f64 = 0.0;
    for (index, (&lambda, &g)) in profile.lambdas.iter().zip(&profile.gaps).enumerate() {
        let slack = g - overlap;
        if slack < -PROJECTOR_GAP_TOL {
            return Err(Error::PropertyViolation {
                what: "gap >= |<phi1|phi0>|".into(),
                index,
                lambda,
                slack,
            });
        }
        min_slack = min_slack.min(slack);
        residual = residual.max((g - projector_gap(c, lambda)).abs());
    }
    let min_error = profile.g_min - overlap;
    if min_error.abs() > PROJECTOR_MIN_TOL {
        return Err(Error::PropertyViolation {
            what: "g_min = |<phi1|phi0>|".into(),
            index: 0,
            lambda: profile.arg_min,
            slack: min_error,
        });
    }
    Ok(ProjectorCheck::Passed {
        overlap,
        g_min: profile.g_min,
        min_slack,
        closed_form_residual: residual,
    })
}

/// Gap-based runtime scales next to the uncertainty bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundComparison {
    pub g_min: f64,
    /// `1/g_min`; absent for a closed gap.
    pub inv_g_min: Option<f64>,
    /// `1/g_min²`; absent for a closed gap.
    pub inv_g_min_sq: Option<f64>,
    pub t_lower: f64,
    pub t_lower_times_g_min: f64,
    /// `(π/2)/(λ̄ δV)`, the largest value the bound can take.
    pub bound_cap: Option<f64>,
    pub delta_v: f64,
    /// `|δV − g_min sqrt(1 − g_min²)|` for projector pairs.
    pub gap_relation_residual: Option<f64>,
    pub degenerate: bool,
}

pub fn compare_bounds(p: &Problem, profile: &GapProfile, report: &BoundReport) -> Result<BoundComparison> {
    let g = profile.g_min;
    let closed = g <= DEGENERATE_GAP;
    let degenerate = closed || report.asymptotic_class == AsymptoticClass::Degenerate;
    let bound_cap = (report.delta_v > 0.0).then(|| FRAC_PI_2 / (report.lambda_bar * report.delta_v));
    if let Some(cap) = bound_cap {
        if report.t_lower > cap * (1.0 + 1e-12) {
            return Err(Error::PropertyViolation {
                what: "tLower <= (pi/2)/(lambdaBar deltaV)".into(),
                index: 0,
                lambda: 1.0,
                slack: cap - report.t_lower,
            });
        }
    }
    let projector_pair = p.h0().projector_target().is_some() && p.h1().projector_target().is_some();
    Ok(BoundComparison {
        g_min: g,
        inv_g_min: (!closed).then(|| g.recip()),
        inv_g_min_sq: (!closed).then(|| (g * g).recip()),
        t_lower: report.t_lower,
        t_lower_times_g_min: report.t_lower * g,
        bound_cap,
        delta_v: report.delta_v,
        gap_relation_residual: projector_pair
            .then(|| (report.delta_v - g * (1.0 - g * g).max(0.0).sqrt()).abs()),
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithm_zoo::{dj_das, dj_wei, grover, kclique, BooleanFunctionSpec, GroverForm};
    use crate::bound_engine::compute_bound;
    use crate::graph_tools::Graph;

    #[test]
    fn grover_four() {
        let p = grover(2, &[3], GroverForm::Diagonal).unwrap();
        let prof = sweep(&p, 101).unwrap();
        assert!((prof.g_min - 0.5).abs() < 1e-9);
        assert!((prof.arg_min - 0.5).abs() < 1e-6);
        assert!((prof.gaps[0] - 1.0).abs() < 1e-12);
        for (l, g) in prof.lambdas.iter().zip(&prof.gaps) {
            assert!((g - projector_gap(0.25, *l)).abs() < 1e-9);
        }
        assert!(prof.gaps.iter().all(|&g| prof.g_min <= g));
        assert!(prof.to_csv().starts_with("lambda,gap\n"));
    }

    #[test]
    fn projector_pairs() {
        let p = dj_wei(3, &BooleanFunctionSpec::Balanced { variant: 2 }).unwrap();
        let prof = sweep(&p, 21).unwrap();
        assert!((prof.g_min - 0.5f64.sqrt()).abs() < 1e-9);
        assert!(matches!(projector_case_check(&p, &prof).unwrap(), ProjectorCheck::Passed { .. }));

        let p = dj_das(3, &BooleanFunctionSpec::Constant { bit: false }).unwrap();
        let prof = sweep(&p, 21).unwrap();
        match projector_case_check(&p, &prof).unwrap() {
            ProjectorCheck::Passed { g_min, closed_form_residual, .. } => {
                assert!((g_min - 8f64.sqrt().recip()).abs() < 1e-6);
                assert!(closed_form_residual < 1e-9);
            }
            other => panic!("{other:?}"),
        }

        for n in [2, 3, 4] {
            let p = grover(n, &[1], GroverForm::Projector).unwrap();
            let prof = sweep(&p, 21).unwrap();
            assert!(matches!(projector_case_check(&p, &prof).unwrap(), ProjectorCheck::Passed { .. }));
        }
    }

    #[test]
    fn type_two_is_not_applicable() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let p = kclique(&g, 3, false).unwrap();
        let prof = sweep(&p, 11).unwrap();
        assert_eq!(projector_case_check(&p, &prof).unwrap(), ProjectorCheck::NotApplicable);
    }

    #[test]
    fn comparison_table() {
        let p = grover(4, &[5], GroverForm::Projector).unwrap();
        let prof = sweep(&p, 21).unwrap();
        let report = compute_bound(&p, 0.1, 1.0).unwrap();
        let cmp = compare_bounds(&p, &prof, &report).unwrap();
        assert!((cmp.g_min - 0.25).abs() < 1e-9);
        assert!(cmp.gap_relation_residual.unwrap() < 1e-9);
        assert!(!cmp.degenerate);
        assert!(cmp.t_lower <= cmp.bound_cap.unwrap());

        let p = grover(2, &[1], GroverForm::Projector).unwrap().stationary();
        let prof = sweep(&p, 11).unwrap();
        let report = compute_bound(&p, 0.1, 1.0).unwrap();
        assert!(compare_bounds(&p, &prof, &report).unwrap().degenerate);
    }

    #[test]
    fn grid_too_small() {
        let p = grover(2, &[3], GroverForm::Diagonal).unwrap();
        assert!(sweep(&p, 10).is_err());
    }
}
