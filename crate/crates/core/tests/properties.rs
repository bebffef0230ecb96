use aqabound::algorithm_zoo::{dj_das, dj_wei, grover, kclique, BooleanFunctionSpec, GroverForm, Problem};
use aqabound::bound_engine::{compute_bound, kclique_combinatorial, kclique_meanfield, moments_check};
use aqabound::dynamics::{integrate, min_adiabatic_time, verify_chain, MinTimeOptions, Schedule, ScheduleShape};
use aqabound::gap_analysis::sweep;
use aqabound::graph_tools::{cost_values, count_kcliques, random_graph};
use proptest::prelude::*;

fn small_problem(kind: u8, n: usize, variant: u64) -> Problem {
    let f = if variant.is_multiple_of(3) {
        BooleanFunctionSpec::Constant { bit: variant.is_multiple_of(2) }
    } else {
        BooleanFunctionSpec::Balanced { variant: variant as u32 }
    };
    match kind % 3 {
        0 => dj_das(n, &f).unwrap(),
        1 => dj_wei(n, &f).unwrap(),
        _ => grover(n, &[variant % (1 << n)], GroverForm::Diagonal).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimators_agree(n in 2usize..=10, k_off in 0usize..9, pi in 0usize..3) {
        let k = 2 + k_off % (n - 1);
        let p = [0.25, 0.5, 0.75][pi];
        let a = kclique_meanfield(n, k, p).unwrap();
        let b = kclique_combinatorial(n, k, p).unwrap();
        prop_assert!((a.e_h - b.e_h).abs() <= 1e-12 * a.e_h.max(1.0));
        prop_assert!((a.e_h2 - b.e_h2).abs() <= 1e-12 * a.e_h2.max(1.0));
    }

    #[test]
    fn grover_forms_give_same_bound(n in 2usize..=6, m in 0u64..64, eps in 0.01f64..0.5) {
        let marked = [m % (1 << n)];
        let d = compute_bound(&grover(n, &marked, GroverForm::Diagonal).unwrap(), eps, 1.0).unwrap();
        let p = compute_bound(&grover(n, &marked, GroverForm::Projector).unwrap(), eps, 1.0).unwrap();
        prop_assert!((d.t_lower - p.t_lower).abs() < 1e-12);
        prop_assert!((d.delta_v - p.delta_v).abs() < 1e-12);
    }

    #[test]
    fn moments_condition_fixes_uncertainty(kind in 0u8..3, n in 2usize..=6, variant in 0u64..40) {
        let p = small_problem(kind, n, variant);
        let r = compute_bound(&p, 0.1, 1.0).unwrap();
        if moments_check(&p).unwrap().holds {
            prop_assert!((r.delta_v - (r.mean1 * (1.0 - r.mean1)).sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn clique_exists_iff_zero_cost(n in 3usize..=8, k_off in 0usize..6, seed in any::<u64>(), p in 0.0f64..=1.0) {
        let k = 2 + k_off % (n - 1);
        let g = random_graph(n, p, seed).unwrap();
        let h = cost_values(&g, k, false).unwrap();
        let min = h.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(min == 0.0, count_kcliques(&g, k).unwrap() > 0);
    }

    #[test]
    fn deformed_cost_satisfies_moments(n in 4usize..=7, seed in any::<u64>()) {
        let g = random_graph(n, 0.5, seed).unwrap();
        let p = kclique(&g, 3, true).unwrap();
        prop_assert!(moments_check(&p).unwrap().residual < 1e-12);
    }

    #[test]
    fn refined_gap_is_below_grid(kind in 0u8..3, n in 2usize..=4, variant in 0u64..20) {
        let p = small_problem(kind, n, variant);
        let prof = sweep(&p, 17).unwrap();
        prop_assert!(prof.gaps.iter().all(|&g| prof.g_min <= g && g >= 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn chain_holds_on_random_runs(kind in 0u8..3, n in 2usize..=3, variant in 0u64..20, t in 0.2f64..20.0, q in 0.5f64..3.0) {
        let p = small_problem(kind, n, variant);
        let s = Schedule::new(ScheduleShape::Power { exponent: q }, t).unwrap();
        let traj = integrate(&p, &s, 4000).unwrap();
        prop_assert!(verify_chain(&traj).is_ok());
        prop_assert!(traj.samples.iter().all(|x| x.theta <= x.r.min(std::f64::consts::FRAC_PI_2) + 1e-8));
    }
}

#[test]
fn minimal_time_dominates_bound() {
    let opts = MinTimeOptions::default();
    for n in 2..=4 {
        let f = BooleanFunctionSpec::Balanced { variant: 0 };
        for p in [
            dj_das(n, &f).unwrap(),
            dj_wei(n, &f).unwrap(),
            grover(n, &[1], GroverForm::Diagonal).unwrap(),
            aqabound::algorithm_zoo::bernstein_vazirani(n, 1).unwrap(),
        ] {
            for eps in [0.1, 0.25] {
                let mt = min_adiabatic_time(&p, &ScheduleShape::Linear, eps, &opts).unwrap();
                let bound = compute_bound(&p, eps, 1.0).unwrap();
                assert!(mt.t_min >= bound.t_lower, "{} n={n} eps={eps}", p.name());
            }
        }
    }
}
