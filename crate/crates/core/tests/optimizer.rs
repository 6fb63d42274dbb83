mod common;

use common::*;
use fsc_capacity::channels::*;
use fsc_capacity::optimizer::*;
use fsc_capacity::{Error, FnObjective, ObjectiveSequence, ParamDomain, SequenceConstants};
use proptest::prelude::*;

fn quadratic(center: f64, n: f64) -> FnObjective<impl Fn(usize, &[f64]) -> f64 + Send + Sync> {
    FnObjective::new(
        ParamDomain::interval(0.0, 1.0).unwrap(),
        SequenceConstants::with_constant_n(n, 0.5, 2.0, Some(2.0), 0).unwrap(),
        move |_, t: &[f64]| -(t[0] - center).powi(2),
    )
}

// ---------------------------------------------------------------- synthetic

#[test]
fn concave_runner_finds_quadratic_maximum() {
    let f = quadratic(0.3, 1.0);
    let trace = run_algorithm1(&f, &Algo1Config::new(0.4, 0.9, vec![0.7], 60)).unwrap();
    assert_eq!(trace.len(), 60);
    assert!((trace[59].theta[0] - 0.3).abs() < 1e-6, "{:?}", trace[59]);
}

#[test]
fn floored_runner_on_concave_instance() {
    let f = quadratic(0.3, 1e-5);
    let cfg = Algo3Config::new(Algo1Config::new(0.4, 0.5, vec![0.7], 60), 0.5, -1.0);
    let trace = match run_algorithm3(&f, &cfg) {
        Ok(t) => t,
        Err(Error::BacktracksExhausted { partial, .. }) => partial,
        Err(e) => panic!("{e}"),
    };
    let last = trace.last().unwrap();
    assert!((last.theta[0] - 0.3).abs() < 1e-4, "{last:?}");
    let floor = gradient_floor(f.constants(), last.outer_k + f.constants().k0, cfg.b);
    assert!(last.grad_norm <= floor / cfg.base.beta, "{} vs {}", last.grad_norm, floor / cfg.base.beta);
}

#[test]
fn config_validation() {
    let d = ParamDomain::interval(0.0, 1.0).unwrap();
    let err = Algo1Config::new(0.6, 0.9, vec![0.5], 5).validate(&d).unwrap_err();
    assert!(err.to_string().contains("alpha must lie in (0,0.5)"), "{err}");
    assert!(Algo1Config::new(0.4, 1.0, vec![0.5], 5).validate(&d).is_err());
    assert!(Algo1Config::new(0.4, 0.9, vec![0.5], 0).validate(&d).is_err());
    assert!(Algo1Config::new(0.4, 0.9, vec![1.0], 5).validate(&d).is_err());
    let base = Algo1Config::new(0.4, 0.9, vec![0.5], 5);
    assert!(Algo3Config::new(base, 1.0, 0.0).validate(&d).is_err());
}

#[test]
fn backtrack_cap_returns_partial_trace() {
    // Constants that claim far too little drift for a sequence that keeps moving.
    let f = FnObjective::new(
        ParamDomain::interval(0.0, 1.0).unwrap(),
        SequenceConstants::with_constant_n(1e-12, 0.5, 2.0, Some(2.0), 0).unwrap(),
        |k, t: &[f64]| -(t[0] - 0.3).powi(2) - if k >= 3 { 1.0 } else { 0.0 } * (t[0] - 0.3).abs(),
    );
    let mut cfg = Algo1Config::new(0.4, 0.9, vec![0.7], 10);
    cfg.max_backtracks = 20;
    match run_algorithm1(&f, &cfg) {
        Err(Error::BacktracksExhausted { partial, outer_k }) => {
            assert_eq!(partial.len(), outer_k - 1);
        }
        other => panic!("expected exhaustion, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthetic_runs_stay_interior_and_pass_armijo(
        center in 0.05f64..0.95,
        start in 0.05f64..0.95,
        alpha in 0.05f64..0.49,
        beta in 0.1f64..0.95,
    ) {
        let f = quadratic(center, 1.0);
        prop_assume!((start - center).abs() > 1e-3);
        let cfg = Algo1Config::new(alpha, beta, vec![start], 25);
        let trace = run_algorithm1(&f, &cfg).unwrap();
        for r in &trace {
            prop_assert!(f.domain().is_interior(&r.theta));
            prop_assert_eq!(r.step_t, beta.powi(r.backtracks as i32));
        }
        let c = f.constants().clone();
        let bad = armijo_violations(&f, alpha, &[start], &trace, |kk| (c.n_at(kk) + c.big_m) * c.big_m * c.rho.powi(kk as i32), true);
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }
}

// ---------------------------------------------------------------- audits

#[test]
fn lemma1_edge_maximum_fails() {
    let f = FnObjective::new(
        ParamDomain::interval(0.0, 1.0).unwrap(),
        SequenceConstants::with_constant_n(1e-9, 0.5, 2.0, Some(1.0), 0).unwrap(),
        |_, t: &[f64]| t[0],
    );
    let r = verify_lemma1(&f, 21).unwrap();
    assert!(r.delta_est <= 0.0 && !r.passed, "{r:?}");
}

#[test]
fn lemma1_bec_passes() {
    let obj = bec_objective(BecRllChannel::default());
    let r = verify_lemma1(&obj, 201).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.k0_checked, 18);
}

#[test]
fn lemma1_noiseless_passes() {
    let r = verify_lemma1(&noiseless_objective(), 201).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn lemma5_condition_a_arithmetic() {
    let f = FnObjective::new(
        ParamDomain::interval(0.0, 1.0).unwrap(),
        SequenceConstants::with_constant_n(1e-9, 0.9, 2.0, None, 0).unwrap(),
        |_, t: &[f64]| -(t[0] - 0.5).powi(2),
    );
    let r = verify_lemma5(&f, 0.5, 21).unwrap();
    assert!(r.cond_a_lhs.0 >= 1.0 && !r.passed, "{r:?}");
}

#[test]
fn lemma5_flat_sequence_has_no_witness() {
    let f = FnObjective::new(
        ParamDomain::interval(0.0, 1.0).unwrap(),
        SequenceConstants::with_constant_n(1e-9, 0.1, 2.0, None, 3).unwrap(),
        |_, _: &[f64]| 0.25,
    );
    let r = verify_lemma5(&f, 0.5, 21).unwrap();
    assert!(r.witness.is_none() && !r.passed, "{r:?}");
}

#[test]
fn lemma5_ge_finds_start() {
    let obj = ge_objective(GilbertElliott::default()).unwrap();
    let r = verify_lemma5_at(&obj, 0.5, 91, GE_PROXY_K).unwrap();
    assert!(r.passed, "{r:?}");
    let w = r.witness.unwrap()[0];
    assert!((w - 0.2).abs() <= 0.1, "{w}");
}

// ---------------------------------------------------------------- channel runs

#[test]
fn channel_runs_stay_interior() {
    let (bec, _, t1) = bec_run();
    let (nl, _, t2) = noiseless_run();
    let (ge, _, t3) = ge_run();
    assert!(t1.iter().all(|r| bec.domain().is_interior(&r.theta)));
    assert!(t2.iter().all(|r| nl.domain().is_interior(&r.theta)));
    assert!(t3.iter().all(|r| ge.domain().is_interior(&r.theta)));
}

#[test]
fn armijo_ledger_bec_and_noiseless() {
    let (bec, cfg, trace) = bec_run();
    let c = bec.constants().clone();
    let rate = |kk: usize| (c.n_at(kk) + c.big_m) * c.big_m * c.rho.powi(kk as i32);
    assert!(armijo_violations(&bec, cfg.alpha, &cfg.theta0, &trace, rate, true).is_empty());

    let (nl, cfg, trace) = noiseless_run();
    let c = nl.constants().clone();
    let rate = |kk: usize| (c.n_at(kk) + c.big_m) * c.big_m * c.rho.powi(kk as i32);
    assert!(armijo_violations(&nl, cfg.alpha, &cfg.theta0, &trace, rate, true).is_empty());
}

#[test]
fn armijo_ledger_ge() {
    let (ge, cfg, trace) = ge_run();
    assert!(armijo_violations(&ge, cfg.base.alpha, &cfg.base.theta0, &trace, |_| 0.0, false).is_empty());
}

#[test]
fn ge_floor_holds_at_every_record() {
    let (ge, cfg, trace) = ge_run();
    let c = ge.constants();
    for r in &trace {
        assert!(r.grad_norm >= gradient_floor(c, r.outer_k + c.k0, cfg.b), "{r:?}");
    }
}

#[test]
fn backtracks_uniformly_bounded() {
    let (_, _, t1) = bec_run();
    let (_, _, t2) = noiseless_run();
    let worst = t1.iter().chain(&t2).map(|r| r.backtracks).max().unwrap();
    assert!(worst <= 50, "{worst}");
}

#[test]
fn ge_tail_is_monotone() {
    let (_, _, trace) = ge_run();
    let half = &trace[trace.len() / 2..];
    for w in half.windows(2) {
        assert!(w[1].f_value >= w[0].f_value, "{:?} -> {:?}", w[0], w[1]);
    }
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `ln |f_k(θ_k) − target|` against `k` over `k ∈ [20, 100]`.
fn bec_gap_slope(target: f64) -> f64 {
    let (_, _, trace) = bec_run();
    let pts: Vec<(f64, f64)> = trace
        .iter()
        .filter(|r| (20..=100).contains(&r.outer_k))
        .filter_map(|r| {
            let gap = (r.f_value - target).abs();
            (gap > 0.0).then(|| (r.outer_k as f64, gap.ln()))
        })
        .collect();
    slope(&pts)
}

#[test]
fn bec_rate_slope_against_published_optimum() {
    let s = bec_gap_slope(0.4422390);
    assert!(s < 0.0, "{s}");
}

#[test]
fn bec_rate_slope_against_terminal_value() {
    let (_, _, trace) = bec_run();
    let s = bec_gap_slope(trace.last().unwrap().f_value);
    assert!(s < 0.0, "{s}");
}

// ---------------------------------------------------------------- certified bound

#[test]
fn bound_on_quadratic_contains_optimum() {
    let f = quadratic(0.3, 1e-3);
    let cfg = Algo1Config::new(0.4, 0.9, vec![0.7], 40);
    let trace = run_algorithm1(&f, &cfg).unwrap();
    let rep = certified_bound(&trace, &f, &cfg, 0.3, 2.0 * f.constants().big_m).unwrap();
    assert!(rep.interval.0 <= 0.0 && 0.0 <= rep.interval.1, "{rep:?}");
    // A pure quadratic with m = M can contract fully in one step.
    assert!(rep.eta >= 0.0 && rep.eta < 1.0, "{rep:?}");
    assert!(rep.eta_a_priori > 0.0 && rep.eta_a_priori < 1.0);
    assert!(rep.eta <= rep.eta_a_priori);
    let last = trace.last().unwrap();
    assert_eq!(rep.interval.0, last.f_value - rep.tail);
    assert_eq!(rep.interval.1, last.f_value + rep.tail + rep.recursion_bound);
}

#[test]
fn bound_rejects_inconsistent_constants() {
    let f = FnObjective::new(
        ParamDomain::interval(0.0, 1.0).unwrap(),
        SequenceConstants::with_constant_n(1.0, 0.5, 4.0, Some(4.0), 0).unwrap(),
        |_, t: &[f64]| -2.0 * (t[0] - 0.3).powi(2),
    );
    let cfg = Algo1Config::new(0.4, 0.9, vec![0.7], 5);
    let trace = run_algorithm1(&f, &cfg).unwrap();
    assert!(certified_bound(&trace, &f, &cfg, 0.25, 1.0).is_ok());
    assert!(matches!(
        certified_bound(&trace, &f, &cfg, 0.0, 1.0),
        Err(Error::ConvergenceConstants(_))
    ));
    // Outside the validated step range every contraction term exceeds one.
    let wild = Algo1Config::new(0.6, 0.99, vec![0.7], 5);
    let err = certified_bound(&trace, &f, &wild, 2.0, 1.0).unwrap_err();
    assert!(matches!(err, Error::ConvergenceConstants(_)), "{err}");
    assert!(certified_bound(&[], &f, &cfg, 0.3, 1.0).is_err());
}
