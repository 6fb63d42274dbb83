//! Reference runs shared by the integration tests.
#![allow(dead_code)]

use fsc_capacity::channels::*;
use fsc_capacity::optimizer::*;
use fsc_capacity::objective::gradient_fd;
use fsc_capacity::{Error, ObjectiveSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BEC_K: usize = 110;
pub const NOISELESS_K: usize = 450;

/// Published iterates of the floored run on the default GE channel, rows
/// `k = 7..=16` as `(θ_k, f_k(θ_k))`.
pub const GE_TABLE: [(f64, f64); 10] = [
    (0.28824, 0.327527),
    (0.378401, 0.347958),
    (0.404626, 0.349884),
    (0.415306, 0.350211),
    (0.417635, 0.350248),
    (0.421001, 0.350281),
    (0.422514, 0.350288),
    (0.4232, 0.350289),
    (0.423511, 0.350289),
    (0.423653, 0.350289),
];

pub fn concave_config(outer_iters: usize) -> Algo1Config {
    Algo1Config::new(0.4, 0.9, vec![0.5], outer_iters)
}

pub fn bec_run() -> (BecObjective, Algo1Config, Vec<IterateRecord>) {
    let obj = bec_objective(BecRllChannel::default());
    let cfg = concave_config(BEC_K);
    let trace = run_algorithm1(&obj, &cfg).expect("BEC run");
    (obj, cfg, trace)
}

pub fn noiseless_run() -> (NoiselessObjective, Algo1Config, Vec<IterateRecord>) {
    let obj = noiseless_objective();
    let cfg = concave_config(NOISELESS_K);
    let trace = run_algorithm1(&obj, &cfg).expect("noiseless run");
    (obj, cfg, trace)
}

pub fn ge_config(y0: f64) -> Algo3Config {
    Algo3Config::new(
        Algo1Config::new(GE_DEFAULT_ALPHA, GE_DEFAULT_BETA, vec![GE_DEFAULT_THETA0], GE_DEFAULT_OUTER_ITERS),
        GE_DEFAULT_B,
        y0,
    )
}

/// Floored run on the default GE channel; backtrack exhaustion is a normal
/// stop, so the partial trace is returned in that case.
pub fn ge_run() -> (GeObjective, Algo3Config, Vec<IterateRecord>) {
    let obj = ge_objective(GilbertElliott::default()).expect("GE objective");
    let audit = verify_lemma5_at(&obj, GE_DEFAULT_B, 91, GE_PROXY_K).expect("GE audit");
    let cfg = ge_config(audit.y0);
    let trace = match run_algorithm3(&obj, &cfg) {
        Ok(t) => t,
        Err(Error::BacktracksExhausted { partial, .. }) => partial,
        Err(e) => panic!("GE run: {e}"),
    };
    (obj, cfg, trace)
}

/// Re-evaluates the sufficient-increase test of every record. `slack_rate`
/// gives the drift allowance per unit step at order `k + k0`; `rounding`
/// adds the runner's relative rounding allowance.
pub fn armijo_violations<S: ObjectiveSequence>(
    seq: &S,
    alpha: f64,
    theta0: &[f64],
    trace: &[IterateRecord],
    slack_rate: impl Fn(usize) -> f64,
    rounding: bool,
) -> Vec<usize> {
    let k0 = seq.constants().k0;
    let mut prev = theta0.to_vec();
    let mut bad = Vec::new();
    for rec in trace {
        let kk = rec.outer_k + k0;
        let d = if rec.perturbed {
            let drift = seq.constants().rho.powi(kk as i32);
            let shifted: Vec<f64> = prev.iter().map(|x| x + drift).collect();
            seq.grad(kk - 1, &shifted).unwrap()
        } else {
            seq.grad(kk - 1, &prev).unwrap()
        };
        let d_sq: f64 = d.iter().map(|x| x * x).sum();
        let base = seq.eval(kk, &prev).unwrap();
        let now = seq.eval(kk, &rec.theta).unwrap();
        assert_eq!(now.to_bits(), rec.f_value.to_bits(), "recorded value differs at k={}", rec.outer_k);
        let tol = if rounding { ROUNDING_SLACK * base.abs().max(1.0) } else { 0.0 };
        if now < base + alpha * rec.step_t * d_sq - slack_rate(kk) * rec.step_t - tol {
            bad.push(rec.outer_k);
        }
        prev = rec.theta.clone();
    }
    bad
}

/// Central differences at `h`, `h/2`, `h/4` at 20 seeded interior points.
/// The constant `C` is fitted from the first pair; the second pair must then
/// obey `|g(h/2) − g(h/4)| ≤ C (h/2)²`, and the default-step gradient must
/// agree with the Richardson extrapolation.
pub fn richardson<S: ObjectiveSequence>(seq: &S, k: usize, h: f64, seed: u64) -> Result<(), String> {
    let d = seq.domain();
    let (lo, hi) = (d.lower()[0] + 2.0 * h, d.upper()[0] - 2.0 * h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<f64> = (0..20).map(|_| rng.random_range(lo..hi)).collect();
    let g = |t: f64, step: f64| gradient_fd(seq, k, &[t], step).unwrap().gradient[0];
    let rows: Vec<(f64, f64, f64, f64)> = pts.iter().map(|&t| (t, g(t, h), g(t, h / 2.0), g(t, h / 4.0))).collect();
    let c = rows.iter().map(|r| (r.1 - r.2).abs() / (h * h)).fold(0.0, f64::max);
    for &(t, g1, g2, g4) in &rows {
        let second = (g2 - g4).abs();
        if second > c * (h / 2.0).powi(2) + 1e-10 {
            return Err(format!("θ={t}: {second:.3e} vs C={c:.3e}"));
        }
        let extrapolated = (4.0 * g4 - g2) / 3.0;
        let default = seq.grad(k, &[t]).unwrap()[0];
        if (default - extrapolated).abs() >= 1e-6 {
            return Err(format!("θ={t}: {default} vs {extrapolated} ({g1})"));
        }
    }
    Ok(())
}
