use super::{rounding_slack, Algo1Config, IterateRecord};
use crate::error::{Error, Result};
use crate::objective::ObjectiveSequence;

/// Certified enclosure of the maximum `f(θ*)` after a concave run.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Largest per-iteration contraction `1 − 2mα·t_k` observed in the run.
    pub eta: f64,
    /// `1 − min{2mα, (dist/M)·2mαβ, 2mαβ/M}`, the uniform contraction from
    /// the worst admissible step.
    pub eta_a_priori: f64,
    /// `(NM + M² + 2N)/ρ + 2NM` with `N = N(K + k0)`.
    pub gamma_coeff: f64,
    /// Bound on `f(θ*) − f(θ_K)`.
    pub recursion_bound: f64,
    /// `N(K + k0) ρ^{K+k0}`.
    pub tail: f64,
    pub interval: (f64, f64),
    pub delta0: f64,
}

/// Runs the gap recursion `e_k ≤ η_k e_{k−1} + γ_k` from `e_0 = delta0`
/// along `trace`, with `η_k = max(0, 1 − 2mα t_k)` for the accepted step
/// `t_k` and `γ_k = gamma_coeff · ρ^{k+k0+1}` plus the rounding slack the
/// line search allowed, then adds the drift tail.
pub fn certified_bound<S>(
    trace: &[IterateRecord],
    seq: &S,
    cfg: &Algo1Config,
    dist_c: f64,
    delta0: f64,
) -> Result<BoundReport>
where
    S: ObjectiveSequence + ?Sized,
{
    let c = seq.constants();
    let m = c
        .m
        .ok_or_else(|| Error::InvalidConstants("certified bound needs a strong-concavity modulus m".into()))?;
    let last = trace
        .last()
        .ok_or_else(|| Error::InvalidArgument("empty trace".into()))?;
    if !(delta0 >= 0.0 && delta0.is_finite()) {
        return Err(Error::InvalidArgument(format!("delta0 must be a finite gap bound, got {delta0}")));
    }
    if !(dist_c > 0.0) {
        return Err(Error::ConvergenceConstants(format!("dist(C, boundary) = {dist_c} is not positive")));
    }
    let (alpha, beta, big_m, rho, k0) = (cfg.alpha, cfg.beta, c.big_m, c.rho, c.k0);
    let k_final = last.outer_k;
    let contraction = [
        2.0 * m * alpha,
        dist_c / big_m * 2.0 * m * alpha * beta,
        2.0 * m * alpha * beta / big_m,
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    let eta_a_priori = 1.0 - contraction;
    if !(eta_a_priori > 0.0 && eta_a_priori < 1.0) {
        return Err(Error::ConvergenceConstants(format!("eta = {eta_a_priori} outside (0,1)")));
    }
    let n = c.n_at(k_final + k0);
    let gamma_coeff = (n * big_m + big_m * big_m + 2.0 * n) / rho + 2.0 * n * big_m;
    let mut gap = delta0;
    let mut eta: f64 = 0.0;
    for rec in trace {
        let eta_k = (1.0 - 2.0 * m * alpha * rec.step_t).max(0.0);
        eta = eta.max(eta_k);
        let gamma = gamma_coeff * rho.powi((rec.outer_k + k0 + 1) as i32) + rounding_slack(rec.f_value);
        gap = eta_k * gap + gamma;
    }
    if !(eta < 1.0) {
        return Err(Error::ConvergenceConstants(format!("observed contraction {eta} is not below 1")));
    }
    let tail = c.drift(k_final + k0);
    Ok(BoundReport {
        eta,
        eta_a_priori,
        gamma_coeff,
        recursion_bound: gap,
        tail,
        interval: (last.f_value - tail, last.f_value + tail + gap),
        delta0,
    })
}
