use super::{norm2, rounding_slack, step, Algo1Config, IterateRecord, ZERO_GRADIENT_TOL};
use crate::error::{Error, Result};
use crate::objective::ObjectiveSequence;

/// Backtracking ascent on `g_k = f_{k+k0}` with the drift-perturbed Armijo
/// test, for strongly concave limits.
pub fn run_algorithm1<S>(seq: &S, cfg: &Algo1Config) -> Result<Vec<IterateRecord>>
where
    S: ObjectiveSequence + ?Sized,
{
    let domain = seq.domain();
    let c = seq.constants();
    cfg.validate(domain)?;
    if c.m.is_none() {
        return Err(Error::InvalidConstants(
            "the concave runner needs a strong-concavity modulus m".into(),
        ));
    }
    let k0 = c.k0;
    let mut theta = cfg.theta0.clone();
    let mut grad = seq.grad(k0, &theta)?;
    if norm2(&grad) <= ZERO_GRADIENT_TOL {
        return Err(Error::InitialPoint("gradient vanishes at theta0".into()));
    }
    let mut trace = Vec::with_capacity(cfg.outer_iters);
    for k in 1..=cfg.outer_iters {
        let kk = k + k0;
        let drift = c.rho.powi(kk as i32);
        let perturbed = grad.iter().all(|g| g.abs() <= ZERO_GRADIENT_TOL);
        let d = if perturbed {
            let shifted: Vec<f64> = theta.iter().map(|x| x + drift).collect();
            seq.grad(kk - 1, &shifted)?
        } else {
            grad.clone()
        };
        let d_sq = d.iter().map(|x| x * x).sum::<f64>();
        let base = seq.eval(kk, &theta)?;
        let slack_rate = (c.n_at(kk) + c.big_m) * c.big_m * drift;
        let tol = rounding_slack(base);
        let mut backtracks = 0;
        let (tau, value, t) = loop {
            let t = cfg.beta.powi(backtracks as i32);
            let tau = step(&theta, t, &d);
            if domain.is_interior(&tau) {
                let v = seq.eval(kk, &tau)?;
                if v >= base + cfg.alpha * t * d_sq - slack_rate * t - tol {
                    break (tau, v, t);
                }
            }
            backtracks += 1;
            if backtracks > cfg.max_backtracks {
                return Err(Error::BacktracksExhausted {
                    outer_k: k,
                    partial: trace,
                });
            }
        };
        grad = seq.grad(kk, &tau)?;
        trace.push(IterateRecord {
            outer_k: k,
            theta: tau.clone(),
            f_value: value,
            grad_norm: norm2(&grad),
            step_t: t,
            backtracks,
            perturbed,
            floor_active: false,
        });
        theta = tau;
    }
    Ok(trace)
}
