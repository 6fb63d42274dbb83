use super::{norm2, step, Algo3Config, IterateRecord};
use crate::error::{Error, Result};
use crate::objective::{ObjectiveSequence, SequenceConstants};

/// `2 N(k) ρ^{k/3} / (1 − b)`.
pub fn gradient_floor(c: &SequenceConstants, k: usize, b: f64) -> f64 {
    2.0 * c.n_at(k) * c.rho.powf(k as f64 / 3.0) / (1.0 - b)
}

/// Backtracking ascent with a gradient-norm floor, for limits that need not
/// be concave.
///
/// Backtrack exhaustion is the expected stop once the floor overtakes the
/// true gradient, or once the required increase drops below rounding; the
/// error carries every accepted iterate. The sufficient-increase test is
/// exact, with no rounding allowance.
pub fn run_algorithm3<S>(seq: &S, cfg: &Algo3Config) -> Result<Vec<IterateRecord>>
where
    S: ObjectiveSequence + ?Sized,
{
    let domain = seq.domain();
    let c = seq.constants();
    cfg.validate(domain)?;
    let base_cfg = &cfg.base;
    let k0 = c.k0;
    let mut theta = base_cfg.theta0.clone();
    let mut grad = seq.grad(k0, &theta)?;
    let floor0 = gradient_floor(c, k0, cfg.b);
    if norm2(&grad) < floor0 {
        return Err(Error::InitialPoint(format!(
            "gradient norm {} at theta0 is below the floor {floor0}",
            norm2(&grad)
        )));
    }
    let f0 = seq.eval(k0, &theta)?;
    if f0 < cfg.y0 {
        return Err(Error::InitialPoint(format!("f(theta0) = {f0} is below y0 = {}", cfg.y0)));
    }
    let mut trace = Vec::with_capacity(base_cfg.outer_iters);
    for k in 1..=base_cfg.outer_iters {
        let kk = k + k0;
        let floor = gradient_floor(c, kk, cfg.b);
        let d_sq = grad.iter().map(|x| x * x).sum::<f64>();
        let base = seq.eval(kk, &theta)?;
        let mut backtracks = 0;
        let mut floor_active = false;
        let accepted = loop {
            let t = base_cfg.beta.powi(backtracks as i32);
            let tau = step(&theta, t, &grad);
            if domain.is_interior(&tau) {
                let g = seq.grad(kk, &tau)?;
                if norm2(&g) >= floor {
                    let v = seq.eval(kk, &tau)?;
                    if v >= base + base_cfg.alpha * t * d_sq {
                        break (tau, v, t, g);
                    }
                    floor_active = false;
                } else {
                    floor_active = true;
                }
            } else {
                floor_active = false;
            }
            backtracks += 1;
            if backtracks > base_cfg.max_backtracks {
                return Err(Error::BacktracksExhausted {
                    outer_k: k,
                    partial: trace,
                });
            }
        };
        let (tau, value, t, g) = accepted;
        trace.push(IterateRecord {
            outer_k: k,
            theta: tau.clone(),
            f_value: value,
            grad_norm: norm2(&g),
            step_t: t,
            backtracks,
            perturbed: false,
            floor_active,
        });
        theta = tau;
        grad = g;
    }
    Ok(trace)
}
