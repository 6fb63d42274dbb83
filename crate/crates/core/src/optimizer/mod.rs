//! Modified gradient ascent on objective sequences, the assumption audits
//! that license it, and the certified error bound.

mod algorithm1;
mod algorithm3;
mod bound;
mod config;
mod lemma;
mod record;

pub use algorithm1::run_algorithm1;
pub use algorithm3::{gradient_floor, run_algorithm3};
pub use bound::{certified_bound, BoundReport};
pub use config::{Algo1Config, Algo3Config, DEFAULT_MAX_BACKTRACKS};
pub use lemma::{
    verify_lemma1, verify_lemma1_at, verify_lemma5, verify_lemma5_at, Lemma1Report, Lemma5Report, PROXY_OFFSET,
};
pub use record::IterateRecord;

/// Gradients with every component below this are treated as zero.
pub const ZERO_GRADIENT_TOL: f64 = 1e-14;

/// Relative slack granted to sufficient-increase tests, in units of the
/// objective magnitude. Once iterates settle, the increase being tested is
/// below the rounding error of the objective itself.
pub const ROUNDING_SLACK: f64 = 16.0 * f64::EPSILON;

pub(crate) fn rounding_slack(value: f64) -> f64 {
    ROUNDING_SLACK * value.abs().max(1.0)
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn step(theta: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    theta.iter().zip(d).map(|(x, g)| x + t * g).collect()
}
