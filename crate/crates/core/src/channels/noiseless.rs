//! Noiseless two-state channel `Y_n = φ(S_{n−1}, X_n)` with `S_n = X_n`,
//! `φ(0,0) = 1` and `φ = 0` otherwise, driven by an i.i.d. input with
//! `P(X = 0) = θ`.

use nalgebra::{DMatrix, Matrix3, RowVector3, Vector3};

use crate::domain::ParamDomain;
use crate::error::{Error, Result};
use crate::markov::{HiddenMarkovSource, MarkovChain};
use crate::objective::{ObjectiveSequence, SequenceConstants};

/// `φ(s, x)` indexed `[s][x]`.
pub const PHI: [[u8; 2]; 2] = [[1, 0], [0, 0]];

const RATIO_TOL: f64 = 1e-12;

/// Marker type for the channel; `φ` and the induced constraint are fixed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NoiselessTwoState;

/// Partial sum over `l = 0..=k` of the unambiguous-symbol series for the
/// output entropy rate.
///
/// `r B^{−1} 1` and `r B^{−1} c` are read as `1`.
pub fn noiseless_fk(theta: f64, k: usize) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::ProbabilityOutOfRange(theta));
    }
    let b = Matrix3::new(
        0.0, theta, 1.0 - theta, //
        1.0 - theta, 0.0, 0.0, //
        0.0, theta, 1.0 - theta,
    );
    let c = Vector3::new(0.0, theta, 0.0);
    let one = Vector3::new(1.0, 1.0, 1.0);
    let pi1 = theta * theta;
    // r B^l, starting at l = 0.
    let mut rb = RowVector3::new(1.0 - theta, 0.0, 0.0);
    let mut prev_one = 1.0;
    let mut prev_c = 1.0;
    let mut value = 0.0;
    for _ in 0..=k {
        let cur_one = (rb * one)[0];
        value -= pi1 * log_term(cur_one, prev_one)?;
        value -= pi1 * log_term(prev_c, prev_one)?;
        prev_one = cur_one;
        prev_c = (rb * c)[0];
        rb *= b;
    }
    Ok(value)
}

/// `a ln(a / b)` for a conditional probability `a / b`.
fn log_term(a: f64, b: f64) -> Result<f64> {
    if a <= 0.0 {
        return Ok(0.0);
    }
    let ratio = a / b;
    if !(ratio <= 1.0 + RATIO_TOL) || b <= 0.0 {
        return Err(Error::Inconsistent(format!("conditional probability {a}/{b} exceeds 1")));
    }
    Ok(a * ratio.ln())
}

/// Output process as a hidden-Markov chain on `(X_{n−1}, X_n)` pairs
/// `00, 01, 10, 11`, with the deterministic emission `φ`.
pub fn noiseless_output_source(theta: f64) -> Result<HiddenMarkovSource> {
    let t = theta;
    let u = 1.0 - theta;
    #[rustfmt::skip]
    let chain = MarkovChain::from_rows(&[
        &[t, u, 0.0, 0.0],
        &[0.0, 0.0, t, u],
        &[t, u, 0.0, 0.0],
        &[0.0, 0.0, t, u],
    ])?;
    let init = vec![t * t, t * u, t * u, u * u];
    let mut emit = DMatrix::zeros(4, 2);
    for pair in 0..4 {
        let y = PHI[pair >> 1][pair & 1] as usize;
        emit[(pair, y)] = 1.0;
    }
    HiddenMarkovSource::with_init(chain, init, emit, true)
}

/// Noiseless objective sequence over `[0.4, 0.9]` with
/// `N(k) = 374.945k² + 6207.73k + 46587.2`, `ρ = 0.875`, `M = 10.37`,
/// `m = 1.2`, `k0 = 120`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiselessObjective {
    domain: ParamDomain,
    constants: SequenceConstants,
}

pub fn noiseless_objective() -> NoiselessObjective {
    NoiselessObjective {
        domain: ParamDomain::interval(0.4, 0.9).expect("static domain"),
        constants: SequenceConstants::new([46587.2, 6207.73, 374.945], 0.875, 10.37, Some(1.2), 120)
            .expect("static constants"),
    }
}

impl NoiselessObjective {
    pub fn with_domain(mut self, domain: ParamDomain) -> Result<Self> {
        if domain.dim() != 1 || domain.lower()[0] <= 0.0 || domain.upper()[0] >= 1.0 {
            return Err(Error::InvalidDomain("noiseless parameter box must lie inside (0,1)".into()));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn with_constants(mut self, constants: SequenceConstants) -> Result<Self> {
        constants.validate()?;
        self.constants = constants;
        Ok(self)
    }
}

impl ObjectiveSequence for NoiselessObjective {
    fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    fn constants(&self) -> &SequenceConstants {
        &self.constants
    }

    fn eval(&self, k: usize, theta: &[f64]) -> Result<f64> {
        self.domain.check_dim(theta)?;
        noiseless_fk(theta[0], k)
    }
}
