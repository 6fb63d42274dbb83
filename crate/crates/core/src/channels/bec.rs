//! Binary erasure channel `Y_n = X_n · E_n` with a (1,∞)-RLL first-order
//! Markov input on `{1, 2}`.

use nalgebra::DMatrix;

use crate::domain::ParamDomain;
use crate::error::{Error, Result};
use crate::markov::{
    binary_entropy, conditional_entropy_forward, solve_stationary, xlnx_neg, HiddenMarkovSource, MarkovChain,
};
use crate::objective::{ObjectiveSequence, SequenceConstants};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecRllChannel {
    epsilon: f64,
}

impl BecRllChannel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!("erasure probability must lie in (0,1), got {epsilon}")));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Noise entropy `H(ε)`.
    pub fn noise_entropy(&self) -> f64 {
        h2(self.epsilon)
    }
}

impl Default for BecRllChannel {
    fn default() -> Self {
        Self { epsilon: 0.1 }
    }
}

fn h2(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    xlnx_neg(p) + xlnx_neg(1.0 - p)
}

/// `f_k(θ)`, the truncation after `k` terms of the erasure-weighted series of
/// conditional input entropies; `f_0 = f_1`.
pub fn bec_fk(ch: &BecRllChannel, theta: f64, k: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::ProbabilityOutOfRange(theta));
    }
    let eps = ch.epsilon;
    let scale = (1.0 - eps) * (1.0 - eps);
    let denom = 1.0 + theta;
    let mut value = h2(theta) / denom;
    // (−θ)^l and ε^{l−1}, advanced together.
    let mut neg_pow = theta * theta;
    let mut eps_pow = eps;
    for _ in 2..=k {
        let next_pow = -theta * neg_pow;
        value += (h2((1.0 - next_pow) / denom) / denom + theta / denom * h2((1.0 - neg_pow) / denom)) * eps_pow;
        neg_pow = next_pow;
        eps_pow *= eps;
    }
    Ok(scale * value)
}

/// Output process as a hidden-Markov source: hidden input symbol, outputs
/// `0` (erased), `1`, `2`.
pub fn bec_output_source(ch: &BecRllChannel, theta: f64) -> Result<HiddenMarkovSource> {
    let chain = MarkovChain::from_rows(&[&[1.0 - theta, theta], &[1.0, 0.0]])?;
    let init = solve_stationary(&chain)?;
    let e = ch.epsilon;
    let emit = DMatrix::from_row_slice(2, 3, &[e, 1.0 - e, 0.0, e, 0.0, 1.0 - e]);
    HiddenMarkovSource::with_init(chain, init, emit, true)
}

/// Upper bound `H(Y_3 | Y_1, Y_2) − H(ε) ≥ f(θ)` used to rule out maxima
/// near the ends of `[0, 1]`.
pub fn bec_output_upper_bound(ch: &BecRllChannel, theta: f64) -> Result<f64> {
    let src = bec_output_source(ch, theta)?;
    Ok(conditional_entropy_forward(&src, 3)? - binary_entropy(ch.epsilon)?)
}

/// BEC objective sequence with its default box `[0.2, 0.6]` and constants
/// `N = 371`, `ρ = 0.1`, `M = 5.81`, `m = 1.88`, `k0 = 18`.
#[derive(Debug, Clone, PartialEq)]
pub struct BecObjective {
    channel: BecRllChannel,
    domain: ParamDomain,
    constants: SequenceConstants,
}

pub fn bec_objective(ch: BecRllChannel) -> BecObjective {
    BecObjective {
        channel: ch,
        domain: ParamDomain::interval(0.2, 0.6).expect("static domain"),
        constants: SequenceConstants::with_constant_n(371.0, 0.1, 5.81, Some(1.88), 18).expect("static constants"),
    }
}

impl BecObjective {
    pub fn channel(&self) -> &BecRllChannel {
        &self.channel
    }

    pub fn with_domain(mut self, domain: ParamDomain) -> Result<Self> {
        if domain.dim() != 1 || domain.lower()[0] < 0.0 || domain.upper()[0] > 1.0 {
            return Err(Error::InvalidDomain("BEC parameter box must be a subinterval of [0,1]".into()));
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

impl ObjectiveSequence for BecObjective {
    fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    fn constants(&self) -> &SequenceConstants {
        &self.constants
    }

    fn eval(&self, k: usize, theta: &[f64]) -> Result<f64> {
        self.domain.check_dim(theta)?;
        bec_fk(&self.channel, theta[0], k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_input_carries_nothing() {
        let ch = BecRllChannel::default();
        for k in [0, 1, 5, 50] {
            assert_eq!(bec_fk(&ch, 0.0, k).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_term() {
        let ch = BecRllChannel::default();
        let expected = 0.81 * std::f64::consts::LN_2 / 1.5;
        assert!((bec_fk(&ch, 0.5, 0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.3742993).abs() < 1e-6);
        assert_eq!(bec_fk(&ch, 0.5, 0).unwrap(), bec_fk(&ch, 0.5, 1).unwrap());
    }

    #[test]
    fn readbacks() {
        let obj = bec_objective(BecRllChannel::default());
        let c = obj.constants();
        assert_eq!((c.n_at(0), c.n_at(50), c.rho, c.big_m, c.m, c.k0), (371.0, 371.0, 0.1, 5.81, Some(1.88), 18));
        assert_eq!(obj.domain().lower(), &[0.2]);
        assert_eq!(obj.domain().upper(), &[0.6]);
        let v = obj.eval(100, &[0.4]).unwrap();
        assert!(v > 0.4420 && v < 0.4423, "{v}");
    }

    #[test]
    fn erasure_range_checked() {
        assert!(BecRllChannel::new(0.0).is_err());
        assert!(BecRllChannel::new(1.0).is_err());
        assert!(bec_fk(&BecRllChannel::default(), 1.5, 3).is_err());
    }

    #[test]
    fn upper_bound_exceeds_series() {
        let ch = BecRllChannel::default();
        for theta in [0.1, 0.3, 0.4, 0.7] {
            let ub = bec_output_upper_bound(&ch, theta).unwrap();
            let f = bec_fk(&ch, theta, 60).unwrap();
            assert!(ub >= f - 1e-12, "θ={theta}: {ub} < {f}");
        }
    }
}
