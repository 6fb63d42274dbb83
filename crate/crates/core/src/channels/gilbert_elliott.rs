//! Gilbert-Elliott channel `Y_n = X_n ⊕ E_n` with a (1,∞)-RLL first-order
//! Markov input, where `E_n` is drawn from a BSC whose crossover depends on
//! the state `S_{n−1}`.

use nalgebra::DMatrix;

use crate::domain::ParamDomain;
use crate::error::{Error, Result};
use crate::markov::{conditional_entropy_forward, conditional_entropy_profile, solve_stationary, HiddenMarkovSource, MarkovChain};
use crate::objective::{ObjectiveSequence, SequenceConstants};

#[derive(Debug, Clone, PartialEq)]
pub struct GilbertElliott {
    state_chain: MarkovChain,
    crossover: [f64; 2],
}

impl GilbertElliott {
    pub fn new(state_chain: MarkovChain, crossover: [f64; 2]) -> Result<Self> {
        if state_chain.size() != 2 {
            return Err(Error::InvalidMatrix(format!(
                "state chain must be 2x2, got {}x{}",
                state_chain.size(),
                state_chain.size()
            )));
        }
        for c in crossover {
            if !(c > 0.0 && c < 1.0) {
                return Err(Error::InvalidArgument(format!("crossover probability must lie in (0,1), got {c}")));
            }
        }
        Ok(Self { state_chain, crossover })
    }

    pub fn state_chain(&self) -> &MarkovChain {
        &self.state_chain
    }

    pub fn crossover(&self) -> [f64; 2] {
        self.crossover
    }

    /// Input transition matrix `[[1−θ, θ], [1, 0]]`.
    pub fn input_chain(theta: f64) -> Result<MarkovChain> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::ProbabilityOutOfRange(theta));
        }
        MarkovChain::from_rows(&[&[1.0 - theta, theta], &[1.0, 0.0]])
    }

    /// Output source on hidden states `(X_n, S_{n−1})`, indexed `2x + s`.
    pub fn output_source(&self, theta: f64) -> Result<HiddenMarkovSource> {
        let px = Self::input_chain(theta)?;
        let ps = self.state_chain.matrix();
        let p = px.matrix().kronecker(ps);
        let chain = MarkovChain::new(p)?;
        let init = solve_stationary(&chain)?;
        let mut emit = DMatrix::zeros(4, 2);
        for x in 0..2 {
            for s in 0..2 {
                let c = self.crossover[s];
                emit[(2 * x + s, x)] = 1.0 - c;
                emit[(2 * x + s, 1 - x)] = c;
            }
        }
        HiddenMarkovSource::with_init(chain, init, emit, true)
    }

    /// Noise source on hidden states `S`; it does not depend on the input.
    pub fn error_source(&self) -> Result<HiddenMarkovSource> {
        let [c0, c1] = self.crossover;
        let emit = DMatrix::from_row_slice(2, 2, &[1.0 - c0, c0, 1.0 - c1, c1]);
        let init = solve_stationary(&self.state_chain)?;
        HiddenMarkovSource::with_init(self.state_chain.clone(), init, emit, true)
    }
}

impl Default for GilbertElliott {
    fn default() -> Self {
        let chain = MarkovChain::from_rows(&[&[0.7, 0.3], &[0.3, 0.7]]).expect("static chain");
        Self::new(chain, [0.01, 0.1]).expect("static channel")
    }
}

/// `H(E_k | E_1^{k−1})`.
pub fn ge_error_entropy(ch: &GilbertElliott, k: usize) -> Result<f64> {
    conditional_entropy_forward(&ch.error_source()?, k.max(1))
}

/// `f_k(θ) = H(Y_k | Y_1^{k−1}) − H(E_k | E_1^{k−1})`; `k = 0` is read as
/// `k = 1`.
pub fn ge_fk(ch: &GilbertElliott, theta: f64, k: usize) -> Result<f64> {
    let k = k.max(1);
    let hy = conditional_entropy_forward(&ch.output_source(theta)?, k)?;
    Ok(hy - ge_error_entropy(ch, k)?)
}

/// `f_1(θ), …, f_{k_max}(θ)` from one traversal per source.
pub fn ge_fk_profile(ch: &GilbertElliott, theta: f64, k_max: usize) -> Result<Vec<f64>> {
    let hy = conditional_entropy_profile(&ch.output_source(theta)?, k_max)?;
    let he = conditional_entropy_profile(&ch.error_source()?, k_max)?;
    Ok(hy.iter().zip(&he).map(|(y, e)| y - e).collect())
}

/// Rate fit of `ln |f_k(θ) − f_{k−1}(θ)|` against `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftFit {
    pub rho: f64,
    /// `exp` of the regression intercept.
    pub intercept: f64,
    /// Number of differences that entered the regression.
    pub points: usize,
}

/// Differences at or below this size are rounding noise of the entropy
/// sums and are left out of the fit.
pub const DRIFT_NOISE_FLOOR: f64 = 1e-12;

/// Least-squares fit of `ln |f_k − f_{k−1}| ≈ ln C + k ln ρ` over `ks`.
pub fn fit_drift<F>(ks: std::ops::RangeInclusive<usize>, mut f: F) -> Result<DriftFit>
where
    F: FnMut(usize) -> Result<f64>,
{
    let (lo, hi) = (*ks.start(), *ks.end());
    if lo == 0 || hi <= lo {
        return Err(Error::InvalidArgument("fit range needs 1 ≤ start < end".into()));
    }
    let mut prev = f(lo - 1)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in lo..=hi {
        let cur = f(k)?;
        let d = (cur - prev).abs();
        if d > DRIFT_NOISE_FLOOR {
            xs.push(k as f64);
            ys.push(d.ln());
        }
        prev = cur;
    }
    if xs.len() < 2 {
        return Err(Error::InvalidArgument("fewer than two usable differences".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(DriftFit {
        rho: slope.exp(),
        intercept: (my - slope * mx).exp(),
        points: xs.len(),
    })
}

/// Default `k0` of the GE objective.
pub const GE_DEFAULT_K0: usize = 6;

/// Default derivative bound `M` of the GE objective.
pub const GE_DEFAULT_M: f64 = 4.0;

/// Step parameters of the floored runner on the default channel. A sweep of
/// `α ∈ [0.22, 0.49]` and `b ∈ [0.80, 0.90]` shows the first four iterates
/// are insensitive to `α`; `b = 0.865` is the largest floor that still
/// admits the third full-length step.
pub const GE_DEFAULT_ALPHA: f64 = 0.4;
pub const GE_DEFAULT_BETA: f64 = 0.5;
pub const GE_DEFAULT_B: f64 = 0.865;
pub const GE_DEFAULT_THETA0: f64 = 0.2;
/// Outer iterations; with `k0 = 6` the run ends at `f_16`.
pub const GE_DEFAULT_OUTER_ITERS: usize = 10;
/// Proxy order for the start-up audit. `k0 + 40` is far beyond the entropy
/// engine's block cap, and `f_16` already agrees with the limit to `1e−9`.
pub const GE_PROXY_K: usize = 16;

/// Constants from the drift fit at `θ = 0.3` over `k = 4..=16`, with `N`
/// three times the fitted intercept.
pub fn ge_fitted_constants(ch: &GilbertElliott) -> Result<SequenceConstants> {
    let fit = fit_drift(4..=16, |k| ge_fk(ch, 0.3, k))?;
    if !(fit.rho > 0.0 && fit.rho < 1.0) {
        return Err(Error::InvalidConstants(format!("fitted rate {} is not contracting", fit.rho)));
    }
    SequenceConstants::new([3.0 * fit.intercept, 0.0, 0.0], fit.rho, GE_DEFAULT_M, None, GE_DEFAULT_K0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeObjective {
    channel: GilbertElliott,
    domain: ParamDomain,
    constants: SequenceConstants,
}

/// GE objective over `[0.05, 0.95]` with fitted constants.
pub fn ge_objective(ch: GilbertElliott) -> Result<GeObjective> {
    let constants = ge_fitted_constants(&ch)?;
    Ok(GeObjective {
        channel: ch,
        domain: ParamDomain::interval(0.05, 0.95)?,
        constants,
    })
}

impl GeObjective {
    pub fn channel(&self) -> &GilbertElliott {
        &self.channel
    }

    pub fn with_domain(mut self, domain: ParamDomain) -> Result<Self> {
        if domain.dim() != 1 || domain.lower()[0] < 0.0 || domain.upper()[0] > 1.0 {
            return Err(Error::InvalidDomain("GE parameter box must be a subinterval of [0,1]".into()));
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

impl ObjectiveSequence for GeObjective {
    fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    fn constants(&self) -> &SequenceConstants {
        &self.constants
    }

    fn eval(&self, k: usize, theta: &[f64]) -> Result<f64> {
        self.domain.check_dim(theta)?;
        ge_fk(&self.channel, theta[0], k)
    }
}
