//! Generic finite-state channel objective for small block lengths.
//!
//! With hidden state `(X_n, S_{n−1})` both the output process and the joint
//! input/output process are hidden-Markov, so all three entropies reduce to
//! the forward recursion.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::domain::ParamDomain;
use crate::error::{Error, Result};
use crate::markov::{conditional_entropy_forward_capped, solve_stationary, HiddenMarkovSource, MarkovChain};
use crate::objective::{ObjectiveSequence, SequenceConstants};

/// Largest `k` accepted by [`generic_fsc_fk`].
pub const GENERIC_MAX_K: usize = 10;

/// Map from parameters to a row-stochastic input transition matrix.
pub type InputParam = Arc<dyn Fn(&[f64]) -> Result<DMatrix<f64>> + Send + Sync>;

#[derive(Clone)]
pub struct GenericFsc {
    input_param: InputParam,
    /// `state_kernel[x][s_prev][s]`.
    state_kernel: Vec<Vec<Vec<f64>>>,
    /// `emission[x][s_prev][y]`.
    emission: Vec<Vec<Vec<f64>>>,
    inputs: usize,
    states: usize,
    outputs: usize,
}

impl fmt::Debug for GenericFsc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericFsc")
            .field("inputs", &self.inputs)
            .field("states", &self.states)
            .field("outputs", &self.outputs)
            .field("state_kernel", &self.state_kernel)
            .field("emission", &self.emission)
            .finish_non_exhaustive()
    }
}

fn check_kernel(k: &[Vec<Vec<f64>>], inner: usize, last: usize, what: &str) -> Result<()> {
    for (x, rows) in k.iter().enumerate() {
        if rows.len() != inner {
            return Err(Error::InvalidMatrix(format!("{what}[{x}] has {} rows, expected {inner}", rows.len())));
        }
        for (s, row) in rows.iter().enumerate() {
            if row.len() != last {
                return Err(Error::InvalidMatrix(format!("{what}[{x}][{s}] has length {}, expected {last}", row.len())));
            }
            if row.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                return Err(Error::InvalidMatrix(format!("{what}[{x}][{s}] must be strictly positive")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidMatrix(format!("{what}[{x}][{s}] sums to {sum}")));
            }
        }
    }
    Ok(())
}

impl GenericFsc {
    /// `state_kernel[x][s_prev][s] = p(s | x, s_prev)` and
    /// `emission[x][s_prev][y] = p(y | x, s_prev)`, both strictly positive.
    pub fn new(
        input_param: InputParam,
        state_kernel: Vec<Vec<Vec<f64>>>,
        emission: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let inputs = state_kernel.len();
        if inputs == 0 || emission.len() != inputs {
            return Err(Error::InvalidMatrix("kernels must share a nonempty input alphabet".into()));
        }
        let states = state_kernel[0].len();
        let outputs = emission[0].first().map_or(0, Vec::len);
        if states == 0 || outputs == 0 {
            return Err(Error::InvalidMatrix("empty state or output alphabet".into()));
        }
        check_kernel(&state_kernel, states, states, "state_kernel")?;
        check_kernel(&emission, states, outputs, "emission")?;
        Ok(Self {
            input_param,
            state_kernel,
            emission,
            inputs,
            states,
            outputs,
        })
    }

    /// Channel whose state evolves independently of the input through
    /// `state_chain` and whose emission is a BSC with crossover
    /// `crossover[s_prev]`. Binary input with transition `input_param(θ)`.
    pub fn binary_symmetric(input_param: InputParam, state_chain: &MarkovChain, crossover: &[f64]) -> Result<Self> {
        let s = state_chain.size();
        if crossover.len() != s {
            return Err(Error::DimensionMismatch {
                expected: s,
                actual: crossover.len(),
            });
        }
        let rows: Vec<Vec<f64>> = (0..s).map(|i| (0..s).map(|j| state_chain.prob(i, j)).collect()).collect();
        let state_kernel = vec![rows.clone(), rows];
        let emission = (0..2)
            .map(|x| {
                crossover
                    .iter()
                    .map(|&c| if x == 0 { vec![1.0 - c, c] } else { vec![c, 1.0 - c] })
                    .collect()
            })
            .collect();
        Self::new(input_param, state_kernel, emission)
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    fn input_chain(&self, theta: &[f64]) -> Result<MarkovChain> {
        let p = (self.input_param)(theta)?;
        if p.nrows() != self.inputs || p.ncols() != self.inputs {
            return Err(Error::DimensionMismatch {
                expected: self.inputs,
                actual: p.nrows(),
            });
        }
        MarkovChain::new(p)
    }

    /// Hidden chain on `(X_n, S_{n−1})`, index `x · |S| + s`, with its
    /// stationary law.
    fn hidden_chain(&self, input: &MarkovChain) -> Result<(MarkovChain, Vec<f64>)> {
        let (nx, ns) = (self.inputs, self.states);
        let n = nx * ns;
        let mut p = DMatrix::zeros(n, n);
        for x in 0..nx {
            for s in 0..ns {
                for s_next in 0..ns {
                    let ps = self.state_kernel[x][s][s_next];
                    for x_next in 0..nx {
                        p[(x * ns + s, x_next * ns + s_next)] += ps * input.prob(x, x_next);
                    }
                }
            }
        }
        let chain = MarkovChain::new(p)?;
        let init = solve_stationary(&chain)?;
        Ok((chain, init))
    }

    fn output_source(&self, chain: &MarkovChain, init: &[f64]) -> Result<HiddenMarkovSource> {
        let ns = self.states;
        let mut emit = DMatrix::zeros(self.inputs * ns, self.outputs);
        for x in 0..self.inputs {
            for s in 0..ns {
                for y in 0..self.outputs {
                    emit[(x * ns + s, y)] = self.emission[x][s][y];
                }
            }
        }
        HiddenMarkovSource::with_init(chain.clone(), init.to_vec(), emit, true)
    }

    /// Same hidden chain, emitting the pair `(x, y)` as `x · |Y| + y`.
    fn joint_source(&self, chain: &MarkovChain, init: &[f64]) -> Result<HiddenMarkovSource> {
        let (ns, ny) = (self.states, self.outputs);
        let mut emit = DMatrix::zeros(self.inputs * ns, self.inputs * ny);
        for x in 0..self.inputs {
            for s in 0..ns {
                for y in 0..ny {
                    emit[(x * ns + s, x * ny + y)] = self.emission[x][s][y];
                }
            }
        }
        HiddenMarkovSource::with_init(chain.clone(), init.to_vec(), emit, true)
    }
}

/// `f_k(θ) = H(X_2|X_1) + H(Y_{k+1}|Y_1^k) − H(X_{k+1}, Y_{k+1}|X_1^k, Y_1^k)`.
pub fn generic_fsc_fk(fsc: &GenericFsc, theta: &[f64], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("generic objective needs k ≥ 1".into()));
    }
    if k > GENERIC_MAX_K {
        return Err(Error::TooCostly {
            requested: k,
            limit: GENERIC_MAX_K,
            cost: ((fsc.inputs * fsc.outputs) as f64).powi(k as i32 + 1),
        });
    }
    let input = fsc.input_chain(theta)?;
    let pi_x = solve_stationary(&input)?;
    let hx = input.entropy_rate_with(&pi_x);
    let (chain, init) = fsc.hidden_chain(&input)?;
    let hy = conditional_entropy_forward_capped(&fsc.output_source(&chain, &init)?, k + 1, GENERIC_MAX_K + 1)?;
    let hxy = conditional_entropy_forward_capped(&fsc.joint_source(&chain, &init)?, k + 1, GENERIC_MAX_K + 1)?;
    Ok(hx + hy - hxy)
}

#[derive(Debug, Clone)]
pub struct GenericObjective {
    fsc: GenericFsc,
    domain: ParamDomain,
    constants: SequenceConstants,
}

impl GenericObjective {
    pub fn new(fsc: GenericFsc, domain: ParamDomain, constants: SequenceConstants) -> Result<Self> {
        constants.validate()?;
        Ok(Self { fsc, domain, constants })
    }

    pub fn fsc(&self) -> &GenericFsc {
        &self.fsc
    }
}

impl ObjectiveSequence for GenericObjective {
    fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    fn constants(&self) -> &SequenceConstants {
        &self.constants
    }

    fn eval(&self, k: usize, theta: &[f64]) -> Result<f64> {
        self.domain.check_dim(theta)?;
        generic_fsc_fk(&self.fsc, theta, k.max(1))
    }
}

/// `θ ↦ [[1−θ, θ], [1, 0]]`, the (1,∞)-RLL first-order input family.
pub fn rll_input() -> InputParam {
    Arc::new(|theta: &[f64]| {
        let t = theta[0];
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ProbabilityOutOfRange(t));
        }
        Ok(DMatrix::from_row_slice(2, 2, &[1.0 - t, t, 1.0, 0.0]))
    })
}

/// `θ ↦` i.i.d. binary input with `P(X = 1) = θ`.
pub fn iid_input() -> InputParam {
    Arc::new(|theta: &[f64]| {
        let t = theta[0];
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ProbabilityOutOfRange(t));
        }
        Ok(DMatrix::from_row_slice(2, 2, &[1.0 - t, t, 1.0 - t, t]))
    })
}
