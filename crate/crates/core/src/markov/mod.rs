//! Markov chains, hidden-Markov sources and the entropy machinery behind
//! every objective evaluation.

mod entropy;
mod perron;

pub use entropy::{
    conditional_entropy_bruteforce, conditional_entropy_forward, conditional_entropy_forward_capped,
    conditional_entropy_profile,
    BRUTEFORCE_MAX_BLOCK, DEFAULT_MAX_BLOCK, PRUNE_THRESHOLD,
};
pub use perron::{build_forbidden_word_adjacency, is_irreducible, perron_log_eigenvalue, MAX_PERRON_SIZE};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Tolerance on row sums of stochastic matrices and probability vectors.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Binary entropy in nats, `0 ln 0 := 0`.
///
/// Arguments within `1e-12` outside `[0, 1]` are clamped.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(p >= -STOCHASTIC_TOL && p <= 1.0 + STOCHASTIC_TOL) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let p = p.clamp(0.0, 1.0);
    Ok(xlnx_neg(p) + xlnx_neg(1.0 - p))
}

/// `−x ln x` with `0 ln 0 := 0`.
#[inline]
pub(crate) fn xlnx_neg(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

fn check_stochastic_rows(m: &DMatrix<f64>, what: &str) -> Result<()> {
    for (i, row) in m.row_iter().enumerate() {
        if row.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!("{what}: row {i} has a negative or non-finite entry")));
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidMatrix(format!("{what}: row {i} sums to {s}")));
        }
    }
    Ok(())
}

/// Finite Markov chain given by a row-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    p: DMatrix<f64>,
}

impl MarkovChain {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if p.nrows() != p.ncols() || p.nrows() == 0 {
            return Err(Error::InvalidMatrix(format!(
                "transition matrix must be square and nonempty, got {}x{}",
                p.nrows(),
                p.ncols()
            )));
        }
        check_stochastic_rows(&p, "transition matrix")?;
        Ok(Self { p })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        if flat.len() != n * n {
            return Err(Error::InvalidMatrix("transition rows must form a square matrix".into()));
        }
        Self::new(DMatrix::from_row_slice(n, n, &flat))
    }

    pub fn size(&self) -> usize {
        self.p.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn prob(&self, from: usize, to: usize) -> f64 {
        self.p[(from, to)]
    }

    /// Some power `P^j`, `j ≤ s² − 2s + 2`, is entrywise positive.
    pub fn is_primitive(&self) -> bool {
        let s = self.size();
        let adj: Vec<bool> = (0..s * s).map(|i| self.p[(i / s, i % s)] > 0.0).collect();
        let wielandt = s * s - 2 * s + 2;
        let mut pow = adj.clone();
        for _ in 1..=wielandt {
            if pow.iter().all(|&b| b) {
                return true;
            }
            let mut next = vec![false; s * s];
            for i in 0..s {
                for l in 0..s {
                    if pow[i * s + l] {
                        for j in 0..s {
                            if adj[l * s + j] {
                                next[i * s + j] = true;
                            }
                        }
                    }
                }
            }
            pow = next;
        }
        pow.iter().all(|&b| b)
    }

    /// `H(X_2 | X_1)` under the stationary distribution `pi`.
    pub fn entropy_rate_with(&self, pi: &[f64]) -> f64 {
        let s = self.size();
        (0..s)
            .map(|i| pi[i] * (0..s).map(|j| xlnx_neg(self.p[(i, j)])).sum::<f64>())
            .sum()
    }
}

/// Unique stationary distribution of a primitive chain.
pub fn stationary_distribution(chain: &MarkovChain) -> Result<Vec<f64>> {
    if !chain.is_primitive() {
        return Err(Error::NoUniqueStationary);
    }
    solve_stationary(chain)
}

/// Stationary distribution by a direct linear solve of `π(P − I) = 0`,
/// `Σπ = 1`.
///
/// Needs only a single recurrent class, so chains with transient states
/// (degenerate inputs at a vertex of the parameter box) are accepted.
pub fn solve_stationary(chain: &MarkovChain) -> Result<Vec<f64>> {
    let s = chain.size();
    let mut a = chain.matrix().transpose() - DMatrix::<f64>::identity(s, s);
    for j in 0..s {
        a[(s - 1, j)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(s);
    rhs[s - 1] = 1.0;
    let lu = a.lu();
    let mut pi = lu.solve(&rhs).ok_or(Error::NoUniqueStationary)?;
    if pi.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoUniqueStationary);
    }
    for v in pi.iter_mut() {
        if *v < 0.0 {
            if *v < -1e-9 {
                return Err(Error::NoUniqueStationary);
            }
            *v = 0.0;
        }
    }
    let total: f64 = pi.iter().sum();
    let pi: Vec<f64> = pi.iter().map(|v| v / total).collect();
    let residual = stationary_residual(chain, &pi);
    if residual > 1e-10 {
        return Err(Error::NoUniqueStationary);
    }
    Ok(pi)
}

/// `‖πP − π‖∞`.
pub fn stationary_residual(chain: &MarkovChain, pi: &[f64]) -> f64 {
    let s = chain.size();
    (0..s)
        .map(|j| ((0..s).map(|i| pi[i] * chain.prob(i, j)).sum::<f64>() - pi[j]).abs())
        .fold(0.0, f64::max)
}

/// Hidden Markov source: a hidden chain `H`, an initial law over `H`, and a
/// row-stochastic emission matrix `|H| × |O|`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenMarkovSource {
    chain: MarkovChain,
    init: Vec<f64>,
    emit: DMatrix<f64>,
    stationary: bool,
}

impl HiddenMarkovSource {
    /// Source started from the stationary law of `chain`.
    pub fn stationary(chain: MarkovChain, emit: DMatrix<f64>) -> Result<Self> {
        let init = solve_stationary(&chain)?;
        Self::with_init(chain, init, emit, true)
    }

    /// Source with an explicit initial law; `stationary` asserts `init P = init`.
    pub fn with_init(chain: MarkovChain, init: Vec<f64>, emit: DMatrix<f64>, stationary: bool) -> Result<Self> {
        let s = chain.size();
        if init.len() != s {
            return Err(Error::DimensionMismatch {
                expected: s,
                actual: init.len(),
            });
        }
        if emit.nrows() != s || emit.ncols() == 0 {
            return Err(Error::InvalidMatrix(format!(
                "emission matrix must have {s} rows and at least one column, got {}x{}",
                emit.nrows(),
                emit.ncols()
            )));
        }
        if init.iter().any(|&v| !(v >= 0.0)) || (init.iter().sum::<f64>() - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::InvalidMatrix("initial law must be a probability vector".into()));
        }
        check_stochastic_rows(&emit, "emission matrix")?;
        if stationary && stationary_residual(&chain, &init) > 1e-10 {
            return Err(Error::InvalidMatrix("initial law flagged stationary but πP ≠ π".into()));
        }
        Ok(Self {
            chain,
            init,
            emit,
            stationary,
        })
    }

    pub fn chain(&self) -> &MarkovChain {
        &self.chain
    }

    pub fn init(&self) -> &[f64] {
        &self.init
    }

    pub fn emission(&self) -> &DMatrix<f64> {
        &self.emit
    }

    pub fn is_stationary(&self) -> bool {
        self.stationary
    }

    pub fn hidden_states(&self) -> usize {
        self.chain.size()
    }

    pub fn output_symbols(&self) -> usize {
        self.emit.ncols()
    }
}
