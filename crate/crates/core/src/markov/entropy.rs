//! Exact conditional entropies `H(Y_n | Y_1^{n−1})` of hidden-Markov outputs.

use super::{xlnx_neg, HiddenMarkovSource};
use crate::error::{Error, Result};

/// Default cap on the block length of the forward recursion.
pub const DEFAULT_MAX_BLOCK: usize = 22;

/// Cap on the block length of the path-sum oracle.
pub const BRUTEFORCE_MAX_BLOCK: usize = 8;

/// Output prefixes less likely than this are dropped; their subtree
/// contributes below `1e−290` nats.
pub const PRUNE_THRESHOLD: f64 = 1e-300;

/// `H(Y_n | Y_1^{n−1})` with the default block cap.
pub fn conditional_entropy_forward(src: &HiddenMarkovSource, n: usize) -> Result<f64> {
    conditional_entropy_forward_capped(src, n, DEFAULT_MAX_BLOCK)
}

/// `H(Y_n | Y_1^{n−1})` by depth-first traversal of the output tree.
///
/// Every node carries the forward vector `α(h) = P(y_1^t, H_t = h)`, so a
/// prefix shared by many outputs is propagated once and the whole call costs
/// `O(|O|^n · |H|²)`.
pub fn conditional_entropy_forward_capped(src: &HiddenMarkovSource, n: usize, n_max: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be positive".into()));
    }
    let s = src.hidden_states();
    let o = src.output_symbols();
    if n > n_max {
        return Err(Error::TooCostly {
            requested: n,
            limit: n_max,
            cost: (o as f64).powi(n as i32) * s as f64,
        });
    }
    let mut walker = ForwardWalker::new(src, n);
    Ok(walker.run(src.init()))
}

/// `H(Y_t | Y_1^{t−1})` for every `t = 1..=n` from a single traversal of
/// depth `n`; entry `t − 1` holds order `t`.
pub fn conditional_entropy_profile(src: &HiddenMarkovSource, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be positive".into()));
    }
    if n > DEFAULT_MAX_BLOCK {
        return Err(Error::TooCostly {
            requested: n,
            limit: DEFAULT_MAX_BLOCK,
            cost: (src.output_symbols() as f64).powi(n as i32) * src.hidden_states() as f64,
        });
    }
    let mut walker = ForwardWalker::new(src, n);
    let mut sums = vec![Neumaier::default(); n];
    let s = walker.s;
    walker.pred[..s].copy_from_slice(src.init());
    walker.profile(0, &mut sums);
    Ok(sums.iter().map(Neumaier::value).collect())
}

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

struct ForwardWalker {
    s: usize,
    o: usize,
    n: usize,
    /// Row-major transition matrix.
    trans: Vec<f64>,
    /// Column-major emissions: `emit[y * s + h] = P(y | h)`.
    emit: Vec<f64>,
    /// Forward vector per depth, `alpha[t * s ..][..s]`.
    alpha: Vec<f64>,
    /// Predicted hidden law per depth.
    pred: Vec<f64>,
}

impl ForwardWalker {
    fn new(src: &HiddenMarkovSource, n: usize) -> Self {
        let s = src.hidden_states();
        let o = src.output_symbols();
        let p = src.chain().matrix();
        let e = src.emission();
        let trans = (0..s * s).map(|i| p[(i / s, i % s)]).collect();
        let emit = (0..s * o).map(|i| e[(i % s, i / s)]).collect();
        Self {
            s,
            o,
            n,
            trans,
            emit,
            alpha: vec![0.0; (n + 1) * s],
            pred: vec![0.0; (n + 1) * s],
        }
    }

    fn run(&mut self, init: &[f64]) -> f64 {
        let s = self.s;
        self.pred[..s].copy_from_slice(init);
        self.expand(0)
    }

    /// `pred[depth]` holds `P(y_1^depth, H_{depth+1} = ·)`; branch on
    /// `y_{depth+1}`. Returns the subtree's contribution, so the leaves are
    /// summed along the tree rather than into one running total.
    fn expand(&mut self, depth: usize) -> f64 {
        let s = self.s;
        let base = depth * s;
        if depth + 1 == self.n {
            let mut probs = [0.0_f64; 16];
            let mut heap;
            let probs: &mut [f64] = if self.o <= 16 {
                &mut probs[..self.o]
            } else {
                heap = vec![0.0; self.o];
                &mut heap
            };
            let mut total = 0.0;
            let mut acc = 0.0;
            for (y, slot) in probs.iter_mut().enumerate() {
                let col = &self.emit[y * s..(y + 1) * s];
                let p: f64 = self.pred[base..base + s].iter().zip(col).map(|(a, b)| a * b).sum();
                *slot = p;
                total += p;
            }
            if total > 0.0 {
                for &p in probs.iter() {
                    if p > 0.0 {
                        acc -= p * (p / total).ln();
                    }
                }
            }
            return acc;
        }
        let mut acc = 0.0;
        for y in 0..self.o {
            let mut mass = 0.0;
            for h in 0..s {
                let a = self.pred[base + h] * self.emit[y * s + h];
                self.alpha[base + s + h] = a;
                mass += a;
            }
            if mass < PRUNE_THRESHOLD {
                continue;
            }
            let next = base + s;
            for j in 0..s {
                let mut v = 0.0;
                for i in 0..s {
                    v += self.alpha[next + i] * self.trans[i * s + j];
                }
                self.pred[next + j] = v;
            }
            acc += self.expand(depth + 1);
        }
        acc
    }
}

impl ForwardWalker {
    /// Adds the next-symbol entropy of this prefix to `sums[depth]`, then
    /// descends.
    fn profile(&mut self, depth: usize, sums: &mut [Neumaier]) {
        let s = self.s;
        let base = depth * s;
        let mut total = 0.0;
        let mut stack = [0.0_f64; 16];
        let mut heap;
        let masses: &mut [f64] = if self.o <= 16 {
            &mut stack[..self.o]
        } else {
            heap = vec![0.0; self.o];
            &mut heap
        };
        for (y, slot) in masses.iter_mut().enumerate() {
            let mut mass = 0.0;
            for h in 0..s {
                mass += self.pred[base + h] * self.emit[y * s + h];
            }
            *slot = mass;
            total += mass;
        }
        if total > 0.0 {
            let mut acc = 0.0;
            for &p in masses.iter() {
                if p > 0.0 {
                    acc -= p * (p / total).ln();
                }
            }
            sums[depth].add(acc);
        }
        if depth + 1 == self.n {
            return;
        }
        for (y, &mass) in masses.iter().enumerate() {
            if mass < PRUNE_THRESHOLD {
                continue;
            }
            let next = base + s;
            for h in 0..s {
                self.alpha[next + h] = self.pred[base + h] * self.emit[y * s + h];
            }
            for j in 0..s {
                let mut v = 0.0;
                for i in 0..s {
                    v += self.alpha[next + i] * self.trans[i * s + j];
                }
                self.pred[next + j] = v;
            }
            self.profile(depth + 1, sums);
        }
    }
}

/// Oracle for [`conditional_entropy_forward`]: explicit sums over every
/// hidden path, `P(y_1^n) = Σ_{h_1^n} init(h_1) Π emit · Π trans`.
pub fn conditional_entropy_bruteforce(src: &HiddenMarkovSource, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be positive".into()));
    }
    let s = src.hidden_states();
    let o = src.output_symbols();
    if n > BRUTEFORCE_MAX_BLOCK {
        return Err(Error::TooCostly {
            requested: n,
            limit: BRUTEFORCE_MAX_BLOCK,
            cost: (o as f64).powi(n as i32) * (s as f64).powi(n as i32 + 1),
        });
    }
    let p = src.chain().matrix();
    let e = src.emission();
    let init = src.init();
    let outputs = o.pow(n as u32);
    let paths = s.pow(n as u32);
    let mut ys = vec![0usize; n];
    let mut hs = vec![0usize; n];
    let mut joint = vec![0.0_f64; outputs];
    for (code, slot) in joint.iter_mut().enumerate() {
        digits(code, o, &mut ys);
        let mut total = 0.0;
        for path in 0..paths {
            digits(path, s, &mut hs);
            let mut prob = init[hs[0]] * e[(hs[0], ys[0])];
            for t in 1..n {
                prob *= p[(hs[t - 1], hs[t])] * e[(hs[t], ys[t])];
            }
            total += prob;
        }
        *slot = total;
    }
    // Last symbol is the least significant digit, so prefixes are contiguous.
    let mut h = 0.0;
    for prefix in joint.chunks(o) {
        let marginal: f64 = prefix.iter().sum();
        if marginal <= 0.0 {
            continue;
        }
        for &pj in prefix {
            h += marginal * xlnx_neg(pj / marginal);
        }
    }
    Ok(h)
}

/// Base-`b` digits of `code`, most significant first.
fn digits(mut code: usize, b: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = code % b;
        code /= b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::{binary_entropy, MarkovChain};
    use nalgebra::DMatrix;

    fn fair_coin() -> HiddenMarkovSource {
        let c = MarkovChain::from_rows(&[&[1.0]]).unwrap();
        HiddenMarkovSource::stationary(c, DMatrix::from_row_slice(1, 2, &[0.5, 0.5])).unwrap()
    }

    fn ge_error_process() -> HiddenMarkovSource {
        let c = MarkovChain::from_rows(&[&[0.7, 0.3], &[0.3, 0.7]]).unwrap();
        HiddenMarkovSource::stationary(c, DMatrix::from_row_slice(2, 2, &[0.99, 0.01, 0.9, 0.1])).unwrap()
    }

    #[test]
    fn fair_coin_is_ln2() {
        let src = fair_coin();
        for n in 1..=5 {
            let h = conditional_entropy_forward(&src, n).unwrap();
            assert!((h - std::f64::consts::LN_2).abs() < 1e-14, "n={n} h={h}");
        }
        let h = conditional_entropy_bruteforce(&src, 3).unwrap();
        assert!((h - std::f64::consts::LN_2).abs() < 1e-14);
    }

    #[test]
    fn deterministic_output_is_zero() {
        let c = MarkovChain::from_rows(&[&[1.0]]).unwrap();
        let src = HiddenMarkovSource::stationary(c, DMatrix::from_row_slice(1, 2, &[1.0, 0.0])).unwrap();
        for n in 1..=5 {
            assert_eq!(conditional_entropy_forward(&src, n).unwrap(), 0.0);
            assert_eq!(conditional_entropy_bruteforce(&src, n).unwrap(), 0.0);
        }
    }

    #[test]
    fn ge_error_first_symbol() {
        let src = ge_error_process();
        let expected = binary_entropy(0.5 * 0.01 + 0.5 * 0.1).unwrap();
        assert!((expected - 0.2129822).abs() < 1e-7);
        assert!((conditional_entropy_forward(&src, 1).unwrap() - expected).abs() < 1e-15);
        assert!((conditional_entropy_bruteforce(&src, 1).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn forward_matches_bruteforce_on_ge_error() {
        let src = ge_error_process();
        for n in 1..=8 {
            let a = conditional_entropy_forward(&src, n).unwrap();
            let b = conditional_entropy_bruteforce(&src, n).unwrap();
            assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn profile_matches_single_orders() {
        let src = ge_error_process();
        let prof = conditional_entropy_profile(&src, 14).unwrap();
        for (i, &h) in prof.iter().enumerate() {
            let single = conditional_entropy_forward(&src, i + 1).unwrap();
            assert!((h - single).abs() < 1e-14, "n={}: {h} vs {single}", i + 1);
        }
    }

    #[test]
    fn block_limits() {
        let src = ge_error_process();
        assert!(matches!(
            conditional_entropy_forward(&src, 23),
            Err(Error::TooCostly { requested: 23, limit: 22, .. })
        ));
        assert!(matches!(
            conditional_entropy_bruteforce(&src, 9),
            Err(Error::TooCostly { limit: 8, .. })
        ));
        assert!(conditional_entropy_forward(&src, 0).is_err());
        assert!(conditional_entropy_forward_capped(&src, 10, 12).is_ok());
    }
}
