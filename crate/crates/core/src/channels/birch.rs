//! Birch lower bounds for higher-order Markov inputs, by exact enumeration.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::markov::{solve_stationary, xlnx_neg, MarkovChain};

use super::bec::BecRllChannel;
use super::noiseless::PHI;

/// `H(last | rest)` for a joint law keyed by tuples whose final entry is the
/// predicted symbol.
fn conditional_entropy_of_table(joint: &BTreeMap<Vec<u8>, f64>) -> f64 {
    let mut marginal: BTreeMap<&[u8], f64> = BTreeMap::new();
    for (key, &p) in joint {
        *marginal.entry(&key[..key.len() - 1]).or_insert(0.0) += p;
    }
    let h_joint: f64 = joint.values().map(|&p| xlnx_neg(p)).sum();
    let h_marg: f64 = marginal.values().map(|&p| xlnx_neg(p)).sum();
    h_joint - h_marg
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::InvalidArgument(format!("{name} must lie in (0,1), got {v}")));
    }
    Ok(())
}

/// Walks all `len`-step paths of `chain` from `init`, calling `visit` with
/// the visited states and the path probability.
fn for_each_path(chain: &MarkovChain, init: &[f64], len: usize, mut visit: impl FnMut(&[usize], f64)) {
    fn rec(chain: &MarkovChain, path: &mut Vec<usize>, prob: f64, len: usize, visit: &mut dyn FnMut(&[usize], f64)) {
        if path.len() == len {
            visit(path, prob);
            return;
        }
        let last = *path.last().expect("nonempty path");
        for next in 0..chain.size() {
            let p = chain.prob(last, next);
            if p > 0.0 {
                path.push(next);
                rec(chain, path, prob * p, len, visit);
                path.pop();
            }
        }
    }
    let mut path = Vec::with_capacity(len);
    for (s, &p) in init.iter().enumerate() {
        if p > 0.0 {
            path.push(s);
            rec(chain, &mut path, p, len, &mut visit);
            path.pop();
        }
    }
}

/// Adds the erasure outputs of `xs[2..]` to `joint`, keyed by
/// `(x_1, x_2, y_3, …, y_6)`.
fn add_erasure_patterns(joint: &mut BTreeMap<Vec<u8>, f64>, xs: &[u8; 6], prob: f64, eps: f64) {
    for pattern in 0u8..16 {
        let mut key = vec![xs[0], xs[1]];
        let mut p = prob;
        for (i, &x) in xs[2..].iter().enumerate() {
            if pattern >> i & 1 == 1 {
                key.push(x);
                p *= 1.0 - eps;
            } else {
                key.push(0);
                p *= eps;
            }
        }
        *joint.entry(key).or_insert(0.0) += p;
    }
}

/// `H(Y_6 | Y_5, Y_4, Y_3, X_2, X_1) − H(ε)` for the second-order input on
/// blocks `11, 12, 21` with transition
/// `[[p, 1−p, 0], [0, 0, 1], [q, 1−q, 0]]`.
pub fn birch_bound_bec(p: f64, q: f64, epsilon: f64) -> Result<f64> {
    check_open_unit("p", p)?;
    check_open_unit("q", q)?;
    let ch = BecRllChannel::new(epsilon)?;
    const BLOCKS: [[u8; 2]; 3] = [[1, 1], [1, 2], [2, 1]];
    let chain = MarkovChain::from_rows(&[&[p, 1.0 - p, 0.0], &[0.0, 0.0, 1.0], &[q, 1.0 - q, 0.0]])?;
    let init = solve_stationary(&chain)?;
    let mut joint = BTreeMap::new();
    for_each_path(&chain, &init, 5, |blocks, prob| {
        let mut xs = [0u8; 6];
        xs[0] = BLOCKS[blocks[0]][0];
        for (i, &b) in blocks.iter().enumerate() {
            xs[i + 1] = BLOCKS[b][1];
        }
        add_erasure_patterns(&mut joint, &xs, prob, epsilon);
    });
    Ok(conditional_entropy_of_table(&joint) - ch.noise_entropy())
}

/// The same bound for the first-order input `[[1−θ, θ], [1, 0]]` on `{1, 2}`.
pub fn birch_bound_bec_first_order(theta: f64, epsilon: f64) -> Result<f64> {
    check_open_unit("theta", theta)?;
    let ch = BecRllChannel::new(epsilon)?;
    let chain = MarkovChain::from_rows(&[&[1.0 - theta, theta], &[1.0, 0.0]])?;
    let init = solve_stationary(&chain)?;
    let mut joint = BTreeMap::new();
    for_each_path(&chain, &init, 6, |states, prob| {
        let mut xs = [0u8; 6];
        for (x, &s) in xs.iter_mut().zip(states) {
            *x = s as u8 + 1;
        }
        add_erasure_patterns(&mut joint, &xs, prob, epsilon);
    });
    Ok(conditional_entropy_of_table(&joint) - ch.noise_entropy())
}

/// `H(Y_4 | Y_3, X_2, X_1)` for the noiseless channel driven by the
/// first-order input with `P(0 | 0) = p`, `P(0 | 1) = q`.
pub fn birch_bound_noiseless(p: f64, q: f64) -> Result<f64> {
    for (name, v) in [("p", p), ("q", q)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidArgument(format!("{name} must lie in [0,1], got {v}")));
        }
    }
    let chain = MarkovChain::from_rows(&[&[p, 1.0 - p], &[q, 1.0 - q]])?;
    let init = solve_stationary(&chain)?;
    let mut joint = BTreeMap::new();
    for_each_path(&chain, &init, 4, |xs, prob| {
        let y3 = PHI[xs[1]][xs[2]];
        let y4 = PHI[xs[2]][xs[3]];
        *joint.entry(vec![xs[0] as u8, xs[1] as u8, y3, y4]).or_insert(0.0) += prob;
    });
    Ok(conditional_entropy_of_table(&joint))
}
