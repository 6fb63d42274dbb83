//! Perron log-eigenvalues and adjacency matrices of forbidden-word shifts.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest matrix accepted by [`perron_log_eigenvalue`].
pub const MAX_PERRON_SIZE: usize = 64;

const RAYLEIGH_TOL: f64 = 1e-13;
const MAX_POWER_ITERS: usize = 1_000_000;

/// Irreducibility by reachability: every state reaches every other state
/// through positive entries.
pub fn is_irreducible(a: &DMatrix<f64>) -> bool {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return false;
    }
    let reach_all = |transpose: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let w = if transpose { a[(j, i)] } else { a[(i, j)] };
                if w > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach_all(false) && reach_all(true)
}

/// `ln λ_max` of a non-negative irreducible matrix.
///
/// Power iteration runs on `A + I`, which is primitive whenever `A` is
/// irreducible, so periodic matrices converge too; the shift is removed at
/// the end.
pub fn perron_log_eigenvalue(a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidMatrix(format!("{}x{} matrix is not square", n, a.ncols())));
    }
    if n > MAX_PERRON_SIZE {
        return Err(Error::InvalidMatrix(format!("size {n} exceeds {MAX_PERRON_SIZE}")));
    }
    if a.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidMatrix("entries must be finite and non-negative".into()));
    }
    if !is_irreducible(a) {
        return Err(Error::PerronNotUnique);
    }
    let shifted = a + DMatrix::<f64>::identity(n, n);
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut last = f64::NAN;
    for _ in 0..MAX_POWER_ITERS {
        let w = &shifted * &v;
        let rq = v.dot(&w);
        let norm = w.norm();
        v = w / norm;
        if (rq - last).abs() < RAYLEIGH_TOL {
            return Ok((rq - 1.0).ln());
        }
        last = rq;
    }
    Err(Error::NotConverged(MAX_POWER_ITERS))
}

/// Adjacency matrix of the shift avoiding `word`, with states the binary
/// `(L−1)`-blocks in lexicographic order (most significant symbol first).
pub fn build_forbidden_word_adjacency(word: &[u8]) -> Result<DMatrix<f64>> {
    let l = word.len();
    if !(2..=6).contains(&l) {
        return Err(Error::InvalidArgument(format!("word length {l} outside 2..=6")));
    }
    if word.iter().any(|&b| b > 1) {
        return Err(Error::InvalidArgument("word must be binary".into()));
    }
    let w = word.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let block = l - 1;
    let n = 1usize << block;
    let mask = n - 1;
    // An (L−1)-block is too short to contain the word, so every block is a state.
    let mut a = DMatrix::zeros(n, n);
    for u in 0..n {
        for bit in 0..2 {
            let merged = (u << 1) | bit;
            if merged != w {
                a[(u, merged & mask)] = 1.0;
            }
        }
    }
    Ok(a)
}
