//! Objective sequences `k ↦ f_k` and their derivative estimates.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::domain::ParamDomain;
use crate::error::{Error, Result};

/// Smallest central-difference step tried before giving up near a face.
pub const MIN_FD_STEP: f64 = 1.0 / (1u64 << 40) as f64;

/// Convergence constants of an objective sequence.
///
/// `|f_k^{(l)} − f_{k−1}^{(l)}| ≤ N(k) ρ^k` for `l = 0, 1, 2`, derivatives of
/// every `f_k` bounded by `M`, and (when present) `∇²f ⪯ −m I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceConstants {
    /// `(c0, c1, c2)` with `N(k) = c0 + c1 k + c2 k²`.
    pub n_poly: [f64; 3],
    pub rho: f64,
    pub big_m: f64,
    pub m: Option<f64>,
    pub k0: usize,
}

impl SequenceConstants {
    pub fn new(n_poly: [f64; 3], rho: f64, big_m: f64, m: Option<f64>, k0: usize) -> Result<Self> {
        let c = Self {
            n_poly,
            rho,
            big_m,
            m,
            k0,
        };
        c.validate()?;
        Ok(c)
    }

    /// Constant `N`.
    pub fn with_constant_n(n: f64, rho: f64, big_m: f64, m: Option<f64>, k0: usize) -> Result<Self> {
        Self::new([n, 0.0, 0.0], rho, big_m, m, k0)
    }

    pub fn validate(&self) -> Result<()> {
        let [c0, c1, c2] = self.n_poly;
        // With non-negative c1, c2 the polynomial is increasing on k ≥ 0, so
        // N(0) > 0 covers every k.
        if !(c0 > 0.0 && c1 >= 0.0 && c2 >= 0.0 && c0.is_finite() && c1.is_finite() && c2.is_finite()) {
            return Err(Error::InvalidConstants(format!(
                "N(k) coefficients must satisfy c0 > 0, c1 ≥ 0, c2 ≥ 0; got {:?}",
                self.n_poly
            )));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidConstants(format!("rho must lie in (0,1), got {}", self.rho)));
        }
        if !(self.big_m > 0.0 && self.big_m.is_finite()) {
            return Err(Error::InvalidConstants(format!("M must be positive, got {}", self.big_m)));
        }
        if let Some(m) = self.m {
            if !(m > 0.0 && m <= self.big_m) {
                return Err(Error::InvalidConstants(format!(
                    "m must lie in (0, M={}], got {m}",
                    self.big_m
                )));
            }
        }
        Ok(())
    }

    pub fn n_at(&self, k: usize) -> f64 {
        let k = k as f64;
        let [c0, c1, c2] = self.n_poly;
        c0 + c1 * k + c2 * k * k
    }

    /// `N(k) ρ^k`.
    pub fn drift(&self, k: usize) -> f64 {
        self.n_at(k) * self.rho.powi(k as i32)
    }
}

/// A sequence of smooth objectives converging geometrically to the target.
///
/// Implementations must be pure: the same `(k, θ)` always yields the same
/// bits, and no interior mutability is allowed.
pub trait ObjectiveSequence: Send + Sync {
    fn domain(&self) -> &ParamDomain;

    fn constants(&self) -> &SequenceConstants;

    /// `f_k(θ)`.
    fn eval(&self, k: usize, theta: &[f64]) -> Result<f64>;

    /// `∇f_k(θ)`; central differences unless overridden.
    fn grad(&self, k: usize, theta: &[f64]) -> Result<Vec<f64>> {
        let h = default_fd_step(theta);
        Ok(gradient_fd(self, k, theta, h)?.gradient)
    }
}

impl<T: ObjectiveSequence + ?Sized> ObjectiveSequence for &T {
    fn domain(&self) -> &ParamDomain {
        (**self).domain()
    }
    fn constants(&self) -> &SequenceConstants {
        (**self).constants()
    }
    fn eval(&self, k: usize, theta: &[f64]) -> Result<f64> {
        (**self).eval(k, theta)
    }
    fn grad(&self, k: usize, theta: &[f64]) -> Result<Vec<f64>> {
        (**self).grad(k, theta)
    }
}

impl<T: ObjectiveSequence + ?Sized> ObjectiveSequence for Box<T> {
    fn domain(&self) -> &ParamDomain {
        (**self).domain()
    }
    fn constants(&self) -> &SequenceConstants {
        (**self).constants()
    }
    fn eval(&self, k: usize, theta: &[f64]) -> Result<f64> {
        (**self).eval(k, theta)
    }
    fn grad(&self, k: usize, theta: &[f64]) -> Result<Vec<f64>> {
        (**self).grad(k, theta)
    }
}

/// `1e-6 · max(1, ‖θ‖∞)`.
pub fn default_fd_step(theta: &[f64]) -> f64 {
    1e-6 * theta.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()))
}

/// Objective sequence backed by a closure, for synthetic problems.
pub struct FnObjective<F> {
    domain: ParamDomain,
    constants: SequenceConstants,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(usize, &[f64]) -> f64 + Send + Sync,
{
    pub fn new(domain: ParamDomain, constants: SequenceConstants, f: F) -> Self {
        Self { domain, constants, f }
    }
}

impl<F> ObjectiveSequence for FnObjective<F>
where
    F: Fn(usize, &[f64]) -> f64 + Send + Sync,
{
    fn domain(&self) -> &ParamDomain {
        &self.domain
    }

    fn constants(&self) -> &SequenceConstants {
        &self.constants
    }

    fn eval(&self, k: usize, theta: &[f64]) -> Result<f64> {
        self.domain.check_dim(theta)?;
        Ok((self.f)(k, theta))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdGradient {
    pub gradient: Vec<f64>,
    /// Step actually used after shrinking to stay inside the domain.
    pub step: f64,
}

/// Largest step `≤ h`, obtained by halving, with `θ ± step·e_i ∈ Θ` for all `i`.
fn fitted_step(domain: &ParamDomain, theta: &[f64], h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("difference step must be positive, got {h}")));
    }
    let room = theta
        .iter()
        .zip(domain.lower())
        .zip(domain.upper())
        .map(|((&x, &lo), &hi)| (x - lo).min(hi - x))
        .fold(f64::INFINITY, f64::min);
    let mut step = h;
    while step > room {
        step *= 0.5;
        if step < MIN_FD_STEP {
            return Err(Error::TooCloseToBoundary);
        }
    }
    Ok(step)
}

/// Central-difference gradient of `f_k` at `θ`.
pub fn gradient_fd<S>(seq: &S, k: usize, theta: &[f64], h: f64) -> Result<FdGradient>
where
    S: ObjectiveSequence + ?Sized,
{
    let domain = seq.domain();
    domain.check_dim(theta)?;
    let step = fitted_step(domain, theta, h)?;
    let mut x = theta.to_vec();
    let mut gradient = Vec::with_capacity(theta.len());
    for i in 0..theta.len() {
        x[i] = theta[i] + step;
        let up = seq.eval(k, &x)?;
        x[i] = theta[i] - step;
        let down = seq.eval(k, &x)?;
        x[i] = theta[i];
        gradient.push((up - down) / (2.0 * step));
    }
    Ok(FdGradient { gradient, step })
}

/// Second-difference Hessian of `f_k` at `θ`.
pub fn hessian_fd<S>(seq: &S, k: usize, theta: &[f64], h: f64) -> Result<DMatrix<f64>>
where
    S: ObjectiveSequence + ?Sized,
{
    let domain = seq.domain();
    domain.check_dim(theta)?;
    let h = fitted_step(domain, theta, h)?;
    let d = theta.len();
    let center = seq.eval(k, theta)?;
    let mut x = theta.to_vec();
    let mut hess = DMatrix::zeros(d, d);
    for i in 0..d {
        x[i] = theta[i] + h;
        let up = seq.eval(k, &x)?;
        x[i] = theta[i] - h;
        let down = seq.eval(k, &x)?;
        x[i] = theta[i];
        hess[(i, i)] = (up - 2.0 * center + down) / (h * h);
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| -> Result<f64> {
                x[i] = theta[i] + si * h;
                x[j] = theta[j] + sj * h;
                let v = seq.eval(k, &x);
                x[i] = theta[i];
                x[j] = theta[j];
                v
            };
            let v = (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?)
                / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Ok(hess)
}

/// Empirical curvature bounds over a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureEstimate {
    /// `−max_grid λ_max(∇²f_k)`; positive when every probe is strictly concave.
    pub m_est: f64,
    /// `max_grid max |λ(∇²f_k)|`.
    pub big_m_est: f64,
}

/// Audits `−M I ⪯ ∇²f_k ⪯ −m I` on `grid`.
pub fn hessian_probe<S>(seq: &S, k: usize, grid: &[Vec<f64>], h: f64) -> Result<CurvatureEstimate>
where
    S: ObjectiveSequence + ?Sized,
{
    if grid.is_empty() {
        return Err(Error::InvalidArgument("hessian probe needs a nonempty grid".into()));
    }
    let spectra: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|theta| {
            let hess = hessian_fd(seq, k, theta, h)?;
            let eig = SymmetricEigen::new(hess).eigenvalues;
            let top = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let abs = eig.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
            Ok((top, abs))
        })
        .collect::<Result<_>>()?;
    let top = spectra.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let abs = spectra.iter().map(|s| s.1).fold(0.0_f64, f64::max);
    Ok(CurvatureEstimate {
        m_est: -top,
        big_m_est: abs,
    })
}
