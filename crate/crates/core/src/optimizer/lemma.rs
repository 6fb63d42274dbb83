use rayon::prelude::*;

use super::algorithm3::gradient_floor;
use super::norm2;
use crate::error::{Error, Result};
use crate::objective::ObjectiveSequence;

/// `f_{k0 + PROXY_OFFSET}` stands in for the limit `f` in the audits.
pub const PROXY_OFFSET: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    /// `max_Θ f − max_∂Θ f`, estimated on the grid.
    pub delta_est: f64,
    pub y0: f64,
    pub k0_checked: usize,
    /// Order used as a proxy for the limit.
    pub proxy_k: usize,
    /// The two left-hand sides of the drift conditions, each compared with
    /// `δ/8`.
    pub cond_a_lhs: (f64, f64),
    /// `dist(C_{k0}, ∂Θ)` over grid points of `C_{k0}`.
    pub dist_c_boundary: f64,
    /// Best grid point of the proxy.
    pub argmax: Vec<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma5Report {
    pub delta_est: f64,
    pub y0: f64,
    pub k0_checked: usize,
    pub proxy_k: usize,
    /// `ρ^{1/3} + ρ^{2k0/3}` (must be `< 1`) and `2N(k0)ρ^{k0}/(1−ρ)`
    /// (must be `≤ δ/8`).
    pub cond_a_lhs: (f64, f64),
    pub dist_c_boundary: f64,
    /// First grid point in `A_{k0} ∩ B_{k0}`, a usable start.
    pub witness: Option<Vec<f64>>,
    pub passed: bool,
}

struct Levels {
    delta: f64,
    y0: f64,
    argmax: Vec<f64>,
    dist_c: f64,
}

fn eval_grid<S>(seq: &S, k: usize, grid: &[Vec<f64>]) -> Result<Vec<f64>>
where
    S: ObjectiveSequence + ?Sized,
{
    grid.par_iter().map(|theta| seq.eval(k, theta)).collect()
}

/// `δ`, `y0` and `dist(C_{k0}, ∂Θ)` from grid scans of the proxy and of
/// `f_{k0}`. Also returns the `f_{k0}` values.
fn levels<S>(seq: &S, grid: &[Vec<f64>], proxy_k: usize) -> Result<(Levels, Vec<f64>)>
where
    S: ObjectiveSequence + ?Sized,
{
    let domain = seq.domain();
    let k0 = seq.constants().k0;
    let proxy = eval_grid(seq, proxy_k, grid)?;
    let (mut best, mut best_i) = (f64::NEG_INFINITY, 0);
    let mut boundary = f64::NEG_INFINITY;
    for (i, (theta, &v)) in grid.iter().zip(&proxy).enumerate() {
        if v > best {
            best = v;
            best_i = i;
        }
        if domain.on_face(theta) {
            boundary = boundary.max(v);
        }
    }
    let delta = best - boundary;
    let y0 = 0.5 * ((boundary + delta / 4.0) + (best - delta / 4.0));
    let at_k0 = eval_grid(seq, k0, grid)?;
    let level = y0 - delta / 8.0;
    let dist_c = grid
        .iter()
        .zip(&at_k0)
        .filter(|(_, &v)| v >= level)
        .map(|(theta, _)| domain.distance_to_boundary(theta))
        .fold(f64::INFINITY, f64::min);
    // C may reach up to one grid spacing past its last grid point.
    let spacing = domain
        .lower()
        .iter()
        .zip(domain.upper())
        .map(|(lo, hi)| (hi - lo) / (grid_side(grid.len(), domain.dim()) - 1) as f64)
        .fold(0.0_f64, f64::max);
    let dist_c = if dist_c.is_finite() { (dist_c - spacing).max(0.0) } else { 0.0 };
    Ok((
        Levels {
            delta,
            y0,
            argmax: grid[best_i].clone(),
            dist_c,
        },
        at_k0,
    ))
}

fn grid_side(points: usize, dim: usize) -> usize {
    let side = (points as f64).powf(1.0 / dim as f64).round() as usize;
    side.max(2)
}

fn check_grid(grid_points: usize) -> Result<()> {
    if grid_points < 11 {
        return Err(Error::InvalidArgument(format!("need at least 11 grid points, got {grid_points}")));
    }
    Ok(())
}

/// Audit of the start-up conditions of the concave runner with proxy order
/// `k0 + 40`.
pub fn verify_lemma1<S>(seq: &S, grid_points: usize) -> Result<Lemma1Report>
where
    S: ObjectiveSequence + ?Sized,
{
    verify_lemma1_at(seq, grid_points, seq.constants().k0 + PROXY_OFFSET)
}

/// [`verify_lemma1`] with an explicit proxy order.
pub fn verify_lemma1_at<S>(seq: &S, grid_points: usize, proxy_k: usize) -> Result<Lemma1Report>
where
    S: ObjectiveSequence + ?Sized,
{
    check_grid(grid_points)?;
    let c = seq.constants();
    let grid = seq.domain().grid(grid_points);
    let (lv, _) = levels(seq, &grid, proxy_k)?;
    let (n, m, rho, k0) = (c.n_at(c.k0), c.big_m, c.rho, c.k0);
    let r1 = rho.powi(k0 as i32 + 1);
    let lhs = (((n + m) * m * r1 + 2.0 * n * r1) / (1.0 - rho), n * rho.powi(k0 as i32));
    let bar = lv.delta / 8.0;
    let passed = lv.delta > 0.0 && lhs.0 <= bar && lhs.1 <= bar && lv.dist_c > 0.0;
    Ok(Lemma1Report {
        delta_est: lv.delta,
        y0: lv.y0,
        k0_checked: k0,
        proxy_k,
        cond_a_lhs: lhs,
        dist_c_boundary: lv.dist_c,
        argmax: lv.argmax,
        passed,
    })
}

/// Audit of the start-up conditions of the floored runner, including a
/// start point in `A_{k0} ∩ B_{k0}`.
pub fn verify_lemma5<S>(seq: &S, b: f64, grid_points: usize) -> Result<Lemma5Report>
where
    S: ObjectiveSequence + ?Sized,
{
    verify_lemma5_at(seq, b, grid_points, seq.constants().k0 + PROXY_OFFSET)
}

/// [`verify_lemma5`] with an explicit proxy order.
pub fn verify_lemma5_at<S>(seq: &S, b: f64, grid_points: usize, proxy_k: usize) -> Result<Lemma5Report>
where
    S: ObjectiveSequence + ?Sized,
{
    check_grid(grid_points)?;
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::InvalidArgument(format!("b must lie in (0,1), got {b}")));
    }
    let c = seq.constants();
    let domain = seq.domain();
    let grid = seq.domain().grid(grid_points);
    let (lv, at_k0) = levels(seq, &grid, proxy_k)?;
    let (n, rho, k0) = (c.n_at(c.k0), c.rho, c.k0);
    let lhs = (
        rho.powf(1.0 / 3.0) + rho.powf(2.0 * k0 as f64 / 3.0),
        2.0 * n * rho.powi(k0 as i32) / (1.0 - rho),
    );
    let floor = gradient_floor(c, k0, b);
    let candidates: Vec<usize> = (0..grid.len())
        .filter(|&i| at_k0[i] >= lv.y0 && domain.is_interior(&grid[i]))
        .collect();
    let norms: Vec<Option<f64>> = candidates
        .par_iter()
        .map(|&i| seq.grad(k0, &grid[i]).ok().map(|g| norm2(&g)))
        .collect();
    let witness = candidates
        .iter()
        .zip(&norms)
        .find(|(_, g)| g.is_some_and(|g| g >= floor))
        .map(|(&i, _)| grid[i].clone());
    let passed = lv.delta > 0.0 && lhs.0 < 1.0 && lhs.1 <= lv.delta / 8.0 && lv.dist_c > 0.0 && witness.is_some();
    Ok(Lemma5Report {
        delta_est: lv.delta,
        y0: lv.y0,
        k0_checked: k0,
        proxy_k,
        cond_a_lhs: lhs,
        dist_c_boundary: lv.dist_c,
        witness,
        passed,
    })
}
