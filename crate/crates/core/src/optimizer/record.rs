/// One accepted outer iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateRecord {
    /// Outer index `k ≥ 1`; the objective is `g_k = f_{k+k0}`.
    pub outer_k: usize,
    pub theta: Vec<f64>,
    /// `g_k(θ_k)`.
    pub f_value: f64,
    /// `‖∇g_k(θ_k)‖₂`.
    pub grad_norm: f64,
    /// Accepted step `β^backtracks`.
    pub step_t: f64,
    /// Number of rejected trial steps `T(k)`.
    pub backtracks: usize,
    /// The zero-gradient branch supplied the direction.
    pub perturbed: bool,
    /// The last rejected trial failed the gradient-norm floor.
    pub floor_active: bool,
}
