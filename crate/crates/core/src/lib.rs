//! Fixed-order Markov capacities of finite-state channels.
//!
//! The crate maximizes a mutual-information rate `f(θ) = lim f_k(θ)` over a
//! box of input-process parameters by running backtracking gradient ascent on
//! the explicitly computable approximations `f_k`, and then turns the run's
//! trace into a certified interval for the maximum.
//!
//! Layout:
//!
//! - [`domain`] and [`objective`]: parameter boxes, the objective-sequence
//!   abstraction with its convergence constants, finite-difference
//!   derivatives.
//! - [`markov`]: stationary distributions, exact hidden-Markov conditional
//!   entropies, Perron log-eigenvalues of constrained shifts.
//! - [`channels`]: the erasure channel under the `(1,∞)`-RLL constraint, the
//!   noiseless two-state channel, the Gilbert-Elliott channel, a generic
//!   small-`k` finite-state channel objective and Birch lower bounds.
//! - [`optimizer`]: the strongly concave runner, the gradient-floor runner
//!   for the non-concave case, initialization audits and the certified
//!   error-bound recursion.

pub mod channels;
pub mod domain;
pub mod error;
pub mod markov;
pub mod objective;
pub mod optimizer;

pub use domain::{ParamDomain, PointClass};
pub use error::{Error, Result};
pub use objective::{FnObjective, ObjectiveSequence, SequenceConstants};
