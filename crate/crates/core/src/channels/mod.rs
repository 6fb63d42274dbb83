//! Channel objectives: BEC under a run-length constraint, the noiseless
//! two-state channel, Gilbert-Elliott, a generic small-`k` finite-state
//! channel, and Birch lower bounds.

pub mod bec;
pub mod birch;
pub mod generic;
pub mod gilbert_elliott;
pub mod noiseless;

pub use bec::{bec_fk, bec_objective, bec_output_upper_bound, BecObjective, BecRllChannel};
pub use birch::{birch_bound_bec, birch_bound_bec_first_order, birch_bound_noiseless};
pub use generic::{generic_fsc_fk, iid_input, rll_input, GenericFsc, GenericObjective, InputParam, GENERIC_MAX_K};
pub use gilbert_elliott::{
    fit_drift, ge_error_entropy, ge_fitted_constants, ge_fk, ge_fk_profile, ge_objective, DriftFit, GeObjective, GilbertElliott, GE_DEFAULT_ALPHA,
    GE_DEFAULT_B, GE_DEFAULT_BETA, GE_DEFAULT_K0, GE_DEFAULT_M, GE_DEFAULT_OUTER_ITERS, GE_DEFAULT_THETA0, GE_PROXY_K,
};
pub use noiseless::{noiseless_fk, noiseless_objective, noiseless_output_source, NoiselessObjective, NoiselessTwoState};
