//! Run report written as JSON.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub channel: String,
    pub algorithm: u8,
    pub constants: Constants,
    #[serde(rename = "final")]
    pub final_iterate: FinalIterate,
    /// Absent for the floored algorithm and when no strong-concavity
    /// modulus is known.
    pub bound: Option<Bound>,
    pub verification: Verification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(rename = "N_poly")]
    pub n_poly: [f64; 3],
    pub rho: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub m: Option<f64>,
    pub k0: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalIterate {
    pub theta: Vec<f64>,
    pub f: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub eta: f64,
    pub recursion: f64,
    pub tail: f64,
    pub interval: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub passed: bool,
    pub delta: f64,
    pub y0: f64,
    pub dist: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
