use crate::domain::ParamDomain;
use crate::error::{Error, Result};

/// Default cap on backtracking steps per outer iteration.
pub const DEFAULT_MAX_BACKTRACKS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct Algo1Config {
    pub alpha: f64,
    pub beta: f64,
    pub theta0: Vec<f64>,
    pub outer_iters: usize,
    pub max_backtracks: usize,
}

impl Algo1Config {
    pub fn new(alpha: f64, beta: f64, theta0: Vec<f64>, outer_iters: usize) -> Self {
        Self {
            alpha,
            beta,
            theta0,
            outer_iters,
            max_backtracks: DEFAULT_MAX_BACKTRACKS,
        }
    }

    /// Range checks on the step parameters and interior start.
    pub fn validate(&self, domain: &ParamDomain) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(Error::InvalidConfig("alpha must lie in (0,0.5)".into()));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidConfig("beta must lie in (0,1)".into()));
        }
        if self.outer_iters == 0 {
            return Err(Error::InvalidConfig("outer_iters must be positive".into()));
        }
        if self.max_backtracks == 0 {
            return Err(Error::InvalidConfig("max_backtracks must be positive".into()));
        }
        domain.check_dim(&self.theta0)?;
        if !domain.is_interior(&self.theta0) {
            return Err(Error::InvalidConfig(format!("theta0 {:?} is not interior", self.theta0)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Algo3Config {
    pub base: Algo1Config,
    pub b: f64,
    pub y0: f64,
}

impl Algo3Config {
    pub fn new(base: Algo1Config, b: f64, y0: f64) -> Self {
        Self { base, b, y0 }
    }

    pub fn validate(&self, domain: &ParamDomain) -> Result<()> {
        self.base.validate(domain)?;
        if !(self.b > 0.0 && self.b < 1.0) {
            return Err(Error::InvalidConfig("b must lie in (0,1)".into()));
        }
        if !self.y0.is_finite() {
            return Err(Error::InvalidConfig("y0 must be finite".into()));
        }
        Ok(())
    }
}
