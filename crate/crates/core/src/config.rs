//! Shared numeric and symbolic limits.

use crate::error::{Error, Result};

/// Length scale used when mapping `x, p` to complex coordinates. Fixed to 1.
pub const LENGTH_SCALE: f64 = 1.0;

pub const DEFAULT_DEGREE_CAP: u32 = 16;
pub const DEFAULT_NODES: usize = 40;
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-14;
pub const DEFAULT_MAX_MODES: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Maximum total degree per mode for parsed symbols and Weyl symmetrization.
    pub degree_cap: u32,
    /// Gauss-Hermite nodes per phase-space dimension.
    pub nodes: usize,
    /// Coherent-state tail mass tolerated when truncating.
    pub tail_tolerance: f64,
    pub max_modes: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            degree_cap: DEFAULT_DEGREE_CAP,
            nodes: DEFAULT_NODES,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
            max_modes: DEFAULT_MAX_MODES,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.degree_cap == 0 {
            return Err(Error::InvalidParameter("degree cap must be positive".into()));
        }
        if self.nodes == 0 {
            return Err(Error::InvalidParameter("node count must be positive".into()));
        }
        if self.tail_tolerance.is_nan() || self.tail_tolerance <= 0.0 {
            return Err(Error::InvalidParameter("tail tolerance must be positive".into()));
        }
        if self.max_modes == 0 {
            return Err(Error::InvalidParameter("mode limit must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("hbar must be positive and finite, got {hbar}")))
    }
}
