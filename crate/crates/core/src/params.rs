use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Segmentation parameters: the density pair (`eps`, `min_pts`) and the
/// presence threshold in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    eps: f64,
    min_pts: usize,
    presence: f64,
}

impl Params {
    pub fn new(eps: f64, min_pts: usize, presence: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::invalid(format!("eps must be a positive number, got {eps}")));
        }
        if min_pts < 1 {
            return Err(Error::invalid("min_pts must be at least 1"));
        }
        if !(presence.is_finite() && presence >= 0.0) {
            return Err(Error::invalid(format!(
                "presence threshold must be a non-negative number, got {presence}"
            )));
        }
        Ok(Params {
            eps,
            min_pts,
            presence,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn min_pts(&self) -> usize {
        self.min_pts
    }

    /// Minimum presence, in seconds.
    pub fn presence(&self) -> f64 {
        self.presence
    }

    pub fn with_presence(&self, presence: f64) -> Result<Self> {
        Params::new(self.eps, self.min_pts, presence)
    }
}
