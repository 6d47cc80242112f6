use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::segmentation::seqscan;
use crate::trajectory::Trajectory;

/// One step of the region-count function: for every threshold in
/// `[lo, hi]` the scan finds `regions` stay regions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FTableRow {
    pub lo: f64,
    pub hi: f64,
    pub regions: usize,
}

/// Step-wise map from presence threshold to number of stay regions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FTable {
    pub rows: Vec<FTableRow>,
    /// Step used to move past each discontinuity.
    pub theta: f64,
}

impl FTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Region count at threshold `delta`. A threshold falling between two
    /// rows (inside a `theta` step) is attributed to the following row;
    /// past the last row the count is 0.
    pub fn regions_at(&self, delta: f64) -> usize {
        self.rows
            .iter()
            .find(|r| delta <= r.hi)
            .map_or(0, |r| r.regions)
    }

    /// Upper end of the last row, if any.
    pub fn max_delta(&self) -> Option<f64> {
        self.rows.last().map(|r| r.hi)
    }
}

/// `theta` used when none is given: a thousandth of the trajectory duration.
pub fn default_theta(traj: &Trajectory) -> f64 {
    traj.duration() / 1000.0
}

/// Builds the threshold/region-count table by repeated scans: starting at
/// threshold 0, each scan yields a row `[delta, min MSR presence]`, and the
/// next scan runs at that minimum plus `theta`, until no region is found.
pub fn presence_sweep(traj: &Trajectory, eps: f64, min_pts: usize, theta: f64) -> Result<FTable> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::invalid(format!("theta must be positive, got {theta}")));
    }
    let mut params = Params::new(eps, min_pts, 0.0)?;
    let mut rows = Vec::new();
    loop {
        let seg = seqscan(traj, &params);
        if seg.regions.is_empty() {
            break;
        }
        let min = seg
            .regions
            .iter()
            .map(|r| r.msr_presence)
            .fold(f64::INFINITY, f64::min);
        rows.push(FTableRow {
            lo: params.presence(),
            hi: min,
            regions: seg.regions.len(),
        });
        params = params.with_presence(min + theta)?;
    }
    Ok(FTable { rows, theta })
}
