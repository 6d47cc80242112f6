//! Post-segmentation analysis: spatial separation between regions, the
//! presence sweep, region similarity and zones, and symbolic trajectories.

mod separation;
mod similarity;
mod sweep;
mod symbolic;

pub use separation::{msr_separated, spatially_separated, SeparationReport};
pub use similarity::{
    core_points, sim, similarity_classes, similarity_matrix, zones, Zone,
};
pub use sweep::{default_theta, presence_sweep, FTable, FTableRow};
pub use symbolic::{symbolic_trajectory, Symbol, SymbolicEntry, SymbolicTrajectory};

use crate::density::Grid;
use crate::trajectory::Position;

/// Fixed point set answering "is anything within `eps` of p?".
pub(crate) struct ProximityIndex {
    grid: Grid,
    points: Vec<Position>,
    eps_sq: f64,
    eps: f64,
}

impl ProximityIndex {
    pub(crate) fn new(points: Vec<Position>, eps: f64) -> Self {
        let mut grid = Grid::new(eps);
        for (k, p) in points.iter().enumerate() {
            grid.insert(p, k as u32);
        }
        ProximityIndex {
            grid,
            points,
            eps_sq: eps * eps,
            eps,
        }
    }

    pub(crate) fn any_within(&self, p: &Position) -> bool {
        let mut hit = false;
        self.grid.for_each_candidate(p, self.eps, |s| {
            hit = hit || self.points[s as usize].distance_sq(p) <= self.eps_sq;
        });
        hit
    }
}
