use crate::error::{Error, Result};
use crate::segmentation::{Segmentation, StayRegion};
use crate::trajectory::Trajectory;

use super::{core_points, ProximityIndex};

/// Outcome of testing whether region `pair.0` is spatially separated by
/// region `pair.1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationReport {
    pub pair: (usize, usize),
    pub separated: bool,
    /// Smallest index of `pair.0` (or its local noise) within `eps` of a
    /// core point of `pair.1`.
    pub witness: Option<usize>,
}

fn lookup(seg: &Segmentation, id: usize) -> Result<&StayRegion> {
    seg.region(id)
        .ok_or_else(|| Error::invalid(format!("no stay region {id} in the segmentation")))
}

fn check(
    candidates: impl IntoIterator<Item = usize>,
    earlier: &StayRegion,
    pair: (usize, usize),
    seg: &Segmentation,
    traj: &Trajectory,
) -> SeparationReport {
    let cores = core_points(earlier, traj, &seg.params);
    let index = ProximityIndex::new(cores.iter().map(|&i| traj.position(i)).collect(), seg.params.eps());
    let mut candidates: Vec<usize> = candidates.into_iter().collect();
    candidates.sort_unstable();
    let witness = candidates
        .into_iter()
        .find(|&i| index.any_within(&traj.position(i)));
    SeparationReport {
        pair,
        separated: witness.is_none(),
        witness,
    }
}

/// Whether region `later` is spatially separated by region `earlier`: no
/// member or local-noise point of `later` lies within `eps` of a core point
/// of `earlier`. The relation is not symmetric.
///
/// Core points of a closed region are those of a batch clustering of its
/// own members.
pub fn spatially_separated(
    seg: &Segmentation,
    later: usize,
    earlier: usize,
    traj: &Trajectory,
) -> Result<SeparationReport> {
    let s2 = lookup(seg, later)?;
    let s1 = lookup(seg, earlier)?;
    let candidates = s2.segment.indices().chain(seg.local_noise(later));
    Ok(check(candidates, s1, (later, earlier), seg, traj))
}

/// Same test restricted to the MSR of `later` and the unclustered points
/// inside the MSR's temporal extent.
pub fn msr_separated(
    seg: &Segmentation,
    later: usize,
    earlier: usize,
    traj: &Trajectory,
) -> Result<SeparationReport> {
    let s2 = lookup(seg, later)?;
    let s1 = lookup(seg, earlier)?;
    let ext = s2
        .msr
        .extent()
        .ok_or_else(|| Error::invalid(format!("stay region {later} has an empty MSR")))?;
    Ok(check(ext.lo..=ext.hi, s1, (later, earlier), seg, traj))
}
