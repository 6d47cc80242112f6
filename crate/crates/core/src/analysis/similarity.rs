use serde::Serialize;

use crate::density::batch_cluster;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::segmentation::StayRegion;
use crate::trajectory::{Position, Trajectory};

use super::ProximityIndex;

/// Core points of a closed region, from a batch clustering of its own
/// members under the segmentation's `eps` and `min_pts`.
pub fn core_points(region: &StayRegion, traj: &Trajectory, params: &Params) -> Vec<usize> {
    let members: Vec<usize> = region.segment.indices().collect();
    let positions: Vec<Position> = members.iter().map(|&i| traj.position(i)).collect();
    let batch = batch_cluster(&positions, params.eps(), params.min_pts());
    members
        .into_iter()
        .zip(batch.core)
        .filter_map(|(i, core)| core.then_some(i))
        .collect()
}

struct CoreSet {
    positions: Vec<Position>,
    index: ProximityIndex,
}

impl CoreSet {
    fn new(region: &StayRegion, traj: &Trajectory, params: &Params) -> Self {
        let positions: Vec<Position> = core_points(region, traj, params)
            .into_iter()
            .map(|i| traj.position(i))
            .collect();
        CoreSet {
            index: ProximityIndex::new(positions.clone(), params.eps()),
            positions,
        }
    }

    /// Fraction of this set's core points within eps of a core point of `other`.
    fn reached_fraction(&self, other: &CoreSet) -> f64 {
        if self.positions.is_empty() {
            return 0.0;
        }
        let hit = self
            .positions
            .iter()
            .filter(|p| other.index.any_within(p))
            .count();
        hit as f64 / self.positions.len() as f64
    }
}

fn sim_cores(a: &CoreSet, b: &CoreSet) -> f64 {
    a.reached_fraction(b).max(b.reached_fraction(a))
}

/// Spatial similarity of two regions: the larger of the two fractions of
/// core points lying within `eps` of a core point of the other region.
/// Regions without core points have similarity 0 to everything.
pub fn sim(s1: &StayRegion, s2: &StayRegion, traj: &Trajectory, params: &Params) -> f64 {
    sim_cores(&CoreSet::new(s1, traj, params), &CoreSet::new(s2, traj, params))
}

/// Pairwise similarities, `m[a][b]` for regions in slice order.
pub fn similarity_matrix(regions: &[StayRegion], traj: &Trajectory, params: &Params) -> Vec<Vec<f64>> {
    let cores: Vec<CoreSet> = regions.iter().map(|r| CoreSet::new(r, traj, params)).collect();
    cores
        .iter()
        .map(|a| cores.iter().map(|b| sim_cores(a, b)).collect())
        .collect()
}

/// Two regions are related when their similarity reaches `psi`. With
/// `psi = 0` at least one reachable core point is required (similarity > 0).
fn related(s: f64, psi: f64) -> bool {
    if psi == 0.0 {
        s > 0.0
    } else {
        s >= psi
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partitions the regions into similarity classes: the transitive closure of
/// the relatedness relation. Classes hold region ids, ascending, and are
/// ordered by their smallest id.
pub fn similarity_classes(
    regions: &[StayRegion],
    psi: f64,
    traj: &Trajectory,
    params: &Params,
) -> Result<Vec<Vec<usize>>> {
    if !(0.0..=1.0).contains(&psi) {
        return Err(Error::invalid(format!("psi must lie in [0, 1], got {psi}")));
    }
    let matrix = similarity_matrix(regions, traj, params);
    let n = regions.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for a in 0..n {
        for b in (a + 1)..n {
            if related(matrix[a][b], psi) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot_of_root = vec![usize::MAX; n];
    for k in 0..n {
        let root = find(&mut parent, k);
        if slot_of_root[root] == usize::MAX {
            slot_of_root[root] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot_of_root[root]].push(regions[k].id);
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    Ok(classes)
}

/// Spatial footprint of a similarity class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Zone {
    /// 1-based symbol, in class order.
    pub id: usize,
    /// Region ids of the class.
    pub regions: Vec<usize>,
    /// Trajectory indices of all member points of the class's regions.
    pub indices: Vec<usize>,
    /// Positions of those points.
    pub footprint: Vec<Position>,
}

/// One zone per class: the spatial projection of its regions' members.
pub fn zones(classes: &[Vec<usize>], regions: &[StayRegion], traj: &Trajectory) -> Result<Vec<Zone>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(classes.len());
    for (k, class) in classes.iter().enumerate() {
        if class.is_empty() {
            return Err(Error::invalid(format!("similarity class {} is empty", k + 1)));
        }
        let mut indices = Vec::new();
        for &rid in class {
            if !seen.insert(rid) {
                return Err(Error::invalid(format!("region {rid} appears in more than one class")));
            }
            let region = regions
                .iter()
                .find(|r| r.id == rid)
                .ok_or_else(|| Error::invalid(format!("class refers to unknown region {rid}")))?;
            indices.extend(region.segment.indices());
        }
        indices.sort_unstable();
        indices.dedup();
        out.push(Zone {
            id: k + 1,
            regions: class.clone(),
            footprint: indices.iter().map(|&i| traj.position(i)).collect(),
            indices,
        });
    }
    Ok(out)
}
