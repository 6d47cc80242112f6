//! Cluster-based segmentation of a trajectory into stay regions,
//! transitions and local noise.
//!
//! The scan keeps two incremental clusterings:
//!
//! * the *context* of the active stay region: every point since the
//!   previous region was closed, used to decide whether a new point
//!   prolongs the active region;
//! * the *pool*: the points seen since the active region last grew, where
//!   the next minimal stay region (MSR) is searched for.
//!
//! A point that extends the active region resets the pool. When a pool
//! cluster first satisfies the presence threshold it becomes the MSR of
//! the next region: the active region is closed and the pool becomes the
//! new context.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::density::{ClusterId, ClusterState, InsertEffect};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::segment::Segment;
use crate::trajectory::Trajectory;

/// A closed stay region in path order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StayRegion {
    /// 1-based ordinal in the path.
    pub id: usize,
    pub segment: Segment,
    /// The minimal stay region the region grew from.
    pub msr: Segment,
    /// Presence of `segment`, seconds.
    pub presence: f64,
    /// Duration of `segment`, seconds.
    pub duration: f64,
    /// Presence of `msr`, seconds.
    pub msr_presence: f64,
}

impl StayRegion {
    pub fn first(&self) -> usize {
        self.segment.first().expect("stay regions are non-empty")
    }

    pub fn last(&self) -> usize {
        self.segment.last().expect("stay regions are non-empty")
    }

    pub fn len(&self) -> usize {
        self.segment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segment.is_empty()
    }
}

/// Per-point classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    /// Member of stay region `n` (1-based).
    Member(usize),
    /// Unclustered point inside the temporal extent of region `n`.
    LocalNoise(usize),
    /// Unclustered point in gap `n`: 0 before the first region, `k` between
    /// regions `k` and `k + 1`.
    Transition(usize),
}

impl PointClass {
    pub fn region(&self) -> Option<usize> {
        match *self {
            PointClass::Member(r) | PointClass::LocalNoise(r) => Some(r),
            PointClass::Transition(_) => None,
        }
    }

    pub fn code(&self) -> char {
        match self {
            PointClass::Member(_) => 'C',
            PointClass::LocalNoise(_) => 'N',
            PointClass::Transition(_) => 'T',
        }
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointClass::Member(r) => write!(f, "C{r}"),
            PointClass::LocalNoise(r) => write!(f, "N{r}"),
            PointClass::Transition(_) => f.write_str("T"),
        }
    }
}

/// The path of stay regions plus a class for every point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segmentation {
    pub regions: Vec<StayRegion>,
    /// `classes[k]` is the class of point `k + 1`.
    pub classes: Vec<PointClass>,
    pub params: Params,
}

impl Segmentation {
    pub fn region(&self, id: usize) -> Option<&StayRegion> {
        id.checked_sub(1).and_then(|k| self.regions.get(k))
    }

    pub fn class_of(&self, index: usize) -> Option<PointClass> {
        index.checked_sub(1).and_then(|k| self.classes.get(k)).copied()
    }

    fn indices_where(&self, pred: impl Fn(&PointClass) -> bool) -> Vec<usize> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| pred(c))
            .map(|(k, _)| k + 1)
            .collect()
    }

    /// Local-noise indices of region `id`.
    pub fn local_noise(&self, id: usize) -> Vec<usize> {
        self.indices_where(|c| *c == PointClass::LocalNoise(id))
    }

    /// Transition indices of gap `gap`.
    pub fn transition(&self, gap: usize) -> Vec<usize> {
        self.indices_where(|c| *c == PointClass::Transition(gap))
    }

    pub fn all_transitions(&self) -> Vec<usize> {
        self.indices_where(|c| matches!(c, PointClass::Transition(_)))
    }

    pub fn all_local_noise(&self) -> Vec<usize> {
        self.indices_where(|c| matches!(c, PointClass::LocalNoise(_)))
    }
}

/// A pool cluster that first satisfied the presence threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalStayRegion {
    pub cluster: ClusterId,
    pub segment: Segment,
    pub presence: f64,
}

/// The stay region currently being expanded, tracked against its context.
#[derive(Debug, Clone)]
pub struct ActiveRegion {
    cluster: ClusterId,
    members: Vec<usize>,
    from_cluster: usize,
    msr: Segment,
    msr_presence: f64,
}

impl ActiveRegion {
    /// Starts a region from an MSR found in `context`.
    pub fn new(msr: MinimalStayRegion, context: &ClusterState) -> Self {
        let members: Vec<usize> = msr.segment.indices().collect();
        ActiveRegion {
            cluster: msr.cluster,
            from_cluster: context.cluster_size(msr.cluster),
            members,
            msr: msr.segment,
            msr_presence: msr.presence,
        }
    }

    pub fn cluster(&self, context: &ClusterState) -> ClusterId {
        context.resolve(self.cluster)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn msr(&self) -> &Segment {
        &self.msr
    }
}

/// Whether point `i`, already inserted into `context`, prolongs the active
/// region: it belongs to the context cluster that grew from the MSR, or lies
/// within `eps` of one of that cluster's core points.
pub fn can_expand(active: &ActiveRegion, i: usize, context: &ClusterState) -> bool {
    context.reaches(i, active.cluster(context)).unwrap_or(false)
}

/// Adds `i` and every context member of the active cluster not yet in the
/// region. `effect` is the context insertion that just happened for `i`.
fn absorb(
    active: &mut ActiveRegion,
    i: usize,
    effect: &InsertEffect,
    context: &ClusterState,
    claimed: &mut [bool],
) {
    let root = active.cluster(context);
    let mut claim = |id: usize, members: &mut Vec<usize>| {
        if !claimed[id] {
            claimed[id] = true;
            members.push(id);
            true
        } else {
            false
        }
    };
    if !effect.merged {
        for &id in &effect.labeled {
            if context.cluster_of(id).ok().flatten() == Some(root) && claim(id, &mut active.members) {
                active.from_cluster += 1;
            }
        }
    }
    if effect.merged || context.cluster_size(root) > active.from_cluster {
        for id in context.cluster_members(root) {
            claim(id, &mut active.members);
        }
        active.from_cluster = context.cluster_size(root);
    }
    claim(i, &mut active.members);
}

/// Looks for a minimal stay region among the pool clusters touched by the
/// latest insertion. Returns the one with the earliest first index when
/// several qualify at once.
pub fn find_msr(
    pool: &ClusterState,
    touched: &[ClusterId],
    traj: &Trajectory,
    params: &Params,
) -> Option<MinimalStayRegion> {
    let threshold = params.presence();
    // incremental sums are only used to prune; the decision uses the exact
    // per-interval presence
    let slack = 1e-9 * threshold.max(1.0);
    let mut best: Option<MinimalStayRegion> = None;
    for &c in touched {
        let c = pool.resolve(c);
        if pool.cluster_size(c) < params.min_pts() || pool.cluster_presence(c) < threshold - slack {
            continue;
        }
        let segment = pool.cluster_segment(c);
        let presence = segment.presence(traj).ok()?;
        if presence < threshold {
            continue;
        }
        let earlier = best
            .as_ref()
            .is_none_or(|b| segment.first() < b.segment.first());
        if earlier {
            best = Some(MinimalStayRegion {
                cluster: c,
                segment,
                presence,
            });
        }
    }
    best
}

fn close(active: ActiveRegion, id: usize, traj: &Trajectory) -> StayRegion {
    let segment = Segment::from_indices(active.members);
    StayRegion {
        id,
        presence: segment.presence(traj).expect("region indices are valid"),
        duration: segment.duration(traj).expect("region indices are valid"),
        segment,
        msr: active.msr,
        msr_presence: active.msr_presence,
    }
}

/// Segments `traj` into its first path of stay regions.
///
/// Each region starts from the first pool cluster (in time) that satisfies
/// the presence threshold after the previous region, and grows for as long
/// as new points reach its context cluster. Unclustered points are then
/// split into local noise and transitions by [`classify`].
pub fn seqscan(traj: &Trajectory, params: &Params) -> Segmentation {
    let mut context = ClusterState::with_params(params);
    let mut pool = ClusterState::with_params(params);
    let mut active: Option<ActiveRegion> = None;
    let mut closed: Vec<StayRegion> = Vec::new();
    let mut claimed = vec![false; traj.len() + 1];

    for p in traj.points() {
        let i = p.index;
        if let Some(region) = active.as_mut() {
            let effect = context
                .insert(i, p.position, p.timestamp)
                .expect("indices are unique");
            if can_expand(region, i, &context) {
                absorb(region, i, &effect, &context, &mut claimed);
                pool.clear();
                continue;
            }
        }
        let effect = pool
            .insert(i, p.position, p.timestamp)
            .expect("indices are unique");
        if let Some(msr) = find_msr(&pool, &effect.touched, traj, params) {
            if let Some(done) = active.take() {
                closed.push(close(done, closed.len() + 1, traj));
            }
            for id in msr.segment.indices() {
                claimed[id] = true;
            }
            std::mem::swap(&mut context, &mut pool);
            pool.clear();
            active = Some(ActiveRegion::new(msr, &context));
        }
    }
    if let Some(done) = active.take() {
        closed.push(close(done, closed.len() + 1, traj));
    }

    let classes = classify(traj, &closed).expect("scan output is temporally separated");
    Segmentation {
        regions: closed,
        classes,
        params: *params,
    }
}

/// Labels every point: members, local noise inside a region's temporal
/// extent, and transitions in the gaps between extents.
pub fn classify(traj: &Trajectory, regions: &[StayRegion]) -> Result<Vec<PointClass>> {
    let n = traj.len();
    let mut extents = Vec::with_capacity(regions.len());
    for r in regions {
        let ext = r
            .segment
            .extent()
            .ok_or_else(|| Error::invalid(format!("stay region {} is empty", r.id)))?;
        if ext.hi > n {
            return Err(Error::invalid(format!(
                "stay region {} ends at index {} beyond the trajectory",
                r.id, ext.hi
            )));
        }
        extents.push((ext, r));
    }
    for w in extents.windows(2) {
        if w[1].0.lo <= w[0].0.hi {
            return Err(Error::invalid(format!(
                "stay regions {} and {} have overlapping temporal extents {} and {}",
                w[0].1.id, w[1].1.id, w[0].0, w[1].0
            )));
        }
    }

    let mut classes = Vec::with_capacity(n);
    let mut next = 0;
    for i in 1..=n {
        while next < extents.len() && extents[next].0.hi < i {
            next += 1;
        }
        let class = match extents.get(next) {
            Some((ext, r)) if ext.lo <= i => {
                if r.segment.contains(i) {
                    PointClass::Member(r.id)
                } else {
                    PointClass::LocalNoise(r.id)
                }
            }
            _ => PointClass::Transition(next),
        };
        classes.push(class);
    }
    Ok(classes)
}
