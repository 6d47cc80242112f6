//! Incremental density-based clustering over a growing point set.
//!
//! [`ClusterState`] accepts points one at a time and keeps the DBSCAN
//! classification (core / border / noise) and the cluster partition up to
//! date after every insertion. Only insertions are supported.
//!
//! A point's ε-neighborhood includes the point itself, so a point is core
//! when at least `min_pts` members (itself included) lie within `eps`.
//!
//! Clusters are merged through a union-find over cluster ids; stored
//! per-point labels are resolved lazily. Each cluster also tracks its
//! presence: the summed time between index-consecutive members.

mod batch;
pub(crate) mod grid;

use std::collections::HashMap;
use std::fmt;

pub use batch::{batch_cluster, BatchClustering};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::segment::Segment;
use crate::trajectory::Position;
pub(crate) use grid::Grid;

/// Identifier of a cluster inside one [`ClusterState`]. After merges,
/// lookups always return the surviving representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClusterId(u32);

impl fmt::Display for ClusterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// What happened to the inserted point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The point is noise.
    Noise,
    /// The point joined an existing cluster.
    Joined(ClusterId),
    /// A new cluster was created around the point.
    Created(ClusterId),
    /// Several clusters were merged into the point's cluster.
    Merged { from: Vec<ClusterId>, into: ClusterId },
}

/// Result of [`ClusterState::insert`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertEffect {
    pub outcome: InsertOutcome,
    /// Every cluster that gained members, resolved after all merges.
    pub touched: Vec<ClusterId>,
    /// Points (by id) that received a cluster label during this insertion,
    /// the inserted point included.
    pub labeled: Vec<usize>,
    /// Whether any merge happened during this insertion.
    pub merged: bool,
}

#[derive(Debug, Clone)]
struct ClusterData {
    members: Vec<u32>,
    presence: f64,
    first: usize,
    last: usize,
}

/// Incrementally maintained DBSCAN clustering.
#[derive(Debug, Clone)]
pub struct ClusterState {
    eps: f64,
    eps_sq: f64,
    min_pts: usize,
    ids: Vec<usize>,
    positions: Vec<Position>,
    times: Vec<f64>,
    slot_of: HashMap<usize, u32>,
    grid: Grid,
    neighbor_count: Vec<u32>,
    core: Vec<bool>,
    label: Vec<Option<u32>>,
    parent: Vec<u32>,
    clusters: Vec<ClusterData>,
}

impl ClusterState {
    pub fn new(eps: f64, min_pts: usize) -> Result<Self> {
        let params = Params::new(eps, min_pts, 0.0)?;
        Ok(Self::with_params(&params))
    }

    pub fn with_params(params: &Params) -> Self {
        ClusterState {
            eps: params.eps(),
            eps_sq: params.eps() * params.eps(),
            min_pts: params.min_pts(),
            ids: Vec::new(),
            positions: Vec::new(),
            times: Vec::new(),
            slot_of: HashMap::new(),
            grid: Grid::new(params.eps()),
            neighbor_count: Vec::new(),
            core: Vec::new(),
            label: Vec::new(),
            parent: Vec::new(),
            clusters: Vec::new(),
        }
    }

    /// Removes every point, keeping allocations.
    pub fn clear(&mut self) {
        self.ids.clear();
        self.positions.clear();
        self.times.clear();
        self.slot_of.clear();
        self.grid.clear();
        self.neighbor_count.clear();
        self.core.clear();
        self.label.clear();
        self.parent.clear();
        self.clusters.clear();
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn min_pts(&self) -> usize {
        self.min_pts
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.slot_of.contains_key(&id)
    }

    /// Point ids in insertion order.
    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    fn slot(&self, id: usize) -> Result<u32> {
        self.slot_of
            .get(&id)
            .copied()
            .ok_or_else(|| Error::invalid(format!("point {id} is not in the cluster state")))
    }

    pub fn position(&self, id: usize) -> Result<Position> {
        Ok(self.positions[self.slot(id)? as usize])
    }

    /// Ids of all members within `radius` of `pos` (boundary inclusive).
    pub fn neighborhood(&self, pos: &Position, radius: f64) -> Vec<usize> {
        let r_sq = radius * radius;
        let mut out = Vec::new();
        self.grid.for_each_candidate(pos, radius, |s| {
            if self.positions[s as usize].distance_sq(pos) <= r_sq {
                out.push(self.ids[s as usize]);
            }
        });
        out.sort_unstable();
        out
    }

    fn neighbor_slots(&self, slot: u32) -> Vec<u32> {
        let pos = self.positions[slot as usize];
        let mut out = Vec::new();
        self.grid.for_each_candidate(&pos, self.eps, |s| {
            if self.positions[s as usize].distance_sq(&pos) <= self.eps_sq {
                out.push(s);
            }
        });
        out
    }

    fn find(&mut self, mut c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[c as usize] != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn find_ro(&self, mut c: u32) -> u32 {
        while self.parent[c as usize] != c {
            c = self.parent[c as usize];
        }
        c
    }

    fn root_of_slot(&self, slot: u32) -> Option<u32> {
        self.label[slot as usize].map(|c| self.find_ro(c))
    }

    fn new_cluster(&mut self) -> u32 {
        let id = self.clusters.len() as u32;
        self.parent.push(id);
        self.clusters.push(ClusterData {
            members: Vec::new(),
            presence: 0.0,
            first: usize::MAX,
            last: 0,
        });
        id
    }

    /// Time gained by `root` if `slot` joins it: links to index-adjacent members.
    fn adjacency_gain(&self, slot: u32, root: u32) -> f64 {
        let id = self.ids[slot as usize];
        let t = self.times[slot as usize];
        let mut gain = 0.0;
        for nb in [id.wrapping_sub(1), id + 1] {
            if let Some(&s) = self.slot_of.get(&nb) {
                if self.root_of_slot(s) == Some(root) {
                    gain += (self.times[s as usize] - t).abs();
                }
            }
        }
        gain
    }

    fn assign(&mut self, slot: u32, root: u32) {
        debug_assert!(self.label[slot as usize].is_none());
        let gain = self.adjacency_gain(slot, root);
        self.label[slot as usize] = Some(root);
        let id = self.ids[slot as usize];
        let data = &mut self.clusters[root as usize];
        data.members.push(slot);
        data.presence += gain;
        data.first = data.first.min(id);
        data.last = data.last.max(id);
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        let (keep, gone) = if self.clusters[a as usize].members.len() >= self.clusters[b as usize].members.len() {
            (a, b)
        } else {
            (b, a)
        };
        let moved = std::mem::take(&mut self.clusters[gone as usize].members);
        let mut cross = 0.0;
        for &s in &moved {
            cross += self.adjacency_gain(s, keep);
        }
        let gone_data = self.clusters[gone as usize].clone();
        self.parent[gone as usize] = keep;
        let data = &mut self.clusters[keep as usize];
        data.members.extend(moved);
        data.presence += gone_data.presence + cross;
        data.first = data.first.min(gone_data.first);
        data.last = data.last.max(gone_data.last);
        keep
    }

    /// Inserts point `id` at `pos` with timestamp `time` and updates the
    /// clustering.
    ///
    /// Border points reachable from several clusters are given to the
    /// cluster of the reaching core point with the smallest id at the
    /// moment they are labeled; labels of border points are never revised.
    pub fn insert(&mut self, id: usize, pos: Position, time: f64) -> Result<InsertEffect> {
        if self.slot_of.contains_key(&id) {
            return Err(Error::invalid(format!("point {id} is already in the cluster state")));
        }
        if !(pos.x.is_finite() && pos.y.is_finite()) {
            return Err(Error::invalid(format!("point {id} has a non-finite position")));
        }
        let me = self.ids.len() as u32;
        self.ids.push(id);
        self.positions.push(pos);
        self.times.push(time);
        self.slot_of.insert(id, me);
        self.grid.insert(&pos, me);
        self.neighbor_count.push(0);
        self.core.push(false);
        self.label.push(None);

        let my_neighbors = self.neighbor_slots(me);
        self.neighbor_count[me as usize] = my_neighbors.len() as u32;
        let min_pts = self.min_pts as u32;
        let mut promoted: Vec<u32> = Vec::new();
        for &q in &my_neighbors {
            if q != me {
                self.neighbor_count[q as usize] += 1;
                if !self.core[q as usize] && self.neighbor_count[q as usize] >= min_pts {
                    promoted.push(q);
                }
            }
        }
        if self.neighbor_count[me as usize] >= min_pts {
            promoted.push(me);
        }
        promoted.sort_unstable_by_key(|&s| self.ids[s as usize]);

        let mut labeled: Vec<u32> = Vec::new();
        let mut touched: Vec<u32> = Vec::new();
        let mut merged_roots: Vec<u32> = Vec::new();
        let mut created: Option<u32> = None;

        for &c in &promoted {
            self.core[c as usize] = true;
        }
        for &c in &promoted {
            let cn = if c == me { my_neighbors.clone() } else { self.neighbor_slots(c) };
            let mut roots: Vec<u32> = Vec::new();
            if let Some(l) = self.label[c as usize] {
                roots.push(self.find(l));
            }
            for &q in &cn {
                if q != c && self.core[q as usize] {
                    if let Some(l) = self.label[q as usize] {
                        roots.push(self.find(l));
                    }
                }
            }
            roots.sort_unstable();
            roots.dedup();
            let root = match roots.as_slice() {
                [] => {
                    let r = self.new_cluster();
                    created.get_or_insert(r);
                    r
                }
                [only] => *only,
                many => {
                    merged_roots.extend_from_slice(many);
                    let mut r = many[0];
                    for &o in &many[1..] {
                        r = self.union(r, o);
                    }
                    r
                }
            };
            if self.label[c as usize].is_none() {
                self.assign(c, root);
                labeled.push(c);
            }
            touched.push(root);
            for &q in &cn {
                if q != me && !self.core[q as usize] && self.label[q as usize].is_none() {
                    self.assign(q, root);
                    labeled.push(q);
                }
            }
        }

        if !self.core[me as usize] {
            let reaching = my_neighbors
                .iter()
                .copied()
                .filter(|&q| q != me && self.core[q as usize])
                .min_by_key(|&q| self.ids[q as usize]);
            if let Some(q) = reaching {
                let root = self.find(self.label[q as usize].expect("core points are labeled"));
                self.assign(me, root);
                labeled.push(me);
                touched.push(root);
            }
        }

        let mut touched: Vec<ClusterId> = touched.into_iter().map(|r| ClusterId(self.find(r))).collect();
        touched.sort_unstable();
        touched.dedup();

        let my_root = self.label[me as usize].map(|l| self.find(l));
        let merged = !merged_roots.is_empty();
        let outcome = match my_root {
            None => InsertOutcome::Noise,
            Some(r) => {
                let mut from: Vec<ClusterId> = Vec::new();
                for &m in &merged_roots {
                    if self.find(m) == r {
                        from.push(ClusterId(m));
                    }
                }
                from.sort_unstable();
                from.dedup();
                if from.len() > 1 {
                    InsertOutcome::Merged {
                        from,
                        into: ClusterId(r),
                    }
                } else if created.is_some_and(|c| self.find(c) == r) {
                    InsertOutcome::Created(ClusterId(r))
                } else {
                    InsertOutcome::Joined(ClusterId(r))
                }
            }
        };

        Ok(InsertEffect {
            outcome,
            touched,
            labeled: labeled.into_iter().map(|s| self.ids[s as usize]).collect(),
            merged,
        })
    }

    /// Current cluster of point `id`, or `None` for noise.
    pub fn cluster_of(&self, id: usize) -> Result<Option<ClusterId>> {
        let s = self.slot(id)?;
        Ok(self.root_of_slot(s).map(ClusterId))
    }

    pub fn is_core(&self, id: usize) -> Result<bool> {
        Ok(self.core[self.slot(id)? as usize])
    }

    /// Resolves a possibly stale id to the surviving cluster.
    pub fn resolve(&self, c: ClusterId) -> ClusterId {
        ClusterId(self.find_ro(c.0))
    }

    /// `true` if `id` is a member of `cluster` or lies within `eps` of one
    /// of its core points.
    pub fn reaches(&self, id: usize, cluster: ClusterId) -> Result<bool> {
        let s = self.slot(id)?;
        let target = self.find_ro(cluster.0);
        if self.root_of_slot(s) == Some(target) {
            return Ok(true);
        }
        if self.label[s as usize].is_none() {
            return Ok(false);
        }
        Ok(self
            .neighbor_slots(s)
            .into_iter()
            .any(|q| self.core[q as usize] && self.root_of_slot(q) == Some(target)))
    }

    /// Live cluster ids, ordered by their first member index.
    pub fn clusters(&self) -> Vec<ClusterId> {
        let mut out: Vec<u32> = (0..self.clusters.len() as u32)
            .filter(|&c| self.parent[c as usize] == c)
            .collect();
        out.sort_unstable_by_key(|&c| self.clusters[c as usize].first);
        out.into_iter().map(ClusterId).collect()
    }

    fn data(&self, c: ClusterId) -> &ClusterData {
        &self.clusters[self.find_ro(c.0) as usize]
    }

    pub fn cluster_size(&self, c: ClusterId) -> usize {
        self.data(c).members.len()
    }

    /// Summed time between index-consecutive members. Maintained
    /// incrementally; agrees with [`Segment::presence`] of
    /// [`Self::cluster_segment`] up to floating-point rounding.
    pub fn cluster_presence(&self, c: ClusterId) -> f64 {
        self.data(c).presence
    }

    /// Smallest and largest member id.
    pub fn cluster_extent(&self, c: ClusterId) -> (usize, usize) {
        let d = self.data(c);
        (d.first, d.last)
    }

    /// Member ids in no particular order.
    pub fn cluster_members(&self, c: ClusterId) -> impl Iterator<Item = usize> + '_ {
        self.data(c).members.iter().map(|&s| self.ids[s as usize])
    }

    pub fn cluster_segment(&self, c: ClusterId) -> Segment {
        Segment::from_indices(self.cluster_members(c))
    }

    /// Ids of all core points, ascending.
    pub fn core_ids(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.ids.len())
            .filter(|&s| self.core[s])
            .map(|s| self.ids[s])
            .collect();
        out.sort_unstable();
        out
    }
}
