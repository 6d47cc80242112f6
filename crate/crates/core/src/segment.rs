//! Index intervals and segments (unions of disjoint intervals), together
//! with the two temporal measures defined on them: duration and presence.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectory::Trajectory;

/// A closed run of consecutive indices `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!("interval [{lo},{hi}] has lo > hi")));
        }
        Ok(Interval { lo, hi })
    }

    pub const fn point(i: usize) -> Self {
        Interval { lo: i, hi: i }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// A canonical union of index intervals: sorted, disjoint, and with no two
/// intervals adjacent (consecutive intervals `[a,b]`, `[c,d]` have `c >= b + 2`).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    intervals: Vec<Interval>,
}

/// Sorts and merges overlapping or index-adjacent intervals.
pub fn canonicalize(mut intervals: Vec<Interval>) -> Segment {
    intervals.sort_unstable();
    let mut out: Vec<Interval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi + 1 => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    Segment { intervals: out }
}

impl Segment {
    pub fn empty() -> Self {
        Segment::default()
    }

    /// Builds the segment covering exactly the given indices (any order,
    /// duplicates allowed).
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        let mut intervals: Vec<Interval> = Vec::new();
        for i in idx {
            match intervals.last_mut() {
                Some(last) if i == last.hi + 1 => last.hi = i,
                _ => intervals.push(Interval::point(i)),
            }
        }
        Segment { intervals }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of indices covered.
    pub fn len(&self) -> usize {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.intervals.first().map(|iv| iv.lo)
    }

    pub fn last(&self) -> Option<usize> {
        self.intervals.last().map(|iv| iv.hi)
    }

    /// The temporal extent `[first, last]` as an interval.
    pub fn extent(&self) -> Option<Interval> {
        Some(Interval {
            lo: self.first()?,
            hi: self.last()?,
        })
    }

    pub fn contains(&self, i: usize) -> bool {
        let pos = self.intervals.partition_point(|iv| iv.hi < i);
        self.intervals.get(pos).is_some_and(|iv| iv.lo <= i)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.intervals.iter().flat_map(|iv| iv.lo..=iv.hi)
    }

    pub fn is_subset_of(&self, other: &Segment) -> bool {
        self.intervals
            .iter()
            .all(|iv| other.intervals.iter().any(|o| o.lo <= iv.lo && iv.hi <= o.hi))
    }

    pub fn union(&self, other: &Segment) -> Segment {
        canonicalize(self.intervals.iter().chain(&other.intervals).copied().collect())
    }

    fn check(&self, traj: &Trajectory) -> Result<()> {
        let last = self
            .last()
            .ok_or_else(|| Error::invalid("segment is empty"))?;
        let first = self.first().unwrap_or(0);
        if first == 0 || !traj.contains_index(last) {
            return Err(Error::invalid(format!(
                "segment {self} out of range for a trajectory of {} points",
                traj.len()
            )));
        }
        Ok(())
    }

    /// Time between the first and the last point of the segment, holes included.
    pub fn duration(&self, traj: &Trajectory) -> Result<f64> {
        self.check(traj)?;
        Ok(traj.time_between(self.first().unwrap(), self.last().unwrap()))
    }

    /// Cumulative duration of the connected intervals; isolated points
    /// contribute nothing.
    pub fn presence(&self, traj: &Trajectory) -> Result<f64> {
        self.check(traj)?;
        Ok(self
            .intervals
            .iter()
            .map(|iv| traj.time_between(iv.lo, iv.hi))
            .sum())
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str("∪")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

impl FromIterator<Interval> for Segment {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        canonicalize(iter.into_iter().collect())
    }
}

/// Free-function form of [`Segment::duration`].
pub fn duration(seg: &Segment, traj: &Trajectory) -> Result<f64> {
    seg.duration(traj)
}

/// Free-function form of [`Segment::presence`].
pub fn presence(seg: &Segment, traj: &Trajectory) -> Result<f64> {
    seg.presence(traj)
}
