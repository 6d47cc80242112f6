//! Timestamped point sequences.
//!
//! Points are addressed by their 1-based ordinal index. Coordinates are
//! planar meters; timestamps are seconds on a monotone clock and must be
//! strictly increasing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A position on the projected plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    #[inline]
    pub fn distance_sq(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn distance(&self, other: &Position) -> f64 {
        self.distance_sq(other).sqrt()
    }
}

impl From<(f64, f64)> for Position {
    fn from((x, y): (f64, f64)) -> Self {
        Position { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    /// 1-based ordinal position in the trajectory.
    pub index: usize,
    pub position: Position,
    /// Seconds.
    pub timestamp: f64,
}

/// An ordered, validated sequence of timestamped points.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    /// Builds a trajectory from `(timestamp, position)` samples already in
    /// temporal order. Indices are assigned 1..=n.
    pub fn new<I, P>(samples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, P)>,
        P: Into<Position>,
    {
        let mut points = Vec::new();
        for (k, (t, p)) in samples.into_iter().enumerate() {
            let position = p.into();
            if !t.is_finite() || !position.x.is_finite() || !position.y.is_finite() {
                return Err(Error::invalid(format!("point {} has a non-finite value", k + 1)));
            }
            if let Some(prev) = points.last() {
                let prev: &TrajectoryPoint = prev;
                if t <= prev.timestamp {
                    return Err(Error::invalid(format!(
                        "timestamps must strictly increase: point {} has t={} after t={}",
                        k + 1,
                        t,
                        prev.timestamp
                    )));
                }
            }
            points.push(TrajectoryPoint {
                index: k + 1,
                position,
                timestamp: t,
            });
        }
        Ok(Trajectory { points })
    }

    /// Convenience constructor from `(t, x, y)` triples.
    pub fn from_txy(rows: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(rows.iter().map(|&(t, x, y)| (t, (x, y))))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TrajectoryPoint] {
        &self.points
    }

    /// The point with 1-based `index`, if any.
    pub fn get(&self, index: usize) -> Option<&TrajectoryPoint> {
        index.checked_sub(1).and_then(|k| self.points.get(k))
    }

    /// Panics if `index` is out of range.
    #[inline]
    pub fn point(&self, index: usize) -> &TrajectoryPoint {
        &self.points[index - 1]
    }

    #[inline]
    pub fn timestamp(&self, index: usize) -> f64 {
        self.points[index - 1].timestamp
    }

    #[inline]
    pub fn position(&self, index: usize) -> Position {
        self.points[index - 1].position
    }

    pub fn contains_index(&self, index: usize) -> bool {
        index >= 1 && index <= self.points.len()
    }

    /// Temporal distance `|t_j - t_i|`.
    pub fn time_between(&self, i: usize, j: usize) -> f64 {
        (self.timestamp(j) - self.timestamp(i)).abs()
    }

    /// Total time spanned by the trajectory; 0 for fewer than two points.
    pub fn duration(&self) -> f64 {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => b.timestamp - a.timestamp,
            _ => 0.0,
        }
    }

    /// Median gap between consecutive timestamps; `None` below two points.
    pub fn median_interval(&self) -> Option<f64> {
        if self.points.len() < 2 {
            return None;
        }
        let mut gaps: Vec<f64> = self
            .points
            .windows(2)
            .map(|w| w[1].timestamp - w[0].timestamp)
            .collect();
        gaps.sort_by(f64::total_cmp);
        let mid = gaps.len() / 2;
        Some(if gaps.len().is_multiple_of(2) {
            (gaps[mid - 1] + gaps[mid]) / 2.0
        } else {
            gaps[mid]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_are_one_based() {
        let t = Trajectory::from_txy(&[(0.0, 0.0, 0.0), (1.0, 1.0, 0.0), (3.0, 2.0, 0.0)]).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.point(1).index, 1);
        assert_eq!(t.point(3).index, 3);
        assert!(t.get(0).is_none());
        assert!(t.get(4).is_none());
        assert_eq!(t.time_between(3, 1), 3.0);
        assert_eq!(t.duration(), 3.0);
    }

    #[test]
    fn duplicate_timestamps_rejected() {
        let err = Trajectory::from_txy(&[(0.0, 0.0, 0.0), (0.0, 1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn decreasing_timestamps_rejected() {
        assert!(Trajectory::from_txy(&[(5.0, 0.0, 0.0), (4.0, 1.0, 0.0)]).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Trajectory::from_txy(&[(0.0, f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn median_interval() {
        let t = Trajectory::from_txy(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (3.0, 0.0, 0.0), (10.0, 0.0, 0.0)])
            .unwrap();
        assert_eq!(t.median_interval(), Some(2.0));
    }
}
