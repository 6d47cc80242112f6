//! Cluster-based segmentation of trajectories with noise.
//!
//! A trajectory is split into temporally ordered stay regions (dense
//! clusters in which the object is present for at least a given time),
//! transitions between them, and local noise (short absences inside a
//! stay). On top of the segmentation the crate offers a sweep over the
//! presence threshold, grouping of regions into zones, periodicity of zone
//! visits, and quality metrics against labeled ground truth.
//!
//! ```
//! use seqscan::{seqscan, Params, Trajectory};
//!
//! // two dwells of five points, 100 m apart, one point per minute
//! let traj = Trajectory::new((0..10).map(|k| {
//!     let x = if k < 5 { 0.0 } else { 100.0 };
//!     (60.0 * k as f64, (x + (k % 2) as f64, 0.0))
//! }))?;
//! let seg = seqscan(&traj, &Params::new(5.0, 3, 120.0)?);
//! assert_eq!(seg.regions.len(), 2);
//! assert_eq!(seg.regions[1].segment.to_string(), "[6,10]");
//! # Ok::<(), seqscan::Error>(())
//! ```

pub mod analysis;
pub mod cli;
pub mod density;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod params;
pub mod periodicity;
pub mod segment;
pub mod segmentation;
pub mod trajectory;

pub use density::{ClusterId, ClusterState, InsertEffect, InsertOutcome};
pub use error::{Error, Result};
pub use params::Params;
pub use segment::{canonicalize, duration, presence, Interval, Segment};
pub use segmentation::{classify, seqscan, PointClass, Segmentation, StayRegion};
pub use trajectory::{Position, Trajectory, TrajectoryPoint};
