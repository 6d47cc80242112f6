use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::segmentation::Segmentation;
use crate::trajectory::Trajectory;

use super::Zone;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Symbol {
    Zone(usize),
    Transition,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Zone(z) => write!(f, "Z{z}"),
            Symbol::Transition => f.write_str("TRANSITION"),
        }
    }
}

/// A time span `[start, end]` (seconds) annotated with a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymbolicEntry {
    pub start: f64,
    pub end: f64,
    pub symbol: Symbol,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolicTrajectory {
    pub entries: Vec<SymbolicEntry>,
}

impl SymbolicTrajectory {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Zone symbols in path order, transitions skipped.
    pub fn zone_sequence(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter_map(|e| match e.symbol {
                Symbol::Zone(z) => Some(z),
                Symbol::Transition => None,
            })
            .collect()
    }

    /// `(start, end)` of the whole annotated span.
    pub fn span(&self) -> Option<(f64, f64)> {
        Some((self.entries.first()?.start, self.entries.last()?.end))
    }
}

/// Rewrites a segmentation as a sequence of zone visits and transitions.
/// Each stay region becomes its temporal extent labeled with its zone; each
/// non-empty transition becomes the extent of its points. Local noise is
/// dropped.
pub fn symbolic_trajectory(seg: &Segmentation, zones: &[Zone], traj: &Trajectory) -> Result<SymbolicTrajectory> {
    let zone_of = |rid: usize| -> Result<usize> {
        zones
            .iter()
            .find(|z| z.regions.contains(&rid))
            .map(|z| z.id)
            .ok_or_else(|| Error::invalid(format!("stay region {rid} is not covered by any zone")))
    };
    let transition_entry = |gap: usize| -> Option<SymbolicEntry> {
        let pts = seg.transition(gap);
        Some(SymbolicEntry {
            start: traj.timestamp(*pts.first()?),
            end: traj.timestamp(*pts.last()?),
            symbol: Symbol::Transition,
        })
    };

    let mut entries = Vec::new();
    entries.extend(transition_entry(0));
    for r in &seg.regions {
        entries.push(SymbolicEntry {
            start: traj.timestamp(r.first()),
            end: traj.timestamp(r.last()),
            symbol: Symbol::Zone(zone_of(r.id)?),
        });
        entries.extend(transition_entry(r.id));
    }
    Ok(SymbolicTrajectory { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{similarity_classes, zones};
    use crate::params::Params;
    use crate::segmentation::seqscan;

    /// Four visits alternating between two sites, two transition points
    /// between visits.
    fn alternating() -> (Trajectory, Segmentation) {
        let mut rows = Vec::new();
        let mut t = 0.0;
        for visit in 0..4 {
            let cx = if visit % 2 == 0 { 0.0 } else { 100.0 };
            for k in 0..6 {
                rows.push((t, cx + (k % 3) as f64 * 0.1, (k / 3) as f64 * 0.1));
                t += 1.0;
            }
            if visit < 3 {
                for k in 1..=2 {
                    rows.push((t, 33.0 * k as f64, 40.0));
                    t += 1.0;
                }
            }
        }
        let traj = Trajectory::from_txy(&rows).unwrap();
        let seg = seqscan(&traj, &Params::new(0.5, 4, 0.0).unwrap());
        (traj, seg)
    }

    #[test]
    fn alternating_visits_give_two_zones() {
        let (traj, seg) = alternating();
        assert_eq!(seg.regions.len(), 4);
        let classes = similarity_classes(&seg.regions, 0.0, &traj, &seg.params).unwrap();
        assert_eq!(classes, vec![vec![1, 3], vec![2, 4]]);
        let z = zones(&classes, &seg.regions, &traj).unwrap();
        let st = symbolic_trajectory(&seg, &z, &traj).unwrap();
        assert_eq!(st.zone_sequence(), vec![1, 2, 1, 2]);
        let syms: Vec<Symbol> = st.entries.iter().map(|e| e.symbol).collect();
        use Symbol::*;
        assert_eq!(syms, vec![Zone(1), Transition, Zone(2), Transition, Zone(1), Transition, Zone(2)]);
        for w in st.entries.windows(2) {
            assert!(w[0].end < w[1].start);
        }
    }

    #[test]
    fn single_region_single_entry() {
        let traj = Trajectory::new((0..8).map(|k| (k as f64, (0.0, 0.0)))).unwrap();
        let seg = seqscan(&traj, &Params::new(1.0, 3, 0.0).unwrap());
        let classes = similarity_classes(&seg.regions, 0.0, &traj, &seg.params).unwrap();
        let z = zones(&classes, &seg.regions, &traj).unwrap();
        let st = symbolic_trajectory(&seg, &z, &traj).unwrap();
        assert_eq!(st.entries.len(), 1);
        assert_eq!(st.entries[0], SymbolicEntry { start: 0.0, end: 7.0, symbol: Symbol::Zone(1) });
    }

    #[test]
    fn uncovered_region_is_an_error() {
        let (traj, seg) = alternating();
        let classes = vec![vec![1, 3], vec![2]];
        let z = zones(&classes, &seg.regions, &traj).unwrap();
        assert!(symbolic_trajectory(&seg, &z, &traj).is_err());
    }
}
