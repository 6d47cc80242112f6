//! External quality metrics against a labeled ground truth, and temporal
//! resampling.
//!
//! Clusters are matched by point overlap only. Metrics are computed over
//! clustered points; in [`NoiseMode::Absorbed`] local-noise points on both
//! sides are first moved into their enclosing cluster.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::segmentation::{PointClass, Segmentation};
use crate::trajectory::Trajectory;

/// Ground-truth class of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TruthClass {
    Cluster(usize),
    LocalNoise(usize),
    Transition,
}

impl TruthClass {
    /// Parses `C<k>`, `N<k>` or `T`.
    pub fn parse(token: &str) -> Option<Self> {
        let token = token.trim();
        if token == "T" {
            return Some(TruthClass::Transition);
        }
        let (head, num) = token.split_at_checked(1)?;
        let k: usize = num.parse().ok()?;
        match head {
            "C" => Some(TruthClass::Cluster(k)),
            "N" => Some(TruthClass::LocalNoise(k)),
            _ => None,
        }
    }
}

impl fmt::Display for TruthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthClass::Cluster(k) => write!(f, "C{k}"),
            TruthClass::LocalNoise(k) => write!(f, "N{k}"),
            TruthClass::Transition => f.write_str("T"),
        }
    }
}

impl From<PointClass> for TruthClass {
    fn from(c: PointClass) -> Self {
        match c {
            PointClass::Member(r) => TruthClass::Cluster(r),
            PointClass::LocalNoise(r) => TruthClass::LocalNoise(r),
            PointClass::Transition(_) => TruthClass::Transition,
        }
    }
}

/// Per-point classes; `classes[k]` belongs to point `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Labeling {
    pub classes: Vec<TruthClass>,
}

impl Labeling {
    pub fn new(classes: Vec<TruthClass>) -> Self {
        Labeling { classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Number of distinct clusters.
    pub fn cluster_count(&self) -> usize {
        self.classes
            .iter()
            .filter_map(|c| match c {
                TruthClass::Cluster(k) => Some(*k),
                _ => None,
            })
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Labels of the given 1-based indices, in order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Labeling> {
        indices
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .and_then(|k| self.classes.get(k))
                    .copied()
                    .ok_or_else(|| Error::invalid(format!("index {i} outside the labeling")))
            })
            .collect::<Result<_>>()
            .map(Labeling::new)
    }

    fn assignment(&self, mode: NoiseMode) -> Vec<Option<usize>> {
        self.classes
            .iter()
            .map(|c| match (c, mode) {
                (TruthClass::Cluster(k), _) => Some(*k),
                (TruthClass::LocalNoise(k), NoiseMode::Absorbed) => Some(*k),
                _ => None,
            })
            .collect()
    }
}

impl From<&Segmentation> for Labeling {
    fn from(seg: &Segmentation) -> Self {
        Labeling::new(seg.classes.iter().map(|&c| c.into()).collect())
    }
}

/// Treatment of local-noise points before counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NoiseMode {
    /// Local noise stays unclustered.
    Kept,
    /// Local noise joins its enclosing cluster.
    Absorbed,
}

impl fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseMode::Kept => "with-local-noise",
            NoiseMode::Absorbed => "no-local-noise",
        })
    }
}

/// Pair counts over points clustered on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PairCounts {
    /// Same cluster in truth and result.
    pub tp: u64,
    /// Same cluster in the result only.
    pub fp: u64,
    /// Same cluster in the truth only.
    pub fn_: u64,
}

impl PairCounts {
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// `2TP / (2TP + FP + FN)`, the harmonic mean of precision and recall.
    pub fn f_measure(&self) -> f64 {
        ratio(2 * self.tp, 2 * self.tp + self.fp + self.fn_)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn harmonic(a: f64, b: f64) -> f64 {
    if a + b == 0.0 {
        0.0
    } else {
        2.0 * a * b / (a + b)
    }
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

fn check_lengths(truth: &Labeling, result: &Labeling) -> Result<()> {
    if truth.len() != result.len() {
        return Err(Error::invalid(format!(
            "truth labels {} points, result {}",
            truth.len(),
            result.len()
        )));
    }
    Ok(())
}

fn require_clustered(a: &[Option<usize>], side: &str) -> Result<()> {
    if a.iter().all(Option::is_none) {
        return Err(Error::UndefinedMetric(format!("the {side} has no clustered point")));
    }
    Ok(())
}

/// Pair counts between two labelings.
pub fn pair_counts(truth: &Labeling, result: &Labeling, mode: NoiseMode) -> Result<PairCounts> {
    check_lengths(truth, result)?;
    let (r, s) = (truth.assignment(mode), result.assignment(mode));
    require_clustered(&r, "truth")?;
    require_clustered(&s, "result")?;
    let mut cell: HashMap<(usize, usize), u64> = HashMap::new();
    let mut row: HashMap<usize, u64> = HashMap::new();
    let mut col: HashMap<usize, u64> = HashMap::new();
    for (a, b) in r.iter().zip(&s) {
        if let (Some(a), Some(b)) = (a, b) {
            *cell.entry((*a, *b)).or_default() += 1;
            *row.entry(*a).or_default() += 1;
            *col.entry(*b).or_default() += 1;
        }
    }
    let tp: u64 = cell.values().map(|&n| choose2(n)).sum();
    let same_truth: u64 = row.values().map(|&n| choose2(n)).sum();
    let same_result: u64 = col.values().map(|&n| choose2(n)).sum();
    Ok(PairCounts {
        tp,
        fp: same_result - tp,
        fn_: same_truth - tp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Purity {
    pub purity: f64,
    pub inv_purity: f64,
    pub h_purity: f64,
}

fn purity_one_way(from: &[Option<usize>], to: &[Option<usize>]) -> f64 {
    let total = from.iter().flatten().count();
    let mut overlap: HashMap<usize, HashMap<usize, usize>> = HashMap::new();
    for (a, b) in from.iter().zip(to) {
        if let (Some(a), Some(b)) = (a, b) {
            *overlap.entry(*a).or_default().entry(*b).or_default() += 1;
        }
    }
    let best: usize = overlap.values().map(|m| m.values().copied().max().unwrap_or(0)).sum();
    best as f64 / total as f64
}

/// Purity of the result against the truth, inverse purity, and their
/// harmonic mean.
pub fn h_purity_with(truth: &Labeling, result: &Labeling, mode: NoiseMode) -> Result<Purity> {
    check_lengths(truth, result)?;
    let (r, s) = (truth.assignment(mode), result.assignment(mode));
    require_clustered(&r, "truth")?;
    require_clustered(&s, "result")?;
    let purity = purity_one_way(&s, &r);
    let inv_purity = purity_one_way(&r, &s);
    Ok(Purity {
        purity,
        inv_purity,
        h_purity: harmonic(purity, inv_purity),
    })
}

/// [`h_purity_with`] with local noise kept unclustered.
pub fn h_purity(truth: &Labeling, result: &Segmentation) -> Result<Purity> {
    h_purity_with(truth, &result.into(), NoiseMode::Kept)
}

/// Pairwise precision, recall and F-measure of a segmentation.
pub fn pairwise_f(truth: &Labeling, result: &Segmentation, mode: NoiseMode) -> Result<PairCounts> {
    pair_counts(truth, &result.into(), mode)
}

/// Absolute difference of cluster counts.
pub fn diff(truth: &Labeling, result: &Segmentation) -> usize {
    truth.cluster_count().abs_diff(result.regions.len())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub mode: NoiseMode,
    pub purity: f64,
    pub inv_purity: f64,
    pub h_purity: f64,
    pub pairwise_precision: f64,
    pub pairwise_recall: f64,
    pub pairwise_f: f64,
    pub diff: usize,
}

/// All metrics between two labelings under one noise mode.
pub fn evaluate(truth: &Labeling, result: &Labeling, mode: NoiseMode) -> Result<MetricReport> {
    let p = h_purity_with(truth, result, mode)?;
    let pairs = pair_counts(truth, result, mode)?;
    Ok(MetricReport {
        mode,
        purity: p.purity,
        inv_purity: p.inv_purity,
        h_purity: p.h_purity,
        pairwise_precision: pairs.precision(),
        pairwise_recall: pairs.recall(),
        pairwise_f: pairs.f_measure(),
        diff: truth.cluster_count().abs_diff(result.cluster_count()),
    })
}

/// Indices (1-based, ascending) kept by [`resample`].
///
/// For every grid instant `t_1 + k * target` up to the last timestamp the
/// nearest point not yet kept is selected, the earlier one on ties.
pub fn resample_indices(traj: &Trajectory, target: f64) -> Result<Vec<usize>> {
    if !(target.is_finite() && target > 0.0) {
        return Err(Error::invalid(format!("target interval must be positive, got {target}")));
    }
    if let Some(median) = traj.median_interval() {
        if target < median {
            return Err(Error::invalid(format!(
                "target interval {target} s is below the native median interval {median} s"
            )));
        }
    }
    let times: Vec<f64> = traj.points().iter().map(|p| p.timestamp).collect();
    let n = times.len();
    if n == 0 {
        return Err(Error::invalid("cannot resample an empty trajectory"));
    }
    let (t0, t_end) = (times[0], times[n - 1]);
    let mut kept = vec![false; n];
    let mut k = 0usize;
    loop {
        let g = t0 + k as f64 * target;
        if g > t_end {
            break;
        }
        k += 1;
        let split = times.partition_point(|&t| t < g);
        let left = (0..split).rev().find(|&j| !kept[j]);
        let right = (split..n).find(|&j| !kept[j]);
        let pick = match (left, right) {
            (Some(l), Some(r)) => Some(if g - times[l] <= times[r] - g { l } else { r }),
            (l, r) => l.or(r),
        };
        match pick {
            Some(j) => kept[j] = true,
            None => break,
        }
    }
    let indices: Vec<usize> = (0..n).filter(|&j| kept[j]).map(|j| j + 1).collect();
    if indices.len() < 2 {
        return Err(Error::invalid(format!(
            "only {} point(s) survive resampling at {target} s",
            indices.len()
        )));
    }
    Ok(indices)
}

/// Decimates a trajectory onto a regular grid of `target` seconds; the kept
/// points are renumbered `1..=m`.
pub fn resample(traj: &Trajectory, target: f64) -> Result<Trajectory> {
    let indices = resample_indices(traj, target)?;
    Trajectory::new(indices.iter().map(|&i| (traj.timestamp(i), traj.position(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use TruthClass::*;

    fn lab(codes: &str) -> Labeling {
        Labeling::new(codes.split_whitespace().map(|t| TruthClass::parse(t).unwrap()).collect())
    }

    /// Pair counts by enumerating every unordered pair.
    fn brute_pairs(truth: &Labeling, result: &Labeling, mode: NoiseMode) -> PairCounts {
        let (r, s) = (truth.assignment(mode), result.assignment(mode));
        let mut c = PairCounts::default();
        for i in 0..r.len() {
            for j in (i + 1)..r.len() {
                let (Some(ri), Some(rj), Some(si), Some(sj)) = (r[i], r[j], s[i], s[j]) else {
                    continue;
                };
                match (ri == rj, si == sj) {
                    (true, true) => c.tp += 1,
                    (false, true) => c.fp += 1,
                    (true, false) => c.fn_ += 1,
                    (false, false) => {}
                }
            }
        }
        c
    }

    #[test]
    fn parse_tokens() {
        assert_eq!(TruthClass::parse("C12"), Some(Cluster(12)));
        assert_eq!(TruthClass::parse("N1"), Some(LocalNoise(1)));
        assert_eq!(TruthClass::parse("T"), Some(Transition));
        for bad in ["", "X1", "C", "Cx", "T1", "é"] {
            assert_eq!(TruthClass::parse(bad), None, "{bad}");
        }
    }

    #[test]
    fn identical_labelings_score_one() {
        let a = lab("C1 C1 N1 C1 T C2 C2 C2");
        let r = evaluate(&a, &a, NoiseMode::Kept).unwrap();
        assert_eq!((r.purity, r.inv_purity, r.h_purity), (1.0, 1.0, 1.0));
        assert_eq!(r.pairwise_f, 1.0);
        assert_eq!(r.diff, 0);
    }

    #[test]
    fn one_swapped_point() {
        // truth: 5 + 5; result: point 5 moved to the second cluster
        let truth = lab("C1 C1 C1 C1 C1 C2 C2 C2 C2 C2");
        let result = lab("C1 C1 C1 C1 C2 C2 C2 C2 C2 C2");
        let p = h_purity_with(&truth, &result, NoiseMode::Kept).unwrap();
        // result clusters {1..4} -> 4, {5..10} -> 5
        assert_eq!(p.purity, 9.0 / 10.0);
        // truth clusters {1..5} -> 4, {6..10} -> 5
        assert_eq!(p.inv_purity, 9.0 / 10.0);
        assert_eq!(p.h_purity, 0.9);
        let c = pair_counts(&truth, &result, NoiseMode::Kept).unwrap();
        // tp = C(4,2) + C(5,2) = 16; same in result = 6 + 15 = 21; same in truth = 20
        assert_eq!(c, PairCounts { tp: 16, fp: 5, fn_: 4 });
        assert_eq!(c.f_measure(), 32.0 / 41.0);
    }

    #[test]
    fn noise_mode_absorbs_local_noise() {
        let truth = lab("C1 N1 C1 C1 T C2 C2");
        let result = lab("C1 C1 N1 C1 T C2 C2");
        let kept = pair_counts(&truth, &result, NoiseMode::Kept).unwrap();
        assert_eq!(kept, PairCounts { tp: 2, fp: 0, fn_: 0 });
        let absorbed = pair_counts(&truth, &result, NoiseMode::Absorbed).unwrap();
        assert_eq!(absorbed, PairCounts { tp: 7, fp: 0, fn_: 0 });
    }

    #[test]
    fn unclustered_side_is_undefined() {
        let truth = lab("C1 C1 T");
        let result = lab("T T T");
        assert!(matches!(pair_counts(&truth, &result, NoiseMode::Kept), Err(Error::UndefinedMetric(_))));
        assert!(matches!(h_purity_with(&result, &truth, NoiseMode::Kept), Err(Error::UndefinedMetric(_))));
        assert!(pair_counts(&truth, &lab("C1"), NoiseMode::Kept).is_err());
    }

    #[test]
    fn diff_counts_clusters() {
        assert_eq!(lab("C1 C3 C3 N3 T C7").cluster_count(), 3);
    }

    #[test]
    fn restrict_picks_labels() {
        let a = lab("C1 N1 T C2");
        assert_eq!(a.restrict(&[1, 4]).unwrap(), lab("C1 C2"));
        assert!(a.restrict(&[5]).is_err());
    }

    fn regular(n: usize, step: f64) -> Trajectory {
        Trajectory::new((0..n).map(|k| (k as f64 * step, (k as f64, 0.0)))).unwrap()
    }

    #[test]
    fn resample_identity_and_halving() {
        let t = regular(10, 2.0);
        assert_eq!(resample_indices(&t, 2.0).unwrap(), (1..=10).collect::<Vec<_>>());
        assert_eq!(resample_indices(&t, 4.0).unwrap(), vec![1, 3, 5, 7, 9]);
        let r = resample(&t, 4.0).unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(r.timestamp(2), 4.0);
    }

    #[test]
    fn resample_rejects_fine_targets_and_tiny_output() {
        let t = regular(10, 2.0);
        assert!(resample(&t, 1.0).is_err());
        assert!(resample(&t, 100.0).is_err());
    }

    /// Nearest not-yet-kept point by linear scan, grid instant by instant.
    fn nearest_oracle(times: &[f64], target: f64) -> Vec<usize> {
        let mut kept = vec![false; times.len()];
        let mut g = times[0];
        let mut k = 0;
        while g <= times[times.len() - 1] {
            let mut best: Option<usize> = None;
            for j in 0..times.len() {
                if kept[j] {
                    continue;
                }
                if best.is_none_or(|b| (times[j] - g).abs() < (times[b] - g).abs()) {
                    best = Some(j);
                }
            }
            match best {
                Some(b) => kept[b] = true,
                None => break,
            }
            k += 1;
            g = times[0] + k as f64 * target;
        }
        (0..times.len()).filter(|&j| kept[j]).map(|j| j + 1).collect()
    }

    proptest! {
        #[test]
        fn pair_counts_match_enumeration(
            pairs in prop::collection::vec((0u8..5, 0u8..5), 2..20),
        ) {
            let decode = |c: u8| match c {
                0 => Transition,
                1 => LocalNoise(1),
                k => Cluster(k as usize),
            };
            let truth = Labeling::new(pairs.iter().map(|p| decode(p.0)).collect());
            let result = Labeling::new(pairs.iter().map(|p| decode(p.1)).collect());
            for mode in [NoiseMode::Kept, NoiseMode::Absorbed] {
                match pair_counts(&truth, &result, mode) {
                    Ok(c) => prop_assert_eq!(c, brute_pairs(&truth, &result, mode)),
                    Err(e) => prop_assert!(matches!(e, Error::UndefinedMetric(_))),
                }
            }
        }

        #[test]
        fn swapping_sides_swaps_components(
            pairs in prop::collection::vec((1u8..4, 1u8..4), 2..20),
        ) {
            let truth = Labeling::new(pairs.iter().map(|p| Cluster(p.0 as usize)).collect());
            let result = Labeling::new(pairs.iter().map(|p| Cluster(p.1 as usize)).collect());
            let a = evaluate(&truth, &result, NoiseMode::Kept).unwrap();
            let b = evaluate(&result, &truth, NoiseMode::Kept).unwrap();
            prop_assert_eq!(a.purity, b.inv_purity);
            prop_assert_eq!(a.pairwise_precision, b.pairwise_recall);
            prop_assert_eq!(a.pairwise_f, b.pairwise_f);
            for v in [a.purity, a.inv_purity, a.h_purity, a.pairwise_precision, a.pairwise_recall, a.pairwise_f] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn resample_matches_linear_scan(gaps in prop::collection::vec(1u32..20, 3..40), factor in 1.0f64..4.0) {
            let mut t = 0.0;
            let mut times = vec![0.0];
            for g in &gaps {
                t += *g as f64;
                times.push(t);
            }
            let traj = Trajectory::new(times.iter().map(|&t| (t, (0.0, 0.0)))).unwrap();
            let target = traj.median_interval().unwrap() * factor;
            match resample_indices(&traj, target) {
                Ok(kept) => prop_assert_eq!(kept, nearest_oracle(&times, target)),
                Err(_) => prop_assert!(nearest_oracle(&times, target).len() < 2),
            }
        }
    }
}
