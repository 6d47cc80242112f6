mod common;

use proptest::prelude::*;

use seqscan::analysis::{presence_sweep, spatially_separated};
use seqscan::{seqscan, ClusterState, Params, Segmentation, Trajectory};

use common::{random_case, segmentation_violations, separation_violations};

/// Non-member points in a region's extent or in the gap after it that
/// would join the region's cluster as core points if added to a clustering
/// of its members. Border points are skipped: one reachable from two
/// clusters keeps whichever label it got first.
fn maximality_violations(seg: &Segmentation, traj: &Trajectory) -> Vec<usize> {
    let mut bad = Vec::new();
    for r in &seg.regions {
        let gap_end = seg.region(r.id + 1).map_or(traj.len(), |next| next.first() - 1);
        for p in r.first()..=gap_end {
            if r.segment.contains(p) {
                continue;
            }
            let mut state = ClusterState::with_params(&seg.params);
            for i in r.segment.indices().chain([p]) {
                state.insert(i, traj.position(i), traj.timestamp(i)).unwrap();
            }
            let joined = state.is_core(p).unwrap()
                && state
                    .cluster_of(p)
                    .unwrap()
                    .is_some_and(|c| state.cluster_of(r.first()).unwrap() == Some(c));
            if joined {
                bad.push(p);
            }
        }
    }
    bad
}

#[test]
fn fixtures_satisfy_all_properties() {
    for seed in 0..300u64 {
        let (_, f, params) = random_case(20_000 + seed);
        let seg = seqscan(&f.trajectory, &params);
        assert!(separation_violations(&seg, &f.trajectory).is_empty(), "seed {seed}");
        assert_eq!(segmentation_violations(&seg, &f.trajectory), Vec::<String>::new(), "seed {seed}");
        assert!(maximality_violations(&seg, &f.trajectory).is_empty(), "seed {seed}");
    }
}

#[test]
fn scan_is_deterministic() {
    let (_, f, params) = random_case(3);
    assert_eq!(seqscan(&f.trajectory, &params), seqscan(&f.trajectory, &params));
}

/// Same MSR sequence at two thresholds gives the same region sequence.
#[test]
fn msrs_determine_regions() {
    for seed in 0..40u64 {
        let (spec, f, params) = random_case(30_000 + seed);
        let table = presence_sweep(&f.trajectory, params.eps(), params.min_pts(), spec.interval * 0.4).unwrap();
        let mut deltas: Vec<f64> = table.rows.iter().flat_map(|r| [r.lo, r.hi, (r.lo + r.hi) / 2.0]).collect();
        deltas.push(0.0);
        let runs: Vec<Segmentation> = deltas
            .iter()
            .map(|&d| seqscan(&f.trajectory, &params.with_presence(d).unwrap()))
            .collect();
        let msrs = |s: &Segmentation| s.regions.iter().map(|r| r.msr.clone()).collect::<Vec<_>>();
        let regions = |s: &Segmentation| s.regions.iter().map(|r| r.segment.clone()).collect::<Vec<_>>();
        for a in &runs {
            for b in &runs {
                if msrs(a) == msrs(b) {
                    assert_eq!(regions(a), regions(b), "seed {seed}");
                }
            }
        }
    }
}

/// The converse fails: a higher threshold delays the MSR while the region
/// it grows into stays the same.
#[test]
fn different_msrs_can_give_same_regions() {
    let traj = Trajectory::new((0..8).map(|k| (k as f64, (0.0, 0.0)))).unwrap();
    let low = seqscan(&traj, &Params::new(1.0, 3, 0.0).unwrap());
    let high = seqscan(&traj, &Params::new(1.0, 3, 5.0).unwrap());
    assert_eq!(low.regions.len(), 1);
    assert_eq!(high.regions.len(), 1);
    assert_ne!(low.regions[0].msr, high.regions[0].msr);
    assert_eq!(low.regions[0].segment, high.regions[0].segment);
}

/// Sites at 0, 10 and back at 0: the third region overlaps the first in
/// space, which is accepted.
#[test]
fn non_consecutive_regions_may_overlap() {
    let mut rows = Vec::new();
    let mut t = 0.0;
    for cx in [0.0, 10.0, 0.0] {
        for k in 0..6 {
            t += 1.0;
            rows.push((t, cx + (k % 2) as f64 * 0.1, (k / 2) as f64 * 0.1));
        }
    }
    let traj = Trajectory::from_txy(&rows).unwrap();
    let seg = seqscan(&traj, &Params::new(0.5, 3, 0.0).unwrap());
    assert_eq!(seg.regions.len(), 3);
    assert!(!spatially_separated(&seg, 3, 1, &traj).unwrap().separated);
    assert!(spatially_separated(&seg, 3, 2, &traj).unwrap().separated);
    assert!(segmentation_violations(&seg, &traj).is_empty());
}

/// The second region's late points drift back next to the first region;
/// its MSR stays separated, the full region need not be.
#[test]
fn weak_separation_is_accepted() {
    let mut rows = Vec::new();
    let mut t = 0.0;
    let mut add = |x: f64, y: f64| {
        t += 1.0;
        rows.push((t, x, y));
    };
    for k in 0..5 {
        add(0.0, k as f64 * 0.1);
    }
    // second region walks from x = 2 back towards the first
    for k in 0..12 {
        add(2.0 - k as f64 * 0.12, 0.0);
        add(2.0 - k as f64 * 0.12, 0.05);
    }
    let traj = Trajectory::from_txy(&rows).unwrap();
    let seg = seqscan(&traj, &Params::new(0.3, 3, 0.0).unwrap());
    assert!(seg.regions.len() >= 2);
    assert!(separation_violations(&seg, &traj).is_empty());
    assert!(segmentation_violations(&seg, &traj).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_walks_keep_invariants(
        steps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 1u32..5), 2..150),
        eps in 0.2f64..1.5,
        min_pts in 2usize..6,
        presence in 0.0f64..10.0,
    ) {
        let mut t = 0.0;
        let (mut x, mut y) = (0.0, 0.0);
        let rows: Vec<(f64, f64, f64)> = steps
            .iter()
            .map(|&(dx, dy, dt)| {
                t += dt as f64;
                x += dx;
                y += dy;
                (t, x, y)
            })
            .collect();
        let traj = Trajectory::from_txy(&rows).unwrap();
        let seg = seqscan(&traj, &Params::new(eps, min_pts, presence).unwrap());
        prop_assert_eq!(segmentation_violations(&seg, &traj), Vec::<String>::new());
        prop_assert!(separation_violations(&seg, &traj).is_empty());
    }
}
