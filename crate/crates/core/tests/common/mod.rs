#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqscan::analysis::msr_separated;
use seqscan::io::{generate_fixture, Fixture, FixtureSpec};
use seqscan::{classify, Params, PointClass, Segmentation, Trajectory};

/// A random fixture with 2 to 6 sites and noise rate in [0, 0.3], plus
/// parameters matched to it.
pub fn random_case(seed: u64) -> (FixtureSpec, Fixture, Params) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clusters = rng.random_range(2..=6);
    let radius = rng.random_range(5.0..30.0);
    let eps = radius * rng.random_range(0.4..1.2);
    let spacing = (2.0 * radius + eps) * rng.random_range(1.5..4.0);
    let transition_points = rng.random_range(1..=5usize).min(((spacing / eps) as usize).saturating_sub(2).max(1));
    let route = if rng.random_bool(0.3) {
        let mut r = vec![rng.random_range(0..clusters)];
        for _ in 0..rng.random_range(clusters..=clusters + 3) {
            let mut s = rng.random_range(0..clusters);
            while s == *r.last().unwrap() {
                s = rng.random_range(0..clusters);
            }
            r.push(s);
        }
        Some(r)
    } else {
        None
    };
    let spec = FixtureSpec {
        clusters,
        points_per_cluster: rng.random_range(8..40),
        radius,
        spacing,
        interval: rng.random_range(10..120) as f64,
        noise_rate: rng.random_range(0.0..0.3),
        transition_points,
        eps,
        route,
        seed,
    };
    let fixture = generate_fixture(&spec).expect("valid random spec");
    let presence = rng.random_range(0.0..(spec.points_per_cluster as f64 * spec.interval * 0.6));
    let params = Params::new(eps, rng.random_range(3..=6), presence).unwrap();
    (spec, fixture, params)
}

/// Points of an MSR's extent (members and unclustered points) lying within
/// eps of a core point of the preceding region.
pub fn separation_violations(seg: &Segmentation, traj: &Trajectory) -> Vec<(usize, usize)> {
    (2..=seg.regions.len())
        .filter_map(|id| {
            let r = msr_separated(seg, id, id - 1, traj).unwrap();
            r.witness.map(|w| (id, w))
        })
        .collect()
}

/// Temporal separation, coverage and region bookkeeping; returns the list
/// of broken invariants.
pub fn segmentation_violations(seg: &Segmentation, traj: &Trajectory) -> Vec<String> {
    let mut bad = Vec::new();
    if seg.classes.len() != traj.len() {
        bad.push(format!("{} classes for {} points", seg.classes.len(), traj.len()));
    }
    for (k, r) in seg.regions.iter().enumerate() {
        if r.id != k + 1 {
            bad.push(format!("region {} at position {}", r.id, k + 1));
        }
        if !r.msr.is_subset_of(&r.segment) {
            bad.push(format!("MSR of region {} not inside it", r.id));
        }
        let p = r.segment.presence(traj).unwrap();
        if p != r.presence || p < seg.params.presence() {
            bad.push(format!("region {} presence {} (stored {})", r.id, p, r.presence));
        }
        if r.msr.presence(traj).unwrap() < seg.params.presence() {
            bad.push(format!("MSR of region {} below the threshold", r.id));
        }
    }
    for w in seg.regions.windows(2) {
        if w[0].last() >= w[1].msr.first().unwrap() || w[0].last() >= w[1].first() {
            bad.push(format!("regions {} and {} overlap in time", w[0].id, w[1].id));
        }
    }
    match classify(traj, &seg.regions) {
        Ok(c) if c == seg.classes => {}
        Ok(_) => bad.push("classes disagree with the region extents".into()),
        Err(e) => bad.push(e.to_string()),
    }
    for (k, c) in seg.classes.iter().enumerate() {
        let i = k + 1;
        match *c {
            PointClass::Member(r) => {
                if !seg.region(r).is_some_and(|s| s.segment.contains(i)) {
                    bad.push(format!("point {i} labeled member of {r}"));
                }
            }
            PointClass::LocalNoise(r) => match seg.region(r) {
                Some(s) if s.first() < i && i < s.last() && !s.segment.contains(i) => {}
                _ => bad.push(format!("point {i} labeled local noise of {r}")),
            },
            PointClass::Transition(g) => {
                let after_prev = g == 0 || seg.region(g).is_some_and(|s| s.last() < i);
                let before_next = seg.region(g + 1).is_none_or(|s| i < s.first());
                if !(after_prev && before_next) || g > seg.regions.len() {
                    bad.push(format!("point {i} labeled transition {g}"));
                }
            }
        }
    }
    bad
}
