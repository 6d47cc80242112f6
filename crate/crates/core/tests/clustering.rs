use proptest::prelude::*;

use seqscan::density::batch_cluster;
use seqscan::{ClusterState, Position};

fn arb_points(max: usize) -> impl Strategy<Value = Vec<Position>> {
    prop::collection::vec((0.0f64..30.0, 0.0f64..30.0), 1..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| Position::new(x, y)).collect())
}

/// Cluster members by density reachability from each core point, the
/// definition applied literally.
fn reachability_clusters(pts: &[Position], eps: f64, min_pts: usize) -> Vec<Vec<usize>> {
    let n = pts.len();
    let near = |a: usize, b: usize| pts[a].distance_sq(&pts[b]) <= eps * eps;
    let core: Vec<bool> = (0..n).map(|a| (0..n).filter(|&b| near(a, b)).count() >= min_pts).collect();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for s in (0..n).filter(|&s| core[s]) {
        let mut reached = vec![false; n];
        reached[s] = true;
        let mut stack = vec![s];
        while let Some(a) = stack.pop() {
            if !core[a] {
                continue;
            }
            for b in 0..n {
                if !reached[b] && near(a, b) {
                    reached[b] = true;
                    stack.push(b);
                }
            }
        }
        let members: Vec<usize> = (0..n).filter(|&k| reached[k]).collect();
        if !clusters.contains(&members) {
            clusters.push(members);
        }
    }
    clusters
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn insertion_order_does_not_change_cores(pts in arb_points(120), eps in 1.0f64..5.0, min_pts in 1usize..6, seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..pts.len()).collect();
        let mut s = seed;
        for k in (1..order.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(k, (s >> 33) as usize % (k + 1));
        }
        let mut state = ClusterState::new(eps, min_pts).unwrap();
        for (t, &k) in order.iter().enumerate() {
            state.insert(k + 1, pts[k], t as f64).unwrap();
        }
        let batch = batch_cluster(&pts, eps, min_pts);
        for k in 0..pts.len() {
            prop_assert_eq!(state.is_core(k + 1).unwrap(), batch.core[k]);
        }
        for a in 0..pts.len() {
            for b in 0..pts.len() {
                if batch.core[a] && batch.core[b] {
                    let same_inc = state.cluster_of(a + 1).unwrap() == state.cluster_of(b + 1).unwrap();
                    prop_assert_eq!(same_inc, batch.labels[a] == batch.labels[b]);
                }
            }
        }
    }

    #[test]
    fn borders_lie_near_a_core_of_their_cluster(pts in arb_points(120), eps in 1.0f64..5.0, min_pts in 2usize..6) {
        let mut state = ClusterState::new(eps, min_pts).unwrap();
        for (k, p) in pts.iter().enumerate() {
            state.insert(k + 1, *p, k as f64).unwrap();
        }
        for (k, p) in pts.iter().enumerate() {
            let id = k + 1;
            let Some(c) = state.cluster_of(id).unwrap() else {
                // noise: no core point within eps
                let near_core = state.neighborhood(p, eps).into_iter().any(|q| state.is_core(q).unwrap());
                prop_assert!(!near_core);
                continue;
            };
            if !state.is_core(id).unwrap() {
                prop_assert!(state.reaches(id, c).unwrap());
            }
        }
    }

    #[test]
    fn neighborhoods_are_symmetric(pts in arb_points(80), eps in 0.5f64..5.0) {
        let mut state = ClusterState::new(eps, 3).unwrap();
        for (k, p) in pts.iter().enumerate() {
            state.insert(k + 1, *p, k as f64).unwrap();
        }
        for (a, p) in pts.iter().enumerate() {
            for b in state.neighborhood(p, eps) {
                prop_assert!(state.neighborhood(&pts[b - 1], eps).contains(&(a + 1)));
            }
        }
    }

    #[test]
    fn clusters_are_maximal_and_connected(pts in arb_points(60), eps in 1.0f64..6.0, min_pts in 2usize..5) {
        let mut state = ClusterState::new(eps, min_pts).unwrap();
        for (k, p) in pts.iter().enumerate() {
            state.insert(k + 1, *p, k as f64).unwrap();
        }
        // every reachability closure is one cluster up to border ambiguity:
        // its core points share a label and its members are all labeled
        for closure in reachability_clusters(&pts, eps, min_pts) {
            let core_labels: Vec<_> = closure
                .iter()
                .filter(|&&k| state.is_core(k + 1).unwrap())
                .map(|&k| state.cluster_of(k + 1).unwrap())
                .collect();
            prop_assert!(core_labels.windows(2).all(|w| w[0] == w[1]));
            for &k in &closure {
                prop_assert!(state.cluster_of(k + 1).unwrap().is_some());
            }
        }
    }
}
