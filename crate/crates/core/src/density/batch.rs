use std::collections::VecDeque;

use super::grid::Grid;
use crate::trajectory::Position;

/// Result of a from-scratch DBSCAN run over a fixed point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchClustering {
    /// Core flag per input point.
    pub core: Vec<bool>,
    /// Cluster label per input point; `None` for noise. Labels are dense,
    /// numbered in order of each cluster's first core point.
    pub labels: Vec<Option<usize>>,
    pub cluster_count: usize,
}

/// Plain DBSCAN over `points`. Border points take the label of the first
/// cluster that reaches them in input order.
pub fn batch_cluster(points: &[Position], eps: f64, min_pts: usize) -> BatchClustering {
    let n = points.len();
    let mut grid = Grid::new(eps);
    for (k, p) in points.iter().enumerate() {
        grid.insert(p, k as u32);
    }
    let eps_sq = eps * eps;
    let neighbors: Vec<Vec<u32>> = points
        .iter()
        .map(|p| {
            let mut v = Vec::new();
            grid.for_each_candidate(p, eps, |s| {
                if points[s as usize].distance_sq(p) <= eps_sq {
                    v.push(s);
                }
            });
            v.sort_unstable();
            v
        })
        .collect();
    let core: Vec<bool> = neighbors.iter().map(|v| v.len() >= min_pts).collect();

    let mut labels = vec![None; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if !core[start] || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(next);
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            for &q in &neighbors[p] {
                let q = q as usize;
                if labels[q].is_none() {
                    labels[q] = Some(next);
                    if core[q] {
                        queue.push_back(q);
                    }
                }
            }
        }
        next += 1;
    }
    BatchClustering {
        core,
        labels,
        cluster_count: next,
    }
}
