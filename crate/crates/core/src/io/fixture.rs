//! Synthetic labeled trajectories.
//!
//! Sites lie on the x axis, `spacing` meters apart. A visit is a dwell of
//! points drawn uniformly from a disk of `radius` around the site, one
//! point every `interval` seconds. A fraction of each dwell's interior
//! points is moved off to the +y side, farther than `2 * radius + eps` from
//! the site and more than `eps` from each other, to form local noise.
//! Consecutive visits are joined by transition points on the -y side.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{Labeling, TruthClass};
use crate::params::Params;
use crate::trajectory::{Position, Trajectory};

/// The 13-point example: region A = {1,3,4,5,8} near the origin with local
/// noise {2,6,7}, transition point 9, region B = {10..13}. One point per
/// second; `eps` 0.5, `min_pts` 4, presence 0.
pub fn walkthrough() -> (Trajectory, Params) {
    let pos: [(f64, f64); 13] = [
        (0.0, 0.0),
        (10.0, 0.0),
        (0.3, 0.0),
        (0.0, 0.3),
        (0.3, 0.3),
        (0.0, 10.0),
        (-10.0, 0.0),
        (0.15, 0.15),
        (20.0, 20.0),
        (40.0, 0.0),
        (40.3, 0.0),
        (40.0, 0.3),
        (40.3, 0.3),
    ];
    let traj = Trajectory::new(pos.iter().enumerate().map(|(k, &p)| ((k + 1) as f64, p)))
        .expect("fixture timestamps increase");
    (traj, Params::new(0.5, 4, 0.0).expect("valid parameters"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    /// Number of distinct sites.
    pub clusters: usize,
    /// Points per visit, local noise included. A visit lasts
    /// `(points_per_cluster - 1) * interval` seconds.
    pub points_per_cluster: usize,
    /// Meters.
    pub radius: f64,
    /// Distance between neighboring sites, meters.
    pub spacing: f64,
    /// Seconds between consecutive points.
    pub interval: f64,
    /// Fraction of each visit's points turned into local noise, in [0, 1).
    pub noise_rate: f64,
    /// Points between consecutive visits.
    pub transition_points: usize,
    /// Clustering radius the fixture is meant for; sets the noise offsets.
    pub eps: f64,
    /// Site visited at each visit (0-based). Defaults to each site once in
    /// order.
    pub route: Option<Vec<usize>>,
    pub seed: u64,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec {
            clusters: 3,
            points_per_cluster: 40,
            radius: 20.0,
            spacing: 500.0,
            interval: 60.0,
            noise_rate: 0.1,
            transition_points: 5,
            eps: 25.0,
            route: None,
            seed: 7,
        }
    }
}

impl FixtureSpec {
    fn visits(&self) -> Vec<usize> {
        self.route.clone().unwrap_or_else(|| (0..self.clusters).collect())
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.clusters == 0 || self.points_per_cluster == 0 {
            return Err(Error::invalid("a fixture needs at least one site and one point per visit"));
        }
        if !(positive(self.radius) && positive(self.interval) && positive(self.eps)) {
            return Err(Error::invalid("radius, interval and eps must be positive"));
        }
        if !(0.0..1.0).contains(&self.noise_rate) {
            return Err(Error::invalid(format!("noise rate must lie in [0, 1), got {}", self.noise_rate)));
        }
        if !(self.spacing > 2.0 * self.radius + self.eps) {
            return Err(Error::invalid(format!(
                "spacing {} m lets truth clusters overlap (needs more than 2 * radius + eps = {} m)",
                self.spacing,
                2.0 * self.radius + self.eps
            )));
        }
        let visits = self.visits();
        if visits.is_empty() {
            return Err(Error::invalid("the route is empty"));
        }
        if let Some(&bad) = visits.iter().find(|&&s| s >= self.clusters) {
            return Err(Error::invalid(format!("route visits unknown site {bad}")));
        }
        for w in visits.windows(2) {
            if w[0] == w[1] {
                return Err(Error::invalid(format!("route visits site {} twice in a row", w[0])));
            }
            let gap = (w[0].abs_diff(w[1])) as f64 * self.spacing / (self.transition_points + 1) as f64;
            if self.transition_points > 0 && gap <= self.eps {
                return Err(Error::invalid("transition points would lie within eps of each other"));
            }
        }
        Ok(())
    }
}

/// A generated trajectory with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub trajectory: Trajectory,
    pub labels: Labeling,
    /// Site index of each visit, in visit order.
    pub visits: Vec<usize>,
}

fn site(spec: &FixtureSpec, s: usize) -> Position {
    Position::new(s as f64 * spec.spacing, 0.0)
}

/// Generates a fixture; identical specs give identical output.
pub fn generate_fixture(spec: &FixtureSpec) -> Result<Fixture> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let visits = spec.visits();
    let mut samples: Vec<(Position, TruthClass)> = Vec::new();
    let m = spec.points_per_cluster;
    let noise_count = ((spec.noise_rate * m as f64).round() as usize).min(m.saturating_sub(2));
    // transition detour below the axis, clear of every site disk
    let detour = 2.0 * spec.radius + spec.eps;

    for (v, &s) in visits.iter().enumerate() {
        let c = site(spec, s);
        let noisy: Vec<usize> = if noise_count > 0 {
            sample(&mut rng, m - 2, noise_count).into_iter().map(|k| k + 1).collect()
        } else {
            Vec::new()
        };
        let mut offset = 0usize;
        for k in 0..m {
            if noisy.contains(&k) {
                let x = c.x + rng.random_range(-spec.radius..=spec.radius);
                let y = 2.0 * spec.radius + spec.eps * (1.1 + 1.5 * offset as f64);
                offset += 1;
                samples.push((Position::new(x, y), TruthClass::LocalNoise(v + 1)));
            } else {
                let r = spec.radius * rng.random::<f64>().sqrt();
                let a = rng.random::<f64>() * std::f64::consts::TAU;
                samples.push((Position::new(c.x + r * a.cos(), c.y + r * a.sin()), TruthClass::Cluster(v + 1)));
            }
        }
        if let Some(&next) = visits.get(v + 1) {
            let d = site(spec, next);
            let steps = spec.transition_points + 1;
            for k in 1..=spec.transition_points {
                let f = k as f64 / steps as f64;
                let x = c.x + (d.x - c.x) * f;
                samples.push((Position::new(x, -detour - spec.eps), TruthClass::Transition));
            }
        }
    }

    let trajectory = Trajectory::new(
        samples
            .iter()
            .enumerate()
            .map(|(k, (p, _))| (k as f64 * spec.interval, *p)),
    )?;
    let labels = Labeling::new(samples.into_iter().map(|(_, c)| c).collect());
    Ok(Fixture {
        trajectory,
        labels,
        visits,
    })
}
