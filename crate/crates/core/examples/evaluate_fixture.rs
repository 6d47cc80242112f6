// Scores a segmentation of a noisy synthetic trajectory against its
// ground truth.

use seqscan::evaluation::{evaluate, Labeling, NoiseMode};
use seqscan::io::{generate_fixture, FixtureSpec};
use seqscan::{seqscan, Params};

fn main() {
    let spec = FixtureSpec {
        clusters: 5,
        noise_rate: 0.2,
        seed: 3,
        ..FixtureSpec::default()
    };
    let f = generate_fixture(&spec).unwrap();
    for eps in [8.0, 25.0, 80.0] {
        let seg = seqscan(&f.trajectory, &Params::new(eps, 4, 0.0).unwrap());
        let result = Labeling::from(&seg);
        for mode in [NoiseMode::Kept, NoiseMode::Absorbed] {
            let m = evaluate(&f.labels, &result, mode).unwrap();
            println!(
                "eps {eps:>4} {mode:<16} regions {} h-purity {:.3} F {:.3} diff {}",
                seg.regions.len(),
                m.h_purity,
                m.pairwise_f,
                m.diff
            );
        }
    }
}
