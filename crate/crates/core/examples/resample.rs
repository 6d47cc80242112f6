// Decimates a minute-sampled trajectory and shows how the segmentation
// changes.

use seqscan::evaluation::resample;
use seqscan::io::{generate_fixture, FixtureSpec};
use seqscan::{seqscan, Params};

fn main() {
    let f = generate_fixture(&FixtureSpec::default()).unwrap();
    for target in [60.0, 180.0, 600.0] {
        let traj = resample(&f.trajectory, target).unwrap();
        let seg = seqscan(&traj, &Params::new(25.0, 4, 0.0).unwrap());
        println!("every {:>3} s: {:>3} points, {} regions", target, traj.len(), seg.regions.len());
    }
}
