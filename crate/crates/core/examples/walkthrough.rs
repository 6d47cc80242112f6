// Segments the 13-point example and prints every point's class.

use seqscan::io::walkthrough;
use seqscan::seqscan;

fn main() {
    let (traj, params) = walkthrough();
    let seg = seqscan(&traj, &params);
    for r in &seg.regions {
        println!("region {}: {} (msr {})", r.id, r.segment, r.msr);
    }
    for i in 1..=traj.len() {
        let p = traj.position(i);
        println!("{i:>2} ({:>5.2}, {:>5.2}) {}", p.x, p.y, seg.class_of(i).unwrap());
    }
}
