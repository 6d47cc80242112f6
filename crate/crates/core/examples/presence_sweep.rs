// Tabulates how many stay regions survive as the presence threshold grows.
// Only rows where the count changes are printed.

use seqscan::analysis::presence_sweep;
use seqscan::io::{generate_fixture, FixtureSpec};

fn main() {
    let spec = FixtureSpec {
        clusters: 4,
        points_per_cluster: 30,
        ..FixtureSpec::default()
    };
    let f = generate_fixture(&spec).unwrap();
    let table = presence_sweep(&f.trajectory, spec.eps, 4, spec.interval / 4.0).unwrap();
    println!("{:>10} {:>10} {:>8}", "from_min", "to_min", "regions");
    let mut last = None;
    for row in &table.rows {
        if last == Some(row.regions) {
            continue;
        }
        last = Some(row.regions);
        println!("{:>10.2} {:>10.2} {:>8}", row.lo / 60.0, row.hi / 60.0, row.regions);
    }
    println!("at 20 min: {} regions", table.regions_at(1200.0));
}
