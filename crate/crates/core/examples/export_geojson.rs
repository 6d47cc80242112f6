// Writes the region hulls and the per-point classes of a synthetic
// trajectory to stdout.

use seqscan::io::{generate_fixture, write_geojson, write_points, FixtureSpec};
use seqscan::{seqscan, Params};

fn main() {
    let f = generate_fixture(&FixtureSpec::default()).unwrap();
    let seg = seqscan(&f.trajectory, &Params::new(25.0, 4, 600.0).unwrap());
    let mut geo = Vec::new();
    write_geojson(&mut geo, &seg, &f.trajectory).unwrap();
    let mut points = Vec::new();
    write_points(&mut points, &seg, &f.trajectory).unwrap();
    println!("{}", String::from_utf8(geo).unwrap());
    print!("{}", String::from_utf8(points).unwrap());
}
