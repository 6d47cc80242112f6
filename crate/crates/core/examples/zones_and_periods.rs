// Groups revisits into zones, builds the symbolic trajectory and looks for
// a period in the sequence of visited zones.

use seqscan::analysis::{similarity_classes, symbolic_trajectory, zones};
use seqscan::io::{generate_fixture, FixtureSpec};
use seqscan::periodicity::{best_period, build_series, warp, SeriesMode};
use seqscan::{seqscan, Params};

fn main() {
    let spec = FixtureSpec {
        clusters: 3,
        points_per_cluster: 24,
        interval: 3600.0,
        noise_rate: 0.0,
        transition_points: 6,
        route: Some([0, 1, 2].repeat(4)),
        ..FixtureSpec::default()
    };
    let f = generate_fixture(&spec).unwrap();
    let params = Params::new(spec.eps, 4, 6.0 * 3600.0).unwrap();
    let seg = seqscan(&f.trajectory, &params);
    let classes = similarity_classes(&seg.regions, 0.0, &f.trajectory, &params).unwrap();
    let z = zones(&classes, &seg.regions, &f.trajectory).unwrap();
    for zone in &z {
        println!("zone {}: regions {:?}", zone.id, zone.regions);
    }
    let st = symbolic_trajectory(&seg, &z, &f.trajectory).unwrap();
    println!("visits: {:?}", st.zone_sequence());

    // one slot per visit plus the trip to the next site
    let slot = (spec.points_per_cluster + spec.transition_points) as f64 * spec.interval;
    let series = build_series(&st, slot, SeriesMode::Behavior).unwrap();
    let report = warp(&series).unwrap();
    for row in &report.rows {
        println!("p = {:>2}  confidence {:.3}", row.period, row.confidence);
    }
    if let Some(best) = best_period(&report, 0.8) {
        println!("best period: {} slots", best.period);
    }
}
