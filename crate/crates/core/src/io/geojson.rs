use std::io::Write;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::segmentation::Segmentation;
use crate::trajectory::{Position, Trajectory};

use super::convex_hull;

fn coords(p: &Position) -> Value {
    json!([p.x, p.y])
}

fn hull_geometry(hull: &[Position]) -> Value {
    match hull {
        [p] => json!({ "type": "Point", "coordinates": coords(p) }),
        [a, b] => json!({ "type": "LineString", "coordinates": [coords(a), coords(b)] }),
        _ => {
            let mut ring: Vec<Value> = hull.iter().map(coords).collect();
            ring.push(coords(&hull[0]));
            json!({ "type": "Polygon", "coordinates": [ring] })
        }
    }
}

/// A FeatureCollection with the convex hull of every stay region, in path
/// order. Hulls of fewer than three distinct points become a Point or a
/// LineString.
pub fn regions_geojson(seg: &Segmentation, traj: &Trajectory) -> Value {
    let features: Vec<Value> = seg
        .regions
        .iter()
        .map(|r| {
            let pts: Vec<Position> = r.segment.indices().map(|i| traj.position(i)).collect();
            json!({
                "type": "Feature",
                "geometry": hull_geometry(&convex_hull(&pts)),
                "properties": {
                    "region_id": r.id,
                    "points": r.len(),
                    "first": r.first(),
                    "last": r.last(),
                    "presence_s": r.presence,
                    "duration_s": r.duration,
                },
            })
        })
        .collect();
    json!({ "type": "FeatureCollection", "features": features })
}

pub fn write_geojson<W: Write>(out: W, seg: &Segmentation, traj: &Trajectory) -> Result<()> {
    serde_json::to_writer_pretty(out, &regions_geojson(seg, traj)).map_err(|e| Error::invalid(e.to_string()))
}
