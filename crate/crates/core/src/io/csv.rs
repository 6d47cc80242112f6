//! CSV input and output.
//!
//! Input files carry a header with at least `t,x,y`, optionally `id` and
//! `label`. Timestamps are epoch seconds or ISO-8601 date-times (read as UTC
//! when no offset is given). Coordinates are planar meters; no projection
//! is applied.

use std::io::{Read, Write};

use chrono::{DateTime, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::{Labeling, TruthClass};
use crate::segmentation::{PointClass, Segmentation};
use crate::trajectory::Trajectory;

/// Parses a timestamp in epoch seconds or ISO-8601.
pub fn parse_timestamp(field: &str) -> Option<f64> {
    let field = field.trim();
    if let Ok(t) = field.parse::<f64>() {
        return t.is_finite().then_some(t);
    }
    let from_parts = |secs: i64, nanos: u32| secs as f64 + f64::from(nanos) * 1e-9;
    if let Ok(dt) = DateTime::parse_from_rfc3339(field) {
        return Some(from_parts(dt.timestamp(), dt.timestamp_subsec_nanos()));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(field, fmt) {
            let dt = dt.and_utc();
            return Some(from_parts(dt.timestamp(), dt.timestamp_subsec_nanos()));
        }
    }
    None
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::parse(line, e.to_string())
}

struct Row {
    line: usize,
    t: f64,
    x: f64,
    y: f64,
    label: Option<TruthClass>,
}

/// Reads a trajectory, and its labels when a `label` column is present.
/// Rows are sorted by timestamp; equal timestamps are rejected.
pub fn parse_trajectory<R: Read>(input: R) -> Result<(Trajectory, Option<Labeling>)> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let column = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (Some(ct), Some(cx), Some(cy)) = (column("t"), column("x"), column("y")) else {
        return Err(Error::parse(1, "header must contain the columns t, x and y"));
    };
    let cl = column("label");

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |c: usize| record.get(c).unwrap_or("");
        let t = parse_timestamp(field(ct))
            .ok_or_else(|| Error::parse(line, format!("bad timestamp {:?}", field(ct))))?;
        let number = |c: usize, name: &str| -> Result<f64> {
            field(c)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(line, format!("bad {name} value {:?}", field(c))))
        };
        let (x, y) = (number(cx, "x")?, number(cy, "y")?);
        let label = match cl {
            Some(c) => Some(
                TruthClass::parse(field(c))
                    .ok_or_else(|| Error::parse(line, format!("unknown label {:?}", field(c))))?,
            ),
            None => None,
        };
        rows.push(Row { line, t, x, y, label });
    }

    rows.sort_by(|a, b| a.t.total_cmp(&b.t));
    for w in rows.windows(2) {
        if w[0].t == w[1].t {
            let (first, second) = (w[0].line.min(w[1].line), w[0].line.max(w[1].line));
            return Err(Error::parse(
                second,
                format!("duplicate timestamp {} (also on line {first})", w[1].t),
            ));
        }
    }
    let traj = Trajectory::new(rows.iter().map(|r| (r.t, (r.x, r.y))))?;
    let labels = cl.map(|_| Labeling::new(rows.iter().filter_map(|r| r.label).collect()));
    Ok((traj, labels))
}

#[derive(Serialize)]
struct InputRow {
    id: usize,
    t: f64,
    x: f64,
    y: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// Writes a trajectory in the input format, with labels when given.
pub fn write_trajectory<W: Write>(out: W, traj: &Trajectory, labels: Option<&Labeling>) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != traj.len() {
            return Err(Error::invalid("labeling and trajectory lengths differ"));
        }
    }
    let mut w = csv::Writer::from_writer(out);
    for p in traj.points() {
        w.serialize(InputRow {
            id: p.index,
            t: p.timestamp,
            x: p.position.x,
            y: p.position.y,
            label: labels.map(|l| l.classes[p.index - 1].to_string()),
        })
        .map_err(|e| Error::invalid(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::invalid(e.to_string()))
}

/// One row of the per-point output. `region` is the region id for members
/// and local noise, and the gap ordinal for transitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub index: usize,
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub class: char,
    pub region: usize,
}

impl PointRow {
    pub fn point_class(&self) -> Option<PointClass> {
        match self.class {
            'C' => Some(PointClass::Member(self.region)),
            'N' => Some(PointClass::LocalNoise(self.region)),
            'T' => Some(PointClass::Transition(self.region)),
            _ => None,
        }
    }
}

/// Per-point output: `index,t,x,y,class,region`.
pub fn write_points<W: Write>(out: W, seg: &Segmentation, traj: &Trajectory) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (p, class) in traj.points().iter().zip(&seg.classes) {
        let region = match *class {
            PointClass::Member(r) | PointClass::LocalNoise(r) | PointClass::Transition(r) => r,
        };
        w.serialize(PointRow {
            index: p.index,
            t: p.timestamp,
            x: p.position.x,
            y: p.position.y,
            class: class.code(),
            region,
        })
        .map_err(|e| Error::invalid(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::invalid(e.to_string()))
}

/// Reads the per-point output back.
pub fn read_points<R: Read>(input: R) -> Result<Vec<PointRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for record in reader.deserialize::<PointRow>() {
        let row = record.map_err(csv_error)?;
        if row.point_class().is_none() {
            return Err(Error::parse(row.index + 1, format!("unknown class {:?}", row.class)));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Serialize)]
struct RegionRow {
    id: usize,
    first: usize,
    last: usize,
    points: usize,
    presence: f64,
    duration: f64,
    msr_first: usize,
    msr_last: usize,
}

/// Region summary; presence and duration are divided by `unit` seconds.
pub fn write_regions<W: Write>(out: W, seg: &Segmentation, unit: f64) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in &seg.regions {
        let msr = r.msr.extent().expect("an MSR is never empty");
        w.serialize(RegionRow {
            id: r.id,
            first: r.first(),
            last: r.last(),
            points: r.len(),
            presence: r.presence / unit,
            duration: r.duration / unit,
            msr_first: msr.lo,
            msr_last: msr.hi,
        })
        .map_err(|e| Error::invalid(e.to_string()))?;
    }
    if seg.regions.is_empty() {
        w.write_record(["id", "first", "last", "points", "presence", "duration", "msr_first", "msr_last"])
            .map_err(|e| Error::invalid(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::invalid(e.to_string()))
}
