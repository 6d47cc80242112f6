//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error (bad flags or values, unreadable
//! files), 2 malformed input data, 3 a computation that cannot proceed on
//! valid input (e.g. an undefined metric).

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    default_theta, presence_sweep, similarity_classes, similarity_matrix, symbolic_trajectory, zones,
    SymbolicTrajectory,
};
use crate::error::Error;
use crate::evaluation::{evaluate, resample_indices, Labeling, NoiseMode, TruthClass};
use crate::io::{self as fio, FixtureSpec};
use crate::params::Params;
use crate::periodicity::{best_period, build_series, warp, SeriesMode};
use crate::segmentation::{seqscan, Segmentation};
use crate::trajectory::Trajectory;

/// Time unit accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Seconds,
    Minutes,
    Hours,
    Days,
    Weeks,
}

impl Unit {
    pub fn seconds(self) -> f64 {
        match self {
            Unit::Seconds => 1.0,
            Unit::Minutes => 60.0,
            Unit::Hours => 3600.0,
            Unit::Days => 86_400.0,
            Unit::Weeks => 604_800.0,
        }
    }
}

impl FromStr for Unit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "" | "s" => Ok(Unit::Seconds),
            "min" => Ok(Unit::Minutes),
            "h" => Ok(Unit::Hours),
            "d" => Ok(Unit::Days),
            "w" => Ok(Unit::Weeks),
            other => Err(format!("unknown time unit {other:?} (expected s, min, h, d or w)")),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Seconds => "s",
            Unit::Minutes => "min",
            Unit::Hours => "h",
            Unit::Days => "d",
            Unit::Weeks => "w",
        })
    }
}

/// A non-negative time span such as `20d`, `90min` or `3600` (seconds).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    pub value: f64,
    pub unit: Unit,
}

impl Span {
    pub fn seconds(&self) -> f64 {
        self.value * self.unit.seconds()
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let split = s
            .find(|c: char| c.is_ascii_alphabetic())
            .unwrap_or(s.len());
        let (num, unit) = s.split_at(split);
        let value: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad time value {s:?}"))?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(format!("time value must be non-negative, got {s:?}"));
        }
        Ok(Span {
            value,
            unit: unit.parse()?,
        })
    }
}

#[derive(Parser, Debug)]
#[command(name = "seqscan", version, about = "Segment trajectories into stay regions, transitions and local noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Density {
    /// Input CSV (`t,x,y` columns, optional `id,label`), or `-` for stdin.
    input: PathBuf,
    /// Neighborhood radius in meters.
    #[arg(long)]
    eps: f64,
    /// Minimum neighborhood size, the point itself included.
    #[arg(long)]
    min_pts: usize,
}

#[derive(Args, Debug, Clone)]
struct Segmenting {
    #[command(flatten)]
    density: Density,
    /// Minimum presence, e.g. `20d`; results are reported in this unit.
    #[arg(long, default_value = "0s")]
    presence: Span,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Segment a trajectory; prints the region summary.
    Segment {
        #[command(flatten)]
        seg: Segmenting,
        /// Also write points.csv, regions.csv and regions.geojson here.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Tabulate the number of stay regions against the presence threshold.
    Sweep {
        #[command(flatten)]
        density: Density,
        /// Step past each discontinuity; defaults to duration / 1000.
        #[arg(long)]
        theta: Option<Span>,
        /// Unit of the reported thresholds.
        #[arg(long, default_value = "s")]
        unit: Unit,
    },
    /// Group stay regions into zones and print the symbolic trajectory.
    Zones {
        #[command(flatten)]
        seg: Segmenting,
        /// Similarity threshold in [0, 1]; 0 relates regions with any
        /// reachable core point.
        #[arg(long, default_value_t = 0.0)]
        psi: f64,
        /// Write similarity.csv, zones.csv and symbolic.csv here instead
        /// of stdout.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Score candidate periods of the zone-visit series.
    Period {
        #[command(flatten)]
        seg: Segmenting,
        #[arg(long, default_value_t = 0.0)]
        psi: f64,
        /// Slot length, e.g. `1w`.
        #[arg(long)]
        resolution: Span,
        /// Analyse a single zone instead of the whole behavior.
        #[arg(long)]
        zone: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        min_confidence: f64,
    },
    /// Compare a segmentation with the labels of the input file.
    Eval {
        #[command(flatten)]
        seg: Segmenting,
        /// Per-point CSV from `segment --output-dir` to evaluate instead of
        /// segmenting the input.
        #[arg(long)]
        result: Option<PathBuf>,
    },
    /// Decimate a trajectory to a coarser sampling interval.
    Resample {
        /// Input CSV, or `-` for stdin.
        input: PathBuf,
        /// Target interval, e.g. `4h`.
        #[arg(long)]
        interval: Span,
    },
    /// Generate a labeled synthetic trajectory.
    Synth {
        #[arg(long, default_value_t = 3)]
        clusters: usize,
        #[arg(long, default_value_t = 40)]
        points: usize,
        #[arg(long, default_value_t = 20.0)]
        radius: f64,
        #[arg(long, default_value_t = 500.0)]
        spacing: f64,
        #[arg(long, default_value = "60s")]
        interval: Span,
        #[arg(long, default_value_t = 0.1)]
        noise_rate: f64,
        #[arg(long, default_value_t = 5)]
        transition: usize,
        #[arg(long, default_value_t = 25.0)]
        eps: f64,
        /// Comma-separated 0-based site order, e.g. `0,1,0,2`.
        #[arg(long, value_delimiter = ',')]
        route: Option<Vec<usize>>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(msg: impl fmt::Display) -> Self {
        Failure { code: 1, message: msg.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io { .. } => 1,
            Error::Parse { .. } => 2,
            Error::InvalidArgument(_) | Error::UndefinedMetric(_) => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn write_failed(e: impl fmt::Display) -> Failure {
    Failure { code: 3, message: format!("write failed: {e}") }
}

type CliResult<T = ()> = Result<T, Failure>;

fn open_input<'a>(path: &Path, stdin: &'a mut dyn Read) -> CliResult<Box<dyn Read + 'a>> {
    if path == Path::new("-") {
        return Ok(Box::new(stdin));
    }
    let f = File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    Ok(Box::new(BufReader::new(f)))
}

fn create(path: &Path) -> CliResult<File> {
    File::create(path).map_err(|source| Error::Io { path: path.to_path_buf(), source }.into())
}

fn load(path: &Path, stdin: &mut dyn Read) -> CliResult<(Trajectory, Option<Labeling>)> {
    Ok(fio::parse_trajectory(open_input(path, stdin)?)?)
}

fn params(seg: &Segmenting) -> CliResult<Params> {
    Params::new(seg.density.eps, seg.density.min_pts, seg.presence.seconds()).map_err(Failure::usage)
}

fn segment_input(seg: &Segmenting, stdin: &mut dyn Read) -> CliResult<(Trajectory, Option<Labeling>, Segmentation)> {
    let p = params(seg)?;
    let (traj, labels) = load(&seg.density.input, stdin)?;
    let s = seqscan(&traj, &p);
    Ok((traj, labels, s))
}

fn zone_analysis(
    seg: &Segmentation,
    traj: &Trajectory,
    psi: f64,
) -> CliResult<(Vec<Vec<usize>>, Vec<crate::analysis::Zone>, SymbolicTrajectory)> {
    if !(0.0..=1.0).contains(&psi) {
        return Err(Failure::usage(format!("psi must lie in [0, 1], got {psi}")));
    }
    let classes = similarity_classes(&seg.regions, psi, traj, &seg.params)?;
    let z = zones(&classes, &seg.regions, traj)?;
    let st = symbolic_trajectory(seg, &z, traj)?;
    Ok((classes, z, st))
}

fn execute(cli: Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Segment { seg, output_dir } => {
            let (traj, _, s) = segment_input(&seg, stdin)?;
            let unit = seg.presence.unit.seconds();
            fio::write_regions(&mut *out, &s, unit)?;
            if let Some(dir) = output_dir {
                std::fs::create_dir_all(&dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
                fio::write_points(create(&dir.join("points.csv"))?, &s, &traj)?;
                fio::write_regions(create(&dir.join("regions.csv"))?, &s, unit)?;
                fio::write_geojson(create(&dir.join("regions.geojson"))?, &s, &traj)?;
            }
            writeln!(err, "{} stay region(s), presence in {}", s.regions.len(), seg.presence.unit).map_err(write_failed)?;
        }
        Command::Sweep { density, theta, unit } => {
            if !(density.eps.is_finite() && density.eps > 0.0) || density.min_pts == 0 {
                return Err(Failure::usage("eps must be positive and min-pts at least 1"));
            }
            let (traj, _) = load(&density.input, stdin)?;
            let theta = theta.map_or_else(|| default_theta(&traj), |t| t.seconds());
            if !(theta > 0.0) {
                return Err(Failure::usage("theta must be positive (a trajectory with zero duration needs --theta)"));
            }
            let table = presence_sweep(&traj, density.eps, density.min_pts, theta)?;
            let u = unit.seconds();
            writeln!(out, "delta_lo,delta_hi,regions").map_err(write_failed)?;
            for r in &table.rows {
                writeln!(out, "{},{},{}", r.lo / u, r.hi / u, r.regions).map_err(write_failed)?;
            }
        }
        Command::Zones { seg, psi, output_dir } => {
            let (traj, _, s) = segment_input(&seg, stdin)?;
            let (_, z, st) = zone_analysis(&s, &traj, psi)?;
            let matrix = similarity_matrix(&s.regions, &traj, &s.params);
            let mut sim = String::from("region_a,region_b,similarity\n");
            for (a, row) in matrix.iter().enumerate() {
                for (b, v) in row.iter().enumerate().skip(a + 1) {
                    sim.push_str(&format!("{},{},{}\n", s.regions[a].id, s.regions[b].id, v));
                }
            }
            let mut zs = String::from("region,zone\n");
            for zone in &z {
                for r in &zone.regions {
                    zs.push_str(&format!("{r},{}\n", zone.id));
                }
            }
            let mut sym = String::from("start,end,symbol\n");
            for e in &st.entries {
                sym.push_str(&format!("{},{},{}\n", e.start, e.end, e.symbol));
            }
            match output_dir {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
                    for (name, body) in [("similarity.csv", &sim), ("zones.csv", &zs), ("symbolic.csv", &sym)] {
                        create(&dir.join(name))?.write_all(body.as_bytes()).map_err(write_failed)?;
                    }
                }
                None => write!(out, "{sim}\n{zs}\n{sym}").map_err(write_failed)?,
            }
            writeln!(err, "{} stay region(s) in {} zone(s)", s.regions.len(), z.len()).map_err(write_failed)?;
        }
        Command::Period { seg, psi, resolution, zone, min_confidence } => {
            let (traj, _, s) = segment_input(&seg, stdin)?;
            let (_, _, st) = zone_analysis(&s, &traj, psi)?;
            let mode = zone.map_or(SeriesMode::Behavior, SeriesMode::Zone);
            let series = build_series(&st, resolution.seconds(), mode)?;
            let report = warp(&series)?;
            writeln!(out, "period,confidence").map_err(write_failed)?;
            for r in &report.rows {
                writeln!(out, "{},{}", r.period, r.confidence).map_err(write_failed)?;
            }
            match best_period(&report, min_confidence) {
                Some(b) => writeln!(
                    err,
                    "best period: {} slot(s) = {} {}, confidence {}",
                    b.period,
                    b.period as f64 * resolution.value,
                    resolution.unit,
                    b.confidence
                ),
                None => writeln!(err, "no period reaches confidence {min_confidence}"),
            }
            .map_err(write_failed)?;
        }
        Command::Eval { seg, result } => {
            let p = params(&seg)?;
            let (traj, labels) = load(&seg.density.input, stdin)?;
            let truth = labels.ok_or_else(|| Failure {
                code: 2,
                message: "the input has no label column".into(),
            })?;
            let result = match result {
                Some(path) => {
                    let f = File::open(&path).map_err(|source| Error::Io { path: path.clone(), source })?;
                    let rows = fio::read_points(BufReader::new(f))?;
                    if rows.len() != traj.len() {
                        return Err(Error::invalid("result and input have different point counts").into());
                    }
                    Labeling::new(rows.iter().map(|r| TruthClass::from(r.point_class().expect("validated on read"))).collect())
                }
                None => Labeling::from(&seqscan(&traj, &p)),
            };
            writeln!(out, "mode,purity,inv_purity,h_purity,precision,recall,f_measure,diff").map_err(write_failed)?;
            for mode in [NoiseMode::Kept, NoiseMode::Absorbed] {
                let m = evaluate(&truth, &result, mode)?;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    m.mode, m.purity, m.inv_purity, m.h_purity, m.pairwise_precision, m.pairwise_recall, m.pairwise_f, m.diff
                )
                .map_err(write_failed)?;
            }
        }
        Command::Resample { input, interval } => {
            let (traj, labels) = load(&input, stdin)?;
            if !(interval.seconds() > 0.0) {
                return Err(Failure::usage("interval must be positive"));
            }
            let kept = resample_indices(&traj, interval.seconds())?;
            let sub = Trajectory::new(kept.iter().map(|&i| (traj.timestamp(i), traj.position(i))))?;
            let sub_labels = labels.map(|l| l.restrict(&kept)).transpose()?;
            fio::write_trajectory(&mut *out, &sub, sub_labels.as_ref())?;
        }
        Command::Synth {
            clusters,
            points,
            radius,
            spacing,
            interval,
            noise_rate,
            transition,
            eps,
            route,
            seed,
        } => {
            let spec = FixtureSpec {
                clusters,
                points_per_cluster: points,
                radius,
                spacing,
                interval: interval.seconds(),
                noise_rate,
                transition_points: transition,
                eps,
                route,
                seed,
            };
            let f = fio::generate_fixture(&spec).map_err(Failure::usage)?;
            fio::write_trajectory(&mut *out, &f.trajectory, Some(&f.labels))?;
        }
    }
    Ok(())
}

/// Runs the CLI on explicit arguments and streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdin, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs the CLI on the process arguments and standard streams.
pub fn run() -> i32 {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = run_with(std::env::args_os(), &mut stdin.lock(), &mut out, &mut stderr.lock());
    if out.flush().is_err() && code == 0 {
        return 3;
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_parse_units() {
        assert_eq!("20d".parse::<Span>().unwrap().seconds(), 20.0 * 86_400.0);
        assert_eq!("90min".parse::<Span>().unwrap().seconds(), 5400.0);
        assert_eq!("1.5h".parse::<Span>().unwrap().seconds(), 5400.0);
        assert_eq!("1w".parse::<Span>().unwrap().seconds(), 604_800.0);
        assert_eq!("30".parse::<Span>().unwrap().seconds(), 30.0);
        assert!("3y".parse::<Span>().is_err());
        assert!("-1s".parse::<Span>().is_err());
        assert!("d".parse::<Span>().is_err());
    }
}
