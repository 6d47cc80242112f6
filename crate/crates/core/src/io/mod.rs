//! File formats, plot output and synthetic fixtures.

pub mod csv;
pub mod fixture;
pub mod geojson;
mod hull;

pub use self::csv::{parse_timestamp, parse_trajectory, read_points, write_points, write_regions, write_trajectory, PointRow};
pub use fixture::{generate_fixture, walkthrough, Fixture, FixtureSpec};
pub use geojson::{regions_geojson, write_geojson};
pub use hull::convex_hull;
