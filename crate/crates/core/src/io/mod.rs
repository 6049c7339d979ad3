//! Text formats shared by the command-line tool: angle literals, CSV and
//! JSON data files, SVG line charts and run manifests.
//!
//! Every writer here is deterministic and locale-free: `.` decimal
//! separator, `\n` line endings, numbers rounded to nine significant digits.

mod angle;
mod csv_io;
mod manifest;
mod number;
mod svg;

pub use angle::{format_angle_deg, parse_angle};
pub use csv_io::{read_sweep_csv, read_trace_csv, write_sweep_csv, write_trace_csv, write_traces_long_csv};
pub use manifest::RunManifest;
pub use number::{format_sig, SIGNIFICANT_DIGITS};
pub use svg::{emit_svg, PlotSpec, Series};
