//! Library half of the `relmaj` command-line tool: resource files, report
//! rendering, Lorenz plots and the subcommands themselves.

pub mod commands;
pub mod plot;
pub mod report;
pub mod spec;

pub use plot::{lorenz_svg, render_lorenz};
pub use spec::{parse_resource, parse_schmidt, serialize_resource};
