//! File formats, SVG plots and the `clearfom` command line on top of
//! [`clearfom_core`].
//!
//! * [`params`]: the JSON technology parameter file and the shipped defaults
//! * [`config`]: JSON factor, weight, context, policy and option files
//! * [`dataset`]: the historical-record CSV format
//! * [`grid`]: long-format surface and crossing CSVs
//! * [`svg`]: dependency-free SVG trend and surface plots
//! * [`report`]: line-oriented selection traces
//! * [`cli`]: argument parsing and dispatch

pub mod cli;
pub mod config;
pub mod dataset;
mod error;
pub mod grid;
pub mod numfmt;
pub mod params;
pub mod report;
pub mod svg;

pub use clearfom_core as model;
pub use error::FormatError;
