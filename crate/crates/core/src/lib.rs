//! Techno-economic figures of merit for computing hardware.
//!
//! The crate evaluates the CLEAR figure of merit
//! (Capability / (Latency × Energy × Amount × Resistance)) and Makimoto's
//! MIPS / (Size × Cost × Power) at the device, link, network and system
//! level, models how electrical and hybrid photonic-plasmonic links evolve
//! with calendar year and length, fits log-linear technology trends, finds
//! the break-even length between two link technologies and maps a runtime
//! operating context onto weighting exponents.
//!
//! Everything here is pure computation over immutable values. The crate is
//! `no_std` (with `alloc`) when the default `std` feature is disabled; file
//! formats, plotting and the command-line front end live in the `clearfom`
//! crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod breakeven;
mod error;
pub mod fom;
pub mod models;
pub mod reconfig;
pub mod trend;

pub use error::{Error, Result};

pub use breakeven::{
    break_even_length, crossing_curve, surface, CrossingResult, LengthRange, Side, SurfaceGrid, DEFAULT_REL_TOL,
};
pub use fom::{
    compute_clear, compute_makimoto, device_clear, rank_options, system_capability, AmountDim, ClearFactors, FomValue,
    HierarchyLevel, MakimotoFactors, SystemSpec, WeightVector,
};
pub use models::{
    cost_resistance, energy_per_bit, landauer_limit, link_capability, link_clear, link_factors, parallelism_factor,
    shannon_capacity, ChannelSpec, ExperienceCurveParams, KoomeyParams, LinkKind, ParallelismParams, TechnologyParams,
    BOLTZMANN,
};
pub use reconfig::{select_technology, weights_from_context, OperatingContext, Selection, WeightPolicy};
pub use trend::{
    detect_deviation, fit_trend, fom_series, record_clear_factors, Dataset, DeviationReport, FomKind, FomSeries,
    HistoricalRecord, TechClass, TrendFit,
};
