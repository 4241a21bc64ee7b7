//! Modeling toolkit for heterogeneous block-based approximate adders: bit-exact
//! simulation, exact analytical error statistics (error-value PMFs, error rates,
//! MED), gate-count hardware estimation, and exhaustive design-space exploration
//! with Pareto filtering.
//!
//! ```
//! use hbba::{analytics, sim, AdderConfig};
//!
//! // Two approximate low blocks under two accurate ones.
//! let cfg = AdderConfig::parse("HBBA{[2,2],[0,1]}", 16, 4)?;
//!
//! // Closed-form error statistics, exact to the last bit.
//! let pmf = analytics::adder_error_pmf(&cfg)?;
//! let metrics = analytics::metrics_from_pmf(&pmf, cfg.bits());
//! assert_eq!(metrics.med.to_f64(), 50.75);
//!
//! // The bit-exact evaluator the analytics are checked against.
//! assert_eq!(sim::adder_eval(&cfg, 0x00FF, 0x0001), 0x00FF);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod analytics;
pub mod cli;
pub mod config;
pub mod dyadic;
pub mod explorer;
pub mod hardware;
pub mod pmf;
pub mod report;
pub mod sim;

pub use config::{AdderConfig, BlockKind, BlockSpec, ConfigError};
pub use dyadic::Dyadic;
pub use pmf::Pmf;
