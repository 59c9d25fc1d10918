//! Multicriteria life-cycle assessment of urban transport modes.
//!
//! The crate is organised bottom-up:
//!
//! * [`lci`] assembles technology and intervention matrices from unit
//!   processes and solves them for an elementary-flow inventory.
//! * [`impact`] holds the five indicators and applies characterization
//!   factors to inventories.
//! * [`mode`] composes vehicle, use, servicing and infrastructure terms into
//!   per passenger-kilometre impacts.
//! * [`dataset`] parses, validates and derives the bundled data files.
//! * [`scenario`] applies the lifespan, servicing, shipping and electricity
//!   axes and solves break-even mileages.
//! * [`report`] normalizes, ranks and renders results as CSV or SVG.
//!
//! Every numeric type is generic over [`Scalar`] (`f32` or `f64`); the
//! `f64` aliases at the crate root are what the CLI uses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod error;
pub mod impact;
pub mod lci;
pub mod mode;
pub mod report;
pub mod scalar;
pub mod scenario;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
pub use impact::{Indicator, INDICATORS};
pub use scalar::Scalar;

/// Impact vector in double precision.
pub type ImpactVector = impact::ImpactVector<f64>;
/// Characterization factor set in double precision.
pub type CharacterizationFactorSet = impact::CharacterizationFactorSet<f64>;
/// Background database in double precision.
pub type BackgroundDatabase = lci::BackgroundDatabase<f64>;
/// Matrix system in double precision.
pub type MatrixSystem = lci::MatrixSystem<f64>;
/// Elementary-flow inventory in double precision.
pub type FlowVector = lci::FlowVector<f64>;
/// Transport mode in double precision.
pub type TransportMode = mode::TransportMode<f64>;
/// Assessment result in double precision.
pub type AssessmentResult = mode::AssessmentResult<f64>;
/// Bundled dataset in double precision.
pub type Dataset = dataset::Dataset<f64>;
/// One scenario level in double precision.
pub type ScenarioSpec = scenario::ScenarioSpec<f64>;

/// Directory holding the data files shipped with the crate.
pub fn bundled_data_dir() -> std::path::PathBuf {
    std::path::PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data"))
}
