//! Simulation testbed for RIS-aided uplink localization when some reflecting
//! elements have failed.
//!
//! The crate covers array geometry and multipath channels ([`channelgeom`]),
//! element failures and sub-array bookkeeping ([`fault`]), the received-signal
//! model ([`signal`]), reproducible datasets ([`dataset`]), the detection,
//! reconstruction and fingerprinting estimators ([`estimators`]) and the
//! metrics and sweeps used to compare them ([`evaluation`]). The `cli` module
//! backs the `risfaultsim` binary.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub mod channelgeom;
pub mod cli;
pub mod dataset;
mod error;
pub mod estimators;
pub mod evaluation;
pub mod fault;
pub mod scene;
pub mod signal;

pub use error::{Error, Result};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;
