//! Software effort estimation benchmark: the COCOMO-II model and its local
//! calibration, a set of rival estimators, and a leave-one-out rig whose
//! results are ranked with Scott-Knott.

pub mod cocomo;
pub mod error;
pub mod estimators;
pub mod io;
pub mod model;
pub mod rig;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
