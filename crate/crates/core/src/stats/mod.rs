//! Evaluation metric and statistical ranking.

pub mod a12;
pub mod bootstrap;
pub mod descriptive;
pub mod scott_knott;
pub mod se;

pub use a12::{a12, a12_magnitude};
pub use bootstrap::{bootstrap_different, StatConfig};
pub use descriptive::{iqr, mean, median, percentile, variance};
pub use scott_knott::{scott_knott, RankedGroup, RankedMember, TreatmentResult};
pub use se::{baseline_guess, standardized_error, standardized_error_against, BASELINE_DRAWS};
