//! Special functions: complex gamma and Bessel functions of complex order.

mod bessel;
mod dd;
mod gamma;

pub(crate) use bessel::hankel_terms;
pub use bessel::{
    asymptotic_threshold, bessel_asymptotic, bessel_j, BesselEngine, SeriesEvalReport,
    MAX_ARGUMENT, MAX_ORDER, SERIES_REGION, TARGET_RELATIVE_ERROR,
};
pub use gamma::complex_gamma;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("gamma has a pole at z = {z}")]
    PoleAtNonPositiveInteger { z: f64 },
    #[error("argument must be positive, got {x}")]
    NonPositiveArgument { x: f64 },
    #[error("order {order} / argument {x} outside the supported domain")]
    OutOfDomain { order: Complex64, x: f64 },
    #[error("x = {x} is below the asymptotic validity threshold {min_x} for order {order}")]
    OutsideValidityRegion {
        order: Complex64,
        x: f64,
        min_x: f64,
    },
    #[error(
        "accuracy target missed: value {} with error bound {:e}",
        report.value,
        report.tail_bound
    )]
    AccuracyLoss { report: SeriesEvalReport },
    #[error("non-finite input or result")]
    NonFinite,
}
