//! Modeling of yearly financial series that grow and decay in regimes.
//!
//! The model is an exponentially modulated sinusoid on a regime-local clock
//! superposed on a linear population drift on a fixed global clock:
//!
//! ```text
//! y(t) = A * exp(alpha * t_regime) * sin(pi * t_regime / T + phi) + B + b * t_global
//! ```
//!
//! The crate provides the pure evaluators ([`model`]), a damped least-squares
//! fitter with finite-difference Jacobians, multi-start, and an integer polish
//! pass ([`fit`]), regime bookkeeping and an exhaustive boundary search
//! ([`segment`]), and a synthetic series generator that doubles as the fitting
//! oracle ([`synth`]).
//!
//! Everything here is `no_std` + `alloc`; IO, CSV, and the CLI live in the
//! companion `regimefit-cli` crate.

#![no_std]
// Validation uses `!(x > 0.0)` so that NaN fails the check; `x <= 0.0` would
// let it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod fit;
mod float;
pub mod model;
pub mod segment;
pub mod series;
pub mod synth;

pub use error::Error;
pub use fit::{
    fit_loglinear_trend, fit_partition, integer_polish, jacobian_fd, lm_fit, multi_start_fit,
    residuals, Bound, FitConfig, FitResult, MultiStartFit, RegimeFit,
};
pub use model::{
    eval_composite, eval_linear_drift, eval_logistic, eval_logistic_drift, eval_series, eval_sine,
    eval_trend, CompositeModel, CompositeParams, LinearDriftModel, LogisticDriftParams,
    LogisticModel, LogisticParams, Model, TrendModel, TrendParams, DRIFT_ORIGIN_YEAR,
};
pub use segment::{
    boundary_search, expenses_partition, income_partition, progression_check,
    semiperiod_sum_check, visual_partition, BoundarySearch, Partition, PartitionMode, RegimeSpec,
};
pub use series::TimeSeries;
pub use synth::{generate, generate_expenses, generate_income, ExpensesFit, NoiseSpec, SpikeEvent};
