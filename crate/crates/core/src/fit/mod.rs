//! Damped nonlinear least squares with finite-difference Jacobians,
//! bounded multi-start, an integer polish pass, and log-linear trend fitting.

mod linalg;
mod lm;
mod multistart;
mod trend;

pub use linalg::Matrix;
pub use lm::{integer_polish, jacobian_fd, lm_fit, residuals};
pub use multistart::{multi_start_fit, sample_starts, MultiStartFit};
pub use trend::fit_loglinear_trend;

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::Error;
use crate::float;
use crate::model::CompositeModel;
use crate::segment::Partition;
use crate::series::TimeSeries;

/// Box constraint for one parameter, with the scale multi-start sampling
/// uses inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
    /// Sample log-uniformly instead of uniformly (for scale parameters that
    /// span decades). Requires a positive lower bound.
    pub log_uniform: bool,
}

impl Bound {
    pub fn linear(lower: f64, upper: f64) -> Self {
        Self { lower, upper, log_uniform: false }
    }

    pub fn log(lower: f64, upper: f64) -> Self {
        Self { lower, upper, log_uniform: true }
    }

    pub fn clamp(&self, x: f64) -> f64 {
        if x < self.lower {
            self.lower
        } else if x > self.upper {
            self.upper
        } else {
            x
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if !(self.lower < self.upper) {
            return Err(Error::InvalidConfig("bound must satisfy lower < upper"));
        }
        if self.log_uniform && !(self.lower > 0.0) {
            return Err(Error::InvalidConfig("log-uniform bound needs a positive lower end"));
        }
        Ok(())
    }
}

/// Knobs for [`lm_fit`] and [`multi_start_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub max_iterations: usize,
    /// Convergence when the SSE gradient's infinity norm drops below this,
    /// scaled by `1 + sse`.
    pub gradient_tolerance: f64,
    /// Convergence when an accepted step's relative length drops below this.
    pub step_tolerance: f64,
    pub damping_init: f64,
    /// Multiplies the damping after a rejected step; must exceed 1.
    pub damping_up_factor: f64,
    /// Multiplies the damping after an accepted step; must lie in (0, 1).
    pub damping_down_factor: f64,
    /// Relative step for central-difference Jacobians.
    pub fd_step_relative: f64,
    pub n_starts: usize,
    pub rng_seed: u64,
    /// One bound per model parameter; starting points are sampled inside.
    pub bounds: Vec<Bound>,
    /// Candidates whose SSE is within this relative margin of the winner are
    /// flagged equivalent.
    pub sse_equivalence: f64,
}

impl FitConfig {
    /// Defaults for the given parameter bounds.
    pub fn with_bounds(bounds: Vec<Bound>) -> Self {
        Self {
            max_iterations: 200,
            gradient_tolerance: 1e-8,
            step_tolerance: 1e-10,
            damping_init: 1e-3,
            damping_up_factor: 10.0,
            damping_down_factor: 0.1,
            fd_step_relative: 1e-6,
            n_starts: 16,
            rng_seed: 42,
            bounds,
            sse_equivalence: 0.05,
        }
    }

    /// Default composite-model bounds: amplitude 1..1e8 BEF (log-uniform),
    /// growth rate 0..0.2 per year, semi-period 5..100 years, phase -pi..pi,
    /// drift offset 0..1e7 BEF, drift slope 0..1e5 BEF per year. These
    /// bracket every published value with wide margins.
    pub fn composite() -> Self {
        Self::with_bounds(alloc::vec![
            Bound::log(1.0, 1e8),
            Bound::linear(0.0, 0.2),
            Bound::linear(5.0, 100.0),
            Bound::linear(-PI, PI),
            Bound::linear(0.0, 1e7),
            Bound::linear(0.0, 1e5),
        ])
    }

    /// Default logistic-model bounds: saturation 1..1e9 BEF (log-uniform),
    /// rate -2..2 per year, midpoint 1850..2100.
    pub fn logistic() -> Self {
        Self::with_bounds(alloc::vec![
            Bound::log(1.0, 1e9),
            Bound::linear(-2.0, 2.0),
            Bound::linear(1850.0, 2100.0),
        ])
    }

    pub fn validate(&self, n_params: usize) -> Result<(), Error> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive"));
        }
        if !(self.gradient_tolerance > 0.0) || !(self.step_tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive"));
        }
        if !(self.damping_init > 0.0) {
            return Err(Error::InvalidConfig("damping_init must be positive"));
        }
        if !(self.damping_up_factor > 1.0) {
            return Err(Error::InvalidConfig("damping_up_factor must exceed 1"));
        }
        if !(self.damping_down_factor > 0.0 && self.damping_down_factor < 1.0) {
            return Err(Error::InvalidConfig("damping_down_factor must lie in (0, 1)"));
        }
        if !(self.fd_step_relative > 1e-12 && self.fd_step_relative < 1e-2) {
            return Err(Error::InvalidConfig("fd_step_relative must lie in (1e-12, 1e-2)"));
        }
        if self.n_starts == 0 {
            return Err(Error::InvalidConfig("n_starts must be at least 1"));
        }
        if !(self.sse_equivalence >= 0.0) {
            return Err(Error::InvalidConfig("sse_equivalence must be non-negative"));
        }
        if self.bounds.len() != n_params {
            return Err(Error::InvalidConfig("one bound per model parameter required"));
        }
        for b in &self.bounds {
            b.validate()?;
        }
        Ok(())
    }

    pub(crate) fn clamp(&self, params: &mut [f64]) {
        for (p, b) in params.iter_mut().zip(&self.bounds) {
            *p = b.clamp(*p);
        }
    }
}

/// Outcome of a least-squares fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Fitted parameter vector in the model's packed order.
    pub params: Vec<f64>,
    /// Sum of squared residuals.
    pub sse: f64,
    /// `sqrt(sse / n_points)`.
    pub rmse: f64,
    pub n_points: usize,
    pub converged: bool,
    pub iterations: usize,
    /// `observed - predicted`, in data year order.
    pub residuals: Vec<f64>,
    /// SSE at the start and after each accepted step; non-increasing.
    pub sse_trace: Vec<f64>,
    /// Which multi-start seed produced this result; 0 for direct fits.
    pub start_index: usize,
}

impl FitResult {
    pub(crate) fn rmse_of(sse: f64, n_points: usize) -> f64 {
        float::sqrt(sse / n_points as f64)
    }
}


/// One regime of a partition-wide fit.
#[derive(Debug, Clone)]
pub struct RegimeFit {
    pub regime: crate::segment::RegimeSpec,
    /// Winning fit, after the polish pass when requested.
    pub result: FitResult,
    /// All multi-start candidates ordered by SSE (pre-polish).
    pub candidates: Vec<FitResult>,
    pub equivalent_count: usize,
}

/// Fits the composite model independently on every regime of `partition`,
/// optionally finishing each winner with [`integer_polish`].
pub fn fit_partition(
    data: &TimeSeries,
    partition: &Partition,
    config: &FitConfig,
    polish: bool,
) -> Result<Vec<RegimeFit>, Error> {
    let mut out = Vec::with_capacity(partition.regimes().len());
    for regime in partition.regimes() {
        let slice = data.slice_years(regime.start_year, regime.end_year);
        let model = CompositeModel::for_regime(regime);
        let multi = multi_start_fit(&model, &slice, config)?;
        let mut result = multi.best().clone();
        if polish {
            result = integer_polish(&model, &slice, &result, config)?;
        }
        out.push(RegimeFit {
            regime: *regime,
            result,
            equivalent_count: multi.equivalent_count,
            candidates: multi.candidates,
        });
    }
    Ok(out)
}
