//! Pure evaluators: exponential trend, sinusoid, logistic, drift terms, and
//! the composite regime model, plus the [`Model`] abstraction the fitter uses.
//!
//! The composite model runs on two clocks. The oscillatory term counts years
//! from the regime start; the drift term counts years from a single global
//! origin shared by all regimes, fixed at [`DRIFT_ORIGIN_YEAR`]. Keeping both
//! clocks explicit in [`eval_composite`] is deliberate: silently offsetting
//! one from the other is the easiest way to misfit this model.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::Error;
use crate::float;
use crate::segment::RegimeSpec;
use crate::series::TimeSeries;

/// Global origin of the drift clock (calendar year).
pub const DRIFT_ORIGIN_YEAR: i32 = 1920;

/// Exponential trend `A * exp(alpha * t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrendParams {
    /// Amplitude at the time origin, in BEF. Must be positive.
    pub amplitude: f64,
    /// Exponential rate per year.
    pub rate: f64,
}

/// Saturating logistic `saturation / (1 + exp(-rate * (t - midpoint)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogisticParams {
    /// Saturation level in BEF. Must be positive.
    pub saturation: f64,
    /// Growth rate per year; the sign separates growth from decay, zero is
    /// not allowed.
    pub rate: f64,
    /// Year of the half-saturation point.
    pub midpoint: f64,
}

/// Bounded population drift `num * exp(rate * t) / (1 + den * exp(rate * t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogisticDriftParams {
    /// Numerator amplitude in BEF. Must be positive.
    pub numerator_amp: f64,
    /// Denominator amplitude, dimensionless. Must be positive.
    pub denominator_amp: f64,
    /// Rate per year.
    pub rate: f64,
}

/// Per-regime parameter set of the composite model.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompositeParams {
    /// Oscillation amplitude in BEF. Must be positive.
    pub amplitude: f64,
    /// Exponential growth rate of the envelope, per year.
    pub growth_rate: f64,
    /// Semi-period of the sinusoid in years (full period is twice this).
    /// Must be positive; integral after the integer polish pass.
    pub semi_period: f64,
    /// Phase of the sinusoid in radians.
    pub phase: f64,
    /// Drift offset in BEF.
    pub drift_offset: f64,
    /// Drift slope in BEF per year.
    pub drift_slope: f64,
}

impl CompositeParams {
    /// Packed order used by the fitter:
    /// `[amplitude, growth_rate, semi_period, phase, drift_offset, drift_slope]`.
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.amplitude,
            self.growth_rate,
            self.semi_period,
            self.phase,
            self.drift_offset,
            self.drift_slope,
        ]
    }

    pub fn from_slice(v: &[f64]) -> Self {
        Self {
            amplitude: v[0],
            growth_rate: v[1],
            semi_period: v[2],
            phase: v[3],
            drift_offset: v[4],
            drift_slope: v[5],
        }
    }
}

/// `A * exp(alpha * t)` with `t` in years since the trend origin.
pub fn eval_trend(p: &TrendParams, t: f64) -> f64 {
    p.amplitude * float::exp(p.rate * t)
}

/// `sin(2*pi*t / (2*T) + phi)` for semi-period `T` in years.
pub fn eval_sine(semi_period: f64, phase: f64, t: f64) -> Result<f64, Error> {
    if !(semi_period > 0.0) {
        return Err(Error::InvalidParameter("semi-period must be positive"));
    }
    Ok(float::sin(PI * t / semi_period + phase))
}

/// Logistic value at calendar year `t`; stays strictly inside
/// `(0, saturation)` for finite `t`.
pub fn eval_logistic(p: &LogisticParams, t: f64) -> f64 {
    p.saturation / (1.0 + float::exp(-p.rate * (t - p.midpoint)))
}

/// Bounded drift at `t` years since the origin; saturates at
/// `numerator_amp / denominator_amp`.
pub fn eval_logistic_drift(p: &LogisticDriftParams, t: f64) -> f64 {
    let e = float::exp(p.rate * t);
    p.numerator_amp * e / (1.0 + p.denominator_amp * e)
}

/// Linear drift `offset + slope * t` with `t` in years since
/// [`DRIFT_ORIGIN_YEAR`].
pub fn eval_linear_drift(offset: f64, slope: f64, t: f64) -> f64 {
    offset + slope * t
}

/// Composite regime model on its two clocks.
///
/// `t_regime` counts years from the regime start (oscillatory clock),
/// `t_global` counts years from [`DRIFT_ORIGIN_YEAR`] (drift clock). The
/// caller keeps the clocks consistent: `t_global - t_regime` equals the
/// regime's offset from the global origin.
pub fn eval_composite(p: &CompositeParams, t_regime: f64, t_global: f64) -> Result<f64, Error> {
    let wave = eval_sine(p.semi_period, p.phase, t_regime)?;
    Ok(p.amplitude * float::exp(p.growth_rate * t_regime) * wave
        + eval_linear_drift(p.drift_offset, p.drift_slope, t_global))
}

/// Evaluates the composite model over `years`, all of which must fall inside
/// the regime interval.
pub fn eval_series(
    p: &CompositeParams,
    regime: &RegimeSpec,
    years: &[i32],
) -> Result<TimeSeries, Error> {
    let model = CompositeModel::for_regime(regime);
    let array = p.to_array();
    let mut pairs = Vec::with_capacity(years.len());
    for &year in years {
        if !regime.contains(year) {
            return Err(Error::YearOutOfRegime { year });
        }
        if !(p.semi_period > 0.0) {
            return Err(Error::InvalidParameter("semi-period must be positive"));
        }
        pairs.push((year, model.predict(&array, year as f64)));
    }
    TimeSeries::from_points("model", pairs)
}

/// A parameterized curve evaluated at a calendar year.
///
/// `predict` is total: parameter vectors outside the model's domain may
/// produce NaN or infinity, which the fitter treats as a rejected step.
pub trait Model {
    fn param_count(&self) -> usize;
    /// Predicted value at `year` for the packed parameter vector.
    fn predict(&self, params: &[f64], year: f64) -> f64;
}

/// Composite model bound to a regime clock and the global drift clock.
#[derive(Debug, Clone, Copy)]
pub struct CompositeModel {
    /// Calendar year where the oscillatory clock starts.
    pub regime_start: i32,
    /// Calendar year where the drift clock starts.
    pub drift_origin: i32,
}

impl CompositeModel {
    pub const AMPLITUDE: usize = 0;
    pub const GROWTH_RATE: usize = 1;
    pub const SEMI_PERIOD: usize = 2;
    pub const PHASE: usize = 3;
    pub const DRIFT_OFFSET: usize = 4;
    pub const DRIFT_SLOPE: usize = 5;

    /// Oscillatory clock at `regime_start`, drift clock at
    /// [`DRIFT_ORIGIN_YEAR`].
    pub fn new(regime_start: i32) -> Self {
        Self { regime_start, drift_origin: DRIFT_ORIGIN_YEAR }
    }

    pub fn for_regime(regime: &RegimeSpec) -> Self {
        Self::new(regime.start_year)
    }

    pub fn params_from(&self, v: &[f64]) -> CompositeParams {
        CompositeParams::from_slice(v)
    }
}

impl Model for CompositeModel {
    fn param_count(&self) -> usize {
        6
    }

    fn predict(&self, params: &[f64], year: f64) -> f64 {
        let t_regime = year - self.regime_start as f64;
        let t_global = year - self.drift_origin as f64;
        params[Self::AMPLITUDE]
            * float::exp(params[Self::GROWTH_RATE] * t_regime)
            * float::sin(PI * t_regime / params[Self::SEMI_PERIOD] + params[Self::PHASE])
            + params[Self::DRIFT_OFFSET]
            + params[Self::DRIFT_SLOPE] * t_global
    }
}

/// Logistic model over calendar years; params `[saturation, rate, midpoint]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogisticModel;

impl Model for LogisticModel {
    fn param_count(&self) -> usize {
        3
    }

    fn predict(&self, params: &[f64], year: f64) -> f64 {
        params[0] / (1.0 + float::exp(-params[1] * (year - params[2])))
    }
}

/// Exponential trend anchored at `origin_year`; params `[amplitude, rate]`.
#[derive(Debug, Clone, Copy)]
pub struct TrendModel {
    pub origin_year: i32,
}

impl Model for TrendModel {
    fn param_count(&self) -> usize {
        2
    }

    fn predict(&self, params: &[f64], year: f64) -> f64 {
        params[0] * float::exp(params[1] * (year - self.origin_year as f64))
    }
}

/// Linear drift anchored at `origin_year`; params `[offset, slope]`.
#[derive(Debug, Clone, Copy)]
pub struct LinearDriftModel {
    pub origin_year: i32,
}

impl Default for LinearDriftModel {
    fn default() -> Self {
        Self { origin_year: DRIFT_ORIGIN_YEAR }
    }
}

impl Model for LinearDriftModel {
    fn param_count(&self) -> usize {
        2
    }

    fn predict(&self, params: &[f64], year: f64) -> f64 {
        params[0] + params[1] * (year - self.origin_year as f64)
    }
}
