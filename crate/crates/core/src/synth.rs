//! Synthetic series generation from the published parameter tables.
//!
//! The original yearly records are not available in machine-readable form,
//! so every series this crate works with is generated here: the composite
//! model evaluated per regime, optionally perturbed by multiplicative
//! lognormal noise and one-off spike years. With noise off the output is the
//! exact forward model, which makes it the ground truth for the fitting
//! round-trip tests.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::float;
use crate::model::{CompositeModel, CompositeParams, Model};
use crate::segment::{expenses_partition, income_partition, Partition};
use crate::series::TimeSeries;

/// Generated amounts never drop below this, keeping log scales defined.
pub const VALUE_FLOOR: f64 = 1.0;

/// Stochastic perturbation of a generated series.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase", tag = "kind"))]
pub enum NoiseSpec {
    /// Deterministic output.
    None,
    /// Each value is multiplied by `exp(sigma * z)` with standard normal `z`,
    /// so the noiseless series is the pointwise median.
    Lognormal { sigma: f64, rng_seed: u64 },
}

impl NoiseSpec {
    pub fn none() -> Self {
        NoiseSpec::None
    }

    pub fn lognormal(sigma: f64, rng_seed: u64) -> Self {
        NoiseSpec::Lognormal { sigma, rng_seed }
    }
}

/// A single year whose amount is multiplied by an exceptional factor,
/// modeling one-off large gifts.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpikeEvent {
    pub year: i32,
    /// Must exceed 1.
    pub multiplier: f64,
}

/// Two consecutive exceptional years near the third regime's peak.
pub fn default_spikes() -> Vec<SpikeEvent> {
    vec![
        SpikeEvent { year: 1984, multiplier: 3.0 },
        SpikeEvent { year: 1985, multiplier: 3.0 },
    ]
}

/// Evaluates the composite model over `years` with one parameter set per
/// regime, then applies noise and spikes.
///
/// Each year is owned by the first regime containing it. The model value is
/// floored at [`VALUE_FLOOR`] before the multiplicative perturbations, so
/// the output is strictly positive and the noiseless series stays the
/// pointwise median under lognormal noise.
pub fn generate(
    partition: &Partition,
    params: &[CompositeParams],
    years: &[i32],
    noise: &NoiseSpec,
    spikes: &[SpikeEvent],
) -> Result<TimeSeries, Error> {
    if params.len() != partition.regimes().len() {
        return Err(Error::ParamsPartitionMismatch {
            regimes: partition.regimes().len(),
            params: params.len(),
        });
    }
    if let NoiseSpec::Lognormal { sigma, .. } = noise {
        if !(*sigma >= 0.0) {
            return Err(Error::InvalidParameter("noise sigma must be non-negative"));
        }
    }
    for (i, spike) in spikes.iter().enumerate() {
        if !(spike.multiplier > 1.0) {
            return Err(Error::InvalidParameter("spike multiplier must exceed 1"));
        }
        if spikes[..i].iter().any(|s| s.year == spike.year) {
            return Err(Error::DuplicateSpikeYear { year: spike.year });
        }
    }

    let mut rng = match noise {
        NoiseSpec::Lognormal { rng_seed, .. } => Some(ChaCha8Rng::seed_from_u64(*rng_seed)),
        NoiseSpec::None => None,
    };

    let mut pairs = Vec::with_capacity(years.len());
    for &year in years {
        let regime = partition
            .regime_containing(year)
            .ok_or(Error::YearNotCovered { year })?;
        let p = &params[regime.index - 1];
        if !(p.semi_period > 0.0) {
            return Err(Error::InvalidParameter("semi-period must be positive"));
        }
        let model = CompositeModel::for_regime(regime);
        let mut value = model.predict(&p.to_array(), year as f64).max(VALUE_FLOOR);
        if let (Some(rng), NoiseSpec::Lognormal { sigma, .. }) = (rng.as_mut(), noise) {
            let z: f64 = StandardNormal.sample(rng);
            value *= float::exp(sigma * z);
        }
        if let Some(spike) = spikes.iter().find(|s| s.year == year) {
            value *= spike.multiplier;
        }
        pairs.push((year, value));
    }
    TimeSeries::from_points("synthetic", pairs)
}

/// Income parameter table, one row per regime of [`income_partition`]:
/// shared growth rate 0.059, semi-periods 19, 28, 37 years, drift slopes
/// 0.265e4, 0.615e4, 1.0725e4 BEF per year.
pub fn income_params() -> Vec<CompositeParams> {
    vec![
        CompositeParams {
            amplitude: 0.11e6,
            growth_rate: 0.059,
            semi_period: 19.0,
            phase: 0.0,
            drift_offset: 0.0,
            drift_slope: 0.265e4,
        },
        CompositeParams {
            amplitude: 0.11e6,
            growth_rate: 0.059,
            semi_period: 28.0,
            phase: 0.0,
            drift_offset: 0.0,
            drift_slope: 0.615e4,
        },
        CompositeParams {
            amplitude: 0.09e6,
            growth_rate: 0.059,
            semi_period: 37.0,
            phase: 0.0,
            drift_offset: 0.0,
            drift_slope: 1.0725e4,
        },
    ]
}

/// The four published whole-range expense fits. Each shares one amplitude,
/// growth rate, and drift slope across the three regimes; only the
/// semi-period changes per regime (19, 27, 34 years).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpensesFit {
    R,
    S,
    T,
    U,
}

impl ExpensesFit {
    pub const ALL: [ExpensesFit; 4] = [Self::R, Self::S, Self::T, Self::U];

    pub fn label(&self) -> &'static str {
        match self {
            Self::R => "R",
            Self::S => "S",
            Self::T => "T",
            Self::U => "U",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "R" | "r" => Some(Self::R),
            "S" | "s" => Some(Self::S),
            "T" | "t" => Some(Self::T),
            "U" | "u" => Some(Self::U),
        _ => None,
        }
    }

    /// `(amplitude, growth_rate, drift_slope)` of this fit. The two
    /// drift slopes quoted against a half-decade power are expanded as
    /// `coefficient * 10^3.5`.
    pub fn shared_params(&self) -> (f64, f64, f64) {
        const POW_3_5: f64 = 3162.2776601683795;
        match self {
            Self::R => (0.11e6, 0.056, 0.25e4),
            Self::S => (0.11e6, 0.059, 0.625e4),
            Self::T => (0.09e6, 0.062, 1.00 * POW_3_5),
            Self::U => (0.09e6, 0.053, 1.375 * POW_3_5),
        }
    }
}

/// Expense parameter table for one fit, one row per regime of
/// [`expenses_partition`].
pub fn expenses_params(fit: ExpensesFit) -> Vec<CompositeParams> {
    let (amplitude, growth_rate, drift_slope) = fit.shared_params();
    expenses_partition()
        .regimes()
        .iter()
        .map(|r| CompositeParams {
            amplitude,
            growth_rate,
            semi_period: r.semi_period_hint.expect("published hint"),
            phase: 0.0,
            drift_offset: 0.0,
            drift_slope,
        })
        .collect()
}

/// Noiseless income series on the full published interval.
pub fn generate_income() -> TimeSeries {
    let partition = income_partition();
    let (first, last) = partition.span();
    let years: Vec<i32> = (first..=last).collect();
    generate(&partition, &income_params(), &years, &NoiseSpec::None, &[])
        .expect("income preset is well-formed")
        .relabel("income")
}

/// Noiseless expense series for one of the published fits.
pub fn generate_expenses(fit: ExpensesFit) -> TimeSeries {
    let partition = expenses_partition();
    let (first, last) = partition.span();
    let years: Vec<i32> = (first..=last).collect();
    let mut label = alloc::string::String::from("expenses-");
    label.push_str(fit.label());
    generate(&partition, &expenses_params(fit), &years, &NoiseSpec::None, &[])
        .expect("expense preset is well-formed")
        .relabel(label)
}
