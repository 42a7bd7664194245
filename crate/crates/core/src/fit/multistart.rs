//! Deterministic multi-start wrapper around the local fitter. Nonlinear fits
//! of the composite model land in different basins depending on the starting
//! point; running many seeded starts and ranking by SSE surfaces the
//! near-equivalent solutions instead of hiding them.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lm::lm_fit;
use super::{FitConfig, FitResult};
use crate::error::Error;
use crate::float;
use crate::model::Model;
use crate::series::TimeSeries;

/// All multi-start candidates, ordered by `(sse, start_index)`.
#[derive(Debug, Clone)]
pub struct MultiStartFit {
    /// Sorted candidates; the winner is first.
    pub candidates: Vec<FitResult>,
    /// How many leading candidates fall within the configured SSE margin of
    /// the winner (the winner included).
    pub equivalent_count: usize,
}

impl MultiStartFit {
    pub fn best(&self) -> &FitResult {
        &self.candidates[0]
    }

    /// The leading candidates whose SSE is equivalent to the winner's.
    pub fn equivalent(&self) -> &[FitResult] {
        &self.candidates[..self.equivalent_count]
    }
}

/// Starting points for `config.n_starts` fits, sampled inside the bounds.
///
/// Sampling is fully determined by `config.rng_seed`: points are drawn in
/// start order, one parameter at a time, uniformly (or log-uniformly, per
/// bound) within each bound.
pub fn sample_starts(config: &FitConfig) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    (0..config.n_starts)
        .map(|_| {
            config
                .bounds
                .iter()
                .map(|b| {
                    if b.log_uniform {
                        float::exp(rng.gen_range(float::ln(b.lower)..float::ln(b.upper)))
                    } else {
                        rng.gen_range(b.lower..b.upper)
                    }
                })
                .collect()
        })
        .collect()
}

/// Runs `config.n_starts` local fits from deterministically sampled starting
/// points and ranks every candidate by SSE.
///
/// The winner is the lowest-SSE candidate; ties go to the lower start index,
/// making the outcome independent of evaluation order. Individual start
/// failures are tolerated; an error is returned only when every start fails.
pub fn multi_start_fit<M: Model>(
    model: &M,
    data: &TimeSeries,
    config: &FitConfig,
) -> Result<MultiStartFit, Error> {
    config.validate(model.param_count())?;
    let starts = sample_starts(config);
    let mut candidates: Vec<FitResult> = Vec::with_capacity(starts.len());
    let mut last_error = None;
    for (start_index, init) in starts.iter().enumerate() {
        match lm_fit(model, data, init, config) {
            Ok(mut fit) => {
                fit.start_index = start_index;
                candidates.push(fit);
            }
            Err(e) => last_error = Some(e),
        }
    }
    if candidates.is_empty() {
        return Err(last_error.unwrap_or(Error::EmptyData));
    }
    candidates.sort_by(|a, b| {
        a.sse.total_cmp(&b.sse).then_with(|| a.start_index.cmp(&b.start_index))
    });
    let threshold = candidates[0].sse * (1.0 + config.sse_equivalence);
    let equivalent_count = candidates.iter().take_while(|c| c.sse <= threshold).count();
    Ok(MultiStartFit { candidates, equivalent_count })
}
