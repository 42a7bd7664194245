//! Damped Gauss-Newton iteration with multiplicative damping on the
//! normal-equations diagonal, plus the finite-difference Jacobian and the
//! integer polish pass.

use alloc::vec::Vec;

use super::linalg::{solve, Matrix};
use super::{FitConfig, FitResult};
use crate::error::Error;
use crate::float;
use crate::model::{CompositeModel, Model};
use crate::series::TimeSeries;

const DAMPING_MAX: f64 = 1e12;
const DAMPING_MIN: f64 = 1e-14;

/// `observed - predicted` in data year order; missing years are simply
/// absent from the data and contribute nothing.
pub fn residuals<M: Model>(
    model: &M,
    params: &[f64],
    data: &TimeSeries,
) -> Result<Vec<f64>, Error> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    Ok(data
        .points()
        .iter()
        .map(|p| p.value - model.predict(params, p.year as f64))
        .collect())
}

/// Central-difference Jacobian of the model prediction, one row per data
/// point and one column per parameter.
///
/// The probe step for parameter `j` is `fd_step_relative * max(|p_j|, 1)`,
/// snapped down to a power of two so that `p_j ± h` round-trips exactly and
/// linear models differentiate exactly.
pub fn jacobian_fd<M: Model>(
    model: &M,
    params: &[f64],
    data: &TimeSeries,
    fd_step_relative: f64,
) -> Result<Matrix, Error> {
    if !(fd_step_relative > 1e-12 && fd_step_relative < 1e-2) {
        return Err(Error::InvalidConfig("fd_step_relative must lie in (1e-12, 1e-2)"));
    }
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let n_params = model.param_count();
    let mut jac = Matrix::zeros(data.len(), n_params);
    let mut probe = params.to_vec();
    for j in 0..n_params {
        let scale = fd_step_relative * float::abs(params[j]).max(1.0);
        let h = libm::exp2(libm::floor(libm::log2(scale)));
        probe[j] = params[j] + h;
        let mut forward = Vec::with_capacity(data.len());
        for p in data.points() {
            forward.push(model.predict(&probe, p.year as f64));
        }
        probe[j] = params[j] - h;
        for (k, p) in data.points().iter().enumerate() {
            let backward = model.predict(&probe, p.year as f64);
            let d = (forward[k] - backward) / (2.0 * h);
            if !d.is_finite() {
                return Err(Error::NonFiniteEvaluation { year: p.year as f64 });
            }
            jac.set(k, j, d);
        }
        probe[j] = params[j];
    }
    Ok(jac)
}

fn sse_of(residuals: &[f64]) -> f64 {
    residuals.iter().map(|r| r * r).sum()
}

/// Levenberg-Marquardt-style local fit.
///
/// Trial steps solve `(J^T J + damping * diag(J^T J)) step = J^T r`; a step
/// is accepted only when it does not increase the SSE, so the accepted
/// trace is non-increasing by construction. Rejected trials raise the
/// damping and retry; a singular system counts as a rejected trial, so the
/// fit reports non-convergence rather than failing. Parameters are clamped
/// to the configured bounds throughout (the initial point included).
pub fn lm_fit<M: Model>(
    model: &M,
    data: &TimeSeries,
    init_params: &[f64],
    config: &FitConfig,
) -> Result<FitResult, Error> {
    let n_params = model.param_count();
    config.validate(n_params)?;
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    if data.len() < n_params {
        return Err(Error::InsufficientData { points: data.len(), params: n_params });
    }

    let mut params = init_params.to_vec();
    config.clamp(&mut params);
    let mut res = residuals(model, &params, data)?;
    let mut sse = sse_of(&res);
    if !sse.is_finite() {
        return Err(Error::NonFiniteEvaluation { year: f64::NAN });
    }

    let mut trace = alloc::vec![sse];
    let mut damping = config.damping_init;
    let mut converged = false;
    let mut iterations = 0;
    // Gradient and Gauss-Newton pieces are only recomputed after an accepted
    // step; rejected trials reuse them with a larger damping.
    let mut fresh = true;
    let mut jtj = Matrix::zeros(n_params, n_params);
    let mut jtr: Vec<f64> = alloc::vec![0.0; n_params];

    while iterations < config.max_iterations {
        iterations += 1;
        if fresh {
            let jac = match jacobian_fd(model, &params, data, config.fd_step_relative) {
                Ok(j) => j,
                // The current point is fine but a probe blew up; nothing
                // sensible to iterate on.
                Err(Error::NonFiniteEvaluation { .. }) => break,
                Err(e) => return Err(e),
            };
            jtr = jac.transpose_mul_vec(&res);
            jtj = jac.gram();
            fresh = false;
            let grad_inf = jtr.iter().fold(0.0f64, |m, g| m.max(float::abs(*g)));
            if grad_inf < config.gradient_tolerance * (1.0 + sse) {
                converged = true;
                break;
            }
        }

        let mut damped = jtj.clone();
        for i in 0..n_params {
            let d = damped.at(i, i);
            damped.set(i, i, d + damping * d.max(1e-12));
        }
        let step = match solve(&damped, &jtr) {
            Some(s) => s,
            None => {
                damping = (damping * config.damping_up_factor).min(DAMPING_MAX);
                continue;
            }
        };

        let mut trial: Vec<f64> = params.iter().zip(&step).map(|(p, s)| p + s).collect();
        config.clamp(&mut trial);
        let trial_res = residuals(model, &trial, data)?;
        let trial_sse = sse_of(&trial_res);

        if trial_sse.is_finite() && trial_sse <= sse {
            let step_norm: f64 =
                float::sqrt(params.iter().zip(&trial).map(|(a, b)| (a - b) * (a - b)).sum());
            let param_norm: f64 = float::sqrt(params.iter().map(|p| p * p).sum());
            params = trial;
            res = trial_res;
            sse = trial_sse;
            trace.push(sse);
            damping = (damping * config.damping_down_factor).max(DAMPING_MIN);
            fresh = true;
            if step_norm < config.step_tolerance * (1.0 + param_norm) {
                converged = true;
                break;
            }
        } else {
            damping = (damping * config.damping_up_factor).min(DAMPING_MAX);
        }
    }

    Ok(FitResult {
        rmse: FitResult::rmse_of(sse, data.len()),
        params,
        sse,
        n_points: data.len(),
        converged,
        iterations,
        residuals: res,
        sse_trace: trace,
        start_index: 0,
    })
}

/// A model with one parameter pinned to a constant, exposing the rest.
struct Frozen<'a, M: Model> {
    inner: &'a M,
    index: usize,
    value: f64,
}

impl<M: Model> Model for Frozen<'_, M> {
    fn param_count(&self) -> usize {
        self.inner.param_count() - 1
    }

    fn predict(&self, params: &[f64], year: f64) -> f64 {
        let mut full = Vec::with_capacity(self.inner.param_count());
        full.extend_from_slice(&params[..self.index]);
        full.push(self.value);
        full.extend_from_slice(&params[self.index..]);
        self.inner.predict(&full, year)
    }
}

fn remove_index<T: Clone>(v: &[T], index: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(v.len() - 1);
    out.extend_from_slice(&v[..index]);
    out.extend_from_slice(&v[index + 1..]);
    out
}

/// Rounds the fitted semi-period to a whole number of years, freezes it, and
/// refits the remaining parameters from the prior optimum.
///
/// The polished SSE can exceed the unpolished one; the integer constraint is
/// a reporting convention, not an improvement step. The rounded semi-period
/// is whatever the fit found, which need not be half the window width.
pub fn integer_polish(
    model: &CompositeModel,
    data: &TimeSeries,
    result: &FitResult,
    config: &FitConfig,
) -> Result<FitResult, Error> {
    const T: usize = CompositeModel::SEMI_PERIOD;
    let semi_period = config.bounds[T].clamp(float::round(result.params[T]));

    let frozen = Frozen { inner: model, index: T, value: semi_period };
    let mut sub_config = config.clone();
    sub_config.bounds = remove_index(&config.bounds, T);
    let sub_init = remove_index(&result.params, T);

    let sub = lm_fit(&frozen, data, &sub_init, &sub_config)?;

    let mut params = sub.params.clone();
    params.insert(T, semi_period);
    Ok(FitResult {
        params,
        sse: sub.sse,
        rmse: sub.rmse,
        n_points: sub.n_points,
        converged: sub.converged,
        iterations: sub.iterations,
        residuals: sub.residuals,
        sse_trace: sub.sse_trace,
        start_index: result.start_index,
    })
}
