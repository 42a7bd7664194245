//! Exponential trend extraction by ordinary least squares in log space.

use crate::error::Error;
use crate::float;
use crate::model::TrendParams;
use crate::series::TimeSeries;

/// Fits `A * exp(alpha * t)` by linear regression of `ln y` on `t`, with `t`
/// counted from the first year of the series. Every value must be strictly
/// positive.
pub fn fit_loglinear_trend(data: &TimeSeries) -> Result<TrendParams, Error> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    for p in data.points() {
        if !(p.value > 0.0) {
            return Err(Error::NonPositiveValue { year: p.year });
        }
    }
    let first = data.first_year().unwrap();
    let n = data.len() as f64;
    let mut sum_t = 0.0;
    let mut sum_tt = 0.0;
    let mut sum_z = 0.0;
    let mut sum_tz = 0.0;
    for p in data.points() {
        let t = (p.year - first) as f64;
        let z = float::ln(p.value);
        sum_t += t;
        sum_tt += t * t;
        sum_z += z;
        sum_tz += t * z;
    }
    let det = n * sum_tt - sum_t * sum_t;
    let (slope, intercept) = if det == 0.0 {
        // Single point (or no spread in t): flat trend through the data.
        (0.0, sum_z / n)
    } else {
        let slope = (n * sum_tz - sum_t * sum_z) / det;
        let intercept = (sum_z - slope * sum_t) / n;
        (slope, intercept)
    };
    Ok(TrendParams { amplitude: float::exp(intercept), rate: slope })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_exponential() {
        let data = TimeSeries::from_points(
            "t",
            (1920..=2000).map(|y| (y, 100.0 * float::exp(0.078 * (y - 1920) as f64))),
        )
        .unwrap();
        let p = fit_loglinear_trend(&data).unwrap();
        assert!((p.rate - 0.078).abs() < 1e-10 * 0.078);
        assert!((p.amplitude - 100.0).abs() < 1e-10 * 100.0);
    }

    #[test]
    fn constant_data_has_zero_rate() {
        let data = TimeSeries::from_points("t", (1950..=1970).map(|y| (y, 7.5))).unwrap();
        let p = fit_loglinear_trend(&data).unwrap();
        assert!(p.rate.abs() < 1e-12);
        assert!((p.amplitude - 7.5).abs() < 1e-12 * 7.5);
    }

    #[test]
    fn two_points_give_exact_line() {
        let data = TimeSeries::from_points(
            "t",
            [(1920, 1.0), (1930, core::f64::consts::E)],
        )
        .unwrap();
        let p = fit_loglinear_trend(&data).unwrap();
        assert!((p.rate - 0.1).abs() < 1e-12);
        assert!((p.amplitude - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_values() {
        let data = TimeSeries::from_points("t", [(1920, 1.0), (1921, 0.0)]).unwrap();
        assert_eq!(
            fit_loglinear_trend(&data).unwrap_err(),
            Error::NonPositiveValue { year: 1921 }
        );
    }

    #[test]
    fn rejects_empty_series() {
        let data = TimeSeries::from_points("t", core::iter::empty()).unwrap();
        assert_eq!(fit_loglinear_trend(&data).unwrap_err(), Error::EmptyData);
    }
}
