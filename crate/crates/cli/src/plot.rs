//! Plot-data emission: the observed series plus the fitted curves sampled on
//! a dense grid, as two CSV documents ready for any plotting tool.

use regimefit_core::{CompositeModel, CompositeParams, Model, RegimeSpec, TimeSeries};

use crate::csv::{format_bef, format_csv};
use crate::error::CliError;

pub struct PlotData {
    /// Canonical `year,value` document of the observations.
    pub observed_csv: String,
    /// `t,value,regime` document of the fitted curves, sampled every `step`
    /// years per regime on the regime's own clock convention.
    pub fitted_csv: String,
}

pub fn emit_plot_data(
    data: &TimeSeries,
    fits: &[(RegimeSpec, CompositeParams)],
    step: f64,
) -> Result<PlotData, CliError> {
    if !(step > 0.0) {
        return Err(CliError::Usage("plot step must be positive".into()));
    }
    let mut fitted = String::from("t,value,regime\n");
    for (regime, params) in fits {
        let model = CompositeModel::for_regime(regime);
        let array = params.to_array();
        let width = (regime.end_year - regime.start_year) as f64;
        let samples = (width / step + 1e-9).floor() as usize;
        for k in 0..=samples {
            let t = regime.start_year as f64 + k as f64 * step;
            let value = model.predict(&array, t);
            fitted.push_str(&format!("{},{},{}\n", t, format_bef(value), regime.index));
        }
    }
    Ok(PlotData { observed_csv: format_csv(data), fitted_csv: fitted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use regimefit_core::{eval_composite, RegimeSpec, DRIFT_ORIGIN_YEAR};

    fn params() -> CompositeParams {
        CompositeParams {
            amplitude: 0.11e6,
            growth_rate: 0.059,
            semi_period: 19.0,
            phase: 0.0,
            drift_offset: 0.0,
            drift_slope: 0.265e4,
        }
    }

    #[test]
    fn empty_fit_list_gives_header_only() {
        let data = TimeSeries::from_points("x", [(1920, 1.0)]).unwrap();
        let plot = emit_plot_data(&data, &[], 0.25).unwrap();
        assert_eq!(plot.fitted_csv, "t,value,regime\n");
    }

    #[test]
    fn quarter_year_step_over_19_years_gives_77_rows() {
        let data = TimeSeries::from_points("x", [(1922, 1.0)]).unwrap();
        // 19-year-wide regime: 19 / 0.25 + 1 samples.
        let regime = RegimeSpec::new(1, 1922, 1941).unwrap();
        let plot = emit_plot_data(&data, &[(regime, params())], 0.25).unwrap();
        let rows = plot.fitted_csv.lines().count() - 1;
        assert_eq!(rows, 77);
    }

    #[test]
    fn integer_year_samples_match_eval_composite() {
        let data = TimeSeries::from_points("x", [(1922, 1.0)]).unwrap();
        let regime = RegimeSpec::new(1, 1922, 1940).unwrap();
        let p = params();
        let plot = emit_plot_data(&data, &[(regime, p)], 0.25).unwrap();
        let mut checked = 0;
        for line in plot.fitted_csv.lines().skip(1) {
            let mut fields = line.split(',');
            let t: f64 = fields.next().unwrap().parse().unwrap();
            let value: f64 = fields.next().unwrap().parse().unwrap();
            if t.fract() == 0.0 {
                let t_regime = t - regime.start_year as f64;
                let t_global = t - DRIFT_ORIGIN_YEAR as f64;
                let expect = eval_composite(&p, t_regime, t_global).unwrap();
                // The CSV value is rounded to two decimals.
                assert!((value - expect).abs() <= 0.005 + 1e-9, "t={t}: {value} vs {expect}");
                checked += 1;
            }
        }
        assert_eq!(checked, 19);
    }

    #[test]
    fn rejects_non_positive_step() {
        let data = TimeSeries::from_points("x", [(1920, 1.0)]).unwrap();
        assert!(emit_plot_data(&data, &[], 0.0).is_err());
    }
}
