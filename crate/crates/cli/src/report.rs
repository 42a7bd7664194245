//! Machine-readable fit/segment reports and their text-table rendering.
//!
//! The JSON document keeps full precision; the text table rounds financial
//! amounts to whole BEF and years to whole numbers for display only.

use regimefit_core::{
    BoundarySearch, CompositeParams, FitConfig, PartitionMode, RegimeFit, TimeSeries,
};
use serde::{Deserialize, Serialize};

/// Configuration echo so a report is reproducible from itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub sse_equivalence: f64,
    pub integer_polish: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidateReport {
    pub start_index: usize,
    pub sse: f64,
    pub rmse: f64,
    pub converged: bool,
    pub equivalent: bool,
    pub params: CompositeParams,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegimeReport {
    pub index: usize,
    pub start_year: i32,
    pub end_year: i32,
    pub n_points: usize,
    pub params: CompositeParams,
    pub sse: f64,
    pub rmse: f64,
    pub converged: bool,
    pub iterations: usize,
    pub start_index: usize,
    pub equivalent_count: usize,
    pub candidates: Vec<CandidateReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Totals {
    pub sse: f64,
    pub rmse: f64,
    pub n_points: usize,
    pub all_converged: bool,
}

/// One `fit` run: config echo, per-regime parameters and diagnostics, and
/// the ranked candidate list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub tool: String,
    pub input: String,
    pub label: String,
    pub unit: String,
    pub model: String,
    pub partition_mode: String,
    pub config: ConfigEcho,
    pub regimes: Vec<RegimeReport>,
    pub totals: Totals,
}

fn mode_name(mode: PartitionMode) -> &'static str {
    match mode {
        PartitionMode::Income => "income",
        PartitionMode::Expenses => "expenses",
        PartitionMode::Visual => "visual",
        PartitionMode::Custom => "custom",
    }
}

impl FitReport {
    pub fn build(
        input: &str,
        data: &TimeSeries,
        mode: PartitionMode,
        config: &FitConfig,
        polish: bool,
        fits: &[RegimeFit],
    ) -> Self {
        let regimes: Vec<RegimeReport> = fits
            .iter()
            .map(|f| {
                let threshold = f.candidates[0].sse * (1.0 + config.sse_equivalence);
                RegimeReport {
                    index: f.regime.index,
                    start_year: f.regime.start_year,
                    end_year: f.regime.end_year,
                    n_points: f.result.n_points,
                    params: CompositeParams::from_slice(&f.result.params),
                    sse: f.result.sse,
                    rmse: f.result.rmse,
                    converged: f.result.converged,
                    iterations: f.result.iterations,
                    start_index: f.result.start_index,
                    equivalent_count: f.equivalent_count,
                    candidates: f
                        .candidates
                        .iter()
                        .map(|c| CandidateReport {
                            start_index: c.start_index,
                            sse: c.sse,
                            rmse: c.rmse,
                            converged: c.converged,
                            equivalent: c.sse <= threshold,
                            params: CompositeParams::from_slice(&c.params),
                        })
                        .collect(),
                }
            })
            .collect();
        let sse: f64 = regimes.iter().map(|r| r.sse).sum();
        let n_points: usize = regimes.iter().map(|r| r.n_points).sum();
        let totals = Totals {
            sse,
            rmse: (sse / n_points.max(1) as f64).sqrt(),
            n_points,
            all_converged: regimes.iter().all(|r| r.converged),
        };
        FitReport {
            tool: "regimefit fit".into(),
            input: input.into(),
            label: data.label().into(),
            unit: data.unit().into(),
            model: "composite".into(),
            partition_mode: mode_name(mode).into(),
            config: ConfigEcho {
                starts: config.n_starts,
                seed: config.rng_seed,
                max_iterations: config.max_iterations,
                sse_equivalence: config.sse_equivalence,
                integer_polish: polish,
            },
            regimes,
            totals,
        }
    }

    /// Text table mirroring the published parameter-table layout. Financial
    /// amounts are rounded to whole BEF for display only.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "fit of {} [{}], partition {}, {} starts, seed {}{}\n",
            self.label,
            self.unit,
            self.partition_mode,
            self.config.starts,
            self.config.seed,
            if self.config.integer_polish { ", integer polish" } else { "" },
        ));
        out.push_str(
            "regime  interval     A         alpha   2T    phi     B         b        rmse      conv  equiv\n",
        );
        for r in &self.regimes {
            let p = &r.params;
            out.push_str(&format!(
                "{:<7} [{};{}]  {:<9} {:<7.3} {:<5} {:<7.3} {:<9} {:<8} {:<9} {:<5} {}\n",
                r.index,
                r.start_year,
                r.end_year,
                p.amplitude.round() as i64,
                p.growth_rate,
                (2.0 * p.semi_period).round() as i64,
                p.phase,
                p.drift_offset.round() as i64,
                p.drift_slope.round() as i64,
                r.rmse.round() as i64,
                if r.converged { "yes" } else { "no" },
                r.equivalent_count,
            ));
        }
        out.push_str(&format!(
            "total: sse {:.6e}, rmse {}, points {}, converged: {}\n",
            self.totals.sse,
            self.totals.rmse.round() as i64,
            self.totals.n_points,
            if self.totals.all_converged { "yes" } else { "no" },
        ));
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentConfigEcho {
    pub n_regimes: usize,
    pub min_width: i32,
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentRegimeReport {
    pub index: usize,
    pub start_year: i32,
    pub end_year: i32,
    pub params: CompositeParams,
    pub sse: f64,
    pub rmse: f64,
    pub converged: bool,
}

/// One `segment` run: the winning boundaries with their per-regime fits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentReport {
    pub tool: String,
    pub input: String,
    pub config: SegmentConfigEcho,
    /// Interior cut years (end of each regime but the last).
    pub boundaries: Vec<i32>,
    pub regimes: Vec<SegmentRegimeReport>,
    pub total_sse: f64,
    pub candidates_scanned: usize,
}

impl SegmentReport {
    pub fn build(
        input: &str,
        config: &FitConfig,
        n_regimes: usize,
        min_width: i32,
        search: &BoundarySearch,
    ) -> Self {
        let regimes: Vec<SegmentRegimeReport> = search
            .partition
            .regimes()
            .iter()
            .zip(&search.fits)
            .map(|(r, f)| SegmentRegimeReport {
                index: r.index,
                start_year: r.start_year,
                end_year: r.end_year,
                params: CompositeParams::from_slice(&f.params),
                sse: f.sse,
                rmse: f.rmse,
                converged: f.converged,
            })
            .collect();
        let boundaries = regimes[..regimes.len() - 1].iter().map(|r| r.end_year).collect();
        SegmentReport {
            tool: "regimefit segment".into(),
            input: input.into(),
            config: SegmentConfigEcho {
                n_regimes,
                min_width,
                starts: config.n_starts,
                seed: config.rng_seed,
                max_iterations: config.max_iterations,
            },
            boundaries,
            regimes,
            total_sse: search.total_sse,
            candidates_scanned: search.candidates_scanned,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "boundary search on {}: {} regimes, min width {}, {} candidates scanned\n",
            self.input, self.config.n_regimes, self.config.min_width, self.candidates_scanned,
        ));
        out.push_str(&format!("interior boundaries: {:?}\n", self.boundaries));
        for r in &self.regimes {
            out.push_str(&format!(
                "regime {} [{};{}]: alpha {:.3}, 2T {}, rmse {}, converged {}\n",
                r.index,
                r.start_year,
                r.end_year,
                r.params.growth_rate,
                (2.0 * r.params.semi_period).round() as i64,
                r.rmse.round() as i64,
                if r.converged { "yes" } else { "no" },
            ));
        }
        out.push_str(&format!("total sse {:.6e}\n", self.total_sse));
        out
    }
}
