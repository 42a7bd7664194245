//! Regime bookkeeping: the published three-regime partitions for income and
//! expenses, structural checks on interval widths and semi-period sums, and an
//! exhaustive boundary search that minimizes total fit SSE.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::fit::{multi_start_fit, FitConfig, FitResult};
use crate::model::CompositeModel;
use crate::series::TimeSeries;

/// One regime: a 1-based index with its closed year interval.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegimeSpec {
    /// 1-based regime number.
    pub index: usize,
    pub start_year: i32,
    /// Inclusive.
    pub end_year: i32,
    /// Suggested sinusoid semi-period in years, when one is published.
    #[cfg_attr(feature = "serde", serde(default))]
    pub semi_period_hint: Option<f64>,
}

impl RegimeSpec {
    pub fn new(index: usize, start_year: i32, end_year: i32) -> Result<Self, Error> {
        if start_year > end_year {
            return Err(Error::InvalidPartition("regime start year after end year"));
        }
        Ok(Self { index, start_year, end_year, semi_period_hint: None })
    }

    pub fn with_hint(mut self, semi_period: f64) -> Self {
        self.semi_period_hint = Some(semi_period);
        self
    }

    /// Interval width in years, `end_year - start_year`.
    pub fn width_years(&self) -> i32 {
        self.end_year - self.start_year
    }

    pub fn contains(&self, year: i32) -> bool {
        year >= self.start_year && year <= self.end_year
    }
}

/// Which published boundary convention a partition follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PartitionMode {
    /// Non-overlapping intervals.
    Income,
    /// Boundaries may overlap by at most one year.
    Expenses,
    /// Boundaries read off a chart; may overlap by at most one year.
    Visual,
    Custom,
}

/// An ordered cover of the data span by regimes.
///
/// Consecutive regimes may leave at most one missing year between them. In
/// income mode they must not overlap; in the other modes they may share at
/// most one boundary year.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Partition {
    regimes: Vec<RegimeSpec>,
    mode: PartitionMode,
}

impl Partition {
    pub fn new(regimes: Vec<RegimeSpec>, mode: PartitionMode) -> Result<Self, Error> {
        if regimes.is_empty() {
            return Err(Error::InvalidPartition("no regimes"));
        }
        for (pos, r) in regimes.iter().enumerate() {
            if r.start_year > r.end_year {
                return Err(Error::InvalidPartition("regime start year after end year"));
            }
            if r.index != pos + 1 {
                return Err(Error::InvalidPartition("regime indices must run 1, 2, ..."));
            }
        }
        for pair in regimes.windows(2) {
            let (prev, next) = (&pair[0], &pair[1]);
            if next.start_year <= prev.start_year {
                return Err(Error::InvalidPartition("regimes out of order"));
            }
            let earliest = match mode {
                PartitionMode::Income => prev.end_year + 1,
                _ => prev.end_year,
            };
            if next.start_year < earliest {
                return Err(Error::InvalidPartition("regimes overlap too far"));
            }
            if next.start_year > prev.end_year + 2 {
                return Err(Error::InvalidPartition("gap between regimes exceeds one year"));
            }
        }
        Ok(Self { regimes, mode })
    }

    pub fn regimes(&self) -> &[RegimeSpec] {
        &self.regimes
    }

    pub fn mode(&self) -> PartitionMode {
        self.mode
    }

    /// First regime containing `year`, if any. On overlapping boundaries the
    /// earlier regime owns the shared year.
    pub fn regime_containing(&self, year: i32) -> Option<&RegimeSpec> {
        self.regimes.iter().find(|r| r.contains(year))
    }

    /// `(first start year, last end year)`.
    pub fn span(&self) -> (i32, i32) {
        (self.regimes[0].start_year, self.regimes[self.regimes.len() - 1].end_year)
    }
}

/// Income partition with semi-period hints 19, 28, 37 (full periods 38, 56,
/// 74 years).
pub fn income_partition() -> Partition {
    Partition::new(
        vec![
            RegimeSpec::new(1, 1922, 1940).unwrap().with_hint(19.0),
            RegimeSpec::new(2, 1941, 1965).unwrap().with_hint(28.0),
            RegimeSpec::new(3, 1966, 2000).unwrap().with_hint(37.0),
        ],
        PartitionMode::Income,
    )
    .unwrap()
}

/// Expenses partition: the published tabulation only gives the overall
/// interval [1920; 2000] and per-regime windows of 38, 54, and 68 years
/// (hints are the windows halved). The exact expense boundaries were never
/// tabulated, only described as lying within a year of the income ones; the
/// first cut is placed at 1939/40 to match the published first interval
/// [1920-1939], the second keeps the income cut at 1965/66. With these cuts
/// the model stays non-negative on every regime for all four published
/// expense fits, which keeps the synthetic round trip exact.
pub fn expenses_partition() -> Partition {
    Partition::new(
        vec![
            RegimeSpec::new(1, 1920, 1939).unwrap().with_hint(19.0),
            RegimeSpec::new(2, 1940, 1965).unwrap().with_hint(27.0),
            RegimeSpec::new(3, 1966, 2000).unwrap().with_hint(34.0),
        ],
        PartitionMode::Expenses,
    )
    .unwrap()
}

/// Partition as read visually off the charts, with the widths following the
/// 10 + 9i progression (19, 28, 37 years) and one-year boundary overlaps.
pub fn visual_partition() -> Partition {
    Partition::new(
        vec![
            RegimeSpec::new(1, 1920, 1939).unwrap(),
            RegimeSpec::new(2, 1939, 1967).unwrap(),
            RegimeSpec::new(3, 1967, 2004).unwrap(),
        ],
        PartitionMode::Visual,
    )
    .unwrap()
}

/// One row of a width-progression report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgressionRow {
    pub index: usize,
    /// `10 + 9 * index` years.
    pub expected_width: i32,
    pub actual_width: i32,
}

impl ProgressionRow {
    pub fn matches(&self) -> bool {
        self.expected_width == self.actual_width
    }
}

/// Regime-width progression report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgressionReport {
    pub rows: Vec<ProgressionRow>,
}

impl ProgressionReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(ProgressionRow::matches)
    }
}

/// Compares each regime's width against the `10 + 9i` progression.
pub fn progression_check(partition: &Partition) -> ProgressionReport {
    let rows = partition
        .regimes()
        .iter()
        .map(|r| ProgressionRow {
            index: r.index,
            expected_width: 10 + 9 * r.index as i32,
            actual_width: r.width_years(),
        })
        .collect();
    ProgressionReport { rows }
}

/// Result of the semi-period sum identity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemiPeriodSumReport {
    pub window_sum: i32,
    pub doubled_span: i32,
}

impl SemiPeriodSumReport {
    pub fn matches(&self) -> bool {
        self.window_sum == self.doubled_span
    }
}

/// Checks that the per-regime windows sum to exactly twice the span
/// (the published expenses windows satisfy 38 + 54 + 68 = 2 * 80).
pub fn semiperiod_sum_check(windows: &[i32], span_years: i32) -> SemiPeriodSumReport {
    SemiPeriodSumReport {
        window_sum: windows.iter().sum(),
        doubled_span: 2 * span_years,
    }
}

/// Outcome of [`boundary_search`].
#[derive(Debug, Clone)]
pub struct BoundarySearch {
    pub partition: Partition,
    /// Winning fit per regime, in regime order.
    pub fits: Vec<FitResult>,
    pub total_sse: f64,
    /// Number of feasible boundary placements evaluated.
    pub candidates_scanned: usize,
}

/// Exhaustive scan over integer regime boundaries minimizing total SSE.
///
/// Every placement of `n_regimes` consecutive intervals over the data span is
/// evaluated at one-year granularity, with each interval at least `min_width`
/// years wide. Each interval is fitted independently with
/// [`multi_start_fit`]; per-interval fits are memoized, so the scan cost is
/// driven by the number of distinct intervals rather than placements. Ties in
/// total SSE go to the earliest first boundary, then the earliest second, and
/// so on. The drift clock stays at the global origin regardless of the
/// boundaries.
pub fn boundary_search(
    data: &TimeSeries,
    n_regimes: usize,
    min_width: i32,
    config: &FitConfig,
) -> Result<BoundarySearch, Error> {
    if n_regimes == 0 {
        return Err(Error::InvalidConfig("n_regimes must be at least 1"));
    }
    if min_width < 0 {
        return Err(Error::InvalidConfig("min_width must be non-negative"));
    }
    let (first, last) = match (data.first_year(), data.last_year()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::EmptyData),
    };
    let span = last - first;
    let n = n_regimes as i32;
    let required = n * min_width + (n - 1);
    if span < required {
        return Err(Error::InfeasiblePartition { span, required });
    }

    let mut search = Search {
        data,
        config,
        last,
        min_width,
        cache: BTreeMap::new(),
        best: None,
        scanned: 0,
    };
    let mut cuts = Vec::with_capacity(n_regimes - 1);
    search.visit(first, n_regimes, 0.0, &mut cuts);

    let (cuts, total_sse) = search.best.ok_or(Error::InfeasiblePartition { span, required })?;
    let mut regimes = Vec::with_capacity(n_regimes);
    let mut fits = Vec::with_capacity(n_regimes);
    let mut start = first;
    for (i, end) in cuts.iter().copied().chain(core::iter::once(last)).enumerate() {
        regimes.push(RegimeSpec { index: i + 1, start_year: start, end_year: end, semi_period_hint: None });
        fits.push(
            search.cache.get(&(start, end)).and_then(|f| f.clone()).expect("memoized fit"),
        );
        start = end + 1;
    }
    Ok(BoundarySearch {
        partition: Partition::new(regimes, PartitionMode::Custom)?,
        fits,
        total_sse,
        candidates_scanned: search.scanned,
    })
}

struct Search<'a> {
    data: &'a TimeSeries,
    config: &'a FitConfig,
    last: i32,
    min_width: i32,
    cache: BTreeMap<(i32, i32), Option<FitResult>>,
    /// Best `(interior end years, total SSE)` so far; strict improvement only,
    /// so lexicographic visit order makes ties resolve to the earliest cuts.
    best: Option<(Vec<i32>, f64)>,
    scanned: usize,
}

impl Search<'_> {
    fn segment_sse(&mut self, start: i32, end: i32) -> Option<f64> {
        if !self.cache.contains_key(&(start, end)) {
            let slice = self.data.slice_years(start, end);
            let fit = multi_start_fit(&CompositeModel::new(start), &slice, self.config)
                .ok()
                .map(|m| m.best().clone());
            self.cache.insert((start, end), fit);
        }
        self.cache[&(start, end)].as_ref().map(|f| f.sse)
    }

    fn visit(&mut self, start: i32, remaining: usize, acc_sse: f64, cuts: &mut Vec<i32>) {
        if remaining == 1 {
            if self.last - start < self.min_width {
                return;
            }
            if let Some(sse) = self.segment_sse(start, self.last) {
                self.scanned += 1;
                let total = acc_sse + sse;
                let better = match &self.best {
                    Some((_, best)) => total < *best,
                    None => true,
                };
                if better {
                    self.best = Some((cuts.clone(), total));
                }
            }
            return;
        }
        // Leave room for the remaining regimes after this one.
        let tail = (remaining as i32 - 1) * (self.min_width + 1);
        let mut end = start + self.min_width;
        while end + tail <= self.last {
            if let Some(sse) = self.segment_sse(start, end) {
                cuts.push(end);
                self.visit(end + 1, remaining - 1, acc_sse + sse, cuts);
                cuts.pop();
            }
            end += 1;
        }
    }
}
