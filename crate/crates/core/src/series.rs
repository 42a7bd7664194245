//! Yearly amounts in BEF with explicit missing-year support.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;

/// Currency tag carried by every series.
pub const UNIT: &str = "BEF";

/// One observed year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub year: i32,
    pub value: f64,
}

/// Ordered `(year, value)` pairs; absent years are missing data, not zeros.
///
/// Invariants: years strictly increasing, values finite and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    points: Vec<Point>,
    label: String,
}

impl TimeSeries {
    /// Builds a series from `(year, value)` pairs given in any order.
    ///
    /// Pairs are sorted by year; duplicate years and negative or non-finite
    /// values are rejected.
    pub fn from_points(
        label: impl Into<String>,
        pairs: impl IntoIterator<Item = (i32, f64)>,
    ) -> Result<Self, Error> {
        let mut points: Vec<Point> = pairs
            .into_iter()
            .map(|(year, value)| Point { year, value })
            .collect();
        points.sort_by_key(|p| p.year);
        for pair in points.windows(2) {
            if pair[0].year == pair[1].year {
                return Err(Error::DuplicateYear { year: pair[0].year });
            }
        }
        for p in &points {
            if !p.value.is_finite() || p.value < 0.0 {
                return Err(Error::InvalidValue { year: p.year });
            }
        }
        Ok(Self { points, label: label.into() })
    }

    /// Replaces the label, keeping the data.
    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn unit(&self) -> &'static str {
        UNIT
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first_year(&self) -> Option<i32> {
        self.points.first().map(|p| p.year)
    }

    pub fn last_year(&self) -> Option<i32> {
        self.points.last().map(|p| p.year)
    }

    pub fn value_at(&self, year: i32) -> Option<f64> {
        self.points
            .binary_search_by_key(&year, |p| p.year)
            .ok()
            .map(|i| self.points[i].value)
    }

    /// Sub-series of the years inside `[start_year, end_year]`.
    pub fn slice_years(&self, start_year: i32, end_year: i32) -> TimeSeries {
        let points = self
            .points
            .iter()
            .filter(|p| p.year >= start_year && p.year <= end_year)
            .copied()
            .collect();
        TimeSeries { points, label: self.label.clone() }
    }

    pub fn max_value(&self) -> Option<f64> {
        self.points.iter().map(|p| p.value).fold(None, |acc, v| {
            Some(match acc {
                Some(m) if m >= v => m,
                _ => v,
            })
        })
    }
}
