//! Canonical CSV format: header `year,value`, UTF-8, LF line endings,
//! `#` comment lines, amounts printed with at most two decimals.

use std::fs;
use std::path::Path;

use regimefit_core::TimeSeries;

use crate::error::CliError;

/// Formats a BEF amount with at most two decimals and no trailing zeros.
pub fn format_bef(value: f64) -> String {
    let s = format!("{value:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Renders a series in the canonical format. Writing, re-reading, and
/// writing again is byte-stable.
pub fn format_csv(series: &TimeSeries) -> String {
    let mut out = String::from("year,value\n");
    for p in series.points() {
        out.push_str(&format!("{},{}\n", p.year, format_bef(p.value)));
    }
    out
}

/// Parses the canonical format. `origin` only labels error messages.
pub fn parse_csv(text: &str, origin: &str, label: &str) -> Result<TimeSeries, CliError> {
    let fail = |line: usize, message: String| CliError::Csv {
        path: origin.to_string(),
        line,
        message,
    };
    let mut pairs: Vec<(i32, f64)> = Vec::new();
    let mut header_seen = false;
    let mut last_year: Option<i32> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != "year,value" {
                return Err(fail(line_no, "expected header `year,value`".into()));
            }
            header_seen = true;
            continue;
        }
        let mut fields = line.split(',');
        let (year_text, value_text) = match (fields.next(), fields.next(), fields.next()) {
            (Some(y), Some(v), None) => (y.trim(), v.trim()),
            _ => return Err(fail(line_no, "expected exactly two fields".into())),
        };
        let year: i32 = year_text
            .parse()
            .map_err(|_| fail(line_no, format!("invalid year `{year_text}`")))?;
        let value: f64 = value_text
            .parse()
            .map_err(|_| fail(line_no, format!("invalid value `{value_text}`")))?;
        if !value.is_finite() {
            return Err(fail(line_no, format!("non-finite value `{value_text}`")));
        }
        if value < 0.0 {
            return Err(fail(line_no, format!("negative value `{value_text}`")));
        }
        match last_year {
            Some(prev) if year == prev => {
                return Err(fail(line_no, format!("duplicate year {year}")));
            }
            Some(prev) if year < prev => {
                return Err(fail(
                    line_no,
                    format!("years must be strictly increasing ({year} after {prev})"),
                ));
            }
            _ => {}
        }
        last_year = Some(year);
        pairs.push((year, value));
    }
    if !header_seen {
        return Err(fail(1, "missing header `year,value`".into()));
    }
    Ok(TimeSeries::from_points(label, pairs)?)
}

/// Loads a series, labeling it by the file stem.
pub fn load_csv(path: &Path) -> Result<TimeSeries, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("series");
    parse_csv(&text, &path.display().to_string(), label)
}

/// Writes `contents` to `path` via a temp-file-and-rename in the same
/// directory, so readers never observe a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn write_csv(path: &Path, series: &TimeSeries) -> Result<(), CliError> {
    write_atomic(path, &format_csv(series))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_point_file() {
        let s = parse_csv("year,value\n1922,150000\n1923,180000\n", "mem", "x").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.value_at(1922), Some(150000.0));
        assert_eq!(s.value_at(1923), Some(180000.0));
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let text = "# provenance: synthetic\n\nyear,value\n# interior note\n1922,1.5\n";
        let s = parse_csv(text, "mem", "x").unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn duplicate_year_names_line() {
        let err = parse_csv("year,value\n1923,1\n1923,2\n", "mem", "x").unwrap_err();
        match err {
            CliError::Csv { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("duplicate year 1923"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_order_years_rejected() {
        let err = parse_csv("year,value\n1930,1\n1920,2\n", "mem", "x").unwrap_err();
        match err {
            CliError::Csv { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_value_names_line() {
        let err = parse_csv("year,value\n1920,abc\n", "mem", "x").unwrap_err();
        match err {
            CliError::Csv { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("invalid value"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_finite_value_rejected() {
        assert!(parse_csv("year,value\n1920,NaN\n", "mem", "x").is_err());
        assert!(parse_csv("year,value\n1920,inf\n", "mem", "x").is_err());
    }

    #[test]
    fn bef_formatting_truncates_trailing_zeros() {
        assert_eq!(format_bef(150000.0), "150000");
        assert_eq!(format_bef(0.5), "0.5");
        assert_eq!(format_bef(1234.567), "1234.57");
        assert_eq!(format_bef(2.25), "2.25");
    }

    #[test]
    fn format_parse_format_is_byte_stable() {
        let series = TimeSeries::from_points(
            "x",
            [(1920, 1.0), (1921, 1234.567), (1922, 0.125), (1930, 99999.999)],
        )
        .unwrap();
        let once = format_csv(&series);
        let reparsed = parse_csv(&once, "mem", "x").unwrap();
        let twice = format_csv(&reparsed);
        assert_eq!(once, twice);
    }
}
