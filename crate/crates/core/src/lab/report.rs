//! Report CSV.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::sweep::{ScalingRecord, ScalingReport};

pub const REPORT_HEADER: &str =
    "L,area,perimeter,expected_count,variance,entropy,schatten_0.5,schatten_1,S_over_V,S_over_perimeter,V_over_perimeter";

/// Writes the report CSV. Every record is re-validated first; numbers use the
/// shortest representation that round-trips.
pub fn write_report<W: Write>(report: &ScalingReport, mut out: W) -> Result<()> {
    for r in &report.records {
        r.validate()?;
    }
    let io = |e: std::io::Error| Error::Report(format!("write failed: {e}"));
    writeln!(out, "{REPORT_HEADER}").map_err(io)?;
    for r in &report.records {
        let half = r.schatten(0.5).ok_or_else(|| Error::Report("record lacks schatten_0.5".into()))?;
        let one = r.schatten(1.0).ok_or_else(|| Error::Report("record lacks schatten_1".into()))?;
        let row = [
            r.l,
            r.area,
            r.perimeter,
            r.expected_count,
            r.variance,
            r.entropy,
            half,
            one,
            r.s_over_v,
            r.s_over_perimeter,
            r.v_over_perimeter,
        ];
        let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(out, "{}", line.join(",")).map_err(io)?;
    }
    Ok(())
}

pub fn emit_report(report: &ScalingReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_report(report, &mut buf)?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// Parses a report CSV back into records. Fits are recomputed with the
/// given area-law threshold.
pub fn parse_report(text: &str, spread_threshold: f64) -> Result<ScalingReport> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == REPORT_HEADER => {}
        _ => return Err(Error::Report("missing or unexpected header".into())),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Report(format!("line {}: {e}", idx + 1)))?;
        if v.len() != 11 {
            return Err(Error::Report(format!("line {}: expected 11 columns, got {}", idx + 1, v.len())));
        }
        records.push(ScalingRecord {
            l: v[0],
            area: v[1],
            perimeter: v[2],
            expected_count: v[3],
            variance: v[4],
            entropy: v[5],
            schatten: vec![(0.5, v[6]), (1.0, v[7])],
            s_over_v: v[8],
            s_over_perimeter: v[9],
            v_over_perimeter: v[10],
        });
    }
    Ok(ScalingReport::from_records(records, spread_threshold))
}

pub fn load_report(path: impl AsRef<Path>, spread_threshold: f64) -> Result<ScalingReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_report(&text, spread_threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(l: f64) -> ScalingRecord {
        let per = 2.0 * std::f64::consts::PI * l;
        let v = 0.1591 * per + 1.0 / 3.0;
        let s = 3.2 * v;
        ScalingRecord {
            l,
            area: std::f64::consts::PI * l * l,
            perimeter: per,
            expected_count: std::f64::consts::PI * l * l,
            variance: v,
            entropy: s,
            schatten: vec![(0.5, 1.1 * s), (1.0, v)],
            s_over_v: s / v,
            s_over_perimeter: s / per,
            v_over_perimeter: v / per,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let mut buf = Vec::new();
        write_report(&ScalingReport::default(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{REPORT_HEADER}\n"));
    }

    #[test]
    fn round_trip_is_exact() {
        let report = ScalingReport::from_records((1..=5).map(|l| record(l as f64 * 0.7)).collect(), 0.05);
        let mut buf = Vec::new();
        write_report(&report, &mut buf).unwrap();
        let back = parse_report(std::str::from_utf8(&buf).unwrap(), 0.05).unwrap();
        assert_eq!(back, report);
        let mut again = Vec::new();
        write_report(&back, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn invalid_record_is_refused() {
        let mut r = record(1.0);
        r.entropy = 0.1 * r.variance;
        let report = ScalingReport::from_records(vec![r], 0.05);
        assert!(matches!(write_report(&report, Vec::new()), Err(Error::Report(_))));
    }

    #[test]
    fn bad_input() {
        assert!(parse_report("L,area\n", 0.05).is_err());
        assert!(parse_report(&format!("{REPORT_HEADER}\n1,2,3\n"), 0.05).is_err());
    }
}
