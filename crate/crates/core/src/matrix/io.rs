//! Matrix file formats.
//!
//! JSON: `{"n": N, "entries": [[[re, im], ...], ...], "rho": 1.0}` where
//! `rho` is optional and a bare number is accepted for a real entry.
//! CSV: `N` rows of `N` comma-separated reals. Rows and columns in
//! diagnostics are 0-based.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

use super::{HermMatrix, RatMatrix};

#[derive(Deserialize)]
struct RawFile {
    n: usize,
    entries: Vec<Vec<Value>>,
    #[serde(default)]
    rho: Option<f64>,
}

#[derive(Serialize)]
struct OutFile {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
}

fn entry_error(row: usize, col: usize, what: &str) -> Error {
    Error::Parse(format!("row {row}, column {col}: {what}"))
}

fn parse_entry(v: &Value, row: usize, col: usize) -> Result<Complex64> {
    let num = |x: &Value| {
        x.as_f64()
            .ok_or_else(|| entry_error(row, col, &format!("expected a number, found {x}")))
    };
    match v {
        Value::Number(_) => Ok(Complex64::new(num(v)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(num(&pair[0])?, num(&pair[1])?)),
        other => Err(entry_error(
            row,
            col,
            &format!("expected [re, im] or a number, found {other}"),
        )),
    }
}

fn check_shape(n: usize, rows: &[Vec<Value>]) -> Result<()> {
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!(
            "row {i}: expected {n} columns, found {}",
            r.len()
        )));
    }
    Ok(())
}

/// Parses the JSON matrix format, attaching `rho` when present.
pub fn parse_json(text: &str) -> Result<HermMatrix> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_shape(raw.n, &raw.entries)?;
    let mut rows = Vec::with_capacity(raw.n);
    for (i, r) in raw.entries.iter().enumerate() {
        rows.push(
            r.iter()
                .enumerate()
                .map(|(j, v)| parse_entry(v, i, j))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let m = HermMatrix::from_rows(&rows)?;
    match raw.rho {
        Some(rho) => m.with_radius(rho),
        None => Ok(m),
    }
}

/// Serializes to the JSON format. `f64` values round-trip bit-exactly.
pub fn to_json(m: &HermMatrix) -> String {
    serde_json::to_string(&to_json_value(m)).expect("finite matrix serializes")
}

pub fn to_json_value(m: &HermMatrix) -> Value {
    let n = m.dim();
    let out = OutFile {
        n,
        entries: (0..n)
            .map(|i| (0..n).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
            .collect(),
        rho: m.radius(),
    };
    serde_json::to_value(out).expect("finite matrix serializes")
}

/// Parses `N` rows of `N` comma-separated reals.
pub fn parse_csv(text: &str) -> Result<HermMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("row {i}: {e}")))?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field
                    .parse::<f64>()
                    .map_err(|_| entry_error(i, j, &format!("not a real number: {field:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::Parse("empty CSV matrix".into()));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!(
            "row {i}: expected {n} columns, found {}",
            r.len()
        )));
    }
    HermMatrix::from_real_rows(&rows)
}

/// JSON when the text starts with `{`, CSV otherwise.
pub fn parse_matrix(text: &str) -> Result<HermMatrix> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

pub fn read_matrix(path: &Path) -> Result<HermMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Exact reading of a real matrix: every number is taken as the decimal
/// it prints as, so `0.1` becomes `1/10`.
pub fn to_rational(m: &HermMatrix) -> Result<RatMatrix> {
    if !m.is_real() {
        return Err(Error::InvalidArgument(
            "exact mode needs a real symmetric matrix".into(),
        ));
    }
    let n = m.dim();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        rows.push(
            (0..n)
                .map(|j| decimal_rational(m.get(i, j).re))
                .collect::<Result<Vec<Rational>>>()?,
        );
    }
    let r = RatMatrix::from_rows(rows)?;
    if !r.is_symmetric() {
        return Err(Error::NonHermitianInput { deviation: 0.0 });
    }
    Ok(r)
}

/// The shortest decimal that round-trips to `x`, read exactly.
pub fn decimal_rational(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite value {x}")));
    }
    parse_rational(&format!("{x:e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn json_round_trip_is_bit_exact() {
        let m = HermMatrix::from_fn(3, |i, j| {
            let (lo, hi) = (i.min(j) as f64, i.max(j) as f64);
            let re = (lo + 1.0).sqrt() * (hi + 0.1).ln();
            let im = if i == j { 0.0 } else { (j as f64 - i as f64) / 3.0 };
            Complex64::new(re, im)
        })
        .unwrap();
        let back = parse_json(&to_json(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_diagnostics_name_the_entry() {
        let text = r#"{"n": 2, "entries": [[1, [0, 1]], [[0, -1], "x"]]}"#;
        let err = parse_json(text).unwrap_err().to_string();
        assert!(err.contains("row 1, column 1"), "{err}");
        let short = r#"{"n": 2, "entries": [[1, 0], [0]]}"#;
        assert!(parse_json(short).unwrap_err().to_string().contains("row 1"));
    }

    #[test]
    fn json_radius() {
        let text = r#"{"n": 1, "entries": [[[2, 0]]], "rho": 1}"#;
        assert!(matches!(parse_json(text), Err(Error::RadiusExceeded { .. })));
        let ok = r#"{"n": 1, "entries": [[[1, 0]]], "rho": 1}"#;
        assert_eq!(parse_json(ok).unwrap().radius(), Some(1.0));
    }

    #[test]
    fn csv_parsing() {
        let m = parse_matrix("1, 0.5\n0.5, 1\n").unwrap();
        assert_eq!(m.get(0, 1).re, 0.5);
        let err = parse_csv("1,2\n2,abc\n").unwrap_err().to_string();
        assert!(err.contains("row 1, column 1"), "{err}");
        let err = parse_csv("1,2\n2\n").unwrap_err().to_string();
        assert!(err.contains("row 1"), "{err}");
    }

    #[test]
    fn exact_reading_uses_decimals() {
        let m = parse_csv("0.1,0.2\n0.2,1\n").unwrap();
        let r = to_rational(&m).unwrap();
        assert_eq!(r.get(0, 0), &ratio(1, 10));
        assert_eq!(decimal_rational(-0.0526).unwrap(), ratio(-263, 5000));
    }
}
