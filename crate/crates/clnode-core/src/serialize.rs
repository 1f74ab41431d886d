//! External formats: JSON and CSV renderings of series, censuses, and
//! certificates.
//!
//! Exact integers serialize as decimal strings so no consumer ever
//! overflows parsing them; rationals appear as `[num, den]` string pairs
//! inside series artifacts and as `{"num": ..., "den": ...}` objects
//! elsewhere. Struct fields serialize in declaration order and nothing
//! volatile (wall time) enters an artifact, so identical runs produce
//! byte-identical files.

use crate::census::CensusResult;
use crate::qseries::TruncSeries;
use crate::scalar::TSeries;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

fn rational_pair(r: &BigRational) -> Value {
    json!([r.numer().to_string(), r.denom().to_string()])
}

#[derive(Serialize)]
struct SeriesJson<'a> {
    mode: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    t_order: Option<usize>,
    #[serde(rename = "N")]
    n_order: usize,
    coeffs: Value,
}

/// Numeric-mode series: `coeffs` is a list of `[num, den]` string pairs.
pub fn series_json_numeric(q: u64, series: &TruncSeries<BigRational>) -> String {
    let coeffs: Vec<Value> = series.coeffs().iter().map(rational_pair).collect();
    serde_json::to_string_pretty(&SeriesJson {
        mode: "numeric",
        q: Some(q),
        t_order: None,
        n_order: series.order(),
        coeffs: Value::Array(coeffs),
    })
    .expect("series serialization cannot fail")
}

/// Symbolic-mode series: `coeffs` is a list (per x-degree) of lists
/// (per t-degree) of `[num, den]` string pairs.
pub fn series_json_symbolic(series: &TruncSeries<TSeries>) -> String {
    let t_order = series.coeff(0).trunc_order();
    let coeffs: Vec<Value> = series
        .coeffs()
        .iter()
        .map(|c| Value::Array(c.coeffs().iter().map(rational_pair).collect()))
        .collect();
    serde_json::to_string_pretty(&SeriesJson {
        mode: "symbolic",
        q: None,
        t_order: Some(t_order),
        n_order: series.order(),
        coeffs: Value::Array(coeffs),
    })
    .expect("series serialization cannot fail")
}

/// CSV of a numeric series: `n,numerator,denominator`.
pub fn series_csv_numeric(series: &TruncSeries<BigRational>) -> String {
    let mut out = String::from("n,numerator,denominator\n");
    for (n, c) in series.coeffs().iter().enumerate() {
        out.push_str(&format!("{n},{},{}\n", c.numer(), c.denom()));
    }
    out
}

/// CSV of a symbolic series in long form: `n,t_degree,numerator,denominator`.
pub fn series_csv_symbolic(series: &TruncSeries<TSeries>) -> String {
    let mut out = String::from("n,t_degree,numerator,denominator\n");
    for (n, c) in series.coeffs().iter().enumerate() {
        for (d, v) in c.coeffs().iter().enumerate() {
            out.push_str(&format!("{n},{d},{},{}\n", v.numer(), v.denom()));
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct CensusJson {
    op: String,
    q: u8,
    oracle: String,
    counts: Vec<CountRow>,
}

#[derive(Serialize, Deserialize)]
struct CountRow {
    n: usize,
    count: String,
}

/// Census artifact; counts as decimal strings, wall time deliberately
/// excluded (it would break byte-identical reruns).
pub fn census_json(result: &CensusResult) -> String {
    let rows = result
        .counts
        .iter()
        .enumerate()
        .map(|(n, c)| CountRow {
            n,
            count: c.to_string(),
        })
        .collect();
    serde_json::to_string_pretty(&CensusJson {
        op: result.op.clone(),
        q: result.q,
        oracle: result.oracle.clone(),
        counts: rows,
    })
    .expect("census serialization cannot fail")
}

/// One cache record: a single count keyed by operation, dimension, field
/// and presentation hash.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct CacheEntry {
    pub op: String,
    pub q: u8,
    pub n: usize,
    pub presentation_hash: String,
    pub oracle: String,
    pub count: String,
}

impl CacheEntry {
    pub fn file_name(op: &str, q: u8, n: usize, hash: u64) -> String {
        format!("{op}-q{q}-n{n}-{hash:016x}.json")
    }
}

/// Reads a cached count if present and well-formed.
pub fn cache_load(dir: &std::path::Path, name: &str) -> Option<CacheEntry> {
    let path = dir.join(name);
    let data = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&data).ok()
}

/// Writes a cache record; errors are reported, not fatal.
pub fn cache_store(dir: &std::path::Path, name: &str, entry: &CacheEntry) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(path, serde_json::to_string_pretty(entry).expect("cache entry"))
}

/// Certificate as pretty JSON (fixed field order from the struct).
pub fn certificate_json(cert: &crate::report::Certificate) -> String {
    serde_json::to_string_pretty(cert).expect("certificate serialization cannot fail")
}

/// Parse a rational from decimal (`0.25`, `-3`, `1e-10`) or fraction
/// (`3/4`) notation.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    use num_bigint::BigInt;
    use num_traits::Pow;
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let n: BigInt = if joined.is_empty() {
        BigInt::from(0)
    } else {
        joined.parse().ok()?
    };
    let scale = frac_part.len() as i64 - exp;
    let ten = BigInt::from(10u8);
    let value = if scale >= 0 {
        BigRational::new(n, Pow::pow(ten, scale as u64))
    } else {
        BigRational::from_integer(n * Pow::pow(ten, (-scale) as u64))
    };
    Some(if sign < 0 { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::zhat_node_global;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn numeric_series_json_shape() {
        let t = rat(1, 2);
        let s = zhat_node_global(2, &t);
        let j = series_json_numeric(2, &s);
        let v: Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["mode"], "numeric");
        assert_eq!(v["q"], 2);
        assert_eq!(v["N"], 2);
        assert_eq!(v["coeffs"][2][0], "20");
        assert_eq!(v["coeffs"][2][1], "3");
        // byte identical on rerun
        assert_eq!(j, series_json_numeric(2, &s));
    }

    #[test]
    fn symbolic_series_json_shape() {
        let t = TSeries::t(3);
        let s = zhat_node_global(1, &t);
        let j = series_json_symbolic(&s);
        let v: Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["mode"], "symbolic");
        assert_eq!(v["T"], 3);
        assert_eq!(v["coeffs"][0][0][0], "1");
    }

    #[test]
    fn csv_shapes() {
        let t = rat(1, 2);
        let s = zhat_node_global(2, &t);
        let csv = series_csv_numeric(&s);
        assert!(csv.starts_with("n,numerator,denominator\n"));
        assert!(csv.contains("2,20,3"));
        let ts = TSeries::t(2);
        let ss = zhat_node_global(1, &ts);
        let csv = series_csv_symbolic(&ss);
        assert!(csv.contains("1,1,1,1")); // x^1 t^1 coefficient 1
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("-1.25"), Some(rat(-5, 4)));
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("1e-3"), Some(rat(1, 1000)));
        assert_eq!(parse_rational("2.5e2"), Some(rat(250, 1)));
        assert_eq!(parse_rational("-1e2"), Some(rat(-100, 1)));
        assert!(parse_rational("abc").is_none());
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn cache_roundtrip() {
        let dir = std::env::temp_dir().join("clnode-cache-test");
        let entry = CacheEntry {
            op: "annihilating".into(),
            q: 2,
            n: 2,
            presentation_hash: "0".into(),
            oracle: "stratified".into(),
            count: "40".into(),
        };
        let name = CacheEntry::file_name("annihilating", 2, 2, 0);
        cache_store(&dir, &name, &entry).unwrap();
        assert_eq!(cache_load(&dir, &name), Some(entry));
        std::fs::remove_dir_all(&dir).ok();
    }
}
