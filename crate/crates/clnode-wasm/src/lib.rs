//! Browser bindings for the nodal Cohen–Lenstra engine.
//!
//! Three interactive operations, each returning JSON for the static page
//! in `www/`:
//!
//! * [`h_curve`]: certified values of the entire factor `H(x;t)` and of
//!   the meromorphically continued local series `(xt;t)_inf^-2 H(x;t)`
//!   along a real interval (the latter reports gaps at its poles
//!   `x = t^-i`);
//! * [`theorem_check`]: runs the mutually annihilating matrix census in
//!   the browser and compares `|M_n| / |GL_n|` against the factorized
//!   generating function, exactly;
//! * [`valuation_pattern`]: the coefficient valuation/sign scan of
//!   `H(x;t)` against the `ceil(n^2/4)`, `(-1)^n` pattern.
//!
//! All arithmetic is the exact core: rationals in, certified balls out.
//! Everything runs single-threaded (worker count 1), which is the inline
//! path of the census driver.

use clnode_core::analytic::{
    coefficient_valuation_scan, eval_h, pochhammer_inf_ball, rational_to_f64,
};
use clnode_core::census::{
    census_mutually_annihilating, gl_order, AnnihilatingMode, CensusError, CensusOptions,
};
use clnode_core::qseries::{t_from_q, zhat_node_global_factored};
use clnode_core::serialize::parse_rational;
use num_rational::BigRational;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn opts() -> CensusOptions {
    CensusOptions {
        budget: 1 << 20,
        workers: 1,
    }
}

/// Sample `H(x;t)` and the continued local series on `[x_min, x_max]`.
/// `t` is a decimal string (exact rational); returns
/// `{t, points: [{x, h, h_err, zhat|null}]}`.
#[wasm_bindgen]
pub fn h_curve(t: &str, x_min: f64, x_max: f64, samples: u32, precision: u32) -> String {
    let Some(t) = parse_rational(t) else {
        return json!({"error": format!("cannot parse t = '{t}'")}).to_string();
    };
    if t <= BigRational::from_integer(0.into()) || t >= BigRational::from_integer(1.into()) {
        return json!({"error": "t must lie strictly between 0 and 1"}).to_string();
    }
    let samples = samples.clamp(2, 600);
    let precision = precision.clamp(64, 512);
    let mut points = Vec::with_capacity(samples as usize);
    for i in 0..samples {
        // rational grid point, denominator 10^4 keeps parsing exact
        let frac = x_min + (x_max - x_min) * (i as f64) / ((samples - 1) as f64);
        let x = BigRational::new(((frac * 10_000.0).round() as i64).into(), 10_000.into());
        let zero = BigRational::from_integer(0.into());
        let eval = match eval_h(&x, &zero, &t, precision, None) {
            Ok(e) => e,
            Err(e) => return json!({"error": e.to_string()}).to_string(),
        };
        // local series via the factorization; None at (or too near) a pole
        let zhat = pochhammer_inf_ball(&(&x * &t), &t, precision)
            .ok()
            .and_then(|p| p.mul(&p).recip_real())
            .map(|inv_sq| inv_sq.mul(&eval.value))
            .map(|b| b.re_f64());
        points.push(json!({
            "x": rational_to_f64(&x),
            "h": eval.value.re_f64(),
            "h_err": eval.value.rad_f64(),
            "zhat": zhat,
        }));
    }
    json!({
        "t": rational_to_f64(&t),
        "t_inverse": rational_to_f64(&t.recip()),
        "points": points,
    })
    .to_string()
}

/// Census-versus-series verifier: for each `n <= n_max`, count mutually
/// annihilating pairs over F_q, divide by `|GL_n|`, and compare with the
/// `x^n` coefficient of `(x;t)_inf^-2 H(x;t)`: exact rational equality.
#[wasm_bindgen]
pub fn theorem_check(n_max: u32, q: u32) -> String {
    let q8 = q as u8;
    let t = match t_from_q(q as u64) {
        Ok(t) => t,
        Err(e) => return json!({"error": e.to_string()}).to_string(),
    };
    if !clnode_core::fq::SUPPORTED_Q.contains(&q8) {
        return json!({"error": format!("q = {q} has no census tables (supported: 2,3,4,5,7,8,9)")})
            .to_string();
    }
    let n_max = n_max.min(5) as usize;
    let series = zhat_node_global_factored(n_max, &t);
    let opts = opts();
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let row = match census_mutually_annihilating(n, q8, AnnihilatingMode::Stratified, &opts) {
            Ok(count) => {
                let gl = gl_order(n, q8);
                let ratio = BigRational::new(
                    num_bigint_to_int(&count),
                    num_bigint_to_int(&gl),
                );
                let coeff = series.coeff(n);
                json!({
                    "n": n,
                    "census": count.to_string(),
                    "gl_order": gl.to_string(),
                    "ratio": format!("{}/{}", ratio.numer(), ratio.denom()),
                    "coefficient": format!("{}/{}", coeff.numer(), coeff.denom()),
                    "equal": &ratio == coeff,
                })
            }
            Err(CensusError::TooLarge { estimate, budget }) => json!({
                "n": n,
                "skipped": format!("{estimate} enumeration steps exceed the in-browser budget {budget}"),
            }),
            Err(e) => return json!({"error": e.to_string()}).to_string(),
        };
        rows.push(row);
    }
    json!({"q": q, "rows": rows}).to_string()
}

fn num_bigint_to_int(v: &num_bigint::BigUint) -> num_bigint::BigInt {
    num_bigint::BigInt::from(v.clone())
}

/// Valuation/sign scan of the `x^n` coefficients of `H(x;t)` against the
/// conjectured `ceil(n^2/4)` / `(-1)^n` pattern.
#[wasm_bindgen]
pub fn valuation_pattern(n_max: u32) -> String {
    let n_max = n_max.clamp(1, 24) as usize;
    let t_trunc = n_max * n_max / 4 + usize::from(n_max * n_max % 4 != 0) + 1;
    let rep = match coefficient_valuation_scan(n_max, t_trunc) {
        Ok(rep) => rep,
        Err(e) => return json!({"error": e.to_string()}).to_string(),
    };
    let rows: Vec<_> = rep
        .rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "valuation": r.valuation,
                "expected_valuation": r.expected_valuation,
                "sign": r.sign,
                "expected_sign": r.expected_sign,
                "matches": r.matches,
            })
        })
        .collect();
    json!({"all_match": rep.all_match, "rows": rows}).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_json_has_points_and_pole_behavior() {
        // 41 samples over [0, 2.5] puts index 32 exactly on the pole x = t^-1 = 2
        let v: serde_json::Value =
            serde_json::from_str(&h_curve("0.5", 0.0, 2.5, 41, 96)).unwrap();
        let points = v["points"].as_array().unwrap();
        assert_eq!(points.len(), 41);
        assert!((points[0]["h"].as_f64().unwrap() - 1.0).abs() < 1e-9);
        // H is entire and positive through the pole of the local series
        let at_pole = &points[32];
        assert_eq!(at_pole["x"].as_f64().unwrap(), 2.0);
        assert!(at_pole["h"].as_f64().unwrap() > 0.0);
        assert!(at_pole["zhat"].is_null(), "{at_pole}");
        // the double pole shows: the local series blows up on approach
        let mid = points[16]["zhat"].as_f64().unwrap();
        let near = points[31]["zhat"].as_f64().unwrap();
        assert!(near > 10.0 * mid, "mid {mid}, near {near}");
    }

    #[test]
    fn theorem_check_equalities_hold() {
        let v: serde_json::Value = serde_json::from_str(&theorem_check(3, 2)).unwrap();
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 4);
        for row in rows {
            assert_eq!(row["equal"], true, "{row}");
        }
        assert_eq!(rows[2]["census"], "40");
        assert_eq!(rows[2]["ratio"], "20/3");
    }

    #[test]
    fn theorem_check_rejects_bad_field() {
        let v: serde_json::Value = serde_json::from_str(&theorem_check(2, 6)).unwrap();
        assert!(v["error"].is_string());
    }

    #[test]
    fn valuation_pattern_matches_at_desk_scale() {
        let v: serde_json::Value = serde_json::from_str(&valuation_pattern(10)).unwrap();
        assert_eq!(v["all_match"], true);
        assert_eq!(v["rows"].as_array().unwrap().len(), 11);
    }
}
