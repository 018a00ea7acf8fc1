//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns a JSON string.
//! The same functions are callable from native Rust, which is how they are
//! tested.

use std::collections::BTreeMap;

use frobhom_core::curves::{count_points, default_r_max, make_curve, torsion_subgroup, EllipticCurve};
use frobhom_core::field::{make_extension_field, FieldElement};
use frobhom_core::homothety::{analyze_curve as analyze, default_ell_list, homothety_holds, Limits};
use frobhom_core::report::{CharpolyJson, PointCountJson, Report, TorsionJson, VerdictJson};
use frobhom_core::weil::roots::normalized_eigenvalues;
use frobhom_core::weil::{homothety_exponent, predicted_count, WeilPolynomial};
use num_bigint::BigInt;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Smaller than the CLI default so the page stays responsive.
pub const BROWSER_CAP: u64 = 200_000;

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| format!("{what}: {t:?} is not a number")))
        .collect()
}

fn parse_curve(p: u64, k: u32, coeffs: &str) -> Result<EllipticCurve, String> {
    let field = make_extension_field(p, k as usize, BROWSER_CAP).map_err(|e| e.to_string())?;
    let a: Vec<i64> = parse_list(coeffs, "coefficient")?;
    if a.len() != 5 {
        return Err(format!("need five coefficients a1,a2,a3,a4,a6, got {}", a.len()));
    }
    let elems = a
        .iter()
        .map(|&c| {
            if k == 1 {
                Ok(FieldElement::from_int(&field, c))
            } else if c < 0 {
                Err(format!("element index {c} is negative"))
            } else {
                FieldElement::from_index(&field, c as u64).map_err(|e| e.to_string())
            }
        })
        .collect::<Result<Vec<_>, String>>()?;
    let [a1, a2, a3, a4, a6]: [FieldElement; 5] = elems.try_into().expect("five coefficients");
    make_curve(a1, a2, a3, a4, a6).map_err(|e| e.to_string())
}

fn with_extras(report: &Report, extras: Value) -> String {
    let mut v = serde_json::to_value(report).expect("report serializes");
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extras) {
        map.extend(more);
    }
    v.to_string()
}

/// Verdict for a Weil polynomial, with approximate roots `alpha / sqrt(q)`
/// and the Newton polygon vertices for plotting.
pub fn weil_json(q: &str, coeffs: &str) -> Result<String, String> {
    let qb: BigInt = q.trim().parse().map_err(|_| format!("q: {q:?} is not an integer"))?;
    let cs: Vec<BigInt> = parse_list(coeffs, "coefficient")?;
    let weil = WeilPolynomial::new(cs, qb).map_err(|e| e.to_string())?;
    let verdict = homothety_exponent(&weil).map_err(|e| e.to_string())?;
    let mut input = BTreeMap::new();
    input.insert("command".to_string(), json!("analyze-weil"));
    input.insert("q".to_string(), json!(weil.q().to_string()));
    let mut report = Report::new(input);
    report.charpoly = Some(CharpolyJson::from_weil(&weil));
    report.verdict = Some(VerdictJson::from_verdict(&verdict));
    let roots: Vec<[f64; 2]> = normalized_eigenvalues(&weil).iter().map(|z| [z.re, z.im]).collect();
    let mut x = 0;
    let mut y = weil.q_exponent() as i64 * weil.degree() as i64 / 2;
    let mut polygon = vec![[x, y]];
    // left to right along (i, v_p(c_i)) the root valuations decrease
    for s in verdict.newton_slopes.iter().rev() {
        x += s.multiplicity as i64;
        let drop = s.value * s.multiplicity as i64 * weil.q_exponent() as i64;
        y -= drop.to_integer();
        polygon.push([x, y]);
    }
    Ok(with_extras(&report, json!({ "roots": roots, "newton_vertices": polygon, "display": weil.poly().to_string() })))
}

/// Counts, verdict and the torsion checks for a curve.
pub fn curve_json(p: u64, k: u32, coeffs: &str, ells: &str) -> Result<String, String> {
    let curve = parse_curve(p, k, coeffs)?;
    let limits = Limits { cap: BROWSER_CAP, r_max: None };
    let (n1, charpoly, verdict) = analyze(&curve, BROWSER_CAP).map_err(|e| e.to_string())?;
    let mut input = BTreeMap::new();
    input.insert("command".to_string(), json!("analyze-curve"));
    input.insert("curve".to_string(), json!(curve.to_string()));
    let mut report = Report::new(input);
    report.charpoly = Some(CharpolyJson::from_weil(&charpoly));
    report.verdict = Some(VerdictJson::from_verdict(&verdict));
    let mut counts =
        vec![PointCountJson { r: 1, count: n1.to_string(), predicted: predicted_count(&charpoly, 1).to_string() }];
    for r in 2..=4 {
        match count_points(&curve, r, BROWSER_CAP) {
            Ok(n) => counts.push(PointCountJson {
                r,
                count: n.to_string(),
                predicted: predicted_count(&charpoly, r).to_string(),
            }),
            Err(_) => break,
        }
    }
    report.point_counts = Some(counts);
    let mut skipped = Vec::new();
    if let Some(cert) = &verdict.certificate {
        let requested: Vec<u64> = parse_list(ells, "l")?;
        let list = if requested.is_empty() { default_ell_list(&curve, &charpoly, limits) } else { requested };
        let mut checks = Vec::new();
        for ell in list {
            match torsion_subgroup(&curve, ell, limits.r_max_for(ell), BROWSER_CAP) {
                Ok(sub) => checks.push(TorsionJson {
                    ell,
                    r: sub.r,
                    size: sub.points.len() as u64,
                    pass: homothety_holds(&sub, cert.m),
                }),
                Err(e) => skipped.push(json!({ "ell": ell, "why": e.to_string() })),
            }
        }
        report.torsion_checks = Some(checks);
    }
    Ok(with_extras(&report, json!({ "display": curve.to_string(), "skipped": skipped })))
}

/// `E[l]` point by point: each point, its Frobenius image, `sigma^{2m}(P)` and `[q^m] P`.
pub fn frobenius_table_json(p: u64, k: u32, coeffs: &str, ell: u64, m: u64) -> Result<String, String> {
    if m == 0 {
        return Err("m must be at least 1".into());
    }
    let curve = parse_curve(p, k, coeffs)?;
    let sub = torsion_subgroup(&curve, ell, default_r_max(ell), BROWSER_CAP).map_err(|e| e.to_string())?;
    let e = &sub.curve;
    let scalar = (0..m).fold(1, |acc, _| acc * curve.q() % ell) as i64;
    let rows: Vec<Value> = sub
        .points
        .iter()
        .map(|pt| {
            let lhs = e.frobenius(pt, 2 * m);
            let rhs = e.scalar_mul(scalar, pt);
            json!({
                "point": pt.to_string(),
                "sigma": e.frobenius(pt, 1).to_string(),
                "sigma_2m": lhs.to_string(),
                "scalar": rhs.to_string(),
                "equal": lhs == rhs,
            })
        })
        .collect();
    Ok(json!({
        "curve": curve.to_string(),
        "field": e.field().to_string(),
        "ell": ell,
        "r": sub.r,
        "m": m,
        "scalar": scalar,
        "rows": rows,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn analyze_weil(q: &str, coeffs: &str) -> Result<String, JsError> {
    weil_json(q, coeffs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze_curve(p: u32, k: u32, coeffs: &str, ells: &str) -> Result<String, JsError> {
    curve_json(p as u64, k, coeffs, ells).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn frobenius_table(p: u32, k: u32, coeffs: &str, ell: u32, m: u32) -> Result<String, JsError> {
    frobenius_table_json(p as u64, k, coeffs, ell as u64, m as u64).map_err(|e| JsError::new(&e))
}
