//! Deterministic JSON and CSV renderings. Every float is rounded to 15
//! significant digits and printed in shortest round-trip form, so output is
//! byte-stable across runs and thread counts.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::Value;

use crate::bc::SecularScan;
use crate::scalar::Real;
use crate::spectra::{EigenClass, SpectrumWindow};

/// Rounds to 15 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

pub fn fmt_float(x: f64) -> String {
    let r = round_sig(x);
    // avoid "-0"
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            let x = num.as_f64().expect("f64 number");
            if let Some(rounded) = serde_json::Number::from_f64(round_sig(x)) {
                *num = rounded;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json<S: Serialize>(value: &S) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    let mut out = serde_json::to_string_pretty(&v)?;
    out.push('\n');
    Ok(out)
}

pub fn matrix_csv<T: Real>(m: &DMatrix<T>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|x| fmt_float(x.as_f64())).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Matrix as a JSON array of rows.
pub fn matrix_json<T: Real>(m: &DMatrix<T>) -> Vec<Vec<f64>> {
    m.row_iter()
        .map(|row| row.iter().map(|x| round_sig(x.as_f64())).collect())
        .collect()
}

fn class_name(c: EigenClass) -> &'static str {
    match c {
        EigenClass::Zero => "zero",
        EigenClass::Immanent => "immanent",
        EigenClass::SingularCosPlusOne => "singular_cos_plus_one",
        EigenClass::SingularCosMinusOne => "singular_cos_minus_one",
    }
}

pub fn window_csv<T: Real>(w: &SpectrumWindow<T>) -> String {
    let mut out = String::from("lambda,multiplicity,class,source_mu\n");
    for e in &w.entries {
        let mu = e.source_mu.map(|m| fmt_float(m.as_f64())).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_float(e.lambda.as_f64()),
            e.multiplicity,
            class_name(e.class),
            mu
        );
    }
    out
}

/// Plot table for the `±cos√λ` construction: one row per entry with
/// `cos√λ`, which lies in σ(Z) for CK and in `-σ(Z)` for KC.
pub fn plotdata_csv<T: Real>(w: &SpectrumWindow<T>) -> String {
    let mut out = String::from("lambda,cos_sqrt_lambda,condition,multiplicity\n");
    for e in &w.entries {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_float(e.lambda.as_f64()),
            fmt_float(e.sqrt_lambda().cos().as_f64()),
            w.condition,
            e.multiplicity
        );
    }
    out
}

pub fn scan_csv<T: Real>(scan: &SecularScan<T>) -> String {
    let mut out = String::from("lambda,multiplicity\n");
    for r in &scan.roots {
        let _ = writeln!(out, "{},{}", fmt_float(r.lambda.as_f64()), r.multiplicity);
    }
    out
}
