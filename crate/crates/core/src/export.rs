//! Deterministic plot-ready output: CSV with a `t` or grid column and JSON
//! for structured results. All floating-point values are printed with 12
//! significant digits so identical inputs yield identical bytes.

use std::fmt::Write as _;

use crate::determinacy::RegimeMap;
use crate::error::Result;
use crate::simulate::{IrfSeries, LossReport, SweepPoint};

/// Formats with 12 significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        // Normalize the sign of zero so -0.0 and 0.0 print identically.
        return "0.00000000000e0".to_string();
    }
    format!("{:.11e}", x)
}

/// CSV for an impulse response: `t` column then one column per series.
pub fn irf_csv(irf: &IrfSeries) -> String {
    let mut out = String::new();
    out.push('t');
    for (name, _) in &irf.columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for t in 0..irf.horizon {
        let _ = write!(out, "{t}");
        for (_, path) in &irf.columns {
            out.push(',');
            out.push_str(&fmt_sig(path[t]));
        }
        out.push('\n');
    }
    out
}

/// CSV for a welfare sweep: coefficient, gamma, the three components, and
/// the total. Gap points (cut-off or non-determinate) leave the loss cells
/// empty and carry the verdict.
pub fn sweep_csv(coef_name: &str, points: &[SweepPoint]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{coef_name},gamma,L_pi,L_x,L_R,L_total,verdict");
    for p in points {
        out.push_str(&fmt_sig(p.coef));
        out.push(',');
        if let Some(g) = p.gamma {
            out.push_str(&fmt_sig(g));
        }
        match &p.loss {
            Some(l) => {
                let _ = write!(
                    out,
                    ",{},{},{},{}",
                    fmt_sig(l.l_pi),
                    fmt_sig(l.l_x),
                    fmt_sig(l.l_r),
                    fmt_sig(l.l_total)
                );
            }
            None => out.push_str(",,,,"),
        }
        let _ = writeln!(out, ",{}", p.verdict);
    }
    out
}

/// Rounds to 12 significant digits, so JSON numbers match the CSV precision.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let exponent = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - exponent);
    (x * scale).round() / scale
}

/// Serializes any value as pretty JSON with every number carried at 12
/// significant digits.
pub fn to_json_12<T: serde::Serialize>(value: &T) -> String {
    let mut doc = serde_json::to_value(value).expect("value serializes");
    round_json(&mut doc);
    serde_json::to_string_pretty(&doc).expect("rounded value serializes")
}

fn round_json(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(x) = n.as_f64() {
                if n.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(round_sig(x)) {
                        *n = rounded;
                    }
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// JSON for a loss report.
pub fn loss_json(loss: &LossReport) -> Result<String> {
    Ok(to_json_12(loss))
}

/// JSON for a regime map.
pub fn regime_map_json(map: &RegimeMap) -> Result<String> {
    Ok(to_json_12(map))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(1.0), "1.00000000000e0");
        assert_eq!(fmt_sig(-0.005864928909952608), "-5.86492890995e-3");
        assert_eq!(fmt_sig(0.0), "0.00000000000e0");
        assert_eq!(fmt_sig(-0.0), "0.00000000000e0");
        assert_eq!(fmt_sig(12345.6789), "1.23456789000e4");
    }

    #[test]
    fn json_numbers_are_rounded_to_output_precision() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(-1.2345678901234567e-5), -1.23456789012e-5);
        assert_eq!(round_sig(0.0), 0.0);
        let doc = to_json_12(&serde_json::json!({ "x": [0.1f64 + 0.2f64] }));
        assert!(doc.contains("0.3"), "{doc}");
        assert!(!doc.contains("0.30000000000000004"), "{doc}");
    }
}
