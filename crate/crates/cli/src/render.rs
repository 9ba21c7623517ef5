//! JSON and text renderings of core results.

use blowent_core::numeric::{decimal_string, rational_string, Rounding};
use blowent_core::positivity::CurveCheck;
use blowent_core::{BigRational, Enclosure, Entropy, GradedClass, IntMatrix, IntPolynomial, RingModel};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

pub fn rational(x: &BigRational) -> Value {
    Value::String(rational_string(x))
}

pub fn rationals(xs: &[BigRational]) -> Value {
    Value::Array(xs.iter().map(rational).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect())).collect(),
    )
}

/// Ascending integer coefficients as strings.
pub fn polynomial(p: &IntPolynomial) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn enclosure(e: &Enclosure, digits: usize) -> Value {
    json!({
        "lo": decimal_string(&e.lo, digits, Rounding::Down),
        "hi": decimal_string(&e.hi, digits, Rounding::Up),
        "exact_one": e.exact_one,
    })
}

pub fn entropy(e: &Entropy, digits: usize) -> Value {
    json!({
        "lo": decimal_string(&e.lo, digits, Rounding::Down),
        "hi": decimal_string(&e.hi, digits, Rounding::Up),
        "exact_zero": e.exact_zero,
    })
}

pub fn enclosure_text(e: &Enclosure, digits: usize) -> String {
    if e.exact_one {
        "1 (exact)".into()
    } else {
        format!("[{}, {}]", decimal_string(&e.lo, digits, Rounding::Down), decimal_string(&e.hi, digits, Rounding::Up))
    }
}

pub fn entropy_text(e: &Entropy, digits: usize) -> String {
    if e.exact_zero {
        "0 (exact)".into()
    } else {
        format!("[{}, {}]", decimal_string(&e.lo, digits, Rounding::Down), decimal_string(&e.hi, digits, Rounding::Up))
    }
}

/// Graded parts as `[{"degree": p, "coeffs": [...]}]`.
pub fn class(ring: &RingModel, x: &GradedClass) -> Value {
    Value::Array(
        x.parts().map(|(p, _)| json!({ "degree": p, "coeffs": rationals(&ring.coefficients(x, p)) })).collect(),
    )
}

pub fn class_text(ring: &RingModel, x: &GradedClass) -> String {
    let mut out = String::new();
    for (p, coeffs) in x.parts() {
        for (c, m) in coeffs.iter().zip(ring.basis(p)) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.to_string();
            if mag.is_one() {
                out.push_str(&mono);
            } else if mono == "1" {
                out.push_str(&rational_string(&mag));
            } else {
                out.push_str(&format!("{}*{mono}", rational_string(&mag)));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn curve_checks(checks: &[CurveCheck]) -> Value {
    Value::Array(
        checks.iter().map(|c| json!({ "curve": c.label, "value": rational(&c.value), "passed": c.passed })).collect(),
    )
}

pub fn curve_checks_text(checks: &[CurveCheck]) -> String {
    checks
        .iter()
        .map(|c| {
            format!("  {:<28} {:>8}  {}\n", c.label, rational_string(&c.value), if c.passed { "ok" } else { "FAILED" })
        })
        .collect()
}
