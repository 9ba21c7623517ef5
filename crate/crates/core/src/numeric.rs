//! Exact rational helpers: parsing, decimal rendering, and directed
//! conversions between `f64` and `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer, or a decimal with optional exponent
/// (`"1e-9"`, `"0.25"`) into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    parse_decimal(s)
}

/// Integers and `p/q` only, as accepted for class coefficients.
pub fn parse_exact_coefficient(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return None;
    }
    parse_rational(s)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(digits);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

/// Canonical exact string: `"n"` for integers, `"p/q"` otherwise.
pub fn rational_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Fixed-point decimal with `digits` fractional digits, rounded in the
/// given direction so enclosures stay valid after printing.
pub fn decimal_string(x: &BigRational, digits: usize, rounding: Rounding) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x * BigRational::from_integer(scale.clone());
    let n = match rounding {
        Rounding::Down => scaled.floor().to_integer(),
        Rounding::Up => scaled.ceil().to_integer(),
    };
    let neg = n.is_negative();
    let (whole, frac) = n.abs().div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
}

pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Largest `f64` not above `x`.
pub fn to_f64_down(x: &BigRational) -> f64 {
    let mut f = x.to_f64().unwrap_or(f64::NAN);
    while from_f64(f) > *x {
        f = f.next_down();
    }
    f
}

/// Smallest `f64` not below `x`.
pub fn to_f64_up(x: &BigRational) -> f64 {
    let mut f = x.to_f64().unwrap_or(f64::NAN);
    while from_f64(f) < *x {
        f = f.next_up();
    }
    f
}

/// Lower bound for sqrt of a nonnegative rational, as an exact rational.
pub fn sqrt_down(x: &BigRational) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let mut s = to_f64_down(x).sqrt();
    while from_f64(s) * from_f64(s) > *x {
        s = s.next_down();
    }
    from_f64(s.max(0.0))
}

/// Upper bound for sqrt of a nonnegative rational, as an exact rational.
pub fn sqrt_up(x: &BigRational) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let mut s = to_f64_up(x).sqrt();
    while from_f64(s) * from_f64(s) < *x {
        s = s.next_up();
    }
    from_f64(s)
}

/// Directed natural logarithm bounds for a positive rational. The libm
/// result is assumed accurate to one ulp; two ulps of widening are applied.
pub fn ln_down(x: &BigRational) -> BigRational {
    if x.is_one() {
        return BigRational::zero();
    }
    let v = to_f64_down(x).ln();
    from_f64(v.next_down().next_down())
}

pub fn ln_up(x: &BigRational) -> BigRational {
    if x.is_one() {
        return BigRational::zero();
    }
    let v = to_f64_up(x).ln();
    from_f64(v.next_up().next_up())
}
