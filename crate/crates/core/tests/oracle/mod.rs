//! Independent reference computations used to freeze expected values.
//!
//! Nothing in here calls into the library's spectral or ring code. The
//! bisection works on exact rationals, the characteristic polynomial comes
//! from evaluating determinants at integer points and interpolating.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Lehmer's polynomial, ascending coefficients.
pub const LEHMER: [i64; 11] = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];

/// x^2 - x - 1, ascending.
pub const GOLDEN: [i64; 3] = [-1, -1, 1];

/// Hand reductions in the toric presentation, with integral of h^k = 1.
///
/// Bl_pt P^3: he = 0 and (h-e)^3 = 0 expand to h^3 - e^3 = 0, so e^3 = h^3.
pub const BL_PT_P3_E_CUBED: i64 = 1;
/// Bl_line P^3: (h-e)^2 = 0 gives e^2 = 2he - h^2. Then
/// e^3 = 2he^2 - h^2 e, with h^2 e = 0 and he^2 = 2h^2 e - h^3 = -h^3,
/// so e^3 = -2h^3.
pub const BL_LINE_P3_E_CUBED: i64 = -2;
/// F_1 (point on P^2): (h-e)^2 = 0 with he = 0 gives e^2 = -h^2.
pub const F1_E_SQUARED: i64 = -1;

/// (-K)^2 on P^2 blown up in m points: (3h - sum e_i)^2 = 9 - m since
/// h e_i = 0, e_i e_j = 0 and e_i^2 = -h^2.
pub fn anticanonical_square_points_p2(m: i64) -> i64 {
    9 - m
}

/// (-K)^3 on Bl_pt P^3: (4h - 2e)^3 = 64 h^3 - 8 e^3 (cross terms die
/// because he = 0) = 64 - 8 = 56.
pub const BL_PT_P3_ANTICANONICAL_CUBE: i64 = 56;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn eval(coeffs: &[i64], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * x + q(c);
    }
    acc
}

/// Exact bisection for a root of `coeffs` inside `[lo, hi]` where the
/// polynomial changes sign. Returns a bracket of width at most `width`.
pub fn bisect(
    coeffs: &[i64],
    lo: BigRational,
    hi: BigRational,
    width: &BigRational,
) -> (BigRational, BigRational) {
    let (mut lo, mut hi) = (lo, hi);
    let lo_sign = eval(coeffs, &lo).signum();
    assert!(
        lo_sign != eval(coeffs, &hi).signum(),
        "bracket does not straddle a root"
    );
    let two = q(2);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        let s = eval(coeffs, &mid).signum();
        if s.is_zero() {
            return (mid.clone(), mid);
        }
        if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Largest real root of a polynomial that is negative at `start` and
/// increasing beyond its largest root, bracketed to `width`.
pub fn largest_real_root(coeffs: &[i64], start: i64, width: &BigRational) -> (BigRational, BigRational) {
    // Cauchy bound: 1 + max |a_i / a_n|
    let lead = *coeffs.last().unwrap();
    let bound = 1 + coeffs.iter().map(|c| (c / lead).abs()).max().unwrap() + 1;
    bisect(coeffs, q(start), q(bound), width)
}

/// Determinant by fraction-free Gaussian elimination over rationals.
pub fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut sign = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            sign = -sign;
        }
        for r in col + 1..n {
            let f = &m[r][col] / &m[col][col];
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * &m[i][i])
}

/// Characteristic polynomial det(xI - M), ascending coefficients, via
/// evaluation at x = 0..=n and Lagrange interpolation.
pub fn char_poly_by_interpolation(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let xs: Vec<BigRational> = (0..=n as i64).map(q).collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x| {
            let shifted = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let d = if i == j { x.clone() } else { BigRational::zero() };
                            d - q(m[i][j])
                        })
                        .collect()
                })
                .collect();
            det(shifted)
        })
        .collect();
    let mut result = vec![BigRational::zero(); n + 1];
    for i in 0..=n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..=n {
            if j == i {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = &ys[i] / denom;
        for (d, c) in basis.iter().enumerate() {
            result[d] += c * &scale;
        }
    }
    result
        .into_iter()
        .map(|c| {
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

/// Polynomial long division over the integers for a monic divisor,
/// ascending coefficients. Returns (quotient, remainder).
pub fn divide_monic(num: &[BigInt], den: &[i64]) -> (Vec<BigInt>, Vec<BigInt>) {
    assert_eq!(*den.last().unwrap(), 1);
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        quot[i] = c.clone();
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= &c * BigInt::from(d);
        }
    }
    rem.truncate(dd);
    (quot, rem)
}

/// The E10 Coxeter element as plain integer rows, built directly from the
/// reflection formula x -> x + <x, v> v with the form diag(1, -1, ..., -1).
pub fn e10_coxeter_rows() -> Vec<Vec<i64>> {
    let n = 11;
    let form = |x: &[i64], y: &[i64]| -> i64 {
        x[0] * y[0] - (1..n).map(|i| x[i] * y[i]).sum::<i64>()
    };
    let mut roots = vec![];
    let mut r0 = vec![0; n];
    r0[0] = 1;
    r0[1] = -1;
    r0[2] = -1;
    r0[3] = -1;
    roots.push(r0);
    for i in 1..10 {
        let mut r = vec![0; n];
        r[i] = 1;
        r[i + 1] = -1;
        roots.push(r);
    }
    // accumulate product s_0 s_1 ... s_9 column by column
    let mut cols: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..n).map(|i| (i == j) as i64).collect())
        .collect();
    for v in roots.iter().rev() {
        for c in cols.iter_mut() {
            let p = form(c, v);
            for i in 0..n {
                c[i] += p * v[i];
            }
        }
    }
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn abs(x: &BigRational) -> BigRational {
    x.abs()
}
