//! Integer polynomials in one variable, stored with ascending coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    /// Ascending: `coeffs[i]` multiplies x^i. No trailing zeros.
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Descending coefficients, leading first.
    pub fn from_descending(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().rev().collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// x^n - 1
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// Substitutes x -> x^n.
    pub fn compose_power(&self, n: usize) -> Self {
        let mut c = vec![BigInt::zero(); self.degree() * n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * n] = a.clone();
        }
        Self::new(c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(vec![]);
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Division by a monic polynomial: (quotient, remainder).
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree();
        if self.coeffs.len() <= dd {
            return (Self::new(vec![]), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_rem_monic(self).1.is_zero()
    }

    /// Splits off the largest power of x: returns (k, p / x^k).
    pub fn strip_x_power(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, Self::new(self.coeffs[k..].to_vec()))
    }

    /// Monic gcd over the rationals. For monic integer inputs the result
    /// has integer coefficients (Gauss's lemma).
    pub fn gcd_monic(&self, other: &Self) -> Self {
        let to_q =
            |p: &Self| -> Vec<BigRational> { p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect() };
        let mut a = to_q(self);
        let mut b = to_q(other);
        while !b.is_empty() {
            let r = rational_rem(&a, &b);
            a = b;
            b = r;
        }
        let Some(lead) = a.last().cloned() else {
            return Self::new(vec![]);
        };
        let coeffs = a
            .into_iter()
            .map(|c| {
                let c = c / &lead;
                assert!(c.is_integer(), "gcd of monic integer polynomials is integral");
                c.to_integer()
            })
            .collect();
        Self::new(coeffs)
    }

    /// Product of the distinct irreducible factors, p / gcd(p, p').
    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd_monic(&self.derivative());
        self.div_rem_monic(&g).0
    }
}

fn rational_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db {
        let c = r.last().unwrap() / &lead;
        let shift = r.len() - 1 - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, &p| acc / p * (p - 1))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The n-th cyclotomic polynomial, via Phi_{mp}(x) = Phi_m(x^p) / Phi_m(x)
/// over the radical of n and Phi_n(x) = Phi_rad(x^{n / rad}).
pub fn cyclotomic(n: u64) -> IntPolynomial {
    assert!(n > 0);
    let mut phi = IntPolynomial::from_i64(&[-1, 1]);
    let mut rad = 1;
    for p in prime_factors(n) {
        let lifted = phi.compose_power(p as usize);
        let (q, r) = lifted.div_rem_monic(&phi);
        debug_assert!(r.is_zero());
        phi = q;
        rad *= p;
    }
    phi.compose_power((n / rad) as usize)
}

/// Every n with phi(n) <= d, using phi(n) >= sqrt(n / 2).
pub fn cyclotomic_indices_up_to_degree(d: usize) -> Vec<u64> {
    let bound = 2 * (d as u64).pow(2).max(1);
    (1..=bound).filter(|&n| euler_phi(n) as usize <= d).collect()
}

/// Result of removing x-powers and cyclotomic factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicSplit {
    pub x_power: usize,
    /// (n, multiplicity) for each Phi_n that divides.
    pub cyclotomic: Vec<(u64, usize)>,
    /// What is left; `1` when the polynomial was a cyclotomic product.
    pub rest: IntPolynomial,
}

pub fn split_cyclotomic(p: &IntPolynomial) -> CyclotomicSplit {
    assert!(p.is_monic(), "cyclotomic splitting needs a monic polynomial");
    let (x_power, mut rest) = p.strip_x_power();
    let mut found = vec![];
    for n in cyclotomic_indices_up_to_degree(rest.degree()) {
        if rest.degree() == 0 {
            break;
        }
        if euler_phi(n) as usize > rest.degree() {
            continue;
        }
        let phi = cyclotomic(n);
        let mut mult = 0;
        loop {
            let (q, r) = rest.div_rem_monic(&phi);
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            found.push((n, mult));
        }
    }
    CyclotomicSplit { x_power, cyclotomic: found, rest }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}
