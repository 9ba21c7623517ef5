//! Characteristic polynomials, spectral radii with certified enclosures,
//! dynamical degrees and entropy.
//!
//! Zero entropy is decided exactly: an integer monic polynomial whose roots
//! all lie in the closed unit disk is a power of x times cyclotomic factors
//! (Kronecker), so "spectral radius is 1" never rests on floating point.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::action::PullbackAction;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::numeric::{decimal_string, ln_down, ln_up, Rounding};
use crate::poly::{split_cyclotomic, IntPolynomial};
use crate::roots::max_modulus_enclosure;

/// 1e-9.
pub fn default_tol() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

/// Division-free characteristic polynomial det(xI - M) (Berkowitz).
pub fn char_poly(m: &IntMatrix) -> IntPolynomial {
    assert!(m.is_square(), "char_poly needs a square matrix");
    let n = m.rows();
    // descending coefficients of the char poly of the leading r x r block
    let mut p: Vec<BigInt> = vec![BigInt::one()];
    for r in 1..=n {
        let idx = r - 1;
        let mut col = Vec::with_capacity(r + 1);
        col.push(BigInt::one());
        col.push(-m[(idx, idx)].clone());
        let mut v: Vec<BigInt> = (0..idx).map(|i| m[(i, idx)].clone()).collect();
        for _ in 2..=r {
            let dot: BigInt = (0..idx).map(|j| &m[(idx, j)] * &v[j]).sum();
            col.push(-dot);
            v = (0..idx).map(|i| (0..idx).map(|j| &m[(i, j)] * &v[j]).sum()).collect();
        }
        let next: Vec<BigInt> = (0..=r).map(|i| (0..=i.min(r - 1)).map(|j| &col[i - j] * &p[j]).sum()).collect();
        p = next;
    }
    IntPolynomial::from_descending(p)
}

/// True iff every root of the monic polynomial is zero or on the unit
/// circle.
pub fn is_cyclotomic_product(p: &IntPolynomial) -> bool {
    split_cyclotomic(p).rest.degree() == 0
}

/// Rigorous bounds on a spectral radius.
///
/// `exact_one` marks a radius proved to be 1. Otherwise, when the radius
/// exceeds 1, `witness` is a squarefree integer polynomial whose largest
/// root modulus is the radius; two enclosures with equal witnesses enclose
/// the same number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact_one: bool,
    pub witness: Option<IntPolynomial>,
}

impl Enclosure {
    pub fn one() -> Self {
        Self { lo: BigRational::one(), hi: BigRational::one(), exact_one: true, witness: None }
    }

    pub fn zero() -> Self {
        Self { lo: BigRational::zero(), hi: BigRational::zero(), exact_one: false, witness: None }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_one {
            return write!(f, "1 (exact)");
        }
        if self.is_exact() {
            return write!(f, "{} (exact)", decimal_string(&self.lo, 12, Rounding::Down));
        }
        write!(f, "[{}, {}]", decimal_string(&self.lo, 12, Rounding::Down), decimal_string(&self.hi, 12, Rounding::Up))
    }
}

/// Spectral radius of an integer matrix, to within `tol`.
pub fn spectral_radius(m: &IntMatrix, tol: &BigRational) -> Result<Enclosure> {
    radius_of_char_poly(&char_poly(m), tol)
}

/// Largest root modulus of a monic integer polynomial, to within `tol`.
pub fn radius_of_char_poly(p: &IntPolynomial, tol: &BigRational) -> Result<Enclosure> {
    assert!(tol.is_positive(), "tolerance must be positive");
    let split = split_cyclotomic(p);
    if split.rest.degree() == 0 {
        if split.cyclotomic.is_empty() {
            // nilpotent; impossible for unimodular input
            return Ok(Enclosure::zero());
        }
        return Ok(Enclosure::one());
    }
    let witness = split.rest.squarefree_part();
    let (lo, hi) = max_modulus_enclosure(&witness)?;
    // a non-cyclotomic integer factor with nonzero constant term has a root
    // of modulus > 1
    let lo = lo.max(BigRational::one());
    if &hi - &lo > *tol {
        return Err(Error::ToleranceUnreachable {
            best: decimal_string(&(&hi - &lo), 3, Rounding::Up),
            tol: decimal_string(tol, 3, Rounding::Down),
        });
    }
    Ok(Enclosure { lo, hi, exact_one: false, witness: Some(witness) })
}

/// Natural-log entropy bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entropy {
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact_zero: bool,
}

impl Entropy {
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }
}

impl fmt::Display for Entropy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            return write!(f, "0 (exact)");
        }
        write!(f, "[{}, {}]", decimal_string(&self.lo, 12, Rounding::Down), decimal_string(&self.hi, 12, Rounding::Up))
    }
}

/// λ_0, ..., λ_k and the entropy max log λ_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    pub degrees: Vec<Enclosure>,
    pub char_polys: Vec<IntPolynomial>,
    pub entropy: Entropy,
}

impl DegreeSequence {
    pub fn get(&self, p: usize) -> &Enclosure {
        &self.degrees[p]
    }

    pub fn k(&self) -> usize {
        self.degrees.len() - 1
    }
}

pub fn dynamical_degrees(action: &PullbackAction, tol: &BigRational) -> Result<DegreeSequence> {
    let k = action.ring().k();
    let mut degrees = Vec::with_capacity(k + 1);
    let mut char_polys = Vec::with_capacity(k + 1);
    for p in 0..=k {
        let cp = char_poly(action.induce(p)?);
        debug_assert!(cp.constant_term().abs().is_one(), "unimodular action");
        degrees.push(radius_of_char_poly(&cp, tol)?);
        char_polys.push(cp);
    }
    let exact_zero = degrees.iter().all(|d| d.exact_one);
    let entropy = if exact_zero {
        Entropy { lo: BigRational::zero(), hi: BigRational::zero(), exact_zero: true }
    } else {
        let lo = degrees.iter().map(|d| ln_down(&d.lo)).max().expect("k >= 0");
        let hi = degrees.iter().map(|d| ln_up(&d.hi)).max().expect("k >= 0");
        Entropy { lo: lo.max(BigRational::zero()), hi, exact_zero: false }
    };
    Ok(DegreeSequence { degrees, char_polys, entropy })
}

/// Outcome of a check whose inputs are only known up to enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Truth {
    Pass,
    Fail,
    Indeterminate,
}

impl Truth {
    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::Fail, _) | (_, Truth::Fail) => Truth::Fail,
            (Truth::Indeterminate, _) | (_, Truth::Indeterminate) => Truth::Indeterminate,
            _ => Truth::Pass,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Truth::Pass => "pass",
            Truth::Fail => "fail",
            Truth::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A product of powers of spectral radii, e.g. λ_1^2 · λ_3.
#[derive(Debug, Clone)]
pub struct Product<'a> {
    factors: Vec<(&'a Enclosure, u32)>,
}

impl<'a> Product<'a> {
    pub fn new() -> Self {
        Self { factors: vec![] }
    }

    pub fn of(e: &'a Enclosure) -> Self {
        Self::new().times(e, 1)
    }

    pub fn pow(e: &'a Enclosure, n: u32) -> Self {
        Self::new().times(e, n)
    }

    pub fn times(mut self, e: &'a Enclosure, n: u32) -> Self {
        self.factors.push((e, n));
        self
    }

    fn bounds(&self) -> (BigRational, BigRational) {
        let mut lo = BigRational::one();
        let mut hi = BigRational::one();
        for (e, n) in &self.factors {
            let n = *n as i32;
            lo *= num_traits::pow::Pow::pow(&e.lo, n);
            hi *= num_traits::pow::Pow::pow(&e.hi, n);
        }
        (lo, hi)
    }

    /// Exponent per witness, with exact ones dropped. `None` if some factor
    /// is neither exact nor witnessed.
    fn symbolic(&self) -> Option<BTreeMap<Vec<BigInt>, u32>> {
        let mut out = BTreeMap::new();
        for (e, n) in &self.factors {
            if e.exact_one || *n == 0 {
                continue;
            }
            let w = e.witness.as_ref()?;
            *out.entry(w.coeffs().to_vec()).or_insert(0) += n;
        }
        out.retain(|_, n| *n > 0);
        Some(out)
    }
}

impl Default for Product<'_> {
    fn default() -> Self {
        Self::new()
    }
}

/// Whether lhs = rhs. Exact when both sides reduce to the same witnesses,
/// or when exactly one side is 1 (a witnessed radius exceeds 1).
pub fn equal(lhs: &Product, rhs: &Product) -> Truth {
    if let (Some(a), Some(b)) = (lhs.symbolic(), rhs.symbolic()) {
        if a == b {
            return Truth::Pass;
        }
        if a.is_empty() != b.is_empty() {
            return Truth::Fail;
        }
    }
    let (alo, ahi) = lhs.bounds();
    let (blo, bhi) = rhs.bounds();
    if ahi < blo || bhi < alo {
        Truth::Fail
    } else {
        Truth::Indeterminate
    }
}

/// Whether lhs >= rhs.
pub fn at_least(lhs: &Product, rhs: &Product) -> Truth {
    if let (Some(a), Some(b)) = (lhs.symbolic(), rhs.symbolic()) {
        if a == b || b.is_empty() {
            return Truth::Pass;
        }
    }
    let (alo, ahi) = lhs.bounds();
    let (blo, bhi) = rhs.bounds();
    if alo >= bhi {
        Truth::Pass
    } else if ahi < blo {
        Truth::Fail
    } else {
        Truth::Indeterminate
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    /// "i" through "iv".
    pub property: &'static str,
    pub statement: String,
    pub truth: Truth,
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub forward: DegreeSequence,
    pub backward: DegreeSequence,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn overall(&self) -> Truth {
        self.checks.iter().fold(Truth::Pass, |acc, c| acc.and(c.truth))
    }

    pub fn property(&self, name: &str) -> Truth {
        self.checks.iter().filter(|c| c.property == name).fold(Truth::Pass, |acc, c| acc.and(c.truth))
    }
}

/// Checks on the dynamical degrees of `action`:
/// (i) λ_i >= 1; (ii) λ_i^2 >= λ_{i-1} λ_{i+1};
/// (iii) λ_1^i >= λ_i and λ_i^i >= λ_1 for 1 <= i <= k-1;
/// (iv) λ_i(f) = λ_{k-i}(f^-1).
pub fn lemma21_report(action: &PullbackAction, tol: &BigRational) -> Result<PropertyReport> {
    let forward = dynamical_degrees(action, tol)?;
    let inv = action.inverse()?;
    let backward = dynamical_degrees(&inv, tol)?;
    let k = forward.k();
    let lam = |i: usize| forward.get(i);
    let mut checks = vec![];
    let one = Enclosure::one();

    for i in 0..=k {
        let e = lam(i);
        let truth = if e.exact_one
            || e.lo >= BigRational::one()
            || e.witness.as_ref().is_some_and(|w| w.constant_term().abs().is_one())
        {
            Truth::Pass
        } else {
            at_least(&Product::of(e), &Product::of(&one))
        };
        checks.push(PropertyCheck { property: "i", statement: format!("λ_{i} >= 1"), truth });
    }
    for i in 1..k {
        let truth = at_least(&Product::pow(lam(i), 2), &Product::of(lam(i - 1)).times(lam(i + 1), 1));
        checks
            .push(PropertyCheck { property: "ii", statement: format!("λ_{i}^2 >= λ_{} λ_{}", i - 1, i + 1), truth });
    }
    for i in 1..k {
        let n = i as u32;
        checks.push(PropertyCheck {
            property: "iii",
            statement: format!("λ_1^{i} >= λ_{i}"),
            truth: at_least(&Product::pow(lam(1), n), &Product::of(lam(i))),
        });
        checks.push(PropertyCheck {
            property: "iii",
            statement: format!("λ_{i}^{i} >= λ_1"),
            truth: at_least(&Product::pow(lam(i), n), &Product::of(lam(1))),
        });
    }
    for i in 0..=k {
        checks.push(PropertyCheck {
            property: "iv",
            statement: format!("λ_{i}(f) = λ_{}(f^-1)", k - i),
            truth: equal(&Product::of(lam(i)), &Product::of(backward.get(k - i))),
        });
    }
    Ok(PropertyReport { forward, backward, checks })
}
