//! Certified enclosure of the largest root modulus of a squarefree monic
//! integer polynomial.
//!
//! Approximations come from Aberth-Ehrlich iteration in `f64`. They are then
//! certified with the Braess-Hadeler inclusion: for a monic polynomial of
//! degree d with distinct approximations z_i and Weierstrass corrections
//! W_i = p(z_i) / prod_{j != i} (z_i - z_j), every root lies in the union of
//! the disks |z - z_i| <= d |W_i|, and each connected component made of s
//! disks holds exactly s roots. The corrections are evaluated in exact
//! rational arithmetic, so the resulting bounds are rigorous.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{from_f64, sqrt_down, sqrt_up};
use crate::poly::IntPolynomial;

const MAX_ITER: usize = 2000;

/// Approximate all roots of a monic polynomial.
pub fn aberth(p: &IntPolynomial) -> Result<Vec<Complex64>> {
    let d = p.degree();
    if d == 0 {
        return Ok(vec![]);
    }
    let coeffs: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::RootSolver("coefficients overflow f64".into()));
    }
    let deriv: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    // Fujiwara bound on root moduli
    let bound = (1..=d).map(|i| coeffs[d - i].abs().powf(1.0 / i as f64)).fold(0.0_f64, f64::max) * 2.0;
    let radius = bound.max(1.0);
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| {
            let theta = std::f64::consts::TAU * j as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let horner = |c: &[f64], x: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * x + a);
    for _ in 0..MAX_ITER {
        let mut worst = 0.0_f64;
        for i in 0..d {
            let pz = horner(&coeffs, z[i]);
            if pz.norm() == 0.0 {
                continue;
            }
            let ratio = pz / horner(&deriv, z[i]);
            let sum: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.is_finite() {
                return Err(Error::RootSolver("non-finite Aberth correction".into()));
            }
            z[i] -= w;
            worst = worst.max(w.norm() / z[i].norm().max(1.0));
        }
        if worst <= 4.0 * f64::EPSILON {
            return Ok(z);
        }
    }
    // whatever we have is still useful; certification decides how good it is
    Ok(z)
}

#[derive(Clone)]
struct QComplex {
    re: BigRational,
    im: BigRational,
}

impl QComplex {
    fn from(z: Complex64) -> Self {
        Self { re: from_f64(z.re), im: from_f64(z.im) }
    }

    fn mul(&self, o: &Self) -> Self {
        Self { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// A certified disk: every point of the component it belongs to is within
/// `radius` (an upper bound) of `center`.
#[derive(Debug, Clone)]
pub struct RootDisk {
    pub center: Complex64,
    pub modulus_lo: BigRational,
    pub modulus_hi: BigRational,
    pub radius: BigRational,
}

fn eval_exact(coeffs: &[BigInt], z: &QComplex) -> QComplex {
    let mut acc = QComplex { re: BigRational::zero(), im: BigRational::zero() };
    for c in coeffs.iter().rev() {
        acc = acc.mul(z);
        acc.re += BigRational::from_integer(c.clone());
    }
    acc
}

/// Inclusion disks for the approximations `z`.
pub fn inclusion_disks(p: &IntPolynomial, z: &[Complex64]) -> Result<Vec<RootDisk>> {
    let d = z.len();
    assert_eq!(d, p.degree());
    assert!(p.is_monic());
    let exact: Vec<QComplex> = z.iter().map(|&w| QComplex::from(w)).collect();
    let dd = BigRational::from_integer(BigInt::from(d * d));
    let mut disks = Vec::with_capacity(d);
    for i in 0..d {
        let pz = eval_exact(p.coeffs(), &exact[i]).norm_sqr();
        let mut denom = BigRational::from_integer(BigInt::from(1));
        for j in 0..d {
            if j != i {
                denom *= exact[i].sub(&exact[j]).norm_sqr();
            }
        }
        if denom.is_zero() {
            return Err(Error::RootSolver("coincident root approximations".into()));
        }
        let r2 = &dd * pz / denom;
        let radius = sqrt_up(&r2);
        let m2 = exact[i].norm_sqr();
        disks.push(RootDisk { center: z[i], modulus_lo: sqrt_down(&m2), modulus_hi: sqrt_up(&m2), radius });
    }
    Ok(disks)
}

/// Rigorous [lo, hi] for max |root| of a squarefree monic polynomial of
/// positive degree.
pub fn max_modulus_enclosure(p: &IntPolynomial) -> Result<(BigRational, BigRational)> {
    let z = aberth(p)?;
    let disks = inclusion_disks(p, &z)?;
    let d = disks.len();
    let hi = disks.iter().map(|dk| &dk.modulus_hi + &dk.radius).max().expect("positive degree");

    // connected components of overlapping disks; overlap tested exactly on
    // the (upper bound) radii, so components can only come out too large
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let exact: Vec<QComplex> = z.iter().map(|&w| QComplex::from(w)).collect();
    for i in 0..d {
        for j in i + 1..d {
            let dist2 = exact[i].sub(&exact[j]).norm_sqr();
            let reach = &disks[i].radius + &disks[j].radius;
            if dist2 <= &reach * &reach {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut comp_lo: std::collections::HashMap<usize, BigRational> = Default::default();
    for i in 0..d {
        let root = find(&mut parent, i);
        let lo = &disks[i].modulus_lo - &disks[i].radius;
        comp_lo
            .entry(root)
            .and_modify(|v| {
                if lo < *v {
                    *v = lo.clone();
                }
            })
            .or_insert(lo);
    }
    let lo = comp_lo.into_values().max().expect("nonempty").max(BigRational::zero());
    Ok((lo, hi))
}
