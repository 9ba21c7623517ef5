//! Lattice isometries of H^2 of a blown-up plane: reflections in (-2)-roots,
//! Coxeter elements and permutations of centers.
//!
//! On P^2 blown up in m points the degree-1 pairing is diag(1, -1, ..., -1).
//! The roots h - e1 - e2 - e3 and e_i - e_{i+1} span the E_m lattice and the
//! product of their reflections is a Coxeter element; for m = 10 its
//! characteristic polynomial carries Lehmer's polynomial.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::action::PullbackAction;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::ring::RingModel;

fn surface_points(ring: &RingModel) -> Result<usize> {
    let cfg = ring.config();
    if cfg.k() != 2 {
        return Err(Error::HypothesisViolation(format!("reflections need a surface, got dimension {}", cfg.k())));
    }
    Ok(cfg.num_centers())
}

/// Matrix of x -> x + <x, v> v for a root v with <v, v> = -2.
pub fn reflection(ring: &RingModel, root: &[i64]) -> Result<IntMatrix> {
    surface_points(ring)?;
    let n = ring.rank(1);
    if root.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: root.len() });
    }
    let pm = ring.pairing_matrix(1);
    let form = |x: &[BigInt], y: &[BigInt]| -> BigInt {
        let mut acc = BigInt::from(0);
        for i in 0..n {
            for j in 0..n {
                acc += &x[i] * &pm[(i, j)] * &y[j];
            }
        }
        acc
    };
    let v: Vec<BigInt> = root.iter().map(|&c| BigInt::from(c)).collect();
    if form(&v, &v) != BigInt::from(-2) {
        return Err(Error::HypothesisViolation("reflection root must have square -2".into()));
    }
    let cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut x = vec![BigInt::from(0); n];
            x[j] = BigInt::from(1);
            let c = form(&x, &v);
            x.iter().zip(&v).map(|(xi, vi)| xi + &c * vi).collect()
        })
        .collect();
    Ok(IntMatrix::from_columns(&cols, n))
}

/// Simple roots of E_m: h - e1 - e2 - e3, then e_i - e_{i+1}.
pub fn simple_roots(m: usize) -> Vec<Vec<i64>> {
    let n = m + 1;
    let mut roots = vec![];
    let mut r0 = vec![0; n];
    r0[0] = 1;
    for c in r0.iter_mut().skip(1).take(3) {
        *c = -1;
    }
    roots.push(r0);
    for i in 1..m {
        let mut r = vec![0; n];
        r[i] = 1;
        r[i + 1] = -1;
        roots.push(r);
    }
    roots
}

/// s_0 s_1 ... s_{m-1} in the simple roots above; needs m >= 3 points.
pub fn coxeter_matrix(ring: &RingModel) -> Result<IntMatrix> {
    let m = surface_points(ring)?;
    if m < 3 {
        return Err(Error::HypothesisViolation("a Coxeter element needs at least 3 points".into()));
    }
    simple_roots(m).iter().try_fold(IntMatrix::identity(m + 1), |acc, root| Ok(&acc * &reflection(ring, root)?))
}

pub fn coxeter_action(ring: Arc<RingModel>) -> Result<PullbackAction> {
    let m = coxeter_matrix(&ring)?;
    PullbackAction::new(ring, "coxeter", m)
}

/// Action fixing h and sending e_i to e_{perm[i]}. Only centers of equal
/// dimension may be exchanged.
pub fn permutation_action(ring: Arc<RingModel>, perm: &[usize]) -> Result<PullbackAction> {
    let m = ring.num_centers();
    if perm.len() != m {
        return Err(Error::LengthMismatch { expected: m, got: perm.len() });
    }
    let mut seen = vec![false; m];
    for (i, &j) in perm.iter().enumerate() {
        if j >= m || seen[j] {
            return Err(Error::HypothesisViolation("not a permutation".into()));
        }
        seen[j] = true;
        if ring.config().centers()[i] != ring.config().centers()[j] {
            return Err(Error::HypothesisViolation(format!(
                "centers {} and {} have different dimensions",
                i + 1,
                j + 1
            )));
        }
    }
    let mut mat = IntMatrix::zeros(m + 1, m + 1);
    mat[(0, 0)] = BigInt::from(1);
    for (i, &j) in perm.iter().enumerate() {
        mat[(1 + j, 1 + i)] = BigInt::from(1);
    }
    PullbackAction::new(ring, "perm", mat)
}
