//! Candidate pullback actions on the ring, given by an integer matrix on
//! the degree-1 basis `[h, e_1, ..., e_m]` (column j is the image of basis
//! vector j) and extended multiplicatively to every degree.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::ring::{BasisMonomial, GradedClass, RingModel};

pub struct PullbackAction {
    ring: Arc<RingModel>,
    name: String,
    matrix: IntMatrix,
    induced: Vec<OnceLock<IntMatrix>>,
    report: OnceLock<ValidationReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// First counterexample, or a short note on success.
    pub witness: Option<String>,
}

impl Check {
    fn pass(name: &'static str) -> Self {
        Self { name, passed: true, witness: None }
    }

    fn fail(name: &'static str, witness: String) -> Self {
        Self { name, passed: false, witness: Some(witness) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub determinant: Check,
    pub pairing: Check,
    pub fundamental_class: Check,
    /// f*(x y) = f*(x) f*(y) on generators times basis monomials, i.e. the
    /// degree-1 images satisfy every ring relation.
    pub multiplicativity: Check,
    /// Informational: every genuine automorphism fixes K_X.
    pub canonical_class: Check,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.mandatory().all(|c| c.passed)
    }

    pub fn mandatory(&self) -> impl Iterator<Item = &Check> {
        [&self.determinant, &self.pairing, &self.fundamental_class, &self.multiplicativity].into_iter()
    }

    pub fn all(&self) -> impl Iterator<Item = &Check> {
        self.mandatory().chain(std::iter::once(&self.canonical_class))
    }
}

impl PullbackAction {
    pub fn new(ring: Arc<RingModel>, name: impl Into<String>, matrix: IntMatrix) -> Result<Self> {
        let n = ring.rank(1);
        if !matrix.is_square() || matrix.rows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: matrix.rows().max(matrix.cols()) });
        }
        let k = ring.k();
        Ok(Self {
            ring,
            name: name.into(),
            matrix,
            induced: (0..=k).map(|_| OnceLock::new()).collect(),
            report: OnceLock::new(),
        })
    }

    pub fn identity(ring: Arc<RingModel>) -> Self {
        let n = ring.rank(1);
        Self::new(ring, "id", IntMatrix::identity(n)).expect("identity has the right shape")
    }

    pub fn ring(&self) -> &Arc<RingModel> {
        &self.ring
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self::new(self.ring.clone(), name, self.matrix.clone()).expect("same shape")
    }

    /// Degree-1 image of basis vector j as a class.
    fn generator_image(&self, j: usize) -> GradedClass {
        let col = self.matrix.column(j).into_iter().map(BigRational::from_integer).collect();
        self.ring.class_in_degree(1, col).expect("rank 1 + m")
    }

    /// f* on a degree-1 class, straight from the matrix.
    pub fn apply_degree_one(&self, x: &GradedClass) -> Result<GradedClass> {
        if x.ring_id() != self.ring.id() {
            return Err(Error::BasisMismatch);
        }
        let v = self.ring.coefficients(x, 1);
        self.ring.class_in_degree(1, self.matrix.apply(&v))
    }

    /// Induced matrix without checking validity.
    fn induce_unchecked(&self, p: usize) -> &IntMatrix {
        self.induced[p].get_or_init(|| {
            let ring = &self.ring;
            let fh = self.generator_image(0);
            let cols: Vec<Vec<BigInt>> = ring
                .basis(p)
                .iter()
                .map(|&m| {
                    let image = match m {
                        BasisMonomial::PureH(a) => ring.pow(&fh, a),
                        BasisMonomial::Mixed { center, h, e } => {
                            let fe = self.generator_image(1 + center);
                            ring.mul(&ring.pow(&fh, h).unwrap(), &ring.pow(&fe, e).unwrap())
                        }
                    }
                    .expect("same ring");
                    ring.coefficients(&image, p)
                        .into_iter()
                        .map(|c| {
                            assert!(c.is_integer(), "integral classes multiply integrally");
                            c.to_integer()
                        })
                        .collect()
                })
                .collect();
            IntMatrix::from_columns(&cols, ring.rank(p))
        })
    }

    fn apply_unchecked(&self, x: &GradedClass) -> GradedClass {
        let mut out = self.ring.zero();
        for (p, v) in x.parts() {
            let image = self.induce_unchecked(p).apply(v);
            out = &out + &self.ring.class_in_degree(p, image).expect("rank");
        }
        out
    }

    /// Runs (once) and returns the validation report.
    pub fn validate(&self) -> &ValidationReport {
        self.report.get_or_init(|| self.run_validation())
    }

    fn run_validation(&self) -> ValidationReport {
        let ring = &self.ring;
        let k = ring.k();
        let det = self.matrix.det();
        let determinant = if det.abs().is_one() {
            Check::pass("determinant")
        } else {
            Check::fail("determinant", format!("det = {det}"))
        };

        let top = self.induce_unchecked(k);
        let fundamental_class = if top.is_identity() {
            Check::pass("fundamental class")
        } else {
            Check::fail("fundamental class", format!("f* on H^{{{k},{k}}} is {}", top[(0, 0)]))
        };

        let mut pairing = Check::pass("pairing");
        'outer: for p in 0..=k {
            let pm = ring.pairing_matrix(p);
            let lhs = &(&self.induce_unchecked(p).transpose() * &pm) * self.induce_unchecked(k - p);
            if lhs != pm {
                for i in 0..pm.rows() {
                    for j in 0..pm.cols() {
                        if lhs[(i, j)] != pm[(i, j)] {
                            pairing = Check::fail(
                                "pairing",
                                format!(
                                    "<f*{}, f*{}> = {} but <{}, {}> = {}",
                                    ring.basis(p)[i],
                                    ring.basis(k - p)[j],
                                    lhs[(i, j)],
                                    ring.basis(p)[i],
                                    ring.basis(k - p)[j],
                                    pm[(i, j)]
                                ),
                            );
                            break 'outer;
                        }
                    }
                }
            }
        }

        let mut multiplicativity = Check::pass("multiplicativity");
        'mult: for g in 0..ring.rank(1) {
            let gen = ring.monomial(ring.basis(1)[g]);
            let fgen = self.generator_image(g);
            for q in 0..k {
                for &m in ring.basis(q) {
                    let y = ring.monomial(m);
                    let lhs = self.apply_unchecked(&ring.mul(&gen, &y).unwrap());
                    let rhs = ring.mul(&fgen, &self.apply_unchecked(&y)).unwrap();
                    if lhs != rhs {
                        multiplicativity = Check::fail(
                            "multiplicativity",
                            format!("f*({} * {}) != f*({}) * f*({})", ring.basis(1)[g], m, ring.basis(1)[g], m),
                        );
                        break 'mult;
                    }
                }
            }
        }

        let kc = ring.canonical_class();
        let fk = self.apply_degree_one(&kc).expect("same ring");
        let canonical_class = if fk == kc {
            Check::pass("canonical class")
        } else {
            Check::fail(
                "canonical class",
                format!(
                    "f*K = {:?}",
                    ring.coefficients(&fk, 1).iter().map(crate::numeric::rational_string).collect::<Vec<_>>()
                ),
            )
        };

        ValidationReport { determinant, pairing, fundamental_class, multiplicativity, canonical_class }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    fn require_valid(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::NotValidated(self.name.clone()))
        }
    }

    /// Matrix of f* on the degree-p basis.
    pub fn induce(&self, p: usize) -> Result<&IntMatrix> {
        if p > self.ring.k() {
            return Err(Error::HypothesisViolation(format!("degree {p} exceeds {}", self.ring.k())));
        }
        self.require_valid()?;
        Ok(self.induce_unchecked(p))
    }

    /// f* on an arbitrary class, degree by degree.
    pub fn apply(&self, x: &GradedClass) -> Result<GradedClass> {
        if x.ring_id() != self.ring.id() {
            return Err(Error::BasisMismatch);
        }
        self.require_valid()?;
        Ok(self.apply_unchecked(x))
    }

    /// Pull back by `b` first, then by `a`: matrix `a · b`.
    pub fn compose(a: &PullbackAction, b: &PullbackAction) -> Result<PullbackAction> {
        if a.ring.id() != b.ring.id() {
            return Err(Error::RingMismatch);
        }
        PullbackAction::new(a.ring.clone(), format!("{}*{}", a.name, b.name), &a.matrix * &b.matrix)
    }

    pub fn inverse(&self) -> Result<PullbackAction> {
        let inv = self.matrix.integer_inverse().ok_or_else(|| Error::NotUnimodular(self.matrix.det().to_string()))?;
        PullbackAction::new(self.ring.clone(), format!("{}^-1", self.name), inv)
    }
}

impl fmt::Debug for PullbackAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PullbackAction").field("name", &self.name).field("matrix", &self.matrix).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::BlowupConfig;

    fn ring(k: usize, centers: &[usize]) -> Arc<RingModel> {
        Arc::new(RingModel::new(BlowupConfig::new(k, centers.to_vec()).unwrap()).unwrap())
    }

    #[test]
    fn identity_passes_everything() {
        let r = ring(3, &[0, 1]);
        let id = PullbackAction::identity(r.clone());
        assert!(id.validate().all().all(|c| c.passed));
        for p in 0..=3 {
            assert!(id.induce(p).unwrap().is_identity());
        }
    }

    #[test]
    fn swap_of_two_points_on_surface() {
        let r = ring(2, &[0, 0]);
        let m = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        let a = PullbackAction::new(r, "swap", m).unwrap();
        let rep = a.validate();
        assert!(rep.passed());
        assert!(rep.canonical_class.passed);
    }

    #[test]
    fn swap_induces_permutation_in_degree_two() {
        let r = ring(3, &[0, 0]);
        let m = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        let a = PullbackAction::new(r.clone(), "swap", m).unwrap();
        // basis {h^2, e1^2, e2^2}
        let expected = IntMatrix::from_rows(&[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        assert_eq!(a.induce(2).unwrap(), &expected);
        assert!(a.induce(3).unwrap().is_identity());
    }

    #[test]
    fn scaling_fails_unimodularity() {
        let r = ring(2, &[0, 0]);
        let m = IntMatrix::from_rows(&[vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let a = PullbackAction::new(r, "scale", m).unwrap();
        let rep = a.validate();
        assert!(!rep.determinant.passed);
        assert!(!rep.pairing.passed);
        assert!(!rep.passed());
        assert_eq!(a.induce(1), Err(Error::NotValidated("scale".into())));
        assert!(matches!(a.inverse(), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn shape_is_checked() {
        let r = ring(2, &[0, 0]);
        let m = IntMatrix::identity(2);
        assert_eq!(PullbackAction::new(r, "small", m).unwrap_err(), Error::DimensionMismatch { expected: 3, got: 2 });
    }

    #[test]
    fn compose_across_rings_is_rejected() {
        let a = PullbackAction::identity(ring(2, &[0]));
        let b = PullbackAction::identity(ring(2, &[0]));
        assert_eq!(PullbackAction::compose(&a, &b).unwrap_err(), Error::RingMismatch);
    }

    #[test]
    fn unimodular_but_not_a_ring_map() {
        // h -> h + e1 on Bl_pt P^3 keeps det = 1 but breaks h e1 = 0
        let r = ring(3, &[0]);
        let m = IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]);
        let a = PullbackAction::new(r, "shear", m).unwrap();
        let rep = a.validate();
        assert!(rep.determinant.passed);
        assert!(!rep.passed());
        assert!(!rep.multiplicativity.passed);
    }
}
