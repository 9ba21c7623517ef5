//! Numerical dimension, necessary conditions for nef-ness, Perron-Frobenius
//! eigenvectors and the positivity-based verifiers built on them.
//!
//! Nef-ness cannot be decided from finitely many pairings. A class is
//! asserted nef by the caller and checked against a list of curves plus the
//! mixed volumes ∫x^p h^(k-p), which are nonnegative for every nef x
//! because h is nef.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::action::PullbackAction;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::numeric::{from_f64, rational_string};
use crate::ring::{GradedClass, RingModel};
use crate::spectral::{dynamical_degrees, spectral_radius, Enclosure, Entropy};

fn require_degree(x: &GradedClass, p: usize) -> Result<()> {
    match x.homogeneous_degree() {
        Some(d) if d != p => Err(Error::WrongDegree { expected: p, got: d }),
        None if !x.is_zero() => {
            let got = x.parts().map(|(d, _)| d).find(|&d| d != p).unwrap_or(p);
            Err(Error::WrongDegree { expected: p, got })
        }
        _ => Ok(()),
    }
}

fn require_ring(ring: &RingModel, x: &GradedClass) -> Result<()> {
    if x.ring_id() != ring.id() {
        return Err(Error::BasisMismatch);
    }
    Ok(())
}

/// ν(x) = max{p : x^p ≠ 0} for a nonzero degree-1 class.
pub fn numerical_dimension(ring: &RingModel, x: &GradedClass) -> Result<usize> {
    require_ring(ring, x)?;
    require_degree(x, 1)?;
    if x.is_zero() {
        return Err(Error::ZeroClass);
    }
    let mut power = x.clone();
    let mut p = 1;
    while p < ring.k() {
        let next = ring.mul(&power, x)?;
        if next.is_zero() {
            break;
        }
        power = next;
        p += 1;
    }
    Ok(p)
}

/// A curve class (degree k-1) used as a test for nef-ness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub label: String,
    pub class: GradedClass,
}

/// Generic line, a line in each exceptional fiber, and for each point
/// center the strict transform of a line through it.
pub fn default_curves(ring: &RingModel) -> Vec<Curve> {
    let k = ring.k();
    let line = ring.pow(&ring.h(), k - 1).expect("same ring");
    let mut curves = vec![Curve { label: "generic line".into(), class: line.clone() }];
    for i in 0..ring.num_centers() {
        curves.push(Curve { label: format!("fiber line over center {}", i + 1), class: ring.fiber_curve(i) });
    }
    for (i, &r) in ring.config().centers().iter().enumerate() {
        if r == 0 {
            curves.push(Curve { label: format!("line through point {}", i + 1), class: &line - &ring.fiber_curve(i) });
        }
    }
    curves
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveCheck {
    pub label: String,
    pub value: BigRational,
    pub passed: bool,
}

/// A degree-1 class with the caller's nef assertion and the necessary
/// conditions checked against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefAssertion {
    class: GradedClass,
    asserted_nef: bool,
    checks: Vec<CurveCheck>,
}

impl NefAssertion {
    /// Runs the default checks and asserts nef-ness if they all pass.
    pub fn assert_nef(ring: &RingModel, x: &GradedClass) -> Result<Self> {
        Ok(nef_necessary_check(ring, x)?.asserted())
    }

    /// Takes the caller's word without running any checks.
    pub fn assume_nef(ring: &RingModel, x: &GradedClass) -> Result<Self> {
        require_ring(ring, x)?;
        require_degree(x, 1)?;
        Ok(Self { class: x.clone(), asserted_nef: true, checks: vec![] })
    }

    /// Marks the class nef when every check passed; otherwise leaves it
    /// unasserted.
    pub fn asserted(mut self) -> Self {
        self.asserted_nef = self.checks_pass();
        self
    }

    pub fn class(&self) -> &GradedClass {
        &self.class
    }

    pub fn asserted_nef(&self) -> bool {
        self.asserted_nef
    }

    pub fn checks(&self) -> &[CurveCheck] {
        &self.checks
    }

    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CurveCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Pairs x with the default curves and computes its mixed volumes.
/// The result is not asserted nef.
pub fn nef_necessary_check(ring: &RingModel, x: &GradedClass) -> Result<NefAssertion> {
    nef_necessary_check_with(ring, x, &[], &BigRational::zero())
}

/// As [`nef_necessary_check`] with extra curves, accepting values down to
/// `-slack` (for approximate classes).
pub fn nef_necessary_check_with(
    ring: &RingModel,
    x: &GradedClass,
    extra: &[Curve],
    slack: &BigRational,
) -> Result<NefAssertion> {
    require_ring(ring, x)?;
    require_degree(x, 1)?;
    let k = ring.k();
    let floor = -slack.clone();
    let mut checks = vec![];
    for curve in default_curves(ring).iter().chain(extra) {
        require_ring(ring, &curve.class)?;
        require_degree(&curve.class, k - 1)?;
        let value = ring.pairing(x, &curve.class)?;
        let passed = value >= floor;
        checks.push(CurveCheck { label: curve.label.clone(), value, passed });
    }
    let mut power = x.clone();
    for p in 2..=k {
        power = ring.mul(&power, x)?;
        let value = ring.integrate(&ring.mul(&power, &ring.pow(&ring.h(), k - p)?)?)?;
        let passed = value >= floor;
        let label = if p == k { format!("x^{k}") } else { format!("x^{p} h^{}", k - p) };
        checks.push(CurveCheck { label, value, passed });
    }
    Ok(NefAssertion { class: x.clone(), asserted_nef: false, checks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KawamataNu {
    pub value: usize,
    /// ν(x), absent for the zero class.
    pub numerical_dimension: Option<usize>,
}

impl KawamataNu {
    pub fn agrees(&self) -> bool {
        self.numerical_dimension.map_or(self.value == 0, |n| n == self.value)
    }
}

/// max{p : ∫x^p A^(k-p) ≠ 0} for an ample candidate A.
pub fn kawamata_nu(ring: &RingModel, x: &GradedClass, ample: &GradedClass) -> Result<KawamataNu> {
    require_ring(ring, x)?;
    require_ring(ring, ample)?;
    require_degree(x, 1)?;
    require_degree(ample, 1)?;
    let k = ring.k();
    let volume = ring.integrate(&ring.pow(ample, k)?)?;
    if !volume.is_positive() {
        return Err(Error::NotAmpleCandidate(format!("∫A^{k} = {}", rational_string(&volume))));
    }
    for curve in default_curves(ring) {
        let v = ring.pairing(ample, &curve.class)?;
        if !v.is_positive() {
            return Err(Error::NotAmpleCandidate(format!("A · ({}) = {}", curve.label, rational_string(&v))));
        }
    }
    let mut value = 0;
    let mut xp = ring.one();
    for p in 0..=k {
        if p > 0 {
            xp = ring.mul(&xp, x)?;
        }
        let v = ring.integrate(&ring.mul(&xp, &ring.pow(ample, k - p)?)?)?;
        if !v.is_zero() {
            value = p;
        }
    }
    let numerical_dimension = if x.is_zero() { None } else { Some(numerical_dimension(ring, x)?) };
    Ok(KawamataNu { value, numerical_dimension })
}

/// Outcome of plain power iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerIteration {
    Converged { value: f64, vector: Vec<f64>, residual: f64, iterations: usize },
    NonConvergence { residual: f64, iterations: usize },
}

/// Power iteration from `start`, normalized in the max norm, until
/// ‖Mv - λv‖∞ ≤ tol.
pub fn power_iteration(m: &IntMatrix, start: &[f64], tol: f64, max_iter: usize) -> PowerIteration {
    let a = m.to_f64();
    let n = start.len();
    assert_eq!(n, m.cols());
    let norm = |v: &[f64]| v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let mut v: Vec<f64> = start.to_vec();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let w: Vec<f64> = a.iter().map(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum()).collect();
        let value = w.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
        residual = w.iter().zip(&v).map(|(wi, vi)| (wi - value * vi).abs()).fold(0.0, f64::max);
        if residual <= tol {
            return PowerIteration::Converged { value, vector: v, residual, iterations: it };
        }
        let s = norm(&w);
        if s == 0.0 || !s.is_finite() {
            break;
        }
        v = w.into_iter().map(|x| x / s).collect();
    }
    PowerIteration::NonConvergence { residual, iterations: max_iter }
}

const MAX_POWER_ITERATIONS: usize = 20_000;

#[derive(Debug, Clone)]
pub enum PfOutcome {
    /// λ_1 = 1 exactly; there is no expanding direction.
    NoExpansion {
        eigenvalue: Enclosure,
    },
    Expanding {
        eigenvalue: Enclosure,
        /// Rayleigh quotient of the final iterate.
        estimate: f64,
        vector: Vec<f64>,
        residual: f64,
        nef: NefAssertion,
    },
    NonConvergence {
        eigenvalue: Enclosure,
        residual: f64,
        iterations: usize,
    },
}

impl PfOutcome {
    pub fn eigenvalue(&self) -> &Enclosure {
        match self {
            PfOutcome::NoExpansion { eigenvalue }
            | PfOutcome::Expanding { eigenvalue, .. }
            | PfOutcome::NonConvergence { eigenvalue, .. } => eigenvalue,
        }
    }
}

fn slack_for(ring: &RingModel, tol: &BigRational) -> BigRational {
    tol * BigRational::from_integer((64 * ring.rank(1)).into())
}

/// Leading eigenvector of f* on degree 1, by power iteration from h.
pub fn pf_eigenvector(action: &PullbackAction, tol: &BigRational) -> Result<PfOutcome> {
    let m = action.induce(1)?;
    let eigenvalue = spectral_radius(m, tol)?;
    if eigenvalue.exact_one {
        return Ok(PfOutcome::NoExpansion { eigenvalue });
    }
    let ring = action.ring();
    let mut start = vec![0.0; ring.rank(1)];
    start[0] = 1.0;
    let tol_f = tol.to_f64().unwrap_or(1e-9).min(1e-12);
    match power_iteration(m, &start, tol_f, MAX_POWER_ITERATIONS) {
        PowerIteration::Converged { value, vector, residual, .. } => {
            let class = ring.parse_class(&vector.iter().map(|&c| from_f64(c)).collect::<Vec<_>>())?;
            let nef = nef_necessary_check_with(ring, &class, &[], &slack_for(ring, tol))?;
            Ok(PfOutcome::Expanding { eigenvalue, estimate: value, vector, residual, nef })
        }
        PowerIteration::NonConvergence { residual, iterations } => {
            Ok(PfOutcome::NonConvergence { eigenvalue, residual, iterations })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColinearityVerdict {
    Colinear(BigRational),
    NotColinear(String),
    NotApplicable(String),
}

/// For nef x, y with x·y = 0, decides whether y = c·x. A NotColinear
/// verdict means one of the two nef assertions is false.
pub fn ds_colinearity(ring: &RingModel, x: &NefAssertion, y: &NefAssertion) -> Result<ColinearityVerdict> {
    require_ring(ring, x.class())?;
    require_ring(ring, y.class())?;
    if !x.asserted_nef() || !y.asserted_nef() {
        return Ok(ColinearityVerdict::NotApplicable("both classes must be asserted nef".into()));
    }
    if x.class().is_zero() {
        return Ok(ColinearityVerdict::NotApplicable("first class is zero".into()));
    }
    if !ring.mul(x.class(), y.class())?.is_zero() {
        return Ok(ColinearityVerdict::NotApplicable("hypothesis not met: x·y ≠ 0".into()));
    }
    let xs = ring.coefficients(x.class(), 1);
    let ys = ring.coefficients(y.class(), 1);
    let j = xs.iter().position(|c| !c.is_zero()).expect("nonzero class");
    let c = &ys[j] / &xs[j];
    for (i, (a, b)) in xs.iter().zip(&ys).enumerate() {
        if &(a * &c) != b {
            let m = ring.basis(1)[i];
            return Ok(ColinearityVerdict::NotColinear(format!(
                "coefficient of {m}: {} in x, {} in y, but {} in x and {} in y",
                rational_string(a),
                rational_string(b),
                rational_string(&xs[j]),
                rational_string(&ys[j]),
            )));
        }
    }
    Ok(ColinearityVerdict::Colinear(c))
}

/// Solutions (a, b) of (a x + b y) · Π multipliers = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilKernel {
    /// 0, 1 or 2.
    pub dimension: usize,
    pub basis: Vec<(BigRational, BigRational)>,
    /// y · Π multipliers ≠ 0, under which the solution is unique up to
    /// scale.
    pub y_product_nonzero: bool,
}

impl PencilKernel {
    pub fn unique_up_to_scale(&self) -> bool {
        self.dimension == 1
    }
}

pub fn pencil_kernel(
    ring: &RingModel,
    x: &GradedClass,
    y: &GradedClass,
    multipliers: &[GradedClass],
) -> Result<PencilKernel> {
    for c in [x, y].into_iter().chain(multipliers) {
        require_ring(ring, c)?;
        require_degree(c, 1)?;
    }
    let k = ring.k();
    if multipliers.len() + 2 > k {
        return Err(Error::NotApplicable(format!(
            "{} multipliers given, at most {} allowed",
            multipliers.len(),
            k - 2
        )));
    }
    let pi = ring.product(multipliers)?;
    let u = ring.mul(x, &pi)?;
    let w = ring.mul(y, &pi)?;
    if !ring.mul(&u, y)?.is_zero() {
        return Err(Error::NotApplicable("hypothesis not met: x·y·Π ≠ 0".into()));
    }
    let d = 1 + multipliers.len();
    let uc = ring.coefficients(&u, d);
    let wc = ring.coefficients(&w, d);
    let zero = BigRational::zero;
    let one = BigRational::one;
    let (dimension, basis) = if u.is_zero() && w.is_zero() {
        (2, vec![(one(), zero()), (zero(), one())])
    } else {
        // rank 1 iff every 2x2 minor vanishes
        let dependent = (0..uc.len()).all(|i| (0..uc.len()).all(|j| &uc[i] * &wc[j] == &uc[j] * &wc[i]));
        if !dependent {
            (0, vec![])
        } else if w.is_zero() {
            (1, vec![(zero(), one())])
        } else if u.is_zero() {
            (1, vec![(one(), zero())])
        } else {
            let i = wc.iter().position(|c| !c.is_zero()).expect("nonzero");
            // a u + b w = 0 with u = c w
            let c = &uc[i] / &wc[i];
            (1, vec![(one(), -c)])
        }
    };
    Ok(PencilKernel { dimension, basis, y_product_nonzero: !w.is_zero() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma32Report {
    pub a: BigRational,
    /// k - r - 1.
    pub exponent: usize,
    pub h_pairing: BigRational,
    pub mixed_integral: BigRational,
    pub nu: usize,
    pub asserted_nef: bool,
    pub h_pairing_ok: bool,
    pub mixed_integral_ok: bool,
    pub nu_ok: bool,
}

impl Lemma32Report {
    pub fn passed(&self) -> bool {
        self.h_pairing_ok && self.mixed_integral_ok && self.nu_ok
    }
}

/// For x = a h + Σ b_i e_i: ∫x h^(k-1) = a, ∫x^(k-r-1) h^(r+1) = a^(k-r-1)
/// and ν(x) ≥ k - r - 1, with r the largest center dimension.
pub fn lemma32_check(ring: &RingModel, x: &NefAssertion) -> Result<Lemma32Report> {
    let k = ring.k();
    let r = ring.config().max_center_dim();
    if k < r + 2 {
        return Err(Error::HypothesisViolation(format!("k = {k} < r + 2 = {}", r + 2)));
    }
    let class = x.class();
    let nu = numerical_dimension(ring, class)?;
    let a = ring.coefficients(class, 1)[0].clone();
    let exponent = k - r - 1;
    let h_pairing = ring.integrate(&ring.mul(class, &ring.pow(&ring.h(), k - 1)?)?)?;
    let mixed_integral = ring.integrate(&ring.mul(&ring.pow(class, exponent)?, &ring.pow(&ring.h(), r + 1)?)?)?;
    let expected = num_traits::pow::Pow::pow(&a, exponent);
    Ok(Lemma32Report {
        h_pairing_ok: h_pairing == a,
        mixed_integral_ok: mixed_integral == expected,
        nu_ok: nu >= exponent,
        a,
        exponent,
        h_pairing,
        mixed_integral,
        nu,
        asserted_nef: x.asserted_nef(),
    })
}

/// ∫x^(k-1) β for the leading eigenvector β; zero for any fixed x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentCheck {
    pub value: BigRational,
    pub slack: BigRational,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Thm12Verdict {
    Consistent,
    /// A fixed nef class with ν ≥ k-1 and positive entropy: no holomorphic
    /// automorphism acts this way.
    NotRealizable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm12Report {
    pub verdict: Thm12Verdict,
    pub nu: usize,
    pub entropy: Entropy,
    pub descent: Option<DescentCheck>,
}

/// Checks that x is fixed, asserted nef (with passing checks) and has
/// ν(x) ≥ k-1, then relates the entropy of the action to the conclusion
/// that such actions have zero entropy.
pub fn thm12_verify(action: &PullbackAction, x: &NefAssertion, tol: &BigRational) -> Result<Thm12Report> {
    let ring = action.ring();
    require_ring(ring, x.class())?;
    let k = ring.k();
    let class = x.class();
    let mut reasons = vec![];
    if &action.apply(class)? != class {
        reasons.push("f*α ≠ α".to_string());
    }
    let nu = if class.is_zero() {
        reasons.push("α = 0".to_string());
        0
    } else {
        let nu = numerical_dimension(ring, class)?;
        if nu + 1 < k {
            reasons.push(format!("ν(α) = {nu} < {}", k - 1));
        }
        nu
    };
    if !x.asserted_nef() {
        reasons.push("α is not asserted nef".to_string());
    }
    let rechecked = nef_necessary_check(ring, class)?;
    for c in rechecked.failures().chain(x.failures()) {
        reasons.push(format!("nef necessary check failed: {} = {}", c.label, rational_string(&c.value)));
    }
    if !reasons.is_empty() {
        return Err(Error::HypothesesNotMet(reasons));
    }
    let entropy = dynamical_degrees(action, tol)?.entropy;
    let descent = match pf_eigenvector(action, tol)? {
        PfOutcome::Expanding { vector, .. } => {
            let beta = ring.parse_class(&vector.iter().map(|&c| from_f64(c)).collect::<Vec<_>>())?;
            let value = ring.integrate(&ring.mul(&ring.pow(class, k - 1)?, &beta)?)?;
            let slack = slack_for(ring, tol) * nu_scale(ring, class);
            let passed = value.abs() <= slack;
            Some(DescentCheck { value, slack, passed })
        }
        _ => None,
    };
    let verdict = if entropy.is_positive() { Thm12Verdict::NotRealizable } else { Thm12Verdict::Consistent };
    Ok(Thm12Report { verdict, nu, entropy, descent })
}

/// Size of x^(k-1) for scaling the descent slack.
fn nu_scale(ring: &RingModel, x: &GradedClass) -> BigRational {
    let m =
        ring.coefficients(x, 1).iter().map(|c| c.abs()).max().unwrap_or_else(BigRational::one).max(BigRational::one());
    num_traits::pow::Pow::pow(&m, ring.k() - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakFanoReport {
    pub anticanonical: GradedClass,
    /// ∫(-K)^k.
    pub volume: BigRational,
    pub nef: NefAssertion,
}

impl WeakFanoReport {
    pub fn big(&self) -> bool {
        self.volume.is_positive()
    }

    /// -K is big and passes every necessary nef check; nef-ness itself
    /// remains an assertion.
    pub fn consistent(&self) -> bool {
        self.big() && self.nef.checks_pass()
    }
}

pub fn weak_fano_report(ring: &RingModel) -> Result<WeakFanoReport> {
    let anticanonical = -&ring.canonical_class();
    let volume = ring.integrate(&ring.pow(&anticanonical, ring.k())?)?;
    let nef = nef_necessary_check(ring, &anticanonical)?;
    Ok(WeakFanoReport { anticanonical, volume, nef })
}

impl fmt::Display for ColinearityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColinearityVerdict::Colinear(c) => write!(f, "colinear (y = {} x)", rational_string(c)),
            ColinearityVerdict::NotColinear(w) => write!(f, "not colinear: {w}"),
            ColinearityVerdict::NotApplicable(r) => write!(f, "not applicable: {r}"),
        }
    }
}
