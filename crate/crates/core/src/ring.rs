//! Even cohomology ring of P^k blown up along disjoint linear centers.
//!
//! Generators are `h` (pullback of the hyperplane class) and one exceptional
//! class `e_i` per center. For a center of dimension `r` and codimension
//! `c = k - r` the relations are
//!
//! * `h^(r+1) * e_i = 0`
//! * `(h - e_i)^c = 0`, used as a rewrite of `e_i^c` into lower powers
//! * `e_i * e_j = 0` for `i != j`
//!
//! with the normalization `∫ h^k = 1`. Every product of basis monomials
//! reduces to an integral combination of basis monomials, so classes with
//! integral coefficients stay integral.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlowupConfig {
    k: usize,
    centers: Vec<usize>,
}

impl BlowupConfig {
    /// `centers[i]` is the dimension of the i-th center. Centers of
    /// positive dimension are linear subspaces in general position, which
    /// forces `r_i + r_j < k` for them to be disjoint.
    pub fn new(k: usize, centers: Vec<usize>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidConfig(format!("ambient dimension {k} < 2")));
        }
        if let Some((i, r)) = centers.iter().enumerate().find(|(_, &r)| r + 2 > k) {
            return Err(Error::InvalidConfig(format!(
                "center {} has dimension {r}, must be at most k - 2 = {}",
                i + 1,
                k - 2
            )));
        }
        for (i, &ri) in centers.iter().enumerate() {
            for (j, &rj) in centers.iter().enumerate().skip(i + 1) {
                if ri + rj >= k {
                    return Err(Error::InvalidConfig(format!(
                        "linear centers {} and {} (dimensions {ri}, {rj}) cannot be disjoint in P^{k}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { k, centers })
    }

    pub fn points(k: usize, m: usize) -> Result<Self> {
        Self::new(k, vec![0; m])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    pub fn num_centers(&self) -> usize {
        self.centers.len()
    }

    /// Largest center dimension, 0 when there are no centers.
    pub fn max_center_dim(&self) -> usize {
        self.centers.iter().copied().max().unwrap_or(0)
    }

    pub fn codim(&self, i: usize) -> usize {
        self.k - self.centers[i]
    }

    /// Closed-form rank of the degree-p part.
    pub fn expected_rank(&self, p: usize) -> usize {
        if p == 0 || p == self.k {
            return 1;
        }
        if p > self.k {
            return 0;
        }
        1 + self
            .centers
            .iter()
            .map(|&r| {
                let lo = p.saturating_sub(self.k - r - 1);
                let hi = r.min(p - 1);
                if hi >= lo {
                    hi - lo + 1
                } else {
                    0
                }
            })
            .sum::<usize>()
    }
}

/// `PureH(p)` is h^p. `Mixed { center, h, e }` is h^h * e_center^e, with
/// `center` zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisMonomial {
    PureH(usize),
    Mixed { center: usize, h: usize, e: usize },
}

impl BasisMonomial {
    pub fn degree(&self) -> usize {
        match *self {
            BasisMonomial::PureH(p) => p,
            BasisMonomial::Mixed { h, e, .. } => h + e,
        }
    }

    fn split(&self) -> (usize, Option<(usize, usize)>) {
        match *self {
            BasisMonomial::PureH(p) => (p, None),
            BasisMonomial::Mixed { center, h, e } => (h, Some((center, e))),
        }
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hpart = |p: usize| match p {
            0 => String::new(),
            1 => "h".to_string(),
            _ => format!("h^{p}"),
        };
        match *self {
            BasisMonomial::PureH(0) => write!(f, "1"),
            BasisMonomial::PureH(p) => write!(f, "{}", hpart(p)),
            BasisMonomial::Mixed { center, h, e } => {
                let epart = if e == 1 { format!("e{}", center + 1) } else { format!("e{}^{e}", center + 1) };
                if h == 0 {
                    write!(f, "{epart}")
                } else {
                    write!(f, "{}*{epart}", hpart(h))
                }
            }
        }
    }
}

/// An element of the ring: degree -> coefficients over that degree's basis.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedClass {
    ring_id: u64,
    parts: BTreeMap<usize, Vec<BigRational>>,
}

impl GradedClass {
    fn normalized(ring_id: u64, mut parts: BTreeMap<usize, Vec<BigRational>>) -> Self {
        parts.retain(|_, v| v.iter().any(|c| !c.is_zero()));
        Self { ring_id, parts }
    }

    pub fn ring_id(&self) -> u64 {
        self.ring_id
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Coefficients of the degree-p part, or `None` when it is zero.
    pub fn part(&self, p: usize) -> Option<&[BigRational]> {
        self.parts.get(&p).map(Vec::as_slice)
    }

    pub fn parts(&self) -> impl Iterator<Item = (usize, &[BigRational])> {
        self.parts.iter().map(|(&p, v)| (p, v.as_slice()))
    }

    /// The single degree of a nonzero homogeneous class.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.parts.keys();
        match (it.next(), it.next()) {
            (Some(&p), None) => Some(p),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let parts = self.parts.iter().map(|(&p, v)| (p, v.iter().map(|x| x * c).collect())).collect();
        Self::normalized(self.ring_id, parts)
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        assert_eq!(self.ring_id, other.ring_id, "classes from different rings");
        let mut parts = self.parts.clone();
        let s = BigRational::from_integer(BigInt::from(sign));
        for (&p, v) in &other.parts {
            let entry = parts.entry(p).or_insert_with(|| vec![BigRational::zero(); v.len()]);
            for (a, b) in entry.iter_mut().zip(v) {
                *a += b * &s;
            }
        }
        Self::normalized(self.ring_id, parts)
    }
}

impl Add for &GradedClass {
    type Output = GradedClass;

    fn add(self, rhs: &GradedClass) -> GradedClass {
        self.combine(rhs, 1)
    }
}

impl Sub for &GradedClass {
    type Output = GradedClass;

    fn sub(self, rhs: &GradedClass) -> GradedClass {
        self.combine(rhs, -1)
    }
}

impl Neg for &GradedClass {
    type Output = GradedClass;

    fn neg(self) -> GradedClass {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (p, v) in &self.parts {
            let s: Vec<String> = v.iter().map(crate::numeric::rational_string).collect();
            m.entry(p, &s);
        }
        m.finish()
    }
}

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

/// Sparse integral combination in one degree: (basis index, coefficient).
type Sparse = Vec<(usize, BigInt)>;

#[derive(Debug)]
pub struct RingModel {
    id: u64,
    config: BlowupConfig,
    basis: Vec<Vec<BasisMonomial>>,
    index: HashMap<BasisMonomial, usize>,
    /// `reductions[i][(a, b)]` is the normal form of h^a e_i^b, b >= 1.
    reductions: Vec<HashMap<(usize, usize), Sparse>>,
}

/// Builds the ring of the given blow-up.
pub fn build_ring(config: BlowupConfig) -> Result<RingModel> {
    RingModel::new(config)
}

impl RingModel {
    pub fn new(config: BlowupConfig) -> Result<Self> {
        // re-validate in case the config was built by hand in this crate
        let config = BlowupConfig::new(config.k, config.centers)?;
        let k = config.k;
        let mut basis = vec![Vec::new(); k + 1];
        for (p, deg) in basis.iter_mut().enumerate() {
            deg.push(BasisMonomial::PureH(p));
            if p == 0 || p == k {
                continue;
            }
            for (i, &r) in config.centers.iter().enumerate() {
                let c = k - r;
                for a in 0..=r.min(p - 1) {
                    let b = p - a;
                    if b < c {
                        deg.push(BasisMonomial::Mixed { center: i, h: a, e: b });
                    }
                }
            }
        }
        let index = basis.iter().flat_map(|deg| deg.iter().enumerate().map(|(i, m)| (*m, i))).collect();
        let mut ring =
            Self { id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed), config, basis, index, reductions: vec![] };
        ring.reductions = (0..ring.config.num_centers()).map(|i| ring.build_reductions(i)).collect();
        Ok(ring)
    }

    /// Coefficients of e^c = sum_{j<c} coeff_j h^(c-j) e^j from (h - e)^c = 0.
    fn epower_rule(c: usize) -> Vec<BigInt> {
        (0..c)
            .map(|j| {
                let sign = if (c - j + 1) % 2 == 0 { 1 } else { -1 };
                binomial(c, j) * BigInt::from(sign)
            })
            .collect()
    }

    fn build_reductions(&self, i: usize) -> HashMap<(usize, usize), Sparse> {
        let k = self.config.k;
        let r = self.config.centers[i];
        let c = k - r;
        let rule = Self::epower_rule(c);
        let mut table: HashMap<(usize, usize), Sparse> = HashMap::new();
        // increasing e-power; every rewrite strictly lowers it
        for b in 1..=k {
            for a in 0..=k - b {
                let nf: Sparse = if a > r {
                    vec![]
                } else if b < c {
                    vec![(self.index[&BasisMonomial::Mixed { center: i, h: a, e: b }], BigInt::one())]
                } else {
                    let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                    for (j, coeff) in rule.iter().enumerate() {
                        let (na, nb) = (a + c - j, b - c + j);
                        let sub: Sparse = if nb == 0 { vec![(0, BigInt::one())] } else { table[&(na, nb)].clone() };
                        for (idx, v) in sub {
                            *acc.entry(idx).or_default() += coeff * v;
                        }
                    }
                    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
                };
                table.insert((a, b), nf);
            }
        }
        table
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn config(&self) -> &BlowupConfig {
        &self.config
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn num_centers(&self) -> usize {
        self.config.num_centers()
    }

    pub fn rank(&self, p: usize) -> usize {
        self.basis.get(p).map_or(0, Vec::len)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, p: usize) -> &[BasisMonomial] {
        &self.basis[p]
    }

    pub fn basis_index(&self, m: &BasisMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn zero(&self) -> GradedClass {
        GradedClass::normalized(self.id, BTreeMap::new())
    }

    pub fn one(&self) -> GradedClass {
        self.monomial(BasisMonomial::PureH(0))
    }

    pub fn monomial(&self, m: BasisMonomial) -> GradedClass {
        let p = m.degree();
        let mut v = vec![BigRational::zero(); self.rank(p)];
        v[self.index[&m]] = BigRational::one();
        GradedClass::normalized(self.id, BTreeMap::from([(p, v)]))
    }

    pub fn h(&self) -> GradedClass {
        self.monomial(BasisMonomial::PureH(1))
    }

    /// Exceptional class of center `i` (zero-based).
    pub fn e(&self, i: usize) -> GradedClass {
        self.monomial(BasisMonomial::Mixed { center: i, h: 0, e: 1 })
    }

    /// Homogeneous class from coefficients over the degree-p basis.
    pub fn class_in_degree(&self, p: usize, coeffs: Vec<BigRational>) -> Result<GradedClass> {
        if coeffs.len() != self.rank(p) {
            return Err(Error::LengthMismatch { expected: self.rank(p), got: coeffs.len() });
        }
        Ok(GradedClass::normalized(self.id, BTreeMap::from([(p, coeffs)])))
    }

    /// Degree-1 class from coefficients ordered `[h, e_1, ..., e_m]`.
    pub fn parse_class(&self, coeffs: &[BigRational]) -> Result<GradedClass> {
        self.class_in_degree(1, coeffs.to_vec())
    }

    /// Degree-p coefficient vector, zeros when the part is absent.
    pub fn coefficients(&self, x: &GradedClass, p: usize) -> Vec<BigRational> {
        x.part(p).map_or_else(|| vec![BigRational::zero(); self.rank(p)], <[_]>::to_vec)
    }

    fn check(&self, x: &GradedClass) -> Result<()> {
        if x.ring_id != self.id {
            return Err(Error::BasisMismatch);
        }
        Ok(())
    }

    /// Normal form of the product of two basis monomials.
    pub fn basis_product(&self, x: BasisMonomial, y: BasisMonomial) -> Sparse {
        let (hx, ex) = x.split();
        let (hy, ey) = y.split();
        let a = hx + hy;
        let e = match (ex, ey) {
            (None, None) => None,
            (Some(e), None) | (None, Some(e)) => Some(e),
            (Some((i, b1)), Some((j, b2))) => {
                if i != j {
                    return vec![];
                }
                Some((i, b1 + b2))
            }
        };
        let deg = a + e.map_or(0, |(_, b)| b);
        if deg > self.k() {
            return vec![];
        }
        match e {
            None => vec![(0, BigInt::one())],
            Some((i, b)) => self.reductions[i][&(a, b)].clone(),
        }
    }

    pub fn mul(&self, x: &GradedClass, y: &GradedClass) -> Result<GradedClass> {
        self.check(x)?;
        self.check(y)?;
        let mut out: BTreeMap<usize, Vec<BigRational>> = BTreeMap::new();
        for (&p, xv) in &x.parts {
            for (&q, yv) in &y.parts {
                if p + q > self.k() {
                    continue;
                }
                let target = out.entry(p + q).or_insert_with(|| vec![BigRational::zero(); self.rank(p + q)]);
                for (a, xa) in xv.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    for (b, yb) in yv.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        let prod = xa * yb;
                        for (idx, v) in self.basis_product(self.basis[p][a], self.basis[q][b]) {
                            target[idx] += &prod * BigRational::from_integer(v);
                        }
                    }
                }
            }
        }
        Ok(GradedClass::normalized(self.id, out))
    }

    pub fn pow(&self, x: &GradedClass, n: usize) -> Result<GradedClass> {
        self.check(x)?;
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, x)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Product of a list of classes; the empty product is 1.
    pub fn product(&self, xs: &[GradedClass]) -> Result<GradedClass> {
        xs.iter().try_fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// ∫_X x, the h^k coefficient of the top-degree part.
    pub fn integrate(&self, x: &GradedClass) -> Result<BigRational> {
        self.check(x)?;
        Ok(x.part(self.k()).map_or_else(BigRational::zero, |v| v[0].clone()))
    }

    pub fn pairing(&self, x: &GradedClass, y: &GradedClass) -> Result<BigRational> {
        self.integrate(&self.mul(x, y)?)
    }

    /// Integer matrix of ∫ b_i b'_j for b in degree p and b' in degree k - p.
    pub fn pairing_matrix(&self, p: usize) -> IntMatrix {
        let q = self.k() - p;
        let mut m = IntMatrix::zeros(self.rank(p), self.rank(q));
        for (i, &x) in self.basis[p].iter().enumerate() {
            for (j, &y) in self.basis[q].iter().enumerate() {
                if let Some((_, v)) = self.basis_product(x, y).into_iter().find(|(idx, _)| *idx == 0) {
                    m[(i, j)] = v;
                }
            }
        }
        m
    }

    /// K_X = -(k+1) h + sum_i (k - 1 - r_i) e_i.
    pub fn canonical_class(&self) -> GradedClass {
        let k = self.k() as i64;
        let mut coeffs = vec![BigRational::from_integer(BigInt::from(-(k + 1)))];
        coeffs.extend(self.config.centers.iter().map(|&r| BigRational::from_integer(BigInt::from(k - 1 - r as i64))));
        self.class_in_degree(1, coeffs).expect("rank of degree 1 is 1 + m")
    }

    /// The unique degree-(k-1) class pairing to -1 with `e_i` and to 0 with
    /// every other degree-1 basis element: the class of a line in a fiber of
    /// the exceptional divisor over center `i`.
    pub fn fiber_curve(&self, i: usize) -> GradedClass {
        let mut target = vec![BigRational::zero(); self.rank(1)];
        target[1 + i] = -BigRational::one();
        self.dual_curve(target)
    }

    /// Degree-(k-1) class with prescribed pairings against [h, e_1, ..].
    pub fn dual_curve(&self, pairings: Vec<BigRational>) -> GradedClass {
        let pm = self.pairing_matrix(1);
        // pairings = pm * coeffs
        let inv = pm.rational_inverse().expect("degree-1 pairing is nondegenerate");
        let coeffs: Vec<BigRational> =
            inv.iter().map(|row| row.iter().zip(&pairings).map(|(a, b)| a * b).sum()).collect();
        self.class_in_degree(self.k() - 1, coeffs).expect("rank matches")
    }

    /// Applies relations in an order picked by `choose`, starting from
    /// h^a * prod e_i^(b_i). `choose` receives the applicable steps and
    /// returns the index of the one to apply. Used to check that the
    /// reduction system is confluent.
    pub fn rewrite_with<F>(&self, start: &RawMonomial, mut choose: F) -> BTreeMap<BasisMonomial, BigInt>
    where
        F: FnMut(&[RewriteStep]) -> usize,
    {
        let k = self.k();
        let mut poly: BTreeMap<RawMonomial, BigInt> = BTreeMap::from([(start.clone(), BigInt::one())]);
        loop {
            let mut steps = vec![];
            for m in poly.keys() {
                let deg = m.h + m.e.iter().sum::<usize>();
                if deg > k {
                    steps.push(RewriteStep { monomial: m.clone(), rule: Rule::DegreeOverflow });
                }
                let live: Vec<usize> = (0..m.e.len()).filter(|&i| m.e[i] > 0).collect();
                for (x, &i) in live.iter().enumerate() {
                    for &j in &live[x + 1..] {
                        steps.push(RewriteStep { monomial: m.clone(), rule: Rule::Disjoint(i, j) });
                    }
                    if m.h > self.config.centers[i] {
                        steps.push(RewriteStep { monomial: m.clone(), rule: Rule::HAnnihilates(i) });
                    }
                    if m.e[i] >= self.config.codim(i) {
                        steps.push(RewriteStep { monomial: m.clone(), rule: Rule::ExceptionalPower(i) });
                    }
                }
            }
            if steps.is_empty() {
                break;
            }
            let step = &steps[choose(&steps)];
            let coeff = poly.remove(&step.monomial).expect("step monomial present");
            if let Rule::ExceptionalPower(i) = step.rule {
                let c = self.config.codim(i);
                for (j, rc) in Self::epower_rule(c).into_iter().enumerate() {
                    let mut m = step.monomial.clone();
                    m.h += c - j;
                    m.e[i] = m.e[i] - c + j;
                    let entry = poly.entry(m).or_default();
                    *entry += &coeff * rc;
                }
                poly.retain(|_, v| !v.is_zero());
            }
        }
        poly.into_iter()
            .map(|(m, v)| {
                let basis = match m.e.iter().position(|&b| b > 0) {
                    None => BasisMonomial::PureH(m.h),
                    Some(i) => BasisMonomial::Mixed { center: i, h: m.h, e: m.e[i] },
                };
                (basis, v)
            })
            .collect()
    }

    /// Normal form through the precomputed tables, for comparison with
    /// [`RingModel::rewrite_with`].
    pub fn reduce_raw(&self, m: &RawMonomial) -> BTreeMap<BasisMonomial, BigInt> {
        let deg = m.h + m.e.iter().sum::<usize>();
        if deg > self.k() {
            return BTreeMap::new();
        }
        let mut acc = self.monomial(BasisMonomial::PureH(m.h));
        for (i, &b) in m.e.iter().enumerate() {
            for _ in 0..b {
                acc = self.mul(&acc, &self.e(i)).expect("same ring");
            }
        }
        acc.part(deg)
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(idx, c)| (self.basis[deg][idx], c.to_integer()))
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// A not-yet-reduced monomial h^h * prod_i e_i^(e[i]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RawMonomial {
    pub h: usize,
    pub e: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    DegreeOverflow,
    Disjoint(usize, usize),
    HAnnihilates(usize),
    ExceptionalPower(usize),
}

#[derive(Debug, Clone)]
pub struct RewriteStep {
    pub monomial: RawMonomial,
    pub rule: Rule,
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}
