mod oracle;

use std::sync::Arc;

use blowent_core::lattice::{coxeter_action, permutation_action};
use blowent_core::matrix::IntMatrix;
use blowent_core::numeric::ln_up;
use blowent_core::poly::IntPolynomial;
use blowent_core::ring::{BlowupConfig, RingModel};
use blowent_core::spectral::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn surface(m: usize) -> Arc<RingModel> {
    Arc::new(RingModel::new(BlowupConfig::points(2, m).unwrap()).unwrap())
}

fn companion(coeffs: &[i64]) -> IntMatrix {
    // ascending, monic
    let n = coeffs.len() - 1;
    let mut rows = vec![vec![0i64; n]; n];
    for i in 1..n {
        rows[i][i - 1] = 1;
    }
    for i in 0..n {
        rows[i][n - 1] = -coeffs[i];
    }
    IntMatrix::from_rows(&rows)
}

#[test]
fn e10_char_poly_matches_oracle() {
    let rows = oracle::e10_coxeter_rows();
    let m = IntMatrix::from_rows(&rows);
    let cp = char_poly(&m);
    assert_eq!(cp.coeffs(), &oracle::char_poly_by_interpolation(&rows)[..]);
    assert!(IntPolynomial::from_i64(&oracle::LEHMER).divides(&cp));
    assert!(!is_cyclotomic_product(&cp));
}

#[test]
fn e10_lehmer_enclosure() {
    let action = coxeter_action(surface(10)).unwrap();
    assert_eq!(action.matrix().to_rows(), IntMatrix::from_rows(&oracle::e10_coxeter_rows()).to_rows());
    let tol = default_tol();
    let seq = dynamical_degrees(&action, &tol).unwrap();
    let (olo, ohi) = oracle::largest_real_root(&oracle::LEHMER, 1, &oracle::rational(1, 1_000_000_000_000));
    let l1 = seq.get(1);
    assert!(l1.lo <= ohi && olo <= l1.hi, "{l1}");
    assert!(l1.width() <= tol);
    assert!(l1.lo >= oracle::rational(1_176_280_818, 1_000_000_000));
    assert!(l1.hi <= oracle::rational(1_176_280_819, 1_000_000_000));
    assert!(seq.get(0).exact_one && seq.get(2).exact_one);
    assert!(seq.entropy.lo >= oracle::rational(162_357_612, 1_000_000_000));
    assert!(seq.entropy.hi <= oracle::rational(162_357_613, 1_000_000_000));
}

#[test]
fn golden_enclosure() {
    let tol = default_tol();
    let e = spectral_radius(&companion(&oracle::GOLDEN), &tol).unwrap();
    let (olo, ohi) = oracle::largest_real_root(&oracle::GOLDEN, 1, &oracle::rational(1, 1_000_000_000_000));
    assert!(e.lo <= ohi && olo <= e.hi);
    assert!(e.width() <= tol);
}

#[test]
fn identity_and_permutations_have_exact_zero_entropy() {
    let tol = default_tol();
    let r = surface(4);
    let id = blowent_core::action::PullbackAction::identity(r.clone());
    let seq = dynamical_degrees(&id, &tol).unwrap();
    assert!(seq.degrees.iter().all(|d| d.exact_one));
    assert!(seq.entropy.exact_zero);
    let perm = permutation_action(r, &[1, 2, 3, 0]).unwrap();
    let seq = dynamical_degrees(&perm, &tol).unwrap();
    assert!(seq.entropy.exact_zero);
    assert!(seq.char_polys.iter().all(is_cyclotomic_product));
}

#[test]
fn degree_inequalities_hold_on_e10() {
    let action = coxeter_action(surface(10)).unwrap();
    let rep = lemma21_report(&action, &default_tol()).unwrap();
    for c in &rep.checks {
        assert_eq!(c.truth, Truth::Pass, "{}", c.statement);
    }
    assert_eq!(rep.forward.get(1).witness, rep.backward.get(1).witness);
}

#[test]
fn degree_inequalities_on_threefold_permutation() {
    let r = Arc::new(RingModel::new(BlowupConfig::new(5, vec![1, 1, 0]).unwrap()).unwrap());
    let perm = permutation_action(r, &[1, 0, 2]).unwrap();
    let rep = lemma21_report(&perm, &default_tol()).unwrap();
    assert_eq!(rep.overall(), Truth::Pass);
}

fn perron_poly() -> impl Strategy<Value = Vec<i64>> {
    // x^n - c_{n-1} x^{n-1} - ... - c_0 with c_i >= 0, c_0 >= 1 and sum >= 2:
    // the unique positive root is the largest modulus and p(1) < 0
    (2usize..=7)
        .prop_flat_map(|n| proptest::collection::vec(0i64..=3, n))
        .prop_filter("needs c_0 >= 1 and sum >= 2", |c| c[0] >= 1 && c.iter().sum::<i64>() >= 2)
        .prop_map(|c| {
            let mut p: Vec<i64> = c.iter().map(|x| -x).collect();
            p.push(1);
            p
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn berkowitz_matches_interpolation(rows in (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(-4i64..=4, n), n)
    })) {
        let m = IntMatrix::from_rows(&rows);
        let cp = char_poly(&m);
        prop_assert_eq!(cp.coeffs(), &oracle::char_poly_by_interpolation(&rows)[..]);
    }

    #[test]
    fn enclosure_contains_bisection_root(p in perron_poly()) {
        let tol = default_tol();
        let e = spectral_radius(&companion(&p), &tol).unwrap();
        let (olo, ohi) = oracle::largest_real_root(&p, 1, &oracle::rational(1, 1_000_000_000_000_000));
        prop_assert!(e.lo <= ohi && olo <= e.hi, "{} vs [{}, {}]", e, olo, ohi);
        prop_assert!(e.width() <= tol);
        prop_assert!(!e.exact_one);
        prop_assert!(ln_up(&e.hi) > BigRational::from_integer(0.into()));
    }

    #[test]
    fn cyclotomic_products_are_detected(ns in proptest::collection::vec(1u64..=30, 1..4), extra in 0usize..3) {
        let mut p = IntPolynomial::one();
        for n in &ns {
            p = p.mul(&blowent_core::poly::cyclotomic(*n));
        }
        let mut xs = vec![BigInt::from(0); extra];
        xs.push(BigInt::one());
        p = p.mul(&IntPolynomial::new(xs));
        prop_assert!(is_cyclotomic_product(&p));
        let bumped = p.mul(&IntPolynomial::from_i64(&[-1, -1, 1]));
        prop_assert!(!is_cyclotomic_product(&bumped));
    }
}
