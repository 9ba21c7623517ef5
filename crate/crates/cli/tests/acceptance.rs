//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;
#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use blowent_core::action::PullbackAction;
use blowent_core::document::{load, parse_document, save};
use blowent_core::gate::{decide, gate_table};
use blowent_core::lattice::{coxeter_action, permutation_action, reflection};
use blowent_core::positivity::{
    lemma32_check, nef_necessary_check, thm12_verify, weak_fano_report, NefAssertion, Thm12Verdict,
};
use blowent_core::ring::{BlowupConfig, GradedClass, RingModel};
use blowent_core::spectral::{default_tol, dynamical_degrees, is_cyclotomic_product, lemma21_report, Truth};
use blowent_core::{Error, IntMatrix};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ring(k: usize, centers: &[usize]) -> Arc<RingModel> {
    Arc::new(RingModel::new(BlowupConfig::new(k, centers.to_vec()).unwrap()).unwrap())
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Sorted center-dimension lists of length <= max_m valid in dimension k.
fn configs(k: usize, max_m: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, max_m: usize, min_r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == max_m {
            return;
        }
        for r in min_r..=k - 2 {
            if cur.iter().all(|&s| s + r < k) {
                cur.push(r);
                go(k, max_m, r, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = vec![];
    go(k, max_m, 0, &mut vec![], &mut out);
    out
}

/// Rank of degree p: one from P^k plus, for each center of dimension r and
/// codimension c, one class h^a e^j for 1 <= j <= c-1 and 0 <= a <= r with
/// a + j = p.
fn counted_rank(k: usize, centers: &[usize], p: usize) -> usize {
    1 + centers.iter().map(|&r| (1..k - r).filter(|&j| j <= p && p - j <= r).count()).sum::<usize>()
}

fn gate_table_criterion() -> Outcome {
    let table = gate_table(20);
    ensure!(table.len() == (2..=20).map(|k| k - 1).sum::<usize>(), "table has {} rows", table.len());
    for (k, r, forced) in table {
        ensure!(forced == (k > 2 * r + 2), "k={k} r={r} forced={forced}");
    }
    ensure!(decide(3, &[0, 0, 0, 0]).unwrap().is_forced(), "(3, points) not forced");
    ensure!(!decide(4, &[1]).unwrap().is_forced(), "(4, r=1) forced");
    ensure!(decide(7, &[2]).unwrap().is_forced(), "(7, r=2) not forced");
    Ok(())
}

fn ring_criterion() -> Outcome {
    let mut rings = 0;
    for k in 2..=8 {
        for centers in configs(k, 6) {
            let r = ring(k, &centers);
            rings += 1;
            for p in 0..=k {
                ensure!(
                    r.rank(p) == counted_rank(k, &centers, p),
                    "k={k} centers={centers:?} p={p}: rank {} vs {}",
                    r.rank(p),
                    counted_rank(k, &centers, p)
                );
                ensure!(r.rank(p) == r.rank(k - p), "k={k} centers={centers:?}: not symmetric at p={p}");
                ensure!(!r.pairing_matrix(p).det().is_zero(), "k={k} centers={centers:?}: degenerate pairing at p={p}");
            }
            let hk1 = r.pow(&r.h(), k - 1).unwrap();
            for i in 0..centers.len() {
                let v = r.integrate(&r.mul(&r.e(i), &hk1).unwrap()).unwrap();
                ensure!(v.is_zero(), "k={k} centers={centers:?}: ∫e{} h^(k-1) = {v}", i + 1);
            }
        }
    }
    let cube = |centers: &[usize]| {
        let r = ring(3, centers);
        r.integrate(&r.pow(&r.e(0), 3).unwrap()).unwrap()
    };
    ensure!(cube(&[0]) == q(oracle::BL_PT_P3_E_CUBED), "Bl_pt P^3: e^3 = {}", cube(&[0]));
    ensure!(cube(&[1]) == q(oracle::BL_LINE_P3_E_CUBED), "Bl_line P^3: e^3 = {}", cube(&[1]));
    ensure!(rings > 1000, "only {rings} configurations");
    Ok(())
}

fn leading_term_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e32);
    let pool: Vec<(usize, Vec<usize>)> = (2..=6).flat_map(|k| configs(k, 3).into_iter().map(move |c| (k, c))).collect();
    for n in 0..200 {
        let (k, centers) = pool.choose(&mut rng).unwrap().clone();
        let r = ring(k, &centers);
        let a = BigRational::new(rng.gen_range(1..=9).into(), rng.gen_range(1..=4).into());
        let mut coeffs = vec![a.clone()];
        coeffs.extend(
            (0..centers.len()).map(|_| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into())),
        );
        let x = r.parse_class(&coeffs).unwrap();
        let rep = lemma32_check(&r, &nef_necessary_check(&r, &x).unwrap()).map_err(|e| e.to_string())?;
        let rmax = centers.iter().copied().max().unwrap_or(0);
        let e = k - rmax - 1;
        let direct = r.integrate(&r.mul(&r.pow(&x, e).unwrap(), &r.pow(&r.h(), rmax + 1).unwrap()).unwrap()).unwrap();
        let want = num_traits::pow(a.clone(), e);
        ensure!(
            rep.mixed_integral == want && direct == want && rep.h_pairing == a,
            "sample {n}: k={k} centers={centers:?} x={coeffs:?}: {} vs a^{e} = {want}",
            rep.mixed_integral
        );
    }
    Ok(())
}

fn e10() -> PullbackAction {
    coxeter_action(ring(2, &[0; 10])).unwrap()
}

fn lehmer_criterion() -> Outcome {
    let seq = dynamical_degrees(&e10(), &default_tol()).map_err(|e| e.to_string())?;
    let l1 = seq.get(1);
    ensure!(
        l1.lo >= BigRational::new(1_176_280_818.into(), 1_000_000_000.into())
            && l1.hi <= BigRational::new(1_176_280_819.into(), 1_000_000_000.into()),
        "λ_1 enclosure [{}, {}] outside window",
        l1.lo,
        l1.hi
    );
    let h = &seq.entropy;
    ensure!(
        h.lo >= BigRational::new(162_357_612.into(), 1_000_000_000.into())
            && h.hi <= BigRational::new(162_357_613.into(), 1_000_000_000.into()),
        "entropy enclosure [{}, {}] outside window",
        h.lo,
        h.hi
    );
    ensure!(l1.width() <= default_tol(), "λ_1 width {} above tolerance", l1.width());
    ensure!(seq.get(0).exact_one && seq.get(2).exact_one, "λ_0 or λ_2 not exactly 1");
    let (_, rem) = oracle::divide_monic(seq.char_polys[1].coeffs(), &oracle::LEHMER);
    ensure!(rem.iter().all(|c| c.is_zero()), "Lehmer polynomial does not divide the characteristic polynomial");
    let (blo, bhi) = oracle::largest_real_root(&oracle::LEHMER, 1, &oracle::rational(1, 1_000_000_000_000));
    ensure!(l1.lo <= bhi && blo <= l1.hi, "enclosure misses the bisection bracket [{blo}, {bhi}]");
    Ok(())
}

fn random_permutation(rng: &mut ChaCha8Rng, centers: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..centers.len()).collect();
    let dims: std::collections::BTreeSet<usize> = centers.iter().copied().collect();
    for d in dims {
        let idx: Vec<usize> = (0..centers.len()).filter(|&i| centers[i] == d).collect();
        let mut shuffled = idx.clone();
        shuffled.shuffle(rng);
        for (i, j) in idx.into_iter().zip(shuffled) {
            perm[i] = j;
        }
    }
    perm
}

/// A random -2 root on P^2 blown up in m points: e_i - e_j or
/// h - e_i - e_j - e_l.
fn random_root(rng: &mut ChaCha8Rng, m: usize) -> Vec<i64> {
    let mut idx: Vec<usize> = (1..=m).collect();
    idx.shuffle(rng);
    let mut v = vec![0; m + 1];
    if m >= 3 && rng.gen_bool(0.5) {
        v[0] = 1;
        for &i in &idx[..3] {
            v[i] = -1;
        }
    } else {
        v[idx[0]] = 1;
        v[idx[1]] = -1;
    }
    v
}

/// A random product of reflections in -2 roots.
fn random_weyl(rng: &mut ChaCha8Rng, r: &Arc<RingModel>, len: usize) -> PullbackAction {
    let m = r.num_centers();
    let mut w = IntMatrix::identity(m + 1);
    for _ in 0..len {
        w = &w * &reflection(r, &random_root(rng, m)).unwrap();
    }
    PullbackAction::new(r.clone(), "w", w).unwrap()
}

fn finite_order_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1);
    let mut count = 0;
    while count < 50 {
        let action = if count % 2 == 0 {
            let k = rng.gen_range(2..=5);
            let pool = configs(k, 4);
            let centers = pool.choose(&mut rng).unwrap();
            let perm = random_permutation(&mut rng, centers);
            permutation_action(ring(k, centers), &perm).unwrap()
        } else {
            let m = rng.gen_range(2..=8);
            let r = ring(2, &vec![0; m]);
            let g = permutation_action(r.clone(), &random_permutation(&mut rng, &vec![0; m])).unwrap();
            let len = rng.gen_range(1..=5);
            let w = random_weyl(&mut rng, &r, len);
            PullbackAction::compose(&PullbackAction::compose(&w, &g).unwrap(), &w.inverse().unwrap()).unwrap()
        };
        ensure!(action.is_valid(), "sample {count} is not a valid action");
        let k = action.ring().k();
        for p in 0..=k {
            let cp = blowent_core::char_poly(action.induce(p).unwrap());
            ensure!(is_cyclotomic_product(&cp), "sample {count}: degree {p} char poly {cp} not cyclotomic");
        }
        let seq = dynamical_degrees(&action, &default_tol()).map_err(|e| e.to_string())?;
        ensure!(
            seq.entropy.exact_zero && seq.entropy.hi.is_zero() && seq.degrees.iter().all(|d| d.exact_one),
            "sample {count}: entropy not exactly zero"
        );
        count += 1;
    }
    Ok(())
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in all_permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn inequalities_criterion() -> Outcome {
    let check = |a: &PullbackAction, what: &str| -> Outcome {
        let rep = lemma21_report(a, &default_tol()).map_err(|e| e.to_string())?;
        for c in &rep.checks {
            ensure!(c.truth == Truth::Pass, "{what}: ({}) {} is {}", c.property, c.statement, c.truth);
        }
        Ok(())
    };
    let mut configs_checked = 0;
    for k in 2..=5 {
        for centers in configs(k, 4) {
            let r = ring(k, &centers);
            check(&PullbackAction::identity(r.clone()), &format!("identity on k={k} {centers:?}"))?;
            for perm in all_permutations(centers.len()) {
                if perm.iter().enumerate().all(|(i, &j)| centers[i] == centers[j]) {
                    let a = permutation_action(r.clone(), &perm).unwrap();
                    check(&a, &format!("permutation {perm:?} on k={k} {centers:?}"))?;
                }
            }
            configs_checked += 1;
        }
    }
    check(&e10(), "E10 Coxeter")?;
    ensure!(configs_checked > 50, "only {configs_checked} configurations");
    Ok(())
}

fn functoriality_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfa);
    for n in 0..20 {
        let action = if n % 2 == 0 {
            let k = rng.gen_range(2..=5);
            let pool = configs(k, 4);
            let centers = pool.choose(&mut rng).unwrap();
            let perm = random_permutation(&mut rng, centers);
            permutation_action(ring(k, centers), &perm).unwrap()
        } else {
            let m = rng.gen_range(3..=10);
            let r = ring(2, &vec![0; m]);
            let len = rng.gen_range(1..=8);
            let w = random_weyl(&mut rng, &r, len);
            let c = coxeter_action(r).unwrap();
            PullbackAction::compose(&w, &c).unwrap()
        };
        ensure!(action.is_valid(), "sample {n} is not a valid action");
        let r = action.ring();
        let gens: Vec<GradedClass> = (0..r.rank(1))
            .map(|i| {
                let mut c = vec![BigRational::zero(); r.rank(1)];
                c[i] = BigRational::one();
                r.parse_class(&c).unwrap()
            })
            .collect();
        for x in &gens {
            for y in &gens {
                let lhs = action.apply(&r.mul(x, y).unwrap()).unwrap();
                let rhs = r.mul(&action.apply(x).unwrap(), &action.apply(y).unwrap()).unwrap();
                ensure!(lhs == rhs, "sample {n} ({}): f*(xy) ≠ f*(x) f*(y)", action.name());
            }
        }
    }
    Ok(())
}

fn fixed_class_criterion() -> Outcome {
    for (k, centers) in [(2, vec![0]), (3, vec![0]), (3, vec![1]), (2, vec![0; 10])] {
        let r = ring(k, &centers);
        let id = PullbackAction::identity(r.clone());
        let h = NefAssertion::assert_nef(&r, &r.h()).unwrap();
        let rep = thm12_verify(&id, &h, &default_tol()).map_err(|e| e.to_string())?;
        ensure!(rep.verdict == Thm12Verdict::Consistent, "identity on k={k} {centers:?}: {:?}", rep.verdict);
    }
    let a = e10();
    let h = NefAssertion::assert_nef(a.ring(), &a.ring().h()).unwrap();
    match thm12_verify(&a, &h, &default_tol()) {
        Err(Error::HypothesesNotMet(reasons)) => {
            ensure!(reasons.iter().any(|r| r == "f*α ≠ α"), "reasons {reasons:?}")
        }
        other => return Err(format!("E10 with h: {other:?}")),
    }
    Ok(())
}

fn fano_criterion() -> Outcome {
    for m in 0..=10usize {
        let r = ring(2, &vec![0; m]);
        let rep = weak_fano_report(&r).map_err(|e| e.to_string())?;
        let want = q(oracle::anticanonical_square_points_p2(m as i64));
        ensure!(rep.volume == want, "m={m}: (-K)^2 = {} vs {want}", rep.volume);
        if m <= 8 {
            ensure!(rep.consistent(), "m={m}: not consistent");
        }
        if m >= 10 {
            ensure!(!rep.consistent(), "m={m}: consistent");
        }
    }
    let rep = weak_fano_report(&ring(3, &[0])).map_err(|e| e.to_string())?;
    ensure!(rep.volume == q(oracle::BL_PT_P3_ANTICANONICAL_CUBE), "Bl_pt P^3: (-K)^3 = {}", rep.volume);
    Ok(())
}

fn cli_criterion() -> Outcome {
    for (doc, commands) in common::CASES {
        let d = load(&common::data(doc)).map_err(|e| e.to_string())?;
        let back = parse_document(&save(&d)).map_err(|e| e.to_string())?;
        ensure!(back == d, "{doc}: round trip changed the document");
        common::check_golden(doc, commands)?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("gate table for k <= 20", 1, gate_table_criterion),
        ("ring ranks, duality, pairings and cubes", 5, ring_criterion),
        ("leading-term identity on 200 random classes", 10, leading_term_criterion),
        ("Lehmer regression for the E10 Coxeter action", 1, lehmer_criterion),
        ("exact zero entropy for 50 finite-order actions", 10, finite_order_criterion),
        ("degree inequalities on identity, permutations, E10", 5, inequalities_criterion),
        ("functoriality on 20 random actions", 10, functoriality_criterion),
        ("fixed nef class verifier", 1, fixed_class_criterion),
        ("weak Fano volumes", 1, fano_criterion),
        ("CLI round trip and golden outputs", 5, cli_criterion),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed > Duration::from_secs(*budget) {
                Err(format!("took {elapsed:.2?}, budget {budget} s"))
            } else {
                Ok(())
            }
        });
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
