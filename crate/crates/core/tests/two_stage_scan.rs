//! Search for two-stage second-order N-split methods from random starts
//! with a complex Gauss-Newton iteration on the raw order conditions. For
//! N >= 3 every converged solution is CLT2 or its conjugate.

use nsplit::matrix::CMatrix;
use nsplit::splitting::{clt2, order_residuals, MethodTable};
use nsplit::{Complex, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Unknowns: a[0..n] first stage, a[n..2n] second stage.
fn residuals(a: &[C64], n: usize) -> Vec<C64> {
    let mut r = Vec::new();
    for l in 0..n {
        r.push(a[l] + a[n + l] - 1.0);
    }
    for l1 in 0..n {
        for l2 in l1 + 1..n {
            r.push(a[n + l1] * a[l2] - 0.5);
        }
    }
    r
}

fn jacobian(a: &[C64], n: usize) -> Vec<Vec<C64>> {
    let zero = Complex::new(0.0, 0.0);
    let mut rows = Vec::new();
    for l in 0..n {
        let mut row = vec![zero; 2 * n];
        row[l] = Complex::new(1.0, 0.0);
        row[n + l] = Complex::new(1.0, 0.0);
        rows.push(row);
    }
    for l1 in 0..n {
        for l2 in l1 + 1..n {
            let mut row = vec![zero; 2 * n];
            row[n + l1] = a[l2];
            row[l2] = a[n + l1];
            rows.push(row);
        }
    }
    rows
}

fn gauss_newton(mut a: Vec<C64>, n: usize) -> Option<Vec<C64>> {
    for _ in 0..200 {
        let r = residuals(&a, n);
        let norm: f64 = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-14 {
            return Some(a);
        }
        let j = jacobian(&a, n);
        // normal equations J^H J d = -J^H r
        let m = 2 * n;
        let jhj = CMatrix::from_fn(m, |p, q| j.iter().map(|row| row[p].conj() * row[q]).sum());
        let jhr: Vec<C64> = (0..m)
            .map(|p| -j.iter().zip(&r).map(|(row, ri)| row[p].conj() * ri).sum::<C64>())
            .collect();
        let d = jhj.solve(&jhr).ok()?;
        for (x, dx) in a.iter_mut().zip(&d) {
            *x += dx;
        }
        if a.iter().any(|z| !z.is_finite() || z.norm() > 1e6) {
            return None;
        }
    }
    None
}

#[test]
fn only_the_conjugate_pair_solves_the_two_stage_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 3..=6 {
        let mut found = [false, false];
        let mut converged = 0;
        for _ in 0..60 {
            let start: Vec<C64> = (0..2 * n)
                .map(|_| Complex::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
                .collect();
            let Some(a) = gauss_newton(start, n) else { continue };
            converged += 1;
            let first = Complex::new(0.5, 0.5);
            let which = if a[..n].iter().all(|z| (z - first).norm() < 1e-10) {
                0
            } else if a[..n].iter().all(|z| (z - first.conj()).norm() < 1e-10) {
                1
            } else {
                panic!("n = {n}: unexpected solution {a:?}");
            };
            found[which] = true;
            let t = MethodTable::from_stages("found", vec![a[..n].to_vec(), a[n..].to_vec()]).unwrap();
            let reference = clt2::<f64>(n, which == 1).unwrap();
            for (row, exp) in t.stages().iter().zip(reference.stages()) {
                for (x, e) in row.iter().zip(exp) {
                    assert!((x - e).norm() < 1e-10);
                }
            }
            assert_eq!(order_residuals(&t).satisfied_through, 2);
        }
        assert!(converged >= 10, "n = {n}: only {converged} starts converged");
        assert!(found[0] && found[1], "n = {n}: {found:?}");
    }
}

#[test]
fn two_operators_admit_a_family() {
    // N = 2 is underdetermined: Gauss-Newton lands on many distinct solutions
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut firsts: Vec<C64> = Vec::new();
    for _ in 0..20 {
        let start: Vec<C64> = (0..4)
            .map(|_| Complex::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
            .collect();
        if let Some(a) = gauss_newton(start, 2) {
            firsts.push(a[1]);
        }
    }
    firsts.sort_by(|a, b| a.re.total_cmp(&b.re));
    firsts.dedup_by(|a, b| (*a - *b).norm() < 1e-8);
    assert!(firsts.len() > 3);
}
