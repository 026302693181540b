//! Oracles shared by the property suites and the acceptance run. Each case
//! draws its input from the given generator and returns a description of
//! the first disagreement.

#![allow(dead_code)]

use cluster_nz::cluster::{ExchangeMatrix, MutationSequence, YSeed};
use cluster_nz::generate::{random_fully_mutated, random_sequence, random_skew_matrix};
use cluster_nz::geometry::dilog;
use cluster_nz::jacobian::chain_jacobian;
use cluster_nz::matrix::IntMatrix;
use cluster_nz::tropical::{c_matrix_run, c_matrix_run_direct, c_matrix_run_fp};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type CaseResult = Result<(), String>;

/// Skew-symmetrizable `b_ij = s_ij d_j` from a skew-symmetric `s` and
/// positive `d`, so `d_i b_ij = -d_j b_ji`.
pub fn symmetrizable(s: &ExchangeMatrix, d: &[i64]) -> ExchangeMatrix {
    let n = s.n();
    ExchangeMatrix::new(IntMatrix::from_fn(n, n, |i, j| s.get(i, j) * d[j])).unwrap()
}

/// Extended exchange matrix `[B; C]` mutated by the matrix mutation rule;
/// the lower block tracks c-vectors as columns.
pub fn extended_mutation(bt: &IntMatrix, k: usize) -> IntMatrix {
    let (rows, n) = (bt.rows(), bt.cols());
    IntMatrix::from_fn(rows, n, |i, j| {
        if i == k || j == k {
            -bt[(i, j)]
        } else {
            let (a, b) = (bt[(i, k)], bt[(k, j)]);
            bt[(i, j)] + a.signum() * (a * b).max(0)
        }
    })
}

/// `C(T)` from principal coefficients.
pub fn c_matrix_oracle(gamma: &MutationSequence) -> IntMatrix {
    let n = gamma.n();
    let mut bt = IntMatrix::from_fn(2 * n, n, |i, j| if i < n { gamma.b.get(i, j) } else { (i - n == j) as i64 });
    for (t, &k) in gamma.m.iter().enumerate() {
        let mutated = extended_mutation(&bt, k);
        let inv = gamma.sigma[t].inverse();
        bt = IntMatrix::from_fn(2 * n, n, |i, j| {
            let row = if i < n { inv.apply(i) } else { i };
            mutated[(row, inv.apply(j))]
        });
    }
    IntMatrix::from_fn(n, n, |i, j| bt[(n + i, j)])
}

fn random_positive_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(1..50)), BigInt::from(rng.gen_range(1..50)))
}

/// `μ_k μ_k` is the identity on `B`, on symbolic `Y` and on a rational point.
pub fn involution_case(rng: &mut ChaCha8Rng) -> CaseResult {
    let n = rng.gen_range(1..=5);
    let entry = rng.gen_range(1..=3);
    let s = random_skew_matrix(rng, n, entry);
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let b = symmetrizable(&s, &d);
    let k = rng.gen_range(0..n);
    if b.mutate(k).unwrap().mutate(k).unwrap() != b {
        return Err(format!("B not restored at k={k}: {b:?}"));
    }
    let seed = YSeed::initial(b.clone());
    let back = seed.mutate(k).unwrap().mutate(k).unwrap();
    for (x, y) in back.y.iter().zip(&seed.y) {
        if !x.eq_exact(y).unwrap() {
            return Err(format!("symbolic Y not restored: {x} vs {y}"));
        }
    }
    let point: Vec<BigRational> = (0..n).map(|_| random_positive_rational(rng)).collect();
    let numeric = YSeed::new(b, point.clone()).unwrap();
    if numeric.mutate(k).unwrap().mutate(k).unwrap().y != point {
        return Err("rational Y not restored".into());
    }
    Ok(())
}

/// Tropical mutation, the F/P recursion and principal coefficients agree.
pub fn tropical_case(rng: &mut ChaCha8Rng) -> CaseResult {
    let n = rng.gen_range(1..=5);
    let t = rng.gen_range(1..=8);
    let b = random_skew_matrix(rng, n, 2);
    let gamma = random_sequence(rng, &b, t, true);
    let trace = c_matrix_run(&gamma).map_err(|e| e.to_string())?;
    if c_matrix_run_direct(&gamma).unwrap() != trace.c {
        return Err(format!("direct run differs on {gamma:?}"));
    }
    if c_matrix_run_fp(&gamma).unwrap() != trace.c {
        return Err(format!("F/P run differs on {gamma:?}"));
    }
    if trace.last() != &c_matrix_oracle(&gamma) {
        return Err(format!("principal coefficients differ on {gamma:?}"));
    }
    Ok(())
}

/// The chain Jacobian against central differences of `μ_γ`, relative to
/// the largest Jacobian entry.
pub fn jacobian_case(rng: &mut ChaCha8Rng) -> CaseResult {
    let n = rng.gen_range(1..=4);
    let b = random_skew_matrix(rng, n, 2);
    let gamma = match random_fully_mutated(rng, &b, 6, true, 200) {
        Some(g) => g,
        None => random_sequence(rng, &b, 3, true),
    };
    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let traj = gamma.run_from(y.clone()).map_err(|e| e.to_string())?;
    let jac = chain_jacobian(&gamma, &traj).map_err(|e| e.to_string())?;
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for j in 0..n {
        let h = 1e-5 * y[j];
        let (mut up, mut down) = (y.clone(), y.clone());
        up[j] += h;
        down[j] -= h;
        let fu = gamma.evaluate(&up).map_err(|e| e.to_string())?;
        let fd = gamma.evaluate(&down).map_err(|e| e.to_string())?;
        for i in 0..n {
            let numeric = (fu[i] - fd[i]) / (2.0 * h);
            scale = scale.max(jac[(i, j)].abs());
            worst = worst.max((jac[(i, j)] - numeric).abs());
        }
    }
    if worst > 1e-6 * scale {
        return Err(format!("relative error {:e} on {gamma:?}", worst / scale));
    }
    Ok(())
}

/// `Li₂(z) + Li₂(1-z) = π²/6 - log z log(1-z)` at `z = r e^{iθ}`, away
/// from the cut along the negative axis.
pub fn reflection_case(r: f64, theta: f64) -> CaseResult {
    let z = Complex64::from_polar(r, theta);
    let one = Complex64::new(1.0, 0.0);
    let lhs = dilog(z) + dilog(one - z);
    let rhs = std::f64::consts::PI.powi(2) / 6.0 - z.ln() * (one - z).ln();
    let err = (lhs - rhs).norm();
    if err < 1e-12 {
        Ok(())
    } else {
        Err(format!("error {err:e} at {z}"))
    }
}

pub fn random_reflection_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.gen_range(0.02..0.99), rng.gen_range(-3.0..3.0))
}
