//! Jacobians of cluster transformations, the matrices `K_γ` and `Z_±`,
//! the invariant `τ_γ`, and verifiers for the determinant identities.
//!
//! Everything is generic over [`Field`], so the same code runs
//! symbolically ([`RatFun`]), modulo a prime ([`Fp`]), in floating point,
//! or over [`DegreeBound`] to bound the degrees of the results.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cluster::{MutationSequence, Permutation, Trajectory, YSeed};
use crate::error::{Error, Result};
use crate::field::{modulus, DegreeBound, Field, Fp};
use crate::matrix::{IntMatrix, Matrix};
use crate::network::{alpha_matrix, block_index, build_network, neumann_inverse, MutationNetwork};
use crate::ratfun::RatFun;
use crate::tropical::{c_matrix_run, f_matrix, Sign};

/// Largest total degree for which reports cancel common factors before
/// printing rational functions.
pub const DISPLAY_SIMPLIFY_CAP: u64 = 40;

/// `n·T` up to which automatic mode verifies symbolically.
pub const EXACT_SIZE_LIMIT: usize = 12;

/// Jacobian of `μ_k` at a seed:
/// `J_k = Ỹ (z₋ F₊ᵀ + z₊ F₋ᵀ) 𝒴⁻¹`, with `Ỹ = μ_k(Y)`,
/// `z₊ = Y_k/(Y_k+1)`, `z₋ = 1/(Y_k+1)` and `F± = F_{k,±}(B)`.
pub fn single_jacobian<F: Field>(seed: &YSeed<F>, k: usize) -> Result<Matrix<F>> {
    let n = seed.b.n();
    let mutated = seed.mutate(k)?;
    let yk = &seed.y[k];
    let plus1 = yk.clone() + yk.one_like();
    let zm = plus1.inv().ok_or(Error::SingularPoint)?;
    let zp = yk.clone() * zm.clone();
    let fp = f_matrix(&seed.b, k, Sign::Plus)?;
    let fm = f_matrix(&seed.b, k, Sign::Minus)?;
    let y_inv: Vec<F> = seed
        .y
        .iter()
        .map(|v| v.inv().ok_or(Error::SingularPoint))
        .collect::<Result<_>>()?;
    let zero = yk.zero_like();
    Ok(Matrix::from_fn(n, n, |i, j| {
        let (a, b) = (fp[(j, i)], fm[(j, i)]);
        if a == 0 && b == 0 {
            return zero.clone();
        }
        let mut inner = zero.clone();
        if a != 0 {
            inner = inner + zm.clone() * zm.from_i64_like(a);
        }
        if b != 0 {
            inner = inner + zp.clone() * zp.from_i64_like(b);
        }
        (mutated.y[i].clone() * inner * y_inv[j].clone()).tidy()
    }))
}

/// The same Jacobian from the explicit case table of partial derivatives.
pub fn single_jacobian_case_table<F: Field>(seed: &YSeed<F>, k: usize) -> Result<Matrix<F>> {
    let n = seed.b.n();
    let mutated = seed.mutate(k)?;
    let yk = seed.y[k].clone();
    let one = yk.one_like();
    let zero = yk.zero_like();
    let mut out = Matrix::filled(n, n, zero);
    for i in 0..n {
        for j in 0..n {
            let v = if i == k && j == k {
                -(yk.pow(-2).ok_or(Error::SingularPoint)?)
            } else if j != k {
                if i == j {
                    mutated.y[i].div(&seed.y[i]).ok_or(Error::SingularPoint)?
                } else {
                    continue;
                }
            } else {
                let bki = seed.b.get(k, i);
                let ti = mutated.y[i].clone();
                if bki >= 0 {
                    // B_ki Ỹ_i / ((Y_k + 1) Y_k)
                    let den = (yk.clone() + one.clone()) * yk.clone();
                    ti * yk.from_i64_like(bki) * den.inv().ok_or(Error::SingularPoint)?
                } else {
                    // -B_ki Ỹ_i (Y_k^{-1} + 1)^{-1} Y_k^{-1}
                    let yinv = yk.inv().ok_or(Error::SingularPoint)?;
                    let f = (yinv.clone() + one.clone()).inv().ok_or(Error::SingularPoint)?;
                    ti * yk.from_i64_like(-bki) * f * yinv
                }
            };
            out[(i, j)] = v;
        }
    }
    Ok(out)
}

/// Rows permuted by `σ`: row `σ(a)` of the result is row `a` of `m`,
/// i.e. `P_σ m`.
fn permute_rows<F: Clone>(m: &Matrix<F>, sigma: &Permutation) -> Matrix<F> {
    let inv = sigma.inverse();
    Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(inv.apply(i), j)].clone())
}

/// Jacobian of the cluster transformation along a trajectory:
/// `J_γ = P_{σ_T} J_{m_T} ⋯ P_{σ_1} J_{m_1}`.
pub fn chain_jacobian<F: Field>(gamma: &MutationSequence, traj: &Trajectory<F>) -> Result<Matrix<F>> {
    let ys = traj.y.as_ref().ok_or_else(|| {
        Error::InvariantViolation("Jacobian needs a trajectory with Y-values".into())
    })?;
    let n = gamma.n();
    let proto = ys[0].first().ok_or(Error::ArityMismatch { expected: 1, found: 0 })?;
    let mut j = Matrix::identity_like(n, proto);
    for (t, &k) in gamma.m.iter().enumerate() {
        let seed = YSeed::new(traj.b[t].clone(), ys[t].clone())?;
        let jk = single_jacobian(&seed, k)?;
        j = permute_rows(&jk.mul(&j).map(|v| v.clone().tidy()), &gamma.sigma[t]);
    }
    Ok(j)
}

/// `K_γ = diag(μ_γ(y))⁻¹ J_γ diag(y)`.
pub fn k_matrix_from<F: Field>(gamma: &MutationSequence, traj: &Trajectory<F>) -> Result<Matrix<F>> {
    let j = chain_jacobian(gamma, traj)?;
    let ys = traj.y.as_ref().expect("checked by chain_jacobian");
    let (y0, mu) = (&ys[0], ys.last().expect("Y(0) present"));
    let mu_inv: Vec<F> = mu
        .iter()
        .map(|v| v.inv().ok_or(Error::SingularPoint))
        .collect::<Result<_>>()?;
    Ok(Matrix::from_fn(j.rows(), j.cols(), |i, c| {
        if j[(i, c)].is_zero() {
            j[(i, c)].clone()
        } else {
            (mu_inv[i].clone() * j[(i, c)].clone() * y0[c].clone()).tidy()
        }
    }))
}

/// Symbolic `K_γ(y)`.
pub fn k_matrix(gamma: &MutationSequence) -> Result<Matrix<RatFun>> {
    k_matrix_from(gamma, &gamma.run(true)?)
}

/// Diagonals of `Z_+` and `Z_-`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZMatrices<F> {
    pub zplus: Vec<F>,
    pub zminus: Vec<F>,
}

impl<F: Field> ZMatrices<F> {
    pub fn zplus_matrix(&self) -> Matrix<F> {
        Matrix::diagonal(&self.zplus)
    }

    pub fn zminus_matrix(&self) -> Matrix<F> {
        Matrix::diagonal(&self.zminus)
    }
}

/// `z_{t,+} = Y_{m_t}/(Y_{m_t}+1)` and `z_{t,-} = 1/(Y_{m_t}+1)` with
/// `Y = Y(t-1)`.
pub fn z_matrices_from<F: Field>(gamma: &MutationSequence, traj: &Trajectory<F>) -> Result<ZMatrices<F>> {
    let ys = traj.y.as_ref().ok_or_else(|| {
        Error::InvariantViolation("Z-matrices need a trajectory with Y-values".into())
    })?;
    let mut zplus = Vec::with_capacity(gamma.len());
    let mut zminus = Vec::with_capacity(gamma.len());
    for (t, &k) in gamma.m.iter().enumerate() {
        let y = ys[t][k].clone();
        let zm = (y.clone() + y.one_like()).inv().ok_or(Error::SingularPoint)?;
        zplus.push((y * zm.clone()).tidy());
        zminus.push(zm);
    }
    Ok(ZMatrices { zplus, zminus })
}

pub fn z_matrices(gamma: &MutationSequence) -> Result<ZMatrices<RatFun>> {
    z_matrices_from(gamma, &gamma.run(true)?)
}

fn fully_mutated_network(gamma: &MutationSequence) -> Result<MutationNetwork> {
    if gamma.is_empty() {
        return Err(Error::NotFullyMutated);
    }
    let net = build_network(gamma)?;
    if !net.is_fully_mutated() {
        return Err(Error::NotFullyMutated);
    }
    Ok(net)
}

/// `det(A₊ Z₋ + A₋ Z₊)` for given `Z`-diagonals.
pub fn tau_from<F: Field>(net: &MutationNetwork, z: &ZMatrices<F>) -> Result<F> {
    let nz = net.nz_matrices()?;
    let big_t = net.t;
    let m = Matrix::from_fn(big_t, big_t, |e, t| {
        let (ap, am) = (nz.aplus[(e, t)], nz.aminus[(e, t)]);
        let zero = z.zminus[t].zero_like();
        let mut acc = zero;
        if ap != 0 {
            acc = acc + z.zminus[t].clone() * z.zminus[t].from_i64_like(ap);
        }
        if am != 0 {
            acc = acc + z.zplus[t].clone() * z.zplus[t].from_i64_like(am);
        }
        acc
    });
    Ok(m.det())
}

/// `τ_γ(y) = det(A₊ Z₋(y) + A₋ Z₊(y))`.
pub fn tau(gamma: &MutationSequence) -> Result<RatFun> {
    let net = fully_mutated_network(gamma)?;
    tau_from(&net, &z_matrices(gamma)?)
}

/// `det(I - K_γ)` along a trajectory.
pub fn det_i_minus_k<F: Field>(gamma: &MutationSequence, traj: &Trajectory<F>) -> Result<F> {
    let k = k_matrix_from(gamma, traj)?;
    let proto = &k[(0, 0)];
    Ok(Matrix::identity_like(k.rows(), proto).sub(&k).det())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Modular,
}

impl Mode {
    /// Exact for `n·T ≤ 12`, modular above.
    pub fn auto(gamma: &MutationSequence) -> Mode {
        if gamma.n() * gamma.len() <= EXACT_SIZE_LIMIT {
            Mode::Exact
        } else {
            Mode::Modular
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub mode: Mode,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_probability_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

fn display(r: &RatFun) -> String {
    r.simplify(DISPLAY_SIMPLIFY_CAP).to_string()
}

/// Checks `det(I - K_γ(y)) = det(A₊ Z₋(y) + A₋ Z₊(y))`.
pub fn verify_det_formula(
    gamma: &MutationSequence,
    mode: Mode,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let net = fully_mutated_network(gamma)?;
    let identity = "det(I - K) = det(A+ Z- + A- Z+)".to_string();
    match mode {
        Mode::Exact => {
            let traj = gamma.run(true)?;
            let lhs = det_i_minus_k(gamma, &traj)?;
            let rhs = tau_from(&net, &z_matrices_from(gamma, &traj)?)?;
            let equal = lhs.eq_exact(&rhs)?;
            Ok(VerificationReport {
                identity,
                mode,
                lhs: display(&lhs),
                rhs: display(&rhs),
                equal,
                trials: None,
                points_used: None,
                degree_bound: None,
                failure_probability_bound: None,
                modulus: None,
            })
        }
        Mode::Modular => {
            let degree = det_formula_degree_bound(gamma, &net)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut used = 0usize;
            let mut equal = true;
            let mut last = (Fp::new(0), Fp::new(0));
            for _ in 0..trials.max(1) {
                let point: Vec<Fp> = (0..gamma.n()).map(|_| Fp::random(&mut rng)).collect();
                let (lhs, rhs) = match modular_sides(gamma, &net, point) {
                    Ok(v) => v,
                    Err(Error::SingularPoint) => continue,
                    Err(e) => return Err(e),
                };
                used += 1;
                last = (lhs, rhs);
                if lhs != rhs {
                    equal = false;
                    break;
                }
            }
            if used == 0 {
                return Err(Error::AllPointsSingular);
            }
            let p = modulus() as f64;
            let per_trial = (degree as f64 / p).min(1.0);
            Ok(VerificationReport {
                identity,
                mode,
                lhs: format!("{:?} (mod p, last point)", last.0),
                rhs: format!("{:?} (mod p, last point)", last.1),
                equal,
                trials: Some(trials.max(1)),
                points_used: Some(used),
                degree_bound: Some(degree),
                failure_probability_bound: Some(per_trial.powi(used as i32)),
                modulus: Some(modulus()),
            })
        }
    }
}

fn modular_sides(gamma: &MutationSequence, net: &MutationNetwork, point: Vec<Fp>) -> Result<(Fp, Fp)> {
    let traj = gamma.run_from(point)?;
    let lhs = det_i_minus_k(gamma, &traj)?;
    let rhs = tau_from(net, &z_matrices_from(gamma, &traj)?)?;
    Ok((lhs, rhs))
}

/// Upper bound on the degree of the numerator of `lhs - rhs`, obtained by
/// running both computations over [`DegreeBound`].
pub fn det_formula_degree_bound(gamma: &MutationSequence, net: &MutationNetwork) -> Result<u64> {
    let y0 = vec![DegreeBound::new(1, 0); gamma.n()];
    let traj = gamma.run_from(y0)?;
    let lhs = det_i_minus_k(gamma, &traj)?;
    let rhs = tau_from(net, &z_matrices_from(gamma, &traj)?)?;
    Ok(lhs.difference_degree(&rhs).max(1))
}

/// `F_ε = F_{m_1,ε_1} P_{σ_1⁻¹} ⋯ F_{m_T,ε_T} P_{σ_T⁻¹}`.
pub fn f_product(gamma: &MutationSequence, eps: &[Sign]) -> Result<IntMatrix> {
    if eps.len() != gamma.len() {
        return Err(Error::LengthMismatch {
            expected: gamma.len(),
            found: eps.len(),
        });
    }
    let bs = gamma.matrices()?;
    let mut f = IntMatrix::identity(gamma.n());
    for (t, &k) in gamma.m.iter().enumerate() {
        f = f
            .checked_mul(&f_matrix(&bs[t], k, eps[t])?)?
            .checked_mul(&gamma.sigma[t].inverse().matrix())?;
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FDetReport {
    pub eps: String,
    pub det_i_minus_f: String,
    pub det_x: String,
    pub det_a: String,
    pub equal: bool,
}

/// Checks `det(I - F_ε) = det X_ε = det A_ε` with exact integers.
pub fn verify_f_det(gamma: &MutationSequence, eps: &[Sign]) -> Result<FDetReport> {
    FDetContext::new(gamma)?.check(eps)
}

fn sign_slot(e: Sign) -> usize {
    match e {
        Sign::Plus => 0,
        Sign::Minus => 1,
        Sign::Zero => 2,
    }
}

/// Everything in the F-determinant identity that does not depend on `ε`,
/// for checking many sign sequences on one sequence.
pub struct FDetContext {
    n: usize,
    net: MutationNetwork,
    /// `(I - α)⁻¹`.
    resolvent: IntMatrix,
    /// Per step and sign: `F_{m_t,ε} P_{σ_t⁻¹}` and `P_{σ_t} F_{m_t,ε}ᵀ`.
    factors: Vec<[(IntMatrix, IntMatrix); 3]>,
}

impl FDetContext {
    pub fn new(gamma: &MutationSequence) -> Result<Self> {
        let net = fully_mutated_network(gamma)?;
        let resolvent = neumann_inverse(&alpha_matrix(gamma)?)?;
        let bs = gamma.matrices()?;
        let factors = gamma
            .m
            .iter()
            .enumerate()
            .map(|(t, &k)| {
                let p = gamma.sigma[t].matrix();
                let p_inv = gamma.sigma[t].inverse().matrix();
                let pair = |e: Sign| -> Result<(IntMatrix, IntMatrix)> {
                    let f = f_matrix(&bs[t], k, e)?;
                    Ok((f.checked_mul(&p_inv)?, p.checked_mul(&f.transpose())?))
                };
                Ok([pair(Sign::Plus)?, pair(Sign::Minus)?, pair(Sign::Zero)?])
            })
            .collect::<Result<_>>()?;
        Ok(FDetContext { n: gamma.n(), net, resolvent, factors })
    }

    pub fn check(&self, eps: &[Sign]) -> Result<FDetReport> {
        let (n, big_t) = (self.n, self.factors.len());
        if eps.len() != big_t {
            return Err(Error::LengthMismatch { expected: big_t, found: eps.len() });
        }
        let mut f = IntMatrix::identity(n);
        let mut l = IntMatrix::zeros(n * big_t, n * big_t);
        for (t, &e) in eps.iter().enumerate() {
            let (right, block) = &self.factors[t][sign_slot(e)];
            f = f.checked_mul(right)?;
            let (r0, c0) = (block_index(0, t + 1, big_t, n), block_index(0, t, big_t, n));
            for i in 0..n {
                for j in 0..n {
                    l[(r0 + i, c0 + j)] = block[(i, j)];
                }
            }
        }
        let x = self.resolvent.checked_mul(&IntMatrix::identity(n * big_t).checked_sub(&l)?)?;
        let d_f: BigInt = IntMatrix::identity(n).checked_sub(&f)?.det();
        let d_x = x.det();
        let d_a = self.net.signed_nz(eps)?.det();
        Ok(FDetReport {
            eps: crate::tropical::format_signs(eps),
            equal: d_f == d_x && d_x == d_a,
            det_i_minus_f: d_f.to_string(),
            det_x: d_x.to_string(),
            det_a: d_a.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TropicalLimitReport {
    pub eps_trop: String,
    pub det_i_minus_c: String,
    pub det_a_trop: String,
    pub equal: bool,
    /// `(ε, max |K(ε,…,ε)ᵀ - C(T)|)` for decreasing `ε`.
    pub probes: Vec<(f64, f64)>,
    pub probes_converge: bool,
}

/// Largest probe deviation accepted as convergence of `K(ε)ᵀ` to `C(T)`.
pub const TROPICAL_PROBE_TOLERANCE: f64 = 1e-3;

/// Checks `det(I - C(T)) = det A_{ε_trop}` exactly and probes
/// `K_γ(ε,…,ε)ᵀ → C(T)` numerically.
pub fn verify_tropical_limit(gamma: &MutationSequence) -> Result<TropicalLimitReport> {
    let (equal, report) = tropical_limit_exact(gamma)?;
    let c_t = c_matrix_run(gamma)?.last().clone();
    let mut probes = Vec::new();
    for eps in [1e-2, 1e-4, 1e-6] {
        let traj = gamma.run_from(vec![eps; gamma.n()])?;
        let k = k_matrix_from(gamma, &traj)?;
        let mut dev = 0.0f64;
        for i in 0..gamma.n() {
            for j in 0..gamma.n() {
                dev = dev.max((k[(j, i)] - c_t[(i, j)] as f64).abs());
            }
        }
        probes.push((eps, dev));
    }
    let probes_converge = probes.last().is_some_and(|&(_, d)| d < TROPICAL_PROBE_TOLERANCE);
    Ok(TropicalLimitReport {
        equal,
        probes,
        probes_converge,
        ..report
    })
}

/// The integer part of [`verify_tropical_limit`].
pub fn tropical_limit_exact(gamma: &MutationSequence) -> Result<(bool, TropicalLimitReport)> {
    let net = fully_mutated_network(gamma)?;
    let trace = c_matrix_run(gamma)?;
    let d_c = IntMatrix::identity(gamma.n()).checked_sub(trace.last())?.det();
    let d_a = net.signed_nz(&trace.eps_trop)?.det();
    let equal = d_c == d_a;
    Ok((
        equal,
        TropicalLimitReport {
            eps_trop: crate::tropical::format_signs(&trace.eps_trop),
            det_i_minus_c: d_c.to_string(),
            det_a_trop: d_a.to_string(),
            equal,
            probes: Vec::new(),
            probes_converge: true,
        },
    ))
}
