//! Gluing equations of a mutation network, their complex and positive
//! solvers, and the bijection with fixed points of the cluster
//! transformation.

use num_complex::Complex64;
use serde::Serialize;

use super::dilog::bloch_wigner;
use crate::cluster::MutationSequence;
use crate::error::{Error, Result};
use crate::jacobian::z_matrices_from;
use crate::matrix::IntMatrix;
use crate::network::build_network;

/// Maximum number of step halvings in the damped Newton line search.
pub const MAX_HALVINGS: u32 = 30;

/// Points closer than this to `0` or `1` are treated as degenerate shapes.
pub const WALL_TOLERANCE: f64 = 1e-14;

/// `z₊ + z₋ = 1`, `∏_t z_{t,+}^{-a⁺_{et}} z_{t,-}^{a⁻_{et}} = 1` for every
/// row `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingSystem {
    pub aplus: IntMatrix,
    pub aminus: IntMatrix,
}

/// Shapes `z_{t,-}` with `z_{t,+} = 1 - z_{t,-}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GluingSolution {
    pub zminus: Vec<Complex64>,
    /// `max_e |g_e|` at `zminus`.
    pub residual: f64,
    pub iterations: usize,
}

/// A point `η` with `μ_γ(η) = η`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPoint {
    pub eta: Vec<Complex64>,
}

impl GluingSolution {
    pub fn zplus(&self) -> Vec<Complex64> {
        self.zminus.iter().map(|w| 1.0 - w).collect()
    }
}

fn near_wall(w: Complex64) -> bool {
    w.norm() < WALL_TOLERANCE || (w - 1.0).norm() < WALL_TOLERANCE
}

impl GluingSystem {
    pub fn new(aplus: IntMatrix, aminus: IntMatrix) -> Result<Self> {
        let t = aplus.rows();
        if !aplus.is_square() || aminus.rows() != t || aminus.cols() != t {
            return Err(Error::Inconsistent("gluing matrices must be square and equal-sized".into()));
        }
        Ok(GluingSystem { aplus, aminus })
    }

    /// The number of shapes `T`.
    pub fn size(&self) -> usize {
        self.aplus.rows()
    }

    /// `g_e(w) = ∏_t (1-w_t)^{-a⁺_{et}} w_t^{a⁻_{et}} - 1`.
    pub fn equations(&self, w: &[Complex64]) -> Vec<Complex64> {
        (0..self.size())
            .map(|e| self.monomial(e, w) - 1.0)
            .collect()
    }

    fn monomial(&self, e: usize, w: &[Complex64]) -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for (t, &wt) in w.iter().enumerate() {
            p *= (1.0 - wt).powi(-self.aplus[(e, t)] as i32) * wt.powi(self.aminus[(e, t)] as i32);
        }
        p
    }

    /// `max_e |g_e(w)|`.
    pub fn residual(&self, w: &[Complex64]) -> f64 {
        self.equations(w).iter().map(|g| g.norm()).fold(0.0, f64::max)
    }

    /// `∂g_e/∂w_t = (g_e + 1)(a⁺_{et}/(1-w_t) + a⁻_{et}/w_t)`.
    fn jacobian(&self, w: &[Complex64]) -> Vec<Vec<Complex64>> {
        (0..self.size())
            .map(|e| {
                let m = self.monomial(e, w);
                (0..self.size())
                    .map(|t| {
                        let a = self.aplus[(e, t)] as f64;
                        let b = self.aminus[(e, t)] as f64;
                        m * (a / (1.0 - w[t]) + b / w[t])
                    })
                    .collect()
            })
            .collect()
    }

    /// `A₊ = 2I` and `A₋` a symmetric matrix with `2` on the diagonal.
    pub fn is_dynkin_shape(&self) -> bool {
        let n = self.size();
        self.aplus == IntMatrix::identity(n).map(|v| 2 * v)
            && self.aminus.is_symmetric()
            && (0..n).all(|i| self.aminus[(i, i)] == 2)
    }
}

/// The gluing system of a fully mutated sequence.
pub fn gluing_system(gamma: &MutationSequence) -> Result<GluingSystem> {
    let net = build_network(gamma)?;
    if gamma.is_empty() || !net.is_fully_mutated() {
        return Err(Error::NotFullyMutated);
    }
    let nz = net.nz_matrices()?;
    GluingSystem::new(nz.aplus, nz.aminus)
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_linear(mut m: Vec<Vec<Complex64>>, mut rhs: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = rhs.len();
    let scale = m.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))?;
        if m[piv][col].norm() <= 1e-300_f64.max(scale * 1e-15) {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
            let v = rhs[col];
            rhs[r] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut acc = rhs[r];
        for c in r + 1..n {
            acc -= m[r][c] * x[c];
        }
        x[r] = acc / m[r][r];
    }
    Some(x)
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Damped Levenberg–Marquardt Newton iteration on `g(w) = 0` in the
/// unknowns `w = z₋`. Steps solve `(JᴴJ + λI) δ = -Jᴴg` with `λ = ‖g‖`,
/// which stays well defined on rank-deficient systems, and are halved
/// until `‖g‖` decreases.
pub fn solve_gluing_complex(
    sys: &GluingSystem,
    init: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<GluingSolution> {
    let t = sys.size();
    if init.len() != t {
        return Err(Error::ArityMismatch { expected: t, found: init.len() });
    }
    if init.iter().any(|&w| near_wall(w) || !w.re.is_finite() || !w.im.is_finite()) {
        return Err(Error::InvalidInit);
    }
    let mut w = init.to_vec();
    let mut g = sys.equations(&w);
    for iter in 0..=max_iter {
        let residual = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if residual < tol {
            return Ok(GluingSolution { zminus: w, residual, iterations: iter });
        }
        if iter == max_iter {
            return Err(Error::NoConvergence { iterations: max_iter, residual });
        }
        let j = sys.jacobian(&w);
        let lambda = norm2(&g);
        let normal: Vec<Vec<Complex64>> = (0..t)
            .map(|a| {
                (0..t)
                    .map(|b| {
                        let mut s: Complex64 = (0..t).map(|e| j[e][a].conj() * j[e][b]).sum();
                        if a == b {
                            s += lambda;
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let rhs: Vec<Complex64> = (0..t)
            .map(|a| -(0..t).map(|e| j[e][a].conj() * g[e]).sum::<Complex64>())
            .collect();
        let delta = solve_linear(normal, rhs).ok_or(Error::SingularJacobian)?;
        let current = norm2(&g);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand: Vec<Complex64> = w.iter().zip(&delta).map(|(a, d)| a + d * step).collect();
            if !cand.iter().any(|&c| near_wall(c)) {
                let gc = sys.equations(&cand);
                let nc = norm2(&gc);
                if nc.is_finite() && nc < current {
                    accepted = Some((cand, gc));
                    break;
                }
            }
            step /= 2.0;
        }
        match accepted {
            Some((cand, gc)) => {
                w = cand;
                g = gc;
            }
            None => return Err(Error::NoConvergence { iterations: iter + 1, residual }),
        }
    }
    unreachable!("loop returns by max_iter")
}

/// Unique solution in `(0,1)^T` of a Dynkin-shaped system, by the damped
/// iteration `z_s ← ½ z_s + ½ / (1 + ∏_{t≠s} z_t^{C_st/2})` from `½`.
pub fn solve_gluing_positive(sys: &GluingSystem, tol: f64, max_iter: usize) -> Result<GluingSolution> {
    solve_gluing_positive_from(sys, &vec![0.5; sys.size()], tol, max_iter)
}

/// [`solve_gluing_positive`] from a chosen start in `(0,1)^T`.
pub fn solve_gluing_positive_from(
    sys: &GluingSystem,
    init: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<GluingSolution> {
    if !sys.is_dynkin_shape() {
        return Err(Error::NotDynkinShape);
    }
    let n = sys.size();
    if init.len() != n {
        return Err(Error::ArityMismatch { expected: n, found: init.len() });
    }
    if init.iter().any(|&z| !(z > 0.0 && z < 1.0)) {
        return Err(Error::InvalidInit);
    }
    let c = &sys.aminus;
    let mut z = init.to_vec();
    let as_complex = |z: &[f64]| z.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>();
    for iter in 0..max_iter {
        let mut next = Vec::with_capacity(n);
        for s in 0..n {
            let p: f64 = (0..n)
                .filter(|&t| t != s)
                .map(|t| z[t].powf(c[(s, t)] as f64 / 2.0))
                .product();
            next.push(0.5 * z[s] + 0.5 / (1.0 + p));
        }
        let step = z.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        z = next;
        if step < tol * 1e-3 {
            let w = as_complex(&z);
            let residual = positive_residual(c, &z);
            if residual < tol {
                return Ok(GluingSolution { zminus: w, residual, iterations: iter + 1 });
            }
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: positive_residual(c, &z) })
}

/// `max_s |∏_t z_t^{C_st/2} - (1 - z_s)|`.
fn positive_residual(c: &IntMatrix, z: &[f64]) -> f64 {
    (0..z.len())
        .map(|s| {
            let p: f64 = (0..z.len()).map(|t| z[t].powf(c[(s, t)] as f64 / 2.0)).product();
            (p - (1.0 - z[s])).abs()
        })
        .fold(0.0, f64::max)
}

/// `Σ_t D(z_{t,-})`.
pub fn volume(sol: &GluingSolution) -> f64 {
    sol.zminus
        .iter()
        .map(|&w| bloch_wigner(w).unwrap_or(0.0))
        .sum()
}

/// Per shape `z = z_{t,-}`: `(arg z, arg 1/(1-z), arg (1 - 1/z))`.
pub fn shape_angles(sol: &GluingSolution) -> Vec<[f64; 3]> {
    sol.zminus
        .iter()
        .map(|&z| [z.arg(), (1.0 / (1.0 - z)).arg(), (1.0 - 1.0 / z).arg()])
        .collect()
}

/// Largest `|μ_γ(η)_i - η_i| / max(1, |η_i|)`.
pub fn fixed_point_defect(gamma: &MutationSequence, eta: &[Complex64]) -> Result<f64> {
    let image = gamma.evaluate(eta)?;
    Ok(image
        .iter()
        .zip(eta)
        .map(|(a, b)| (a - b).norm() / b.norm().max(1.0))
        .fold(0.0, f64::max))
}

/// `φ(η) = (Y_{m_t}/(Y_{m_t}+1), 1/(Y_{m_t}+1))_t` along the trajectory of `η`.
pub fn phi(eta: &FixedPoint, gamma: &MutationSequence, tol: f64) -> Result<GluingSolution> {
    let sys = gluing_system(gamma)?;
    let defect = fixed_point_defect(gamma, &eta.eta).map_err(singular_as_invariant)?;
    if defect > tol {
        return Err(Error::InvariantViolation(format!(
            "not a fixed point: |μ(η) - η| = {defect:e}"
        )));
    }
    let traj = gamma.run_from(eta.eta.clone()).map_err(singular_as_invariant)?;
    let z = z_matrices_from(gamma, &traj).map_err(singular_as_invariant)?;
    let residual = sys.residual(&z.zminus);
    Ok(GluingSolution { zminus: z.zminus, residual, iterations: 0 })
}

fn singular_as_invariant(e: Error) -> Error {
    match e {
        Error::SingularPoint => Error::InvariantViolation("Y_{m_t} is 0 or -1 on the trajectory".into()),
        other => other,
    }
}

/// `φ⁻¹`: rebuilds every `Y_j(t)` as a monomial in the shapes by walking
/// each vertex class from its mutation point, then reads `η = Y(0)`.
pub fn phi_inverse(sol: &GluingSolution, gamma: &MutationSequence, tol: f64) -> Result<FixedPoint> {
    let sys = gluing_system(gamma)?;
    let big_t = gamma.len();
    let n = gamma.n();
    if sol.zminus.len() != big_t {
        return Err(Error::ArityMismatch { expected: big_t, found: sol.zminus.len() });
    }
    if sol.zminus.iter().any(|&w| near_wall(w)) {
        return Err(Error::InvariantViolation("shape at 0 or 1".into()));
    }
    let residual = sys.residual(&sol.zminus);
    if residual > tol {
        return Err(Error::InvariantViolation(format!("gluing residual {residual:e}")));
    }
    let zm = &sol.zminus;
    let zp = sol.zplus();
    let bs = gamma.matrices()?;
    let mut y: Vec<Vec<Option<Complex64>>> = vec![vec![None; big_t]; n];
    for s in 1..=big_t {
        let mut p = gamma.sigma[s - 1].apply(gamma.m[s - 1]);
        let mut u = s % big_t;
        let mut v = zm[s - 1] / zp[s - 1];
        for _ in 0..=n * big_t {
            y[p][u] = Some(v);
            let next = u + 1;
            let k = gamma.m[next - 1];
            if p == k {
                break;
            }
            let b = bs[u].get(k, p);
            if b > 0 {
                v *= zp[next - 1].powi(b as i32);
            } else if b < 0 {
                v *= zm[next - 1].powi(b as i32);
            }
            p = gamma.sigma[next - 1].apply(p);
            u = next % big_t;
        }
    }
    let eta = (0..n)
        .map(|j| y[j][0].ok_or(Error::NotFullyMutated))
        .collect::<Result<Vec<_>>>()?;
    Ok(FixedPoint { eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn omega() -> Complex64 {
        c(0.5, 3f64.sqrt() / 2.0)
    }

    fn eight_eta() -> FixedPoint {
        let s = 3f64.sqrt() / 2.0;
        FixedPoint { eta: vec![c(1.0, 0.0), c(-0.5, -s), c(-0.5, s)] }
    }

    #[test]
    fn figure_eight_system_and_solution() {
        let sys = gluing_system(&catalog::figure_eight()).unwrap();
        // Both rows reduce to z w (1-z)(1-w) = 1.
        let (z, w) = (c(0.3, 0.9), c(-0.2, 0.4));
        let g = sys.equations(&[z, w]);
        let q = z * w * (1.0 - z) * (1.0 - w);
        assert!((g[0] + 1.0 - q).norm() < 1e-14 || (g[0] + 1.0 - 1.0 / q).norm() < 1e-14);
        let sol = solve_gluing_complex(&sys, &[c(0.5, 0.8), c(0.5, 0.8)], 1e-12, 100).unwrap();
        for zt in &sol.zminus {
            assert!((zt - omega()).norm() < 1e-10);
        }
        assert!(sol.residual < 1e-12);
        assert!((volume(&sol) - catalog::FIGURE_EIGHT_VOLUME).abs() < 1e-9);
        let again = solve_gluing_complex(&sys, &sol.zminus, 1e-12, 100).unwrap();
        assert!(again.iterations <= 1);
        assert_eq!(
            solve_gluing_complex(&sys, &[c(0.0, 0.0), c(0.0, 0.0)], 1e-12, 10).unwrap_err(),
            Error::InvalidInit
        );
        let conj = GluingSolution {
            zminus: sol.zminus.iter().map(|z| z.conj()).collect(),
            ..sol.clone()
        };
        assert!((volume(&conj) + volume(&sol)).abs() < 1e-12);
    }

    #[test]
    fn figure_eight_bijection() {
        let g = catalog::figure_eight();
        let sol = phi(&eight_eta(), &g, 1e-10).unwrap();
        for zt in &sol.zminus {
            assert!((zt - omega()).norm() < 1e-12);
        }
        let back = phi_inverse(&sol, &g, 1e-10).unwrap();
        for (a, b) in back.eta.iter().zip(&eight_eta().eta) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
        let bad = FixedPoint { eta: vec![c(1.0, 0.0); 3] };
        assert!(matches!(phi(&bad, &g, 1e-10), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn positive_solutions() {
        let a1 = GluingSystem::new(IntMatrix::identity(1).map(|v| 2 * v), IntMatrix::identity(1).map(|v| 2 * v))
            .unwrap();
        let s = solve_gluing_positive(&a1, 1e-14, 10_000).unwrap();
        assert!((s.zminus[0].re - 0.5).abs() < 1e-12);
        let a2 = gluing_system(&catalog::a2_loop()).unwrap();
        let s = solve_gluing_positive(&a2, 1e-14, 10_000).unwrap();
        let zeta = (3.0 - 5f64.sqrt()) / 2.0;
        for z in &s.zminus {
            assert!((z.re - zeta).abs() < 1e-12);
        }
        assert_eq!(
            solve_gluing_positive(&gluing_system(&catalog::figure_eight()).unwrap(), 1e-12, 10).unwrap_err(),
            Error::NotDynkinShape
        );
        // Positive fixed points map into (0,1).
        let eta = phi_inverse(&s, &catalog::a2_loop(), 1e-10).unwrap();
        assert!(eta.eta.iter().all(|e| e.re > 0.0 && e.im.abs() < 1e-12));
        let round = phi(&eta, &catalog::a2_loop(), 1e-9).unwrap();
        for (a, b) in round.zminus.iter().zip(&s.zminus) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}
