//! Simply-laced Dynkin diagrams, their bipartite mutation loops, and the
//! dilogarithm identity for the central charge.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::dilog::rogers;
use super::gluing::{gluing_system, solve_gluing_positive, GluingSolution};
use crate::cluster::{ExchangeMatrix, MutationSequence, Permutation};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DynkinType {
    A,
    D,
    E,
}

impl FromStr for DynkinType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(DynkinType::A),
            "D" => Ok(DynkinType::D),
            "E" => Ok(DynkinType::E),
            _ => Err(Error::Parse(format!("unknown Dynkin type {s:?}"))),
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynkinSpec {
    pub kind: DynkinType,
    pub rank: usize,
    pub cartan: IntMatrix,
    pub dim_g: u64,
    pub dual_coxeter: u64,
}

impl DynkinSpec {
    /// `A_n (n ≥ 1)`, `D_n (n ≥ 4)`, `E_6`, `E_7`, `E_8`.
    pub fn new(kind: DynkinType, rank: usize) -> Result<Self> {
        let n = rank as u64;
        let (edges, dim_g, dual_coxeter): (Vec<(usize, usize)>, u64, u64) = match kind {
            DynkinType::A if rank >= 1 => ((1..rank).map(|i| (i - 1, i)).collect(), n * (n + 2), n + 1),
            DynkinType::D if rank >= 4 => {
                let mut e: Vec<_> = (1..rank - 1).map(|i| (i - 1, i)).collect();
                e.push((rank - 3, rank - 1));
                (e, n * (2 * n - 1), 2 * n - 2)
            }
            DynkinType::E if (6..=8).contains(&rank) => {
                // Bourbaki labels: 1-3-4-5-6-7-8 with 2 attached to 4.
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((3..rank).map(|i| (i - 1, i)));
                let (dim, h) = match rank {
                    6 => (78, 12),
                    7 => (133, 18),
                    _ => (248, 30),
                };
                (e, dim, h)
            }
            _ => return Err(Error::NotDynkinShape),
        };
        let mut cartan = IntMatrix::identity(rank).map(|v| 2 * v);
        for (a, b) in edges {
            cartan[(a, b)] = -1;
            cartan[(b, a)] = -1;
        }
        Ok(DynkinSpec { kind, rank, cartan, dim_g, dual_coxeter })
    }

    /// Bipartite colouring: `true` for vertices in the class of vertex 1.
    fn colouring(&self) -> Vec<bool> {
        let n = self.rank;
        let mut colour = vec![None; n];
        colour[0] = Some(true);
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if w != v && self.cartan[(v, w)] != 0 && colour[w].is_none() {
                    colour[w] = Some(!colour[v].expect("visited"));
                    stack.push(w);
                }
            }
        }
        colour.into_iter().map(|c| c.expect("connected diagram")).collect()
    }

    /// Exchange matrix of the bipartite orientation where vertex 1 is a sink.
    pub fn exchange_matrix(&self) -> ExchangeMatrix {
        let sink = self.colouring();
        let n = self.rank;
        let b = IntMatrix::from_fn(n, n, |i, j| {
            if i == j || self.cartan[(i, j)] == 0 {
                0
            } else if sink[j] {
                1
            } else {
                -1
            }
        });
        ExchangeMatrix::new(b).expect("orientation of a tree is skew-symmetric")
    }

    /// The loop mutating every sink, then every source, with identity
    /// relabelings. It returns to the starting quiver.
    pub fn mutation_loop(&self) -> MutationSequence {
        let sink = self.colouring();
        let mut m: Vec<usize> = (0..self.rank).filter(|&i| sink[i]).collect();
        m.extend((0..self.rank).filter(|&i| !sink[i]));
        let sigma = vec![Permutation::identity(self.rank); self.rank];
        MutationSequence::from_zero_based(self.exchange_matrix(), m, sigma)
            .expect("valid Dynkin loop")
    }
}

impl fmt::Display for DynkinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.rank)
    }
}

/// `2 dim 𝔤 / (2 + h∨) - n`.
pub fn central_charge(spec: &DynkinSpec) -> BigRational {
    BigRational::new(
        BigInt::from(2 * spec.dim_g),
        BigInt::from(2 + spec.dual_coxeter),
    ) - BigRational::from_integer(BigInt::from(spec.rank))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilogReport {
    pub spec: String,
    /// Positive solution `ζ` indexed by vertex.
    pub zeta: Vec<f64>,
    /// `(6/π²) Σ L(ζ_i)`.
    pub lhs: f64,
    /// `(6/π²) Σ L(1 - ζ_i)`.
    pub lhs_complement: f64,
    pub rhs: String,
    pub rhs_value: f64,
    pub error: f64,
    pub error_complement: f64,
    pub holds: bool,
    pub holds_complement: bool,
}

/// Solves the positive gluing equations of the Dynkin loop and compares
/// both `(6/π²) Σ L(ζ_i)` and `(6/π²) Σ L(1 - ζ_i)` with the central charge.
pub fn dilog_identity_check(spec: &DynkinSpec, tol: f64) -> Result<DilogReport> {
    let (gamma, sol) = positive_solution(spec)?;
    let mut zeta = vec![0.0; spec.rank];
    for (t, &k) in gamma.m.iter().enumerate() {
        zeta[k] = sol.zminus[t].re;
    }
    let scale = 6.0 / (PI * PI);
    let lhs = scale * zeta.iter().map(|&z| rogers(z)).sum::<Result<f64>>()?;
    let lhs_complement = scale * zeta.iter().map(|&z| rogers(1.0 - z)).sum::<Result<f64>>()?;
    let rhs = central_charge(spec);
    let rhs_value = rhs.to_f64().expect("finite rational");
    let (error, error_complement) = ((lhs - rhs_value).abs(), (lhs_complement - rhs_value).abs());
    Ok(DilogReport {
        spec: spec.to_string(),
        zeta,
        lhs,
        lhs_complement,
        rhs: rhs.to_string(),
        rhs_value,
        error,
        error_complement,
        holds: error < tol,
        holds_complement: error_complement < tol,
    })
}

/// The Dynkin loop and the positive solution of its gluing equations.
pub fn positive_solution(spec: &DynkinSpec) -> Result<(MutationSequence, GluingSolution)> {
    let gamma = spec.mutation_loop();
    let sys = gluing_system(&gamma)?;
    let sol = solve_gluing_positive(&sys, 1e-14, 1_000_000)?;
    Ok((gamma, sol))
}
