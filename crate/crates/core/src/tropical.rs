//! Tropical Y-dynamics: c-vectors, C-matrices, tropical signs, and reddening
//! sequences.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::cluster::{ExchangeMatrix, MutationSequence, Permutation};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A sign in `{+, -, 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::Zero => 0,
        }
    }

    pub fn from_char(c: char) -> Result<Sign> {
        match c {
            '+' | 'p' => Ok(Sign::Plus),
            '-' | 'm' => Ok(Sign::Minus),
            '0' => Ok(Sign::Zero),
            _ => Err(Error::Parse(format!("unknown sign {c:?}"))),
        }
    }

    pub const ALL: [Sign; 3] = [Sign::Plus, Sign::Minus, Sign::Zero];
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Zero => "0",
        };
        write!(f, "{c}")
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses a sign sequence such as `"+-0"` (commas and spaces ignored).
pub fn parse_signs(src: &str) -> Result<Vec<Sign>> {
    src.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(Sign::from_char)
        .collect()
}

pub fn format_signs(signs: &[Sign]) -> String {
    signs.iter().map(ToString::to_string).collect()
}

/// Every sequence in `{+, -, 0}^len`.
pub fn all_sign_sequences(len: usize) -> Vec<Vec<Sign>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                Sign::ALL.iter().map(move |&s| {
                    let mut p = prefix.clone();
                    p.push(s);
                    p
                })
            })
            .collect();
    }
    out
}

/// Common sign of a nonzero sign-coherent vector.
pub fn sign_of_cvector(v: &[i64]) -> Result<Sign> {
    let pos = v.iter().any(|&x| x > 0);
    let neg = v.iter().any(|&x| x < 0);
    match (pos, neg) {
        (true, false) => Ok(Sign::Plus),
        (false, true) => Ok(Sign::Minus),
        (true, true) => Err(Error::SignIncoherent(v.to_vec())),
        (false, false) => Err(Error::ZeroVector),
    }
}

/// Tropical Y-mutation at the 0-based `k`; column `j` of `c` is the
/// c-vector of `Y_j`.
pub fn tropical_mutate(c: &IntMatrix, b: &ExchangeMatrix, k: usize) -> Result<IntMatrix> {
    let n = b.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k + 1, n });
    }
    let rows = c.rows();
    let mut out = c.clone();
    for r in 0..rows {
        out[(r, k)] = -c[(r, k)];
    }
    for i in (0..n).filter(|&i| i != k) {
        let bki = b.get(k, i);
        if bki == 0 {
            continue;
        }
        for r in 0..rows {
            let ck = c[(r, k)];
            let shift = if bki > 0 {
                bki.checked_mul(ck.max(0))
            } else {
                bki.checked_mul(ck.min(0)).map(|v| -v)
            }
            .ok_or(Error::Overflow)?;
            out[(r, i)] = c[(r, i)].checked_add(shift).ok_or(Error::Overflow)?;
        }
    }
    Ok(out)
}

/// Applies a relabeling to the columns: new column `σ(a)` is old column `a`.
pub fn permute_columns(c: &IntMatrix, sigma: &Permutation) -> IntMatrix {
    let mut out = c.clone();
    for a in 0..c.cols() {
        for r in 0..c.rows() {
            out[(r, sigma.apply(a))] = c[(r, a)];
        }
    }
    out
}

/// `F_{k,ε}(B)`: the identity except row `k`, which is `-1` at `k` and
/// `[ε B_kj]_+` elsewhere.
pub fn f_matrix(b: &ExchangeMatrix, k: usize, eps: Sign) -> Result<IntMatrix> {
    let n = b.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k + 1, n });
    }
    let mut f = IntMatrix::identity(n);
    for j in 0..n {
        f[(k, j)] = if j == k {
            -1
        } else {
            eps.value()
                .checked_mul(b.get(k, j))
                .ok_or(Error::Overflow)?
                .max(0)
        };
    }
    Ok(f)
}

/// C-matrices `C(0..=T)` and the tropical sign sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CMatrixTrace {
    pub c: Vec<IntMatrix>,
    pub eps_trop: Vec<Sign>,
}

impl CMatrixTrace {
    pub fn last(&self) -> &IntMatrix {
        self.c.last().expect("C(0) present")
    }
}

/// Runs the F/P recursion `C(t) = C(t-1) F_{m_t,ε_t}(B(t-1)) P_{σ_t^{-1}}`
/// and checks it step by step against direct tropical mutation.
pub fn c_matrix_run(gamma: &MutationSequence) -> Result<CMatrixTrace> {
    let n = gamma.n();
    let bs = gamma.matrices()?;
    let mut c = vec![IntMatrix::identity(n)];
    let mut eps = Vec::with_capacity(gamma.len());
    for (t, &k) in gamma.m.iter().enumerate() {
        let prev = &c[t];
        let e = sign_of_cvector(&prev.column(k))?;
        let f = f_matrix(&bs[t], k, e)?;
        let p_inv = gamma.sigma[t].inverse().matrix();
        let next = prev.checked_mul(&f)?.checked_mul(&p_inv)?;
        let direct = permute_columns(&tropical_mutate(prev, &bs[t], k)?, &gamma.sigma[t]);
        if direct != next {
            return Err(Error::Inconsistent(format!(
                "tropical mutation and F/P recursion disagree at step {}",
                t + 1
            )));
        }
        eps.push(e);
        c.push(next);
    }
    Ok(CMatrixTrace { c, eps_trop: eps })
}

/// C-matrices by direct tropical mutation only.
pub fn c_matrix_run_direct(gamma: &MutationSequence) -> Result<Vec<IntMatrix>> {
    let bs = gamma.matrices()?;
    let mut c = vec![IntMatrix::identity(gamma.n())];
    for (t, &k) in gamma.m.iter().enumerate() {
        let next = permute_columns(&tropical_mutate(&c[t], &bs[t], k)?, &gamma.sigma[t]);
        c.push(next);
    }
    Ok(c)
}

/// C-matrices by the F/P recursion only, with the given signs.
pub fn c_matrix_run_fp(gamma: &MutationSequence) -> Result<Vec<IntMatrix>> {
    let bs = gamma.matrices()?;
    let mut c = vec![IntMatrix::identity(gamma.n())];
    for (t, &k) in gamma.m.iter().enumerate() {
        let e = sign_of_cvector(&c[t].column(k))?;
        let f = f_matrix(&bs[t], k, e)?;
        let next = c[t]
            .checked_mul(&f)?
            .checked_mul(&gamma.sigma[t].inverse().matrix())?;
        c.push(next);
    }
    Ok(c)
}

fn require_skew_symmetric(gamma: &MutationSequence) -> Result<()> {
    if gamma.b.is_skew_symmetric() {
        Ok(())
    } else {
        Err(Error::NotSkewSymmetric)
    }
}

/// All entries of `C(T)` are non-positive (false for the empty sequence).
pub fn is_reddening(gamma: &MutationSequence) -> Result<bool> {
    require_skew_symmetric(gamma)?;
    let trace = c_matrix_run(gamma)?;
    let red = trace.last().iter().all(|&v| v <= 0);
    Ok(red)
}

/// Reddening with every tropical sign `+`.
pub fn is_maximal_green(gamma: &MutationSequence) -> Result<bool> {
    require_skew_symmetric(gamma)?;
    let trace = c_matrix_run(gamma)?;
    Ok(trace.last().iter().all(|&v| v <= 0) && trace.eps_trop.iter().all(|&s| s == Sign::Plus))
}

/// For `C(T) = -P`, the relabeling `ν` sending column `a` to the row of its
/// `-1` entry, so that relabeling by `ν` turns `C(T)` into `-I`.
pub fn negated_permutation(c: &IntMatrix) -> Result<Permutation> {
    let n = c.rows();
    let mut images = Vec::with_capacity(n);
    for a in 0..c.cols() {
        let col = c.column(a);
        let nonzero: Vec<usize> = (0..n).filter(|&r| col[r] != 0).collect();
        match nonzero.as_slice() {
            [r] if col[*r] == -1 => images.push(*r),
            _ => return Err(Error::NotSignedPermutation),
        }
    }
    Permutation::from_images(images).map_err(|_| Error::NotSignedPermutation)
}

/// Composes the last relabeling of a reddening sequence with `ν` so that
/// the final C-matrix is exactly `-I`.
pub fn normalize_reddening(gamma: &MutationSequence) -> Result<MutationSequence> {
    if gamma.is_empty() || !is_reddening(gamma)? {
        return Err(Error::NotReddening);
    }
    let trace = c_matrix_run(gamma)?;
    let nu = negated_permutation(trace.last())?;
    let last = gamma.sigma.last().expect("nonempty");
    let out = gamma.with_last_sigma(nu.compose(last))?;
    let check = c_matrix_run(&out)?;
    if *check.last() != IntMatrix::identity(gamma.n()).neg() {
        return Err(Error::Inconsistent("normalized C(T) is not -I".into()));
    }
    if !out.is_loop()? {
        return Err(Error::InvariantViolation(
            "relabeled final exchange matrix differs from B(0)".into(),
        ));
    }
    Ok(out)
}

/// Outcome of a bounded reddening search.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found {
        sequence: MutationSequence,
        maximal_green: bool,
        visited: usize,
    },
    Exhausted {
        depth: usize,
        visited: usize,
        /// Every exchange matrix met has exactly two positive and two negative
        /// units in each row, so every mutation network column has two
        /// arrows in and two out and all `A_ε` column sums vanish.
        balanced_rows: bool,
    },
}

fn canonical_key(b: &ExchangeMatrix, c: &IntMatrix, perms: &[Permutation]) -> (Vec<i64>, Vec<i64>) {
    let flat = |bb: &IntMatrix, cc: &IntMatrix| {
        (
            bb.iter().copied().collect::<Vec<_>>(),
            cc.iter().copied().collect::<Vec<_>>(),
        )
    };
    if perms.is_empty() {
        return flat(b.matrix(), c);
    }
    perms
        .iter()
        .map(|p| {
            let pb = b.permute(p).expect("arity checked");
            flat(pb.matrix(), &permute_columns(c, p))
        })
        .min()
        .expect("at least the identity")
}

fn balanced_rows(b: &ExchangeMatrix) -> bool {
    (0..b.n()).all(|k| {
        let row: Vec<i64> = (0..b.n()).map(|j| b.get(k, j)).collect();
        row.iter().map(|&v| v.max(0)).sum::<i64>() == 2
            && row.iter().map(|&v| (-v).max(0)).sum::<i64>() == 2
    })
}

/// Breadth-first search for a reddening sequence of length at most
/// `max_depth` with identity relabelings. States are hashed up to
/// simultaneous relabeling of `B` and the columns of `C` when `n <= 6`.
/// With `green_only`, only green vertices (positive c-vectors) are mutated,
/// so any hit is a maximal green sequence.
pub fn search_reddening(b: &ExchangeMatrix, max_depth: usize, green_only: bool) -> Result<SearchOutcome> {
    if !b.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let n = b.n();
    let perms = if n <= 6 { Permutation::all(n) } else { Vec::new() };
    struct Node {
        b: ExchangeMatrix,
        c: IntMatrix,
        parent: Option<(usize, usize)>,
        depth: usize,
    }
    let mut nodes = vec![Node {
        b: b.clone(),
        c: IntMatrix::identity(n),
        parent: None,
        depth: 0,
    }];
    let mut seen = HashSet::new();
    seen.insert(canonical_key(b, &nodes[0].c, &perms));
    let mut queue = VecDeque::from([0usize]);
    let mut balanced = balanced_rows(b);
    while let Some(idx) = queue.pop_front() {
        if nodes[idx].depth >= max_depth {
            continue;
        }
        for k in 0..n {
            if nodes[idx].parent.is_some_and(|(_, pk)| pk == k) {
                continue;
            }
            let sign = sign_of_cvector(&nodes[idx].c.column(k))?;
            if green_only && sign != Sign::Plus {
                continue;
            }
            let c = match tropical_mutate(&nodes[idx].c, &nodes[idx].b, k) {
                Ok(c) => c,
                Err(Error::Overflow) => continue,
                Err(e) => return Err(e),
            };
            let nb = match nodes[idx].b.mutate(k) {
                Ok(nb) => nb,
                Err(Error::Overflow) => continue,
                Err(e) => return Err(e),
            };
            if !seen.insert(canonical_key(&nb, &c, &perms)) {
                continue;
            }
            balanced &= balanced_rows(&nb);
            let reddened = c.iter().all(|&v| v <= 0);
            nodes.push(Node {
                b: nb,
                c,
                parent: Some((idx, k)),
                depth: nodes[idx].depth + 1,
            });
            let new_idx = nodes.len() - 1;
            if reddened {
                let mut m = Vec::new();
                let mut cur = new_idx;
                while let Some((p, k)) = nodes[cur].parent {
                    m.push(k);
                    cur = p;
                }
                m.reverse();
                let len = m.len();
                let gamma = MutationSequence::from_zero_based(
                    b.clone(),
                    m,
                    vec![Permutation::identity(n); len],
                )?;
                let maximal_green = is_maximal_green(&gamma)?;
                let sequence = normalize_reddening(&gamma)?;
                return Ok(SearchOutcome::Found {
                    sequence,
                    maximal_green,
                    visited: nodes.len(),
                });
            }
            queue.push_back(new_idx);
        }
    }
    Ok(SearchOutcome::Exhausted {
        depth: max_depth,
        visited: nodes.len(),
        balanced_rows: balanced,
    })
}
