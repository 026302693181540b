//! Exchange matrices, Y-seeds, mutations, relabelings and mutation sequences.
//!
//! Indices are 0-based in this API; external formats (JSON, CLI, `Display`)
//! use the 1-based labels `1..=n`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{permutation_matrix, IntMatrix, Matrix};
use crate::ratfun::RatFun;

/// Bijection of `{0..n-1}` stored by its images.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a bijection",
                    images.iter().map(|i| i + 1).collect::<Vec<_>>()
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// From 1-based one-line notation `[σ(1), ..., σ(n)]`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        if one_line.contains(&0) {
            return Err(Error::InvalidPermutation(
                "one-line notation is 1-based".into(),
            ));
        }
        Permutation::from_images(one_line.iter().map(|i| i - 1).collect())
    }

    /// From 1-based disjoint cycles; `[[3, 2, 1]]` sends 3 to 2, 2 to 1 and
    /// 1 to 3.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (pos, &a) in cycle.iter().enumerate() {
                if a == 0 || a > n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry {a} outside 1..={n}"
                    )));
                }
                if used[a - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "{a} appears twice in cycle notation"
                    )));
                }
                used[a - 1] = true;
                let b = cycle[(pos + 1) % cycle.len()];
                if b == 0 || b > n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry {b} outside 1..={n}"
                    )));
                }
                images[a - 1] = b - 1;
            }
        }
        Permutation::from_images(images)
    }

    /// Parses `id`, cycle notation such as `(3 2 1)(4 5)`, or a one-line
    /// list such as `[2,1,3]`.
    pub fn parse(src: &str, n: usize) -> Result<Self> {
        let s = src.trim();
        if s.is_empty() || s == "id" || s == "()" {
            return Ok(Permutation::identity(n));
        }
        let bad = || Error::InvalidPermutation(format!("cannot parse {src:?}"));
        if let Some(body) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let one_line = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            if one_line.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: one_line.len(),
                });
            }
            return Permutation::from_one_line(&one_line);
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = open.find(')').ok_or_else(bad)?;
            let cycle = open[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = open[close + 1..].trim_start();
        }
        Permutation::from_cycles(n, &cycles)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Image of a 0-based index.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `P_σ = (δ_{i,σ(j)})`, so `P_σ e_j = e_{σ(j)}`.
    pub fn matrix(&self) -> IntMatrix {
        permutation_matrix(&self.0)
    }

    /// Disjoint cycles of length at least 2, 1-based, each starting at its
    /// smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.0[i];
            }
            out.push(cycle);
        }
        out
    }

    /// All permutations of `{0..n-1}` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

/// Skew-symmetrizable integer matrix together with its minimal symmetrizer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    b: IntMatrix,
    d: Vec<i64>,
}

impl ExchangeMatrix {
    /// Validates skew-symmetrizability and computes the minimal positive
    /// integer symmetrizer `d` with `d_i B_ij = -d_j B_ji`.
    pub fn new(b: IntMatrix) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::NotSkewSymmetrizable(format!(
                "{}x{} matrix is not square",
                b.rows(),
                b.cols()
            )));
        }
        let n = b.rows();
        for i in 0..n {
            if b[(i, i)] != 0 {
                return Err(Error::NotSkewSymmetrizable(format!(
                    "nonzero diagonal entry at ({0},{0})",
                    i + 1
                )));
            }
            for j in 0..i {
                let (x, y) = (b[(i, j)], b[(j, i)]);
                if (x == 0) != (y == 0) || (x != 0 && x.signum() == y.signum()) {
                    return Err(Error::NotSkewSymmetrizable(format!(
                        "entries ({},{})={x} and ({},{})={y} have incompatible signs",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        // propagate ratios d_j / d_i = -B_ij / B_ji over connected components
        let mut d: Vec<Option<BigRational>> = vec![None; n];
        let mut out = vec![0i64; n];
        for root in 0..n {
            if d[root].is_some() {
                continue;
            }
            d[root] = Some(BigRational::one());
            let mut component = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                let di = d[i].clone().expect("visited");
                for j in 0..n {
                    if b[(i, j)] == 0 {
                        continue;
                    }
                    let ratio = BigRational::new(BigInt::from(-b[(i, j)]), BigInt::from(b[(j, i)]));
                    let dj = &di * ratio;
                    match &d[j] {
                        Some(existing) if *existing != dj => {
                            return Err(Error::NotSkewSymmetrizable(format!(
                                "inconsistent symmetrizer around vertex {}",
                                j + 1
                            )));
                        }
                        Some(_) => {}
                        None => {
                            d[j] = Some(dj);
                            component.push(j);
                            queue.push_back(j);
                        }
                    }
                }
            }
            let lcm = component
                .iter()
                .fold(BigInt::one(), |acc, &i| acc.lcm(d[i].as_ref().expect("set").denom()));
            let scaled: Vec<BigInt> = component
                .iter()
                .map(|&i| (d[i].as_ref().expect("set") * &lcm).to_integer())
                .collect();
            let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
            for (&i, v) in component.iter().zip(&scaled) {
                out[i] = (v / &g).to_i64().ok_or(Error::Overflow)?;
            }
        }
        Ok(ExchangeMatrix { b, d: out })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        ExchangeMatrix::new(Matrix::from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.b
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[(i, j)]
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.d
    }

    pub fn is_skew_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| self.b[(i, j)] == -self.b[(j, i)]))
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.n() {
            return Err(Error::IndexOutOfRange {
                index: k + 1,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// Matrix mutation at the 0-based index `k`.
    pub fn mutate(&self, k: usize) -> Result<ExchangeMatrix> {
        self.check_index(k)?;
        let n = self.n();
        let b = &self.b;
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = if i == k || j == k {
                    -b[(i, j)]
                } else {
                    let (bik, bkj) = (b[(i, k)], b[(k, j)]);
                    if bik > 0 && bkj > 0 {
                        bik.checked_mul(bkj)
                            .and_then(|p| b[(i, j)].checked_add(p))
                            .ok_or(Error::Overflow)?
                    } else if bik < 0 && bkj < 0 {
                        bik.checked_mul(bkj)
                            .and_then(|p| b[(i, j)].checked_sub(p))
                            .ok_or(Error::Overflow)?
                    } else {
                        b[(i, j)]
                    }
                };
                out[(i, j)] = v;
            }
        }
        Ok(ExchangeMatrix {
            b: out,
            d: self.d.clone(),
        })
    }

    /// `σ(B)_ij = B_{σ⁻¹(i) σ⁻¹(j)}`.
    pub fn permute(&self, sigma: &Permutation) -> Result<ExchangeMatrix> {
        let n = self.n();
        if sigma.n() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: sigma.n(),
            });
        }
        let mut out = IntMatrix::zeros(n, n);
        let mut d = vec![0; n];
        for a in 0..n {
            d[sigma.apply(a)] = self.d[a];
            for b in 0..n {
                out[(sigma.apply(a), sigma.apply(b))] = self.b[(a, b)];
            }
        }
        Ok(ExchangeMatrix { b: out, d })
    }
}

impl fmt::Debug for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.b)
    }
}

impl Serialize for ExchangeMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.b.serialize(s)
    }
}

/// Exchange matrix with a tuple of field elements.
#[derive(Clone, Debug, PartialEq)]
pub struct YSeed<F = RatFun> {
    pub b: ExchangeMatrix,
    pub y: Vec<F>,
}

impl YSeed<RatFun> {
    /// `(B, (y1, ..., yn))`.
    pub fn initial(b: ExchangeMatrix) -> Self {
        let n = b.n();
        YSeed {
            b,
            y: RatFun::variables(n),
        }
    }
}

impl<F: Field> YSeed<F> {
    pub fn new(b: ExchangeMatrix, y: Vec<F>) -> Result<Self> {
        if y.len() != b.n() {
            return Err(Error::ArityMismatch {
                expected: b.n(),
                found: y.len(),
            });
        }
        Ok(YSeed { b, y })
    }

    /// Y-seed mutation at the 0-based index `k`. Fails with `SingularPoint`
    /// if a value hits 0 or -1 where an inverse is needed.
    pub fn mutate(&self, k: usize) -> Result<YSeed<F>> {
        let b = self.b.mutate(k)?;
        let yk = &self.y[k];
        let yk_inv = yk.inv().ok_or(Error::SingularPoint)?;
        let one = yk.one_like();
        // (Y_k^{-1} + 1)^{-b} = (Y_k / (Y_k + 1))^{b} for b >= 0
        let plus = yk.clone() + one.clone();
        let z_plus = yk.div(&plus).ok_or(Error::SingularPoint)?;
        let y = (0..self.y.len())
            .map(|i| {
                if i == k {
                    return Ok(yk_inv.clone());
                }
                let bki = self.b.get(k, i);
                if bki == 0 {
                    return Ok(self.y[i].clone());
                }
                let factor = if bki > 0 {
                    z_plus.pow(bki)
                } else {
                    plus.pow(-bki)
                };
                Ok((self.y[i].clone() * factor.ok_or(Error::SingularPoint)?).tidy())
            })
            .collect::<Result<Vec<F>>>()?;
        Ok(YSeed { b, y })
    }

    /// `σ(Y)_i = Y_{σ⁻¹(i)}` together with `σ(B)`.
    pub fn permute(&self, sigma: &Permutation) -> Result<YSeed<F>> {
        let b = self.b.permute(sigma)?;
        let mut y = self.y.clone();
        for (a, v) in self.y.iter().enumerate() {
            y[sigma.apply(a)] = v.clone();
        }
        Ok(YSeed { b, y })
    }
}

/// A triple `γ = (B, m, σ)`; `m` holds 0-based mutation indices.
#[derive(Clone, Debug, PartialEq)]
pub struct MutationSequence {
    pub b: ExchangeMatrix,
    pub m: Vec<usize>,
    pub sigma: Vec<Permutation>,
}

impl MutationSequence {
    /// From 1-based mutation indices, as written in the literature.
    pub fn new(b: ExchangeMatrix, m: &[usize], sigma: Vec<Permutation>) -> Result<Self> {
        if let Some(&bad) = m.iter().find(|&&k| k == 0 || k > b.n()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                n: b.n(),
            });
        }
        MutationSequence::from_zero_based(b, m.iter().map(|k| k - 1).collect(), sigma)
    }

    /// From 1-based mutation indices with identity relabelings.
    pub fn without_relabeling(b: ExchangeMatrix, m: &[usize]) -> Result<Self> {
        let n = b.n();
        MutationSequence::new(b, m, vec![Permutation::identity(n); m.len()])
    }

    pub fn from_zero_based(b: ExchangeMatrix, m: Vec<usize>, sigma: Vec<Permutation>) -> Result<Self> {
        let n = b.n();
        if sigma.len() != m.len() {
            return Err(Error::LengthMismatch {
                expected: m.len(),
                found: sigma.len(),
            });
        }
        if let Some(&bad) = m.iter().find(|&&k| k >= n) {
            return Err(Error::IndexOutOfRange { index: bad + 1, n });
        }
        if let Some(s) = sigma.iter().find(|s| s.n() != n) {
            return Err(Error::ArityMismatch {
                expected: n,
                found: s.n(),
            });
        }
        Ok(MutationSequence { b, m, sigma })
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn m_one_based(&self) -> Vec<usize> {
        self.m.iter().map(|k| k + 1).collect()
    }

    /// `B(0), ..., B(T)`.
    pub fn matrices(&self) -> Result<Vec<ExchangeMatrix>> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(self.b.clone());
        for (t, &k) in self.m.iter().enumerate() {
            let next = out[t].mutate(k)?.permute(&self.sigma[t])?;
            out.push(next);
        }
        Ok(out)
    }

    /// Runs the Y-dynamics from an arbitrary initial tuple.
    pub fn run_from<F: Field>(&self, y0: Vec<F>) -> Result<Trajectory<F>> {
        let mut seeds = Vec::with_capacity(self.len() + 1);
        seeds.push(YSeed::new(self.b.clone(), y0)?);
        for (t, &k) in self.m.iter().enumerate() {
            let next = seeds[t].mutate(k)?.permute(&self.sigma[t])?;
            seeds.push(next);
        }
        Ok(Trajectory {
            b: seeds.iter().map(|s| s.b.clone()).collect(),
            y: Some(seeds.into_iter().map(|s| s.y).collect()),
        })
    }

    /// Symbolic trajectory from `(y1, ..., yn)`; with `symbolic == false`
    /// only the exchange matrices are computed.
    pub fn run(&self, symbolic: bool) -> Result<Trajectory<RatFun>> {
        if symbolic {
            self.run_from(RatFun::variables(self.n()))
        } else {
            Ok(Trajectory {
                b: self.matrices()?,
                y: None,
            })
        }
    }

    /// The cluster transformation `μ_γ(y) = Y(T)`.
    pub fn cluster_transformation(&self) -> Result<Vec<RatFun>> {
        let tr = self.run(true)?;
        Ok(tr.y.and_then(|mut y| y.pop()).expect("symbolic run keeps Y"))
    }

    /// Evaluates `μ_γ` at a point by running the dynamics in its field.
    pub fn evaluate<F: Field>(&self, point: &[F]) -> Result<Vec<F>> {
        let tr = self.run_from(point.to_vec())?;
        Ok(tr.y.and_then(|mut y| y.pop()).expect("run keeps Y"))
    }

    /// `B(T) = B(0)`.
    pub fn is_loop(&self) -> Result<bool> {
        let ms = self.matrices()?;
        Ok(ms.last().expect("B(0) present").matrix() == self.b.matrix())
    }

    /// Same sequence with the last relabeling replaced by `last`.
    pub fn with_last_sigma(&self, last: Permutation) -> Result<MutationSequence> {
        let mut sigma = self.sigma.clone();
        match sigma.last_mut() {
            Some(s) => *s = last,
            None => return Err(Error::EmptySequence),
        }
        MutationSequence::from_zero_based(self.b.clone(), self.m.clone(), sigma)
    }
}

/// Seeds `(B(t), Y(t))` for `t = 0..=T`; `y` is `None` for matrix-only runs.
#[derive(Clone, Debug)]
pub struct Trajectory<F = RatFun> {
    pub b: Vec<ExchangeMatrix>,
    pub y: Option<Vec<Vec<F>>>,
}

impl<F> Trajectory<F> {
    pub fn len(&self) -> usize {
        self.b.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.b.len() == 1
    }
}

/// Arrow multiset of a quiver without loops or 2-cycles; `arrows[(i, j)]`
/// counts arrows `i -> j` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub n: usize,
    pub arrows: BTreeMap<(usize, usize), u64>,
}

impl Quiver {
    /// `Q_ij = [B_ij]_+`.
    pub fn from_matrix(b: &ExchangeMatrix) -> Result<Quiver> {
        if !b.is_skew_symmetric() {
            return Err(Error::NotSkewSymmetric);
        }
        let n = b.n();
        let mut arrows = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if b.get(i, j) > 0 {
                    arrows.insert((i, j), b.get(i, j) as u64);
                }
            }
        }
        Ok(Quiver { n, arrows })
    }

    /// `B_ij = Q_ij - Q_ji`.
    pub fn to_matrix(&self) -> Result<ExchangeMatrix> {
        let n = self.n;
        let mut b = IntMatrix::zeros(n, n);
        for (&(i, j), &count) in &self.arrows {
            if count == 0 {
                continue;
            }
            if i >= n || j >= n {
                return Err(Error::IllegalQuiver(format!(
                    "arrow {}->{} leaves vertex set 1..={n}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::IllegalQuiver(format!("loop at vertex {}", i + 1)));
            }
            if self.arrows.get(&(j, i)).copied().unwrap_or(0) > 0 {
                return Err(Error::IllegalQuiver(format!(
                    "2-cycle between {} and {}",
                    i + 1,
                    j + 1
                )));
            }
            let c = i64::try_from(count).map_err(|_| Error::Overflow)?;
            b[(i, j)] = c;
            b[(j, i)] = -c;
        }
        ExchangeMatrix::new(b)
    }
}
