//! Mutation networks: vertex classes, adjacency matrices `N0, N+, N-`,
//! Neumann-Zagier matrices, the fully-mutated criterion and the block
//! matrices `α`, `L_ε`, `X_ε`.

use std::fmt::Write as _;

use crate::cluster::{ExchangeMatrix, MutationSequence};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::tropical::{f_matrix, Sign};

/// Disjoint-set forest with path compression and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
    }
}

/// An equivalence class of black vertices `(i, t)`; `i` is 0-based and
/// `t` runs over `0..=T`, with `(i, T)` and `(i, 0)` both listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    /// Sorted by `(t, i)`; the first member is the canonical representative.
    pub members: Vec<(usize, usize)>,
}

impl VertexClass {
    /// Minimal `(t, i)`, returned as `(i, t)`.
    pub fn representative(&self) -> (usize, usize) {
        let (t, i) = self.members[0];
        (i, t)
    }

    pub fn contains(&self, i: usize, t: usize) -> bool {
        self.members.binary_search(&(t, i)).is_ok()
    }

    /// Members as 1-based `(i, t)` pairs.
    pub fn members_one_based(&self) -> Vec<(usize, usize)> {
        self.members.iter().map(|&(t, i)| (i + 1, t)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOrder {
    /// Row `s` is the class of the mutation point `(m_s, s-1)`.
    MutationPoint,
    /// Classes sorted by canonical representative.
    Canonical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MutationNetwork {
    pub n: usize,
    pub t: usize,
    pub classes: Vec<VertexClass>,
    /// `class_of[t][i]`: row index of the class of `(i, t)`.
    pub class_of: Vec<Vec<usize>>,
    pub n0: IntMatrix,
    pub nplus: IntMatrix,
    pub nminus: IntMatrix,
    pub row_order: RowOrder,
    pub m: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NZMatrices {
    pub aplus: IntMatrix,
    pub aminus: IntMatrix,
}

impl NZMatrices {
    /// Column `t` from `A_+`, `A_-` or `A_0 = N0` according to `eps[t]`.
    pub fn signed(&self, n0: &IntMatrix, eps: &[Sign]) -> Result<IntMatrix> {
        let cols = self.aplus.cols();
        if eps.len() != cols {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: eps.len(),
            });
        }
        Ok(IntMatrix::from_fn(self.aplus.rows(), cols, |e, t| match eps[t] {
            Sign::Plus => self.aplus[(e, t)],
            Sign::Minus => self.aminus[(e, t)],
            Sign::Zero => n0[(e, t)],
        }))
    }
}

/// Builds the mutation network, computing the adjacency matrices both from
/// the drawing rules and from the closed formulas over class members, and
/// checking that the two agree.
pub fn build_network(gamma: &MutationSequence) -> Result<MutationNetwork> {
    let (n, big_t) = (gamma.n(), gamma.len());
    if big_t == 0 {
        return Err(Error::EmptySequence);
    }
    let bs = gamma.matrices()?;
    let id = |i: usize, t: usize| t * n + i;
    let mut uf = UnionFind::new(n * (big_t + 1));
    for t in 1..=big_t {
        let (k, sigma) = (gamma.m[t - 1], &gamma.sigma[t - 1]);
        for i in (0..n).filter(|&i| i != k) {
            uf.union(id(i, t - 1), id(sigma.apply(i), t));
        }
    }
    for i in 0..n {
        uf.union(id(i, big_t), id(i, 0));
    }

    let mut by_root: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
    for t in 0..=big_t {
        for i in 0..n {
            by_root.entry(uf.find(id(i, t))).or_default().push((t, i));
        }
    }
    let mut classes: Vec<VertexClass> = by_root
        .into_values()
        .map(|mut members| {
            members.sort_unstable();
            VertexClass { members }
        })
        .collect();
    classes.sort_by_key(|c| c.members[0]);

    let point_class = |classes: &[VertexClass], s: usize| {
        let k = gamma.m[s - 1];
        classes
            .iter()
            .position(|c| c.contains(k, s - 1))
            .expect("every vertex lies in a class")
    };
    let fully = classes.len() == big_t && {
        let mut hit = vec![false; classes.len()];
        (1..=big_t).for_each(|s| hit[point_class(&classes, s)] = true);
        hit.iter().all(|&h| h)
    };
    let row_order = if fully {
        let order: Vec<VertexClass> = (1..=big_t)
            .map(|s| classes[point_class(&classes, s)].clone())
            .collect();
        classes = order;
        RowOrder::MutationPoint
    } else {
        RowOrder::Canonical
    };
    let mut class_of = vec![vec![0usize; n]; big_t + 1];
    for (row, c) in classes.iter().enumerate() {
        for &(t, i) in &c.members {
            class_of[t][i] = row;
        }
    }

    let rows = classes.len();
    let mut n0 = IntMatrix::zeros(rows, big_t);
    let mut nplus = IntMatrix::zeros(rows, big_t);
    let mut nminus = IntMatrix::zeros(rows, big_t);
    for t in 1..=big_t {
        let (k, sigma, b) = (gamma.m[t - 1], &gamma.sigma[t - 1], &bs[t - 1]);
        n0[(class_of[t - 1][k], t - 1)] += 1;
        n0[(class_of[t][sigma.apply(k)], t - 1)] += 1;
        for i in 0..n {
            let a = b.get(k, i);
            if a > 0 {
                nplus[(class_of[t - 1][i], t - 1)] += a;
            } else if a < 0 {
                nminus[(class_of[t - 1][i], t - 1)] -= a;
            }
        }
    }

    let (l0, lp, lm) = lemma_adjacency(gamma, &bs, &classes)?;
    if l0 != n0 || lp != nplus || lm != nminus {
        return Err(Error::Inconsistent(
            "drawn adjacency matrices differ from the class-member formulas".into(),
        ));
    }

    Ok(MutationNetwork {
        n,
        t: big_t,
        classes,
        class_of,
        n0,
        nplus,
        nminus,
        row_order,
        m: gamma.m.clone(),
    })
}

/// Adjacency matrices from sums over class members:
/// `n0(e,t) = #{(m_t, t-1), (σ_t(m_t), t)} ∩ e` and
/// `n±(e,t) = Σ_{(i,t) ∈ e} [±B_{m_t, σ_t⁻¹(i)}(t-1)]_+`.
fn lemma_adjacency(
    gamma: &MutationSequence,
    bs: &[ExchangeMatrix],
    classes: &[VertexClass],
) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
    let big_t = gamma.len();
    let rows = classes.len();
    let mut n0 = IntMatrix::zeros(rows, big_t);
    let mut np = IntMatrix::zeros(rows, big_t);
    let mut nm = IntMatrix::zeros(rows, big_t);
    for (e, class) in classes.iter().enumerate() {
        for t in 1..=big_t {
            let k = gamma.m[t - 1];
            let sigma = &gamma.sigma[t - 1];
            let inv = sigma.inverse();
            for &(u, i) in &class.members {
                if i == k && u == t - 1 {
                    n0[(e, t - 1)] += 1;
                }
                if i == sigma.apply(k) && u == t {
                    n0[(e, t - 1)] += 1;
                }
                if u == t {
                    let a = bs[t - 1].get(k, inv.apply(i));
                    np[(e, t - 1)] += a.max(0);
                    nm[(e, t - 1)] += (-a).max(0);
                }
            }
        }
    }
    Ok((n0, np, nm))
}

impl MutationNetwork {
    pub fn nz_matrices(&self) -> Result<NZMatrices> {
        Ok(NZMatrices {
            aplus: self.n0.checked_sub(&self.nplus)?,
            aminus: self.n0.checked_sub(&self.nminus)?,
        })
    }

    pub fn is_fully_mutated(&self) -> bool {
        self.row_order == RowOrder::MutationPoint
    }

    pub fn signed_nz(&self, eps: &[Sign]) -> Result<IntMatrix> {
        self.nz_matrices()?.signed(&self.n0, eps)
    }

    /// Graphviz rendering: classes as points, steps as boxes, broken edges
    /// dashed, arrows for `N+` (box to class) and `N-` (class to box).
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph network {\n");
        for (e, c) in self.classes.iter().enumerate() {
            let (i, t) = c.representative();
            let _ = writeln!(
                s,
                "  e{} [shape=point, width=0.15, xlabel=\"({},{})\"];",
                e + 1,
                i + 1,
                t
            );
        }
        for t in 1..=self.t {
            let _ = writeln!(s, "  t{t} [shape=box, label=\"{t}\"];");
        }
        for e in 0..self.classes.len() {
            for t in 0..self.t {
                for _ in 0..self.n0[(e, t)] {
                    let _ = writeln!(s, "  e{} -> t{} [style=dashed, dir=none];", e + 1, t + 1);
                }
                for _ in 0..self.nplus[(e, t)] {
                    let _ = writeln!(s, "  t{} -> e{};", t + 1, e + 1);
                }
                for _ in 0..self.nminus[(e, t)] {
                    let _ = writeln!(s, "  e{} -> t{};", e + 1, t + 1);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// `A_+ = N0 - N+` and `A_- = N0 - N-` straight from a sequence.
pub fn nz_matrices(gamma: &MutationSequence) -> Result<NZMatrices> {
    build_network(gamma)?.nz_matrices()
}

/// Offset of the block for time `u` in `0..=T`, with time 0 identified
/// with time `T`.
fn block(u: usize, big_t: usize, n: usize) -> usize {
    ((u + big_t - 1) % big_t) * n
}

/// Row/column index of the vertex `(i, u)` in the block matrices.
pub fn block_index(i: usize, u: usize, big_t: usize, n: usize) -> usize {
    block(u, big_t, n) + i
}

/// `α`: block `(t, t-1)` is `P_{σ_t} H_{m_t}`, where `H_k` is the identity
/// with the `(k,k)` entry removed.
pub fn alpha_matrix(gamma: &MutationSequence) -> Result<IntMatrix> {
    let (n, big_t) = (gamma.n(), gamma.len());
    if big_t == 0 {
        return Err(Error::EmptySequence);
    }
    let mut a = IntMatrix::zeros(n * big_t, n * big_t);
    for t in 1..=big_t {
        let (k, sigma) = (gamma.m[t - 1], &gamma.sigma[t - 1]);
        for i in (0..n).filter(|&i| i != k) {
            a[(block(t, big_t, n) + sigma.apply(i), block(t - 1, big_t, n) + i)] = 1;
        }
    }
    Ok(a)
}

/// `L_ε`: block `(t, t-1)` is `P_{σ_t} F_{m_t,ε_t}(B(t-1))ᵀ`.
pub fn l_matrix(gamma: &MutationSequence, eps: &[Sign]) -> Result<IntMatrix> {
    let (n, big_t) = (gamma.n(), gamma.len());
    if big_t == 0 {
        return Err(Error::EmptySequence);
    }
    if eps.len() != big_t {
        return Err(Error::LengthMismatch {
            expected: big_t,
            found: eps.len(),
        });
    }
    let bs = gamma.matrices()?;
    let mut l = IntMatrix::zeros(n * big_t, n * big_t);
    for t in 1..=big_t {
        let k = gamma.m[t - 1];
        let pf = gamma.sigma[t - 1]
            .matrix()
            .checked_mul(&f_matrix(&bs[t - 1], k, eps[t - 1])?.transpose())?;
        let (r0, c0) = (block(t, big_t, n), block(t - 1, big_t, n));
        for i in 0..n {
            for j in 0..n {
                l[(r0 + i, c0 + j)] = pf[(i, j)];
            }
        }
    }
    Ok(l)
}

/// `(I - α)⁻¹ = Σ_k α^k`, or `NotNilpotent` if `α^{Tn} ≠ 0`.
pub fn neumann_inverse(alpha: &IntMatrix) -> Result<IntMatrix> {
    let size = alpha.rows();
    let mut sum = IntMatrix::identity(size);
    let mut power = IntMatrix::identity(size);
    for _ in 0..size {
        power = power.checked_mul(alpha)?;
        if power.is_zero() {
            return Ok(sum);
        }
        sum = sum.checked_add(&power)?;
    }
    Err(Error::NotNilpotent)
}

/// `X_ε = (I - α)⁻¹ (I - L_ε)`.
pub fn x_matrix(gamma: &MutationSequence, eps: &[Sign]) -> Result<IntMatrix> {
    let alpha = alpha_matrix(gamma)?;
    let inv = neumann_inverse(&alpha)?;
    let l = l_matrix(gamma, eps)?;
    inv.checked_mul(&IntMatrix::identity(l.rows()).checked_sub(&l)?)
}

/// Whether `α` has no directed cycle, reading `α` as the functional graph
/// `j -> i` for `α_ij = 1`.
fn alpha_graph_acyclic(alpha: &IntMatrix) -> bool {
    let size = alpha.rows();
    let next: Vec<Option<usize>> = (0..size)
        .map(|j| (0..size).find(|&i| alpha[(i, j)] != 0))
        .collect();
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut state = vec![0u8; size];
    for start in 0..size {
        let mut path = Vec::new();
        let mut cur = Some(start);
        while let Some(v) = cur {
            match state[v] {
                2 => break,
                1 => return false,
                _ => {
                    state[v] = 1;
                    path.push(v);
                    cur = next[v];
                }
            }
        }
        for v in path {
            state[v] = 2;
        }
    }
    true
}

/// The four equivalent fully-mutated conditions: every class contains a
/// mutation point, the number of classes is `T`, `α` is nilpotent, and the
/// graph of `α` is acyclic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FullyMutatedReport {
    pub every_class_mutated: bool,
    pub class_count_is_t: bool,
    pub alpha_nilpotent: bool,
    pub alpha_graph_acyclic: bool,
}

impl FullyMutatedReport {
    pub fn agree(&self) -> bool {
        let v = self.every_class_mutated;
        self.class_count_is_t == v && self.alpha_nilpotent == v && self.alpha_graph_acyclic == v
    }
}

pub fn fully_mutated_report(gamma: &MutationSequence) -> Result<FullyMutatedReport> {
    if gamma.is_empty() {
        return Err(Error::EmptySequence);
    }
    let net = build_network(gamma)?;
    let every_class_mutated = net.classes.iter().all(|c| {
        (1..=net.t).any(|s| c.contains(gamma.m[s - 1], s - 1))
    });
    let alpha = alpha_matrix(gamma)?;
    let size = alpha.rows();
    let mut power = IntMatrix::identity(size);
    let mut nilpotent = false;
    for _ in 0..size {
        power = power.checked_mul(&alpha)?;
        if power.is_zero() {
            nilpotent = true;
            break;
        }
    }
    Ok(FullyMutatedReport {
        every_class_mutated,
        class_count_is_t: net.classes.len() == net.t,
        alpha_nilpotent: nilpotent,
        alpha_graph_acyclic: alpha_graph_acyclic(&alpha),
    })
}

/// Evaluates all four fully-mutated conditions, checks that they agree,
/// and returns the common value. The empty sequence is not fully mutated.
pub fn is_fully_mutated(gamma: &MutationSequence) -> Result<bool> {
    if gamma.is_empty() {
        return Ok(false);
    }
    let r = fully_mutated_report(gamma)?;
    if !r.agree() {
        return Err(Error::Inconsistent(format!(
            "fully-mutated conditions disagree: {r:?}"
        )));
    }
    Ok(r.every_class_mutated)
}

/// Whether `A_+ A_-ᵀ` is symmetric.
pub fn check_symplectic(gamma: &MutationSequence) -> Result<bool> {
    if !gamma.b.is_skew_symmetric() {
        return Err(Error::NotSkewSymmetric);
    }
    let net = build_network(gamma)?;
    if !net.is_fully_mutated() {
        return Err(Error::NotFullyMutated);
    }
    let nz = net.nz_matrices()?;
    Ok(nz.aplus.checked_mul(&nz.aminus.transpose())?.is_symmetric())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::Permutation;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]).unwrap()
    }

    fn im(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn a2_loop() -> MutationSequence {
        MutationSequence::without_relabeling(a2(), &[1, 2]).unwrap()
    }

    fn figure_eight() -> MutationSequence {
        let b = ExchangeMatrix::from_rows(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).unwrap();
        MutationSequence::new(
            b,
            &[2, 1],
            vec![Permutation::identity(3), Permutation::parse("(3 2 1)", 3).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn a2_network() {
        let net = build_network(&a2_loop()).unwrap();
        assert_eq!(net.n0, im(vec![vec![2, 0], vec![0, 2]]));
        assert!(net.nplus.is_zero());
        assert_eq!(net.nminus, im(vec![vec![0, 1], vec![1, 0]]));
        let nz = net.nz_matrices().unwrap();
        assert_eq!(nz.aplus, im(vec![vec![2, 0], vec![0, 2]]));
        assert_eq!(nz.aminus, im(vec![vec![2, -1], vec![-1, 2]]));
        assert!(net.is_fully_mutated());
    }

    #[test]
    fn figure_eight_network() {
        let net = build_network(&figure_eight()).unwrap();
        assert_eq!(net.n0, im(vec![vec![1, 1], vec![1, 1]]));
        assert_eq!(net.nplus, im(vec![vec![2, 2], vec![0, 0]]));
        assert_eq!(net.nminus, im(vec![vec![0, 0], vec![2, 2]]));
        let nz = net.nz_matrices().unwrap();
        assert_eq!(nz.aplus, im(vec![vec![-1, -1], vec![1, 1]]));
        assert_eq!(nz.aminus, im(vec![vec![1, 1], vec![-1, -1]]));
    }

    #[test]
    fn signed_nz_examples() {
        let net = build_network(&a2_loop()).unwrap();
        use Sign::*;
        assert_eq!(net.signed_nz(&[Plus, Plus]).unwrap(), im(vec![vec![2, 0], vec![0, 2]]));
        assert_eq!(net.signed_nz(&[Zero, Zero]).unwrap(), net.n0);
        assert_eq!(net.signed_nz(&[Plus, Minus]).unwrap(), im(vec![vec![2, -1], vec![0, 2]]));
        assert!(matches!(net.signed_nz(&[Plus]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn fully_mutated_examples() {
        assert!(is_fully_mutated(&a2_loop()).unwrap());
        let g = MutationSequence::without_relabeling(a2(), &[1, 1]).unwrap();
        assert!(!is_fully_mutated(&g).unwrap());
        let b4 = ExchangeMatrix::from_rows(vec![
            vec![0, 1, 0, 0],
            vec![-1, 0, 1, 0],
            vec![0, -1, 0, 1],
            vec![0, 0, -1, 0],
        ])
        .unwrap();
        let swap = Permutation::parse("(2 3)", 4).unwrap();
        let g = MutationSequence::new(
            b4,
            &[1, 4, 1],
            vec![swap.clone(), Permutation::identity(4), swap],
        )
        .unwrap();
        let r = fully_mutated_report(&g).unwrap();
        assert!(r.agree());
        assert!(!is_fully_mutated(&g).unwrap());
        assert!(!is_fully_mutated(&MutationSequence::without_relabeling(a2(), &[]).unwrap()).unwrap());
    }

    #[test]
    fn block_matrices_for_a2() {
        let g = a2_loop();
        let alpha = alpha_matrix(&g).unwrap();
        let inv = neumann_inverse(&alpha).unwrap();
        assert_eq!(
            IntMatrix::identity(4).checked_sub(&alpha).unwrap().checked_mul(&inv).unwrap(),
            IntMatrix::identity(4)
        );
        assert_eq!(IntMatrix::identity(4).checked_sub(&alpha).unwrap().det_i64().unwrap(), 1);
        let net = build_network(&g).unwrap();
        for eps in crate::tropical::all_sign_sequences(2) {
            let x = x_matrix(&g, &eps).unwrap();
            let a = net.signed_nz(&eps).unwrap();
            assert_eq!(x.det(), a.det(), "eps {eps:?}");
            for s in 1..=2 {
                for t in 1..=2 {
                    let r = block_index(g.m[s - 1], s - 1, 2, 2);
                    let c = block_index(g.m[t - 1], t - 1, 2, 2);
                    assert_eq!(x[(r, c)], a[(s - 1, t - 1)]);
                }
            }
        }
        let bad = MutationSequence::without_relabeling(a2(), &[1, 1]).unwrap();
        assert_eq!(x_matrix(&bad, &[Sign::Plus, Sign::Plus]).unwrap_err(), Error::NotNilpotent);
    }

    #[test]
    fn symplectic_examples() {
        assert!(check_symplectic(&a2_loop()).unwrap());
        let nz = nz_matrices(&a2_loop()).unwrap();
        assert_eq!(
            nz.aplus.checked_mul(&nz.aminus.transpose()).unwrap(),
            im(vec![vec![4, -2], vec![-2, 4]])
        );
        assert!(check_symplectic(&figure_eight()).unwrap());
        let bad = MutationSequence::without_relabeling(a2(), &[1, 1]).unwrap();
        assert_eq!(check_symplectic(&bad).unwrap_err(), Error::NotFullyMutated);
    }

    #[test]
    fn empty_sequence_has_no_network() {
        let g = MutationSequence::without_relabeling(a2(), &[]).unwrap();
        assert_eq!(build_network(&g).unwrap_err(), Error::EmptySequence);
    }

    #[test]
    fn dot_export_mentions_every_step() {
        let dot = build_network(&a2_loop()).unwrap().to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("t1 [shape=box") && dot.contains("t2 [shape=box"));
        assert_eq!(dot.matches("style=dashed").count(), 4);
    }
}
