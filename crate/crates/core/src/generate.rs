//! Generators for random and exhaustive families of mutation sequences.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cluster::{ExchangeMatrix, MutationSequence, Permutation};
use crate::matrix::IntMatrix;
use crate::network::is_fully_mutated;

/// Random skew-symmetric `n×n` matrix with entries in `[-max_entry, max_entry]`.
pub fn random_skew_matrix<R: Rng>(rng: &mut R, n: usize, max_entry: i64) -> ExchangeMatrix {
    let mut b = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-max_entry..=max_entry);
            b[(i, j)] = v;
            b[(j, i)] = -v;
        }
    }
    ExchangeMatrix::new(b).expect("skew-symmetric")
}

/// Random orientation of a tree on `n` vertices (a mutation-finite seed).
pub fn random_tree_quiver<R: Rng>(rng: &mut R, n: usize) -> ExchangeMatrix {
    let mut b = IntMatrix::zeros(n, n);
    for j in 1..n {
        let i = rng.gen_range(0..j);
        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
        b[(i, j)] = s;
        b[(j, i)] = -s;
    }
    ExchangeMatrix::new(b).expect("skew-symmetric")
}

fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffled identity")
}

/// Random sequence of length `t` on `b`; relabelings are random when
/// `relabel` is set and identities otherwise.
pub fn random_sequence<R: Rng>(rng: &mut R, b: &ExchangeMatrix, t: usize, relabel: bool) -> MutationSequence {
    let n = b.n();
    let m: Vec<usize> = (0..t).map(|_| rng.gen_range(0..n)).collect();
    let sigma = (0..t)
        .map(|_| if relabel { random_permutation(rng, n) } else { Permutation::identity(n) })
        .collect();
    MutationSequence::from_zero_based(b.clone(), m, sigma).expect("indices in range")
}

/// A fully mutated random sequence on `b` of length at most `max_t`, or
/// `None` after `attempts` tries.
pub fn random_fully_mutated<R: Rng>(
    rng: &mut R,
    b: &ExchangeMatrix,
    max_t: usize,
    relabel: bool,
    attempts: usize,
) -> Option<MutationSequence> {
    for _ in 0..attempts {
        let t = rng.gen_range(1..=max_t);
        let g = random_sequence(rng, b, t, relabel);
        if is_fully_mutated(&g).unwrap_or(false) {
            return Some(g);
        }
    }
    None
}

/// Relabelings `σ` with `σ(b) = target`.
pub fn isomorphisms(b: &ExchangeMatrix, target: &ExchangeMatrix) -> Vec<Permutation> {
    Permutation::all(b.n())
        .into_iter()
        .filter(|p| b.permute(p).map(|c| &c == target).unwrap_or(false))
        .collect()
}

/// A fully mutated mutation loop found by a random walk of length at most
/// `max_len` from `b` that closes up to relabeling.
pub fn random_loop<R: Rng>(rng: &mut R, b: &ExchangeMatrix, max_len: usize) -> Option<MutationSequence> {
    let n = b.n();
    let mut m = Vec::new();
    let mut cur = b.clone();
    for _ in 0..max_len {
        let k = loop {
            let k = rng.gen_range(0..n);
            if n == 1 || m.last() != Some(&k) {
                break k;
            }
        };
        m.push(k);
        cur = cur.mutate(k).ok()?;
        let closing = isomorphisms(&cur, b);
        if let Some(last) = closing.choose(rng) {
            let mut sigma = vec![Permutation::identity(n); m.len()];
            *sigma.last_mut().expect("non-empty") = last.clone();
            let g = MutationSequence::from_zero_based(b.clone(), m.clone(), sigma).ok()?;
            if is_fully_mutated(&g).unwrap_or(false) {
                return Some(g);
            }
        }
    }
    None
}

/// Starting matrices with finite mutation classes, so random walks close up.
pub fn random_loop_seed<R: Rng>(rng: &mut R, max_n: usize) -> ExchangeMatrix {
    if rng.gen_bool(0.15) {
        return crate::catalog::torus_matrix();
    }
    let n = rng.gen_range(1..=max_n);
    let mut b = random_tree_quiver(rng, n);
    for _ in 0..rng.gen_range(0..4) {
        b = b.mutate(rng.gen_range(0..n)).expect("mutation-finite");
    }
    b
}

/// All skew-symmetric `n×n` matrices with entries in `[-max_entry, max_entry]`.
pub fn skew_matrices(n: usize, max_entry: i64) -> Vec<ExchangeMatrix> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let width = (2 * max_entry + 1) as usize;
    let total = width.pow(pairs.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut b = IntMatrix::zeros(n, n);
            for &(i, j) in &pairs {
                let v = (code % width) as i64 - max_entry;
                code /= width;
                b[(i, j)] = v;
                b[(j, i)] = -v;
            }
            ExchangeMatrix::new(b).expect("skew-symmetric")
        })
        .collect()
}

/// The exhaustive grid: every skew-symmetric `B` with `n ≤ max_n` and
/// `|B_ij| ≤ max_entry`, every `m` of length `1 ≤ T ≤ max_t`, identity
/// relabelings except a final `σ_T` ranging over all permutations.
/// Only fully mutated sequences are returned.
pub fn exhaustive_grid(max_n: usize, max_t: usize, max_entry: i64) -> Vec<MutationSequence> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let perms = Permutation::all(n);
        for b in skew_matrices(n, max_entry) {
            for t in 1..=max_t {
                for code in 0..n.pow(t as u32) {
                    let m: Vec<usize> = (0..t).map(|s| code / n.pow(s as u32) % n).collect();
                    for last in &perms {
                        let mut sigma = vec![Permutation::identity(n); t];
                        sigma[t - 1] = last.clone();
                        let g = MutationSequence::from_zero_based(b.clone(), m.clone(), sigma)
                            .expect("indices in range");
                        if is_fully_mutated(&g).unwrap_or(false) {
                            out.push(g);
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_loops_are_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut found = 0;
        for _ in 0..40 {
            let b = random_loop_seed(&mut rng, 4);
            if let Some(g) = random_loop(&mut rng, &b, 10) {
                assert!(g.is_loop().unwrap());
                assert!(is_fully_mutated(&g).unwrap());
                found += 1;
            }
        }
        assert!(found > 10, "{found}");
    }

    #[test]
    fn grid_counts() {
        assert_eq!(skew_matrices(3, 2).len(), 125);
        let grid = exhaustive_grid(2, 2, 1);
        assert!(grid.iter().all(|g| is_fully_mutated(g).unwrap()));
        assert!(grid.iter().any(|g| g.n() == 2));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = random_skew_matrix(&mut rng, 4, 2);
        let g = random_fully_mutated(&mut rng, &b, 10, true, 1000).unwrap();
        assert!(g.len() <= 10);
    }
}
