//! Named worked examples: exchange matrices and mutation sequences used by
//! the examples, the CLI fixtures and the test suites.

use crate::cluster::{ExchangeMatrix, MutationSequence, Permutation};
use crate::error::Result;

/// `B = [[0,-1],[1,0]]`, the `A2` quiver `2 → 1`.
pub fn a2_matrix() -> ExchangeMatrix {
    ExchangeMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]).expect("valid matrix")
}

/// The `A2` loop `(B, (1,2), (id,id))`.
pub fn a2_loop() -> MutationSequence {
    MutationSequence::without_relabeling(a2_matrix(), &[1, 2]).expect("valid sequence")
}

/// The `A2` loop `(B, (2,1,2), (id,id,(1 2)))` with the same cluster
/// transformation as [`a2_loop`].
pub fn a2_loop_prime() -> MutationSequence {
    MutationSequence::new(
        a2_matrix(),
        &[2, 1, 2],
        vec![
            Permutation::identity(2),
            Permutation::identity(2),
            Permutation::parse("(1 2)", 2).expect("valid cycle"),
        ],
    )
    .expect("valid sequence")
}

/// The `(A2)` value of `τ` shared by [`a2_loop`] and [`a2_loop_prime`].
pub const A2_TAU: &str = "(4 + 4*y2 + 3*y1*y2)/(1 + y2 + y1*y2)";

/// The five-vertex matrix fixed by `(5 4 3 2 1) ∘ μ_1`.
pub fn period_one_matrix() -> ExchangeMatrix {
    ExchangeMatrix::from_rows(vec![
        vec![0, -1, 2, 2, -1],
        vec![1, 0, -3, 0, 2],
        vec![-2, 3, 0, -3, 2],
        vec![-2, 0, 3, 0, -1],
        vec![1, -2, -2, 1, 0],
    ])
    .expect("valid matrix")
}

/// `T` repetitions of the period-one loop `(B, 1, (5 4 3 2 1))`.
pub fn period_one_loop(t: usize) -> MutationSequence {
    let p = Permutation::parse("(5 4 3 2 1)", 5).expect("valid cycle");
    MutationSequence::new(period_one_matrix(), &vec![1; t], vec![p; t]).expect("valid sequence")
}

/// `τ` of [`period_one_loop`] with `T = 3`.
pub const PERIOD_ONE_TAU_3: &str = "-2*(3*y1^4*y2^2*y3 + 3*y1^4*y2*y3 + 6*y1^3*y2^2*y3 + 3*y1^4*y2 \
    + 4*y1^3*y2*y3 + 3*y1^2*y2^2*y3 + 7*y1^3*y2 + 3*y1^3*y3 + y1^2*y2*y3 - 2*y1^3 + 3*y1^2*y2 \
    - 2*y1^2*y3 - 3*y1^2 - 3*y1*y2 - 2*y2 + 1) / ((y1 + 1)*(y1*y2 + y2 + 1)\
    *(y1^3*y2*y3 + y1^2*y2*y3 + y1^2*y3 + y1^2 + 2*y1 + 1))";

/// Exchange matrix of the once-punctured torus (and of the figure-eight
/// knot complement's monodromy).
pub fn torus_matrix() -> ExchangeMatrix {
    ExchangeMatrix::from_rows(vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]])
        .expect("valid matrix")
}

/// The figure-eight loop `(B, (2,1), (id, (3 2 1)))`.
pub fn figure_eight() -> MutationSequence {
    MutationSequence::new(
        torus_matrix(),
        &[2, 1],
        vec![
            Permutation::identity(3),
            Permutation::parse("(3 2 1)", 3).expect("valid cycle"),
        ],
    )
    .expect("valid sequence")
}

/// Volume of the figure-eight knot complement.
pub const FIGURE_EIGHT_VOLUME: f64 = 2.029_883_212_819_307;

/// Looks up a named example sequence.
pub fn by_name(name: &str) -> Result<MutationSequence> {
    match name {
        "a2" => Ok(a2_loop()),
        "a2-prime" => Ok(a2_loop_prime()),
        "figure-eight" => Ok(figure_eight()),
        _ => {
            if let Some(t) = name.strip_prefix("period-one-") {
                let t: usize = t
                    .parse()
                    .map_err(|_| crate::Error::Parse(format!("unknown example {name:?}")))?;
                return Ok(period_one_loop(t));
            }
            Err(crate::Error::Parse(format!("unknown example {name:?}")))
        }
    }
}

/// Names accepted by [`by_name`] (with `period-one-T` for any `T`).
pub const NAMES: &[&str] = &["a2", "a2-prime", "figure-eight", "period-one-3"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_are_loops() {
        for name in NAMES {
            assert!(by_name(name).unwrap().is_loop().unwrap(), "{name}");
        }
        assert!(by_name("nope").is_err());
    }
}
