//! Property suites: mutation involution, tropical engine agreement,
//! symplectic loops, Jacobians against finite differences and the
//! dilogarithm reflection identity.

mod common;

use cluster_nz::cluster::{ExchangeMatrix, MutationSequence, Permutation};
use cluster_nz::generate::{random_loop, random_loop_seed};
use cluster_nz::network::{check_symplectic, nz_matrices};
use cluster_nz::ratfun::RatFun;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        rng_seed: RngSeed::Fixed(0x5eed),
        ..ProptestConfig::default()
    }
}

fn check(result: common::CaseResult) -> Result<(), TestCaseError> {
    result.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn mutation_is_an_involution(seed in any::<u64>()) {
        check(common::involution_case(&mut ChaCha8Rng::seed_from_u64(seed)))?;
    }

    #[test]
    fn tropical_engines_agree(seed in any::<u64>()) {
        check(common::tropical_case(&mut ChaCha8Rng::seed_from_u64(seed)))?;
    }

    #[test]
    fn symplectic_on_random_loops(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_loop_seed(&mut rng, 5);
        if let Some(gamma) = random_loop(&mut rng, &b, 12) {
            prop_assert!(check_symplectic(&gamma).unwrap());
            let nz = nz_matrices(&gamma).unwrap();
            prop_assert!(nz.aplus.checked_mul(&nz.aminus.transpose()).unwrap().is_symmetric());
        }
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn jacobian_matches_central_differences(seed in any::<u64>()) {
        check(common::jacobian_case(&mut ChaCha8Rng::seed_from_u64(seed)))?;
    }

    #[test]
    fn dilog_reflection(r in 0.02f64..0.99, theta in -3.0f64..3.0) {
        check(common::reflection_case(r, theta))?;
    }
}

#[test]
fn a2_cluster_transformation() {
    let b = ExchangeMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]).unwrap();
    let gamma = MutationSequence::new(b, &[1, 2], vec![Permutation::identity(2); 2]).unwrap();
    let mu = gamma.cluster_transformation().unwrap();
    let expect = |s: &str| RatFun::parse(s, 2).unwrap();
    assert!(mu[0].eq_exact(&expect("(1 + y2 + y1*y2)/y1")).unwrap());
    assert!(mu[1].eq_exact(&expect("1/(y2*(1 + y1))")).unwrap());
}
