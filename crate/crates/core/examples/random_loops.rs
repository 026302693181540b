//! Random mutation loops: closes random walks up to relabeling and checks
//! that `A+ A-ᵀ` is symmetric on each.

use cluster_nz::generate::{random_loop, random_loop_seed};
use cluster_nz::network::{check_symplectic, nz_matrices};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cluster_nz::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut shown = 0;
    while shown < 5 {
        let b = random_loop_seed(&mut rng, 5);
        let Some(gamma) = random_loop(&mut rng, &b, 10) else {
            continue;
        };
        let nz = nz_matrices(&gamma)?;
        println!(
            "n={} m={:?} sigma_T={}  symplectic={}  A+={:?}",
            gamma.n(),
            gamma.m_one_based(),
            gamma.sigma.last().expect("non-empty"),
            check_symplectic(&gamma)?,
            nz.aplus.to_rows()
        );
        shown += 1;
    }
    Ok(())
}
