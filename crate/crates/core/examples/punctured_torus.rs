//! The once-punctured torus: exchange matrix from a triangulation, the
//! degenerate Neumann-Zagier matrices of its loops, and a bounded search
//! for reddening sequences that comes back empty.

use cluster_nz::generate::random_fully_mutated;
use cluster_nz::geometry::{b_from_triangulation, Triangulation};
use cluster_nz::network::build_network;
use cluster_nz::tropical::{search_reddening, SearchOutcome, Sign};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cluster_nz::Result<()> {
    let tri = Triangulation::new(3, vec![[0, 1, 2], [0, 1, 2]])?;
    let b = b_from_triangulation(&tri)?;
    println!("B = {:?}", b.matrix().to_rows());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..3 {
        let Some(gamma) = random_fully_mutated(&mut rng, &b, 6, true, 1000) else {
            continue;
        };
        let net = build_network(&gamma)?;
        let nz = net.nz_matrices()?;
        let det = net.signed_nz(&vec![Sign::Plus; gamma.len()])?.det();
        println!("m = {:?}: A+ = {:?}, det A_+ = {det}", gamma.m_one_based(), nz.aplus.to_rows());
    }

    match search_reddening(&b, 8, false)? {
        SearchOutcome::Exhausted { depth, visited, balanced_rows } => {
            println!("no reddening sequence up to depth {depth} ({visited} states, balanced rows: {balanced_rows})")
        }
        SearchOutcome::Found { sequence, .. } => println!("found {:?}", sequence.m_one_based()),
    }
    Ok(())
}
