//! The determinant formula `det(I - K) = det(A+ Z- + A- Z+)` on the
//! five-vertex period-one loop, checked exactly and at random points
//! modulo a prime.

use std::time::Instant;

use cluster_nz::catalog;
use cluster_nz::jacobian::{verify_det_formula, z_matrices, Mode};

fn main() -> cluster_nz::Result<()> {
    let gamma = catalog::period_one_loop(3);
    let z = z_matrices(&gamma)?;
    for (t, (p, m)) in z.zplus.iter().zip(&z.zminus).enumerate() {
        println!("t={}  z+ = {p}\n      z- = {m}", t + 1);
    }

    let start = Instant::now();
    let modular = verify_det_formula(&gamma, Mode::Modular, 8, 42)?;
    println!(
        "modular: equal={} points={:?} degree bound={:?} failure bound={:e} ({:?})",
        modular.equal,
        modular.points_used,
        modular.degree_bound,
        modular.failure_probability_bound.unwrap_or(1.0),
        start.elapsed()
    );

    let start = Instant::now();
    let exact = verify_det_formula(&gamma, Mode::Exact, 0, 0)?;
    println!("exact: equal={} ({:?})", exact.equal, start.elapsed());
    println!("det(I - K) = {}", exact.lhs);
    Ok(())
}
