//! The A2 mutation loop: Y-seed dynamics, its mutation network and the
//! invariant `τ` shared with a second loop of the same cluster transformation.

use cluster_nz::catalog;
use cluster_nz::jacobian::{k_matrix, tau};
use cluster_nz::matrix::Matrix;
use cluster_nz::network::build_network;
use cluster_nz::ratfun::RatFun;

fn main() -> cluster_nz::Result<()> {
    let gamma = catalog::a2_loop();
    let traj = gamma.run(true)?;
    let ys = traj.y.as_ref().expect("symbolic run keeps Y");
    for (t, (b, y)) in traj.b.iter().zip(ys).enumerate() {
        let y: Vec<String> = y.iter().map(|v| v.to_string()).collect();
        println!("t={t}  B={:?}  Y=({})", b.matrix().to_rows(), y.join(", "));
    }

    let net = build_network(&gamma)?;
    let nz = net.nz_matrices()?;
    println!("N0 = {:?}", net.n0.to_rows());
    println!("N+ = {:?}", net.nplus.to_rows());
    println!("N- = {:?}", net.nminus.to_rows());
    println!("A+ = {:?}", nz.aplus.to_rows());
    println!("A- = {:?}", nz.aminus.to_rows());

    let k = k_matrix(&gamma)?;
    let lhs = Matrix::identity_like(2, &RatFun::one(2)).sub(&k).det();
    println!("det(I - K) = {lhs}");
    println!("tau        = {}", tau(&gamma)?);
    println!("tau'       = {}", tau(&catalog::a2_loop_prime())?);
    Ok(())
}
