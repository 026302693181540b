//! The figure-eight knot complement: complex gluing equations, the
//! hyperbolic volume and the fixed point of the cluster transformation.

use cluster_nz::catalog;
use cluster_nz::geometry::{fixed_point_defect, gluing_system, phi_inverse, shape_angles, solve_gluing_complex, volume};
use num_complex::Complex64;

fn show(zs: &[Complex64]) -> String {
    let parts: Vec<String> = zs.iter().map(|z| format!("{:.12}{:+.12}i", z.re, z.im)).collect();
    format!("[{}]", parts.join(", "))
}

fn main() -> cluster_nz::Result<()> {
    let gamma = catalog::figure_eight();
    let sys = gluing_system(&gamma)?;
    println!("A+ = {:?}\nA- = {:?}", sys.aplus.to_rows(), sys.aminus.to_rows());

    let sol = solve_gluing_complex(&sys, &[Complex64::new(0.5, 0.8); 2], 1e-13, 200)?;
    println!("z- = {} after {} iterations, residual {:e}", show(&sol.zminus), sol.iterations, sol.residual);
    println!("angles = {:?}", shape_angles(&sol));
    println!("volume = {:.12}", volume(&sol));

    let eta = phi_inverse(&sol, &gamma, 1e-10)?;
    println!("eta = {}", show(&eta.eta));
    println!("|mu(eta) - eta| = {:e}", fixed_point_defect(&gamma, &eta.eta)?);
    Ok(())
}
