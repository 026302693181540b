//! C-matrices, the tropical sign sequence and the integer identities
//! `det(I - F_ε) = det X_ε = det A_ε` and `det(I - C(T)) = det A_{ε_trop}`.

use cluster_nz::catalog;
use cluster_nz::jacobian::{verify_f_det, verify_tropical_limit};
use cluster_nz::tropical::{all_sign_sequences, c_matrix_run, format_signs};

fn main() -> cluster_nz::Result<()> {
    for name in ["a2", "figure-eight", "period-one-3"] {
        let gamma = catalog::by_name(name)?;
        let trace = c_matrix_run(&gamma)?;
        println!("{name}: eps_trop = {}", format_signs(&trace.eps_trop));
        for (t, c) in trace.c.iter().enumerate() {
            println!("  C({t}) = {:?}", c.to_rows());
        }
        let report = verify_tropical_limit(&gamma)?;
        println!(
            "  det(I - C(T)) = {}, det A_trop = {}, probes {:?}",
            report.det_i_minus_c, report.det_a_trop, report.probes
        );
        if gamma.len() <= 3 {
            let all = all_sign_sequences(gamma.len());
            let equal = all.iter().filter(|e| verify_f_det(&gamma, e).is_ok_and(|r| r.equal)).count();
            println!("  F-determinant identity holds for {equal}/{} sign sequences", all.len());
        }
    }
    Ok(())
}
