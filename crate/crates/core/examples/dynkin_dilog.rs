//! Dilogarithm identities for ADE Dynkin loops. Both `Σ L(ζ_i)` and
//! `Σ L(1 - ζ_i)` are compared with the central charge.

use cluster_nz::geometry::{dilog_identity_check, DynkinSpec, DynkinType};

fn main() -> cluster_nz::Result<()> {
    let specs = [
        (DynkinType::A, 1),
        (DynkinType::A, 2),
        (DynkinType::A, 5),
        (DynkinType::D, 4),
        (DynkinType::D, 6),
        (DynkinType::E, 6),
        (DynkinType::E, 7),
        (DynkinType::E, 8),
    ];
    println!("{:<4} {:>8} {:>14} {:>14} {:>10}", "type", "c", "6/pi^2 ΣL(ζ)", "6/pi^2 ΣL(1-ζ)", "error");
    for (kind, rank) in specs {
        let r = dilog_identity_check(&DynkinSpec::new(kind, rank)?, 1e-9)?;
        println!(
            "{:<4} {:>8} {:>14.10} {:>14.10} {:>10.1e}",
            r.spec, r.rhs, r.lhs, r.lhs_complement, r.error_complement
        );
    }
    Ok(())
}
