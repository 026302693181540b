//! Gluing equations, hyperbolic volume, dilogarithms, Dynkin central
//! charges and surface triangulations.

pub mod dilog;
pub mod dynkin;
pub mod gluing;
pub mod triangulation;

pub use dilog::{bloch_wigner, dilog, rogers};
pub use dynkin::{central_charge, dilog_identity_check, positive_solution, DilogReport, DynkinSpec, DynkinType};
pub use gluing::{
    fixed_point_defect, gluing_system, phi, phi_inverse, shape_angles, solve_gluing_complex, solve_gluing_positive,
    solve_gluing_positive_from, volume, FixedPoint, GluingSolution, GluingSystem,
};
pub use triangulation::{b_from_triangulation, Triangulation, TriangulationFile};
