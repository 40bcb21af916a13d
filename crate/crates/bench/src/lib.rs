//! Fixtures shared by the criterion benches.

use dirac_weyl_core::{Boundary, CutoffFunction, Potential, SemiclassicalProblem};

/// The constant-potential periodic problem used throughout the sweeps.
pub fn flat_problem(h: f64) -> SemiclassicalProblem {
    let psi = CutoffFunction::new(0.0, 2.0);
    SemiclassicalProblem::resolved(
        Potential::constant(1.0),
        h,
        (-10.0, 10.0),
        Boundary::Periodic,
        8.0,
        psi,
        psi,
    )
    .expect("valid fixture")
}

/// A harmonic well on a Dirichlet box.
pub fn well_problem(h: f64) -> SemiclassicalProblem {
    let psi = CutoffFunction::new(0.0, 0.5);
    SemiclassicalProblem::resolved(
        Potential::parse("1 - x^2").expect("valid expression"),
        h,
        (-2.5, 2.5),
        Boundary::Dirichlet,
        8.0,
        psi,
        psi,
    )
    .expect("valid fixture")
}
