//! Finite element solvers for the two-point problem
//! −D₀^α u + q u = f on (0, 1), u(0) = u(1) = 0, with 1 < α < 2 and a
//! Riemann–Liouville derivative, plus the variant with D₀^{α−1}u(0) = 0.
//!
//! Two discretisations are provided: plain Galerkin with hat functions, and
//! singularity reconstruction, which splits u = uʳ + μ(x^{α−1} − x²) and
//! solves for the smoother uʳ before recovering μ.

// `!(x > 0.0)` style guards reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod fraccalc;
pub mod linalg;
pub mod mesh;
pub mod solver;

pub use error::{Error, Result};
pub use analysis::{ConvergenceReport, Example, ExactSolution, ExpectedRates, LevelRow};
pub use assembly::{AssembledSystem, BoundaryCondition, Method, ProblemSpec, SingularPair};
pub use fraccalc::{Field, FracOrder, PowerSum, Side};
pub use mesh::{Grading, Mesh, PwLinear};
pub use solver::{ReconSolution, StandardSolution};
