//! Dense and structured linear algebra used by assembly and the solvers.

mod dense;
mod gmres;
mod toeplitz;

pub use dense::{dot, norm_inf, HessenbergLu, LuFactors, Matrix, SymTridiagonal};
pub use gmres::{gmres, GmresConfig, GmresOutcome, LinearOperator};
pub use toeplitz::{toeplitz_matvec, ToeplitzOperator, ToeplitzStencil};
