//! Ground-truth solutions, error norms and convergence rates.

mod exact;
mod green;
mod norms;
mod rates;

pub use exact::{exact_q0, potential_x_times_1mx, reference_solution, Example, ExactSolution};
pub use green::green_q0;
pub use norms::{error_norms, Approximation, ErrorContext, ErrorNorms, WhichField};
pub use rates::{ell, ell_mixed, mean_rate, rates, ConvergenceReport, ExpectedRates, LevelRow, BETA};
