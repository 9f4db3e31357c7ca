//! Gamma-family special functions, Riemann–Liouville operators on power
//! functions, and quadrature for weakly singular integrands.

mod field;
mod gamma;
mod powersum;
mod quadrature;

pub use field::{Field, FieldTerm};
pub use gamma::{beta_fn, gamma_fn, ln_gamma, rgamma};
pub use powersum::{
    rl_derivative_power, rl_integral_power, rl_integral_powersum_at, FracOrder, PowerSum, PowerTerm, Side,
};
pub use quadrature::{
    adaptive_integrate, gauss_jacobi, gauss_legendre, weighted_endpoint_integral, QuadratureKind,
    QuadratureRule, Rule,
};
pub(crate) use quadrature::{gl_cached as gl_rule, GJ_POINTS, GL_POINTS};
