//! Arbitrary-precision scalars, dense linear algebra, quadrature and the
//! adaptive ODE stepper.

mod bigcomplex;
pub mod linalg;
pub mod ode;
mod precision;
pub mod quadrature;

pub use bigcomplex::BigComplex;
pub use linalg::{lu_det, lu_det_c64, lu_solve, LinalgError};
pub use ode::{adaptive_rk, integrate, OdeError, OdeReal, OdeScalar, RkOptions, RunStatus, Trajectory};
pub use precision::{PrecisionCtx, PrecisionTooLow};
pub use quadrature::{
    composite_gauss_legendre, composite_gauss_legendre_big, gauss_legendre, gauss_legendre_big, BigQuadratureRule,
    QuadratureError, QuadratureRule,
};
