//! Exact arithmetic: big rationals, the real quadratic field Q(sqrt 2),
//! sparse bivariate polynomials with exact division, and the identity battery
//! behind the positivity analysis of the built-in four-point example.

mod identities;
mod poly;
mod qsqrt2;

pub use identities::{
    closed_form, rational_kernel_in_x, verify_condition4_identities, IdentityCheck, IdentityReport,
};
pub use poly::BivarPoly;
pub use qsqrt2::{bareiss_det, rat, QSqrt2, Rational};
