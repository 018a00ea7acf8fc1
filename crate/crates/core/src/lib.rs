//! Frobenius homothety on supersingular curves over finite fields.
//!
//! * [`field`]: exact arithmetic in `F_p` and `F_{p^k}`.
//! * [`curves`]: general Weierstrass curves, point enumeration, torsion, and
//!   genus-2 point counts.
//! * [`weil`]: Weil polynomials, the cyclotomic roots-of-unity certificate and
//!   the minimal homothety exponent `m`.
//! * [`homothety`]: point-wise checks that `sigma^{2m}` acts as `[q^m]` on `E[l]`.
//! * [`report`]: the JSON report format shared by the CLI and the web demo.

pub mod curves;
pub mod error;
pub mod field;
pub mod homothety;
pub mod report;
pub mod weil;

pub use error::{Error, Result};
