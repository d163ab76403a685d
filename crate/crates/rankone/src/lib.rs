//! Exact spectral data for rank-one measure-preserving transformations.
//!
//! A rank-one system is built by cutting and stacking: stage `k` cuts the
//! tower into `m_k` columns and inserts `a_k^i` spacers above column `i`. This
//! crate realizes the construction on its digit model — points are digit
//! strings `...s_2 s_1 ; s_0` with `s_j < m_j`, the all-maximal string
//! excluded, and a floor digit `s_0` bounded by the spacer count of the lowest
//! non-maximal position — and computes, in exact rational arithmetic:
//!
//! * tower heights, ball addresses, their ordinals and the odometer map
//!   ([`system`], [`odometer`]);
//! * the stage polynomials `Theta_k`, their normalized squared moduli
//!   `T_k = Theta_k(z) Theta_k(1/z) / m_k`, and the partial products
//!   `P_n = T_1 ... T_n` whose coefficients are the spectral Fourier data
//!   ([`laurent`], [`spectral`]);
//! * Gram data of the canonical isometry between ball indicators and
//!   trigonometric quotients, plus floating-point sampling helpers for the
//!   density and zero-freeness certificates ([`spectral`]).
//!
//! Everything observable is exact (`BigUint` / `BigRational`); the only
//! floating-point surfaces are unit-circle evaluation and sampling.

pub mod error;
pub mod laurent;
pub mod odometer;
pub mod spectral;
pub mod system;

pub use error::{Error, Result, ScheduleViolation};
pub use laurent::LaurentPolynomial;
pub use odometer::{BallAddress, DigitString, SuccessorResult};
pub use system::{heights, total_measure, CutSpacerSchedule, HeightTable, MeasureClass};
