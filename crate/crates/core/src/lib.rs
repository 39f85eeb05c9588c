//! Integer conjugacy of `SL(3, ℤ)` matrices through ς-reduced perfect
//! Hessenberg representatives.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`] – arbitrary-precision matrices, cubic forms, bivariate polynomials.
//! * [`hessenberg`] – Hessenberg types, families `H_Ω^v(m, n)`, rays and `(M|w)`.
//! * [`spectra`] – spectrum classes, the discriminant polynomial and its parabolas.
//! * [`klein`] – floating-point eigen-geometry: orbits, factor-sails, candidate regions.
//! * [`reduction`] – exact minimisation of the MD-characteristic and conjugacy decisions.
//! * [`survey`] – grid and ray scans, the census, rendering and the verdict cache.

pub mod error;
pub mod exact;
pub mod hessenberg;
pub mod klein;
pub mod par;
pub mod reduction;
pub mod spectra;
pub mod survey;

pub use error::{Error, Result};
pub use exact::{BiPoly, CharPoly, CubicForm, Mat3Z, Rational, Vec3Z};
pub use hessenberg::{Family, HessenbergType, RayIndex, RaySpec};
