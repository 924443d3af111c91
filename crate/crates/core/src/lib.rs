//! Numerical engine for fractional evolution equations with the Hilfer
//! derivative `D^{γ,δ}` of order `1 < γ < 2` and type `0 ≤ δ ≤ 1`.
//!
//! * [`special`]: Gamma and two-parameter Mittag-Leffler functions, plus a
//!   big-number reference evaluator.
//! * [`fractional`]: orders, grids, sampled paths, discrete `J^σ` and
//!   `D^{γ,δ}`.
//! * [`scalar`]: closed-form solutions of the scalar linear problem.
//! * [`operators`]: spectral cosine, sine and solution families for
//!   diagonal generators and checks of their identities.
//! * [`mild`]: Picard iteration for semilinear mild solutions.

pub mod convolution;
pub mod error;
pub mod fractional;
pub mod mild;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use fractional::{FracOrder, Grid, SampledPath, WeightedPath};
pub use operators::{DiagonalGenerator, ModeCoeffs};
pub use report::VerifyReport;
