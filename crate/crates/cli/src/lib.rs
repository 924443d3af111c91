//! Command-line surface over `hilfer-core`: Mittag-Leffler evaluation,
//! scalar and heat-type solves with CSV/JSON output, and the verification
//! suite.

pub mod app;
pub mod heat;
pub mod sine;
pub mod suite;

pub use app::{run, EXIT_NO_CONVERGENCE, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
pub use sine::SineTransformPlan;
