//! Gamma and Mittag-Leffler functions.

pub mod gamma;
pub mod mittag_leffler;
pub mod oracle;

pub use gamma::{gamma_fn, ln_gamma_abs, rgamma};
pub use mittag_leffler::{
    mittag_leffler, mittag_leffler_eval, ml, MlBranch, MlEvaluation, MlParams, CROSSOVER_BAND, Z_SWITCH,
};
pub use oracle::ml_oracle;
