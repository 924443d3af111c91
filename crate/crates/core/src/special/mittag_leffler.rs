//! Two-parameter Mittag-Leffler function `E_{α,β}(z) = Σ_k z^k / Γ(αk + β)`
//! for real arguments.
//!
//! Evaluation strategy:
//!
//! * `|z| ≤ Z_SWITCH` (and, for `z < 0`, bounded cancellation): the Taylor
//!   series with Neumaier-compensated summation.
//! * `z > 0`: the series has no cancellation and is used until the terms
//!   approach overflow; past that, the exponential asymptotic
//!   `z^{(1-β)/α} exp(z^{1/α}) / α`.
//! * `z < -Z_SWITCH`: the Hankel-contour decomposition. The residues at the
//!   poles `s^α = z` give the oscillating, exponentially damped part and the
//!   branch cut along the negative axis gives the algebraic part. The
//!   algebraic part is first tried as the divergent expansion
//!   `-Σ_{k≥1} z^{-k} / Γ(β - αk)` at optimal truncation; when the smallest
//!   term is not negligible the branch-cut integral is evaluated by adaptive
//!   quadrature instead.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{gamma_sign, ln_gamma_abs, rgamma, sin_pi};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive, integrate_best_effort};

/// Boundary between the series and the asymptotic branches in `|z|`.
pub const Z_SWITCH: f64 = 10.0;

/// Band of `|z|` (for negative `z`) in which both branches are evaluated and
/// compared.
pub const CROSSOVER_BAND: (f64, f64) = (8.0, 12.0);

/// Branch disagreement that triggers the accuracy-loss warning.
pub const CROSSOVER_TOLERANCE: f64 = 1e-9;

// Largest cancellation factor exp(|z|^{1/α}) accepted for the series at z < 0.
const MAX_SERIES_EXPONENT: f64 = 12.0;
// Beyond this z^{1/α} the positive series overflows; switch to the asymptotic.
const MAX_POSITIVE_EXPONENT: f64 = 600.0;
const MAX_SERIES_TERMS: usize = 20_000;
// Accept the truncated algebraic expansion only when its smallest term is this small.
const ASYMPTOTIC_ACCEPT: f64 = 1e-15;
// Largest quadrature error estimate tolerated in the branch-cut integral.
const BRANCH_CUT_ACCEPT: f64 = 1e-12;

/// Arguments of `E_{α,β}(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    pub alpha: f64,
    pub beta: f64,
    pub z: f64,
}

impl MlParams {
    pub fn new(alpha: f64, beta: f64, z: f64) -> Result<Self> {
        let p = Self { alpha, beta, z };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !self.beta.is_finite() || !self.z.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta and z must be finite, got beta = {}, z = {}",
                self.beta, self.z
            )));
        }
        Ok(())
    }
}

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MlBranch {
    Series,
    /// Pole residues plus the optimally truncated algebraic expansion.
    Asymptotic,
    /// Pole residues plus the branch-cut integral.
    BranchCut,
    /// Exponential asymptotic for large positive `z`.
    PositiveAsymptotic,
    /// `α = 1`, Euler-type integral for large negative `z`.
    EulerIntegral,
}

/// A Mittag-Leffler value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlEvaluation {
    pub value: f64,
    pub branch: MlBranch,
    /// `|series − asymptotic|` when `z` lies in the crossover band.
    pub crossover_gap: Option<f64>,
}

impl MlEvaluation {
    /// True when the point lies in the crossover band and the two branches
    /// disagree by more than [`CROSSOVER_TOLERANCE`].
    pub fn accuracy_warning(&self) -> bool {
        self.crossover_gap.is_some_and(|g| !(g <= CROSSOVER_TOLERANCE))
    }
}

/// `E_{α,β}(z)`.
pub fn mittag_leffler(p: MlParams) -> Result<f64> {
    mittag_leffler_eval(p).map(|e| e.value)
}

/// `E_{α,β}(z)` with branch diagnostics.
pub fn mittag_leffler_eval(p: MlParams) -> Result<MlEvaluation> {
    p.validate()?;
    let MlParams { alpha, beta, z } = p;
    if z == 0.0 {
        return Ok(MlEvaluation { value: rgamma(beta), branch: MlBranch::Series, crossover_gap: None });
    }
    if z > 0.0 {
        if z.powf(1.0 / alpha) <= MAX_POSITIVE_EXPONENT {
            let value = series(alpha, beta, z)?;
            return Ok(MlEvaluation { value, branch: MlBranch::Series, crossover_gap: None });
        }
        let value = positive_asymptotic(alpha, beta, z);
        return Ok(MlEvaluation { value, branch: MlBranch::PositiveAsymptotic, crossover_gap: None });
    }

    let x = -z;
    let series_ok = x <= Z_SWITCH && x.powf(1.0 / alpha) <= MAX_SERIES_EXPONENT;
    let in_band = x >= CROSSOVER_BAND.0 && x <= CROSSOVER_BAND.1;
    if series_ok && !in_band {
        let value = series(alpha, beta, z)?;
        return Ok(MlEvaluation { value, branch: MlBranch::Series, crossover_gap: None });
    }
    let (far_value, far_branch) = negative_far(alpha, beta, x)?;
    if in_band && x.powf(1.0 / alpha) <= MAX_SERIES_EXPONENT {
        let near = series(alpha, beta, z)?;
        let gap = (near - far_value).abs();
        let (value, branch) = if series_ok { (near, MlBranch::Series) } else { (far_value, far_branch) };
        return Ok(MlEvaluation { value, branch, crossover_gap: Some(gap) });
    }
    Ok(MlEvaluation { value: far_value, branch: far_branch, crossover_gap: None })
}

/// Infallible convenience wrapper for kernels whose parameters are already
/// validated.
///
/// # Panics
/// If `alpha <= 0` or an argument is not finite.
pub fn ml(alpha: f64, beta: f64, z: f64) -> f64 {
    mittag_leffler(MlParams { alpha, beta, z }).unwrap_or_else(|e| panic!("E_{{{alpha},{beta}}}({z}): {e}"))
}

/// Neumaier (improved Kahan) summation.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// k-th series term `z^k / Γ(αk + β)`; `zk` is the running power `z^k`
/// (possibly overflowed, in which case log space is used).
fn series_term(alpha: f64, beta: f64, z: f64, k: usize, zk: f64) -> f64 {
    let arg = alpha * k as f64 + beta;
    if zk.is_finite() && zk.abs() < 1e250 {
        zk * rgamma(arg)
    } else {
        let sign = if z < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 } * gamma_sign(arg);
        sign * (k as f64 * z.abs().ln() - ln_gamma_abs(arg)).exp()
    }
}

pub(crate) fn series(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    let mut zk = 1.0;
    let mut small_run = 0;
    let mut prev = f64::INFINITY;
    for k in 0..MAX_SERIES_TERMS {
        let term = series_term(alpha, beta, z, k, zk);
        acc.add(term);
        let s = acc.value().abs();
        let decreasing = term.abs() <= prev;
        if term.abs() <= 1e-17 * s && decreasing {
            small_run += 1;
            if small_run >= 2 {
                return Ok(acc.value());
            }
        } else {
            small_run = 0;
        }
        if term != 0.0 {
            prev = term.abs();
        }
        zk *= z;
    }
    Err(Error::NonConvergence {
        terms: MAX_SERIES_TERMS,
        reason: format!("Mittag-Leffler series at alpha = {alpha}, beta = {beta}, z = {z}"),
    })
}

fn positive_asymptotic(alpha: f64, beta: f64, z: f64) -> f64 {
    let root = z.powf(1.0 / alpha);
    let log_main = (1.0 - beta) / alpha * z.ln() + root - alpha.ln();
    // remaining pole and algebraic contributions are below double precision
    // relative to exp(root) once root > MAX_POSITIVE_EXPONENT
    log_main.exp()
}

/// `(2/α) Re[s^{1-β} e^s]` with `s = x^{1/α} e^{iπ/α}`, the residues at the
/// two conjugate poles of the Laplace transform inside the principal sheet.
fn pole_contribution(alpha: f64, beta: f64, x: f64) -> f64 {
    if alpha <= 1.0 {
        return 0.0;
    }
    let modulus = x.powf(1.0 / alpha);
    let angle = PI / alpha;
    let s = Complex64::from_polar(modulus, angle);
    let log_term = (1.0 - beta) * Complex64::new(modulus.ln(), angle) + s;
    2.0 / alpha * log_term.exp().re
}

/// Optimally truncated `-Σ_{k≥1} z^{-k}/Γ(β-αk)` at `z = -x`.
/// Returns `(sum, size of the first omitted term)`.
///
/// Truncation is driven by the envelope `Γ(αk+1-β) / (π x^k)` of the terms
/// rather than the terms themselves, which dip near the poles of `Γ(β-αk)`.
fn algebraic_expansion(alpha: f64, beta: f64, x: f64) -> (f64, f64) {
    let mut acc = CompensatedSum::default();
    let mut prev_env = f64::INFINITY;
    let ln_x = x.ln();
    for k in 1..5000usize {
        let kf = k as f64;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        let y = beta - alpha * kf;
        if y >= 1.0 {
            // Γ(1-y) sits on or near a pole; the direct form is harmless here
            acc.add(sign * rgamma(y) * (-kf * ln_x).exp());
            continue;
        }
        // 1/Γ(y) = Γ(1-y) sin(πy) / π, so each term is env * sin(πy) up to sign
        let env = (ln_gamma_abs(1.0 - y) - kf * ln_x).exp() / PI;
        if env > prev_env {
            return (acc.value(), prev_env);
        }
        prev_env = env;
        // -z^{-k} = -(-1)^k x^{-k}
        acc.add(sign * env * sin_pi(y));
    }
    (acc.value(), prev_env)
}

/// Evaluation for `z = -x` with `x` beyond the series range.
fn negative_far(alpha: f64, beta: f64, x: f64) -> Result<(f64, MlBranch)> {
    if alpha == 1.0 {
        return Ok((euler_integral(beta, -x)?, MlBranch::EulerIntegral));
    }
    let poles = pole_contribution(alpha, beta, x);
    let (algebraic, err) = algebraic_expansion(alpha, beta, x);
    if err <= ASYMPTOTIC_ACCEPT {
        return Ok((poles + algebraic, MlBranch::Asymptotic));
    }
    Ok((branch_cut(alpha, beta, x)?, MlBranch::BranchCut))
}

/// Pole residues plus the branch-cut integral, for `α ≠ 1`.
fn branch_cut(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    let a = alpha - beta;
    if a <= -0.75 {
        // E_{α,β}(z) = (E_{α,β-α}(z) - 1/Γ(β-α)) / z
        let lower = branch_cut(alpha, beta - alpha, x)?;
        return Ok((lower - rgamma(beta - alpha)) / -x);
    }
    let poles = pole_contribution(alpha, beta, x);
    let sin_a = (PI * a).sin();
    let sin_b = (PI * beta).sin();
    let cos_alpha = (PI * alpha).cos();
    // integrand without the r^a factor
    let smooth = |r: f64| -> f64 {
        let ra = r.powf(alpha);
        let denom = ra * ra + 2.0 * x * ra * cos_alpha + x * x;
        (-r).exp() * (x * sin_a - ra * sin_b) / denom
    };
    let peak = x.powf(1.0 / alpha);
    let r_end = 80.0f64.max(a + 80.0);
    let r_c = 1.0f64.min(0.5 * peak);
    let tol = 1e-16;
    let rel = 1e-13;

    // [0, r_c] with r = u^{1/(a+1)} absorbing r^a
    let p = 1.0 / (a + 1.0);
    let head = integrate_best_effort(|u| p * smooth(u.powf(p)), 0.0, r_c.powf(a + 1.0), tol, rel);
    let mut total = head.value;
    let mut err = head.error_estimate;

    let mut breaks = vec![r_c];
    if peak > r_c && peak < r_end {
        let width = (x * (PI * alpha).sin().abs()).max(1e-3).powf(1.0 / alpha).min(peak - r_c);
        for cand in [peak - width, peak, peak + width] {
            if cand > *breaks.last().unwrap() && cand < r_end {
                breaks.push(cand);
            }
        }
    }
    breaks.push(r_end);
    for w in breaks.windows(2) {
        let piece = integrate_best_effort(|r| r.powf(a) * smooth(r), w[0], w[1], tol, rel);
        total += piece.value;
        err += piece.error_estimate;
    }
    if err > BRANCH_CUT_ACCEPT * PI {
        return Err(Error::NonConvergence {
            terms: 0,
            reason: format!("branch-cut integral for alpha = {alpha}, beta = {beta}, z = {} has error {err:e}", -x),
        });
    }
    Ok(poles - total / PI)
}

/// `α = 1`, `z < 0`: `E_{1,β}(z) = (1/Γ(β)) ∫_0^1 exp(z (1 - w^{1/(β-1)})) dw`
/// for `β > 1`, and the recurrence `E_{1,β} = 1/Γ(β) + z E_{1,β+1}` below.
fn euler_integral(beta: f64, z: f64) -> Result<f64> {
    if beta == 1.0 {
        return Ok(z.exp());
    }
    if beta < 1.0 {
        return Ok(rgamma(beta) + z * euler_integral(beta + 1.0, z)?);
    }
    let p = 1.0 / (beta - 1.0);
    // the integrand is concentrated in a layer of width ~1/|z| at w = 1
    let split = (1.0 - 40.0 / z.abs()).max(0.0);
    let f = |w: f64| (z * (1.0 - w.powf(p))).exp();
    let left = integrate_adaptive(f, 0.0, split, 1e-300, 1e-14)?;
    let right = integrate_adaptive(f, split, 1.0, 1e-18, 1e-14)?;
    Ok(rgamma(beta) * (left.value + right.value))
}
