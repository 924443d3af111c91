//! Spectral cosine, sine, kernel and solution families of a diagonal
//! generator, with checks of their identities.
//!
//! For an eigenvalue `λ` the families act by the scalar multipliers
//!
//! ```text
//! cosine    c(t) = t^{μ-1} E_{γ,μ}(λ t^γ)
//! sine      s(t) = t^μ     E_{γ,μ+1}(λ t^γ)      = ∫_0^t c
//! kernel    p(t) = t^{γ-1} E_{γ,γ}(λ t^γ)        = J^{1-δ(2-γ)} c
//! solution  e(t) =         E_{γ,1}(λ t^γ)        = J^ρ c
//! ```
//!
//! and `J^σ` of a kernel `t^{β-1} E_{γ,β}(λ t^γ)` is `t^{β+σ-1} E_{γ,β+σ}(λ t^γ)`.

use crate::error::{Error, Result};
use crate::fractional::FracOrder;
use crate::quadrature::integrate_best_effort;
use crate::report::VerifyReport;
use crate::special::{gamma_fn, ml, rgamma};

/// Default tolerance of the closed-form identity checks.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;
/// Default tolerance of [`check_resolvent_identity`].
pub const RESOLVENT_TOLERANCE: f64 = 1e-6;
/// Default tolerance of [`generator_limit_check`].
pub const GENERATOR_TOLERANCE: f64 = 1e-5;

/// A generator given by its eigenvalues on a fixed eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalGenerator {
    eigenvalues: Vec<f64>,
    descriptor: String,
}

impl DiagonalGenerator {
    pub fn new(eigenvalues: Vec<f64>, descriptor: impl Into<String>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidParameter("generator needs at least one eigenvalue".into()));
        }
        if eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter("eigenvalues must be finite".into()));
        }
        Ok(Self { eigenvalues, descriptor: descriptor.into() })
    }

    /// Dirichlet Laplacian on `(0, π)`: `λ_n = -n²`, eigenfunctions `sin nx`.
    pub fn dirichlet_laplacian(n_modes: usize) -> Result<Self> {
        let ev = (1..=n_modes).map(|n| -((n * n) as f64)).collect();
        Self::new(ev, "Dirichlet Laplacian on (0, pi), lambda_n = -n^2")
    }

    pub fn single(lambda: f64) -> Result<Self> {
        Self::new(vec![lambda], format!("single mode, lambda = {lambda}"))
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Spectral coefficients aligned with a generator's eigenvalues.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeCoeffs(pub Vec<f64>);

impl ModeCoeffs {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// `1` in mode `k` (zero based), `0` elsewhere.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self(self.0.iter().map(|v| a * v).collect())
    }
}

impl From<Vec<f64>> for ModeCoeffs {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// `t^{μ-1} E_{γ,μ}(λ t^γ)`; `t > 0`.
pub fn cosine_kernel(lambda: f64, order: FracOrder, t: f64) -> f64 {
    let (g, mu) = (order.gamma(), order.mu());
    t.powf(mu - 1.0) * ml(g, mu, lambda * t.powf(g))
}

/// `t^μ E_{γ,μ+1}(λ t^γ)`, zero at `t = 0`.
pub fn sine_kernel(lambda: f64, order: FracOrder, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let (g, mu) = (order.gamma(), order.mu());
    t.powf(mu) * ml(g, mu + 1.0, lambda * t.powf(g))
}

/// `t^{γ-1} E_{γ,γ}(λ t^γ)`; independent of the type `δ`.
pub fn p_kernel(lambda: f64, gamma: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    t.powf(gamma - 1.0) * ml(gamma, gamma, lambda * t.powf(gamma))
}

/// `E_{γ,1}(λ t^γ)`.
pub fn solution_kernel(lambda: f64, gamma: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    ml(gamma, 1.0, lambda * t.powf(gamma))
}

/// `J^γ c(t) = t^{γ+μ-1} E_{γ,γ+μ}(λ t^γ)`.
pub fn cosine_integral_kernel(lambda: f64, order: FracOrder, t: f64) -> f64 {
    let (g, mu) = (order.gamma(), order.mu());
    t.powf(g + mu - 1.0) * ml(g, g + mu, lambda * t.powf(g))
}

fn check_coeffs(gen: &DiagonalGenerator, g: &ModeCoeffs) -> Result<()> {
    if g.len() != gen.n_modes() {
        return Err(Error::LengthMismatch { expected: gen.n_modes(), actual: g.len() });
    }
    Ok(())
}

fn check_time(t: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero { t >= 0.0 } else { t > 0.0 };
    if !ok || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time must be {}, got {t}", if allow_zero { "non-negative" } else { "positive" })));
    }
    Ok(())
}

fn apply(gen: &DiagonalGenerator, g: &ModeCoeffs, m: impl Fn(f64) -> f64) -> ModeCoeffs {
    ModeCoeffs(gen.eigenvalues.iter().zip(&g.0).map(|(&l, &v)| if v == 0.0 { 0.0 } else { m(l) * v }).collect())
}

/// `C_{γ,δ}(t) g`.
pub fn cosine_apply(gen: &DiagonalGenerator, order: FracOrder, t: f64, g: &ModeCoeffs) -> Result<ModeCoeffs> {
    check_coeffs(gen, g)?;
    check_time(t, false)?;
    Ok(apply(gen, g, |l| cosine_kernel(l, order, t)))
}

/// `S_{γ,δ}(t) g`; `0` at `t = 0`.
pub fn sine_apply(gen: &DiagonalGenerator, order: FracOrder, t: f64, g: &ModeCoeffs) -> Result<ModeCoeffs> {
    check_coeffs(gen, g)?;
    check_time(t, true)?;
    Ok(apply(gen, g, |l| sine_kernel(l, order, t)))
}

/// `P_{γ,δ}(t) g`.
pub fn p_apply(gen: &DiagonalGenerator, order: FracOrder, t: f64, g: &ModeCoeffs) -> Result<ModeCoeffs> {
    check_coeffs(gen, g)?;
    check_time(t, false)?;
    Ok(apply(gen, g, |l| p_kernel(l, order.gamma(), t)))
}

/// `S_γ(t) g`; the identity at `t = 0`.
pub fn solution_operator_apply(
    gen: &DiagonalGenerator,
    order: FracOrder,
    t: f64,
    g: &ModeCoeffs,
) -> Result<ModeCoeffs> {
    check_coeffs(gen, g)?;
    check_time(t, true)?;
    if t == 0.0 {
        return Ok(g.clone());
    }
    Ok(apply(gen, g, |l| solution_kernel(l, order.gamma(), t)))
}

/// Both sides of the cosine functional equation
/// `c(s) J^γc(t) - J^γc(s) c(t) = g_μ(s) J^γc(t) - g_μ(t) J^γc(s)`
/// as `(lhs, rhs)`.
pub fn functional_equation_sides(lambda: f64, order: FracOrder, t: f64, s: f64) -> (f64, f64) {
    let mu = order.mu();
    let (ct, cs) = (cosine_kernel(lambda, order, t), cosine_kernel(lambda, order, s));
    let (jt, js) = (cosine_integral_kernel(lambda, order, t), cosine_integral_kernel(lambda, order, s));
    let (gt, gs) = (t.powf(mu - 1.0) * rgamma(mu), s.powf(mu - 1.0) * rgamma(mu));
    (cs * jt - js * ct, gs * jt - gt * js)
}

/// `|LHS - RHS|` of the cosine functional equation at `(t, s)`.
pub fn check_functional_equation(lambda: f64, order: FracOrder, t: f64, s: f64) -> Result<VerifyReport> {
    check_time(t, false)?;
    check_time(s, false)?;
    let (lhs, rhs) = functional_equation_sides(lambda, order, t, s);
    Ok(VerifyReport::new("functional_equation", (lhs - rhs).abs(), IDENTITY_TOLERANCE)
        .with("lambda", lambda)
        .with("gamma", order.gamma())
        .with("delta", order.delta())
        .with("t", t)
        .with("s", s)
        .with("lhs", lhs))
}

/// `c(t) = g_μ(t) + λ J^γ c(t)`, compared after multiplying by `t^{1-μ}`.
pub fn check_integral_identity(lambda: f64, order: FracOrder, t: f64) -> Result<VerifyReport> {
    check_time(t, false)?;
    let mu = order.mu();
    let w = t.powf(1.0 - mu);
    let lhs = w * cosine_kernel(lambda, order, t);
    let rhs = rgamma(mu) + lambda * w * cosine_integral_kernel(lambda, order, t);
    Ok(VerifyReport::new("integral_identity", (lhs - rhs).abs(), IDENTITY_TOLERANCE)
        .with("lambda", lambda)
        .with("gamma", order.gamma())
        .with("delta", order.delta())
        .with("t", t))
}

/// `S_γ(0) = I` and `S_γ(t) → I` as `t → 0+` on `g`.
pub fn check_solution_identity_at_zero(gen: &DiagonalGenerator, order: FracOrder, g: &ModeCoeffs) -> Result<VerifyReport> {
    let at0 = solution_operator_apply(gen, order, 0.0, g)?;
    let near = solution_operator_apply(gen, order, 1e-12, g)?;
    let residual = at0.0.iter().chain(&near.0).zip(g.0.iter().chain(&g.0)).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(VerifyReport::new("solution_operator_at_zero", residual, IDENTITY_TOLERANCE)
        .with("modes", gen.n_modes())
        .with("gamma", order.gamma())
        .with("delta", order.delta()))
}

/// Index-shift consistency of the sine, kernel and solution multipliers:
///
/// ```text
/// s(t) = g_{μ+1}(t) + λ t^{γ+μ}   E_{γ,γ+μ+1}(λ t^γ)
/// p(t) = g_γ(t)     + λ t^{2γ-1}  E_{γ,2γ}(λ t^γ)
/// e(t) = 1          + λ t^γ       E_{γ,γ+1}(λ t^γ)
/// ```
///
/// each scaled by the inverse of its leading power of `t`.
pub fn check_kernel_consistency(lambda: f64, order: FracOrder, t: f64) -> Result<VerifyReport> {
    check_time(t, false)?;
    let (g, mu) = (order.gamma(), order.mu());
    let z = lambda * t.powf(g);
    let sine = sine_kernel(lambda, order, t) / t.powf(mu) - rgamma(mu + 1.0) - z * ml(g, g + mu + 1.0, z);
    let p = p_kernel(lambda, g, t) / t.powf(g - 1.0) - rgamma(g) - z * ml(g, 2.0 * g, z);
    let e = solution_kernel(lambda, g, t) - 1.0 - z * ml(g, g + 1.0, z);
    let residual = sine.abs().max(p.abs()).max(e.abs());
    Ok(VerifyReport::new("kernel_consistency", residual, IDENTITY_TOLERANCE)
        .with("lambda", lambda)
        .with("gamma", g)
        .with("delta", order.delta())
        .with("t", t)
        .with("sine", sine.abs())
        .with("kernel", p.abs())
        .with("solution", e.abs()))
}

/// `sup_{x ≥ 0} (1+x) |E_{γ,β}(-x)|`, sampled on a logarithmic grid out to
/// `x = 10^6` (the asymptotic regime where `(1+x)|E|` has settled).
fn decay_constant(gamma: f64, beta: f64) -> f64 {
    let mut c = rgamma(beta).abs();
    for k in 0..=480 {
        let x = 10f64.powf(-6.0 + k as f64 * 12.0 / 480.0);
        c = c.max((1.0 + x) * ml(gamma, beta, -x).abs());
    }
    c
}

/// `∫_a^b e^{-st} t^{μ-1} E_{γ,μ}(λ t^γ) dt` for `0 ≤ a < b`, substituting
/// `t = u^{1/μ}` on `[0, 1]` to absorb the endpoint power.
fn laplace_cosine(lambda: f64, order: FracOrder, s: f64, t_max: f64) -> (f64, f64) {
    let (g, mu) = (order.gamma(), order.mu());
    let split = t_max.min(1.0);
    let head = integrate_best_effort(
        |u| {
            let t = u.powf(1.0 / mu);
            (-s * t).exp() * ml(g, mu, lambda * t.powf(g)) / mu
        },
        0.0,
        split.powf(mu),
        1e-13,
        1e-13,
    );
    let tail = integrate_best_effort(
        |t| (-s * t).exp() * t.powf(mu - 1.0) * ml(g, mu, lambda * t.powf(g)),
        split,
        t_max,
        1e-13,
        1e-13,
    );
    (head.value + tail.value, head.error_estimate + tail.error_estimate)
}

/// Upper bound on `∫_{t_max}^∞ e^{-st} t^{μ-1} |E_{γ,μ}(λ t^γ)| dt` for
/// `λ ≤ 0` from `|E_{γ,μ}(-x)| ≤ C/(1+x)`; `None` for `λ > 0`.
fn laplace_tail_bound(lambda: f64, order: FracOrder, s: f64, t_max: f64) -> Option<f64> {
    if lambda > 0.0 {
        return None;
    }
    let (g, mu) = (order.gamma(), order.mu());
    let c = if lambda == 0.0 { rgamma(mu) } else { decay_constant(g, mu) };
    // t^{μ-1} ≤ t_max^{μ-1} and 1/(1+|λ|t^γ) ≤ 1/(1+|λ|t_max^γ) beyond t_max
    Some(c * t_max.powf(mu - 1.0) * (-s * t_max).exp() / (s * (1.0 + lambda.abs() * t_max.powf(g))))
}

/// Compares `s^{δ(2-γ)-1} ∫_0^{t_max} e^{-st} c(t) dt` with `1/(s^γ - λ)`.
pub fn check_resolvent_identity(lambda: f64, order: FracOrder, s: f64, t_max: f64) -> Result<VerifyReport> {
    let g = order.gamma();
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("Laplace variable must be positive, got {s}")));
    }
    if s.powf(g) <= lambda {
        return Err(Error::InvalidParameter(format!("s^gamma = {} is not in the resolvent set (lambda = {lambda})", s.powf(g))));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_max must be positive, got {t_max}")));
    }
    let (integral, quad_err) = laplace_cosine(lambda, order, s, t_max);
    let value = s.powf(order.outer() - 1.0) * integral;
    let target = 1.0 / (s.powf(g) - lambda);
    let tail = laplace_tail_bound(lambda, order, s, t_max);
    Ok(VerifyReport::new("resolvent_identity", (value - target).abs(), RESOLVENT_TOLERANCE)
        .with("lambda", lambda)
        .with("gamma", g)
        .with("delta", order.delta())
        .with("s", s)
        .with("t_max", t_max)
        .with("target", target)
        .with("quadrature_error", quad_err)
        .with("tail_bound", tail.map_or_else(|| "not available for lambda > 0".to_string(), |b| format!("{b:e}"))))
}

/// Compares `∫_0^{t_max} e^{-st} E_{γ,1}(λ t^γ) dt` with `s^{γ-1}/(s^γ - λ)`.
pub fn check_solution_laplace(lambda: f64, gamma: f64, s: f64, t_max: f64) -> Result<VerifyReport> {
    if !(s > 0.0) || s.powf(gamma) <= lambda {
        return Err(Error::InvalidParameter(format!("s = {s} outside the resolvent set")));
    }
    let r = integrate_best_effort(|t| (-s * t).exp() * solution_kernel(lambda, gamma, t), 0.0, t_max, 1e-13, 1e-13);
    let target = s.powf(gamma - 1.0) / (s.powf(gamma) - lambda);
    Ok(VerifyReport::new("solution_laplace", (r.value - target).abs(), RESOLVENT_TOLERANCE)
        .with("lambda", lambda)
        .with("gamma", gamma)
        .with("s", s)
        .with("t_max", t_max)
        .with("quadrature_error", r.error_estimate))
}

/// `Γ(γ+μ) (c(t) - g_μ(t)) / t^{γ+μ-1}` at a single `t`.
pub fn generator_quotient(lambda: f64, order: FracOrder, t: f64) -> f64 {
    let (g, mu) = (order.gamma(), order.mu());
    if lambda == 0.0 {
        return 0.0;
    }
    // t^{μ-1} cancels against the denominator
    let diff = ml(g, mu, lambda * t.powf(g)) - rgamma(mu);
    gamma_fn(g + mu).expect("γ + μ > 1") * diff / t.powf(g)
}

const GENERATOR_LEVELS: usize = 6;

/// Recovers `λ` as `lim_{t→0+} Γ(γ+μ)(c(t) - g_μ(t))/t^{γ+μ-1}`.
///
/// The quotient is sampled at `t = 2^{-j}` starting where `|λ| t^γ ≤ 1/2`;
/// its error expands in powers of `t^γ`, which the Richardson table removes.
pub fn generator_limit_check(lambda: f64, order: FracOrder) -> Result<VerifyReport> {
    if !lambda.is_finite() {
        return Err(Error::InvalidParameter("lambda must be finite".into()));
    }
    let g = order.gamma();
    let j0 = if lambda == 0.0 { 1 } else { ((2.0 * lambda.abs()).log2() / g).ceil().max(1.0) as i32 };
    let samples: Vec<f64> =
        (0..GENERATOR_LEVELS).map(|k| generator_quotient(lambda, order, 2f64.powi(-(j0 + k as i32)))).collect();

    // table[k][i]: k-fold extrapolation from samples i..=i+k
    let mut column = samples.clone();
    let mut diagonal = vec![samples[0]];
    for k in 1..GENERATOR_LEVELS {
        let f = 2f64.powf(k as f64 * g);
        column = column.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
        diagonal.push(*column.last().expect("non-empty column"));
    }
    let corrections: Vec<f64> = diagonal.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let last = *corrections.last().expect("several levels");
    let noise = 1e-9 * lambda.abs().max(1.0);
    if last > noise && last > corrections[0] {
        return Err(Error::ExtrapolationDiverged(diagonal));
    }
    let limit = *diagonal.last().expect("several levels");
    Ok(VerifyReport::new("generator_limit", (limit - lambda).abs(), GENERATOR_TOLERANCE)
        .with("lambda", lambda)
        .with("gamma", g)
        .with("delta", order.delta())
        .with("limit", limit)
        .with("first_t", 2f64.powi(-j0)))
}

/// `sup Γ(μ) |E_{γ,μ}(λ t^γ)|` over the generator's modes and `t ∈ (0, T]`,
/// i.e. the smallest `M` with `|c(t)| ≤ M t^{μ-1}/Γ(μ)·Γ(μ)` on the samples.
///
/// Sampled at 400 geometrically spaced times down to `T·10^{-8}`; the `t → 0`
/// limit contributes `1`.
pub fn empirical_h1_constant(gen: &DiagonalGenerator, order: FracOrder, horizon: f64) -> Result<f64> {
    check_time(horizon, false)?;
    let (g, mu) = (order.gamma(), order.mu());
    let gm = gamma_fn(mu)?;
    let mut m = 1.0f64;
    for &l in gen.eigenvalues() {
        for k in 0..=400 {
            let t = horizon * 10f64.powf(-8.0 * k as f64 / 400.0);
            m = m.max(gm * ml(g, mu, l * t.powf(g)).abs());
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;
    use approx::assert_relative_eq;

    fn order(g: f64, d: f64) -> FracOrder {
        FracOrder::new(g, d).unwrap()
    }

    #[test]
    fn zero_eigenvalue_gives_power_kernels() {
        let gen = DiagonalGenerator::single(0.0).unwrap();
        let o = order(1.5, 0.5);
        let one = ModeCoeffs::new(vec![1.0]);
        let t = 0.6;
        let c = cosine_apply(&gen, o, t, &one).unwrap();
        assert_relative_eq!(c.0[0], t.powf(o.mu() - 1.0) * rgamma(o.mu()), max_relative = 1e-14);
        let s = sine_apply(&gen, o, t, &one).unwrap();
        assert_relative_eq!(s.0[0], t.powf(o.mu()) * rgamma(o.mu() + 1.0), max_relative = 1e-14);
        let p = p_apply(&gen, o, t, &one).unwrap();
        assert_relative_eq!(p.0[0], t.powf(0.5) * rgamma(1.5), max_relative = 1e-14);
        assert_eq!(solution_operator_apply(&gen, o, t, &one).unwrap(), one);
    }

    #[test]
    fn zero_coefficients_map_to_zero() {
        let gen = DiagonalGenerator::dirichlet_laplacian(5).unwrap();
        let z = ModeCoeffs::zeros(5);
        assert_eq!(cosine_apply(&gen, order(1.3, 0.2), 0.4, &z).unwrap(), z);
    }

    #[test]
    fn length_and_time_are_checked() {
        let gen = DiagonalGenerator::dirichlet_laplacian(3).unwrap();
        let o = order(1.5, 0.5);
        assert!(cosine_apply(&gen, o, 1.0, &ModeCoeffs::zeros(2)).is_err());
        assert!(cosine_apply(&gen, o, 0.0, &ModeCoeffs::zeros(3)).is_err());
        assert_eq!(sine_apply(&gen, o, 0.0, &ModeCoeffs::new(vec![1.0; 3])).unwrap(), ModeCoeffs::zeros(3));
        assert!(DiagonalGenerator::new(vec![], "").is_err());
        assert!(DiagonalGenerator::new(vec![f64::NAN], "").is_err());
    }

    #[test]
    fn sine_is_time_integral_of_cosine() {
        let o = order(1.3, 0.2);
        let (lambda, t): (f64, f64) = (-4.0, 0.8);
        let mu = o.mu();
        // t^{μ-1} endpoint handled by u = t^μ
        let r = integrate_adaptive(
            |u: f64| {
                let s = u.powf(1.0 / mu);
                ml(1.3, mu, lambda * s.powf(1.3)) / mu
            },
            0.0,
            t.powf(mu),
            1e-13,
            1e-13,
        )
        .unwrap();
        assert!((r.value - sine_kernel(lambda, o, t)).abs() < 1e-10);
    }

    #[test]
    fn p_kernel_ignores_delta() {
        let gen = DiagonalGenerator::dirichlet_laplacian(4).unwrap();
        let g = ModeCoeffs::new(vec![1.0, -2.0, 0.5, 3.0]);
        let a = p_apply(&gen, order(1.5, 0.2), 0.7, &g).unwrap();
        let b = p_apply(&gen, order(1.5, 0.9), 0.7, &g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn functional_equation_reference_point() {
        let o = order(1.5, 0.5);
        let r = check_functional_equation(-1.0, o, 0.7, 1.3).unwrap();
        assert!(r.residual <= 1e-10, "{r:?}");
        let (l1, r1) = functional_equation_sides(-1.0, o, 0.7, 1.3);
        let (l2, r2) = functional_equation_sides(-1.0, o, 1.3, 0.7);
        assert!((l1 + l2).abs() < 1e-12 && (r1 + r2).abs() < 1e-12);
        let zero = check_functional_equation(0.0, o, 0.7, 1.3).unwrap();
        assert!(zero.residual < 1e-15, "{zero:?}");
    }

    #[test]
    fn identities_hold_on_heat_modes() {
        for &(g, d) in &[(1.2, 0.0), (1.5, 0.5), (1.9, 1.0)] {
            let o = order(g, d);
            for n in [1.0, 3.0, 10.0] {
                for t in [0.05, 0.5, 2.0] {
                    let l = -n * n;
                    assert!(check_integral_identity(l, o, t).unwrap().pass);
                    assert!(check_kernel_consistency(l, o, t).unwrap().pass);
                }
            }
        }
    }

    #[test]
    fn solution_operator_is_identity_at_zero() {
        let gen = DiagonalGenerator::dirichlet_laplacian(8).unwrap();
        let g = ModeCoeffs::new((0..8).map(|k| k as f64 - 3.5).collect());
        let r = check_solution_identity_at_zero(&gen, order(1.5, 0.5), &g).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn resolvent_reference_point() {
        let r = check_resolvent_identity(-1.0, order(1.5, 0.5), 2.0, 60.0).unwrap();
        assert!(r.residual <= 1e-6, "{r:?}");
        assert_relative_eq!(r.context["target"].parse::<f64>().unwrap(), 0.261_203_874_96, max_relative = 1e-10);
        assert!(check_resolvent_identity(5.0, order(1.5, 0.5), 2.0, 60.0).is_err());
    }

    #[test]
    fn caputo_laplace_pair() {
        let r = check_solution_laplace(-1.0, 1.5, 2.0, 60.0).unwrap();
        assert!(r.residual <= 1e-8, "{r:?}");
    }

    #[test]
    fn generator_recovers_eigenvalue() {
        let o = order(1.5, 0.5);
        for &l in &[0.0, -1.0, -9.0] {
            let r = generator_limit_check(l, o).unwrap();
            assert!(r.residual <= if l == -9.0 { 1e-5 } else { 1e-6 }, "{r:?}");
        }
    }

    #[test]
    fn h1_constant_for_heat_spectrum() {
        let gen = DiagonalGenerator::dirichlet_laplacian(16).unwrap();
        let m = empirical_h1_constant(&gen, order(1.5, 0.5), 1.0).unwrap();
        assert!((1.0..=1.05).contains(&m), "{m}");
    }
}
