//! Mild solutions of the semilinear problem
//!
//! ```text
//! D^{γ,δ} ω = A ω + η(t, ω),   (g_ρ * ω)(0) = ω₁,   (g_ρ * ω)'(0) = ω₂
//! ω(t) = C(t) ω₁ + S(t) ω₂ + ∫_0^t P(t-s) η(s, ω(s)) ds
//! ```
//!
//! for a diagonal generator `A`, by Picard iteration on `y(t) = t^ρ ω(t)`.

use std::fmt;
use std::sync::Arc;

use crate::convolution::ProductRule;
use crate::error::{Error, Result};
use crate::fractional::{hilfer_derivative_weighted, FracOrder, Grid, WeightedPath};
use crate::operators::{DiagonalGenerator, ModeCoeffs};
use crate::report::VerifyReport;
use crate::special::{gamma_fn, ml, rgamma};

/// Nonlinearity `η(t, ω)` acting on mode coefficients.
///
/// Called from several threads at once (distinct times), so it must be
/// `Send + Sync`.
pub type Nonlinearity = Arc<dyn Fn(f64, &ModeCoeffs) -> ModeCoeffs + Send + Sync>;

/// Problem data; `eta = None` means `η ≡ 0`.
#[derive(Clone)]
pub struct SemilinearProblem {
    pub generator: DiagonalGenerator,
    pub order: FracOrder,
    pub omega1: ModeCoeffs,
    pub omega2: ModeCoeffs,
    pub horizon: f64,
    eta: Option<Nonlinearity>,
    hypothesis: Option<HypothesisData>,
}

impl fmt::Debug for SemilinearProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemilinearProblem")
            .field("generator", &self.generator)
            .field("order", &self.order)
            .field("omega1", &self.omega1)
            .field("omega2", &self.omega2)
            .field("horizon", &self.horizon)
            .field("eta", &self.eta.as_ref().map(|_| "<fn>"))
            .field("hypothesis", &self.hypothesis)
            .finish()
    }
}

impl SemilinearProblem {
    pub fn new(
        generator: DiagonalGenerator,
        order: FracOrder,
        omega1: ModeCoeffs,
        omega2: ModeCoeffs,
        horizon: f64,
    ) -> Result<Self> {
        let n = generator.n_modes();
        for w in [&omega1, &omega2] {
            if w.len() != n {
                return Err(Error::LengthMismatch { expected: n, actual: w.len() });
            }
            if w.0.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter("initial data must be finite".into()));
            }
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
        }
        Ok(Self { generator, order, omega1, omega2, horizon, eta: None, hypothesis: None })
    }

    pub fn with_nonlinearity(mut self, eta: impl Fn(f64, &ModeCoeffs) -> ModeCoeffs + Send + Sync + 'static) -> Self {
        self.eta = Some(Arc::new(eta));
        self
    }

    /// Hypothesis constants; when present the solve report carries the
    /// contraction margin.
    pub fn with_hypothesis(mut self, h: HypothesisData) -> Self {
        self.hypothesis = Some(h);
        self
    }

    pub fn nonlinearity(&self) -> Option<&Nonlinearity> {
        self.eta.as_ref()
    }

    pub fn hypothesis(&self) -> Option<&HypothesisData> {
        self.hypothesis.as_ref()
    }

    fn eval_eta(&self, t: f64, omega: &ModeCoeffs) -> Result<ModeCoeffs> {
        let n = self.generator.n_modes();
        match &self.eta {
            None => Ok(ModeCoeffs::zeros(n)),
            Some(f) => {
                let v = f(t, omega);
                if v.len() != n {
                    return Err(Error::LengthMismatch { expected: n, actual: v.len() });
                }
                Ok(v)
            }
        }
    }
}

/// Discretization and stopping parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub n_steps: usize,
    /// Stop when the sup-norm change of the weighted iterate is at most this.
    pub tol: f64,
    pub max_iter: usize,
    /// Residual windows start at `trim_fraction · T`.
    pub trim_fraction: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { n_steps: 256, tol: 1e-10, max_iter: 60, trim_fraction: 0.125 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 16 {
            return Err(Error::GridTooCoarse { required: 16, actual: self.n_steps });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        if !(0.0..=0.25).contains(&self.trim_fraction) {
            return Err(Error::InvalidParameter(format!("trim fraction must lie in [0, 1/4], got {}", self.trim_fraction)));
        }
        Ok(())
    }
}

/// Constants of the growth and Lipschitz hypotheses.
///
/// `m_const` bounds the cosine family relative to the pure power kernel,
/// `‖C(t)‖ ≤ M t^{μ-1}/Γ(μ)`, so `M = 1` for `A = 0`; `k` is the Lipschitz
/// constant of `η` with respect to `‖·‖_Y`; `m_l1` is the `L¹` norm of the
/// majorant `‖η(t, x)‖ ≤ m(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisData {
    pub m_const: f64,
    pub k: f64,
    pub m_l1: f64,
}

impl HypothesisData {
    pub fn new(m_const: f64, k: f64, m_l1: f64) -> Result<Self> {
        if !(m_const > 0.0 && m_const.is_finite()) || !(k >= 0.0 && k.is_finite()) || !(m_l1 >= 0.0 && m_l1.is_finite()) {
            return Err(Error::InvalidParameter(format!("invalid hypothesis constants M={m_const}, k={k}, m_L1={m_l1}")));
        }
        Ok(Self { m_const, k, m_l1 })
    }
}

/// `q = (M/Γ(γ)) T^{2-δ(2-γ)} k`; `q < 1` certifies a unique mild solution.
pub fn contraction_margin(h: &HypothesisData, order: FracOrder, horizon: f64) -> f64 {
    h.m_const * rgamma(order.gamma()) * horizon.powf(2.0 - order.outer()) * h.k
}

/// `r = M‖ω₁‖ + M/μ ‖ω₂‖ + M Γ(μ) T^{1-δ(2-γ)} / Γ(γ) ‖m‖_{L¹}`.
pub fn h5_radius(h: &HypothesisData, order: FracOrder, horizon: f64, norm_w1: f64, norm_w2: f64) -> f64 {
    let mu = order.mu();
    let gm = gamma_fn(mu).expect("μ > 0");
    h.m_const * norm_w1
        + h.m_const / mu * norm_w2
        + h.m_const * gm * horizon.powf(1.0 - order.outer()) * rgamma(order.gamma()) * h.m_l1
}

/// `lim_{t→0+} t^ρ ω(t) = ω₁/Γ(μ)`; the convolution term contributes `0`.
pub fn picard_limit_start(p: &SemilinearProblem) -> ModeCoeffs {
    p.omega1.scaled(rgamma(p.order.mu()))
}

/// Outcome of a Picard run.
#[derive(Debug, Clone, PartialEq)]
pub struct MildReport {
    pub iterations: usize,
    /// `deltas[j]`: sup-norm change made by sweep `j + 1`.
    pub deltas: Vec<f64>,
    /// Present when the problem carries hypothesis constants.
    pub contraction_margin: Option<f64>,
}

impl MildReport {
    /// `deltas[j+1] / deltas[j]`.
    pub fn delta_ratios(&self) -> Vec<f64> {
        self.deltas.windows(2).map(|w| if w[0] == 0.0 { 0.0 } else { w[1] / w[0] }).collect()
    }

    /// `false` when `q ≥ 1` or no constants were supplied: the run is then
    /// best-effort, without a uniqueness certificate.
    pub fn contraction_certified(&self) -> bool {
        matches!(self.contraction_margin, Some(q) if q < 1.0)
    }
}

/// The Picard map on a fixed grid, with its product-integration weights.
pub struct MildSolver<'a> {
    problem: &'a SemilinearProblem,
    config: SolverConfig,
    grid: Grid,
    rules: Vec<ProductRule>,
    homogeneous: Vec<Vec<f64>>,
}

impl<'a> MildSolver<'a> {
    pub fn new(problem: &'a SemilinearProblem, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let grid = Grid::new(problem.horizon, config.n_steps)?;
        let order = problem.order;
        let (g, mu, rho) = (order.gamma(), order.mu(), order.rho());
        let ev = problem.generator.eigenvalues();
        let rules = if problem.eta.is_some() {
            build_rules(&grid, g, rho, ev)?
        } else {
            Vec::new()
        };
        let homogeneous = grid
            .nodes()
            .iter()
            .map(|&t| {
                ev.iter()
                    .zip(problem.omega1.as_slice().iter().zip(problem.omega2.as_slice()))
                    .map(|(&l, (&w1, &w2))| {
                        let z = l * t.powf(g);
                        let mut v = 0.0;
                        if w1 != 0.0 {
                            v += w1 * ml(g, mu, z);
                        }
                        if w2 != 0.0 {
                            v += w2 * t * ml(g, mu + 1.0, z);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        Ok(Self { problem, config, grid, rules, homogeneous })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `y(t_j) = t_j^ρ (C(t_j) ω₁ + S(t_j) ω₂)`, the image of the zero path.
    pub fn homogeneous(&self) -> Result<WeightedPath> {
        WeightedPath::new(self.grid, self.problem.order.rho(), self.homogeneous.clone())
    }

    /// One application of the Picard map to a weighted path on the solver grid.
    pub fn map(&self, y: &WeightedPath) -> Result<WeightedPath> {
        if *y.grid() != self.grid || y.dim() != self.problem.generator.n_modes() {
            return Err(Error::InvalidParameter("iterate must live on the solver grid with one entry per mode".into()));
        }
        if self.problem.eta.is_none() {
            return self.homogeneous();
        }
        let rho = self.problem.order.rho();
        let n = self.grid.n_steps();
        let nodes = self.grid.nodes();
        let yv = y.y_values();

        // s^ρ η(s, s^{-ρ} y(s)) at the nodes (entry 0 unused) ...
        let mut node_g = vec![Vec::new(); n + 1];
        node_g[0] = vec![0.0; y.dim()];
        let g_at = |s: f64, ys: &[f64]| -> Result<Vec<f64>> {
            let w = s.powf(-rho);
            let omega = ModeCoeffs(ys.iter().map(|v| w * v).collect());
            Ok(self.problem.eval_eta(s, &omega)?.0.into_iter().map(|v| v / w).collect())
        };
        let computed = parallel_map(1..=n, |j| g_at(nodes[j], &yv[j]))?;
        for (j, v) in (1..=n).zip(computed) {
            node_g[j] = v;
        }
        // ... and at the first-cell points, with y linear between t_0 and t_1
        let fracs = self.rules[0].first_cell_fractions();
        let h = self.grid.step();
        let first_g: Vec<Vec<f64>> = fracs
            .iter()
            .map(|&u| {
                let ys: Vec<f64> = yv[0].iter().zip(&yv[1]).map(|(a, b)| a + (b - a) * u).collect();
                g_at(h * u, &ys)
            })
            .collect::<Result<_>>()?;

        let modes = y.dim();
        let conv = parallel_map(0..modes, |m| {
            let first: Vec<f64> = first_g.iter().map(|v| v[m]).collect();
            let nd: Vec<f64> = node_g.iter().map(|v| v[m]).collect();
            Ok(self.rules[m].apply(&first, &nd))
        })?;
        let values = (0..=n)
            .map(|j| {
                let w = if j == 0 { 0.0 } else { nodes[j].powf(rho) };
                (0..modes).map(|m| self.homogeneous[j][m] + w * conv[m][j]).collect()
            })
            .collect();
        WeightedPath::new(self.grid, rho, values)
    }

    /// Picard iteration from the homogeneous image.
    pub fn solve(&self) -> Result<(WeightedPath, MildReport)> {
        let margin = self.problem.hypothesis.map(|h| contraction_margin(&h, self.problem.order, self.problem.horizon));
        let mut current = self.homogeneous()?;
        let mut deltas = Vec::new();
        for it in 1..=self.config.max_iter {
            let next = self.map(&current)?;
            let delta = sup_distance(&next, &current);
            deltas.push(delta);
            current = next;
            if !delta.is_finite() {
                break;
            }
            if delta <= self.config.tol {
                return Ok((current, MildReport { iterations: it, deltas, contraction_margin: margin }));
            }
        }
        Err(Error::NoConvergence {
            iterations: deltas.len(),
            last_delta: *deltas.last().unwrap_or(&f64::NAN),
            deltas,
        })
    }
}

fn build_rules(grid: &Grid, gamma: f64, rho: f64, eigenvalues: &[f64]) -> Result<Vec<ProductRule>> {
    parallel_map(0..eigenvalues.len(), |m| {
        let l = eigenvalues[m];
        ProductRule::new(grid, rho, gamma - 1.0, move |r| ml(gamma, gamma, l * r.powf(gamma)), grid.n_steps())
    })
}

/// Maps `f` over `range` on scoped threads; results keep the input order.
fn parallel_map<T: Send>(range: impl IntoIterator<Item = usize>, f: impl Fn(usize) -> Result<T> + Sync) -> Result<Vec<T>> {
    let items: Vec<usize> = range.into_iter().collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    if workers <= 1 || items.len() < 4 {
        return items.into_iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let f = &f;
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| scope.spawn(move || c.iter().map(|&i| f(i)).collect::<Result<Vec<T>>>()))
            .collect();
        let mut out = Vec::with_capacity(items.len());
        for h in handles {
            out.extend(h.join().expect("worker panicked")?);
        }
        Ok(out)
    })
}

fn sup_distance(a: &WeightedPath, b: &WeightedPath) -> f64 {
    let mut d = 0.0f64;
    for (u, v) in a.y_values().iter().zip(b.y_values()) {
        for (x, y) in u.iter().zip(v) {
            let e = (x - y).abs();
            if e.is_nan() {
                return f64::NAN;
            }
            d = d.max(e);
        }
    }
    d
}

/// Solves the problem by Picard iteration; see [`MildSolver`].
pub fn solve_mild(p: &SemilinearProblem, cfg: SolverConfig) -> Result<(WeightedPath, MildReport)> {
    MildSolver::new(p, cfg)?.solve()
}

/// Max over modes and the interior of `[trim·T, T]` of
/// `|D^{γ,δ}ω_n - λ_n ω_n - η_n(t, ω)|`.
///
/// The weighted initial values of the mild solution are `(ω₁, ω₂)`; their
/// initial-layer terms are removed analytically before differencing.
pub fn verify_mild_residual(p: &SemilinearProblem, sol: &WeightedPath, cfg: SolverConfig, tol: f64) -> Result<VerifyReport> {
    cfg.validate()?;
    let grid = *sol.grid();
    if grid.n_steps() != cfg.n_steps || (grid.horizon() - p.horizon).abs() > 0.0 {
        return Err(Error::InvalidParameter("solution grid does not match the configuration".into()));
    }
    let d = hilfer_derivative_weighted(sol, p.order, p.omega1.as_slice(), p.omega2.as_slice())?;
    let ev = p.generator.eigenvalues();
    let start = grid.first_index_at(cfg.trim_fraction).max(1);
    let mut worst = 0.0f64;
    for j in start..grid.n_steps() {
        let t = grid.node(j);
        let omega = ModeCoeffs(sol.omega(j).expect("j ≥ 1"));
        let eta = p.eval_eta(t, &omega)?;
        for m in 0..ev.len() {
            let r = d.at(j)[m] - ev[m] * omega.0[m] - eta.0[m];
            if r.is_nan() {
                worst = f64::NAN;
            } else if !worst.is_nan() {
                worst = worst.max(r.abs());
            }
        }
    }
    Ok(VerifyReport::new("mild_residual", worst, tol)
        .with("gamma", p.order.gamma())
        .with("delta", p.order.delta())
        .with("modes", ev.len())
        .with("n_steps", grid.n_steps())
        .with("window_start", cfg.trim_fraction * grid.horizon()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{cosine_apply, sine_apply};
    use crate::scalar::{solve_linear_scalar, ScalarLinearProblem};
    use approx::assert_relative_eq;

    fn order(g: f64, d: f64) -> FracOrder {
        FracOrder::new(g, d).unwrap()
    }

    #[test]
    fn margin_and_radius_formulas() {
        let o = order(1.5, 0.5);
        let h = HypothesisData::new(1.0, 0.5, 0.0).unwrap();
        assert_relative_eq!(contraction_margin(&h, o, 1.0), 0.564_189_583_547_756_3, max_relative = 1e-14);
        let zero = HypothesisData::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(contraction_margin(&zero, o, 3.0), 0.0);
        assert_relative_eq!(h5_radius(&h, o, 1.0, 1.0, 0.0), 1.0, max_relative = 1e-15);
        assert_eq!(h5_radius(&zero, o, 1.0, 0.0, 0.0), 0.0);
        let t_star = (gamma_fn(1.5).unwrap() / 0.5).powf(1.0 / 1.75);
        assert_relative_eq!(contraction_margin(&h, o, t_star), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn limit_start_scales_by_gamma() {
        let gen = DiagonalGenerator::dirichlet_laplacian(3).unwrap();
        let p = SemilinearProblem::new(gen, order(1.5, 0.5), ModeCoeffs::unit(3, 0), ModeCoeffs::zeros(3), 1.0).unwrap();
        let s = picard_limit_start(&p);
        // μ = 1.5 + 0.5·0.5 - 1 = 0.75
        assert_relative_eq!(s.0[0], 1.0 / gamma_fn(0.75).unwrap(), max_relative = 1e-15);
        assert_eq!(&s.0[1..], &[0.0, 0.0]);
    }

    #[test]
    fn config_is_validated() {
        let bad = SolverConfig { n_steps: 8, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!(SolverConfig { trim_fraction: 0.3, ..Default::default() }.validate().is_err());
        assert!(SolverConfig::default().validate().is_ok());
    }

    #[test]
    fn homogeneous_run_matches_operator_families() {
        let gen = DiagonalGenerator::dirichlet_laplacian(4).unwrap();
        let o = order(1.5, 0.5);
        let w1 = ModeCoeffs::new(vec![1.0, 0.5, -0.25, 0.0]);
        let w2 = ModeCoeffs::new(vec![0.0, 1.0, 0.0, 2.0]);
        let p = SemilinearProblem::new(gen.clone(), o, w1.clone(), w2.clone(), 1.0).unwrap();
        let cfg = SolverConfig { n_steps: 32, ..Default::default() };
        let (sol, rep) = solve_mild(&p, cfg).unwrap();
        assert_eq!(rep.iterations, 1);
        for j in 1..=32 {
            let t = sol.grid().node(j);
            let c = cosine_apply(&gen, o, t, &w1).unwrap();
            let s = sine_apply(&gen, o, t, &w2).unwrap();
            let w = sol.omega(j).unwrap();
            for m in 0..4 {
                assert!((w[m] - c.0[m] - s.0[m]).abs() <= 1e-12 * (1.0 + w[m].abs()));
            }
        }
    }

    #[test]
    fn linear_single_mode_matches_scalar_solution() {
        let o = order(1.5, 0.5);
        let c = -0.7;
        let gen = DiagonalGenerator::single(0.0).unwrap();
        let p = SemilinearProblem::new(gen, o, ModeCoeffs::new(vec![1.0]), ModeCoeffs::new(vec![0.5]), 1.0)
            .unwrap()
            .with_nonlinearity(move |_, w| w.scaled(c));
        let cfg = SolverConfig { n_steps: 256, ..Default::default() };
        let (sol, _) = solve_mild(&p, cfg).unwrap();
        let grid = Grid::new(1.0, 256).unwrap();
        let exact = solve_linear_scalar(&ScalarLinearProblem::new(o, grid, c, 1.0, 0.5).unwrap()).unwrap();
        let err = sol.y_component(0).iter().zip(exact.y_component(0)).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn non_convergence_carries_history() {
        let gen = DiagonalGenerator::single(0.0).unwrap();
        let p = SemilinearProblem::new(gen, order(1.5, 0.5), ModeCoeffs::new(vec![1.0]), ModeCoeffs::zeros(1), 1.0)
            .unwrap()
            .with_nonlinearity(|_, w| w.scaled(-2.0));
        let cfg = SolverConfig { n_steps: 16, max_iter: 2, tol: 1e-14, ..Default::default() };
        match solve_mild(&p, cfg) {
            Err(Error::NoConvergence { iterations, deltas, .. }) => {
                assert_eq!(iterations, 2);
                assert_eq!(deltas.len(), 2);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn homogeneous_residual_is_tiny_for_pure_power() {
        let gen = DiagonalGenerator::single(0.0).unwrap();
        let p = SemilinearProblem::new(gen, order(1.5, 0.5), ModeCoeffs::new(vec![1.0]), ModeCoeffs::zeros(1), 1.0)
            .unwrap();
        let cfg = SolverConfig::default();
        let (sol, _) = solve_mild(&p, cfg).unwrap();
        let r = verify_mild_residual(&p, &sol, cfg, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
