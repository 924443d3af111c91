//! The Dirichlet heat-type problem on `(0, π)`
//!
//! ```text
//! D^{γ,δ} ω = ω_xx + η(t, ω),   ω(0, t) = ω(π, t) = 0
//! ```
//!
//! solved mode-wise in the sine basis, with `η(t, ω) = t sin ω` applied
//! pointwise at the collocation nodes.

use std::f64::consts::PI;
use std::sync::Arc;

use hilfer_core::mild::{
    contraction_margin, h5_radius, solve_mild, verify_mild_residual, HypothesisData, MildReport, SemilinearProblem,
    SolverConfig,
};
use hilfer_core::operators::empirical_h1_constant;
use hilfer_core::{DiagonalGenerator, FracOrder, ModeCoeffs, Result, VerifyReport, WeightedPath};

use crate::sine::SineTransformPlan;

/// Tolerance of the mild residual reported by a heat run.
pub const HEAT_RESIDUAL_TOLERANCE: f64 = 5e-2;

/// Slack allowed between observed Picard delta ratios and the contraction margin.
pub const DELTA_RATIO_SLACK: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eta {
    None,
    TSin,
}

#[derive(Debug, Clone)]
pub struct HeatSetup {
    pub order: FracOrder,
    pub horizon: f64,
    pub n_steps: usize,
    /// Physical samples of `ω₁` and `ω₂` at the collocation nodes.
    pub ic1: Vec<f64>,
    pub ic2: Vec<f64>,
    pub eta: Eta,
}

impl HeatSetup {
    /// `ω₁ = x(π - x)`, `ω₂ = sin x` on `n_modes` collocation nodes.
    pub fn with_default_data(order: FracOrder, n_modes: usize, horizon: f64, n_steps: usize, eta: Eta) -> Result<Self> {
        let plan = SineTransformPlan::new(n_modes)?;
        Ok(Self {
            order,
            horizon,
            n_steps,
            ic1: default_ic1(plan.nodes()),
            ic2: default_ic2(plan.nodes()),
            eta,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.ic1.len()
    }

    pub fn config(&self) -> SolverConfig {
        SolverConfig { n_steps: self.n_steps, ..SolverConfig::default() }
    }
}

pub fn default_ic1(nodes: &[f64]) -> Vec<f64> {
    nodes.iter().map(|x| x * (PI - x)).collect()
}

pub fn default_ic2(nodes: &[f64]) -> Vec<f64> {
    nodes.iter().map(|x| x.sin()).collect()
}

/// Hypothesis constants for `η = t sin ω` in the physical sup norm:
/// `|t sin u - t sin v| ≤ t^{1-ρ} · t^ρ |u - v|` gives `k = T^{1-ρ}`, and
/// `|t sin u| ≤ t` gives `‖m‖_{L¹} = T²/2`.
pub fn tsin_hypothesis(gen: &DiagonalGenerator, order: FracOrder, horizon: f64) -> Result<HypothesisData> {
    let m = empirical_h1_constant(gen, order, horizon)?;
    HypothesisData::new(m, horizon.powf(1.0 - order.rho()), 0.5 * horizon * horizon)
}

pub fn heat_problem(setup: &HeatSetup, plan: &Arc<SineTransformPlan>) -> Result<SemilinearProblem> {
    let gen = DiagonalGenerator::dirichlet_laplacian(setup.n_modes())?;
    let w1 = plan.forward(&setup.ic1)?;
    let w2 = plan.forward(&setup.ic2)?;
    let problem = SemilinearProblem::new(gen.clone(), setup.order, w1, w2, setup.horizon)?;
    Ok(match setup.eta {
        Eta::None => problem,
        Eta::TSin => {
            let h = tsin_hypothesis(&gen, setup.order, setup.horizon)?;
            let plan = Arc::clone(plan);
            problem
                .with_nonlinearity(move |t, w| {
                    let phys = plan.inverse(w).expect("mode count fixed by the plan");
                    let f: Vec<f64> = phys.iter().map(|v| t * v.sin()).collect();
                    plan.forward(&f).expect("mode count fixed by the plan")
                })
                .with_hypothesis(h)
        }
    })
}

/// A finished heat run with its diagnostics.
#[derive(Debug, Clone)]
pub struct HeatRun {
    pub plan: Arc<SineTransformPlan>,
    pub problem: SemilinearProblem,
    pub solution: WeightedPath,
    pub report: MildReport,
    pub h5_radius: Option<f64>,
    pub checks: Vec<VerifyReport>,
}

pub fn run_heat(setup: &HeatSetup) -> Result<HeatRun> {
    let plan = Arc::new(SineTransformPlan::new(setup.n_modes())?);
    let problem = heat_problem(setup, &plan)?;
    let cfg = setup.config();
    let (solution, report) = solve_mild(&problem, cfg)?;
    let mut checks = vec![verify_mild_residual(&problem, &solution, cfg, HEAT_RESIDUAL_TOLERANCE)?];
    let mut radius = None;
    if let Some(h) = problem.hypothesis() {
        let q = contraction_margin(h, setup.order, setup.horizon);
        let worst = report.delta_ratios().into_iter().fold(0.0, f64::max);
        checks.push(
            VerifyReport::new("picard_delta_ratio", worst, q + DELTA_RATIO_SLACK)
                .with("contraction_margin", q)
                .with("certificate", if q < 1.0 { "contraction" } else { "no contraction certificate" }),
        );
        let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        radius = Some(h5_radius(h, setup.order, setup.horizon, sup(&setup.ic1), sup(&setup.ic2)));
    }
    Ok(HeatRun { plan, problem, solution, report, h5_radius: radius, checks })
}

impl HeatRun {
    /// `(t_j, ω(t_j, x_1..x_M))`; the node `t = 0` is skipped when `ω` is
    /// singular there.
    pub fn snapshots(&self) -> Result<Vec<(f64, Vec<f64>)>> {
        let grid = self.solution.grid();
        let first = if self.solution.rho() > 0.0 { 1 } else { 0 };
        (first..grid.len())
            .map(|j| {
                let w = self.solution.omega(j).expect("regular node");
                Ok((grid.node(j), self.plan.inverse(&ModeCoeffs(w))?))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hilfer_core::operators::{cosine_kernel, sine_kernel};

    #[test]
    fn disabled_eta_is_the_homogeneous_formula() {
        let order = FracOrder::new(1.5, 0.5).unwrap();
        let setup = HeatSetup::with_default_data(order, 8, 1.0, 32, Eta::None).unwrap();
        let run = run_heat(&setup).unwrap();
        let plan = &run.plan;
        let w1 = plan.forward(&setup.ic1).unwrap();
        let w2 = plan.forward(&setup.ic2).unwrap();
        for (t, phys) in run.snapshots().unwrap() {
            let modes: Vec<f64> = (0..8)
                .map(|n| {
                    let l = -((n + 1) as f64).powi(2);
                    cosine_kernel(l, order, t) * w1.0[n] + sine_kernel(l, order, t) * w2.0[n]
                })
                .collect();
            let want = plan.inverse(&ModeCoeffs(modes)).unwrap();
            for (a, b) in phys.iter().zip(&want) {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "t = {t}: {a} vs {b}");
            }
        }
        assert!(run.h5_radius.is_none());
    }

    #[test]
    fn tsin_constants() {
        let order = FracOrder::new(1.5, 0.5).unwrap();
        let gen = DiagonalGenerator::dirichlet_laplacian(16).unwrap();
        let h = tsin_hypothesis(&gen, order, 1.0).unwrap();
        assert!(h.m_const >= 1.0 && h.m_const <= 1.05, "M = {}", h.m_const);
        assert_eq!(h.k, 1.0);
        assert_eq!(h.m_l1, 0.5);
    }
}
