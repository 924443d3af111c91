//! Discrete Riemann–Liouville integrals and Hilfer derivatives on uniform
//! grids.
//!
//! Conventions: `g_σ(t) = t^{σ-1}/Γ(σ)`, `J^σ f = g_σ * f`, and for
//! `1 < γ < 2`, `0 ≤ δ ≤ 1`
//!
//! ```text
//! D^{γ,δ} = J^{δ(2-γ)} d²/dt² J^{(1-δ)(2-γ)}
//! μ = γ + δ(2-γ) - 1,   ρ = (1-δ)(2-γ),   μ + ρ = 1.
//! ```

mod derivative;
mod initial;
mod integral;

pub use derivative::{hilfer_derivative, hilfer_derivative_weighted, second_derivative};
pub use initial::weighted_initial_values;
pub use integral::{rl_integral, rl_integral_values, weighted_rl_integral};

use crate::error::{Error, Result};

/// Order `γ ∈ (1, 2)` and type `δ ∈ [0, 1]` of a Hilfer derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    gamma: f64,
    delta: f64,
}

impl FracOrder {
    pub fn new(gamma: f64, delta: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma < 2.0) {
            return Err(Error::InvalidParameter(format!("order gamma must lie in (1, 2), got {gamma}")));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("type delta must lie in [0, 1], got {delta}")));
        }
        Ok(Self { gamma, delta })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `μ = γ + δ(2-γ) - 1`, the exponent of the cosine kernel `t^{μ-1}`.
    pub fn mu(&self) -> f64 {
        self.gamma + self.delta * (2.0 - self.gamma) - 1.0
    }

    /// `ρ = (1-δ)(2-γ)`, the weight exponent of the space `Y`.
    pub fn rho(&self) -> f64 {
        (1.0 - self.delta) * (2.0 - self.gamma)
    }

    /// `δ(2-γ)`, the order of the outer integral in `D^{γ,δ}`.
    pub fn outer(&self) -> f64 {
        self.delta * (2.0 - self.gamma)
    }
}

/// Uniform grid `t_j = j T / n` on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    horizon: f64,
    n_steps: usize,
}

impl Grid {
    pub fn new(horizon: f64, n_steps: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
        }
        if n_steps == 0 {
            return Err(Error::InvalidParameter("grid needs at least one step".into()));
        }
        Ok(Self { horizon, n_steps })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `t_j`, exact at both ends.
    pub fn node(&self, j: usize) -> f64 {
        if j == self.n_steps {
            self.horizon
        } else {
            j as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|j| self.node(j)).collect()
    }

    /// Same horizon, twice the steps.
    pub fn refined(&self) -> Self {
        Self { horizon: self.horizon, n_steps: 2 * self.n_steps }
    }

    /// Index of the first node with `t_j ≥ fraction · T`.
    pub fn first_index_at(&self, fraction: f64) -> usize {
        ((fraction * self.n_steps as f64).ceil() as usize).min(self.n_steps)
    }
}

/// Values of a (vector-valued) function at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    grid: Grid,
    values: Vec<Vec<f64>>,
}

impl SampledPath {
    /// `values[j]` is the state at `t_j`.
    pub fn new(grid: Grid, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), actual: values.len() });
        }
        let dim = values[0].len();
        for v in &values {
            if v.len() != dim {
                return Err(Error::LengthMismatch { expected: dim, actual: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter("sampled path contains a non-finite value".into()));
            }
        }
        Ok(Self { grid, values })
    }

    pub fn scalar(grid: Grid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values.into_iter().map(|v| vec![v]).collect())
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::scalar(grid, grid.nodes().into_iter().map(f).collect())
    }

    /// Build from per-component series (`components[i][j]` at `t_j`).
    pub fn from_components(grid: Grid, components: &[Vec<f64>]) -> Result<Self> {
        let values = (0..grid.len())
            .map(|j| components.iter().map(|c| c.get(j).copied().unwrap_or(f64::NAN)).collect())
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn at(&self, j: usize) -> &[f64] {
        &self.values[j]
    }

    pub fn component(&self, i: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[i]).collect()
    }

    pub fn components(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| self.component(i)).collect()
    }

    /// First component as a plain series (scalar paths).
    pub fn scalar_values(&self) -> Vec<f64> {
        self.component(0)
    }
}

/// A path in the weighted representation `y(t) = t^ρ ω(t)`.
///
/// `y_values[0]` holds the finite limit `y(0+)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPath {
    grid: Grid,
    rho: f64,
    y_values: Vec<Vec<f64>>,
}

impl WeightedPath {
    pub fn new(grid: Grid, rho: f64, y_values: Vec<Vec<f64>>) -> Result<Self> {
        // reuse the shape checks
        let checked = SampledPath::new(grid, y_values)?;
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!("weight exponent must lie in [0, 1), got {rho}")));
        }
        Ok(Self { grid, rho, y_values: checked.values })
    }

    pub fn scalar(grid: Grid, rho: f64, y: Vec<f64>) -> Result<Self> {
        Self::new(grid, rho, y.into_iter().map(|v| vec![v]).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn dim(&self) -> usize {
        self.y_values[0].len()
    }

    pub fn y_values(&self) -> &[Vec<f64>] {
        &self.y_values
    }

    pub fn y_component(&self, i: usize) -> Vec<f64> {
        self.y_values.iter().map(|v| v[i]).collect()
    }

    /// `ω(t_j) = t_j^{-ρ} y(t_j)`; `None` at `j = 0` when `ρ > 0`.
    pub fn omega(&self, j: usize) -> Option<Vec<f64>> {
        if j == 0 && self.rho > 0.0 {
            return None;
        }
        let w = if j == 0 { 1.0 } else { self.grid.node(j).powf(-self.rho) };
        Some(self.y_values[j].iter().map(|y| w * y).collect())
    }

    /// Component `i` of `ω` at every node; entry 0 is `NaN` when singular.
    pub fn omega_component(&self, i: usize) -> Vec<f64> {
        (0..self.grid.len()).map(|j| self.omega(j).map_or(f64::NAN, |w| w[i])).collect()
    }

    /// Largest `|y|` over nodes and components: the discrete `‖·‖_Y` norm.
    pub fn sup_norm(&self) -> f64 {
        self.y_values.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}
