//! Product integration for weakly singular Volterra convolutions.
//!
//! [`ProductRule`] approximates
//!
//! ```text
//! I(t_n) = ∫_0^{t_n} (t_n - s)^a κ(t_n - s) s^{-ρ} G(s) ds
//! ```
//!
//! on a uniform grid, where `κ` is smooth and `G` is continuous. Both power
//! factors are carried by Gauss–Jacobi weights on the cells where they are
//! singular; elsewhere Gauss–Legendre is used. On cells `1..n` the density `G`
//! is the piecewise-linear interpolant of its node values. On the first cell
//! `G` is sampled at the quadrature points themselves, so a caller can
//! evaluate it exactly there instead of interpolating toward `s = 0`.

use crate::error::{Error, Result};
use crate::fractional::Grid;
use crate::quadrature::GaussRule;

/// Points per cell.
const ORDER: usize = 10;

/// Precomputed weights for one kernel on one grid.
#[derive(Debug, Clone)]
pub struct ProductRule {
    grid: Grid,
    upto: usize,
    // first-cell sample points as fractions of the cell; `first_one` is used
    // for n = 1 where both power factors meet in the same cell
    first: Vec<f64>,
    first_one: Vec<f64>,
    first_weights: Vec<Vec<f64>>,
    first_weights_one: Vec<f64>,
    // node_weights[n][k - 1] multiplies G(t_k), k = 1..=n
    node_weights: Vec<Vec<f64>>,
}

impl ProductRule {
    /// Weights for targets `t_1..=t_upto` (clamped to the grid).
    pub fn new(grid: &Grid, rho: f64, a: f64, kappa: impl Fn(f64) -> f64, upto: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!("weight exponent must lie in [0, 1), got {rho}")));
        }
        if !(a > -1.0) {
            return Err(Error::InvalidParameter(format!("kernel exponent must exceed -1, got {a}")));
        }
        let upto = upto.min(grid.n_steps());
        let h = grid.step();

        let legendre = GaussRule::legendre(ORDER);
        let (lu, lw) = (legendre.unit_nodes(), legendre.unit_weights());
        // ∫_0^1 u^{-ρ} f(u) du
        let left = GaussRule::jacobi(ORDER, 0.0, -rho)?;
        let (first, first_w) = (left.unit_nodes(), left.unit_weights());
        // ∫_0^1 (1-u)^a f(u) du
        let right = GaussRule::jacobi(ORDER, a, 0.0)?;
        let (ru, rw) = (right.unit_nodes(), right.unit_weights());
        // ∫_0^1 (1-u)^a u^{-ρ} f(u) du
        let both = GaussRule::jacobi(ORDER, a, -rho)?;
        let (first_one, both_w) = (both.unit_nodes(), both.unit_weights());

        // kernel r^a κ(r) at r = h (m - u_q) on Legendre points, m = 2..=upto
        let full = |r: f64| r.powf(a) * kappa(r);
        let kern: Vec<Vec<f64>> =
            (0..=upto).map(|m| if m < 2 { Vec::new() } else { lu.iter().map(|u| full(h * (m as f64 - u))).collect() }).collect();
        // s^{-ρ} at s = h (k + u_q), k = 1..upto
        let weight: Vec<Vec<f64>> =
            (0..upto).map(|k| lu.iter().map(|u| (h * (k as f64 + u)).powf(-rho)).collect()).collect();
        let kappa_right: Vec<f64> = ru.iter().map(|u| kappa(h * (1.0 - u))).collect();

        let scale_first = h.powf(1.0 - rho);
        let scale_right = h.powf(1.0 + a);
        let mut first_weights = vec![Vec::new(); upto + 1];
        let mut node_weights = vec![Vec::new(); upto + 1];
        let first_weights_one: Vec<f64> = if upto >= 1 {
            let s = h.powf(1.0 + a - rho);
            both_w.iter().zip(&first_one).map(|(w, u)| s * w * kappa(h * (1.0 - u))).collect()
        } else {
            Vec::new()
        };

        for n in 1..=upto {
            let mut wn = vec![0.0; n];
            // last cell [t_{n-1}, t_n]: weight (t_n - s)^a
            let k = n - 1;
            for q in 0..ORDER {
                let s = h * (k as f64 + ru[q]);
                let base = scale_right * rw[q] * kappa_right[q] * if k == 0 { 1.0 } else { s.powf(-rho) };
                if k >= 1 {
                    wn[k - 1] += base * (1.0 - ru[q]);
                }
                wn[k] += base * ru[q];
            }
            if n == 1 {
                // the first cell is the last cell; handled by first_weights_one
                wn[0] = 0.0;
                node_weights[n] = wn;
                continue;
            }
            // interior cells [t_k, t_{k+1}], k = 1..n-2
            for k in 1..n - 1 {
                let kr = &kern[n - k];
                let sw = &weight[k];
                for q in 0..ORDER {
                    let base = h * lw[q] * kr[q] * sw[q];
                    wn[k - 1] += base * (1.0 - lu[q]);
                    wn[k] += base * lu[q];
                }
            }
            node_weights[n] = wn;
            first_weights[n] = first_w
                .iter()
                .zip(&first)
                .map(|(w, u)| scale_first * w * full(h * (n as f64 - u)))
                .collect();
        }
        Ok(Self { grid: *grid, upto, first, first_one, first_weights, first_weights_one, node_weights })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Last node index for which weights exist.
    pub fn upto(&self) -> usize {
        self.upto
    }

    /// Sample points in the first cell: the `n ≥ 2` set followed by the
    /// `n = 1` set. `apply` expects `G` at these points in this order.
    pub fn first_cell_points(&self) -> Vec<f64> {
        let h = self.grid.step();
        self.first.iter().chain(&self.first_one).map(|u| h * u).collect()
    }

    /// First-cell points as fractions of the cell.
    pub fn first_cell_fractions(&self) -> Vec<f64> {
        self.first.iter().chain(&self.first_one).copied().collect()
    }

    /// `I(t_n)` for `n = 0..=upto`; `first` holds `G` at
    /// [`first_cell_points`](Self::first_cell_points) and `nodes[k] = G(t_k)`
    /// (entry 0 unused).
    pub fn apply(&self, first: &[f64], nodes: &[f64]) -> Vec<f64> {
        debug_assert_eq!(first.len(), 2 * ORDER);
        let (first_many, first_one) = first.split_at(ORDER);
        let mut out = vec![0.0; self.upto + 1];
        for (n, o) in out.iter_mut().enumerate().skip(1) {
            let mut acc: f64 = self.node_weights[n].iter().zip(&nodes[1..=n]).map(|(w, g)| w * g).sum();
            if n == 1 {
                acc += self.first_weights_one.iter().zip(first_one).map(|(w, g)| w * g).sum::<f64>();
            } else {
                acc += self.first_weights[n].iter().zip(first_many).map(|(w, g)| w * g).sum::<f64>();
            }
            *o = acc;
        }
        out
    }

    /// [`apply`](Self::apply) with `G` piecewise linear on every cell,
    /// including the first (between `g[0] = G(0+)` and `g[1]`).
    pub fn apply_interpolated(&self, g: &[f64]) -> Vec<f64> {
        let first: Vec<f64> = self.first_cell_fractions().iter().map(|u| g[0] + (g[1] - g[0]) * u).collect();
        self.apply(&first, g)
    }
}
