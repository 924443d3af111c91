use nalgebra::{DMatrix, DVector};

use super::{FracOrder, WeightedPath};
use crate::error::{Error, Result};
use crate::special::gamma::gamma_fn;

const MIN_STEPS: usize = 16;
// Largest number of basis terms used in the extrapolation.
const MAX_TERMS: usize = 6;
// Increments below this (relative to the data scale) are treated as noise.
const NOISE_FLOOR: f64 = 1e-6;
// Nodes beyond the number of terms in each least-squares fit.
const EXTRA_NODES: usize = 2;

/// Leading exponents of the small-`t` expansion of `J^ρ ω` for the linear
/// problem, in increasing order: `x Σ λ^k t^{γk}/Γ(γk+1)` and
/// `y Σ λ^k t^{γk+1}/Γ(γk+2)` from the initial data, `t^{γ+ρ}, t^{γ+ρ+1}`
/// from a smooth forcing. Near-duplicates are merged.
fn exponent_ladder(gamma: f64, rho: f64) -> Vec<f64> {
    let mut cand = vec![0.0, 1.0, gamma, gamma + 1.0, 2.0 * gamma, 2.0 * gamma + 1.0, gamma + rho, gamma + rho + 1.0];
    cand.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for e in cand {
        if out.iter().all(|k| (k - e).abs() > 0.05) {
            out.push(e);
        }
    }
    out.truncate(MAX_TERMS);
    out
}

/// Least-squares fit of `Σ c_i t^{e_i}` to the samples; returns `(c_0, c_1)`.
fn fit(t: &[f64], v: &[f64], exps: &[f64]) -> Option<(f64, f64)> {
    let scale = *t.last()?;
    let a = DMatrix::from_fn(t.len(), exps.len(), |r, c| (t[r] / scale).powf(exps[c]));
    let b = DVector::from_column_slice(v);
    let c = a.svd(true, true).solve(&b, 1e-14).ok()?;
    Some((c[0], c[1] / scale))
}

/// Estimates of `lim_{t→0+} J^ρ ω(t)` and `lim_{t→0+} (J^ρ ω)'(t)`, the
/// weighted initial values of `ω`.
///
/// The weighted samples `y(t_j)`, `j ≥ 1`, are fitted by least squares with
/// the leading powers of their small-`t` expansion (`1, t, t^γ, t^{γ+ρ}, …`),
/// using successively more terms, each fit over two more nodes than terms. `J^ρ`
/// maps `t^{k-ρ}` to `Γ(k+μ)/Γ(k+1) t^k` exactly, so the value and slope of
/// `J^ρ ω` at `0` are `Γ(μ)` times the constant and `Γ(μ+1)` times the linear
/// coefficient. The sample at `t_0` is not used. The pair from the largest
/// fit is returned; [`Error::ExtrapolationDiverged`] carries the sequence of
/// value estimates when the corrections grow instead of shrinking.
pub fn weighted_initial_values(w: &WeightedPath, order: FracOrder) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid = *w.grid();
    if grid.n_steps() < MIN_STEPS {
        return Err(Error::GridTooCoarse { required: MIN_STEPS, actual: grid.n_steps() });
    }
    let mu = order.mu();
    let exps = exponent_ladder(order.gamma(), w.rho());
    let nodes = exps.len() + EXTRA_NODES;
    let t: Vec<f64> = (1..=nodes).map(|j| grid.node(j)).collect();
    let (g0, g1) = (gamma_fn(mu)?, gamma_fn(mu + 1.0)?);

    let mut values = Vec::with_capacity(w.dim());
    let mut slopes = Vec::with_capacity(w.dim());
    for i in 0..w.dim() {
        let y = &w.y_component(i)[1..=nodes];
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let mut estimates = Vec::new();
        for p in 2..=exps.len() {
            let (c0, c1) = fit(&t[..p + EXTRA_NODES], &y[..p + EXTRA_NODES], &exps[..p])
                .ok_or_else(|| Error::InvalidParameter("singular extrapolation system".into()))?;
            estimates.push((g0 * c0, g1 * c1));
        }
        let steps: Vec<f64> = estimates
            .windows(2)
            .map(|e| (e[1].0 - e[0].0).abs().max((e[1].1 - e[0].1).abs() * t[0]))
            .collect();
        let last = *steps.last().expect("at least two estimates");
        if last > NOISE_FLOOR * scale && last > steps[0] {
            return Err(Error::ExtrapolationDiverged(estimates.iter().map(|e| e.0).collect()));
        }
        let (v, s) = *estimates.last().expect("at least one estimate");
        values.push(v);
        slopes.push(s);
    }
    Ok((values, slopes))
}
