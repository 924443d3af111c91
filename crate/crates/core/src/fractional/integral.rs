use super::{Grid, SampledPath, WeightedPath};
use crate::convolution::ProductRule;
use crate::error::{Error, Result};
use crate::special::gamma::{gamma_fn, rgamma};

fn check_order(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("integration order must be positive, got {sigma}")));
    }
    Ok(())
}

/// Product-trapezoidal `J^σ` of a series sampled with step `h`.
///
/// The data are taken piecewise linear and the moments of `(t_n - s)^{σ-1}`
/// against them are integrated exactly, which gives
///
/// ```text
/// J^σ f(t_n) = h^σ/Γ(σ+2) [ a_0 f_0 + Σ_{k=1}^{n-1} b_{n-k} f_k + f_n ]
/// a_0   = (n-1)^{σ+1} - (n-σ-1) n^σ
/// b_m   = (m+1)^{σ+1} - 2 m^{σ+1} + (m-1)^{σ+1}
/// ```
pub fn rl_integral_values(values: &[f64], h: f64, sigma: f64) -> Result<Vec<f64>> {
    check_order(sigma)?;
    let n_max = values.len().saturating_sub(1);
    let scale = h.powf(sigma) / gamma_fn(sigma + 2.0)?;
    let pw: Vec<f64> = (0..=n_max + 1).map(|m| (m as f64).powf(sigma + 1.0)).collect();
    let b: Vec<f64> = (0..=n_max).map(|m| if m == 0 { 0.0 } else { pw[m + 1] - 2.0 * pw[m] + pw[m - 1] }).collect();
    let mut out = vec![0.0; values.len()];
    for n in 1..=n_max {
        let nf = n as f64;
        let a0 = pw[n - 1] - (nf - sigma - 1.0) * nf.powf(sigma);
        let mut acc = a0 * values[0] + values[n];
        for k in 1..n {
            acc += b[n - k] * values[k];
        }
        out[n] = scale * acc;
    }
    Ok(out)
}

/// `J^σ f` at every node, component by component; node 0 is 0.
pub fn rl_integral(f: &SampledPath, sigma: f64) -> Result<SampledPath> {
    check_order(sigma)?;
    let h = f.grid().step();
    let comps = f.components().iter().map(|c| rl_integral_values(c, h, sigma)).collect::<Result<Vec<_>>>()?;
    SampledPath::from_components(*f.grid(), &comps)
}

/// `J^σ ω` for `ω = t^{-ρ} y` given in weighted form, with `y` piecewise
/// linear and the `s^{-ρ}` and `(t - s)^{σ-1}` singularities handled by
/// Gauss–Jacobi weights.
pub fn weighted_rl_integral(w: &WeightedPath, sigma: f64) -> Result<SampledPath> {
    check_order(sigma)?;
    let rule = weighted_rule(w.grid(), w.rho(), sigma, w.grid().n_steps())?;
    let comps: Vec<Vec<f64>> = (0..w.dim()).map(|i| rule.apply_interpolated(&w.y_component(i))).collect();
    SampledPath::from_components(*w.grid(), &comps)
}

pub(crate) fn weighted_rule(grid: &Grid, rho: f64, sigma: f64, upto: usize) -> Result<ProductRule> {
    let c = rgamma(sigma);
    ProductRule::new(grid, rho, sigma - 1.0, move |_| c, upto)
}
