use hilfer_core::fractional::{rl_integral, weighted_initial_values};
use hilfer_core::scalar::{solve_linear_scalar, ScalarLinearProblem};
use hilfer_core::special::rgamma;
use hilfer_core::{FracOrder, Grid, SampledPath, WeightedPath};
use proptest::prelude::*;

fn order(g: f64, d: f64) -> FracOrder {
    FracOrder::new(g, d).unwrap()
}

fn solve(o: FracOrder, n: usize, c: f64, x: f64, y: f64, eta: Option<fn(f64) -> f64>) -> WeightedPath {
    let grid = Grid::new(1.0, n).unwrap();
    let mut p = ScalarLinearProblem::new(o, grid, c, x, y).unwrap();
    if let Some(f) = eta {
        p = p.with_forcing(SampledPath::from_fn(grid, f).unwrap()).unwrap();
    }
    solve_linear_scalar(&p).unwrap()
}

#[test]
fn initial_values_are_recovered_and_improve() {
    for &(g, d, c) in &[(1.5, 0.5, -1.0), (1.3, 0.0, 0.0), (1.8, 1.0, -2.0), (1.6, 0.3, 0.5)] {
        let o = order(g, d);
        let errs: Vec<f64> = [128usize, 256, 512]
            .iter()
            .map(|&n| {
                let w = solve(o, n, c, 1.0, 0.5, Some(f64::sin));
                let (x, y) = weighted_initial_values(&w, o).unwrap();
                (x[0] - 1.0).abs().max((y[0] - 0.5).abs())
            })
            .collect();
        assert!(errs[1] <= 1e-2, "γ={g} δ={d}: {errs:?}");
        assert!(errs[2] < errs[0], "γ={g} δ={d}: {errs:?}");
    }
}

#[test]
fn caputo_end_starts_classically() {
    let o = order(1.5, 1.0);
    let n = 1024;
    let w = solve(o, n, -1.0, 1.0, 0.5, None);
    let h = 1.0 / n as f64;
    let om = w.omega_component(0);
    assert!((om[0] - 1.0).abs() < 1e-14);
    // ω = x + y t + c x t^γ/Γ(γ+1) + ...: difference quotients carry an
    // h^{γ-1} term, removed by one extrapolation step
    let q1 = (om[1] - om[0]) / h;
    let q2 = (om[2] - om[0]) / (2.0 * h);
    let f = 2f64.powf(o.gamma() - 1.0);
    let slope = (f * q1 - q2) / (f - 1.0);
    assert!((slope - 0.5).abs() < 1e-2, "{slope} from {q1}, {q2}");
}

#[test]
fn riemann_liouville_end_is_finite_in_weighted_form() {
    let o = order(1.5, 0.0);
    let w = solve(o, 256, -1.0, 1.0, 0.0, None);
    let y = w.y_component(0);
    assert!((y[0] - rgamma(o.mu())).abs() < 1e-14);
    assert!(y.iter().all(|v| v.is_finite()));
    // ω itself grows like t^{γ-2} towards 0
    let om = w.omega_component(0);
    assert!(om[1] > om[2] && om[2] > om[4]);
}

#[test]
fn zero_coefficient_convolution_is_the_riemann_liouville_integral() {
    for &(g, d) in &[(1.5, 0.5), (1.2, 0.0), (1.9, 1.0)] {
        let o = order(g, d);
        let n = 256;
        let grid = Grid::new(1.0, n).unwrap();
        let eta = SampledPath::from_fn(grid, |t| (3.0 * t).cos()).unwrap();
        let p = ScalarLinearProblem::new(o, grid, 0.0, 0.0, 0.0).unwrap().with_forcing(eta.clone()).unwrap();
        let w = solve_linear_scalar(&p).unwrap();
        let j = rl_integral(&eta, g).unwrap();
        let om = w.omega_component(0);
        for k in 1..=n {
            assert!((om[k] - j.at(k)[0]).abs() <= 1e-12, "γ={g} k={k}: {} vs {}", om[k], j.at(k)[0]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn superposition(g in 1.1f64..1.9, d in 0.0f64..=1.0, c in -3.0f64..1.0,
                     x in -2.0f64..2.0, y in -2.0f64..2.0, k in -3.0f64..3.0) {
        let o = order(g, d);
        let n = 64;
        let full = solve(o, n, c, x, y, Some(f64::sin));
        let hx = solve(o, n, c, 1.0, 0.0, None);
        let hy = solve(o, n, c, 0.0, 1.0, None);
        let forced = solve(o, n, c, 0.0, 0.0, Some(f64::sin));
        let scaled = solve(o, n, c, k * x, k * y, None);
        let unforced = solve(o, n, c, x, y, None);
        for j in 0..=n {
            let a = full.y_values()[j][0];
            let b = x * hx.y_values()[j][0] + y * hy.y_values()[j][0] + forced.y_values()[j][0];
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            let s = scaled.y_values()[j][0];
            let u = k * unforced.y_values()[j][0];
            prop_assert!((s - u).abs() <= 1e-12 * (1.0 + u.abs()));
        }
    }
}
