use hilfer_core::fractional::{hilfer_derivative, rl_integral, rl_integral_values, second_derivative};
use hilfer_core::special::gamma_fn;
use hilfer_core::{FracOrder, Grid, SampledPath};
use proptest::prelude::*;

fn order(g: f64, d: f64) -> FracOrder {
    FracOrder::new(g, d).unwrap()
}

fn smooth(t: f64) -> f64 {
    (2.0 * t).sin() + t * t + 0.5
}

fn sup_diff(a: &SampledPath, b: &SampledPath, from: usize, to: usize) -> f64 {
    (from..=to).map(|j| (a.at(j)[0] - b.at(j)[0]).abs()).fold(0.0, f64::max)
}

// J^a of data with f(0) ≠ 0 behaves like t^a, which piecewise-linear data
// resolve only to O(h^{1+a}); the second-order trend needs f = O(t²).
fn flat_start(t: f64) -> f64 {
    t * t * (1.0 + (2.0 * t).sin())
}

#[test]
fn semigroup_with_second_order_convergence() {
    for &a in &[0.3, 0.7, 1.2] {
        for &b in &[0.3, 0.7, 1.2] {
            let errs: Vec<f64> = [128usize, 256, 512]
                .iter()
                .map(|&n| {
                    let grid = Grid::new(1.0, n).unwrap();
                    let f = SampledPath::from_fn(grid, flat_start).unwrap();
                    let twice = rl_integral(&rl_integral(&f, a).unwrap(), b).unwrap();
                    let once = rl_integral(&f, a + b).unwrap();
                    sup_diff(&twice, &once, 0, n)
                })
                .collect();
            for w in errs.windows(2) {
                let p = (w[0] / w[1]).log2();
                assert!(p >= 1.5, "a={a} b={b}: errors {errs:?}");
            }
        }
    }
}

#[test]
fn power_rule_for_smooth_powers_is_second_order() {
    for &m in &[2.5, 3.0, 4.0] {
        for &s in &[0.3, 0.7, 1.2, 1.9] {
            let errs: Vec<f64> = [128usize, 256, 512]
                .iter()
                .map(|&n| {
                    let grid = Grid::new(1.0, n).unwrap();
                    let f = SampledPath::from_fn(grid, |t| t.powf(m - 1.0)).unwrap();
                    let j = rl_integral(&f, s).unwrap();
                    let c = gamma_fn(m).unwrap() / gamma_fn(m + s).unwrap();
                    let exact = SampledPath::from_fn(grid, |t| c * t.powf(m + s - 1.0)).unwrap();
                    sup_diff(&j, &exact, 0, n)
                })
                .collect();
            for w in errs.windows(2) {
                assert!((w[0] / w[1]).log2() >= 1.8, "m={m} s={s}: {errs:?}");
            }
        }
    }
}

#[test]
fn endpoint_types_are_riemann_liouville_and_caputo() {
    let n = 512;
    let grid = Grid::new(1.0, n).unwrap();
    let h = grid.step();
    let f = SampledPath::from_fn(grid, smooth).unwrap();
    let vals = f.scalar_values();
    let from = grid.first_index_at(0.125);
    for &g in &[1.3, 1.5, 1.8] {
        // δ = 0: D² J^{2-γ}
        let rl = hilfer_derivative(&f, order(g, 0.0)).unwrap();
        let direct = second_derivative(&rl_integral_values(&vals, h, 2.0 - g).unwrap(), h).unwrap();
        for j in from..n {
            assert!((rl.at(j)[0] - direct[j]).abs() <= 1e-12 * direct[j].abs().max(1.0));
        }
        // δ = 1: J^{2-γ} D², which differs from Riemann-Liouville by the
        // boundary terms f(0) t^{-γ}/Γ(1-γ) + f'(0) t^{1-γ}/Γ(2-γ)
        let caputo = hilfer_derivative(&f, order(g, 1.0)).unwrap();
        let (f0, f1) = (0.5, 2.0);
        for j in from..n {
            let t = grid.node(j);
            let boundary = f0 * t.powf(-g) / gamma_fn(1.0 - g).unwrap() + f1 * t.powf(1.0 - g) / gamma_fn(2.0 - g).unwrap();
            assert!((caputo.at(j)[0] + boundary - direct[j]).abs() <= 1e-3, "γ={g} t={t}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivative_inverts_integral(g in 1.1f64..1.9, d in 0.0f64..=1.0, a in -2.0f64..2.0, w in 0.5f64..3.0) {
        let o = order(g, d);
        let n = 512;
        let grid = Grid::new(1.0, n).unwrap();
        // vanishes at 0
        let f = SampledPath::from_fn(grid, |t| a * t * t + (w * t).sin() * t).unwrap();
        let back = hilfer_derivative(&rl_integral(&f, g).unwrap(), o).unwrap();
        let err = sup_diff(&back, &f, grid.first_index_at(0.125), n - 1);
        prop_assert!(err <= 1e-3, "err {err}");
    }

    #[test]
    fn integral_is_linear(s in 0.1f64..2.0, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let grid = Grid::new(2.0, 64).unwrap();
        let f = SampledPath::from_fn(grid, f64::cos).unwrap();
        let g = SampledPath::from_fn(grid, |t| t * t).unwrap();
        let combo = SampledPath::from_fn(grid, |t| a * t.cos() + b * t * t).unwrap();
        let jf = rl_integral(&f, s).unwrap();
        let jg = rl_integral(&g, s).unwrap();
        let jc = rl_integral(&combo, s).unwrap();
        for j in 0..grid.len() {
            let lin = a * jf.at(j)[0] + b * jg.at(j)[0];
            prop_assert!((jc.at(j)[0] - lin).abs() <= 1e-12 * (1.0 + lin.abs()));
        }
    }
}
