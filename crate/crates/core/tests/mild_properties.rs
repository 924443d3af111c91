use hilfer_core::fractional::weighted_initial_values;
use hilfer_core::mild::{contraction_margin, picard_limit_start, solve_mild, HypothesisData, MildSolver, SemilinearProblem, SolverConfig};
use hilfer_core::operators::empirical_h1_constant;
use hilfer_core::{DiagonalGenerator, FracOrder, ModeCoeffs};

fn order(g: f64, d: f64) -> FracOrder {
    FracOrder::new(g, d).unwrap()
}

/// Heat modes with the mode-wise nonlinearity `η_n(t, ω) = t sin ω_n`.
fn problem(o: FracOrder, modes: usize, horizon: f64) -> SemilinearProblem {
    let gen = DiagonalGenerator::dirichlet_laplacian(modes).unwrap();
    let w1 = ModeCoeffs((1..=modes).map(|n| 2.0 / (n * n) as f64).collect());
    let w2 = ModeCoeffs((1..=modes).map(|n| if n == 1 { 1.0 } else { 0.0 }).collect());
    let h = HypothesisData::new(
        empirical_h1_constant(&gen, o, horizon).unwrap(),
        horizon.powf(1.0 - o.rho()),
        0.5 * horizon * horizon,
    )
    .unwrap();
    SemilinearProblem::new(gen, o, w1, w2, horizon)
        .unwrap()
        .with_nonlinearity(|t, w| ModeCoeffs(w.as_slice().iter().map(|v| t * v.sin()).collect()))
        .with_hypothesis(h)
}

#[test]
fn picard_deltas_decay_geometrically_under_contraction() {
    for &(g, d) in &[(1.5, 0.5), (1.3, 0.0), (1.8, 1.0)] {
        let o = order(g, d);
        let p = problem(o, 6, 0.5);
        let q = contraction_margin(p.hypothesis().unwrap(), o, 0.5);
        assert!(q < 1.0, "q = {q}");
        let (_, report) = solve_mild(&p, SolverConfig { n_steps: 128, ..SolverConfig::default() }).unwrap();
        assert!(report.contraction_certified());
        for (j, r) in report.delta_ratios().iter().enumerate().skip(1) {
            // ratios once deltas reach rounding level carry no information
            if report.deltas[j] < 1e-13 {
                break;
            }
            assert!(*r <= q + 0.1, "γ={g}: ratio {r} at sweep {}", j + 2);
        }
    }
}

#[test]
fn converged_iterate_is_a_fixed_point() {
    let o = order(1.5, 0.5);
    let p = problem(o, 6, 1.0);
    let cfg = SolverConfig { n_steps: 128, ..SolverConfig::default() };
    let solver = MildSolver::new(&p, cfg).unwrap();
    let (sol, _) = solver.solve().unwrap();
    let again = solver.map(&sol).unwrap();
    let diff = sol
        .y_values()
        .iter()
        .flatten()
        .zip(again.y_values().iter().flatten())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(diff <= 2.0 * cfg.tol, "{diff}");
}

#[test]
fn weighted_start_and_initial_data() {
    let o = order(1.5, 0.5);
    let gen = DiagonalGenerator::dirichlet_laplacian(8).unwrap();
    let w1 = ModeCoeffs((1..=8).map(|n| 1.0 / n as f64).collect());
    let w2 = ModeCoeffs((1..=8).map(|n| (-1.0f64).powi(n) / (n * n) as f64).collect());
    let p = SemilinearProblem::new(gen, o, w1.clone(), w2.clone(), 1.0).unwrap();
    let mut errs = Vec::new();
    for n in [128usize, 256, 512] {
        let (sol, _) = solve_mild(&p, SolverConfig { n_steps: n, ..SolverConfig::default() }).unwrap();
        let start = picard_limit_start(&p);
        for (a, b) in start.as_slice().iter().zip(&sol.y_values()[0]) {
            assert!((a - b).abs() <= 1e-14);
        }
        let (x, y) = weighted_initial_values(&sol, o).unwrap();
        let e = x
            .iter()
            .zip(w1.as_slice())
            .chain(y.iter().zip(w2.as_slice()))
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        errs.push(e);
    }
    assert!(errs[2] <= 1e-2 && errs[2] < errs[1] && errs[1] < errs[0], "{errs:?}");
}

#[test]
fn linear_modes_are_independent_of_truncation() {
    let o = order(1.5, 0.5);
    let cfg = SolverConfig { n_steps: 64, ..SolverConfig::default() };
    let run = |modes: usize| {
        let gen = DiagonalGenerator::dirichlet_laplacian(modes).unwrap();
        let w = ModeCoeffs((1..=modes).map(|n| 1.0 / n as f64).collect());
        let p = SemilinearProblem::new(gen, o, w.clone(), w, 1.0).unwrap().with_nonlinearity(|_, w| w.scaled(-0.5));
        solve_mild(&p, cfg).unwrap().0
    };
    let (small, large) = (run(4), run(8));
    for (a, b) in small.y_values().iter().zip(large.y_values()) {
        for m in 0..4 {
            assert!((a[m] - b[m]).abs() <= 1e-12);
        }
    }
}
