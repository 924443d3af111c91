//! Discrete sine transform pairing Dirichlet modes `sin(n x)` on `(0, π)`
//! with samples at the collocation nodes `x_j = jπ/(M+1)`.

use std::f64::consts::PI;

use hilfer_core::{Error, ModeCoeffs, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SineTransformPlan {
    n_modes: usize,
    nodes: Vec<f64>,
    // table[n][j] = sin((n+1) x_{j+1})
    table: Vec<Vec<f64>>,
}

impl SineTransformPlan {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidParameter("sine transform needs at least one mode".into()));
        }
        let m1 = (n_modes + 1) as f64;
        let nodes: Vec<f64> = (1..=n_modes).map(|j| j as f64 * PI / m1).collect();
        // sin(n j π/(M+1)) via the reduced index keeps the table exactly antisymmetric
        let table = (1..=n_modes)
            .map(|n| (1..=n_modes).map(|j| sin_index(n * j, n_modes + 1)).collect())
            .collect();
        Ok(Self { n_modes, nodes, table })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `g_n = 2/(M+1) Σ_j v_j sin(n x_j)`.
    pub fn forward(&self, samples: &[f64]) -> Result<ModeCoeffs> {
        self.check_len(samples.len())?;
        let scale = 2.0 / (self.n_modes + 1) as f64;
        Ok(ModeCoeffs(
            self.table.iter().map(|row| scale * row.iter().zip(samples).map(|(s, v)| s * v).sum::<f64>()).collect(),
        ))
    }

    /// `v_j = Σ_n g_n sin(n x_j)`.
    pub fn inverse(&self, g: &ModeCoeffs) -> Result<Vec<f64>> {
        self.check_len(g.len())?;
        let mut out = vec![0.0; self.n_modes];
        for (row, gn) in self.table.iter().zip(g.as_slice()) {
            for (o, s) in out.iter_mut().zip(row) {
                *o += gn * s;
            }
        }
        Ok(out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_modes {
            return Err(Error::LengthMismatch { expected: self.n_modes, actual: len });
        }
        Ok(())
    }
}

/// `sin(k π / d)` with `k` reduced modulo `2d`.
fn sin_index(k: usize, d: usize) -> f64 {
    let r = k % (2 * d);
    let (r, sign) = if r >= d { (r - d, -1.0) } else { (r, 1.0) };
    // sin(π - θ) = sin θ; use the smaller angle
    let r = r.min(d - r);
    sign * (r as f64 * PI / d as f64).sin()
}
