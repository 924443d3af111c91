//! Quadrature rules shared by the kernels.
//!
//! * [`integrate_adaptive`]: globally adaptive 21-point Gauss–Kronrod on a
//!   finite interval.
//! * [`GaussRule`]: fixed Gauss–Legendre / Gauss–Jacobi rules built with the
//!   Golub–Welsch eigenvalue method.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::special::gamma::ln_gamma_abs;

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_36,
    0.295_524_224_714_752_87,
];

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Integrate `f` over `[a, b]` until the summed Kronrod–Gauss error estimate
/// is below `max(abs_tol, rel_tol * |I|)`.
///
/// Integrable endpoint singularities are tolerated (the rule never samples
/// the endpoints) but converge slowly; prefer a change of variables.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    let r = integrate_best_effort(f, a, b, abs_tol, rel_tol);
    if r.error_estimate > abs_tol.max(rel_tol * r.value.abs()) {
        return Err(Error::NonConvergence {
            terms: r.evaluations,
            reason: format!("adaptive quadrature on [{a}, {b}] stalled at error {:e}", r.error_estimate),
        });
    }
    Ok(r)
}

/// Like [`integrate_adaptive`] but returns whatever was reached when the
/// segment budget runs out; check `error_estimate`.
pub fn integrate_best_effort<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Integral {
    const MAX_SEGMENTS: usize = 2000;
    if a == b {
        return Integral { value: 0.0, error_estimate: 0.0, evaluations: 0 };
    }
    let (value, error) = kronrod21(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 21;
    while total_err > abs_tol.max(rel_tol * total.abs()) && heap.len() < MAX_SEGMENTS {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in double precision
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod21(&mut f, worst.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, worst.b);
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // resum to shed accumulated cancellation in the running totals
    let value = heap.iter().map(|s| s.value).sum();
    let error_estimate = heap.iter().map(|s| s.error).sum();
    Integral { value, error_estimate, evaluations }
}

/// An n-point Gaussian rule on the reference interval `[-1, 1]` for the
/// Jacobi weight `(1 - x)^a (1 + x)^b`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

impl GaussRule {
    /// Gauss–Legendre rule (`a = b = 0`).
    pub fn legendre(n: usize) -> Self {
        Self::jacobi(n, 0.0, 0.0).expect("Legendre weight is always valid")
    }

    /// Gauss–Jacobi rule; `a, b > -1`.
    pub fn jacobi(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("Gauss rule needs at least one node".into()));
        }
        if !(a > -1.0 && b > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "Jacobi exponents must exceed -1, got a = {a}, b = {b}"
            )));
        }
        let ab = a + b;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        diag[0] = (b - a) / (ab + 2.0);
        for (k, d) in diag.iter_mut().enumerate().skip(1) {
            let k = k as f64;
            let s = 2.0 * k + ab;
            *d = (b * b - a * a) / (s * (s + 2.0));
        }
        for (i, o) in off.iter_mut().enumerate() {
            let k = (i + 1) as f64;
            let s = 2.0 * k + ab;
            let beta = if i == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            *o = beta.sqrt();
        }
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            jacobi[(i, i)] = diag[i];
            if i + 1 < n {
                jacobi[(i, i + 1)] = off[i];
                jacobi[(i + 1, i)] = off[i];
            }
        }
        let eig = SymmetricEigen::new(jacobi);
        let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma_abs(a + 1.0) + ln_gamma_abs(b + 1.0)
            - ln_gamma_abs(ab + 2.0);
        let mu0 = ln_mu0.exp();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            a,
            b,
        })
    }

    /// Nodes and weights for `∫_lo^hi (hi - s)^a (s - lo)^b f(s) ds`.
    pub fn on_interval(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let scale = half.powf(self.a + self.b + 1.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (lo + half * (x + 1.0), w * scale))
    }

    /// Nodes mapped to `[0, 1]` as fractions of a unit cell.
    pub fn unit_nodes(&self) -> Vec<f64> {
        self.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect()
    }

    /// Weights for `∫_0^1 (1 - u)^a u^b f(u) du`.
    pub fn unit_weights(&self) -> Vec<f64> {
        let scale = 0.5f64.powf(self.a + self.b + 1.0);
        self.weights.iter().map(|w| w * scale).collect()
    }
}
