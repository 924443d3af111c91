//! Slow, high-precision reference for `E_{α,β}(z)`.
//!
//! Sums the defining series in binary fixed-point arithmetic on
//! `num_bigint::BigInt`, with the working precision widened by the size of the
//! largest series term so cancellation for negative `z` does not eat into the
//! requested digits. `1/Γ(αk + β)` comes from Stirling's series (Bernoulli
//! numbers generated exactly from tangent numbers) after an upward shift of
//! the argument.
//!
//! Meant for tests and for building reference tables; it shares no code with
//! the double-precision evaluator.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mittag_leffler::MlParams;
use crate::error::{Error, Result};

const MAX_TERMS: usize = 1_000_000;

/// Fixed-point number `v / 2^prec` with the precision held by [`Ctx`].
#[derive(Debug, Clone, PartialEq)]
struct Fx(BigInt);

struct Ctx {
    prec: u64,
    one: BigInt,
    ln2: Fx,
    half_ln_2pi: Fx,
    // B_{2n} / (2n (2n - 1)) for n = 1..
    stirling: Vec<Fx>,
    shift_to: f64,
}

impl Ctx {
    fn new(prec: u64) -> Self {
        let one = BigInt::one() << prec;
        let mut ctx = Self {
            prec,
            one: one.clone(),
            ln2: Fx(BigInt::zero()),
            half_ln_2pi: Fx(BigInt::zero()),
            stirling: Vec::new(),
            shift_to: 0.0,
        };
        // ln 2 = 2 atanh(1/3)
        let third = Fx(&one / 3);
        ctx.ln2 = ctx.atanh_times_two(&third);
        let pi = ctx.pi();
        let ln_pi = ctx.ln(&pi);
        ctx.half_ln_2pi = Fx((&ctx.ln2.0 + &ln_pi.0) >> 1);

        // Stirling terms decay like (n / (π e X))^{2n}; shift arguments up to
        // X ≈ prec / 3 and keep enough terms for 2^{-prec-16}.
        ctx.shift_to = (prec as f64 / 3.0).max(20.0);
        let target = -(prec as f64) - 16.0;
        let ln_x = ctx.shift_to.ln();
        let mut n_terms = 1;
        loop {
            let n = n_terms as f64;
            // log2 |B_2n| ≈ log2(2 (2n)! / (2π)^{2n})
            let log2_b = (2.0f64.ln() + ln_factorial(2.0 * n) - 2.0 * n * (2.0 * std::f64::consts::PI).ln())
                / std::f64::consts::LN_2;
            let log2_term = log2_b - (2.0 * n * (2.0 * n - 1.0)).log2() - (2.0 * n - 1.0) * ln_x / std::f64::consts::LN_2;
            if log2_term < target {
                break;
            }
            n_terms += 1;
        }
        ctx.stirling = ctx.stirling_coefficients(n_terms);
        ctx
    }

    #[cfg(test)]
    fn from_int(&self, n: i64) -> Fx {
        Fx(BigInt::from(n) << self.prec)
    }

    fn from_f64(&self, x: f64) -> Fx {
        assert!(x.is_finite());
        if x == 0.0 {
            return Fx(BigInt::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let m = BigInt::from(mant) * sign;
        let shift = e + self.prec as i64;
        Fx(if shift >= 0 { m << shift as u64 } else { m >> (-shift) as u64 })
    }

    fn to_f64(&self, x: &Fx) -> f64 {
        let bits = x.0.bits();
        // keep 64 significant bits before converting
        let drop = bits.saturating_sub(64);
        let head = (&x.0 >> drop).to_f64().unwrap_or(0.0);
        // split the scaling so subnormal-range results survive
        let e = drop as i32 - self.prec as i32;
        head * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    /// ln|x| without passing through an f64 that could overflow.
    fn ln_abs_f64(&self, x: &Fx) -> f64 {
        if x.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = x.0.bits();
        let drop = bits.saturating_sub(64);
        let head = (&x.0 >> drop).to_f64().unwrap_or(0.0).abs();
        head.ln() + (drop as f64 - self.prec as f64) * std::f64::consts::LN_2
    }

    fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        Fx((&a.0 * &b.0) >> self.prec)
    }

    fn div(&self, a: &Fx, b: &Fx) -> Fx {
        Fx((&a.0 << self.prec) / &b.0)
    }

    fn add(&self, a: &Fx, b: &Fx) -> Fx {
        Fx(&a.0 + &b.0)
    }

    fn sub(&self, a: &Fx, b: &Fx) -> Fx {
        Fx(&a.0 - &b.0)
    }

    fn is_negligible(&self, v: &BigInt) -> bool {
        v.bits() <= 1
    }

    /// 2 atanh(s) for |s| < 1.
    fn atanh_times_two(&self, s: &Fx) -> Fx {
        let s2 = self.mul(s, s);
        let mut pow = s.clone();
        let mut acc = s.0.clone();
        let mut k: u64 = 1;
        loop {
            pow = self.mul(&pow, &s2);
            let term = &pow.0 / BigInt::from(2 * k + 1);
            if self.is_negligible(&term) {
                break;
            }
            acc += term;
            k += 1;
        }
        Fx(acc << 1)
    }

    fn atan_inv(&self, m: u64) -> BigInt {
        // atan(1/m) = Σ (-1)^k / ((2k+1) m^{2k+1})
        let m2 = BigInt::from(m * m);
        let mut pow = &self.one / BigInt::from(m);
        let mut acc = pow.clone();
        let mut k: u64 = 1;
        loop {
            pow = &pow / &m2;
            let term = &pow / BigInt::from(2 * k + 1);
            if term.is_zero() {
                break;
            }
            if k % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
            k += 1;
        }
        acc
    }

    fn pi(&self) -> Fx {
        // Machin: π = 16 atan(1/5) - 4 atan(1/239)
        Fx(self.atan_inv(5) * 16 - self.atan_inv(239) * 4)
    }

    /// Natural log of a positive fixed-point value.
    fn ln(&self, x: &Fx) -> Fx {
        assert!(x.0.sign() == Sign::Plus, "ln of non-positive value");
        // x = 2^e f with f in [1, 2)
        let e = x.0.bits() as i64 - 1 - self.prec as i64;
        let f = if e >= 0 { Fx(&x.0 >> e as u64) } else { Fx(&x.0 << (-e) as u64) };
        let s = self.div(&self.sub(&f, &Fx(self.one.clone())), &self.add(&f, &Fx(self.one.clone())));
        let ln_f = self.atanh_times_two(&s);
        Fx(&self.ln2.0 * e + ln_f.0)
    }

    /// exp of a fixed-point value; underflows to zero.
    fn exp(&self, x: &Fx) -> Fx {
        let approx = self.to_f64(x) / std::f64::consts::LN_2;
        let n = approx.round() as i64;
        let r = Fx(&x.0 - &self.ln2.0 * n);
        const HALVINGS: u64 = 24;
        let r = Fx(r.0 >> HALVINGS);
        let mut term = self.one.clone();
        let mut acc = self.one.clone();
        let mut k: u64 = 1;
        loop {
            term = ((&term * &r.0) >> self.prec) / BigInt::from(k);
            if term.is_zero() {
                break;
            }
            acc += &term;
            k += 1;
        }
        let mut v = Fx(acc);
        for _ in 0..HALVINGS {
            v = self.mul(&v, &v);
        }
        if n >= 0 {
            Fx(v.0 << n as u64)
        } else {
            Fx(v.0 >> (-n) as u64)
        }
    }

    /// B_{2n}/(2n(2n-1)) for n = 1..=count via tangent numbers:
    /// B_{2n} = (-1)^{n-1} 2n T_n / (4^n (4^n - 1)).
    fn stirling_coefficients(&self, count: usize) -> Vec<Fx> {
        let mut t = vec![BigInt::zero(); count + 1];
        if count >= 1 {
            t[1] = BigInt::one();
        }
        for k in 2..=count {
            t[k] = &t[k - 1] * BigInt::from(k - 1);
        }
        for k in 2..=count {
            for j in k..=count {
                t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
            }
        }
        (1..=count)
            .map(|n| {
                let four_n = BigInt::one() << (2 * n as u64);
                let denom = &four_n * (&four_n - 1u32) * BigInt::from(2 * n as u64 - 1);
                // 2n T_n / (2n) cancels the 2n of the Stirling denominator
                let v = (&t[n] << self.prec) / denom;
                Fx(if n % 2 == 1 { v } else { -v })
            })
            .collect()
    }

    /// ln Γ(x) for x > 0.
    fn ln_gamma(&self, x: &Fx) -> Fx {
        let xf = self.to_f64(x);
        assert!(xf > 0.0);
        let shift = if xf < self.shift_to { (self.shift_to - xf).ceil() as i64 } else { 0 };
        let mut prod = Fx(self.one.clone());
        let mut y = x.clone();
        for _ in 0..shift {
            prod = self.mul(&prod, &y);
            y = Fx(&y.0 + &self.one);
        }
        let ln_y = self.ln(&y);
        let half = Fx(&self.one >> 1);
        let mut acc = self.sub(&self.mul(&self.sub(&y, &half), &ln_y), &y);
        acc = self.add(&acc, &self.half_ln_2pi);
        let inv = self.div(&Fx(self.one.clone()), &y);
        let inv2 = self.mul(&inv, &inv);
        // Horner in 1/y²: the coefficients grow factorially while 1/y^{2n-1}
        // drops below the fixed-point resolution, so no explicit powers
        let mut series = Fx(BigInt::zero());
        for c in self.stirling.iter().rev() {
            series = self.add(c, &self.mul(&inv2, &series));
        }
        acc = self.add(&acc, &self.mul(&inv, &series));
        if shift > 0 {
            acc = self.sub(&acc, &self.ln(&prod));
        }
        acc
    }

    /// (ln |1/Γ(x)|, sign of 1/Γ(x)); `None` at the poles.
    fn ln_rgamma(&self, x: &Fx) -> Option<(Fx, i32)> {
        if x.0.sign() == Sign::Plus {
            let lg = self.ln_gamma(x);
            return Some((Fx(-lg.0), 1));
        }
        // 1/Γ(x) = x (x+1) ... (x+j-1) / Γ(x+j)
        let mut prod = Fx(self.one.clone());
        let mut y = x.clone();
        while y.0.sign() != Sign::Plus {
            if y.0.is_zero() {
                return None;
            }
            prod = self.mul(&prod, &y);
            y = Fx(&y.0 + &self.one);
        }
        if prod.0.is_zero() {
            return None;
        }
        let sign = if prod.0.is_negative() { -1 } else { 1 };
        let ln_prod = self.ln(&Fx(prod.0.abs()));
        let lg = self.ln_gamma(&y);
        Some((self.sub(&ln_prod, &lg), sign))
    }
}

fn ln_factorial(n: f64) -> f64 {
    // Stirling estimate, plenty for precision budgeting
    if n < 2.0 {
        return 0.0;
    }
    (n + 0.5) * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * n)
}

fn ln_gamma_estimate(x: f64) -> f64 {
    if x < 1.0 {
        // bounded region: only used to size the working precision
        return 0.0;
    }
    ln_factorial(x - 1.0)
}

/// `E_{α,β}(z)` from the defining series in `digits`-decimal-digit arithmetic.
///
/// The working precision is `digits` plus the decimal magnitude of the largest
/// term, so the result is accurate to about `digits` significant digits
/// relative to `max(|E|, 1)` whatever the cancellation. Summation stops once
/// two consecutive terms past the peak fall below `10^-digits` relative to
/// the partial sum.
pub fn ml_oracle(p: MlParams, digits: u32) -> Result<f64> {
    p.validate()?;
    if digits < 30 {
        return Err(Error::InvalidParameter(format!("oracle needs at least 30 digits, got {digits}")));
    }
    let MlParams { alpha, beta, z } = p;

    // Largest series term, for the precision budget.
    let ln_abs_z = if z == 0.0 { f64::NEG_INFINITY } else { z.abs().ln() };
    let mut peak: f64 = 0.0;
    if z != 0.0 {
        let mut k = 0usize;
        loop {
            let x = alpha * k as f64 + beta;
            let lt = k as f64 * ln_abs_z - ln_gamma_estimate(x);
            peak = peak.max(lt);
            if x > 2.0 && lt < peak - 50.0 && k > 2 {
                break;
            }
            k += 1;
            if k > MAX_TERMS {
                break;
            }
        }
    }
    let bits_per_digit = std::f64::consts::LOG2_10;
    let prec = (digits as f64 * bits_per_digit + peak.max(0.0) / std::f64::consts::LN_2 + 96.0).ceil() as u64;
    let ctx = Ctx::new(prec);

    let alpha_fx = ctx.from_f64(alpha);
    let beta_fx = ctx.from_f64(beta);
    if z == 0.0 {
        return Ok(match ctx.ln_rgamma(&beta_fx) {
            None => 0.0,
            Some((ln_mag, sign)) => sign as f64 * ctx.to_f64(&ctx.exp(&ln_mag)),
        });
    }
    let ln_z = ctx.ln(&ctx.from_f64(z.abs()));
    let threshold = -(digits as f64) * std::f64::consts::LN_10;

    let mut sum = BigInt::zero();
    let mut small_run = 0;
    let mut prev_ln = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let x = Fx(&alpha_fx.0 * k as u64 + &beta_fx.0);
        let Some((ln_rg, sign)) = ctx.ln_rgamma(&x) else {
            continue;
        };
        let ln_term = Fx(&ln_z.0 * k as u64 + ln_rg.0);
        let ln_term_f = ctx.to_f64(&ln_term);
        let term = ctx.exp(&ln_term);
        let negative = (sign < 0) ^ (z < 0.0 && k % 2 == 1);
        if negative {
            sum -= &term.0;
        } else {
            sum += &term.0;
        }
        let rel = ln_term_f - ctx.ln_abs_f64(&Fx(sum.clone()));
        let past_peak = ln_term_f <= prev_ln;
        if past_peak && rel < threshold {
            small_run += 1;
            if small_run >= 2 {
                return Ok(ctx.to_f64(&Fx(sum)));
            }
        } else {
            small_run = 0;
        }
        prev_ln = ln_term_f;
    }
    Err(Error::NonConvergence {
        terms: MAX_TERMS,
        reason: format!("oracle series at alpha = {alpha}, beta = {beta}, z = {z} is out of oracle range"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(a: f64, b: f64, z: f64) -> MlParams {
        MlParams::new(a, b, z).unwrap()
    }

    #[test]
    fn fixed_point_elementary_functions() {
        let ctx = Ctx::new(256);
        assert_relative_eq!(ctx.to_f64(&ctx.ln2), std::f64::consts::LN_2, max_relative = 1e-16);
        assert_relative_eq!(ctx.to_f64(&ctx.pi()), std::f64::consts::PI, max_relative = 1e-16);
        let e = ctx.exp(&ctx.from_int(1));
        assert_relative_eq!(ctx.to_f64(&e), std::f64::consts::E, max_relative = 1e-16);
        let l = ctx.ln(&ctx.from_f64(10.0));
        assert_relative_eq!(ctx.to_f64(&l), std::f64::consts::LN_10, max_relative = 1e-16);
    }

    #[test]
    fn bernoulli_from_tangent_numbers() {
        let ctx = Ctx::new(128);
        // B_2/2 = 1/12, B_4/12 = -1/360, B_6/30 = 1/1260, B_8/56 = -1/1680
        let c = ctx.stirling_coefficients(4);
        let expected = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0];
        for (ci, e) in c.iter().zip(expected) {
            assert_relative_eq!(ctx.to_f64(ci), e, max_relative = 1e-16);
        }
    }

    #[test]
    fn ln_gamma_matches_known_values() {
        let ctx = Ctx::new(200);
        let lg = |x: f64| ctx.to_f64(&ctx.ln_gamma(&ctx.from_f64(x)));
        assert_relative_eq!(lg(0.5), 0.5 * std::f64::consts::PI.ln(), max_relative = 1e-16);
        assert!(lg(1.0).abs() < 1e-40_f64.max(1e-300));
        assert_relative_eq!(lg(10.0), 362_880f64.ln(), max_relative = 1e-16);
    }

    #[test]
    fn closed_forms() {
        let e = std::f64::consts::E;
        assert_relative_eq!(ml_oracle(p(1.0, 2.0, 1.0), 40).unwrap(), e - 1.0, max_relative = 1e-16);
        assert_relative_eq!(ml_oracle(p(2.0, 2.0, 1.0), 40).unwrap(), 1.175_201_193_643_801_4, max_relative = 1e-16);
        assert_relative_eq!(ml_oracle(p(1.0, 1.0, -20.0), 40).unwrap(), (-20f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(ml_oracle(p(2.0, 1.0, -400.0), 40).unwrap(), 20f64.cos(), max_relative = 1e-14);
    }

    #[test]
    fn negative_beta_and_poles() {
        // 1/Γ(-1) = 0 so E_{1,-1}(z) = z^2 e^z... check via E_{1,-1}(z) = z E_{1,0}(z), E_{1,0}(z) = z e^z
        let z: f64 = 0.75;
        assert_relative_eq!(ml_oracle(p(1.0, -1.0, z), 40).unwrap(), z * z * z.exp(), max_relative = 1e-16);
        assert_eq!(ml_oracle(p(1.5, -1.0, 0.0), 40).unwrap(), 0.0);
    }

    #[test]
    fn rejects_low_precision() {
        assert!(ml_oracle(p(1.5, 1.0, 1.0), 20).is_err());
    }
}
