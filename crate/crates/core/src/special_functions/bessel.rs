//! Integer-order cylindrical Bessel functions of the first and second kind.
//!
//! `J_n` is evaluated by Miller's backward recurrence normalised with
//! `J_0 + 2 Σ J_2k = 1`. The normalisation sum is bounded by one, so the
//! result carries an absolute error of a few ulps for every order and
//! argument inside the supported range. `Y_0` and `Y_1` come from the
//! Neumann series over the same backward sequence, and higher orders from
//! forward recurrence, which is stable for the dominant solution.

use std::f64::consts::FRAC_2_PI;
#[cfg(test)]
use std::f64::consts::PI;

use super::SpecialFunctionError;

/// Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const RESCALE_THRESHOLD: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;

/// Evaluation limits for the Bessel routines.
///
/// Requests outside the limits are refused instead of being evaluated with
/// degraded accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselLimits {
    pub max_order: u32,
    pub max_argument: f64,
}

impl BesselLimits {
    pub const DEFAULT_MAX_ORDER: u32 = 60;
    pub const DEFAULT_MAX_ARGUMENT: f64 = 1000.0;

    pub fn with_max_order(max_order: u32) -> Self {
        Self {
            max_order,
            ..Self::default()
        }
    }

    fn check(&self, order: u32, x: f64) -> Result<(), SpecialFunctionError> {
        if order > self.max_order {
            return Err(SpecialFunctionError::UnsupportedOrder {
                order,
                max_order: self.max_order,
            });
        }
        if !x.is_finite() || x > self.max_argument {
            return Err(SpecialFunctionError::ArgumentOutOfRange {
                x,
                max_argument: self.max_argument,
            });
        }
        Ok(())
    }

    /// Regular Bessel function `J_order(x)` for `x >= 0`.
    pub fn j(&self, order: u32, x: f64) -> Result<f64, SpecialFunctionError> {
        self.check(order, x)?;
        if x < 0.0 {
            return Err(SpecialFunctionError::Domain {
                what: "bessel_j",
                x,
            });
        }
        Ok(j_unchecked(order, x))
    }

    /// Irregular Bessel function `Y_order(x)` for `x > 0`.
    pub fn y(&self, order: u32, x: f64) -> Result<f64, SpecialFunctionError> {
        self.check(order, x)?;
        if x <= 0.0 || x.is_nan() {
            return Err(SpecialFunctionError::Domain {
                what: "bessel_y",
                x,
            });
        }
        Ok(y_unchecked(order, x))
    }
}

impl Default for BesselLimits {
    fn default() -> Self {
        Self {
            max_order: Self::DEFAULT_MAX_ORDER,
            max_argument: Self::DEFAULT_MAX_ARGUMENT,
        }
    }
}

/// `J_order(x)` under the default limits (order <= 60, x <= 1000).
pub fn bessel_j(order: u32, x: f64) -> Result<f64, SpecialFunctionError> {
    BesselLimits::default().j(order, x)
}

/// `Y_order(x)` under the default limits.
pub fn bessel_y(order: u32, x: f64) -> Result<f64, SpecialFunctionError> {
    BesselLimits::default().y(order, x)
}

/// Starting index for the backward recurrence; always even.
fn miller_start(top: u32, x: f64) -> usize {
    let scale = (top as f64).max(x);
    let n = (scale + 12.5 * scale.cbrt() + 20.0).ceil() as usize;
    n + (n & 1)
}

/// Runs the backward recurrence from `start` down to zero.
///
/// Returns unnormalised values for indices `0..=keep` (indices above `keep`
/// are discarded) together with the normalisation sum `J_0 + 2 Σ J_2k` on
/// the same scale.
fn backward_recurrence(x: f64, start: usize, keep: usize) -> (Vec<f64>, f64) {
    let mut values = vec![0.0; keep + 1];
    let mut upper = 0.0; // j_{k+1}
    let mut current = 1e-30; // j_k
    let mut sum = 0.0;
    let two_over_x = 2.0 / x;
    let mut k = start;
    loop {
        if k <= keep {
            values[k] = current;
        }
        if k.is_multiple_of(2) {
            sum += if k == 0 { current } else { 2.0 * current };
        }
        if k == 0 {
            break;
        }
        let lower = (k as f64) * two_over_x * current - upper;
        upper = current;
        current = lower;
        k -= 1;
        if current.abs() > RESCALE_THRESHOLD {
            current *= RESCALE_FACTOR;
            upper *= RESCALE_FACTOR;
            sum *= RESCALE_FACTOR;
            for v in values.iter_mut().skip(k + 1) {
                *v *= RESCALE_FACTOR;
            }
        }
    }
    (values, sum)
}

/// `J_0(x) .. J_top(x)` for `x >= 0` without limit checks.
pub(crate) fn j_sequence(top: u32, x: f64) -> Vec<f64> {
    let keep = top as usize;
    if x == 0.0 {
        let mut out = vec![0.0; keep + 1];
        out[0] = 1.0;
        return out;
    }
    let start = miller_start(top, x);
    let (mut values, sum) = backward_recurrence(x, start, keep);
    let inv = 1.0 / sum;
    for v in &mut values {
        *v *= inv;
    }
    values
}

pub(crate) fn j_unchecked(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let keep = order as usize;
    let start = miller_start(order, x);
    let (values, sum) = backward_recurrence(x, start, keep);
    values[keep] / sum
}

/// `Y_0(x)` and `Y_1(x)` from the Neumann series.
fn y01(x: f64) -> (f64, f64) {
    let start = miller_start(1, x) + 2;
    let (raw, sum) = backward_recurrence(x, start, start);
    let inv = 1.0 / sum;
    let j = |k: usize| -> f64 {
        if k <= start {
            raw[k] * inv
        } else {
            0.0
        }
    };
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k <= start {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0 += sign * j(2 * k) / kf;
        s1 += sign * (j(2 * k - 1) - j(2 * k + 1)) / kf;
        k += 1;
    }
    let y0 = FRAC_2_PI * (log_term * j(0) + 2.0 * s0);
    let y1 = -FRAC_2_PI * (j(0) / x - log_term * j(1) + s1);
    (y0, y1)
}

pub(crate) fn y_unchecked(order: u32, x: f64) -> f64 {
    let (y0, y1) = y01(x);
    match order {
        0 => y0,
        1 => y1,
        _ => {
            let mut lower = y0;
            let mut current = y1;
            for k in 1..order {
                let next = (2.0 * k as f64 / x) * current - lower;
                lower = current;
                current = next;
                if !current.is_finite() {
                    return f64::NEG_INFINITY;
                }
            }
            current
        }
    }
}

/// Derivative `J_m'(x) = J_{m-1}(x) - (m/x) J_m(x)`, with `J_0' = -J_1`.
pub(crate) fn j_derivative_unchecked(order: u32, x: f64) -> f64 {
    if order == 0 {
        return -j_unchecked(1, x);
    }
    let seq = j_sequence(order, x);
    let m = order as usize;
    if x == 0.0 {
        return if order == 1 { 0.5 } else { 0.0 };
    }
    seq[m - 1] - (order as f64 / x) * seq[m]
}

/// Large-argument Hankel expansion of `J_n`, summed to its smallest term.
/// Test-only reference for arguments well beyond the order.
#[cfg(test)]
fn hankel_asymptotic(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order as f64).powi(2);
    let chi = x - (0.5 * order as f64 + 0.25) * PI;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..40 {
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        let odd = (2 * k + 1) as f64;
        term *= (mu - odd * odd) / ((k + 1) as f64 * 8.0 * x);
    }
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
