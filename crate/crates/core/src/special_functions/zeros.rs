//! Zeros of `J_m`: closed-form approximations and bracketed root finding.

use std::f64::consts::PI;

use super::bessel::{j_derivative_unchecked, j_unchecked, BesselLimits};
use super::SpecialFunctionError;

/// How a zero value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroMethod {
    ExactRoot,
    WkbSeries,
    AsymptoticZ0,
}

/// A single zero `z_(m, n_r)` of `J_m`; `n_r` counts radial nodes (0-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord {
    pub m: u32,
    pub n_r: u32,
    pub z: f64,
    pub method: ZeroMethod,
}

/// Residual bound on `|J_m(z)|` for an accepted root.
pub const ROOT_RESIDUAL: f64 = 1e-12;
/// Relative bracket width an accepted root must be confined to.
pub const ROOT_RELATIVE_WIDTH: f64 = 1e-13;

const BISECTION_WIDTH: f64 = 1e-6;
const MAX_NEWTON_STEPS: usize = 50;
const SCAN_STEP: f64 = PI / 8.0;
/// Lower bound on the spacing of consecutive zeros of any integer order.
const MIN_ZERO_GAP: f64 = 3.0;

/// Leading asymptotic zero `(n_r + |m|/2 + 3/4) π`.
pub fn asymptotic_z0(m: u32, n_r: u32) -> f64 {
    (n_r as f64 + 0.5 * m as f64 + 0.75) * PI
}

/// Series approximation of `z_(m, n_r)`.
///
/// For `m != 0` the odd-power expansion in `m^2 / z0^2` obtained by iterating
/// the radial quantisation condition; for `m == 0` the fitted form
/// `z0 + 1/(8 z0) - 1/(24 z0^3)`.
pub fn wkb_zero(m: u32, n_r: u32) -> f64 {
    let z0 = asymptotic_z0(m, n_r);
    if m == 0 {
        return z0 + 1.0 / (8.0 * z0) - 1.0 / (24.0 * z0.powi(3));
    }
    let m2 = (m as f64).powi(2);
    let inv = 1.0 / z0;
    let inv2 = inv * inv;
    // Horner in m^2 / z0^2 of the odd series.
    let u = m2 * inv2;
    let series = 0.5 + u * (7.0 / 24.0 + u * (83.0 / 240.0 + u * (6949.0 / 13440.0)));
    z0 - m2 * inv * series
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign of `J_m` just below the zero with index `n_r`.
fn expected_sign_below(n_r: u32) -> i8 {
    if n_r.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Root finder for the zeros of a single order.
///
/// `floor` is a point known to lie between the previous zero (or the origin)
/// and the target zero.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ZeroFinder {
    pub(crate) m: u32,
}

impl ZeroFinder {
    fn j(&self, x: f64) -> f64 {
        j_unchecked(self.m, x)
    }

    /// Locate zero `n_r` given a floor strictly below it and above zero `n_r - 1`.
    pub(crate) fn find(&self, n_r: u32, floor: f64) -> Result<f64, SpecialFunctionError> {
        let want_lo = expected_sign_below(n_r);
        let seed = wkb_zero(self.m, n_r);
        let lo = (seed - 0.5 * PI).max(floor);
        let hi = seed + 0.5 * PI;
        // A seed bracket is trusted only when no earlier zero can hide between
        // the floor and its lower end.
        if hi > lo && lo <= floor + MIN_ZERO_GAP {
            let (flo, fhi) = (self.j(lo), self.j(hi));
            if sign_of(flo) == want_lo && sign_of(fhi) == -want_lo {
                return self.polish(n_r, lo, hi, flo);
            }
        }
        self.scan(n_r, floor, want_lo)
    }

    fn scan(&self, n_r: u32, floor: f64, want_lo: i8) -> Result<f64, SpecialFunctionError> {
        let mut lo = floor;
        let mut flo = self.j(lo);
        if sign_of(flo) != want_lo {
            return Err(SpecialFunctionError::Bracket {
                m: self.m,
                n_r,
                lo,
                hi: lo,
                f_lo: flo,
                f_hi: flo,
            });
        }
        let limit = floor + 4.0 * PI + 4.0 * (self.m as f64).cbrt() + 8.0;
        while lo < limit {
            let hi = lo + SCAN_STEP;
            let fhi = self.j(hi);
            if sign_of(fhi) != want_lo {
                if fhi == 0.0 {
                    return Ok(hi);
                }
                return self.polish(n_r, lo, hi, flo);
            }
            lo = hi;
            flo = fhi;
        }
        Err(SpecialFunctionError::Bracket {
            m: self.m,
            n_r,
            lo: floor,
            hi: limit,
            f_lo: self.j(floor),
            f_hi: self.j(limit),
        })
    }

    /// Bisection to a coarse width, then safeguarded Newton.
    fn polish(
        &self,
        n_r: u32,
        mut lo: f64,
        mut hi: f64,
        mut flo: f64,
    ) -> Result<f64, SpecialFunctionError> {
        while hi - lo > BISECTION_WIDTH {
            let mid = 0.5 * (lo + hi);
            let fmid = self.j(mid);
            if fmid == 0.0 {
                return Ok(mid);
            }
            if sign_of(fmid) == sign_of(flo) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        let mut z = 0.5 * (lo + hi);
        for _ in 0..MAX_NEWTON_STEPS {
            let f = self.j(z);
            if f == 0.0 {
                break;
            }
            if sign_of(f) == sign_of(flo) {
                lo = z;
                flo = f;
            } else {
                hi = z;
            }
            let d = j_derivative_unchecked(self.m, z);
            let mut next = z - f / d;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let step = (next - z).abs();
            z = next;
            if step <= 0.25 * ROOT_RELATIVE_WIDTH * z {
                break;
            }
        }
        let residual = self.j(z);
        let delta = 0.5 * ROOT_RELATIVE_WIDTH * z;
        let (fa, fb) = (self.j(z - delta), self.j(z + delta));
        let confined = sign_of(fa) != sign_of(fb) || fa == 0.0 || fb == 0.0;
        if residual.abs() >= ROOT_RESIDUAL || !confined {
            return Err(SpecialFunctionError::Unconverged {
                m: self.m,
                n_r,
                z,
                residual,
            });
        }
        Ok(z)
    }
}

/// Lowest-lying floor for the first zero of `J_m`.
fn first_floor(m: u32) -> f64 {
    if m == 0 {
        1e-3
    } else {
        m as f64
    }
}

/// All zeros `z_(m, 0) .. z_(m, n_r_max)` of one order, in ascending order.
pub fn zeros_of_order(
    m: u32,
    n_r_max: u32,
    limits: &BesselLimits,
) -> Result<Vec<f64>, SpecialFunctionError> {
    let mut out = Vec::with_capacity(n_r_max as usize + 1);
    zeros_while(m, limits, |n_r, _| n_r <= n_r_max, &mut out)?;
    Ok(out)
}

/// All zeros of order `m` that do not exceed `z_max`.
pub fn zeros_of_order_below(
    m: u32,
    z_max: f64,
    limits: &BesselLimits,
) -> Result<Vec<f64>, SpecialFunctionError> {
    let mut out = Vec::new();
    zeros_while(m, limits, |_, floor| floor <= z_max, &mut out)?;
    while out.last().is_some_and(|&z| z > z_max) {
        out.pop();
    }
    Ok(out)
}

fn zeros_while(
    m: u32,
    limits: &BesselLimits,
    mut keep_going: impl FnMut(u32, f64) -> bool,
    out: &mut Vec<f64>,
) -> Result<(), SpecialFunctionError> {
    if m > limits.max_order {
        return Err(SpecialFunctionError::UnsupportedOrder {
            order: m,
            max_order: limits.max_order,
        });
    }
    let finder = ZeroFinder { m };
    let mut floor = first_floor(m);
    let mut n_r = 0;
    while keep_going(n_r, floor) {
        if floor + PI > limits.max_argument {
            return Err(SpecialFunctionError::ArgumentOutOfRange {
                x: floor + PI,
                max_argument: limits.max_argument,
            });
        }
        let z = finder.find(n_r, floor)?;
        out.push(z);
        floor = z + 1e-3;
        n_r += 1;
    }
    Ok(())
}

/// The exact zero `z_(m, n_r)` by bracketed root finding.
pub fn exact_zero(m: u32, n_r: u32) -> Result<ZeroRecord, SpecialFunctionError> {
    exact_zero_with(m, n_r, &BesselLimits::default())
}

pub fn exact_zero_with(
    m: u32,
    n_r: u32,
    limits: &BesselLimits,
) -> Result<ZeroRecord, SpecialFunctionError> {
    let zs = zeros_of_order(m, n_r, limits)?;
    Ok(ZeroRecord {
        m,
        n_r,
        z: zs[n_r as usize],
        method: ZeroMethod::ExactRoot,
    })
}

/// Checks strict growth in `n_r` and `z(m, n) < z(m+1, n) < z(m, n+1)` over
/// a rectangular grid of zeros indexed `[m][n_r]`. Returns the first
/// offending `(m, n_r)`.
pub fn check_interlacing(rows: &[Vec<f64>]) -> Result<(), (u32, u32)> {
    for (m, row) in rows.iter().enumerate() {
        for n in 0..row.len() {
            if !(row[n] > 0.0) {
                return Err((m as u32, n as u32));
            }
            if n + 1 < row.len() && row[n + 1] <= row[n] {
                return Err((m as u32, n as u32));
            }
            if let Some(next) = rows.get(m + 1) {
                if n < next.len() {
                    if next[n] <= row[n] {
                        return Err((m as u32, n as u32));
                    }
                    if n + 1 < row.len() && next[n] >= row[n + 1] {
                        return Err((m as u32, n as u32));
                    }
                }
            }
        }
    }
    Ok(())
}
