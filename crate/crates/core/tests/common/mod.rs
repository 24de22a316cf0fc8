//! Oracles shared by the integration tests; none of them call into the
//! library's own Bessel or root-finding code.
#![allow(dead_code)]

use std::f64::consts::PI;

/// `J_m(x) = (1/2π) ∫₀^{2π} cos(mτ − x sin τ) dτ` by the trapezoid rule,
/// exponentially convergent for a periodic integrand.
pub fn bessel_j_integral(m: u32, x: f64) -> f64 {
    let n = 64 + 2 * (x.abs() as usize + m as usize);
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| {
            let t = k as f64 * h;
            (m as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / n as f64
}

/// Bisection for a sign change of `f` on `[a, b]` down to `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    assert!(fa * f(b) <= 0.0, "no sign change on [{a}, {b}]");
    while b - a > tol {
        let c = 0.5 * (a + b);
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if fa * fc < 0.0 {
            b = c;
        } else {
            a = c;
            fa = fc;
        }
    }
    0.5 * (a + b)
}

/// The `n_r`-th zero (0-based) of `J_m` from a fine scan plus bisection.
pub fn oracle_zero(m: u32, n_r: u32) -> f64 {
    let f = |x| bessel_j_integral(m, x);
    let step = 0.05;
    let mut x = m as f64 + 0.5;
    let mut seen = 0;
    let mut fx = f(x);
    loop {
        let nx = x + step;
        let fnx = f(nx);
        if fx * fnx < 0.0 {
            if seen == n_r {
                return bisect(f, x, nx, 1e-14);
            }
            seen += 1;
        }
        x = nx;
        fx = fnx;
    }
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// `Y₀(x) = (1/π)∫₀^π sin(x sin τ) dτ − (2/π)∫₀^∞ e^{−x sinh t} dt`.
pub fn bessel_y0_integral(x: f64) -> f64 {
    let first = simpson(|t| (x * t.sin()).sin(), 0.0, PI, 20_000);
    let t_end = (60.0 / x).asinh();
    let second = simpson(|t| (-x * t.sinh()).exp(), 0.0, t_end, 20_000);
    (first - 2.0 * second) / PI
}
