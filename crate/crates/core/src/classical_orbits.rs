//! Periodic orbits of the circular billiard and the classical periods hidden
//! in the quantum spectrum.

use std::f64::consts::PI;

use thiserror::Error;

use crate::spectrum::{EigenmodeTable, WellConfig, WellKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("no periodic orbit (p={p}, q={q}); need p > 2q >= 2 or the diameter (2, 1)")]
    InvalidOrbit { p: u32, q: u32 },
    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),
    #[error("argument {0} outside [0, 1]")]
    Domain(f64),
    #[error("no classical motion: R_min = {r_min} >= R = {radius}")]
    NoClassicalMotion { r_min: f64, radius: f64 },
    #[error("energy must be positive, got {0}")]
    InvalidEnergy(f64),
    #[error("m = 0 has no centrifugal turning point")]
    ZeroAngularMomentum,
    #[error("mode (m={m}, n_r={n_r}) needed for differencing is outside the table")]
    TableBounds { m: i32, n_r: i64 },
    #[error("WKB quantization unsupported for {0} wells")]
    UnsupportedWell(WellKind),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicOrbit {
    pub p: u32,
    pub q: u32,
    pub length: f64,
    pub r_min: f64,
    /// `L / v₀`, set once an energy is chosen.
    pub period: Option<f64>,
}

/// `L = 2pR sin(πq/p)`, `R_min = R cos(πq/p)`. The diameter bounce `(2, 1)`
/// is accepted as the `R_min = 0` limit.
pub fn orbit_geometry(p: u32, q: u32, radius: f64) -> Result<PeriodicOrbit, OrbitError> {
    if !(q >= 1 && (p > 2 * q || (p, q) == (2, 1))) {
        return Err(OrbitError::InvalidOrbit { p, q });
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(OrbitError::InvalidRadius(radius));
    }
    let angle = PI * q as f64 / p as f64;
    Ok(PeriodicOrbit {
        p,
        q,
        length: 2.0 * p as f64 * radius * angle.sin(),
        r_min: radius * angle.cos(),
        period: None,
    })
}

/// Orbit geometry with the period at energy `energy`.
pub fn periodic_orbit(
    p: u32,
    q: u32,
    energy: f64,
    config: &WellConfig,
) -> Result<PeriodicOrbit, OrbitError> {
    let orbit = orbit_geometry(p, q, config.radius)?;
    Ok(PeriodicOrbit {
        period: Some(closed_orbit_period(p, q, energy, config)?),
        ..orbit
    })
}

/// `sec⁻¹(y) = arccos(1/y)` with the reciprocal clamped into `[−1, 1]`.
fn arcsec_of_reciprocal(x: f64) -> f64 {
    let c = if (x - 1.0).abs() <= 1e-14 {
        1.0
    } else if (x + 1.0).abs() <= 1e-14 {
        -1.0
    } else {
        x
    };
    c.clamp(-1.0, 1.0).acos()
}

/// `f(x) = √(1 − x²) − x sec⁻¹(1/x)` on `[0, 1]`.
pub fn centrifugal_action(x: f64) -> Result<f64, OrbitError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(OrbitError::Domain(x));
    }
    if x < 1e-3 {
        return Ok(centrifugal_action_series(x));
    }
    Ok((1.0 - x * x).max(0.0).sqrt() - x * arcsec_of_reciprocal(x))
}

/// Small-`x` expansion of [`centrifugal_action`] through `x⁸`.
pub fn centrifugal_action_series(x: f64) -> f64 {
    let x2 = x * x;
    1.0 - 0.5 * PI * x + x2 * (0.5 + x2 * (1.0 / 24.0 + x2 * (1.0 / 80.0 + x2 * 5.0 / 896.0)))
}

/// `q/p = (1/π) sec⁻¹(R / R_min)` with `R_min = |m|ħ/√(2μE)`.
pub fn wkb_period_ratio(energy: f64, m: i32, config: &WellConfig) -> Result<f64, OrbitError> {
    if !(energy > 0.0) {
        return Err(OrbitError::InvalidEnergy(energy));
    }
    if m == 0 {
        return Err(OrbitError::ZeroAngularMomentum);
    }
    let r_min = m.unsigned_abs() as f64 * config.hbar / (2.0 * config.mass * energy).sqrt();
    if r_min >= config.radius {
        return Err(OrbitError::NoClassicalMotion {
            r_min,
            radius: config.radius,
        });
    }
    Ok(arcsec_of_reciprocal(r_min / config.radius) / PI)
}

/// Energy at which `|m|` has its turning point at `r_min`.
pub fn energy_for_turning_point(m: i32, r_min: f64, config: &WellConfig) -> f64 {
    let l = m.unsigned_abs() as f64 * config.hbar;
    l * l / (2.0 * config.mass * r_min * r_min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPeriods {
    pub t_nr: f64,
    /// Infinite for `m = 0`, where `∂E/∂m` vanishes by symmetry.
    pub t_m: f64,
}

/// `2πħ / (∂E/∂n_r)` and `2πħ / (∂E/∂m)` by unit-step central differences.
pub fn classical_periods(
    table: &EigenmodeTable,
    m: i32,
    n_r: u32,
) -> Result<ClassicalPeriods, OrbitError> {
    let energy = |mm: i32, nn: i64| {
        u32::try_from(nn)
            .ok()
            .and_then(|n| table.energy(mm, n))
            .ok_or(OrbitError::TableBounds { m: mm, n_r: nn })
    };
    let n = n_r as i64;
    let de_dn = 0.5 * (energy(m, n + 1)? - energy(m, n - 1)?);
    let de_dm = 0.5 * (energy(m + 1, n)? - energy(m - 1, n)?);
    let h = 2.0 * PI * table.config.hbar;
    Ok(ClassicalPeriods {
        t_nr: h / de_dn,
        t_m: if de_dm == 0.0 {
            f64::INFINITY
        } else {
            h / de_dm.abs()
        },
    })
}

/// Both closed forms of the orbit period: `L / v₀` and
/// `2p √(R² − R_min²) √(μ / 2E)`.
pub fn closed_orbit_period_forms(
    p: u32,
    q: u32,
    energy: f64,
    config: &WellConfig,
) -> Result<(f64, f64), OrbitError> {
    let orbit = orbit_geometry(p, q, config.radius)?;
    if !(energy > 0.0) {
        return Err(OrbitError::InvalidEnergy(energy));
    }
    let v0 = (2.0 * energy / config.mass).sqrt();
    let r = config.radius;
    let chord = (r * r - orbit.r_min * orbit.r_min).max(0.0).sqrt();
    Ok((
        orbit.length / v0,
        2.0 * p as f64 * chord * (config.mass / (2.0 * energy)).sqrt(),
    ))
}

pub fn closed_orbit_period(
    p: u32,
    q: u32,
    energy: f64,
    config: &WellConfig,
) -> Result<f64, OrbitError> {
    let (a, b) = closed_orbit_period_forms(p, q, energy, config)?;
    debug_assert!((a - b).abs() <= 1e-12 * a.abs());
    Ok(a)
}

/// WKB wavenumber from `∫ k_r dr = (n_r + c)π`: `c = 3/4` with a soft
/// centrifugal turning point, `c = 1` when the inner wall of an annulus is
/// hit first.
pub fn wkb_wavenumber(m: u32, n_r: u32, config: &WellConfig) -> Result<f64, OrbitError> {
    let (outer, inner) = match config.kind {
        WellKind::Circular | WellKind::HalfCircular => (config.radius, 0.0),
        WellKind::Annular => (config.radius, config.inner_radius),
        other => return Err(OrbitError::UnsupportedWell(other)),
    };
    let mf = m as f64;
    // u√(1 − (m/u)²) − m arccos(m/u), zero at u = m.
    let action = |u: f64| {
        if u <= mf {
            0.0
        } else {
            (u * u - mf * mf).sqrt() - mf * (mf / u).clamp(-1.0, 1.0).acos()
        }
    };
    let g = |k: f64| {
        let hard_inner = k * inner > mf;
        let c = if hard_inner { 1.0 } else { 0.75 };
        (action(k * outer) - action(k * inner)) / PI - n_r as f64 - c
    };
    let step = PI / (outer - inner);
    let mut lo = mf / outer;
    let mut hi = lo + step;
    while g(hi) <= 0.0 {
        lo = hi;
        hi += step;
    }
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
