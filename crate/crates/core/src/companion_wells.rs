//! Wells with purely quadratic spectra, where revivals are exact: the 1D
//! infinite well, the 2D square (product autocorrelation) and the
//! equilateral triangle.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::dynamics::{AutocorrelationSeries, DynamicsError, PhaseSum};
use crate::quadrature::GaussLegendre;
use crate::spectrum::{time_scales, triangle_energy, SpectrumError, WellConfig, WellKind};

/// 1D packet width used by the companion scenarios, `b = 0.05/√2`.
pub const DEFAULT_ONED_WIDTH: f64 = 0.035_355_339_059_327_38;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompanionError {
    #[error("invalid quantum number: {0}")]
    InvalidQuantumNumber(String),
    #[error("invalid packet: {0}")]
    InvalidPacket(String),
    #[error("expansion incomplete at n_max={n_max}: residual {residual:e}")]
    IncompleteExpansion { residual: f64, n_max: u32 },
    #[error("quadrature did not converge: coefficient change {0:e}")]
    Quadrature(f64),
    #[error("expansions use different wells")]
    ConfigMismatch,
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// `E_n = ħ²π²n²/(2μL²)`.
pub fn oned_energy(n: u32, config: &WellConfig) -> Result<f64, CompanionError> {
    if n < 1 {
        return Err(CompanionError::InvalidQuantumNumber(format!(
            "1D levels start at n = 1, got {n}"
        )));
    }
    Ok(config.side_energy_unit() * (n as f64).powi(2))
}

/// `T_rev = 4μL²/(ħπ)`.
pub fn oned_revival_time(config: &WellConfig) -> f64 {
    4.0 * config.mass * config.side * config.side / (config.hbar * PI)
}

/// `Ñ(n) = n(n − 1)/2`.
pub fn odd_level_count(n: u32) -> u64 {
    let n = n as u64;
    n * (n - 1) / 2
}

/// Energy of level `2n − 1` written as `(2πħ/T_rev)·8·(Ñ(n) + 1/8)`.
pub fn oned_odd_energy(n: u32, config: &WellConfig) -> Result<f64, CompanionError> {
    if n < 1 {
        return Err(CompanionError::InvalidQuantumNumber(format!(
            "odd levels start at n = 1, got {n}"
        )));
    }
    let unit = 2.0 * PI * config.hbar / oned_revival_time(config);
    Ok(unit * 8.0 * (odd_level_count(n) as f64 + 0.125))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneDimPacket {
    pub x0: f64,
    pub p0: f64,
    pub b: f64,
}

impl OneDimPacket {
    pub fn new(x0: f64, p0: f64, b: f64) -> Self {
        Self { x0, p0, b }
    }

    pub fn amplitude(&self, x: f64, hbar: f64) -> Complex64 {
        let d = x - self.x0;
        let env = (-(d * d) / (2.0 * self.b * self.b)).exp() / (self.b * PI.sqrt()).sqrt();
        Complex64::from_polar(env, self.p0 * d / hbar)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneDimPacketExpansion {
    pub packet: OneDimPacket,
    pub config: WellConfig,
    /// `a_n` for `n = 1..=n_max`, stored at index `n − 1`.
    pub coefficients: Vec<Complex64>,
    pub residual: f64,
    /// Centroid closer than `5Δx` to a wall.
    pub edge_warning: bool,
}

impl OneDimPacketExpansion {
    pub fn coefficient(&self, n: u32) -> Option<Complex64> {
        self.coefficients.get((n as usize).checked_sub(1)?).copied()
    }

    pub fn norm_sum(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn phase_sum(&self) -> PhaseSum {
        let unit = self.config.side_energy_unit();
        let (weights, energies) = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, a)| (a.norm_sqr(), unit * ((i + 1) as f64).powi(2)))
            .unzip();
        PhaseSum::new(weights, energies, self.config.hbar)
    }
}

/// Coefficients against `√(2/L) sin(nπx/L)` by composite Gauss-Legendre
/// over `x₀ ± 9b` clipped to the well.
pub fn oned_expand(
    packet: OneDimPacket,
    config: &WellConfig,
    n_max: u32,
    tol: f64,
) -> Result<OneDimPacketExpansion, CompanionError> {
    config.validate()?;
    let l = config.side;
    if !(packet.b > 0.0 && packet.b.is_finite()) {
        return Err(CompanionError::InvalidPacket(format!(
            "width must be positive, got {}",
            packet.b
        )));
    }
    if !(packet.x0 > 0.0 && packet.x0 < l) || !packet.p0.is_finite() {
        return Err(CompanionError::InvalidPacket(format!(
            "centroid {} must lie inside (0, {l})",
            packet.x0
        )));
    }
    if n_max < 1 {
        return Err(CompanionError::InvalidQuantumNumber(
            "n_max must be >= 1".into(),
        ));
    }
    let lo = (packet.x0 - 9.0 * packet.b).max(0.0);
    let hi = (packet.x0 + 9.0 * packet.b).min(l);
    let k_total = n_max as f64 * PI / l + packet.p0.abs() / config.hbar + 8.0 / packet.b;
    let mut panels = (((hi - lo) * k_total / 8.0).ceil() as usize).max(4);
    let gl = GaussLegendre::new(16);
    let mut previous = project_1d(&packet, config, &gl, lo, hi, panels, n_max);
    let mut change = f64::INFINITY;
    for _ in 0..6 {
        panels *= 2;
        let current = project_1d(&packet, config, &gl, lo, hi, panels, n_max);
        change = previous
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        previous = current;
        if change < 1e-13 {
            break;
        }
    }
    if change >= 1e-13 {
        return Err(CompanionError::Quadrature(change));
    }
    let norm: f64 = previous.iter().map(|a| a.norm_sqr()).sum();
    let residual = (1.0 - norm).abs();
    if residual > tol {
        return Err(CompanionError::IncompleteExpansion { residual, n_max });
    }
    let dx = packet.b / 2f64.sqrt();
    Ok(OneDimPacketExpansion {
        packet,
        config: *config,
        coefficients: previous,
        residual,
        edge_warning: packet.x0.min(l - packet.x0) < 5.0 * dx,
    })
}

fn project_1d(
    packet: &OneDimPacket,
    config: &WellConfig,
    gl: &GaussLegendre,
    lo: f64,
    hi: f64,
    panels: usize,
    n_max: u32,
) -> Vec<Complex64> {
    let l = config.side;
    let (xs, ws) = gl.composite(lo, hi, panels);
    let amp = (2.0 / l).sqrt();
    let samples: Vec<Complex64> = xs
        .iter()
        .zip(&ws)
        .map(|(&x, &w)| packet.amplitude(x, config.hbar) * (w * amp))
        .collect();
    (1..=n_max)
        .map(|n| {
            let k = n as f64 * PI / l;
            xs.iter()
                .zip(&samples)
                .map(|(&x, &s)| s * (k * x).sin())
                .sum()
        })
        .collect()
}

pub fn oned_autocorrelation(expansion: &OneDimPacketExpansion, t: f64) -> Complex64 {
    expansion.phase_sum().at(t)
}

pub fn oned_series(
    expansion: &OneDimPacketExpansion,
    t_max: f64,
    dt: f64,
) -> Result<AutocorrelationSeries, DynamicsError> {
    expansion.phase_sum().series(t_max, dt)
}

/// `A(t) = A_x(t) A_y(t)` for a separable packet in the square well.
pub fn square2d_autocorrelation(
    x: &OneDimPacketExpansion,
    y: &OneDimPacketExpansion,
    t: f64,
) -> Result<Complex64, CompanionError> {
    let same =
        |a: &WellConfig, b: &WellConfig| a.hbar == b.hbar && a.mass == b.mass && a.side == b.side;
    if !same(&x.config, &y.config) {
        return Err(CompanionError::ConfigMismatch);
    }
    Ok(oned_autocorrelation(x, t) * oned_autocorrelation(y, t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleReport {
    pub p_max: u32,
    pub levels_checked: usize,
    /// Largest distance of `E T_rev/ħ` from a multiple of `2π`.
    pub max_residual: f64,
    pub worst: (u32, u32),
    pub passed: bool,
}

pub const TRIANGLE_PHASE_TOL: f64 = 1e-9;

/// Checks `E(p,q) T_rev/ħ ≡ 0 (mod 2π)` for every level with `p <= p_max`.
pub fn triangle_revival_phase_check(
    p_max: u32,
    config: &WellConfig,
) -> Result<TriangleReport, CompanionError> {
    if p_max < 2 {
        return Err(CompanionError::InvalidQuantumNumber(format!(
            "p_max must be >= 2, got {p_max}"
        )));
    }
    let tri = WellConfig {
        kind: WellKind::EquilateralTriangle,
        ..*config
    };
    let t_rev = time_scales(&tri)
        .t_rev_exact
        .expect("triangle wells have an exact revival time");
    let mut report = TriangleReport {
        p_max,
        levels_checked: 0,
        max_residual: 0.0,
        worst: (2, 1),
        passed: true,
    };
    for p in 2..=p_max {
        for q in 1..=p / 2 {
            let e = triangle_energy(p, q, &tri)?.energy;
            let turns = e * t_rev / tri.hbar / (2.0 * PI);
            let residual = 2.0 * PI * (turns - turns.round()).abs();
            report.levels_checked += 1;
            if residual > report.max_residual {
                report.max_residual = residual;
                report.worst = (p, q);
            }
        }
    }
    report.passed = report.max_residual < TRIANGLE_PHASE_TOL;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> WellConfig {
        // ħ = 2μ = L = 1
        WellConfig {
            kind: WellKind::Square1d,
            ..WellConfig::default()
        }
    }

    #[test]
    fn energies_and_odd_rewrite() {
        let cfg = unit();
        assert!((oned_energy(1, &cfg).unwrap() - PI * PI).abs() < 1e-12);
        assert!(oned_energy(0, &cfg).is_err());
        assert_eq!(8 * odd_level_count(3) + 1, 25);
        for n in 1..20 {
            let direct = oned_energy(2 * n - 1, &cfg).unwrap();
            let rewritten = oned_odd_energy(n, &cfg).unwrap();
            assert!((direct - rewritten).abs() < 1e-12 * direct);
        }
        assert!((oned_revival_time(&cfg) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn centre_packet_kills_even_levels() {
        let cfg = unit();
        let ex = oned_expand(
            OneDimPacket::new(0.5, 0.0, DEFAULT_ONED_WIDTH),
            &cfg,
            200,
            1e-4,
        )
        .unwrap();
        for n in (2..=200).step_by(2) {
            assert!(ex.coefficient(n).unwrap().norm() < 1e-10, "n={n}");
        }
        assert!(ex.norm_sum() > 0.9999);
        let t = oned_revival_time(&cfg);
        assert!(oned_autocorrelation(&ex, t / 8.0).norm() > 0.999);
    }

    #[test]
    fn outside_packet_rejected() {
        let cfg = unit();
        assert!(oned_expand(OneDimPacket::new(1.2, 0.0, 0.05), &cfg, 50, 1e-4).is_err());
        assert!(oned_expand(OneDimPacket::new(0.5, 0.0, 0.0), &cfg, 50, 1e-4).is_err());
        assert!(matches!(
            oned_expand(OneDimPacket::new(0.5, 0.0, 0.05), &cfg, 3, 1e-4),
            Err(CompanionError::IncompleteExpansion { .. })
        ));
    }

    #[test]
    fn square_product_requires_same_well() {
        let cfg = unit();
        let a = oned_expand(
            OneDimPacket::new(0.5, 0.0, DEFAULT_ONED_WIDTH),
            &cfg,
            120,
            1e-4,
        )
        .unwrap();
        let mut b = a.clone();
        b.config.side = 2.0;
        assert!(square2d_autocorrelation(&a, &b, 0.1).is_err());
        let a0 = square2d_autocorrelation(&a, &a, 0.0).unwrap();
        assert!((a0.re - a.norm_sum().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn triangle_phases_integral() {
        let r = triangle_revival_phase_check(7, &WellConfig::default()).unwrap();
        assert!(r.passed);
        assert_eq!(
            r.levels_checked,
            (2..=7).map(|p| p / 2).sum::<u32>() as usize
        );
        assert!(triangle_revival_phase_check(1, &WellConfig::default()).is_err());
    }
}
