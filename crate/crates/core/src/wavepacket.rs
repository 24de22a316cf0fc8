//! Gaussian initial states and their expansion in circular-well eigenmodes.
//!
//! Eigenstates are `ψ = N J_|m|(z r/R) e^{imθ} / √(2π)` and coefficients are
//! `a = ⟨ψ_(m,n_r) | ψ₀⟩`, evaluated with Gauss-Legendre panels in `r` and a
//! trapezoid rule in `θ`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::quadrature::GaussLegendre;
use crate::special_functions::j_unchecked;
use crate::spectrum::{
    EigenmodeTable, ModeIndex, SpectrumError, TableExtent, WellConfig, WellKind,
};

/// Width `b = 1/(10√2)` used for the reference runs.
pub const DEFAULT_WIDTH: f64 = 0.070_710_678_118_654_75;

/// Default completeness and moment tolerance.
pub const DEFAULT_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavepacketError {
    #[error("invalid packet: {0}")]
    InvalidPacket(String),
    #[error("degenerate normalisation for m={m} at z={z}: |J_(m+1)(z)| = {value:e}")]
    DegenerateNormalization { m: u32, z: f64, value: f64 },
    #[error("expansion incomplete: residual {residual:e}, {detail}")]
    IncompleteExpansion { residual: f64, detail: String },
    #[error(
        "quadrature did not converge: coefficient change {change:e} after {levels} refinements"
    )]
    Quadrature { change: f64, levels: u32 },
    #[error("coefficient ({m}, {n_r}) is not in the eigenmode table")]
    Consistency { m: i32, n_r: u32 },
    #[error("{0} wells are not supported for packet expansion")]
    UnsupportedWell(WellKind),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// `ψ₀ = (b√π)⁻¹ exp(i p₀·(r − r₀)/ħ) exp(−|r − r₀|²/2b²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub x0: f64,
    pub y0: f64,
    pub p0x: f64,
    pub p0y: f64,
    pub b: f64,
}

impl GaussianPacket {
    pub fn new(x0: f64, y0: f64, p0x: f64, p0y: f64, b: f64) -> Result<Self, WavepacketError> {
        let p = Self {
            x0,
            y0,
            p0x,
            p0y,
            b,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn central(b: f64) -> Self {
        Self {
            x0: 0.0,
            y0: 0.0,
            p0x: 0.0,
            p0y: 0.0,
            b,
        }
    }

    pub fn validate(&self) -> Result<(), WavepacketError> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(WavepacketError::InvalidPacket(format!(
                "width b must be positive, got {}",
                self.b
            )));
        }
        for (name, v) in [
            ("x0", self.x0),
            ("y0", self.y0),
            ("p0x", self.p0x),
            ("p0y", self.p0y),
        ] {
            if !v.is_finite() {
                return Err(WavepacketError::InvalidPacket(format!(
                    "{name} is not finite"
                )));
            }
        }
        Ok(())
    }

    pub fn delta_x(&self) -> f64 {
        self.b / 2f64.sqrt()
    }

    pub fn delta_p(&self, hbar: f64) -> f64 {
        hbar / (2f64.sqrt() * self.b)
    }

    pub fn centroid_radius(&self) -> f64 {
        self.x0.hypot(self.y0)
    }

    pub fn momentum(&self) -> f64 {
        self.p0x.hypot(self.p0y)
    }

    /// Distance from the centroid to the outer wall.
    pub fn edge_distance(&self, config: &WellConfig) -> f64 {
        config.radius - self.centroid_radius()
    }

    /// True when the centroid sits at least `factor · Δx` inside the wall.
    pub fn is_edge_safe(&self, config: &WellConfig, factor: f64) -> bool {
        self.edge_distance(config) >= factor * self.delta_x()
    }

    pub fn amplitude(&self, x: f64, y: f64, hbar: f64) -> Complex64 {
        let dx = x - self.x0;
        let dy = y - self.y0;
        let envelope =
            (-(dx * dx + dy * dy) / (2.0 * self.b * self.b)).exp() / (self.b * PI.sqrt());
        Complex64::from_polar(envelope, (self.p0x * dx + self.p0y * dy) / hbar)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticMoments {
    pub energy: f64,
    pub lz: f64,
    pub lz2: f64,
    pub dl: f64,
}

pub fn analytic_moments(packet: &GaussianPacket, config: &WellConfig) -> AnalyticMoments {
    let hbar = config.hbar;
    let b2 = packet.b * packet.b;
    let p2 = packet.p0x * packet.p0x + packet.p0y * packet.p0y;
    let r2 = packet.x0 * packet.x0 + packet.y0 * packet.y0;
    let energy = (p2 + hbar * hbar / b2) / (2.0 * config.mass);
    let lz = packet.x0 * packet.p0y - packet.y0 * packet.p0x;
    let lz2 = lz * lz + 0.5 * b2 * p2 + hbar * hbar * r2 / (2.0 * b2);
    AnalyticMoments {
        energy,
        lz,
        lz2,
        dl: (lz2 - lz * lz).max(0.0).sqrt(),
    }
}

/// `N = √2 / (R |J_{m+1}(z)|)`, valid when `z` is a zero of `J_m`.
pub fn radial_normalization(m: u32, z: f64, config: &WellConfig) -> Result<f64, WavepacketError> {
    let j = j_unchecked(m + 1, z).abs();
    if !(j >= 1e-14) {
        return Err(WavepacketError::DegenerateNormalization { m, z, value: j });
    }
    Ok(2f64.sqrt() / (config.radius * j))
}

/// Modes kept in an expansion: signed `m` in `[m_min, m_max]` and zeros
/// `z` in `[z_min, z_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub m_min: i32,
    pub m_max: i32,
    pub z_min: f64,
    pub z_max: f64,
}

impl Truncation {
    pub fn symmetric(m_max: u32, z_max: f64) -> Self {
        Self {
            m_min: -(m_max as i32),
            m_max: m_max as i32,
            z_min: 0.0,
            z_max,
        }
    }

    /// Window centred on `⟨L_z⟩/ħ` with half-width `⌈4ΔL/ħ⌉ + 4`, and an
    /// energy band `⟨E⟩ ± 6σ_E` widened by four radial rings.
    pub fn initial(packet: &GaussianPacket, config: &WellConfig) -> Self {
        let mom = analytic_moments(packet, config);
        let hbar = config.hbar;
        let centre = (mom.lz / hbar).round() as i32;
        let half = (4.0 * mom.dl / hbar).ceil() as i32 + 4;
        let sigma_e = energy_spread(packet, config);
        let z_of = |e: f64| {
            if e <= 0.0 {
                0.0
            } else {
                (e / config.radial_energy_unit()).sqrt()
            }
        };
        let rings = 4.0 * PI;
        Self {
            m_min: centre - half,
            m_max: centre + half,
            z_min: (z_of(mom.energy - 6.0 * sigma_e) - rings).max(0.0),
            z_max: z_of(mom.energy + 6.0 * sigma_e) + rings,
        }
    }

    /// One growth step: four more `m` values on each side and four more
    /// radial rings at each end of the band.
    pub fn grow(&self) -> Self {
        let rings = 4.0 * PI;
        Self {
            m_min: self.m_min - 4,
            m_max: self.m_max + 4,
            z_min: (self.z_min - rings).max(0.0),
            z_max: self.z_max + rings,
        }
    }

    pub fn contains(&self, m: i32, z: f64) -> bool {
        m >= self.m_min && m <= self.m_max && z >= self.z_min && z <= self.z_max
    }

    pub fn max_abs_m(&self) -> u32 {
        self.m_min.unsigned_abs().max(self.m_max.unsigned_abs())
    }

    /// True when `table` holds every mode the window asks for.
    pub fn covered_by(&self, table: &EigenmodeTable) -> bool {
        if self.max_abs_m() > table.m_max() {
            return false;
        }
        match table.extent {
            TableExtent::BelowZero { z_max, .. } => z_max >= self.z_max,
            TableExtent::Rectangular { .. } => (self.m_min..=self.m_max).all(|m| {
                table
                    .row(m.unsigned_abs())
                    .last()
                    .is_some_and(|e| e.z >= self.z_max)
            }),
        }
    }
}

/// Standard deviation of `p²/2μ` for the Gaussian momentum distribution.
fn energy_spread(packet: &GaussianPacket, config: &WellConfig) -> f64 {
    let s2 = 0.5 * config.hbar * config.hbar / (packet.b * packet.b);
    let p2 = packet.p0x * packet.p0x + packet.p0y * packet.p0y;
    (4.0 * s2 * s2 + 4.0 * p2 * s2).sqrt() / (2.0 * config.mass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureLevel {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub packet: GaussianPacket,
    pub config: WellConfig,
    pub entries: BTreeMap<ModeIndex, Complex64>,
    /// `|1 − Σ|a|²|`.
    pub residual: f64,
    pub truncation: Truncation,
    pub edge_warning: bool,
    pub quadrature: QuadratureLevel,
}

impl CoefficientSet {
    /// Wraps hand-built coefficients (single modes, test fixtures).
    pub fn from_entries(
        packet: GaussianPacket,
        config: WellConfig,
        entries: BTreeMap<ModeIndex, Complex64>,
    ) -> Self {
        let m_min = entries.keys().map(|k| k.m).min().unwrap_or(0);
        let m_max = entries.keys().map(|k| k.m).max().unwrap_or(0);
        let mut set = Self {
            packet,
            config,
            entries,
            residual: 0.0,
            truncation: Truncation {
                m_min,
                m_max,
                z_min: 0.0,
                z_max: f64::INFINITY,
            },
            edge_warning: false,
            quadrature: QuadratureLevel {
                radial_nodes: 0,
                angular_nodes: 0,
            },
        };
        set.residual = (1.0 - set.norm_sum()).abs();
        set
    }

    pub fn norm_sum(&self) -> f64 {
        self.entries.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn get(&self, m: i32, n_r: u32) -> Option<Complex64> {
        self.entries.get(&ModeIndex::new(m, n_r)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMoments {
    pub energy: f64,
    pub lz: f64,
    pub lz2: f64,
    pub norm: f64,
}

pub fn spectral_moments(
    coeffs: &CoefficientSet,
    table: &EigenmodeTable,
) -> Result<SpectralMoments, WavepacketError> {
    let hbar = table.config.hbar;
    let mut out = SpectralMoments {
        energy: 0.0,
        lz: 0.0,
        lz2: 0.0,
        norm: 0.0,
    };
    for (idx, a) in &coeffs.entries {
        let e = table
            .energy(idx.m, idx.n_r)
            .ok_or(WavepacketError::Consistency {
                m: idx.m,
                n_r: idx.n_r,
            })?;
        let w = a.norm_sqr();
        let l = idx.m as f64 * hbar;
        out.norm += w;
        out.energy += w * e;
        out.lz += w * l;
        out.lz2 += w * l * l;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpandOptions {
    pub tol: f64,
    pub edge_factor: f64,
    /// Absolute coefficient change accepted between quadrature doublings.
    pub coefficient_tol: f64,
    pub max_growth: u32,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            edge_factor: 5.0,
            coefficient_tol: 1e-10,
            max_growth: 40,
        }
    }
}

pub fn expand_packet(
    packet: &GaussianPacket,
    table: &EigenmodeTable,
    tol: f64,
) -> Result<CoefficientSet, WavepacketError> {
    expand_packet_with(
        packet,
        table,
        &ExpandOptions {
            tol,
            ..ExpandOptions::default()
        },
    )
}

/// Grows the truncation until completeness and the energy and angular
/// momentum moments agree with their closed forms to `tol`.
pub fn expand_packet_with(
    packet: &GaussianPacket,
    table: &EigenmodeTable,
    options: &ExpandOptions,
) -> Result<CoefficientSet, WavepacketError> {
    if !(options.tol > 0.0) {
        return Err(WavepacketError::InvalidPacket(format!(
            "tolerance must be positive, got {}",
            options.tol
        )));
    }
    let config = table.config;
    let analytic = analytic_moments(packet, &config);
    let tol = options.tol;
    let mut truncation = Truncation::initial(packet, &config);
    let mut last_detail = String::new();
    let mut last_residual = f64::NAN;
    for _ in 0..=options.max_growth {
        let covered = truncation.covered_by(table);
        let set = project_packet(packet, table, &truncation, options)?;
        let s = spectral_moments(&set, table)?;
        let checks = [
            ("norm", s.norm, 1.0),
            ("energy", s.energy, analytic.energy),
            ("Lz", s.lz, analytic.lz),
            ("Lz2", s.lz2, analytic.lz2),
        ];
        let failed: Vec<String> = checks
            .iter()
            .filter(|(_, got, want)| (got - want).abs() > tol * want.abs().max(1.0))
            .map(|(name, got, want)| format!("{name}: {got} vs {want}"))
            .collect();
        if failed.is_empty() {
            return Ok(set);
        }
        last_detail = failed.join("; ");
        last_residual = set.residual;
        if !covered {
            return Err(WavepacketError::IncompleteExpansion {
                residual: set.residual,
                detail: format!("table exhausted at {truncation:?}: {last_detail}"),
            });
        }
        truncation = truncation.grow();
    }
    Err(WavepacketError::IncompleteExpansion {
        residual: last_residual,
        detail: format!("growth limit reached: {last_detail}"),
    })
}

/// Quadrature-converged coefficients for a fixed truncation. Node counts
/// double until no coefficient moves by more than `coefficient_tol`.
pub fn project_packet(
    packet: &GaussianPacket,
    table: &EigenmodeTable,
    truncation: &Truncation,
    options: &ExpandOptions,
) -> Result<CoefficientSet, WavepacketError> {
    packet.validate()?;
    let config = table.config;
    if config.kind != WellKind::Circular {
        return Err(WavepacketError::UnsupportedWell(config.kind));
    }
    let hbar = config.hbar;
    let big_r = config.radius;
    let rho0 = packet.centroid_radius();
    let r_lo = (rho0 - 9.0 * packet.b).max(0.0);
    let r_hi = (rho0 + 9.0 * packet.b).min(big_r);
    if r_hi <= r_lo {
        return Err(WavepacketError::InvalidPacket(
            "packet lies outside the well".into(),
        ));
    }

    let sigma_p = packet.delta_p(hbar) / hbar;
    let p_max = packet.momentum() / hbar + 8.0 * sigma_p;
    let k_total = truncation.z_max / big_r + p_max;
    let h = (12.0 / k_total).min(1.5 * packet.b);
    let mut panels = ((r_hi - r_lo) / h).ceil().max(1.0) as usize;
    let kappa = r_hi * rho0 / (packet.b * packet.b);
    let content = truncation.max_abs_m() as f64 + r_hi * p_max + 8.0 * kappa.sqrt() + 16.0;
    let mut n_theta = ((2.0 * content).ceil() as usize)
        .next_power_of_two()
        .max(32);

    let gl = GaussLegendre::new(16);
    let mut previous = project_at(packet, table, truncation, &gl, r_lo, r_hi, panels, n_theta);
    const MAX_LEVELS: u32 = 5;
    let mut change = f64::INFINITY;
    for _ in 0..MAX_LEVELS {
        panels *= 2;
        n_theta *= 2;
        let current = project_at(packet, table, truncation, &gl, r_lo, r_hi, panels, n_theta);
        change = previous
            .iter()
            .zip(&current)
            .map(|((_, a), (_, b))| (a - b).norm())
            .fold(0.0, f64::max);
        if change < options.coefficient_tol {
            let entries: BTreeMap<_, _> = current.into_iter().collect();
            let norm: f64 = entries.values().map(|a| a.norm_sqr()).sum();
            return Ok(CoefficientSet {
                packet: *packet,
                config,
                entries,
                residual: (1.0 - norm).abs(),
                truncation: *truncation,
                edge_warning: !packet.is_edge_safe(&config, options.edge_factor),
                quadrature: QuadratureLevel {
                    radial_nodes: panels * gl.len(),
                    angular_nodes: n_theta,
                },
            });
        }
        previous = current;
    }
    Err(WavepacketError::Quadrature {
        change,
        levels: MAX_LEVELS,
    })
}

/// Coefficients at one quadrature level, ordered by `(m, n_r)`.
#[allow(clippy::too_many_arguments)]
fn project_at(
    packet: &GaussianPacket,
    table: &EigenmodeTable,
    truncation: &Truncation,
    gl: &GaussLegendre,
    r_lo: f64,
    r_hi: f64,
    panels: usize,
    n_theta: usize,
) -> Vec<(ModeIndex, Complex64)> {
    let config = &table.config;
    let hbar = config.hbar;
    let (rs, ws) = gl.composite(r_lo, r_hi, panels);
    let m_min = truncation.m_min;
    let n_m = (truncation.m_max - truncation.m_min + 1) as usize;

    let dtheta = 2.0 * PI / n_theta as f64;
    let trig: Vec<(f64, f64)> = (0..n_theta)
        .map(|j| (j as f64 * dtheta).sin_cos())
        .collect();
    let scale = dtheta / (2.0 * PI).sqrt();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_theta);

    // g[i][k] = (2π)^{-1/2} ∫ e^{-i m θ} ψ₀(r_i, θ) dθ with m = m_min + k.
    let g: Vec<Vec<Complex64>> = rs
        .par_iter()
        .map(|&r| {
            let mut buf: Vec<Complex64> = trig
                .iter()
                .map(|&(s, c)| packet.amplitude(r * c, r * s, hbar))
                .collect();
            fft.process(&mut buf);
            (0..n_m)
                .map(|k| {
                    let m = (m_min + k as i32) as i64;
                    buf[m.rem_euclid(n_theta as i64) as usize] * scale
                })
                .collect()
        })
        .collect();

    let per_m: Vec<Vec<(ModeIndex, Complex64)>> = (0..n_m)
        .into_par_iter()
        .map(|k| {
            let m = m_min + k as i32;
            let m_abs = m.unsigned_abs();
            // Radial weights r·w·g_m(r); nodes with negligible weight are skipped.
            let weighted: Vec<(f64, Complex64)> = rs
                .iter()
                .zip(&ws)
                .zip(&g)
                .map(|((&r, &w), gi)| (r, gi[k] * (w * r)))
                .collect();
            let peak = weighted.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
            let active: Vec<(f64, Complex64)> = weighted
                .into_iter()
                .filter(|(_, v)| v.norm() > 1e-18 * peak)
                .collect();
            let x_min = negligible_bessel_argument(m_abs);
            table
                .row(m_abs)
                .iter()
                .filter(|e| truncation.contains(m, e.z))
                .map(|e| {
                    let k_r = e.z / config.radius;
                    let first = active.partition_point(|&(r, _)| k_r * r < x_min);
                    let sum: Complex64 = if peak == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        active[first..]
                            .iter()
                            .map(|&(r, v)| v * j_unchecked(m_abs, k_r * r))
                            .sum()
                    };
                    (ModeIndex::new(m, e.n_r), sum * e.norm)
                })
                .collect()
        })
        .collect();
    per_m.into_iter().flatten().collect()
}

/// Below this argument `J_m(x) < e^{-40}`, from the Debye bound
/// `J_m(m sech α) <= e^{-m(α − tanh α)}`.
fn negligible_bessel_argument(m: u32) -> f64 {
    if m < 2 {
        return 0.0;
    }
    let mf = m as f64;
    let target = 40.0 / mf;
    // Solve α − tanh α = target by Newton; the left side is increasing.
    let mut a = (3.0 * target).cbrt().max(target + 1.0);
    for _ in 0..60 {
        let t = a.tanh();
        let f = a - t - target;
        let step = f / (t * t);
        a -= step;
        if step.abs() < 1e-12 * a {
            break;
        }
    }
    mf / a.cosh()
}
