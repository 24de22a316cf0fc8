//! Autocorrelation `A(t) = Σ |a|² e^{−iEt/ħ}`, revival detection and the
//! classical short-time peak.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::classical_orbits::{orbit_geometry, OrbitError};
use crate::spectrum::{EigenmodeTable, TimeScales, WellConfig};
use crate::wavepacket::{CoefficientSet, GaussianPacket};

/// Weights below this are ignored when bounding the fastest phase.
pub const NEGLIGIBLE_WEIGHT: f64 = 1e-12;

pub const M0_THRESHOLD: f64 = 0.5;
pub const GENERAL_THRESHOLD: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("time step {dt:e} under-resolves the fastest phase; need dt <= {limit:e}")]
    UnderResolved { dt: f64, limit: f64 },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("coefficient ({m}, {n_r}) is not in the eigenmode table")]
    Consistency { m: i32, n_r: u32 },
    #[error("coefficients were expanded for a different well configuration")]
    ConfigMismatch,
    #[error("classical period undefined: {0}")]
    UndefinedPeriod(String),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    M0Revival,
    GeneralRevival,
    ClassicalPeak,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::M0Revival => "m0_revival",
            EventKind::GeneralRevival => "general_revival",
            EventKind::ClassicalPeak => "classical_peak",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "m0_revival" => Ok(EventKind::M0Revival),
            "general_revival" => Ok(EventKind::GeneralRevival),
            "classical_peak" => Ok(EventKind::ClassicalPeak),
            other => Err(format!("unknown event kind '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalEvent {
    pub t_peak: f64,
    pub magnitude2: f64,
    /// `arg A` at the peak, in `(−π, π]`.
    pub phase: f64,
    pub predicted_t: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AutocorrelationSeries {
    pub t_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub events: Vec<RevivalEvent>,
}

impl AutocorrelationSeries {
    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    pub fn abs2(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|a| a.norm_sqr())
    }
}

/// `Σ_k w_k e^{−i E_k t/ħ}` with non-negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSum {
    weights: Vec<f64>,
    energies: Vec<f64>,
    hbar: f64,
}

impl PhaseSum {
    pub fn new(weights: Vec<f64>, energies: Vec<f64>, hbar: f64) -> Self {
        assert_eq!(weights.len(), energies.len());
        Self {
            weights,
            energies,
            hbar,
        }
    }

    /// Merges the degenerate `±m` pairs of a circular-well expansion.
    pub fn from_coefficients(
        coeffs: &CoefficientSet,
        table: &EigenmodeTable,
    ) -> Result<Self, DynamicsError> {
        if coeffs.config != table.config {
            return Err(DynamicsError::ConfigMismatch);
        }
        let mut merged: BTreeMap<(u32, u32), (f64, f64)> = BTreeMap::new();
        for (idx, a) in &coeffs.entries {
            let e = table
                .energy(idx.m, idx.n_r)
                .ok_or(DynamicsError::Consistency {
                    m: idx.m,
                    n_r: idx.n_r,
                })?;
            merged
                .entry((idx.m.unsigned_abs(), idx.n_r))
                .or_insert((0.0, e))
                .0 += a.norm_sqr();
        }
        let (weights, energies) = merged.into_values().unzip();
        Ok(Self::new(weights, energies, table.config.hbar))
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn at(&self, t: f64) -> Complex64 {
        let s = t / self.hbar;
        self.weights
            .iter()
            .zip(&self.energies)
            .map(|(&w, &e)| Complex64::from_polar(w, -e * s))
            .sum()
    }

    /// Largest energy carrying more than [`NEGLIGIBLE_WEIGHT`].
    pub fn max_energy(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.energies)
            .filter(|(&w, _)| w > NEGLIGIBLE_WEIGHT)
            .map(|(_, &e)| e.abs())
            .fold(0.0, f64::max)
    }

    /// `πħ / (4 E_max)`.
    pub fn max_time_step(&self) -> f64 {
        let e = self.max_energy();
        if e == 0.0 {
            f64::INFINITY
        } else {
            PI * self.hbar / (4.0 * e)
        }
    }

    /// Uniform grid `0, dt, …` up to `t_max`.
    pub fn series(&self, t_max: f64, dt: f64) -> Result<AutocorrelationSeries, DynamicsError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(DynamicsError::InvalidGrid(format!(
                "dt must be positive, got {dt}"
            )));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(DynamicsError::InvalidGrid(format!(
                "t_max must be positive, got {t_max}"
            )));
        }
        let limit = self.max_time_step();
        if dt > limit {
            return Err(DynamicsError::UnderResolved { dt, limit });
        }
        let n = (t_max / dt * (1.0 + 1e-12)).floor() as usize + 1;
        let t_grid: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
        let values = t_grid.par_iter().map(|&t| self.at(t)).collect();
        Ok(AutocorrelationSeries {
            t_grid,
            values,
            events: Vec::new(),
        })
    }
}

pub fn autocorrelation(
    coeffs: &CoefficientSet,
    table: &EigenmodeTable,
    t: f64,
) -> Result<Complex64, DynamicsError> {
    Ok(PhaseSum::from_coefficients(coeffs, table)?.at(t))
}

pub fn evolve_series(
    coeffs: &CoefficientSet,
    table: &EigenmodeTable,
    t_max: f64,
    dt: f64,
) -> Result<AutocorrelationSeries, DynamicsError> {
    PhaseSum::from_coefficients(coeffs, table)?.series(t_max, dt)
}

/// `T₀/400`, reduced when the spectrum needs a finer step.
pub fn default_time_step(sum: &PhaseSum, config: &WellConfig) -> f64 {
    (config.t0() / 400.0).min(sum.max_time_step())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalWindow {
    pub center: f64,
    pub half_width: f64,
    pub kind: EventKind,
    pub predicted_t: f64,
}

impl RevivalWindow {
    pub fn new(center: f64, half_width: f64, kind: EventKind) -> Self {
        Self {
            center,
            half_width,
            kind,
            predicted_t: center,
        }
    }

    pub fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width
    }
}

/// Windows at `N·4T₀` (half-width `T₀/2`) and spanning
/// `[2π²T₀ − T₀, 20T₀ + T₀]·N`, kept when they end before `t_max`.
pub fn default_windows(scales: &TimeScales, t_max: f64) -> Vec<RevivalWindow> {
    let t0 = scales.t0;
    let mut out = Vec::new();
    let mut n = 1.0;
    while n * scales.t_rev_m0 + 0.5 * t0 <= t_max {
        out.push(RevivalWindow::new(
            n * scales.t_rev_m0,
            0.5 * t0,
            EventKind::M0Revival,
        ));
        n += 1.0;
    }
    let mut n = 1.0;
    loop {
        let lo = (n * scales.t_rev_general - t0).min(20.0 * n * t0 - t0);
        let hi = (n * scales.t_rev_general + t0).max(20.0 * n * t0 + t0);
        if hi > t_max {
            break;
        }
        out.push(RevivalWindow {
            center: 0.5 * (lo + hi),
            half_width: 0.5 * (hi - lo),
            kind: EventKind::GeneralRevival,
            predicted_t: 20.0 * n * t0,
        });
        n += 1.0;
    }
    out
}

/// Largest `|A|²` in each window, refined by a three-point parabola.
pub fn detect_revivals(
    series: &AutocorrelationSeries,
    windows: &[RevivalWindow],
    threshold: f64,
) -> Vec<RevivalEvent> {
    windows
        .iter()
        .filter_map(|w| peak_in_window(series, w))
        .filter(|e| e.magnitude2 >= threshold)
        .collect()
}

/// Default windows with the kind-specific thresholds.
pub fn detect_default_revivals(
    series: &AutocorrelationSeries,
    scales: &TimeScales,
) -> Vec<RevivalEvent> {
    let t_max = series.t_grid.last().copied().unwrap_or(0.0);
    default_windows(scales, t_max)
        .iter()
        .filter_map(|w| {
            let threshold = match w.kind {
                EventKind::GeneralRevival => GENERAL_THRESHOLD,
                _ => M0_THRESHOLD,
            };
            peak_in_window(series, w).filter(|e| e.magnitude2 >= threshold)
        })
        .collect()
}

fn peak_in_window(series: &AutocorrelationSeries, w: &RevivalWindow) -> Option<RevivalEvent> {
    let t = &series.t_grid;
    let first = t.partition_point(|&x| x < w.lo());
    let last = t.partition_point(|&x| x <= w.hi());
    if first >= last {
        return None;
    }
    let mag = |i: usize| series.values[i].norm_sqr();
    let i = (first..last).fold(first, |best, i| if mag(i) > mag(best) { i } else { best });
    let (mut t_peak, mut magnitude2, mut value) = (t[i], mag(i), series.values[i]);
    if i > 0 && i + 1 < t.len() {
        let (ym, y0, yp) = (mag(i - 1), mag(i), mag(i + 1));
        let denom = ym - 2.0 * y0 + yp;
        if denom < 0.0 {
            let d = (0.5 * (ym - yp) / denom).clamp(-0.5, 0.5);
            let h = t[i + 1] - t[i];
            let refined = t[i] + d * h;
            if refined >= w.lo() && refined <= w.hi() {
                t_peak = refined;
                magnitude2 = y0 - 0.25 * (ym - yp) * d;
                let (am, a0, ap) = (series.values[i - 1], series.values[i], series.values[i + 1]);
                value = a0 + (ap - am) * (0.5 * d) + (ap - a0 * 2.0 + am) * (0.5 * d * d);
            }
        }
    }
    Some(RevivalEvent {
        t_peak,
        magnitude2,
        phase: wrap_phase(value.arg()),
        predicted_t: w.predicted_t,
        kind: w.kind,
    })
}

/// Maps an angle into `(−π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// `Σ |a|⁴`, the long-time mean of `|A|²`.
pub fn collapse_plateau(coeffs: &CoefficientSet) -> f64 {
    coeffs.entries.values().map(|a| a.norm_sqr().powi(2)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPeak {
    pub t_cl: f64,
    pub spreading_time: f64,
}

impl ClassicalPeak {
    /// The peak is expected to survive spreading when `T_cl < Δt`.
    pub fn observable(&self) -> bool {
        self.t_cl < self.spreading_time
    }

    /// Search window `[T_cl/2, 3T_cl/2]`.
    pub fn window(&self) -> RevivalWindow {
        RevivalWindow::new(self.t_cl, 0.5 * self.t_cl, EventKind::ClassicalPeak)
    }
}

/// `T_cl = L(p,q) μ / |p₀y|` and the free-spreading time `2μΔx²/ħ`.
pub fn classical_peak_prediction(
    packet: &GaussianPacket,
    p: u32,
    q: u32,
    config: &WellConfig,
) -> Result<ClassicalPeak, DynamicsError> {
    let orbit = orbit_geometry(p, q, config.radius)?;
    if packet.p0y == 0.0 {
        return Err(DynamicsError::UndefinedPeriod(
            "packet has no momentum along y".into(),
        ));
    }
    let dx = packet.delta_x();
    Ok(ClassicalPeak {
        t_cl: orbit.length * config.mass / packet.p0y.abs(),
        spreading_time: 2.0 * config.mass * dx * dx / config.hbar,
    })
}
