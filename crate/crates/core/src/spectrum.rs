//! Energy spectra and characteristic time scales of the circular well and
//! its companion billiards.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::special_functions::{
    check_interlacing, j_unchecked, y_unchecked, zeros_of_order, zeros_of_order_below,
    BesselLimits, SpecialFunctionError,
};
use crate::wavepacket::radial_normalization;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("invalid well configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumber(String),
    #[error("{kind} wells have no Bessel eigenmode table")]
    UnsupportedKind { kind: WellKind },
    #[error("zero (m={m}, n_r={n_r}): {source}")]
    Zero {
        m: u32,
        n_r: u32,
        #[source]
        source: SpecialFunctionError,
    },
    #[error("zero table fails interlacing at (m={m}, n_r={n_r})")]
    Interlacing { m: u32, n_r: u32 },
    #[error("annular root enumeration found {found} of {wanted} roots for m={m} below k={k_max}")]
    RootEnumeration {
        m: u32,
        wanted: u32,
        found: u32,
        k_max: f64,
    },
    #[error("mode (m={m}, n_r={n_r}) is outside the table")]
    TableBounds { m: i32, n_r: i64 },
}

/// Billiard geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WellKind {
    Circular,
    HalfCircular,
    Annular,
    Square1d,
    Square2d,
    IsoscelesRight,
    EquilateralTriangle,
}

impl WellKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WellKind::Circular => "circular",
            WellKind::HalfCircular => "half_circular",
            WellKind::Annular => "annular",
            WellKind::Square1d => "square_1d",
            WellKind::Square2d => "square_2d",
            WellKind::IsoscelesRight => "isosceles_right",
            WellKind::EquilateralTriangle => "equilateral_triangle",
        }
    }

    pub fn is_circular_family(self) -> bool {
        matches!(
            self,
            WellKind::Circular | WellKind::HalfCircular | WellKind::Annular
        )
    }
}

impl fmt::Display for WellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WellKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "circular" => WellKind::Circular,
            "half_circular" => WellKind::HalfCircular,
            "annular" => WellKind::Annular,
            "square_1d" => WellKind::Square1d,
            "square_2d" => WellKind::Square2d,
            "isosceles_right" => WellKind::IsoscelesRight,
            "equilateral_triangle" => WellKind::EquilateralTriangle,
            other => return Err(format!("unknown well kind '{other}'")),
        })
    }
}

/// Physical parameters of a well. `radius` applies to the circular family,
/// `side` to the square and triangle wells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellConfig {
    pub kind: WellKind,
    pub mass: f64,
    pub hbar: f64,
    pub radius: f64,
    pub side: f64,
    pub inner_radius: f64,
}

impl Default for WellConfig {
    /// Circular well with `2μ = ħ = R = 1`.
    fn default() -> Self {
        Self {
            kind: WellKind::Circular,
            mass: 0.5,
            hbar: 1.0,
            radius: 1.0,
            side: 1.0,
            inner_radius: 0.0,
        }
    }
}

impl WellConfig {
    pub fn with_kind(kind: WellKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SpectrumError> {
        let positive = [
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("R", self.radius),
            ("L", self.side),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SpectrumError::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.inner_radius >= 0.0) {
            return Err(SpectrumError::InvalidConfig(format!(
                "R_inner must be non-negative, got {}",
                self.inner_radius
            )));
        }
        if self.kind == WellKind::Annular
            && !(self.inner_radius > 0.0 && self.inner_radius < self.radius)
        {
            return Err(SpectrumError::InvalidConfig(format!(
                "annular wells need 0 < R_inner < R, got R_inner={} R={}",
                self.inner_radius, self.radius
            )));
        }
        Ok(())
    }

    /// `ħ² / (2 μ R²)`: converts `z²` into an energy.
    pub fn radial_energy_unit(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass * self.radius * self.radius)
    }

    /// `ħ² π² / (2 μ L²)`: ground-state scale of the 1D well of width `L`.
    pub fn side_energy_unit(&self) -> f64 {
        self.hbar * self.hbar * PI * PI / (2.0 * self.mass * self.side * self.side)
    }

    /// Energy of a dimensionless zero `z = kR`.
    pub fn energy_from_zero(&self, z: f64) -> f64 {
        self.radial_energy_unit() * z * z
    }

    /// Base time `T₀ = 2μR²/(ħπ)`.
    pub fn t0(&self) -> f64 {
        2.0 * self.mass * self.radius * self.radius / (self.hbar * PI)
    }
}

/// Signed angular momentum quantum number and radial node count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub m: i32,
    pub n_r: u32,
}

impl ModeIndex {
    pub fn new(m: i32, n_r: u32) -> Self {
        Self { m, n_r }
    }
}

/// One stored eigenmode; represents both `±m` when `multiplicity == 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEntry {
    pub m_abs: u32,
    pub n_r: u32,
    pub z: f64,
    pub energy: f64,
    pub norm: f64,
    pub multiplicity: u8,
}

/// Which modes a table holds for each `|m|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TableExtent {
    /// `n_r = 0 ..= n_r_max` for every `|m| <= m_max`.
    Rectangular { m_max: u32, n_r_max: u32 },
    /// Every zero `z <= z_max` for every `|m| <= m_max`.
    BelowZero { m_max: u32, z_max: f64 },
}

impl TableExtent {
    pub fn m_max(&self) -> u32 {
        match *self {
            TableExtent::Rectangular { m_max, .. } | TableExtent::BelowZero { m_max, .. } => m_max,
        }
    }
}

/// Exact-zero eigenmodes of a circular-family well. Rows are indexed by
/// `|m|` and hold ascending `n_r` starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenmodeTable {
    pub config: WellConfig,
    pub extent: TableExtent,
    rows: Vec<Vec<ModeEntry>>,
}

impl EigenmodeTable {
    /// Assembles a table from precomputed zeros (e.g. a cache file), one row
    /// per `|m|`. Energies and norms are recomputed from the zeros.
    pub fn from_zero_rows(
        config: WellConfig,
        extent: TableExtent,
        zero_rows: &[Vec<f64>],
    ) -> Result<Self, SpectrumError> {
        config.validate()?;
        if !matches!(config.kind, WellKind::Circular | WellKind::HalfCircular) {
            return Err(SpectrumError::UnsupportedKind { kind: config.kind });
        }
        check_interlacing(zero_rows).map_err(|(m, n_r)| SpectrumError::Interlacing { m, n_r })?;
        let rows = zero_rows
            .iter()
            .enumerate()
            .map(|(m, zs)| {
                let m = m as u32;
                if config.kind == WellKind::HalfCircular && m == 0 {
                    return Ok(Vec::new());
                }
                let multiplicity = if m == 0 || config.kind == WellKind::HalfCircular {
                    1
                } else {
                    2
                };
                zs.iter()
                    .enumerate()
                    .map(|(n, &z)| {
                        let norm = radial_normalization(m, z, &config).map_err(|e| {
                            SpectrumError::InvalidConfig(format!(
                                "normalisation of (m={m}, n_r={n}): {e}"
                            ))
                        })?;
                        Ok(ModeEntry {
                            m_abs: m,
                            n_r: n as u32,
                            z,
                            energy: config.energy_from_zero(z),
                            norm,
                            multiplicity,
                        })
                    })
                    .collect::<Result<Vec<_>, SpectrumError>>()
            })
            .collect::<Result<Vec<_>, SpectrumError>>()?;
        Ok(Self {
            config,
            extent,
            rows,
        })
    }

    pub fn m_max(&self) -> u32 {
        self.extent.m_max()
    }

    /// Largest `n_r` stored in any row.
    pub fn n_r_max(&self) -> u32 {
        self.rows
            .iter()
            .map(|r| r.len() as u32)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn row(&self, m_abs: u32) -> &[ModeEntry] {
        self.rows.get(m_abs as usize).map_or(&[], |r| r.as_slice())
    }

    pub fn get(&self, m: i32, n_r: u32) -> Option<&ModeEntry> {
        self.row(m.unsigned_abs()).get(n_r as usize)
    }

    pub fn energy(&self, m: i32, n_r: u32) -> Option<f64> {
        self.get(m, n_r).map(|e| e.energy)
    }

    /// Entries ordered by `|m|` then `n_r`.
    pub fn entries(&self) -> impl Iterator<Item = &ModeEntry> {
        self.rows.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Zeros per `|m|`, the shape used by the cache format.
    pub fn zero_rows(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|e| e.z).collect())
            .collect()
    }
}

/// Exact-zero table for `|m| <= m_max`, `n_r <= n_r_max`.
pub fn build_table(
    config: WellConfig,
    m_max: u32,
    n_r_max: u32,
) -> Result<EigenmodeTable, SpectrumError> {
    build_table_with(
        config,
        TableExtent::Rectangular { m_max, n_r_max },
        &BesselLimits::default(),
    )
}

pub fn build_table_with(
    config: WellConfig,
    extent: TableExtent,
    limits: &BesselLimits,
) -> Result<EigenmodeTable, SpectrumError> {
    config.validate()?;
    if !matches!(config.kind, WellKind::Circular | WellKind::HalfCircular) {
        return Err(SpectrumError::UnsupportedKind { kind: config.kind });
    }
    // Normalisation evaluates J_{m+1}, so leave one order of headroom.
    let m_max = extent.m_max();
    if m_max >= limits.max_order {
        return Err(SpectrumError::Zero {
            m: m_max,
            n_r: 0,
            source: SpecialFunctionError::UnsupportedOrder {
                order: m_max + 1,
                max_order: limits.max_order,
            },
        });
    }
    let zero_rows = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let zs = match extent {
                TableExtent::Rectangular { n_r_max, .. } => zeros_of_order(m, n_r_max, limits),
                TableExtent::BelowZero { z_max, .. } => zeros_of_order_below(m, z_max, limits),
            };
            zs.map_err(|source| {
                let n_r = match source {
                    SpecialFunctionError::Bracket { n_r, .. }
                    | SpecialFunctionError::Unconverged { n_r, .. } => n_r,
                    _ => 0,
                };
                SpectrumError::Zero { m, n_r, source }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    EigenmodeTable::from_zero_rows(config, extent, &zero_rows)
}

/// Quadratic approximation to `E_(m, n_r)` built from the zero expansions.
pub fn quadratic_energy(m: i32, n_r: u32, config: &WellConfig) -> f64 {
    let scale = config.radial_energy_unit() * PI * PI;
    let n = n_r as f64;
    if m == 0 {
        scale * ((n + 0.75).powi(2) + 1.0 / (4.0 * PI * PI))
    } else {
        let ma = m.unsigned_abs() as f64;
        scale * ((n + 0.5 * ma + 0.75).powi(2) - ma * ma / (PI * PI))
    }
}

/// The integers `l̃ = n_r (2 n_r + 3 + 2|m|)` and `l̄ = |m|(|m| + 3)/2` that
/// carry the quadratic energies in units of `2πħ / 4T₀`.
pub fn integer_decomposition(m: i32, n_r: u32) -> (i64, i64) {
    let ma = m.unsigned_abs() as i64;
    let n = n_r as i64;
    let l_tilde = n * (2 * n + 3 + 2 * ma);
    let twice_bar = ma * (ma + 3);
    debug_assert!(twice_bar % 2 == 0);
    (l_tilde, twice_bar / 2)
}

/// Characteristic times. The circular-family entries refer to
/// `config.radius`; `t_rev_exact` is set for wells with purely quadratic
/// spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeScales {
    pub t0: f64,
    pub t_rev_m0: f64,
    pub t_rev_general: f64,
    pub t_rev_exact: Option<f64>,
    pub phase_f: f64,
}

pub fn time_scales(config: &WellConfig) -> TimeScales {
    let t0 = config.t0();
    let t_rev_m0 = 4.0 * t0;
    let side2 = config.side * config.side;
    let t_rev_exact = match config.kind {
        WellKind::Square1d | WellKind::Square2d | WellKind::IsoscelesRight => {
            Some(4.0 * config.mass * side2 / (config.hbar * PI))
        }
        WellKind::EquilateralTriangle => Some(9.0 * config.mass * side2 / (4.0 * config.hbar * PI)),
        _ => None,
    };
    TimeScales {
        t0,
        t_rev_m0,
        t_rev_general: 0.5 * PI * PI * t_rev_m0,
        t_rev_exact,
        phase_f: 0.25 + 1.0 / (PI * PI),
    }
}

/// Level of the equilateral triangle billiard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleLevel {
    pub energy: f64,
    pub degeneracy: u8,
}

/// `E(p, q) = (4/3)² (ħ²π²/2μL²)(p² + q² − pq)` for `1 <= q <= p/2`.
pub fn triangle_energy(
    p: u32,
    q: u32,
    config: &WellConfig,
) -> Result<TriangleLevel, SpectrumError> {
    if q < 1 || 2 * q > p {
        return Err(SpectrumError::InvalidQuantumNumber(format!(
            "triangle levels need 1 <= q <= p/2, got p={p} q={q}"
        )));
    }
    let (p, q) = (p as f64, q as f64);
    Ok(TriangleLevel {
        energy: 16.0 / 9.0 * config.side_energy_unit() * (p * p + q * q - p * q),
        degeneracy: if p == 2.0 * q { 1 } else { 2 },
    })
}

/// `ħ²π²(n_x² + n_y²)/2μL²`; the isosceles right triangle keeps `n_x < n_y`.
pub fn square_energy(n_x: u32, n_y: u32, config: &WellConfig) -> Result<f64, SpectrumError> {
    if n_x < 1 || n_y < 1 {
        return Err(SpectrumError::InvalidQuantumNumber(format!(
            "square levels need n_x, n_y >= 1, got ({n_x}, {n_y})"
        )));
    }
    if config.kind == WellKind::IsoscelesRight && n_x >= n_y {
        return Err(SpectrumError::InvalidQuantumNumber(format!(
            "isosceles levels need n_x < n_y, got ({n_x}, {n_y})"
        )));
    }
    let (x, y) = (n_x as f64, n_y as f64);
    Ok(config.side_energy_unit() * (x * x + y * y))
}

/// Relative bisection tolerance for annular roots.
const ANNULAR_ROOT_TOL: f64 = 1e-12;

/// Energy of the `n_r`-th root (0-based) of
/// `J_m(kR) Y_m(kR_in) − J_m(kR_in) Y_m(kR) = 0`.
pub fn annular_eigenvalue(m: u32, n_r: u32, config: &WellConfig) -> Result<f64, SpectrumError> {
    let k = annular_wavenumber(m, n_r, config)?;
    Ok(config.hbar * config.hbar * k * k / (2.0 * config.mass))
}

/// Wavenumber `k` of the `n_r`-th annular root.
pub fn annular_wavenumber(m: u32, n_r: u32, config: &WellConfig) -> Result<f64, SpectrumError> {
    config.validate()?;
    if config.kind != WellKind::Annular {
        return Err(SpectrumError::InvalidConfig(
            "annular eigenvalues need an annular well".into(),
        ));
    }
    let limits = BesselLimits::default();
    if m > limits.max_order {
        return Err(SpectrumError::Zero {
            m,
            n_r,
            source: SpecialFunctionError::UnsupportedOrder {
                order: m,
                max_order: limits.max_order,
            },
        });
    }
    let (r_out, r_in) = (config.radius, config.inner_radius);
    let cross = |k: f64| {
        j_unchecked(m, k * r_out) * y_unchecked(m, k * r_in)
            - j_unchecked(m, k * r_in) * y_unchecked(m, k * r_out)
    };
    let step = PI / (2.0 * (r_out - r_in));
    // Every root lies above the centrifugal floor k² > (m² − 1/4)/R².
    let k_start = ((m as f64) - 1.0).max(1e-3) / r_out;
    let max_steps = 4 * (n_r as usize + 2) + 4 * (m as usize + 10);
    let k_max = k_start + step * max_steps as f64;
    if k_max * r_out > limits.max_argument {
        return Err(SpectrumError::Zero {
            m,
            n_r,
            source: SpecialFunctionError::ArgumentOutOfRange {
                x: k_max * r_out,
                max_argument: limits.max_argument,
            },
        });
    }
    let mut found = 0;
    let mut lo = k_start;
    let mut flo = cross(lo);
    for _ in 0..max_steps {
        let hi = lo + step;
        let fhi = cross(hi);
        if (flo > 0.0) != (fhi > 0.0) || fhi == 0.0 {
            if found == n_r {
                return Ok(bisect(&cross, lo, hi, flo));
            }
            found += 1;
        }
        lo = hi;
        flo = fhi;
    }
    Err(SpectrumError::RootEnumeration {
        m,
        wanted: n_r + 1,
        found,
        k_max,
    })
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    while hi - lo > ANNULAR_ROOT_TOL * hi {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if (fmid > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
