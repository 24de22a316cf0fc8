//! `key = value` scenario files and the runner behind the command line.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::classical_orbits::{periodic_orbit, wkb_period_ratio};
use crate::companion_wells::{
    oned_expand, oned_revival_time, oned_series, triangle_revival_phase_check, OneDimPacket,
    DEFAULT_ONED_WIDTH,
};
use crate::dynamics::{
    classical_peak_prediction, default_time_step, default_windows, detect_revivals, EventKind,
    PhaseSum, RevivalEvent, RevivalWindow, GENERAL_THRESHOLD, M0_THRESHOLD,
};
use crate::io::{
    fmt_f64, format_coefficients, format_events, format_oned_coefficients, format_orbits,
    format_series, format_spectrum, format_zero_cache, read_zero_cache, write_file,
};
use crate::spectrum::{
    annular_wavenumber, build_table, time_scales, EigenmodeTable, TableExtent, WellConfig, WellKind,
};
use crate::wavepacket::{
    analytic_moments, expand_packet, spectral_moments, GaussianPacket, DEFAULT_TOL, DEFAULT_WIDTH,
};

/// Directory holding cached zero tables.
pub const CACHE_DIR_ENV: &str = "CIRCWELL_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Zeros,
    Spectrum,
    Expand,
    Evolve,
    Orbits,
    Oned,
    TriangleCheck,
}

impl RunKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RunKind::Zeros => "zeros",
            RunKind::Spectrum => "spectrum",
            RunKind::Expand => "expand",
            RunKind::Evolve => "evolve",
            RunKind::Orbits => "orbits",
            RunKind::Oned => "oned",
            RunKind::TriangleCheck => "triangle_check",
        }
    }
}

impl FromStr for RunKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "zeros" => RunKind::Zeros,
            "spectrum" => RunKind::Spectrum,
            "expand" => RunKind::Expand,
            "evolve" => RunKind::Evolve,
            "orbits" => RunKind::Orbits,
            "oned" => RunKind::Oned,
            "triangle_check" | "triangle-check" => RunKind::TriangleCheck,
            other => return Err(format!("unknown run kind '{other}'")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeUnits {
    /// Circular runs use `T₀`; 1D runs use their revival time `T_rev`.
    Reference,
    Absolute,
}

/// A validated scenario. Times (`t_max`, `dt`, `windows`) are stored in the
/// units selected by `time_units`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub run: RunKind,
    pub well: WellConfig,
    pub x0: Option<f64>,
    pub y0: f64,
    pub p0x: f64,
    pub p0y: f64,
    pub p0: f64,
    pub b: Option<f64>,
    pub m_max: u32,
    pub n_r_max: u32,
    pub n_max: u32,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub time_units: TimeUnits,
    pub windows: Option<Vec<RevivalWindow>>,
    pub threshold: Option<f64>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub energy: Option<f64>,
    pub p_max: u32,
    pub tol: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            run: RunKind::Evolve,
            well: WellConfig::default(),
            x0: None,
            y0: 0.0,
            p0x: 0.0,
            p0y: 0.0,
            p0: 0.0,
            b: None,
            m_max: 40,
            n_r_max: 60,
            n_max: 200,
            t_max: None,
            dt: None,
            time_units: TimeUnits::Reference,
            windows: None,
            threshold: None,
            p: None,
            q: None,
            energy: None,
            p_max: 30,
            tol: DEFAULT_TOL,
            output_path: None,
        }
    }
}

impl Scenario {
    /// The 2D packet: defaults give the central packet with `b = 1/(10√2)`.
    pub fn gaussian_packet(&self) -> GaussianPacket {
        GaussianPacket {
            x0: self.x0.unwrap_or(0.0),
            y0: self.y0,
            p0x: self.p0x,
            p0y: self.p0y,
            b: self.b.unwrap_or(DEFAULT_WIDTH),
        }
    }

    /// The 1D packet: defaults centre it in the well.
    pub fn oned_packet(&self) -> OneDimPacket {
        OneDimPacket::new(
            self.x0.unwrap_or(0.5 * self.well.side),
            self.p0,
            self.b.unwrap_or(DEFAULT_ONED_WIDTH),
        )
    }

    pub fn oned_config(&self) -> WellConfig {
        WellConfig {
            kind: WellKind::Square1d,
            ..self.well
        }
    }

    /// Seconds (or whatever the absolute unit is) per stored time unit.
    pub fn time_unit(&self) -> f64 {
        match (self.time_units, self.run) {
            (TimeUnits::Absolute, _) => 1.0,
            (TimeUnits::Reference, RunKind::Oned) => oned_revival_time(&self.oned_config()),
            (TimeUnits::Reference, _) => self.well.t0(),
        }
    }

    /// Default `t_max`: `21 T₀` for circular runs, `T_rev` for 1D runs.
    pub fn t_max_absolute(&self) -> f64 {
        match self.t_max {
            Some(t) => t * self.time_unit(),
            None if self.run == RunKind::Oned => oned_revival_time(&self.oned_config()),
            None => 21.0 * self.well.t0(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line, or `None` for a command-line override.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

pub fn parse_config(text: &str) -> Result<Scenario, ConfigError> {
    parse_config_with_overrides(text, &[])
}

/// Parses `text`, then applies `overrides` (key, value) in order; the
/// overrides win.
pub fn parse_config_with_overrides(
    text: &str,
    overrides: &[(String, String)],
) -> Result<Scenario, ConfigError> {
    let mut s = Scenario::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError {
            line: Some(line),
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        apply(&mut s, key.trim(), value.trim()).map_err(|message| ConfigError {
            line: Some(line),
            message,
        })?;
    }
    for (key, value) in overrides {
        apply(&mut s, key, value).map_err(|message| ConfigError {
            line: None,
            message: format!("flag --{}: {message}", key.replace('_', "-")),
        })?;
    }
    validate(&s).map_err(|message| ConfigError {
        line: None,
        message,
    })?;
    Ok(s)
}

fn num(key: &str, value: &str) -> Result<f64, String> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("malformed number for '{key}': '{value}'"))
}

fn int(key: &str, value: &str) -> Result<u32, String> {
    value
        .parse::<u32>()
        .map_err(|_| format!("malformed integer for '{key}': '{value}'"))
}

fn parse_windows(value: &str) -> Result<Vec<RevivalWindow>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| {
            let (kind, rest) = match w.split_once('@') {
                Some((k, r)) => (k.trim().parse::<EventKind>()?, r),
                None => (EventKind::M0Revival, w),
            };
            let (c, h) = rest
                .split_once(':')
                .ok_or_else(|| format!("window '{w}' must read 'center:half_width'"))?;
            let center = num("windows", c.trim())?;
            let half = num("windows", h.trim())?;
            if !(half > 0.0) {
                return Err(format!("window '{w}' needs a positive half-width"));
            }
            Ok(RevivalWindow::new(center, half, kind))
        })
        .collect()
}

fn apply(s: &mut Scenario, key: &str, value: &str) -> Result<(), String> {
    match key {
        "run" => s.run = value.parse()?,
        "kind" => s.well.kind = value.parse()?,
        "mass" => s.well.mass = num(key, value)?,
        "hbar" => s.well.hbar = num(key, value)?,
        "R" => s.well.radius = num(key, value)?,
        "L" => s.well.side = num(key, value)?,
        "R_inner" => s.well.inner_radius = num(key, value)?,
        "x0" => s.x0 = Some(num(key, value)?),
        "y0" => s.y0 = num(key, value)?,
        "p0x" => s.p0x = num(key, value)?,
        "p0y" => s.p0y = num(key, value)?,
        "p0" => s.p0 = num(key, value)?,
        "b" => s.b = Some(num(key, value)?),
        "m_max" => s.m_max = int(key, value)?,
        "n_r_max" => s.n_r_max = int(key, value)?,
        "n_max" => s.n_max = int(key, value)?,
        "t_max" => s.t_max = Some(num(key, value)?),
        "dt" => s.dt = Some(num(key, value)?),
        "time_units" => {
            s.time_units = match value {
                "T0" => TimeUnits::Reference,
                "absolute" => TimeUnits::Absolute,
                other => return Err(format!("time_units must be T0 or absolute, got '{other}'")),
            }
        }
        "windows" => s.windows = Some(parse_windows(value)?),
        "threshold" => s.threshold = Some(num(key, value)?),
        "p" => s.p = Some(int(key, value)?),
        "q" => s.q = Some(int(key, value)?),
        "E" => s.energy = Some(num(key, value)?),
        "p_max" => s.p_max = int(key, value)?,
        "tol" => s.tol = num(key, value)?,
        "out" => s.output_path = Some(PathBuf::from(value)),
        other => return Err(format!("unknown key '{other}'")),
    }
    Ok(())
}

fn validate(s: &Scenario) -> Result<(), String> {
    s.well.validate().map_err(|e| e.to_string())?;
    if !(s.tol > 0.0) {
        return Err(format!("tol must be positive, got {}", s.tol));
    }
    if let Some(t) = s.t_max {
        if !(t > 0.0) {
            return Err(format!("t_max must be positive, got {t}"));
        }
    }
    if let Some(dt) = s.dt {
        if !(dt > 0.0) {
            return Err(format!("dt must be positive, got {dt}"));
        }
    }
    if let Some(b) = s.b {
        if !(b > 0.0) {
            return Err(format!("b must be positive, got {b}"));
        }
    }
    match s.run {
        RunKind::Orbits => {
            if s.p.is_none() {
                return Err("missing required key 'p' for run = orbits".into());
            }
            if s.q.is_none() {
                return Err("missing required key 'q' for run = orbits".into());
            }
        }
        RunKind::Expand | RunKind::Evolve if s.well.kind != WellKind::Circular => {
            return Err(format!(
                "run = {} needs kind = circular, got {}",
                s.run.as_str(),
                s.well.kind
            ));
        }
        RunKind::TriangleCheck if s.p_max < 2 => {
            return Err(format!("p_max must be >= 2, got {}", s.p_max));
        }
        _ => {}
    }
    Ok(())
}

/// Failure of a run; displays as `ERROR:<code>:<detail>`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunError {
    pub code: &'static str,
    pub detail: String,
}

impl RunError {
    fn new(code: &'static str, detail: impl fmt::Display) -> Self {
        Self {
            code,
            detail: detail.to_string().replace('\n', " "),
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ERROR:{}:{}", self.code, self.detail)
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::new("config", e)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub summary: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl RunReport {
    fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    fn write(&mut self, s: &Scenario, name: &str, contents: &str) -> Result<(), RunError> {
        if let Some(dir) = &s.output_path {
            let path = dir.join(name);
            write_file(&path, contents).map_err(|e| RunError::new("io", e))?;
            self.files.push(path);
        }
        Ok(())
    }
}

pub fn run_scenario(s: &Scenario) -> Result<RunReport, RunError> {
    let mut report = RunReport::default();
    report.line(format!("run = {}", s.run.as_str()));
    match s.run {
        RunKind::Zeros => run_zeros(s, &mut report)?,
        RunKind::Spectrum => run_spectrum(s, &mut report)?,
        RunKind::Expand | RunKind::Evolve => run_packet(s, &mut report)?,
        RunKind::Orbits => run_orbits(s, &mut report)?,
        RunKind::Oned => run_oned(s, &mut report)?,
        RunKind::TriangleCheck => run_triangle(s, &mut report)?,
    }
    Ok(report)
}

fn cache_path(dir: &Path, m_max: u32, n_r_max: u32) -> PathBuf {
    dir.join(format!("zeros_m{m_max}_n{n_r_max}.csv"))
}

/// Rectangular table, read from or written to the cache directory named by
/// [`CACHE_DIR_ENV`] when it is set.
pub fn load_or_build_table(
    config: WellConfig,
    m_max: u32,
    n_r_max: u32,
) -> Result<EigenmodeTable, RunError> {
    let cache = std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .filter(|_| config.kind == WellKind::Circular);
    let extent = TableExtent::Rectangular { m_max, n_r_max };
    if let Some(dir) = &cache {
        let path = cache_path(dir, m_max, n_r_max);
        if path.exists() {
            let rows = read_zero_cache(&path).map_err(|e| RunError::new("cache", e))?;
            return EigenmodeTable::from_zero_rows(config, extent, &rows)
                .map_err(|e| RunError::new("cache", e));
        }
    }
    let table = build_table(config, m_max, n_r_max).map_err(|e| RunError::new("spectrum", e))?;
    if let Some(dir) = &cache {
        write_file(
            &cache_path(dir, m_max, n_r_max),
            &format_zero_cache(&table.zero_rows()),
        )
        .map_err(|e| RunError::new("cache", e))?;
    }
    Ok(table)
}

fn circular_config(s: &Scenario) -> WellConfig {
    WellConfig {
        kind: WellKind::Circular,
        ..s.well
    }
}

fn run_zeros(s: &Scenario, r: &mut RunReport) -> Result<(), RunError> {
    let table = load_or_build_table(circular_config(s), s.m_max, s.n_r_max)?;
    r.line(format!(
        "zeros: m_max = {}, n_r_max = {}, records = {}, interlacing = ok",
        s.m_max,
        s.n_r_max,
        table.len()
    ));
    r.write(s, "zeros.csv", &format_zero_cache(&table.zero_rows()))
}

fn run_spectrum(s: &Scenario, r: &mut RunReport) -> Result<(), RunError> {
    match s.well.kind {
        WellKind::Circular | WellKind::HalfCircular => {
            let table = if s.well.kind == WellKind::Circular {
                load_or_build_table(s.well, s.m_max, s.n_r_max)?
            } else {
                build_table(s.well, s.m_max, s.n_r_max).map_err(|e| RunError::new("spectrum", e))?
            };
            r.line(format!(
                "spectrum: {} levels of a {} well",
                table.len(),
                s.well.kind
            ));
            if let Some(e) = table.entries().next() {
                r.line(format!(
                    "lowest: m = {}, n_r = {}, E = {}",
                    e.m_abs,
                    e.n_r,
                    fmt_f64(e.energy)
                ));
            }
            r.write(s, "spectrum.csv", &format_spectrum(&table))
        }
        WellKind::Annular => {
            let mut out = String::from("# kind,m,n_r,z,E,norm\n");
            let mut count = 0;
            for m in 0..=s.m_max {
                for n in 0..=s.n_r_max {
                    let k = annular_wavenumber(m, n, &s.well)
                        .map_err(|e| RunError::new("spectrum", e))?;
                    let e = s.well.hbar * s.well.hbar * k * k / (2.0 * s.well.mass);
                    out.push_str(&format!(
                        "annular,{m},{n},{},{},nan\n",
                        fmt_f64(k * s.well.radius),
                        fmt_f64(e)
                    ));
                    count += 1;
                }
            }
            r.line(format!("spectrum: {count} levels of an annular well"));
            r.write(s, "spectrum.csv", &out)
        }
        other => Err(RunError::new(
            "spectrum",
            format!("spectrum dumps cover the circular family, got {other}"),
        )),
    }
}

fn run_packet(s: &Scenario, r: &mut RunReport) -> Result<(), RunError> {
    let packet = s.gaussian_packet();
    packet.validate().map_err(|e| RunError::new("packet", e))?;
    let table = load_or_build_table(s.well, s.m_max, s.n_r_max)?;
    let set = expand_packet(&packet, &table, s.tol).map_err(|e| RunError::new("expand", e))?;
    let spectral = spectral_moments(&set, &table).map_err(|e| RunError::new("expand", e))?;
    let analytic = analytic_moments(&packet, &s.well);
    if set.edge_warning {
        r.line("warning: packet centroid is within 5 widths of the wall");
    }
    r.line(format!("modes = {}", set.len()));
    r.line(format!("norm_sum = {}", fmt_f64(set.norm_sum())));
    r.line(format!("residual = {}", fmt_f64(set.residual)));
    r.line(format!(
        "E: spectral = {}, analytic = {}",
        fmt_f64(spectral.energy),
        fmt_f64(analytic.energy)
    ));
    r.line(format!(
        "Lz: spectral = {}, analytic = {}",
        fmt_f64(spectral.lz),
        fmt_f64(analytic.lz)
    ));
    r.line(format!(
        "Lz2: spectral = {}, analytic = {}",
        fmt_f64(spectral.lz2),
        fmt_f64(analytic.lz2)
    ));
    r.line(format!(
        "collapse_plateau = {}",
        fmt_f64(crate::dynamics::collapse_plateau(&set))
    ));
    r.write(s, "coefficients.csv", &format_coefficients(&set))?;
    if s.run == RunKind::Expand {
        return Ok(());
    }

    let sum =
        PhaseSum::from_coefficients(&set, &table).map_err(|e| RunError::new("dynamics", e))?;
    let unit = s.time_unit();
    let t_max = s.t_max_absolute();
    let dt = match s.dt {
        Some(dt) => dt * unit,
        None => default_time_step(&sum, &s.well),
    };
    let mut series = sum
        .series(t_max, dt)
        .map_err(|e| RunError::new("dynamics", e))?;
    let events: Vec<RevivalEvent> = match &s.windows {
        Some(ws) => {
            let scaled: Vec<RevivalWindow> = ws
                .iter()
                .map(|w| RevivalWindow {
                    center: w.center * unit,
                    half_width: w.half_width * unit,
                    predicted_t: w.predicted_t * unit,
                    kind: w.kind,
                })
                .collect();
            scaled
                .iter()
                .flat_map(|w| {
                    let th = s.threshold.unwrap_or(default_threshold(w.kind));
                    detect_revivals(&series, std::slice::from_ref(w), th)
                })
                .collect()
        }
        None => {
            let scales = time_scales(&s.well);
            let mut ws = default_windows(&scales, t_max);
            let orbit = match (s.p, s.q) {
                (Some(p), Some(q)) => Some((p, q)),
                _ if packet.x0 == 0.0 && packet.y0 == 0.0 => Some((2, 1)),
                _ => None,
            };
            let peak =
                orbit.and_then(|(p, q)| classical_peak_prediction(&packet, p, q, &s.well).ok());
            if let Some(peak) = peak {
                if peak.t_cl * 1.5 <= t_max {
                    ws.push(peak.window());
                }
            }
            ws.iter()
                .flat_map(|w| {
                    let th = s.threshold.unwrap_or(default_threshold(w.kind));
                    detect_revivals(&series, std::slice::from_ref(w), th)
                })
                .collect()
        }
    };
    r.line(format!(
        "series: {} points, dt = {}, t_max = {}",
        series.len(),
        fmt_f64(dt / unit),
        fmt_f64(t_max / unit)
    ));
    for e in &events {
        r.line(format!(
            "event {}: t = {}, |A|^2 = {}, phase = {}",
            e.kind,
            fmt_f64(e.t_peak / unit),
            fmt_f64(e.magnitude2),
            fmt_f64(e.phase)
        ));
    }
    series.events = events;
    r.write(s, "series.csv", &format_series(&series, unit))?;
    r.write(s, "events.csv", &format_events(&series.events, unit))
}

fn default_threshold(kind: EventKind) -> f64 {
    match kind {
        EventKind::GeneralRevival => GENERAL_THRESHOLD,
        EventKind::M0Revival | EventKind::ClassicalPeak => M0_THRESHOLD,
    }
}

fn run_orbits(s: &Scenario, r: &mut RunReport) -> Result<(), RunError> {
    let (p, q) = (s.p.unwrap_or(0), s.q.unwrap_or(0));
    let packet = s.gaussian_packet();
    let energy = s
        .energy
        .unwrap_or_else(|| analytic_moments(&packet, &s.well).energy);
    let orbit = periodic_orbit(p, q, energy, &s.well).map_err(|e| RunError::new("orbit", e))?;
    r.line(format!(
        "orbit ({p},{q}): L = {}, R_min = {}, T_cl_po = {}",
        fmt_f64(orbit.length),
        fmt_f64(orbit.r_min),
        fmt_f64(orbit.period.unwrap_or(f64::NAN))
    ));
    if orbit.r_min > 0.0 {
        let m = (orbit.r_min * (2.0 * s.well.mass * energy).sqrt() / s.well.hbar).round() as i32;
        if m != 0 {
            if let Ok(ratio) = wkb_period_ratio(energy, m, &s.well) {
                r.line(format!("wkb ratio at m = {m}: {}", fmt_f64(ratio)));
            }
        }
    }
    if let Ok(peak) = classical_peak_prediction(&packet, p, q, &s.well) {
        r.line(format!(
            "T_cl = {}, spreading time = {}, observable = {}",
            fmt_f64(peak.t_cl),
            fmt_f64(peak.spreading_time),
            peak.observable()
        ));
    }
    r.write(s, "orbits.csv", &format_orbits(&[orbit]))
}

fn run_oned(s: &Scenario, r: &mut RunReport) -> Result<(), RunError> {
    let config = s.oned_config();
    let packet = s.oned_packet();
    let ex = oned_expand(packet, &config, s.n_max, s.tol).map_err(|e| RunError::new("oned", e))?;
    let t_rev = oned_revival_time(&config);
    if ex.edge_warning {
        r.line("warning: packet centroid is within 5 widths of a wall");
    }
    r.line(format!("norm_sum = {}", fmt_f64(ex.norm_sum())));
    r.line(format!("residual = {}", fmt_f64(ex.residual)));
    let sum = ex.phase_sum();
    for (label, frac) in [("T_rev/8", 0.125), ("T_rev/3", 1.0 / 3.0), ("T_rev", 1.0)] {
        r.line(format!(
            "|A({label})| = {}",
            fmt_f64(sum.at(frac * t_rev).norm())
        ));
    }
    let unit = s.time_unit();
    let t_max = s.t_max_absolute();
    let dt = match s.dt {
        Some(dt) => dt * unit,
        None => sum.max_time_step().min(t_rev / 4000.0),
    };
    let series = oned_series(&ex, t_max, dt).map_err(|e| RunError::new("dynamics", e))?;
    r.write(s, "oned_coefficients.csv", &format_oned_coefficients(&ex))?;
    r.write(s, "oned_series.csv", &format_series(&series, unit))
}

fn run_triangle(s: &Scenario, r: &mut RunReport) -> Result<(), RunError> {
    let rep =
        triangle_revival_phase_check(s.p_max, &s.well).map_err(|e| RunError::new("triangle", e))?;
    r.line(format!(
        "triangle: p_max = {}, levels = {}, max_residual = {}, worst = ({}, {}), {}",
        rep.p_max,
        rep.levels_checked,
        fmt_f64(rep.max_residual),
        rep.worst.0,
        rep.worst.1,
        if rep.passed { "pass" } else { "fail" }
    ));
    let text = format!(
        "# p_max,levels,max_residual,passed\n{},{},{},{}\n",
        rep.p_max,
        rep.levels_checked,
        fmt_f64(rep.max_residual),
        rep.passed
    );
    r.write(s, "triangle.csv", &text)?;
    if rep.passed {
        Ok(())
    } else {
        Err(RunError::new("triangle", "phase residual above tolerance"))
    }
}
