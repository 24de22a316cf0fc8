//! Plain-text CSV formats. Every float is written with 17 significant
//! digits so values survive a write/read cycle bit-for-bit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::classical_orbits::PeriodicOrbit;
use crate::companion_wells::OneDimPacketExpansion;
use crate::dynamics::{AutocorrelationSeries, RevivalEvent};
use crate::special_functions::check_interlacing;
use crate::spectrum::EigenmodeTable;
use crate::wavepacket::CoefficientSet;

pub const ZERO_CACHE_HEADER: &str = "# circular-well zeros v1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cached zeros fail interlacing at (m={m}, n_r={n_r})")]
    Interlacing { m: u32, n_r: u32 },
}

/// `{:.16e}`: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_zero_cache(rows: &[Vec<f64>]) -> String {
    let mut out = String::from(ZERO_CACHE_HEADER);
    out.push('\n');
    for (m, row) in rows.iter().enumerate() {
        for (n, &z) in row.iter().enumerate() {
            let _ = writeln!(out, "{m},{n},{}", fmt_f64(z));
        }
    }
    out
}

/// Reads a zero cache; records must run over `m` then `n_r` without gaps.
pub fn parse_zero_cache(text: &str) -> Result<Vec<Vec<f64>>, IoError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == ZERO_CACHE_HEADER => {}
        _ => {
            return Err(IoError::Parse {
                line: 1,
                message: format!("expected header '{ZERO_CACHE_HEADER}'"),
            })
        }
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, raw) in lines {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let bad = |message: String| IoError::Parse { line, message };
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(bad(format!("expected 'm,n_r,z', got '{raw}'")));
        }
        let m: usize = fields[0]
            .parse()
            .map_err(|_| bad(format!("bad m '{}'", fields[0])))?;
        let n: usize = fields[1]
            .parse()
            .map_err(|_| bad(format!("bad n_r '{}'", fields[1])))?;
        let z: f64 = fields[2]
            .parse()
            .map_err(|_| bad(format!("bad z '{}'", fields[2])))?;
        if !(z > 0.0 && z.is_finite()) {
            return Err(bad(format!("zero must be positive, got {z}")));
        }
        if m == rows.len() {
            rows.push(Vec::new());
        }
        if m + 1 != rows.len() || n != rows[m].len() {
            return Err(bad(format!("record ({m}, {n}) out of order")));
        }
        rows[m].push(z);
    }
    check_interlacing(&rows).map_err(|(m, n_r)| IoError::Interlacing { m, n_r })?;
    Ok(rows)
}

pub fn read_zero_cache(path: &Path) -> Result<Vec<Vec<f64>>, IoError> {
    parse_zero_cache(&read_file(path)?)
}

/// `kind,m,n_r,z,E,norm` ordered by `|m|` then `n_r`.
pub fn format_spectrum(table: &EigenmodeTable) -> String {
    let kind = table.config.kind.as_str();
    let mut out = String::from("# kind,m,n_r,z,E,norm\n");
    for e in table.entries() {
        let _ = writeln!(
            out,
            "{kind},{},{},{},{},{}",
            e.m_abs,
            e.n_r,
            fmt_f64(e.z),
            fmt_f64(e.energy),
            fmt_f64(e.norm)
        );
    }
    out
}

/// `m,n_r,re(a),im(a)`.
pub fn format_coefficients(set: &CoefficientSet) -> String {
    let mut out = String::from("# m,n_r,re,im\n");
    for (idx, a) in &set.entries {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            idx.m,
            idx.n_r,
            fmt_f64(a.re),
            fmt_f64(a.im)
        );
    }
    out
}

/// `n,re(a),im(a)`.
pub fn format_oned_coefficients(expansion: &OneDimPacketExpansion) -> String {
    let mut out = String::from("# n,re,im\n");
    for (i, a) in expansion.coefficients.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", i + 1, fmt_f64(a.re), fmt_f64(a.im));
    }
    out
}

/// `t,re(A),im(A),abs2(A)` with `t` divided by `time_unit`.
pub fn format_series(series: &AutocorrelationSeries, time_unit: f64) -> String {
    let mut out = String::from("# t,re,im,abs2\n");
    for (t, a) in series.t_grid.iter().zip(&series.values) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(t / time_unit),
            fmt_f64(a.re),
            fmt_f64(a.im),
            fmt_f64(a.norm_sqr())
        );
    }
    out
}

/// `kind,t_peak,magnitude2,phase,predicted_t`.
pub fn format_events(events: &[RevivalEvent], time_unit: f64) -> String {
    let mut out = String::from("# kind,t_peak,magnitude2,phase,predicted_t\n");
    for e in events {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.kind,
            fmt_f64(e.t_peak / time_unit),
            fmt_f64(e.magnitude2),
            fmt_f64(e.phase),
            fmt_f64(e.predicted_t / time_unit)
        );
    }
    out
}

/// `p,q,L,R_min,T_cl_po`; orbits without a period print `nan`.
pub fn format_orbits(orbits: &[PeriodicOrbit]) -> String {
    let mut out = String::from("# p,q,L,R_min,T_cl_po\n");
    for o in orbits {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            o.p,
            o.q,
            fmt_f64(o.length),
            fmt_f64(o.r_min),
            fmt_f64(o.period.unwrap_or(f64::NAN))
        );
    }
    out
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_owned(),
        source,
    })
}

/// Writes `contents`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    let wrap = |source| IoError::File {
        path: path.to_owned(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(wrap)?;
    }
    std::fs::write(path, contents).map_err(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{build_table, WellConfig};

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(2.404_825_557_695_773), "2.4048255576957729e0");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn cache_round_trip() {
        let table = build_table(WellConfig::default(), 5, 10).unwrap();
        let text = format_zero_cache(&table.zero_rows());
        assert_eq!(text.lines().count(), 67);
        assert_eq!(parse_zero_cache(&text).unwrap(), table.zero_rows());
    }

    #[test]
    fn cache_rejects_bad_input() {
        assert!(parse_zero_cache("0,0,2.4\n").is_err());
        let gap = format!("{ZERO_CACHE_HEADER}\n0,0,2.4\n0,2,8.6\n");
        assert!(matches!(
            parse_zero_cache(&gap),
            Err(IoError::Parse { line: 3, .. })
        ));
        // j_{1,0} placed above j_{0,1}: breaks interlacing.
        let swapped = format!("{ZERO_CACHE_HEADER}\n0,0,2.4\n0,1,5.5\n1,0,6.0\n");
        assert!(matches!(
            parse_zero_cache(&swapped),
            Err(IoError::Interlacing { .. })
        ));
        let junk = format!("{ZERO_CACHE_HEADER}\n0,0,abc\n");
        assert!(matches!(
            parse_zero_cache(&junk),
            Err(IoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn spectrum_dump_layout() {
        let table = build_table(WellConfig::default(), 1, 1).unwrap();
        let text = format_spectrum(&table);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("circular,0,0,2.40482555769577"));
        assert!(lines[3].starts_with("circular,1,0,"));
    }
}
