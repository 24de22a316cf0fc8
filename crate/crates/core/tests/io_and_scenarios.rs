use std::fs;
use std::path::Path;

use circwell::io::{format_zero_cache, read_zero_cache, write_file, IoError};
use circwell::scenario::{load_or_build_table, parse_config, run_scenario, RunKind, CACHE_DIR_ENV};
use circwell::spectrum::{build_table, WellConfig};

fn run_in(dir: &Path, text: &str) -> Vec<(String, Vec<u8>)> {
    let cfg = format!("{text}\nout = {}\n", dir.display());
    let s = parse_config(&cfg).unwrap();
    let report = run_scenario(&s).unwrap();
    report
        .files
        .iter()
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(p).unwrap(),
            )
        })
        .collect()
}

#[test]
fn cache_file_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let table = build_table(WellConfig::default(), 40, 60).unwrap();
    let path = dir.path().join("nested/zeros.csv");
    write_file(&path, &format_zero_cache(&table.zero_rows())).unwrap();
    let rows = read_zero_cache(&path).unwrap();
    let orig = table.zero_rows();
    assert_eq!(rows.len(), orig.len());
    for (a, b) in rows.iter().zip(&orig) {
        let bits = |v: &Vec<f64>| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(a), bits(b));
    }
    assert!(matches!(
        read_zero_cache(&dir.path().join("missing.csv")),
        Err(IoError::File { .. })
    ));
}

#[test]
fn scenario_runs_are_byte_identical() {
    let scenarios = [
        "run = zeros\nm_max = 5\nn_r_max = 10",
        "run = spectrum\nkind = half_circular\nm_max = 4\nn_r_max = 4",
        "run = evolve\nx0 = 0.1\nt_max = 9",
        "run = orbits\np = 3\nq = 1\np0y = 20",
        "run = oned\nx0 = 0.52\nt_max = 0.5",
        "run = triangle_check\np_max = 12",
    ];
    for text in scenarios {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let fa = run_in(a.path(), text);
        let fb = run_in(b.path(), text);
        assert!(!fa.is_empty(), "{text}");
        assert_eq!(fa, fb, "{text}");
    }
}

#[test]
fn zeros_run_writes_header_plus_records() {
    let dir = tempfile::tempdir().unwrap();
    let files = run_in(dir.path(), "run = zeros\nm_max = 5\nn_r_max = 10");
    assert_eq!(files[0].0, "zeros.csv");
    let text = String::from_utf8(files[0].1.clone()).unwrap();
    assert_eq!(text.lines().count(), 67);
    assert_eq!(text.lines().next(), Some("# circular-well zeros v1"));
}

#[test]
fn evolve_outputs_are_t0_scaled() {
    let dir = tempfile::tempdir().unwrap();
    let files = run_in(dir.path(), "run = evolve\nt_max = 8.6\n");
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["coefficients.csv", "series.csv", "events.csv"]);
    let events = String::from_utf8(files[2].1.clone()).unwrap();
    let rows: Vec<Vec<f64>> = events
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((rows[0][0] - 4.0).abs() < 0.05 && (rows[1][0] - 8.0).abs() < 0.05);
    assert_eq!((rows[0][3], rows[1][3]), (4.0, 8.0));
    let abs_run = run_in(
        tempfile::tempdir().unwrap().path(),
        "run = evolve\ntime_units = absolute\nt_max = 2.75\n",
    );
    let ev = String::from_utf8(abs_run[2].1.clone()).unwrap();
    let t: f64 = ev
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((t - 4.0 / std::f64::consts::PI).abs() < 0.05 / std::f64::consts::PI);
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(CACHE_DIR_ENV, dir.path());
    let built = load_or_build_table(WellConfig::default(), 6, 9).unwrap();
    let path = dir.path().join("zeros_m6_n9.csv");
    assert!(path.exists());
    let loaded = load_or_build_table(WellConfig::default(), 6, 9).unwrap();
    assert_eq!(built.zero_rows(), loaded.zero_rows());
    // A corrupted cache is reported rather than silently rebuilt.
    fs::write(&path, "# circular-well zeros v1\n0,0,nope\n").unwrap();
    let err = load_or_build_table(WellConfig::default(), 6, 9).unwrap_err();
    assert_eq!(err.code, "cache");
    std::env::remove_var(CACHE_DIR_ENV);
}

#[test]
fn config_errors_surface() {
    assert_eq!(parse_config("").unwrap().run, RunKind::Evolve);
    let e = parse_config("run = evolve\nkind = square_2d\n").unwrap_err();
    assert!(e.message.contains("circular"));
    let e = parse_config("\n\nt_max = -3\n").unwrap_err();
    assert!(e.message.contains("t_max"));
    let s = parse_config("run = expand\nx0 = 0.4\nm_max = 5\nn_r_max = 5").unwrap();
    let err = run_scenario(&s).unwrap_err();
    assert_eq!(err.code, "expand");
    assert!(err.to_string().starts_with("ERROR:expand:"));
}
