mod common;

use std::f64::consts::PI;

use circwell::spectrum::{
    annular_wavenumber, build_table, integer_decomposition, quadratic_energy, time_scales,
    triangle_energy, WellConfig, WellKind,
};
use common::{bessel_j_integral, bessel_y0_integral, bisect};
use proptest::prelude::*;

fn annulus(inner: f64) -> WellConfig {
    WellConfig {
        kind: WellKind::Annular,
        inner_radius: inner,
        ..WellConfig::default()
    }
}

#[test]
fn default_energies_are_zero_squares() {
    let table = build_table(WellConfig::default(), 40, 60).unwrap();
    assert_eq!(table.len(), 41 * 61);
    for e in table.entries() {
        assert_eq!(e.energy, e.z * e.z);
        assert_eq!(e.multiplicity, if e.m_abs == 0 { 1 } else { 2 });
    }
}

#[test]
fn energies_scale_with_units() {
    let base = build_table(WellConfig::default(), 3, 3).unwrap();
    let cfg = WellConfig {
        mass: 2.0,
        hbar: 0.5,
        radius: 3.0,
        ..WellConfig::default()
    };
    let scaled = build_table(cfg, 3, 3).unwrap();
    let unit = 0.25 / (2.0 * 2.0 * 9.0);
    for (a, b) in base.entries().zip(scaled.entries()) {
        assert!((b.energy - a.energy * unit).abs() <= 1e-14 * b.energy);
    }
}

#[test]
fn quadratic_m0_accuracy_and_trend() {
    let table = build_table(WellConfig::default(), 3, 30).unwrap();
    let cfg = table.config;
    for n in 5..=30 {
        let exact = table.energy(0, n).unwrap();
        assert!(
            (quadratic_energy(0, n, &cfg) - exact).abs() / exact < 1e-4,
            "n_r={n}"
        );
    }
    // For m != 0 the quadratic form drops the constant ħ²/(8μR²) of the
    // square-completed zero expansion; compare with that constant restored.
    for m in 0..=3 {
        let shift = if m == 0 {
            0.0
        } else {
            0.25 * cfg.radial_energy_unit()
        };
        let err: Vec<f64> = (2..=30)
            .map(|n| (quadratic_energy(m, n, &cfg) + shift - table.energy(m, n).unwrap()).abs())
            .collect();
        assert!(
            err.windows(2).all(|w| w[1] <= w[0] + 1e-12),
            "m={m}: {err:?}"
        );
    }
}

#[test]
fn phase_integrality() {
    let cfg = WellConfig::default();
    let t4 = 4.0 * cfg.t0();
    for m in 1..=40i32 {
        for n in 0..=60u32 {
            let (lt, lb) = integer_decomposition(m, n);
            let mf = m as f64;
            let phase = quadratic_energy(m, n, &cfg) * t4 / cfg.hbar - 2.0 * PI * (lt + lb) as f64
                + 2.0 * PI * (2.0 * mf * mf / (PI * PI))
                - 2.0 * PI * 9.0 / 8.0;
            assert!(
                phase.abs() < 1e-9 * (lt + lb + 1) as f64,
                "({m},{n}): {phase}"
            );
        }
    }
    // m = 0 keeps the constant ħ²/(8μR²) offset: residual 1/π per 4T₀.
    for n in 0..=60u32 {
        let (lt, lb) = integer_decomposition(0, n);
        let phase = quadratic_energy(0, n, &cfg) * t4 / cfg.hbar
            - 2.0 * PI * ((lt + lb) as f64 + 9.0 / 8.0);
        assert!(
            (phase - 1.0 / PI).abs() < 1e-9 * (lt + 1) as f64,
            "n_r={n}: {phase}"
        );
    }
}

#[test]
fn triangle_exact_revival() {
    let cfg = WellConfig::with_kind(WellKind::EquilateralTriangle);
    let t_rev = time_scales(&cfg).t_rev_exact.unwrap();
    for p in 2..=30u32 {
        for q in 1..=p / 2 {
            let e = triangle_energy(p, q, &cfg).unwrap().energy;
            let x = e * t_rev / cfg.hbar;
            let k = (p * p + q * q - p * q) as f64;
            assert!((x - 2.0 * PI * k).abs() < 1e-9 * k.max(1.0), "({p},{q})");
        }
    }
}

#[test]
fn half_circle_reuses_nonzero_m() {
    let full = build_table(WellConfig::default(), 12, 15).unwrap();
    let half = build_table(WellConfig::with_kind(WellKind::HalfCircular), 12, 15).unwrap();
    assert!(half.row(0).is_empty());
    assert!(half.entries().all(|e| e.m_abs >= 1));
    let nonzero: Vec<_> = full.entries().filter(|e| e.m_abs >= 1).collect();
    let halves: Vec<_> = half.entries().collect();
    assert_eq!(nonzero.len(), halves.len());
    for (a, b) in nonzero.iter().zip(&halves) {
        assert_eq!(
            (a.m_abs, a.n_r, a.z, a.energy),
            (b.m_abs, b.n_r, b.z, b.energy)
        );
    }
}

#[test]
fn annulus_approaches_disk_from_above() {
    let j01 = 2.404_825_557_695_773;
    let mut prev = f64::INFINITY;
    for inner in [0.3, 0.1, 0.01, 1e-3, 1e-6] {
        let k = annular_wavenumber(0, 0, &annulus(inner)).unwrap();
        assert!(k > j01 && k < prev, "R_inner={inner}: {k}");
        prev = k;
    }
}

#[test]
fn annulus_matches_bisection_oracle() {
    let (r_in, r_out) = (0.3, 1.0);
    let cross = |k: f64| {
        bessel_j_integral(0, k * r_out) * bessel_y0_integral(k * r_in)
            - bessel_j_integral(0, k * r_in) * bessel_y0_integral(k * r_out)
    };
    let cfg = annulus(r_in);
    for n in 0..5u32 {
        let k = annular_wavenumber(0, n, &cfg).unwrap();
        let o = bisect(cross, k - 0.2, k + 0.2, 1e-13);
        assert!((k - o).abs() / o < 1e-9, "n={n}: {k} vs {o}");
    }
}

#[test]
fn thin_annulus_tends_to_slab() {
    let cfg = annulus(0.5);
    let k = annular_wavenumber(0, 20, &cfg).unwrap();
    let slab = 21.0 * PI / 0.5;
    assert!((k - slab).abs() / slab < 1e-2);
    let ks: Vec<f64> = (0..25)
        .map(|n| annular_wavenumber(2, n, &cfg).unwrap())
        .collect();
    assert!(ks.windows(2).all(|w| w[1] > w[0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn table_entries_interlace(m in 0u32..30, n in 0u32..40) {
        let t = build_table(WellConfig::default(), 31, 41).unwrap();
        let z = |m: u32, n: u32| t.get(m as i32, n).unwrap().z;
        prop_assert!(z(m, n) < z(m + 1, n));
        prop_assert!(z(m + 1, n) < z(m, n + 1));
        prop_assert_eq!(t.get(-(m as i32), n), t.get(m as i32, n));
    }
}
