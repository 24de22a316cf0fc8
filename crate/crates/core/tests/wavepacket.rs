use std::sync::OnceLock;

use circwell::spectrum::{build_table, EigenmodeTable, WellConfig};
use circwell::wavepacket::{
    analytic_moments, expand_packet, project_packet, spectral_moments, ExpandOptions,
    GaussianPacket, Truncation, WavepacketError, DEFAULT_WIDTH,
};
use proptest::prelude::*;

fn table() -> &'static EigenmodeTable {
    static T: OnceLock<EigenmodeTable> = OnceLock::new();
    T.get_or_init(|| build_table(WellConfig::default(), 40, 60).unwrap())
}

fn packet(x0: f64, p0y: f64) -> GaussianPacket {
    GaussianPacket::new(x0, 0.0, 0.0, p0y, DEFAULT_WIDTH).unwrap()
}

#[test]
fn moments_agree_across_sweeps() {
    let grid = [
        (0.0, 0.0),
        (0.1, 0.0),
        (0.2, 0.0),
        (0.3, 0.0),
        (0.4, 0.0),
        (0.0, 10.0),
        (0.0, 20.0),
        (0.0, 40.0),
        (0.2, 20.0),
        (0.4, 40.0),
    ];
    for (x0, p0y) in grid {
        let p = packet(x0, p0y);
        let set = expand_packet(&p, table(), 1e-4).unwrap();
        let s = spectral_moments(&set, table()).unwrap();
        let a = analytic_moments(&p, &table().config);
        assert!(set.norm_sum() >= 1.0 - 1e-4 && set.norm_sum() <= 1.0 + 1e-4);
        assert!(
            (s.energy - a.energy).abs() <= 1e-3 * a.energy,
            "E at {x0},{p0y}"
        );
        // Absolute 1e-6ħ on the sweeps (Lz = 0); the mixed points carry
        // Lz != 0 and are held to the expansion tolerance.
        let lz_tol = if a.lz == 0.0 { 1e-6 } else { 1e-4 * a.lz.abs() };
        assert!(
            (s.lz - a.lz).abs() <= lz_tol,
            "Lz at {x0},{p0y}: {} vs {}",
            s.lz,
            a.lz
        );
        // The central packet has Lz2 = 0 exactly.
        assert!(
            (s.lz2 - a.lz2).abs() <= (0.02 * a.lz2).max(1e-6),
            "Lz2 at {x0},{p0y}"
        );
    }
}

#[test]
fn central_packet_is_pure_m0() {
    let set = expand_packet(&GaussianPacket::central(DEFAULT_WIDTH), table(), 1e-4).unwrap();
    for (idx, a) in &set.entries {
        if idx.m != 0 {
            assert!(a.norm() < 1e-12, "{idx:?}");
        }
    }
}

#[test]
fn rotational_reduction() {
    let p = GaussianPacket::central(DEFAULT_WIDTH);
    let opts = ExpandOptions::default();
    let z_max = 120.0;
    let a = project_packet(&p, table(), &Truncation::symmetric(0, z_max), &opts).unwrap();
    let b = project_packet(&p, table(), &Truncation::symmetric(5, z_max), &opts).unwrap();
    let mut count = 0;
    for (idx, ca) in &a.entries {
        assert_eq!(idx.m, 0);
        let cb = b.get(0, idx.n_r).unwrap();
        assert!((ca - cb).norm() < 1e-10, "n_r={}", idx.n_r);
        count += 1;
    }
    assert!(count > 20);
}

#[test]
fn undersized_table_is_reported() {
    let small = build_table(WellConfig::default(), 4, 6).unwrap();
    let err = expand_packet(&packet(0.3, 0.0), &small, 1e-4).unwrap_err();
    assert!(matches!(err, WavepacketError::IncompleteExpansion { .. }));
}

#[test]
fn wall_contact_sets_warning() {
    let near = GaussianPacket::new(0.76, 0.0, 0.0, 0.0, DEFAULT_WIDTH).unwrap();
    let set = expand_packet(&near, table(), 1e-4).unwrap();
    assert!(set.edge_warning);
    let far = expand_packet(&packet(0.1, 0.0), table(), 1e-4).unwrap();
    assert!(!far.edge_warning);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn plus_minus_m_magnitudes_match(x0 in -0.3f64..0.3, y0 in -0.3f64..0.3) {
        let p = GaussianPacket::new(x0, y0, 0.0, 0.0, DEFAULT_WIDTH).unwrap();
        let set = expand_packet(&p, table(), 1e-4).unwrap();
        for (idx, a) in &set.entries {
            if idx.m > 0 {
                if let Some(b) = set.get(-idx.m, idx.n_r) {
                    prop_assert!((a.norm() - b.norm()).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn real_axis_packets_have_conjugate_pairs(x0 in 0.0f64..0.3, p0y in 0.0f64..20.0) {
        // Reflection y → −y maps the packet to its complex conjugate.
        let set = expand_packet(&packet(x0, p0y), table(), 1e-4).unwrap();
        let s = spectral_moments(&set, table()).unwrap();
        prop_assert!((s.lz - x0 * p0y).abs() <= 1e-4 * (x0 * p0y).max(1.0));
        prop_assert!(s.norm <= 1.0 + 1e-9);
    }
}
