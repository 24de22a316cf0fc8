use circwell::companion_wells::{
    odd_level_count, oned_autocorrelation, oned_energy, oned_expand, oned_odd_energy,
    oned_revival_time, square2d_autocorrelation, triangle_revival_phase_check, OneDimPacket,
    OneDimPacketExpansion, DEFAULT_ONED_WIDTH,
};
use circwell::spectrum::{WellConfig, WellKind};
use proptest::prelude::*;

fn well() -> WellConfig {
    WellConfig::with_kind(WellKind::Square1d)
}

fn expand(x0: f64, p0: f64) -> OneDimPacketExpansion {
    oned_expand(
        OneDimPacket::new(x0, p0, DEFAULT_ONED_WIDTH),
        &well(),
        200,
        1e-4,
    )
    .unwrap()
}

fn abs_at(ex: &OneDimPacketExpansion, frac: f64) -> f64 {
    oned_autocorrelation(ex, frac * oned_revival_time(&ex.config)).norm()
}

#[test]
fn centre_packet_eighth_revival() {
    let ex = expand(0.5, 0.0);
    for n in (2..=200).step_by(2) {
        assert!(ex.coefficient(n).unwrap().norm() < 1e-10, "n={n}");
    }
    assert!(ex.coefficient(1).unwrap().norm() > 1e-3);
    assert!(abs_at(&ex, 0.125) >= 0.999);
}

#[test]
fn third_point_packets_revive_at_one_third() {
    for x0 in [1.0 / 3.0, 2.0 / 3.0] {
        let ex = expand(x0, 0.0);
        for n in (3..=198).step_by(3) {
            assert!(ex.coefficient(n).unwrap().norm() < 1e-10, "x0={x0} n={n}");
        }
        assert!(abs_at(&ex, 1.0 / 3.0) >= 0.999, "x0={x0}");
    }
}

#[test]
fn perturbed_packets_lose_fractional_revivals() {
    let centre = expand(0.52, 0.0);
    assert!(abs_at(&centre, 1.0) >= 0.999);
    assert!(abs_at(&centre, 0.125) < 0.95);
    let third = expand(1.0 / 3.0 + 0.02, 0.0);
    assert!(abs_at(&third, 1.0) >= 0.999);
    assert!(abs_at(&third, 1.0 / 3.0) < 0.95);
}

#[test]
fn energy_moment_matches_gaussian() {
    let cfg = well();
    let (p0, b) = (15.0, DEFAULT_ONED_WIDTH);
    let ex = oned_expand(OneDimPacket::new(0.5, p0, b), &cfg, 200, 1e-4).unwrap();
    let e: f64 = (1..=200u32)
        .map(|n| ex.coefficient(n).unwrap().norm_sqr() * oned_energy(n, &cfg).unwrap())
        .sum();
    let analytic = (p0 * p0 + cfg.hbar * cfg.hbar / (2.0 * b * b)) / (2.0 * cfg.mass);
    assert!((e - analytic).abs() / analytic < 1e-4, "{e} vs {analytic}");
}

#[test]
fn odd_levels_rewrite() {
    let cfg = well();
    for n in 1..=40u32 {
        let direct = oned_energy(2 * n - 1, &cfg).unwrap();
        assert!((oned_odd_energy(n, &cfg).unwrap() - direct).abs() < 1e-10 * direct);
    }
    assert_eq!(odd_level_count(4), 6);
}

#[test]
fn square_product_revives() {
    let x = expand(0.5, 0.0);
    let y = expand(0.5, 0.0);
    let t_rev = oned_revival_time(&well());
    let a = square2d_autocorrelation(&x, &y, t_rev / 8.0).unwrap();
    let ax = oned_autocorrelation(&x, t_rev / 8.0);
    assert!((a - ax * ax).norm() < 1e-15);
    assert!(a.norm() >= 0.998);
    let other = oned_expand(
        OneDimPacket::new(1.0, 0.0, DEFAULT_ONED_WIDTH),
        &WellConfig {
            side: 2.0,
            ..well()
        },
        200,
        1e-4,
    )
    .unwrap();
    assert!(square2d_autocorrelation(&x, &other, 0.1).is_err());
}

#[test]
fn triangle_check_is_exhaustive() {
    let rep = triangle_revival_phase_check(30, &WellConfig::default()).unwrap();
    assert!(rep.passed);
    assert_eq!(
        rep.levels_checked,
        (2..=30).map(|p| p / 2).sum::<u32>() as usize
    );
    assert!(rep.max_residual < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exact_revival_for_any_packet(x0 in 0.3f64..0.7, p0 in -30.0f64..30.0, side in 0.5f64..3.0) {
        let cfg = WellConfig { side, ..well() };
        let b = DEFAULT_ONED_WIDTH * side;
        let ex = oned_expand(OneDimPacket::new(x0 * side, p0 / side, b), &cfg, 200, 1e-4).unwrap();
        let a = oned_autocorrelation(&ex, oned_revival_time(&cfg));
        prop_assert!((a.norm() - ex.norm_sum()).abs() < 1e-9);
    }
}
