use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use wirescat::extensions::theta_fraction;
use wirescat::spectrum::{
    bound_spectrum, extension_from_level, find_pole_numeric, find_poles_in, level_index,
};
use wirescat::Complex64;

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

#[test]
fn numeric_poles_reproduce_ladder() {
    for theta_prime in [0.0, 1.0, PI, 5.0] {
        let theta_m = PI - theta_prime;
        let slice = bound_spectrum(1.0, theta_prime, 1.0, -2..=3).unwrap();
        for s in &slice.states {
            // bracket of half a spacing on either side
            let half = 0.45 * PI;
            let root = find_pole_numeric(
                1.0,
                theta_m,
                1.0,
                (s.kappa * (-half).exp(), s.kappa * half.exp()),
            )
            .unwrap();
            assert!(rel(root, s.kappa) <= 1e-8, "theta' {theta_prime} n {}", s.n);
            // the complex denominator of S̃ vanishes there
            let den = theta_fraction(1.0, theta_m, Complex64::new(0.0, root), 1.0).denominator;
            assert!(den.norm() < 1e-12);
        }
    }
}

#[test]
fn scan_finds_exactly_the_ladder() {
    let nu = 2.0;
    let theta_prime = 1.0;
    let slice = bound_spectrum(nu, theta_prime, 1.0, -2..=3).unwrap();
    let lo = slice.states.last().unwrap().kappa * 0.9;
    let hi = slice.states[0].kappa * 1.1;
    let roots = find_poles_in(nu, PI - theta_prime, 1.0, (lo, hi)).unwrap();
    assert_eq!(roots.len(), slice.states.len());
    for (root, s) in roots.iter().rev().zip(&slice.states) {
        assert!(rel(*root, s.kappa) <= 1e-8);
    }
}

#[test]
fn shifting_theta_by_two_pi_moves_one_level() {
    let nu = 1.5;
    let a = bound_spectrum(nu, 0.7, 1.0, 0..=4).unwrap();
    // θ' + 2π is outside the domain; use the pole finder instead
    let theta_m = PI - (0.7 + TAU);
    let lvl = &a.states[1];
    let half = 0.45 * PI / nu;
    let root = find_pole_numeric(
        nu,
        theta_m,
        1.0,
        (lvl.kappa * (-half).exp(), lvl.kappa * half.exp()),
    )
    .unwrap();
    assert!(rel(root, lvl.kappa) <= 1e-8);
    // and it is the n + 1 level of the shifted ladder
    let shifted = ((0.7 + TAU - TAU * (lvl.n + 1) as f64) / (2.0 * nu)).exp();
    assert!(rel(shifted, lvl.kappa) <= 1e-12);
}

#[test]
fn mass_rescales_kappa() {
    let nu = 1.0;
    let theta_m = 0.4;
    // bracket around e^{(π − θ)/(2ν)}, well inside one ladder spacing
    let centre = ((PI - theta_m) / (2.0 * nu)).exp();
    let (lo, hi) = (centre * 0.5, centre * 2.0);
    for c in [0.5, 3.0, 40.0] {
        let base = find_pole_numeric(nu, theta_m, 1.0, (lo, hi)).unwrap();
        let scaled = find_pole_numeric(nu, theta_m, c, (lo * c, hi * c)).unwrap();
        assert!(rel(scaled, c * base) <= 1e-10, "c {c}");
    }
}

#[test]
fn accumulation_at_zero() {
    let s = bound_spectrum(0.8, 2.0, 1.0, -5..=40).unwrap();
    for w in s.states.windows(2) {
        assert!(w[1].kappa < w[0].kappa);
        assert!(w[1].energy > w[0].energy);
        assert!(w[1].energy < 0.0);
    }
    assert!(s.states.last().unwrap().kappa < 1e-30);
    assert!(s.states[0].energy < -1e5);
}

proptest! {
    #[test]
    fn geometric_ladder(nu in 0.2f64..10.0, theta_prime in 0.0f64..TAU, start in -20i64..20) {
        let s = bound_spectrum(nu, theta_prime, 1.0, start..=start + 8).unwrap();
        let q = s.ladder_ratio();
        for w in s.states.windows(2) {
            prop_assert!(rel(w[1].kappa / w[0].kappa, q) <= 1e-12);
        }
    }

    #[test]
    fn level_round_trip(nu in 0.2f64..10.0, log_kappa in -30.0f64..30.0) {
        let kappa = log_kappa.exp();
        let theta_prime = extension_from_level(nu, kappa).unwrap();
        prop_assert!((0.0..TAU).contains(&theta_prime));
        let n = level_index(nu, theta_prime, kappa);
        let s = bound_spectrum(nu, theta_prime, 1.0, n..=n).unwrap();
        prop_assert!(rel(s.states[0].kappa, kappa) <= 1e-12);
    }

    #[test]
    fn ladder_neighbours_share_extension(nu in 0.2f64..10.0, log_kappa in -20.0f64..20.0) {
        let kappa = log_kappa.exp();
        let a = extension_from_level(nu, kappa).unwrap();
        let b = extension_from_level(nu, kappa * (-PI / nu).exp()).unwrap();
        let d = (a - b).abs();
        prop_assert!(d.min(TAU - d) <= 1e-11);
    }
}
