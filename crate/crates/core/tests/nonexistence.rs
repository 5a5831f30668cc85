use std::f64::consts::PI;

use calogero::factorization::RepresentationParams;
use calogero::nonexistence::*;
use calogero::params::{reduce, Couplings};

#[test]
fn fall_to_center_density() {
    for (g1, lo, hi) in [(-0.5, 1e-8, 1e-2), (-2.25, 1e-6, 1e-1), (-10.25, 1e-4, 1e-1)] {
        let c = Couplings::new(g1, 1.0);
        for phase in [0.0, 0.7, 2.0] {
            let r = count_zeros(c, 0.0, (lo, hi), InitialData::Phase(phase), ZeroCountMode::Origin).unwrap();
            let sigma = (-0.25 - g1).sqrt();
            assert!((r.predicted_zeros - sigma * (hi / lo).ln() / PI).abs() < 1e-12);
            assert_eq!(r.sigma_or_omega, sigma);
            assert!(r.within_tolerance, "{r:?}");
        }
    }
}

#[test]
fn fall_to_infinity_density() {
    let c = Couplings::new(0.0, -1.0);
    let r = count_zeros(c, 0.0, (10.0, 20.0), InitialData::Phase(0.0), ZeroCountMode::Infinity).unwrap();
    assert!((r.predicted_zeros - 300.0 / (2.0 * PI)).abs() < 1e-12);
    assert!((47..=49).contains(&r.observed_zeros), "{r:?}");
    let c = Couplings::new(0.5, -4.0);
    let r = count_zeros(c, 1.5, (2.0, 12.0), InitialData::Phase(1.0), ZeroCountMode::Infinity).unwrap();
    assert!(r.within_tolerance, "{r:?}");
}

#[test]
fn both_pathologies_at_once() {
    let c = Couplings::new(-1.0, -1.0);
    let origin = count_zeros(c, 0.0, (1e-6, 1e-1), InitialData::Phase(0.2), default_mode(c)).unwrap();
    assert_eq!(origin.mode, ZeroCountMode::Origin);
    assert!(origin.within_tolerance);
    let inf = count_zeros(c, 0.0, (5.0, 15.0), InitialData::Phase(0.2), ZeroCountMode::Infinity).unwrap();
    assert!(inf.within_tolerance, "{inf:?}");
}

#[test]
fn positive_solutions_never_vanish() {
    for (g1, g2) in [(0.0, 1.0), (-0.25, 2.0), (2.0, 0.5)] {
        let c = Couplings::new(g1, g2);
        let rp = reduce(c).unwrap();
        for (mu, dw) in [(0.0, 0.0), (0.4, 1.0), (1.5, 3.0)] {
            let p = RepresentationParams::new(mu, rp.w0 + dw, rp).unwrap();
            let r = count_zeros(
                c,
                p.u(),
                (1e-3, 4.0),
                InitialData::Representation(p),
                ZeroCountMode::Infinity,
            )
            .unwrap();
            assert_eq!(r.observed_zeros, 0, "{r:?}");
        }
    }
}

#[test]
fn tolerance_rule() {
    assert!(within_tolerance(2, 2.2));
    assert!(within_tolerance(3, 2.2));
    assert!(!within_tolerance(5, 2.2));
    assert!(within_tolerance(53, 47.7));
    assert!(!within_tolerance(54, 47.7));
}
