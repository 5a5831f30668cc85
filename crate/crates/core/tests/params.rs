use calogero::params::*;
use proptest::prelude::*;

#[test]
fn classification_covers_the_plane() {
    assert_eq!(classify(Couplings::new(1.0, 1.0)), RegionClass::UniqueExtension);
    assert_eq!(classify(Couplings::new(0.75, 2.0)), RegionClass::UniqueExtension);
    assert_eq!(classify(Couplings::new(0.0, 1.0)), RegionClass::FamilyKappaPositive);
    assert_eq!(classify(Couplings::new(-0.25, 1.0)), RegionClass::FamilyKappaZero);
    assert_eq!(classify(Couplings::new(0.3, 0.0)), RegionClass::CalogeroOnly);
    assert_eq!(classify(Couplings::new(0.3, -1.0)), RegionClass::FallToInfinity);
    assert_eq!(
        classify(Couplings::new(-0.5, 1.0)),
        RegionClass::FallToCenter {
            also_fall_to_infinity: false
        }
    );
    assert_eq!(
        classify(Couplings::new(-0.5, -1.0)),
        RegionClass::FallToCenter {
            also_fall_to_infinity: true
        }
    );
    assert!(!classify(Couplings::new(-0.5, 1.0)).admits_representation());
    assert!(classify(Couplings::new(-0.25, 1.0)).admits_representation());
}

#[test]
fn reduction_errors() {
    assert!(reduce(Couplings::new(-0.3, 1.0)).is_err());
    assert!(reduce(Couplings::new(0.0, 0.0)).is_err());
    assert!(reduce(Couplings::new(0.0, -1.0)).is_err());
    assert!(reduce(Couplings::new(f64::NAN, 1.0)).is_err());
    assert!(ReducedParams::from_kappa_upsilon(-0.1, 1.0).is_err());
    assert!(ReducedParams::from_kappa_upsilon(0.5, 0.0).is_err());
}

#[test]
fn kappa_zero_snaps() {
    let r = reduce(Couplings::new(-0.25 + 1e-16, 1.0)).unwrap();
    assert_eq!(r.kappa, 0.0);
    assert_eq!(
        classify(Couplings::new(-0.25 - 1e-16, 1.0)),
        RegionClass::FamilyKappaZero
    );
}

#[test]
fn friedrichs_ground_value() {
    let r = reduce(Couplings::new(-3.0 / 16.0, 4.0)).unwrap();
    assert!((r.kappa - 0.25).abs() < 1e-15);
    assert!((r.friedrichs_ground() - 2.0 * 2.0 * 1.25).abs() < 1e-13);
    assert!(r.has_extension_family());
    assert!(!reduce(Couplings::new(0.75, 1.0)).unwrap().has_extension_family());
}

proptest! {
    #[test]
    fn round_trip(g1 in -0.25f64..10.0, g2 in 1e-3f64..100.0) {
        let r = reduce(Couplings::new(g1, g2)).unwrap();
        let back = r.couplings();
        prop_assert!((back.g1 - g1).abs() <= 1e-12 * g1.abs().max(1.0));
        prop_assert!((back.g2 - g2).abs() <= 1e-12 * g2);
        prop_assert_eq!(r.w0, -0.5 * (1.0 + r.kappa));
        prop_assert!((r.u0 - 4.0 * r.upsilon_sq() * r.w0).abs() <= 1e-12 * r.u0.abs());
        prop_assert_eq!(r.beta, 1.0 + r.kappa);
    }

    #[test]
    fn u_w_round_trip(kappa in 0.0f64..3.0, ups in 0.1f64..5.0, w in -2.0f64..10.0) {
        let r = ReducedParams::from_kappa_upsilon(kappa, ups).unwrap();
        prop_assert!((r.w_of_u(r.u_of_w(w)) - w).abs() <= 1e-12 * w.abs().max(1.0));
        prop_assert!((r.alpha_of(w) - (0.5 * (1.0 + kappa) + w)).abs() < 1e-15 * (1.0 + w.abs()));
    }

    #[test]
    fn classification_is_total(g1 in -5.0f64..5.0, g2 in -5.0f64..5.0) {
        let c = Couplings::new(g1, g2);
        let class = classify(c);
        prop_assert_eq!(class.admits_representation(), reduce(c).is_ok());
    }
}
