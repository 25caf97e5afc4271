use cylproc::analytic::{capacity_finite, covariance, spherical_cdf, volume_fraction};
use cylproc::euclid::{CrossSection, Direction, Vec2, Vec3};
use cylproc::model::{BaseDistribution, DirectionalDistribution, ProcessSpec};
use proptest::prelude::*;

fn section(kind: u8, size: f64) -> CrossSection {
    match kind {
        0 => CrossSection::disc(size).unwrap(),
        _ => CrossSection::polygon(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0 * size, 0.0),
            Vec2::new(0.5 * size, size),
        ])
        .unwrap(),
    }
}

fn space_spec(lambda: f64, kind: u8, size: f64, axis: Option<[f64; 3]>) -> ProcessSpec {
    let alpha = match axis {
        None => DirectionalDistribution::Isotropic,
        Some(a) => DirectionalDistribution::single_axis(Direction::from_slice(&a).unwrap()),
    };
    ProcessSpec::new(3, 1, lambda, alpha, BaseDistribution::Deterministic(section(kind, size))).unwrap()
}

fn axis_strategy() -> impl Strategy<Value = Option<[f64; 3]>> {
    prop_oneof![
        Just(None),
        (-1.0f64..1.0, -1.0f64..1.0, 0.2f64..1.0).prop_map(|(x, y, z)| Some([x, y, z])),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn direction_canonicalisation_is_idempotent(x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0) {
        prop_assume!((x * x + y * y + z * z).sqrt() > 1e-3);
        let d = Direction::new(3, Vec3::new(x, y, z)).unwrap();
        let again = Direction::new(3, d.vector()).unwrap();
        prop_assert_eq!(d, again);
        let flipped = Direction::new(3, -d.vector()).unwrap();
        prop_assert_eq!(d, flipped);
        prop_assert!((d.vector().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn covariance_is_bounded_and_symmetric(
        lambda in 0.01f64..0.5,
        kind in 0u8..2,
        size in 0.2f64..2.0,
        axis in axis_strategy(),
        h in (-4.0f64..4.0, -4.0f64..4.0, -4.0f64..4.0),
    ) {
        let spec = space_spec(lambda, kind, size, axis);
        let p = volume_fraction(&spec);
        let h = Vec3::new(h.0, h.1, h.2);
        let c = covariance(&spec, &h);
        let lo = (2.0 * p - 1.0).max(0.0);
        prop_assert!(c >= lo - 1e-12 && c <= p + 1e-12, "C = {c}, p = {p}");
        let c_neg = covariance(&spec, &(-h));
        prop_assert!((c - c_neg).abs() < 1e-12);
        prop_assert!((covariance(&spec, &Vec3::zeros()) - p).abs() < 1e-14);
    }

    #[test]
    fn two_point_capacity_matches_covariance(
        lambda in 0.01f64..0.5,
        size in 0.2f64..2.0,
        axis in axis_strategy(),
        h in (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0),
    ) {
        let spec = space_spec(lambda, 0, size, axis);
        let h = Vec3::new(h.0, h.1, h.2);
        let p = volume_fraction(&spec);
        let t = capacity_finite(&spec, &[Vec3::zeros(), h]).unwrap();
        prop_assert!((covariance(&spec, &h) - (2.0 * p - t)).abs() < 1e-12);
        let single = capacity_finite(&spec, &[h]).unwrap();
        prop_assert!((single - p).abs() < 1e-14);
    }

    #[test]
    fn spherical_cdf_is_a_distribution_function(
        lambda in 0.01f64..1.0,
        kind in 0u8..2,
        size in 0.1f64..2.0,
        r in 0.0f64..5.0,
        dr in 0.0f64..1.0,
    ) {
        let spec = space_spec(lambda, kind, size, None);
        let a = spherical_cdf(&spec, r);
        let b = spherical_cdf(&spec, r + dr);
        prop_assert!(spherical_cdf(&spec, 0.0) == 0.0);
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(b >= a);
    }
}
