use proptest::prelude::*;
use surfent::deviations::*;
use surfent::geometry::*;

fn entropies(k: usize, seed: f64) -> Vec<f64> {
    (0..k).map(|i| 0.1 + ((i as f64 + seed) * 1.7).sin().abs()).collect()
}

proptest! {
    #[test]
    fn bound_scales_linearly(k in 3usize..12, rot in 0.0f64..1.0, eta in 0.1f64..10.0, seed in 0.0f64..5.0) {
        let poly = PolygonSpec::regular(k, 1.0, rot).unwrap();
        let h = entropies(k, seed);
        let base = bound_functional(&poly, &h).unwrap().gamma;
        let scaled = bound_functional(&poly.scaled(eta).unwrap(), &h).unwrap().gamma;
        prop_assert!((scaled - eta * base).abs() <= 1e-12 * scaled.abs().max(1.0));
    }

    #[test]
    fn factors_and_parts_are_consistent(k in 3usize..40, rot in 0.0f64..6.3, seed in 0.0f64..5.0) {
        let poly = PolygonSpec::regular(k, 0.5, rot).unwrap();
        let b = bound_functional(&poly, &entropies(k, seed)).unwrap();
        let inv_sqrt2 = 1.0 / 2f64.sqrt();
        prop_assert!(b.per_edge.iter().all(|e| e.factor >= inv_sqrt2 - 1e-15 && e.factor <= 1.0));
        let sum: f64 = b.per_edge.iter().map(|e| e.factor * e.length / 4.0 * e.entropy).sum();
        prop_assert!((sum - b.gamma).abs() < 1e-12);
    }

    #[test]
    fn droplet_sets_are_disjoint(alpha in 0.05f64..1.0, n in 5u64..60, k in 3usize..9, rot in 0.0f64..1.0) {
        let poly = PolygonSpec::regular(k, 1.0, rot).unwrap();
        let d = droplet_sets(&poly, alpha, n).unwrap();
        prop_assert!(d.k_n <= d.l_n);
        prop_assert!(d.c_sites.sites().iter().all(|s| !d.d_sites.contains(s)));
    }
}

#[test]
fn square_bound_matches_box_bound() {
    for i in 1..=10 {
        let alpha = i as f64 / 10.0;
        for s in [0.0, 0.3, 1.0, 2.5] {
            let b = bound_functional(&PolygonSpec::square(alpha).unwrap(), &[s; 4]).unwrap();
            assert!((b.gamma - box_bound(alpha, s).unwrap()).abs() <= 1e-12);
        }
    }
}

#[test]
fn droplet_fractions_approach_alpha() {
    let sq = PolygonSpec::square(1.0).unwrap();
    let mut last = (f64::INFINITY, f64::INFINITY);
    for n in [50, 100, 200, 400] {
        let d = droplet_sets(&sq, 0.25, n).unwrap();
        let dev = ((d.c_fraction() - 0.25).abs(), (d.d_fraction() - 0.75).abs());
        assert!(dev.0 < last.0 && dev.1 < last.1, "n={n}: {dev:?} after {last:?}");
        last = dev;
    }
}

#[test]
fn optimizer_traces_descend() {
    for family in [ShapeFamily::VertexFree { vertices: 6 }, ShapeFamily::RegularKGon { k_min: 3, k_max: 20, rotations: 4 }] {
        let mut s = OptimizeSettings::new(family);
        s.budget = 800;
        let r = optimize_shape(0.7, &mut AxisFavoringOracle::default(), &s).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1].incumbent <= w[0].incumbent));
        let best = r.trace.iter().map(|t| t.gamma).fold(f64::INFINITY, f64::min);
        assert_eq!(best, r.bound.gamma);
    }
}

#[test]
fn regular_polygons_against_the_circle() {
    let flat = |k: usize| {
        let rot = std::f64::consts::PI / k as f64 - std::f64::consts::FRAC_PI_2;
        evaluate_shape(&PolygonSpec::regular(k, 1.0, rot).unwrap(), &mut ConstantOracle(1.0)).unwrap().gamma
    };
    // (1/4)·perimeter·mean factor of a circle of area 1
    let circle = 2.0 * std::f64::consts::PI.sqrt() * (4.0 / std::f64::consts::PI) * std::f64::consts::FRAC_1_SQRT_2 / 4.0;
    assert!(flat(64) < flat(4));
    assert!((flat(256) - circle).abs() < 1e-3, "{} vs {circle}", flat(256));
}

#[test]
fn axis_favoring_oracle_beats_the_square() {
    let s = OptimizeSettings::new(ShapeFamily::VertexFree { vertices: 8 });
    let mut oracle = AxisFavoringOracle::default();
    let r = optimize_shape(1.0, &mut oracle, &s).unwrap();
    let square = evaluate_shape(&PolygonSpec::square(1.0).unwrap(), &mut oracle).unwrap().gamma;
    assert!(r.bound.gamma < square, "{} vs {square}", r.bound.gamma);
    let start = PolygonSpec::regular(8, 1.0, 0.0).unwrap();
    assert!(r.axis_aligned_fraction(0.05) > axis_aligned_fraction(&start, 0.05));
}
