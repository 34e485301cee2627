//! Acceptance suite. Each test prints one line per criterion:
//!
//! ```text
//! cargo test -p surfent --test acceptance -- --nocapture --test-threads=1
//! ```

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfent::deviations::*;
use surfent::entropy::*;
use surfent::fields::*;
use surfent::geometry::*;

fn report(id: u32, name: &str, pass: bool, detail: String) -> bool {
    println!("criterion {id:>2} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn joint(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

fn settings(seed: u64) -> McSettings {
    McSettings { sampler: SamplerConfig { seed, ..SamplerConfig::default() }, ..McSettings::default() }
}

#[test]
fn criterion_01_geometry_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = 0;
    let cases = 10_000;
    for _ in 0..cases {
        let q: i64 = rng.gen_range(1..=1000);
        let p: i64 = rng.gen_range(-q..=q);
        let a = Scalar::ratio(rng.gen_range(-10_000..10_000), rng.gen_range(1..=1000));
        let s = Slope::rational(p, q).unwrap();
        let m: u64 = rng.gen_range(0..=1000);
        let n: u64 = rng.gen_range(0..=1000);

        let shifted = torus_translate(&s, TorusPoint::new(a), m as i64);
        let whole = skew_offset(&LinearMap::new(s, a), m + n);
        let split = skew_offset(&LinearMap::new(s, a), m) + skew_offset(&LinearMap::new(s, shifted.value()), n);
        failures += usize::from(whole != split);

        let up = s.abs();
        let z: i64 = rng.gen_range(-1000..=1000);
        let lo: i64 = rng.gen_range(-1000..=1000);
        let line = LinearMap::new(up, a);
        let tz = torus_translate(&up, TorusPoint::new(a), z);
        let lhs = lattice_approx(&line, lo + z, lo + z + 8).unwrap();
        let rhs = lattice_approx(&LinearMap::new(up, tz.value()), lo, lo + 8).unwrap().translate(line.site_at(z));
        failures += usize::from(lhs.sites() != rhs.sites());

        let nu: i64 = rng.gen_range(-1000..=1000);
        failures += usize::from(torus_translate(&s, torus_zero(&s, nu), nu) != TorusPoint::zero());
    }
    let elapsed = start.elapsed();
    let pass = failures == 0 && elapsed < Duration::from_secs(10);
    assert!(report(1, "cocycle, shift and torus-zero identities", pass, format!("{cases} cases, {failures} failures, {elapsed:.2?}")));
}

#[test]
fn criterion_02_lattice_length_ratio() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for lambda in [0.0, 1.0 / 3.0, 0.5, 1.0, 2f64.sqrt() - 1.0] {
        let r = ratio_lattice_to_length(lambda, 10_000, (0.0, 1.0)).unwrap();
        worst = worst.max((r - 1.0 / (1.0 + lambda * lambda).sqrt()).abs());
    }
    let triangle = PolygonSpec::new(vec![[-0.5, -0.4], [0.6, -0.2], [0.1, 0.7]], true).unwrap();
    let square = PolygonSpec::square(1.0).unwrap();
    for poly in [&triangle, &square] {
        let r = polygon_lattice_ratio(poly, 10_000).unwrap();
        worst = worst.max((r - polygon_site_density(poly)).abs());
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-3 && elapsed < Duration::from_secs(5);
    assert!(report(2, "lattice sites per unit length", pass, format!("max deviation {worst:.2e}, {elapsed:.2?}")));
}

#[test]
fn criterion_03_shannon_mcmillan_iid() {
    let start = Instant::now();
    let uniform = FieldModel::uniform(2).unwrap();
    let mut est = EntropyEstimator::new(uniform.clone(), settings(3)).unwrap();
    let config = sample_iid_with(&uniform, Region::centered(200), &mut replica_rng(3, 0)).unwrap();
    let field = FieldView::new(&config, true);
    let mut exact = true;
    for slope in ["0", "1/3", "1/2", "1", "-1/2", "-2/7", "irr:0.41421356237309503", "1/3@y"] {
        let map = LinearMap::new(Slope::parse(slope).unwrap(), Scalar::ratio(1, 5));
        for n in [1, 10, 100, 1000] {
            let v = rescaled_information(&mut est, &map, n, 6, 0, &field).unwrap();
            exact &= v == LN_2;
        }
    }
    let map = LinearMap::new(Slope::rational(1, 2).unwrap(), Scalar::int(0));
    let cfg = ConvergenceConfig {
        n_list: vec![10, 100, 1000],
        depth: 6,
        table_samples: 0,
        fresh_samples: 20,
        baseline_radius: None,
        fresh_stream: 0,
    };
    let rep = convergence_experiment(&mut est, &map, &cfg).unwrap();
    exact &= rep.rows.iter().all(|r| r.mean == LN_2 && r.spread == 0.0);

    let skewed = FieldModel::iid(vec![0.9, 0.1]).unwrap();
    let mut est = EntropyEstimator::new(skewed, settings(3)).unwrap();
    let cfg = ConvergenceConfig { n_list: vec![10_000], fresh_samples: 100, ..cfg };
    let row = convergence_experiment(&mut est, &map, &cfg).unwrap().rows[0].clone();
    let elapsed = start.elapsed();
    let pass = exact && (row.mean - 0.3251).abs() <= 0.01 && elapsed < Duration::from_secs(30);
    assert!(report(
        3,
        "Shannon-McMillan exact oracle",
        pass,
        format!("uniform exact: {exact}; (0.9, 0.1) mean {:.4} ± {:.4}; {elapsed:.2?}", row.mean, row.std_error)
    ));
}

fn ising_03() -> EntropyEstimator {
    let model = FieldModel::ising(0.3, 0.0, Boundary::Periodic).unwrap();
    EntropyEstimator::new(model, settings(1)).unwrap()
}

fn ladder(est: &mut EntropyEstimator, a: Scalar, stream: u32) -> ConvergenceRow {
    let map = LinearMap::new(Slope::rational(1, 2).unwrap(), a);
    let cfg = ConvergenceConfig {
        n_list: vec![10_000],
        depth: 6,
        table_samples: 100_000,
        fresh_samples: 100,
        baseline_radius: None,
        fresh_stream: stream,
    };
    convergence_experiment(est, &map, &cfg).unwrap().rows[0].clone()
}

#[test]
fn criterion_04_05_rational_slope_consistency_and_intercepts() {
    let start = Instant::now();
    let mut est = ising_03();
    let line = est.line_entropy_rational(1, 2, 6, 100_000).unwrap();
    let rows: Vec<ConvergenceRow> = [(Scalar::int(0), 0), (Scalar::ratio(1, 4), 1), (Scalar::ratio(7, 10), 2)]
        .into_iter()
        .map(|(a, stream)| ladder(&mut est, a, stream))
        .collect();
    let elapsed = start.elapsed();
    let z4 = (line.value - rows[0].mean).abs() / joint(line.std_error, rows[0].std_error);
    let pass4 = z4 <= 3.0 && elapsed < Duration::from_secs(600);
    let ok4 = report(
        4,
        "rational-slope line entropy vs ladder",
        pass4,
        format!(
            "line {:.5} ± {:.5}, ladder {:.5} ± {:.5}, |z| {z4:.2}, {elapsed:.2?}",
            line.value, line.std_error, rows[0].mean, rows[0].std_error
        ),
    );
    let mut worst: f64 = 0.0;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            worst = worst.max((rows[i].mean - rows[j].mean).abs() / joint(rows[i].std_error, rows[j].std_error));
        }
    }
    let means: Vec<String> = rows.iter().map(|r| format!("{:.5}±{:.5}", r.mean, r.std_error)).collect();
    let ok5 = report(5, "uniformity over intercepts 0, 1/4, 7/10", worst <= 3.0, format!("means {means:?}, max |z| {worst:.2}"));
    assert!(ok4 && ok5);
}

#[test]
fn criterion_06_weyl_equidistribution() {
    let start = Instant::now();
    let s = Slope::irrational(2f64.sqrt() - 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let freqs: Vec<f64> = (0..10)
        .map(|_| equidistribution_check(&s, TorusPoint::real(rng.gen::<f64>()), (0.0, 0.5), 1_000_000))
        .collect();
    let worst = freqs.iter().map(|f| (f - 0.5).abs()).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    let pass = worst <= 2e-3 && elapsed < Duration::from_secs(5);
    assert!(report(6, "equidistribution of the rotation", pass, format!("max |freq - 0.5| {worst:.2e}, {elapsed:.2?}")));
}

#[test]
fn criterion_07_curve_scaling() {
    let c = CurveSpec::circle([0.0, 0.0], 1.0, 256).unwrap();
    let big = blowup(&c, 2.0).unwrap();
    let chords = 16;
    let small_poly = polygonize(&c, chords).unwrap().polygon;
    let big_poly = polygonize(&big, chords).unwrap().polygon;
    let structural = small_poly.edges().iter().zip(big_poly.edges()).all(|(a, b)| {
        a.axis == b.axis && a.direction == b.direction && (a.lambda - b.lambda).abs() < 1e-12 && (2.0 * a.length - b.length).abs() < 1e-12
    });
    let model = FieldModel::ising(0.3, 0.0, Boundary::Periodic).unwrap();
    let mut first = EntropyEstimator::new(model.clone(), settings(71)).unwrap();
    let mut second = EntropyEstimator::new(model, settings(72)).unwrap();
    let a = first.curve_entropy(&c, chords, 4, 20_000).unwrap();
    let b = second.curve_entropy(&big, chords, 4, 20_000).unwrap();
    let shared = first.curve_entropy(&big, chords, 4, 20_000).unwrap();
    let z = (a.value - b.value).abs() / joint(a.std_error, b.std_error);
    let pass = structural && shared.value == a.value && z <= 3.0;
    assert!(report(
        7,
        "curve entropy under blowup",
        pass,
        format!(
            "edge slopes identical: {structural}; shared tables equal: {}; independent runs {:.5} ± {:.5} vs {:.5} ± {:.5}, |z| {z:.2}",
            shared.value == a.value,
            a.value,
            a.std_error,
            b.value,
            b.std_error
        )
    ));
}

#[test]
fn criterion_08_square_reduction() {
    let mut worst: f64 = 0.0;
    for i in 1..=10 {
        let alpha = i as f64 / 10.0;
        for s in [0.25, 0.7, 1.3] {
            let b = bound_functional(&PolygonSpec::square(alpha).unwrap(), &[s; 4]).unwrap();
            worst = worst.max((b.gamma - box_bound(alpha, s).unwrap()).abs());
        }
    }
    assert!(report(8, "square bound equals box bound", worst <= 1e-12, format!("max difference {worst:.2e}")));
}

#[test]
fn criterion_09_droplet_limits() {
    let sq = PolygonSpec::square(1.0).unwrap();
    let devs: Vec<f64> = [50, 100, 200, 400]
        .iter()
        .map(|&n| (droplet_sets(&sq, 0.25, n).unwrap().c_fraction() - 0.25).abs())
        .collect();
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    let pass = monotone && devs[3] <= 0.02;
    let shown: Vec<String> = devs.iter().map(|d| format!("{d:.4}")).collect();
    assert!(report(9, "droplet interior fraction", pass, format!("deviations {shown:?}")));
}

fn fo_entropy(beta: f64, seed: u64) -> EntropyEstimate {
    let minus = FieldModel::ising(beta, 0.0, Boundary::Minus).unwrap();
    let plus = FieldModel::ising(beta, 0.0, Boundary::Plus).unwrap();
    let mut m = EntropyEstimator::new(minus, settings(seed)).unwrap();
    let mut p = EntropyEstimator::new(plus, settings(seed + 1_000_000)).unwrap();
    fo_specific_entropy(&mut m, &mut p, 6, 100_000).unwrap()
}

#[test]
fn criterion_10_phase_transition_positivity() {
    let start = Instant::now();
    let cold = fo_entropy(0.6, 1);
    let hot = fo_entropy(0.0, 1);
    let elapsed = start.elapsed();
    let z_cold = cold.value / cold.std_error;
    let z_hot = hot.value.abs() / hot.std_error;
    let pass = z_cold > 5.0 && z_hot <= 3.0 && elapsed < Duration::from_secs(900);
    assert!(report(
        10,
        "relative entropy of the two phases",
        pass,
        format!(
            "beta 0.6: {:.4} ± {:.4} (z {z_cold:.1}); beta 0: {:.2e} ± {:.2e} (|z| {z_hot:.2}); {elapsed:.2?}",
            cold.value, cold.std_error, hot.value, hot.std_error
        )
    ));
}

#[test]
fn criterion_11_inverse_triangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        // mu is kept away from 0 and 1, the triple is ordered
        let mu = rng.gen_range(0.05..0.95);
        let nu = rng.gen_range(0.001..mu);
        let lambda = rng.gen_range(mu..0.999);
        worst = worst.min(inverse_triangle_gap(nu, mu, lambda)).min(inverse_triangle_gap(lambda, mu, nu));
    }
    assert!(report(11, "inverse triangle inequality", worst >= -1e-12, format!("smallest slack {worst:.3e}")));
}

#[test]
fn criterion_12_markov_blanket() {
    let model = FieldModel::ising(0.3, 0.0, Boundary::Plus).unwrap();
    let settings = MarkovSettings::default();
    let shapes = [
        ("square", PolygonSpec::new(vec![[-2.0, -2.0], [2.0, -2.0], [2.0, 2.0], [-2.0, 2.0]], true).unwrap()),
        ("tilted", PolygonSpec::new(vec![[0.0, -2.6], [2.7, 0.2], [0.1, 2.8], [-2.6, -0.3]], true).unwrap()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, poly) in &shapes {
        let lattice = markov_boundary_check(&model, poly, 2000, SiteSetKind::LatticeApprox, &settings).unwrap();
        let contour = markov_boundary_check(&model, poly, 2000, SiteSetKind::ContourApprox, &settings).unwrap();
        pass &= contour.exact_deviation <= 1e-10 && lattice.exact_deviation >= contour.exact_deviation;
        parts.push(format!("{name}: contour {:.1e}, lattice {:.3e}", contour.exact_deviation, lattice.exact_deviation));
    }
    assert!(report(12, "contour boundary shields the interior", pass, parts.join("; ")));
}
