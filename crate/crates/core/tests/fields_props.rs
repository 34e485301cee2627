use proptest::prelude::*;
use surfent::fields::*;
use surfent::geometry::Site;

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

fn cfg(seed: u64) -> SamplerConfig {
    SamplerConfig { seed, burn_in_sweeps: 200, thinning_sweeps: 2, replicas: 1 }
}

proptest! {
    #[test]
    fn local_conditional_is_bounded_below(beta in 0.0f64..1.5, h in -1.0f64..1.0, nb in prop::array::uniform4(0u8..2)) {
        let m = FieldModel::ising(beta, h, Boundary::Periodic).unwrap();
        let p = local_conditional(&m, nb).unwrap();
        // the field enters as h·s, so it shifts the log-odds by 2|h|
        let floor = (-8.0 * beta - 2.0 * h.abs()).exp() / 2.0;
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(p.iter().all(|&x| x >= floor));
    }

    #[test]
    fn zero_field_floor(beta in 0.0f64..1.5, nb in prop::array::uniform4(0u8..2)) {
        let m = FieldModel::ising(beta, 0.0, Boundary::Periodic).unwrap();
        let p = local_conditional(&m, nb).unwrap();
        prop_assert!(p.iter().all(|&x| x >= (-8.0 * beta).exp() / 2.0));
    }
}

#[test]
fn identical_configs_give_identical_streams() {
    let m = FieldModel::ising(0.4, 0.1, Boundary::Plus).unwrap();
    let r = Region::centered(6);
    let a: Vec<Configuration> = IsingChain::new(&m, r, &cfg(5), 0).unwrap().take(5).collect();
    let b: Vec<Configuration> = IsingChain::new(&m, r, &cfg(5), 0).unwrap().take(5).collect();
    assert_eq!(a, b);
}

#[test]
fn infinite_temperature_matches_uniform_iid() {
    let m = FieldModel::ising(0.0, 0.0, Boundary::Periodic).unwrap();
    let r = Region::centered(8);
    let pattern = [(Site::new(0, 0), 1u8), (Site::new(1, 0), 1u8), (Site::new(0, 1), 0u8)];
    let expect = exact_pattern_probability(&FieldModel::uniform(2).unwrap(), &pattern).unwrap();
    let hits: Vec<f64> = IsingChain::new(&m, r, &cfg(3), 0)
        .unwrap()
        .take(4000)
        .map(|c| f64::from(u8::from(pattern.iter().all(|&(s, v)| c.get(s) == Some(v)))))
        .collect();
    let (mean, se) = mean_se(&hits);
    assert!((mean - expect).abs() <= 3.0 * se, "{mean} vs {expect} ± {se}");
}

#[test]
fn spin_flip_symmetry() {
    let plus = FieldModel::ising(0.35, 0.0, Boundary::Plus).unwrap();
    let minus = plus.spin_flipped();
    let r = Region::centered(5);
    let mags = |m: &FieldModel, seed| -> Vec<f64> {
        IsingChain::new(m, r, &cfg(seed), 0).unwrap().take(3000).map(|c| c.magnetization()).collect()
    };
    let (a, sa) = mean_se(&mags(&plus, 11));
    let (b, sb) = mean_se(&mags(&minus, 12));
    // magnetization of the flipped ensemble is the negative
    assert!((a + b).abs() <= 3.0 * (sa * sa + sb * sb).sqrt(), "{a} vs {b}");
}

#[test]
fn plus_boundary_dominates_minus() {
    let r = Region::centered(4);
    for beta in [0.1, 0.3, 0.5] {
        let frac = |b: Boundary, seed| -> Vec<f64> {
            let m = FieldModel::ising(beta, 0.0, b).unwrap();
            IsingChain::new(&m, r, &cfg(seed), 0)
                .unwrap()
                .take(2000)
                .map(|c| f64::from(c.get(Site::ORIGIN).unwrap()))
                .collect()
        };
        let (p, sp) = mean_se(&frac(Boundary::Plus, 21));
        let (q, sq) = mean_se(&frac(Boundary::Minus, 22));
        assert!(p >= q - 3.0 * (sp * sp + sq * sq).sqrt(), "beta {beta}: {p} < {q}");
    }
}
