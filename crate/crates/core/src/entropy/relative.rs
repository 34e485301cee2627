use super::estimate::{EntropyEstimate, JackknifeSample, Method};
use super::estimator::EntropyEstimator;
use super::past::{past_sites, PastWindowSpec};
use super::table::{kl_divergence, smoothed};
use crate::error::{Error, Result};
use crate::geometry::{polygonize, CurveSpec, PolygonSpec, Slope, TorusPoint};

/// A relative entropy sample with the `P⁻`-mass of past patterns that were
/// never observed under `P⁺`.
pub(crate) struct RelativeSample {
    pub sample: JackknifeSample,
    pub unseen_mass: f64,
}

fn check_pair(minus: &EntropyEstimator, plus: &EntropyEstimator) -> Result<()> {
    if minus.model().alphabet() != plus.model().alphabet() {
        return Err(Error::invalid("relative entropy needs models on the same alphabet"));
    }
    if !(minus.is_exact() && plus.is_exact())
        && minus.settings().sampler.replicas != plus.settings().sampler.replicas
    {
        return Err(Error::invalid("relative entropy needs equal replica counts for both models"));
    }
    Ok(())
}

fn relative_sample(
    minus: &mut EntropyEstimator,
    plus: &mut EntropyEstimator,
    spec: &PastWindowSpec,
    n_samples: u64,
) -> Result<RelativeSample> {
    check_pair(minus, plus)?;
    if minus.is_exact() && plus.is_exact() {
        let kl = kl_divergence(minus.marginal().expect("iid"), plus.marginal().expect("iid"));
        return Ok(RelativeSample { sample: JackknifeSample::exact(kl), unseen_mass: 0.0 });
    }
    minus.check_samples(spec.depth, n_samples)?;
    let offsets = past_sites(spec).into_sites();
    let tm = minus.table(&offsets, n_samples)?;
    let tp = plus.table(&offsets, n_samples)?;
    let alpha = minus.settings().pseudocount;
    let k = tm.alphabet_size();
    let evaluate = |skip: Option<usize>| -> (f64, f64) {
        let cm = tm.pooled(skip);
        let cp = tp.pooled(skip);
        let total: f64 = cm.values().flatten().sum();
        let zeros = vec![0.0; k];
        let mut value = 0.0;
        let mut unseen = 0.0;
        for (key, counts) in &cm {
            let n: f64 = counts.iter().sum();
            let other = cp.get(key).unwrap_or(&zeros);
            if other.iter().sum::<f64>() == 0.0 {
                unseen += n / total;
            }
            value += n / total * kl_divergence(&smoothed(counts, alpha), &smoothed(other, alpha));
        }
        (value, unseen)
    };
    let (full, unseen_mass) = evaluate(None);
    let loo = (0..tm.replica_count()).map(|r| evaluate(Some(r)).0).collect();
    Ok(RelativeSample { sample: JackknifeSample { full, loo }, unseen_mass })
}

fn finish(minus: &EntropyEstimator, rel: &RelativeSample, depth: u32, n_samples: u64, method: Method) -> EntropyEstimate {
    let mut e = minus.finish(&rel.sample, depth, n_samples, method);
    if !rel.sample.is_exact() {
        e.diagnostics.insert("unseen_plus_mass".into(), rel.unseen_mass);
        if rel.unseen_mass > 0.0 {
            e.flag("unseen_plus_patterns_smoothed");
        }
    }
    e
}

/// `E⁻[KL(P⁻_0(· | past) ‖ P⁺_0(· | past))]` for one past window.
pub fn relative_conditional_entropy(
    minus: &mut EntropyEstimator,
    plus: &mut EntropyEstimator,
    spec: &PastWindowSpec,
    n_samples: u64,
) -> Result<EntropyEstimate> {
    let rel = relative_sample(minus, plus, spec, n_samples)?;
    Ok(finish(minus, &rel, spec.depth, n_samples, Method::MonteCarlo))
}

fn line_sample(
    minus: &mut EntropyEstimator,
    plus: &mut EntropyEstimator,
    slope: &Slope,
    depth: u32,
    n_samples: u64,
) -> Result<(RelativeSample, Method)> {
    let slope = slope.abs();
    let grid = minus.settings().quadrature_points;
    let mut unseen: f64 = 0.0;
    let avg = minus.torus_average(&slope, grid, |m, t: TorusPoint| {
        let spec = PastWindowSpec::lattice(slope, t, depth)?;
        let r = relative_sample(m, plus, &spec, n_samples)?;
        unseen = unseen.max(r.unseen_mass);
        Ok(r.sample)
    })?;
    Ok((RelativeSample { sample: avg.sample, unseen_mass: unseen }, avg.method))
}

/// Specific relative entropy along a line: orbit average for rational
/// slopes, midpoint quadrature otherwise.
pub fn relative_entropy_line(
    minus: &mut EntropyEstimator,
    plus: &mut EntropyEstimator,
    slope: &Slope,
    depth: u32,
    n_samples: u64,
) -> Result<EntropyEstimate> {
    let (rel, method) = line_sample(minus, plus, slope, depth, n_samples)?;
    Ok(finish(minus, &rel, depth, n_samples, method))
}

/// Per-edge specific relative entropies `h_r` of a polygon, in edge order.
pub fn relative_edge_entropies(
    minus: &mut EntropyEstimator,
    plus: &mut EntropyEstimator,
    poly: &PolygonSpec,
    depth: u32,
    n_samples: u64,
) -> Result<Vec<EntropyEstimate>> {
    let mut cache: Vec<(Slope, EntropyEstimate)> = Vec::new();
    poly.edges()
        .iter()
        .map(|e| {
            if let Some((_, v)) = cache.iter().find(|(s, _)| *s == e.direction) {
                return Ok(v.clone());
            }
            let v = relative_entropy_line(minus, plus, &e.direction, depth, n_samples)?;
            cache.push((e.direction, v.clone()));
            Ok(v)
        })
        .collect()
}

/// Length-weighted specific relative entropy along a polygon.
pub fn relative_entropy_polygon(
    minus: &mut EntropyEstimator,
    plus: &mut EntropyEstimator,
    poly: &PolygonSpec,
    depth: u32,
    n_samples: u64,
) -> Result<EntropyEstimate> {
    let edges = poly.edges();
    let total: f64 = edges.iter().map(|e| e.length).sum();
    let mut by_direction: Vec<(Slope, RelativeSample)> = Vec::new();
    let mut weighted = Vec::new();
    for e in &edges {
        let idx = match by_direction.iter().position(|(s, _)| *s == e.direction) {
            Some(i) => i,
            None => {
                let (r, _) = line_sample(minus, plus, &e.direction, depth, n_samples)?;
                by_direction.push((e.direction, r));
                by_direction.len() - 1
            }
        };
        weighted.push((e.length / total, idx));
    }
    let parts: Vec<(f64, &JackknifeSample)> = weighted.iter().map(|&(w, i)| (w, &by_direction[i].1.sample)).collect();
    let unseen = by_direction.iter().map(|(_, r)| r.unseen_mass).fold(0.0, f64::max);
    let rel = RelativeSample { sample: JackknifeSample::combine(&parts)?, unseen_mass: unseen };
    let mut e = finish(minus, &rel, depth, n_samples, Method::MonteCarlo);
    e.diagnostics.insert("edges".into(), edges.len() as f64);
    Ok(e)
}

/// Relative entropy along the `n_polygon`-chord polygonization of `c`.
pub fn relative_entropy_curve(
    minus: &mut EntropyEstimator,
    plus: &mut EntropyEstimator,
    curve: &CurveSpec,
    n_polygon: usize,
    depth: u32,
    n_samples: u64,
) -> Result<EntropyEstimate> {
    curve.validate_trace()?;
    let poly = polygonize(curve, n_polygon)?;
    let mut e = relative_entropy_polygon(minus, plus, &poly.polygon, depth, n_samples)?;
    e.diagnostics.insert("polygonization_deviation".into(), poly.tangent_deviation);
    Ok(e)
}

/// `½ [h(horizontal past) + h(vertical past)]`, each the relative
/// conditional entropy given the axis-parallel half-line past.
pub fn fo_specific_entropy(
    minus: &mut EntropyEstimator,
    plus: &mut EntropyEstimator,
    depth: u32,
    n_samples: u64,
) -> Result<EntropyEstimate> {
    let h = PastWindowSpec::lattice(Slope::horizontal(), TorusPoint::zero(), depth)?;
    let v = PastWindowSpec::lattice(Slope::vertical(), TorusPoint::zero(), depth)?;
    let rh = relative_sample(minus, plus, &h, n_samples)?;
    let rv = relative_sample(minus, plus, &v, n_samples)?;
    let sample = JackknifeSample::combine(&[(0.5, &rh.sample), (0.5, &rv.sample)])?;
    let rel = RelativeSample { sample, unseen_mass: rh.unseen_mass.max(rv.unseen_mass) };
    let mut e = finish(minus, &rel, depth, n_samples, Method::MonteCarlo);
    e.diagnostics.insert("horizontal".into(), rh.sample.value());
    e.diagnostics.insert("vertical".into(), rv.sample.value());
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::McSettings;
    use crate::fields::{Boundary, FieldModel, SamplerConfig};

    fn est(m: FieldModel, seed: u64) -> EntropyEstimator {
        let s = McSettings {
            sampler: SamplerConfig { seed, burn_in_sweeps: 100, thinning_sweeps: 2, replicas: 8 },
            window: 32,
            ..McSettings::default()
        };
        EntropyEstimator::new(m, s).unwrap()
    }

    #[test]
    fn iid_pair_is_the_marginal_kl() {
        let mut a = est(FieldModel::iid(vec![0.3, 0.7]).unwrap(), 1);
        let mut b = est(FieldModel::iid(vec![0.7, 0.3]).unwrap(), 1);
        let want = 0.4 * (7.0f64 / 3.0).ln();
        let fo = fo_specific_entropy(&mut a, &mut b, 6, 0).unwrap();
        assert!((fo.value - want).abs() < 1e-15);
        let sq = PolygonSpec::square(1.0).unwrap();
        let p = relative_entropy_polygon(&mut a, &mut b, &sq, 4, 0).unwrap();
        assert!((p.value - want).abs() < 1e-12);
    }

    #[test]
    fn identical_models_give_zero() {
        let m = FieldModel::ising(0.3, 0.0, Boundary::Periodic).unwrap();
        let mut a = est(m.clone(), 2);
        let mut b = est(m, 2);
        let spec = PastWindowSpec::lattice(Slope::horizontal(), TorusPoint::zero(), 3).unwrap();
        let r = relative_conditional_entropy(&mut a, &mut b, &spec, 20_000).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let mut a = est(FieldModel::uniform(2).unwrap(), 1);
        let mut b = est(FieldModel::uniform(3).unwrap(), 1);
        assert!(fo_specific_entropy(&mut a, &mut b, 2, 0).is_err());
    }
}
