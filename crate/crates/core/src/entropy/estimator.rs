use std::collections::HashMap;
use std::sync::Arc;

use super::ensemble::{Ensemble, McSettings};
use super::estimate::{EntropyEstimate, JackknifeSample, Method};
use super::past::{past_sites, PastVariant, PastWindowSpec};
use super::table::{conditional_entropy_of, shannon_entropy, ConditionalTable};
use crate::error::{Error, Result};
use crate::fields::FieldModel;
use crate::geometry::{polygonize, CurveSpec, PolygonSpec, Scalar, Site, Slope, SlopeKind, TorusPoint};

/// Entropy evaluator for one field model. Holds the sampled ensemble and
/// every conditional table built from it, so that repeated queries reuse
/// the same samples.
pub struct EntropyEstimator {
    model: FieldModel,
    settings: McSettings,
    ensemble: Option<Ensemble>,
    tables: HashMap<(Vec<Site>, u64), Arc<ConditionalTable>>,
}

/// Result of a torus integral: the combined sample and the spread of the
/// integrand values over the grid.
pub(crate) struct TorusAverage {
    pub sample: JackknifeSample,
    pub method: Method,
    pub spread: Option<f64>,
}

impl EntropyEstimator {
    pub fn new(model: FieldModel, settings: McSettings) -> Result<Self> {
        model.validate()?;
        settings.validate()?;
        Ok(EntropyEstimator { model, settings, ensemble: None, tables: HashMap::new() })
    }

    pub fn model(&self) -> &FieldModel {
        &self.model
    }

    pub fn settings(&self) -> &McSettings {
        &self.settings
    }

    /// True when conditional entropies are evaluated in closed form.
    pub fn is_exact(&self) -> bool {
        self.model.is_iid() && !self.settings.force_monte_carlo
    }

    pub(crate) fn marginal(&self) -> Option<&[f64]> {
        match &self.model {
            FieldModel::Iid { marginal } => Some(marginal),
            FieldModel::Ising { .. } => None,
        }
    }

    /// `10 · |Υ|^(depth+1)`.
    pub fn required_samples(&self, depth: u32) -> u64 {
        let k = self.model.alphabet().size() as u64;
        k.checked_pow(depth + 1).and_then(|v| v.checked_mul(10)).unwrap_or(u64::MAX)
    }

    pub fn check_samples(&self, depth: u32, n_samples: u64) -> Result<()> {
        let required = self.required_samples(depth);
        if n_samples < required {
            return Err(Error::InsufficientSamples { required, given: n_samples });
        }
        Ok(())
    }

    /// Sampled table for the given past offsets (sorted canonically),
    /// built from exactly `n_samples` origins.
    pub fn table(&mut self, offsets: &[Site], n_samples: u64) -> Result<Arc<ConditionalTable>> {
        let mut key = offsets.to_vec();
        key.sort();
        key.dedup();
        if let Some(t) = self.tables.get(&(key.clone(), n_samples)) {
            return Ok(Arc::clone(t));
        }
        if self.ensemble.is_none() {
            self.ensemble = Some(Ensemble::new(&self.model, &self.settings)?);
        }
        let ensemble = self.ensemble.as_mut().expect("just created");
        let table = Arc::new(ensemble.table(&key, n_samples, self.settings.margin)?);
        self.tables.insert((key, n_samples), Arc::clone(&table));
        Ok(table)
    }

    /// Conditional entropy of the origin given `offsets`, jackknifed over
    /// replicas. `depth` is only used for the sample-size check.
    pub fn offsets_sample(&mut self, offsets: &[Site], depth: u32, n_samples: u64) -> Result<JackknifeSample> {
        if self.is_exact() {
            return Ok(JackknifeSample::exact(shannon_entropy(self.marginal().expect("iid"))));
        }
        self.check_samples(depth, n_samples)?;
        let table = self.table(offsets, n_samples)?;
        let alpha = self.settings.pseudocount;
        let full = conditional_entropy_of(&table.counts(), alpha);
        let loo = (0..table.replica_count()).map(|r| conditional_entropy_of(&table.pooled(Some(r)), alpha)).collect();
        Ok(JackknifeSample { full, loo })
    }

    pub fn conditional_sample(&mut self, spec: &PastWindowSpec, n_samples: u64) -> Result<JackknifeSample> {
        let offsets = past_sites(spec).into_sites();
        self.offsets_sample(&offsets, spec.depth, n_samples)
    }

    pub fn conditional_entropy(&mut self, spec: &PastWindowSpec, n_samples: u64) -> Result<EntropyEstimate> {
        let s = self.conditional_sample(spec, n_samples)?;
        Ok(self.finish(&s, spec.depth, n_samples, Method::MonteCarlo))
    }

    pub(crate) fn finish(&self, s: &JackknifeSample, depth: u32, n_samples: u64, method: Method) -> EntropyEstimate {
        let mut e = EntropyEstimate::from_jackknife(s, depth, if s.is_exact() { 0 } else { n_samples }, method);
        if !s.is_exact() {
            e.diagnostics.insert("pseudocount".into(), self.settings.pseudocount);
            e.diagnostics.insert("replicas".into(), self.settings.sampler.replicas as f64);
        }
        e
    }

    /// Average of an integrand over the torus: the exact `q`-point orbit for
    /// rational slopes, midpoint quadrature on `grid` points otherwise.
    pub(crate) fn torus_average(
        &mut self,
        slope: &Slope,
        grid: usize,
        mut integrand: impl FnMut(&mut Self, TorusPoint) -> Result<JackknifeSample>,
    ) -> Result<TorusAverage> {
        let (points, method) = match slope.kind {
            SlopeKind::Rational(r) => {
                let (p, q) = (*r.numer(), *r.denom());
                let pts = (0..q).map(|nu| TorusPoint::new(Scalar::ratio(nu * p, q))).collect::<Vec<_>>();
                (pts, Method::MonteCarlo)
            }
            SlopeKind::Irrational(_) => {
                if grid < 1 {
                    return Err(Error::invalid("quadrature grid must be positive"));
                }
                let pts = (0..grid).map(|k| TorusPoint::real((k as f64 + 0.5) / grid as f64)).collect();
                (pts, Method::Quadrature { grid })
            }
        };
        let samples = points.into_iter().map(|t| integrand(self, t)).collect::<Result<Vec<_>>>()?;
        let w = 1.0 / samples.len() as f64;
        let parts: Vec<(f64, &JackknifeSample)> = samples.iter().map(|s| (w, s)).collect();
        let sample = JackknifeSample::combine(&parts)?;
        let spread = matches!(method, Method::Quadrature { .. }).then(|| {
            let vals: Vec<f64> = samples.iter().map(|s| s.full).collect();
            let m = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = if vals.len() > 1 {
                vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (vals.len() - 1) as f64
            } else {
                0.0
            };
            var.sqrt()
        });
        Ok(TorusAverage { sample, method, spread })
    }

    pub(crate) fn line_average(&mut self, slope: &Slope, grid: usize, depth: u32, n_samples: u64) -> Result<TorusAverage> {
        let slope = slope.abs();
        self.torus_average(&slope, grid, |est, t| {
            let spec = PastWindowSpec::lattice(slope, t, depth)?;
            est.conditional_sample(&spec, n_samples)
        })
    }

    pub(crate) fn torus_estimate(&self, avg: &TorusAverage, depth: u32, n_samples: u64) -> EntropyEstimate {
        let mut e = self.finish(&avg.sample, depth, n_samples, avg.method);
        if let Method::Quadrature { grid } = avg.method {
            e.method = Method::Quadrature { grid };
            e.diagnostics.insert("quadrature_spread".into(), avg.spread.unwrap_or(0.0));
            e.diagnostics.insert("sampling_error".into(), e.std_error);
            if grid == 1 {
                e.flag("low_accuracy_single_point_quadrature");
            }
        }
        e
    }

    /// Specific entropy along a line of the given slope. Only `|λ|` and
    /// the axis matter; rational slopes use the orbit average, irrational
    /// ones midpoint quadrature with the configured grid.
    pub fn line_entropy(&mut self, slope: &Slope, depth: u32, n_samples: u64) -> Result<EntropyEstimate> {
        let grid = self.settings.quadrature_points;
        let avg = self.line_average(slope, grid, depth, n_samples)?;
        Ok(self.torus_estimate(&avg, depth, n_samples))
    }

    /// `(1/q) Σ_ν H(P_0 | past at torus point νp/q)` on the x-axis.
    pub fn line_entropy_rational(&mut self, p: i64, q: i64, depth: u32, n_samples: u64) -> Result<EntropyEstimate> {
        let slope = Slope::rational(p, q)?;
        self.line_entropy(&slope, depth, n_samples)
    }

    /// Midpoint quadrature over `grid` torus points, on the x-axis.
    pub fn line_entropy_irrational(&mut self, lambda: f64, grid: usize, depth: u32, n_samples: u64) -> Result<EntropyEstimate> {
        let slope = Slope::irrational(lambda)?;
        let avg = self.line_average(&slope, grid, depth, n_samples)?;
        Ok(self.torus_estimate(&avg, depth, n_samples))
    }

    pub(crate) fn polygon_sample(&mut self, poly: &PolygonSpec, depth: u32, n_samples: u64) -> Result<(JackknifeSample, usize)> {
        let edges = poly.edges();
        let total: f64 = edges.iter().map(|e| e.length).sum();
        let grid = self.settings.quadrature_points;
        let mut by_direction: Vec<(Slope, JackknifeSample)> = Vec::new();
        let mut weighted = Vec::with_capacity(edges.len());
        for e in &edges {
            let idx = match by_direction.iter().position(|(s, _)| *s == e.direction) {
                Some(i) => i,
                None => {
                    let avg = self.line_average(&e.direction, grid, depth, n_samples)?;
                    by_direction.push((e.direction, avg.sample));
                    by_direction.len() - 1
                }
            };
            weighted.push((e.length / total, idx));
        }
        let parts: Vec<(f64, &JackknifeSample)> = weighted.iter().map(|&(w, i)| (w, &by_direction[i].1)).collect();
        Ok((JackknifeSample::combine(&parts)?, by_direction.len()))
    }

    /// Length-weighted average of the line entropies of the edges.
    pub fn polygon_entropy(&mut self, poly: &PolygonSpec, depth: u32, n_samples: u64) -> Result<EntropyEstimate> {
        let (s, directions) = self.polygon_sample(poly, depth, n_samples)?;
        let mut e = self.finish(&s, depth, n_samples, Method::MonteCarlo);
        e.diagnostics.insert("edges".into(), poly.edge_count() as f64);
        e.diagnostics.insert("distinct_directions".into(), directions as f64);
        Ok(e)
    }

    /// Polygon entropy of the `n_polygon`-chord polygonization of `c`.
    pub fn curve_entropy(&mut self, curve: &CurveSpec, n_polygon: usize, depth: u32, n_samples: u64) -> Result<EntropyEstimate> {
        curve.validate_trace()?;
        let poly = polygonize(curve, n_polygon)?;
        let mut e = self.polygon_entropy(&poly.polygon, depth, n_samples)?;
        e.diagnostics.insert("polygonization_deviation".into(), poly.tangent_deviation);
        e.diagnostics.insert("polygon_edges".into(), n_polygon as f64);
        Ok(e)
    }

    /// Specific contour entropy along a line with `0 ≤ λ ≤ 1`:
    /// `(1/(1+λ)) [∫_0^1 H(sharp past) dt + ∫_{1−λ}^1 H(past ∪ (0,1)) dt]`
    /// by midpoint quadrature on `grid` points per integral.
    pub fn contour_line_entropy(&mut self, slope: &Slope, depth: u32, n_samples: u64, grid: usize) -> Result<EntropyEstimate> {
        let lambda = slope.to_f64();
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::invalid("contour entropy needs 0 <= λ <= 1"));
        }
        if grid < 1 {
            return Err(Error::invalid("quadrature grid must be positive"));
        }
        let point = |lo: Scalar, width: Scalar, k: usize| -> TorusPoint {
            let mid = Scalar::ratio(2 * k as i64 + 1, 2 * grid as i64);
            TorusPoint::new(lo.add(width.mul(mid)))
        };
        let exact_or_real = |s: Scalar| if slope.is_rational() { s } else { Scalar::Real(s.to_f64()) };
        let lam = exact_or_real(slope.value());
        let mut parts = Vec::new();
        for k in 0..grid {
            let t = point(Scalar::int(0), Scalar::int(1), k);
            let spec = PastWindowSpec::new(*slope, t, depth, PastVariant::ContourSharp)?;
            parts.push((1.0 / grid as f64, self.conditional_sample(&spec, n_samples)?));
        }
        if lambda > 0.0 {
            let lo = exact_or_real(Scalar::int(1).sub(lam));
            for k in 0..grid {
                let t = point(lo, lam, k);
                let spec = PastWindowSpec::new(*slope, t, depth, PastVariant::ContourWithAbove)?;
                parts.push((lambda / grid as f64, self.conditional_sample(&spec, n_samples)?));
            }
        }
        let scaled: Vec<(f64, &JackknifeSample)> = parts.iter().map(|(w, s)| (w / (1.0 + lambda), s)).collect();
        let s = JackknifeSample::combine(&scaled)?;
        let mut e = self.finish(&s, depth, n_samples, Method::Quadrature { grid });
        e.method = Method::Quadrature { grid };
        if grid == 1 {
            e.flag("low_accuracy_single_point_quadrature");
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Boundary, SamplerConfig};
    use std::f64::consts::LN_2;

    fn settings(seed: u64) -> McSettings {
        McSettings {
            sampler: SamplerConfig { seed, burn_in_sweeps: 200, thinning_sweeps: 2, replicas: 8 },
            window: 32,
            ..McSettings::default()
        }
    }

    #[test]
    fn iid_paths_are_exact() {
        let mut e = EntropyEstimator::new(FieldModel::uniform(2).unwrap(), McSettings::default()).unwrap();
        let est = e.line_entropy_rational(1, 2, 6, 0).unwrap();
        assert_eq!(est.method, Method::Exact);
        assert!((est.value - LN_2).abs() < 1e-15);
        assert_eq!(est.std_error, 0.0);
        let mut e = EntropyEstimator::new(FieldModel::iid(vec![0.9, 0.1]).unwrap(), McSettings::default()).unwrap();
        let spec = PastWindowSpec::lattice(Slope::rational(1, 3).unwrap(), TorusPoint::zero(), 3).unwrap();
        assert!((e.conditional_entropy(&spec, 0).unwrap().value - 0.325083).abs() < 1e-6);
        let irr = e.line_entropy_irrational(2f64.sqrt() - 1.0, 1, 6, 0).unwrap();
        assert!(irr.flags.iter().any(|f| f.contains("low_accuracy")));
    }

    #[test]
    fn insufficient_samples_reports_requirement() {
        let m = FieldModel::ising(0.2, 0.0, Boundary::Periodic).unwrap();
        let mut e = EntropyEstimator::new(m, settings(1)).unwrap();
        let spec = PastWindowSpec::lattice(Slope::horizontal(), TorusPoint::zero(), 4).unwrap();
        match e.conditional_entropy(&spec, 100) {
            Err(Error::InsufficientSamples { required, given }) => {
                assert_eq!(required, 320);
                assert_eq!(given, 100);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infinite_temperature_matches_uniform() {
        let m = FieldModel::ising(0.0, 0.0, Boundary::Periodic).unwrap();
        let mut e = EntropyEstimator::new(m, settings(3)).unwrap();
        let est = e.line_entropy_rational(1, 2, 4, 40_000).unwrap();
        assert!(est.std_error > 0.0);
        assert!((est.value - LN_2).abs() < 3.0 * est.std_error + 1e-4, "{est:?}");
    }

    #[test]
    fn forced_monte_carlo_on_iid_tracks_closed_form() {
        let mut s = settings(5);
        s.force_monte_carlo = true;
        let mut e = EntropyEstimator::new(FieldModel::iid(vec![0.9, 0.1]).unwrap(), s).unwrap();
        let spec = PastWindowSpec::lattice(Slope::rational(1, 2).unwrap(), TorusPoint::zero(), 3).unwrap();
        let est = e.conditional_entropy(&spec, 50_000).unwrap();
        assert_eq!(est.samples, 50_000);
        assert!((est.value - 0.325083).abs() < 4.0 * est.std_error + 1e-3, "{est:?}");
    }

    #[test]
    fn tables_are_shared_and_deterministic() {
        let m = FieldModel::ising(0.3, 0.0, Boundary::Plus).unwrap();
        let mut a = EntropyEstimator::new(m.clone(), settings(9)).unwrap();
        let mut b = EntropyEstimator::new(m, settings(9)).unwrap();
        let off = [Site::new(-1, 0), Site::new(-2, 0)];
        let t1 = a.table(&off, 5000).unwrap();
        let t2 = a.table(&[Site::new(-2, 0), Site::new(-1, 0)], 5000).unwrap();
        assert!(Arc::ptr_eq(&t1, &t2));
        assert_eq!(t1.total(), 5000.0);
        assert_eq!(b.table(&off, 5000).unwrap().counts(), t1.counts());
    }

    #[test]
    fn polygon_and_contour_reduce_to_lines() {
        let m = FieldModel::ising(0.3, 0.0, Boundary::Periodic).unwrap();
        let mut e = EntropyEstimator::new(m, settings(11)).unwrap();
        let sq = PolygonSpec::square(1.0).unwrap();
        let p = e.polygon_entropy(&sq, 3, 20_000).unwrap();
        let hx = e.line_entropy(&Slope::horizontal(), 3, 20_000).unwrap();
        let hy = e.line_entropy(&Slope::vertical(), 3, 20_000).unwrap();
        assert!((p.value - 0.5 * (hx.value + hy.value)).abs() < 1e-12);
        let c = e.contour_line_entropy(&Slope::horizontal(), 3, 20_000, 4).unwrap();
        assert!((c.value - hx.value).abs() < 1e-12);
        let scaled = e.polygon_entropy(&sq.scaled(2.0).unwrap(), 3, 20_000).unwrap();
        assert_eq!(scaled.value, p.value);
    }

    #[test]
    fn contour_entropy_of_uniform_field() {
        let mut e = EntropyEstimator::new(FieldModel::uniform(2).unwrap(), McSettings::default()).unwrap();
        let half = Slope::rational(1, 2).unwrap();
        let v = e.contour_line_entropy(&half, 6, 0, 8).unwrap();
        assert!((v.value - LN_2).abs() < 1e-12);
    }
}
