use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rand::seq::SliceRandom;
use serde::Serialize;

use super::bound::{bound_functional, BoundValue};
use crate::entropy::{relative_entropy_line, EntropyEstimator};
use crate::error::{Error, Result};
use crate::fields::replica_rng;
use crate::geometry::{classify_slope, direction_slope, PolygonSpec};

/// Maps a unit edge direction to a specific relative entropy.
pub trait DirectionOracle {
    fn entropy(&mut self, direction: [f64; 2]) -> Result<f64>;
}

/// The same value in every direction.
#[derive(Clone, Copy, Debug)]
pub struct ConstantOracle(pub f64);

impl DirectionOracle for ConstantOracle {
    fn entropy(&mut self, _direction: [f64; 2]) -> Result<f64> {
        Ok(self.0)
    }
}

/// Synthetic profile `base · (1 + strength·|λ|)`, cheapest along the axes.
#[derive(Clone, Copy, Debug)]
pub struct AxisFavoringOracle {
    pub base: f64,
    pub strength: f64,
}

impl Default for AxisFavoringOracle {
    fn default() -> Self {
        AxisFavoringOracle { base: 1.0, strength: 0.5 }
    }
}

impl DirectionOracle for AxisFavoringOracle {
    fn entropy(&mut self, direction: [f64; 2]) -> Result<f64> {
        let (_, lambda) = direction_slope(direction)?;
        Ok(self.base * (1.0 + self.strength * lambda.abs()))
    }
}

/// Monte Carlo relative entropy between two field models along lines of the
/// requested direction.
pub struct EstimatorOracle<'a> {
    pub minus: &'a mut EntropyEstimator,
    pub plus: &'a mut EntropyEstimator,
    pub depth: u32,
    pub n_samples: u64,
}

impl DirectionOracle for EstimatorOracle<'_> {
    fn entropy(&mut self, direction: [f64; 2]) -> Result<f64> {
        let (axis, lambda) = direction_slope(direction)?;
        let slope = classify_slope(lambda.abs(), axis);
        Ok(relative_entropy_line(self.minus, self.plus, &slope, self.depth, self.n_samples)?.value)
    }
}

/// Memoizes an oracle on a grid of undirected angles.
///
/// Every direction is rounded to the nearest grid angle in `[0°, 180°)` and
/// the inner oracle is queried there, so `v` and `-v` share one value.
pub struct CachedOracle<O> {
    inner: O,
    resolution_deg: f64,
    cache: BTreeMap<i64, f64>,
    queries: u64,
}

impl<O: DirectionOracle> CachedOracle<O> {
    pub fn new(inner: O, resolution_deg: f64) -> Result<Self> {
        if !(resolution_deg > 0.0 && resolution_deg <= 45.0) {
            return Err(Error::invalid("cache resolution must lie in (0, 45] degrees"));
        }
        Ok(CachedOracle { inner, resolution_deg, cache: BTreeMap::new(), queries: 0 })
    }

    /// Number of distinct grid directions evaluated so far.
    pub fn evaluations(&self) -> usize {
        self.cache.len()
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: DirectionOracle> DirectionOracle for CachedOracle<O> {
    fn entropy(&mut self, direction: [f64; 2]) -> Result<f64> {
        self.queries += 1;
        let cells = (180.0 / self.resolution_deg).round() as i64;
        let angle = direction[1].atan2(direction[0]).rem_euclid(PI);
        let key = ((angle.to_degrees() / self.resolution_deg).round() as i64).rem_euclid(cells);
        if let Some(&h) = self.cache.get(&key) {
            return Ok(h);
        }
        let a = (key as f64 * self.resolution_deg).to_radians();
        let h = self.inner.entropy([a.cos(), a.sin()])?;
        self.cache.insert(key, h);
        Ok(h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ShapeFamily {
    /// Regular polygons with `k_min..=k_max` vertices, each tried at
    /// `rotations` evenly spaced orientations.
    RegularKGon { k_min: usize, k_max: usize, rotations: usize },
    /// Star-shaped polygons with a fixed vertex count, started from the
    /// regular polygon with a vertex on the positive x-axis.
    VertexFree { vertices: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimizeSettings {
    pub family: ShapeFamily,
    /// Maximum number of functional evaluations.
    pub budget: usize,
    pub seed: u64,
    /// Local search stops once both step sizes fall below this.
    pub tolerance: f64,
}

impl OptimizeSettings {
    pub fn new(family: ShapeFamily) -> Self {
        OptimizeSettings { family, budget: 5000, seed: 1, tolerance: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub gamma: f64,
    pub incumbent: f64,
    pub accepted: bool,
}

/// Best shape found. Its bound is an upper estimate of the infimum over all
/// shapes of the given area, since the search is local.
#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub polygon: PolygonSpec,
    pub bound: BoundValue,
    pub trace: Vec<TraceRow>,
    pub evaluations: usize,
    pub converged: bool,
}

impl OptimizationResult {
    /// Share of the perimeter on edges within `tol` of an axis direction.
    pub fn axis_aligned_fraction(&self, tol: f64) -> f64 {
        axis_aligned_fraction(&self.polygon, tol)
    }
}

pub fn axis_aligned_fraction(poly: &PolygonSpec, tol: f64) -> f64 {
    let edges = poly.edges();
    let aligned: f64 = edges.iter().filter(|e| e.lambda.abs() <= tol).map(|e| e.length).sum();
    aligned / poly.length()
}

/// Functional value of `poly` with per-edge entropies taken from the oracle.
pub fn evaluate_shape(poly: &PolygonSpec, oracle: &mut dyn DirectionOracle) -> Result<BoundValue> {
    let entropies = poly
        .edges()
        .iter()
        .map(|e| {
            let d = [(e.end[0] - e.start[0]) / e.length, (e.end[1] - e.start[1]) / e.length];
            oracle.entropy(d)
        })
        .collect::<Result<Vec<_>>>()?;
    bound_functional(poly, &entropies)
}

struct Search<'a> {
    oracle: &'a mut dyn DirectionOracle,
    budget: usize,
    trace: Vec<TraceRow>,
    best: Option<(PolygonSpec, BoundValue)>,
}

impl Search<'_> {
    fn exhausted(&self) -> bool {
        self.trace.len() >= self.budget
    }

    fn incumbent(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |(_, b)| b.gamma)
    }

    /// Evaluates a candidate and keeps it if it strictly improves.
    fn offer(&mut self, poly: PolygonSpec) -> Result<bool> {
        let b = evaluate_shape(&poly, self.oracle)?;
        let accepted = b.gamma < self.incumbent();
        if accepted {
            self.best = Some((poly, b.clone()));
        }
        self.trace.push(TraceRow {
            iteration: self.trace.len(),
            gamma: b.gamma,
            incumbent: self.incumbent(),
            accepted,
        });
        Ok(accepted)
    }

    fn at_floor(&self) -> bool {
        self.incumbent() <= 0.0
    }

    fn finish(self, converged: bool) -> Result<OptimizationResult> {
        let evaluations = self.trace.len();
        let (polygon, bound) = self.best.ok_or_else(|| Error::Estimation("no candidate shape was evaluated".into()))?;
        Ok(OptimizationResult { polygon, bound, trace: self.trace, evaluations, converged })
    }
}

/// Derivative-free minimization of the bound functional over shapes of area
/// `alpha`. Deterministic for a fixed seed.
///
/// A candidate with value 0 ends the search immediately: the functional is
/// non-negative for non-negative entropies.
pub fn optimize_shape(
    alpha: f64,
    oracle: &mut dyn DirectionOracle,
    settings: &OptimizeSettings,
) -> Result<OptimizationResult> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if settings.budget == 0 {
        return Err(Error::invalid("optimizer budget must be positive"));
    }
    if !(settings.tolerance > 0.0) {
        return Err(Error::invalid("optimizer tolerance must be positive"));
    }
    let mut search = Search { oracle, budget: settings.budget, trace: Vec::new(), best: None };
    match settings.family {
        ShapeFamily::RegularKGon { k_min, k_max, rotations } => {
            if k_min < 3 || k_max < k_min || rotations == 0 {
                return Err(Error::invalid("regular family needs 3 <= k_min <= k_max and rotations >= 1"));
            }
            for k in k_min..=k_max {
                for j in 0..rotations {
                    if search.exhausted() {
                        return search.finish(false);
                    }
                    let rotation = TAU / k as f64 * j as f64 / rotations as f64;
                    search.offer(PolygonSpec::regular(k, alpha, rotation)?)?;
                    if search.at_floor() {
                        return search.finish(true);
                    }
                }
            }
            search.finish(true)
        }
        ShapeFamily::VertexFree { vertices } => vertex_free(alpha, vertices, settings, search),
    }
}

fn polar_polygon(angles: &[f64], radii: &[f64], alpha: f64) -> Option<PolygonSpec> {
    let v: Vec<[f64; 2]> = angles.iter().zip(radii).map(|(a, r)| [r * a.cos(), r * a.sin()]).collect();
    let raw = PolygonSpec::new(v, true).ok()?;
    raw.scaled((alpha / raw.area()).sqrt()).ok()
}

fn angles_ordered(angles: &[f64]) -> bool {
    let n = angles.len();
    (0..n).all(|i| {
        let gap = if i + 1 < n { angles[i + 1] - angles[i] } else { angles[0] + TAU - angles[i] };
        gap > 0.0 && gap < PI
    })
}

fn vertex_free(
    alpha: f64,
    vertices: usize,
    settings: &OptimizeSettings,
    mut search: Search<'_>,
) -> Result<OptimizationResult> {
    if vertices < 3 {
        return Err(Error::invalid("vertex-free family needs at least 3 vertices"));
    }
    let step0 = TAU / vertices as f64;
    let mut angles: Vec<f64> = (0..vertices).map(|i| step0 * i as f64).collect();
    let mut radii = vec![1.0; vertices];
    let start = polar_polygon(&angles, &radii, alpha).ok_or_else(|| Error::invalid("degenerate start polygon"))?;
    search.offer(start)?;
    if search.at_floor() {
        return search.finish(true);
    }
    let mut rng = replica_rng(settings.seed, 0);
    let mut d_angle = step0 / 4.0;
    let mut d_radius = 0.2;
    // coordinate 2i is the angle of vertex i, 2i+1 its log-radius
    let mut coords: Vec<usize> = (0..2 * vertices).collect();
    loop {
        if d_angle < settings.tolerance && d_radius < settings.tolerance {
            return search.finish(true);
        }
        coords.shuffle(&mut rng);
        let mut improved = false;
        for &c in &coords {
            for sign in [1.0, -1.0] {
                if search.exhausted() {
                    return search.finish(false);
                }
                let (mut a, mut r) = (angles.clone(), radii.clone());
                if c % 2 == 0 {
                    a[c / 2] += sign * d_angle;
                    if !angles_ordered(&a) {
                        continue;
                    }
                } else {
                    r[c / 2] *= (sign * d_radius).exp();
                }
                let Some(poly) = polar_polygon(&a, &r, alpha) else { continue };
                if search.offer(poly)? {
                    angles = a;
                    radii = r;
                    improved = true;
                    if search.at_floor() {
                        return search.finish(true);
                    }
                    break;
                }
            }
        }
        if !improved {
            d_angle /= 2.0;
            d_radius /= 2.0;
        }
    }
}
