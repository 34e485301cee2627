use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::estimate::EntropyEstimate;
use super::estimator::EntropyEstimator;
use super::past::{lexicographic_past, past_sites, PastWindowSpec};
use super::table::smoothed;
use crate::error::{Error, Result};
use crate::fields::{exact_pattern_probability, replica_rng, sample_iid_with, Boundary, Configuration, FieldModel, IsingChain, Region};
use crate::geometry::{skew_offset, torus_translate, Axis, LinearMap, Site, TorusPoint};

/// Replica index of the chain that produces fresh samples for
/// convergence experiments, kept apart from the estimation replicas.
pub const FRESH_REPLICA: u32 = 1000;

/// Read access to a configuration, optionally wrapping around as a torus.
#[derive(Clone, Copy, Debug)]
pub struct FieldView<'a> {
    config: &'a Configuration,
    periodic: bool,
}

impl<'a> FieldView<'a> {
    pub fn new(config: &'a Configuration, periodic: bool) -> Self {
        FieldView { config, periodic }
    }

    pub fn get(&self, s: Site) -> Option<u8> {
        if self.periodic {
            let r = self.config.region();
            let x = (s.x - r.x0).rem_euclid(r.width as i64) + r.x0;
            let y = (s.y - r.y0).rem_euclid(r.height as i64) + r.y0;
            self.config.get(Site::new(x, y))
        } else {
            self.config.get(s)
        }
    }
}

/// Sites `L_{λ,a}(i)` for `0 ≤ i ≤ n` with the past shape of each,
/// obtained from the shift identity `L_{λ,a}(I+i) = L_{λ,τ^i({a})}(I) + L_{λ,a}(i)`.
struct LinePlan {
    sites: Vec<Site>,
    shape_of: Vec<usize>,
    shapes: Vec<Vec<Site>>,
}

fn line_plan(map: &LinearMap, n: u64, depth: u32) -> Result<LinePlan> {
    let a = TorusPoint::new(map.intercept);
    let mut index: HashMap<Vec<Site>, usize> = HashMap::new();
    let mut shapes = Vec::new();
    let mut sites = Vec::with_capacity(n as usize + 1);
    let mut shape_of = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let t = torus_translate(&map.slope, a, i as i64);
        let spec = PastWindowSpec::lattice(map.slope, t, depth)?;
        let mut shape = past_sites(&spec).into_sites();
        shape.sort();
        let id = *index.entry(shape.clone()).or_insert_with(|| {
            shapes.push(shape);
            shapes.len() - 1
        });
        sites.push(skew_offset(map, i));
        shape_of.push(id);
    }
    Ok(LinePlan { sites, shape_of, shapes })
}

/// Conditional probabilities used to score a configuration.
enum Scorer {
    Exact(Vec<f64>),
    Tables { tables: Vec<BTreeMap<u64, Vec<f64>>>, pseudocount: f64, alphabet: usize },
}

impl Scorer {
    fn build(est: &mut EntropyEstimator, plan: &LinePlan, depth: u32, n_samples: u64) -> Result<Scorer> {
        if est.is_exact() {
            return Ok(Scorer::Exact(est.marginal().expect("iid").to_vec()));
        }
        est.check_samples(depth, n_samples)?;
        let tables = plan
            .shapes
            .iter()
            .map(|s| est.table(s, n_samples).map(|t| t.counts()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scorer::Tables {
            tables,
            pseudocount: est.settings().pseudocount,
            alphabet: est.model().alphabet().size(),
        })
    }

    /// `−ln P̂[ω(site) | past]` for every site of the plan.
    fn informations(&self, plan: &LinePlan, field: &FieldView) -> Result<Vec<f64>> {
        let read = |s: Site| field.get(s).ok_or_else(|| Error::invalid(format!("site {s:?} outside the sampled window")));
        plan.sites
            .iter()
            .zip(&plan.shape_of)
            .map(|(&site, &shape)| {
                let v = read(site)? as usize;
                match self {
                    Scorer::Exact(marginal) => Ok(-marginal[v].ln()),
                    Scorer::Tables { tables, pseudocount, alphabet } => {
                        let mut key = 0u64;
                        for o in plan.shapes[shape].iter().rev() {
                            key = key * *alphabet as u64 + read(site + *o)? as u64;
                        }
                        let p = match tables[shape].get(&key) {
                            Some(c) => smoothed(c, *pseudocount)[v],
                            None => 1.0 / *alphabet as f64,
                        };
                        Ok(-p.ln())
                    }
                }
            })
            .collect()
    }
}

/// `(n+1)⁻¹ Σ_{i=0}^{n} −ln P̂[ω(L_{λ,a}(i)) | depth-limited past]` for one
/// configuration. Iid models use the exact marginal; other models use the
/// smoothed plug-in tables built from `n_samples` conditioning samples.
pub fn rescaled_information(
    est: &mut EntropyEstimator,
    map: &LinearMap,
    n: u64,
    depth: u32,
    n_samples: u64,
    field: &FieldView,
) -> Result<f64> {
    let plan = line_plan(map, n, depth)?;
    let scorer = Scorer::build(est, &plan, depth, n_samples)?;
    let info = scorer.informations(&plan, field)?;
    Ok(info.iter().enumerate().fold(0.0, |m, (i, v)| running_mean(m, *v, i)))
}

/// Mean after folding in the `i`-th value. A constant sequence keeps its
/// value bit for bit, which a plain sum divided by the count does not.
fn running_mean(mean: f64, value: f64, i: usize) -> f64 {
    mean + (value - mean) / (i + 1) as f64
}

/// The two sides of the telescoping identity for an Iid model:
/// `−(n+1)⁻¹ ln P[pattern on L_{λ,a}([0,n])]` and the mean of the
/// per-site conditional informations.
pub fn information_decomposition(model: &FieldModel, map: &LinearMap, n: u64, depth: u32, field: &FieldView) -> Result<(f64, f64)> {
    if !model.is_iid() {
        return Err(Error::Unsupported("the exact decomposition needs an Iid model".into()));
    }
    let plan = line_plan(map, n, depth)?;
    let pattern = plan
        .sites
        .iter()
        .map(|&s| field.get(s).map(|v| (s, v)).ok_or_else(|| Error::invalid("line leaves the window")))
        .collect::<Result<Vec<_>>>()?;
    let direct = -exact_pattern_probability(model, &pattern)?.ln() / (n + 1) as f64;
    let FieldModel::Iid { marginal } = model else { unreachable!() };
    let info = Scorer::Exact(marginal.clone()).informations(&plan, field)?;
    Ok((direct, info.iter().sum::<f64>() / info.len() as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceConfig {
    pub n_list: Vec<u64>,
    pub depth: u32,
    /// Conditioning samples for the plug-in tables.
    pub table_samples: u64,
    /// Independent field samples per row.
    pub fresh_samples: usize,
    /// Radius of the lexicographic half-window for the volume baseline.
    pub baseline_radius: Option<u32>,
    /// Selects an independent stream of fresh samples, so that runs which
    /// differ only in the line still draw independent configurations.
    #[serde(default)]
    pub fresh_stream: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub mean: f64,
    /// Sample standard deviation over the fresh samples.
    pub spread: f64,
    pub std_error: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Conditional entropy given a lexicographic half-window (volume order).
    pub baseline: Option<EntropyEstimate>,
}

/// Shannon-McMillan ladder along `L_{λ,a}([0, n])`. Every fresh sample
/// contributes to every `n` of the ladder through prefix means.
pub fn convergence_experiment(est: &mut EntropyEstimator, map: &LinearMap, cfg: &ConvergenceConfig) -> Result<ConvergenceReport> {
    if cfg.n_list.is_empty() || cfg.n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("n_list must be nonempty and strictly increasing"));
    }
    if cfg.fresh_samples < 2 {
        return Err(Error::invalid("convergence experiments need at least 2 fresh samples"));
    }
    let n_max = *cfg.n_list.last().expect("nonempty");
    let plan = line_plan(map, n_max, cfg.depth)?;
    let scorer = Scorer::build(est, &plan, cfg.depth, cfg.table_samples)?;
    let (region, periodic) = sample_window(est, &plan, map.slope.axis)?;

    let mut per_sample: Vec<Vec<f64>> = Vec::with_capacity(cfg.fresh_samples);
    let mut score = |config: &Configuration| -> Result<()> {
        let info = scorer.informations(&plan, &FieldView::new(config, periodic))?;
        let mut prefix = 0.0;
        let mut means = Vec::with_capacity(cfg.n_list.len());
        let mut next = 0;
        for (i, v) in info.iter().enumerate() {
            prefix = running_mean(prefix, *v, i);
            if next < cfg.n_list.len() && i as u64 == cfg.n_list[next] {
                means.push(prefix);
                next += 1;
            }
        }
        per_sample.push(means);
        Ok(())
    };
    let settings = est.settings().clone();
    match est.model() {
        FieldModel::Iid { .. } => {
            let mut rng = replica_rng(settings.sampler.seed, FRESH_REPLICA + cfg.fresh_stream);
            for _ in 0..cfg.fresh_samples {
                score(&sample_iid_with(est.model(), region, &mut rng)?)?;
            }
        }
        FieldModel::Ising { .. } => {
            let chain = IsingChain::new(est.model(), region, &settings.sampler, FRESH_REPLICA + cfg.fresh_stream)?;
            for config in chain.take(cfg.fresh_samples) {
                score(&config)?;
            }
        }
    }

    let m = per_sample.len() as f64;
    let rows = cfg
        .n_list
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let vals: Vec<f64> = per_sample.iter().map(|s| s[j]).collect();
            let mean = vals.iter().sum::<f64>() / m;
            let spread = (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (m - 1.0)).sqrt();
            ConvergenceRow { n, mean, spread, std_error: spread / m.sqrt(), samples: per_sample.len() }
        })
        .collect();

    let baseline = match cfg.baseline_radius {
        Some(r) => {
            let offsets = lexicographic_past(r);
            let s = est.offsets_sample(&offsets, offsets.len() as u32, cfg.table_samples)?;
            Some(est.finish(&s, offsets.len() as u32, cfg.table_samples, super::estimate::Method::MonteCarlo))
        }
        None => None,
    };
    Ok(ConvergenceReport { rows, baseline })
}

/// Window holding every site the plan reads. Periodic Ising models use a
/// thin torus strip that the line wraps around. Iid models use the same
/// strip: the line visits each column once, so wrapped sites never collide
/// and stay independent. Other models use the bounding box plus the margin.
fn sample_window(est: &EntropyEstimator, plan: &LinePlan, axis: Axis) -> Result<(Region, bool)> {
    let margin = est.settings().margin as i64;
    let mut b = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for (site, &shape) in plan.sites.iter().zip(&plan.shape_of) {
        for s in std::iter::once(*site).chain(plan.shapes[shape].iter().map(|o| *site + *o)) {
            b = (b.0.min(s.x), b.1.max(s.x), b.2.min(s.y), b.3.max(s.y));
        }
    }
    let periodic = matches!(est.model(), FieldModel::Iid { .. } | FieldModel::Ising { boundary: Boundary::Periodic, .. });
    let region = if periodic {
        let strip = est.settings().strip_height;
        match axis {
            Axis::XAxis => Region::new(b.0, b.2, (b.1 - b.0 + 1 + margin) as usize, strip)?,
            Axis::YAxis => Region::new(b.0, b.2, strip, (b.3 - b.2 + 1 + margin) as usize)?,
        }
    } else {
        Region::new(b.0 - margin, b.2 - margin, (b.1 - b.0 + 1 + 2 * margin) as usize, (b.3 - b.2 + 1 + 2 * margin) as usize)?
    };
    if region.area() > est.settings().max_window_sites {
        return Err(Error::invalid(format!(
            "window too large: {} sites exceed the limit of {}",
            region.area(),
            est.settings().max_window_sites
        )));
    }
    Ok((region, periodic))
}
