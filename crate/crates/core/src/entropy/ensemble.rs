use std::collections::{BTreeMap, HashMap};

use rand::distributions::{Distribution, WeightedIndex};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::{encode_pattern, ConditionalTable};
use crate::error::{Error, Result};
use crate::fields::{replica_rng, Boundary, FieldModel, IsingChain, Region, SamplerConfig};
use crate::geometry::Site;

/// Monte Carlo settings shared by all estimators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    pub sampler: SamplerConfig,
    /// Side of the square sampling window.
    pub window: usize,
    /// Extra distance between usable origins and a non-periodic window
    /// edge, on top of the reach of the past.
    pub margin: usize,
    /// Laplace pseudocount per (pattern, symbol) cell.
    pub pseudocount: f64,
    /// Midpoint quadrature points on the torus.
    pub quadrature_points: usize,
    /// Estimate Iid models by sampling instead of the closed form.
    pub force_monte_carlo: bool,
    /// Height of the periodic strip used for long lines.
    pub strip_height: usize,
    /// Upper bound on the number of sites of any sampling window.
    pub max_window_sites: usize,
}

impl Default for McSettings {
    fn default() -> Self {
        McSettings {
            sampler: SamplerConfig::default(),
            window: 64,
            margin: 8,
            pseudocount: 0.5,
            quadrature_points: 32,
            force_monte_carlo: false,
            strip_height: 32,
            max_window_sites: 4_000_000,
        }
    }
}

impl McSettings {
    pub fn validate(&self) -> Result<()> {
        self.sampler.validate()?;
        if self.window < 1 || self.strip_height < 1 {
            return Err(Error::invalid("window sizes must be positive"));
        }
        if !(self.pseudocount > 0.0) || !self.pseudocount.is_finite() {
            return Err(Error::invalid("pseudocount must be positive"));
        }
        if self.quadrature_points < 1 {
            return Err(Error::invalid("quadrature needs at least one point"));
        }
        Ok(())
    }
}

enum Source {
    Ising(Box<IsingChain>),
    Iid { rng: ChaCha8Rng, dist: WeightedIndex<f64> },
}

struct ReplicaStream {
    source: Source,
    snapshots: Vec<Vec<u8>>,
}

impl ReplicaStream {
    fn extend_to(&mut self, count: usize, area: usize) {
        while self.snapshots.len() < count {
            let snap = match &mut self.source {
                Source::Ising(chain) => {
                    chain.advance();
                    chain.spins().iter().map(|&s| u8::from(s > 0)).collect()
                }
                Source::Iid { rng, dist } => (0..area).map(|_| dist.sample(rng) as u8).collect(),
            };
            self.snapshots.push(snap);
        }
    }
}

/// Per-replica snapshot streams of one model, grown on demand. The `k`-th
/// snapshot of a replica never depends on how many were requested before.
pub(crate) struct Ensemble {
    region: Region,
    periodic: bool,
    alphabet_size: usize,
    replicas: Vec<ReplicaStream>,
}

impl Ensemble {
    pub fn new(model: &FieldModel, settings: &McSettings) -> Result<Self> {
        let region = Region::centered(settings.window / 2);
        let region = Region::new(region.x0, region.y0, settings.window, settings.window)?;
        let replicas = (0..settings.sampler.replicas)
            .map(|r| {
                let source = match model {
                    FieldModel::Ising { .. } => {
                        Source::Ising(Box::new(IsingChain::new(model, region, &settings.sampler, r)?))
                    }
                    FieldModel::Iid { marginal } => Source::Iid {
                        rng: replica_rng(settings.sampler.seed, r),
                        dist: WeightedIndex::new(marginal).map_err(|e| Error::invalid(e.to_string()))?,
                    },
                };
                Ok(ReplicaStream { source, snapshots: Vec::new() })
            })
            .collect::<Result<Vec<_>>>()?;
        let periodic = matches!(model, FieldModel::Ising { boundary: Boundary::Periodic, .. });
        Ok(Ensemble { region, periodic, alphabet_size: model.alphabet().size(), replicas })
    }

    fn usable_box(&self, reach: usize, margin: usize) -> Result<(usize, usize)> {
        if self.periodic {
            return Ok((0, self.region.width));
        }
        let pad = reach + margin;
        if 2 * pad >= self.region.width {
            return Err(Error::invalid(format!(
                "window of side {} leaves no usable origins with past reach {reach} and margin {margin}",
                self.region.width
            )));
        }
        Ok((pad, self.region.width - pad))
    }

    fn quotas(&self, n_samples: u64) -> Vec<u64> {
        let r = self.replicas.len() as u64;
        (0..r).map(|k| n_samples / r + u64::from(k < n_samples % r)).collect()
    }

    /// Counts of (past pattern, origin symbol) over exactly `n_samples`
    /// origins split evenly across replicas.
    pub fn table(&mut self, offsets: &[Site], n_samples: u64, margin: usize) -> Result<ConditionalTable> {
        let reach = offsets.iter().map(|o| o.x.unsigned_abs().max(o.y.unsigned_abs()) as usize).max().unwrap_or(0);
        let (lo, hi) = self.usable_box(reach, margin)?;
        let per_snapshot = ((hi - lo) * (hi - lo)) as u64;
        let quotas = self.quotas(n_samples);
        let area = self.region.area();
        self.replicas
            .par_iter_mut()
            .zip(quotas.par_iter())
            .for_each(|(rep, &q)| rep.extend_to(q.div_ceil(per_snapshot) as usize, area));

        let (w, k, periodic) = (self.region.width, self.alphabet_size, self.periodic);
        let counts: Vec<BTreeMap<u64, Vec<f64>>> = self
            .replicas
            .par_iter()
            .zip(quotas.par_iter())
            .map(|(rep, &quota)| {
                let mut map: HashMap<u64, Vec<f64>> = HashMap::new();
                let mut pattern = vec![0u8; offsets.len()];
                let mut left = quota;
                'snaps: for snap in &rep.snapshots {
                    for y in lo..hi {
                        for x in lo..hi {
                            if left == 0 {
                                break 'snaps;
                            }
                            for (slot, o) in pattern.iter_mut().zip(offsets) {
                                let (px, py) = if periodic {
                                    ((x as i64 + o.x).rem_euclid(w as i64), (y as i64 + o.y).rem_euclid(w as i64))
                                } else {
                                    (x as i64 + o.x, y as i64 + o.y)
                                };
                                *slot = snap[py as usize * w + px as usize];
                            }
                            let key = encode_pattern(k, &pattern);
                            map.entry(key).or_insert_with(|| vec![0.0; k])[snap[y * w + x] as usize] += 1.0;
                            left -= 1;
                        }
                    }
                }
                map.into_iter().collect::<BTreeMap<_, _>>()
            })
            .collect();
        Ok(ConditionalTable::from_replicas(k, offsets.to_vec(), counts))
    }
}
