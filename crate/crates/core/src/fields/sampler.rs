use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{Configuration, Region};
use super::model::{heat_bath_plus, FieldModel};
use crate::error::{Error, Result};

/// Name of the generator recorded in experiment metadata.
pub const RNG_NAME: &str = "ChaCha8Rng";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub burn_in_sweeps: u64,
    pub thinning_sweeps: u64,
    pub replicas: u32,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { seed: 1, burn_in_sweeps: 1000, thinning_sweeps: 5, replicas: 10 }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thinning_sweeps < 1 {
            return Err(Error::invalid("thinning_sweeps must be at least 1"));
        }
        if self.replicas < 1 {
            return Err(Error::invalid("replicas must be at least 1"));
        }
        Ok(())
    }
}

/// Independent stream for replica `r`, seeded with `seed + r`.
pub fn replica_rng(seed: u64, replica: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(replica as u64))
}

/// One i.i.d. configuration drawn from replica 0's stream.
pub fn sample_iid(model: &FieldModel, region: Region, cfg: &SamplerConfig) -> Result<Configuration> {
    cfg.validate()?;
    sample_iid_with(model, region, &mut replica_rng(cfg.seed, 0))
}

pub fn sample_iid_with(model: &FieldModel, region: Region, rng: &mut impl Rng) -> Result<Configuration> {
    let FieldModel::Iid { marginal } = model else {
        return Err(Error::Unsupported("sample_iid needs an Iid model".into()));
    };
    let dist = WeightedIndex::new(marginal).map_err(|e| Error::invalid(e.to_string()))?;
    let values = (0..region.area()).map(|_| dist.sample(rng) as u8).collect();
    Configuration::new(region, values)
}

/// Heat-bath chain for an Ising model on a finite window. Each sweep
/// updates every site once in raster order (rows from the bottom, left to
/// right). Iterating yields a snapshot after the burn-in and then after
/// every `thinning_sweeps` further sweeps.
#[derive(Clone, Debug)]
pub struct IsingChain {
    region: Region,
    /// One extra trailing cell holds the fixed outside spin.
    spins: Vec<i8>,
    neighbors: Vec<[u32; 4]>,
    p_plus: [f64; 9],
    rng: ChaCha8Rng,
    burn_in: u64,
    thinning: u64,
    started: bool,
    sweeps: u64,
}

impl IsingChain {
    pub fn new(model: &FieldModel, region: Region, cfg: &SamplerConfig, replica: u32) -> Result<Self> {
        cfg.validate()?;
        let FieldModel::Ising { beta, field, boundary } = *model else {
            return Err(Error::Unsupported("Gibbs sampling needs an Ising model".into()));
        };
        let (w, h) = (region.width, region.height);
        let area = w * h;
        let ghost = area as u32;
        let outside = boundary.outside_spin();
        let mut neighbors = Vec::with_capacity(area);
        for y in 0..h {
            for x in 0..w {
                let at = |dx: isize, dy: isize| -> u32 {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    let inside = nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h;
                    if inside {
                        (ny as usize * w + nx as usize) as u32
                    } else if outside.is_some() {
                        ghost
                    } else {
                        let (wx, wy) = (nx.rem_euclid(w as isize) as usize, ny.rem_euclid(h as isize) as usize);
                        (wy * w + wx) as u32
                    }
                };
                neighbors.push([at(1, 0), at(-1, 0), at(0, 1), at(0, -1)]);
            }
        }
        let mut rng = replica_rng(cfg.seed, replica);
        let mut spins: Vec<i8> = match outside {
            Some(1) => vec![1; area],
            Some(-1) => vec![-1; area],
            _ => (0..area).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect(),
        };
        spins.push(outside.unwrap_or(0));
        let mut p_plus = [0.0; 9];
        for (k, p) in p_plus.iter_mut().enumerate() {
            *p = heat_bath_plus(beta, field, k as f64 - 4.0);
        }
        Ok(IsingChain {
            region,
            spins,
            neighbors,
            p_plus,
            rng,
            burn_in: cfg.burn_in_sweeps,
            thinning: cfg.thinning_sweeps,
            started: false,
            sweeps: 0,
        })
    }

    pub fn sweep(&mut self) {
        let area = self.neighbors.len();
        for i in 0..area {
            let nb = self.neighbors[i];
            let s: i32 = nb.iter().map(|&j| self.spins[j as usize] as i32).sum();
            let p = self.p_plus[(s + 4) as usize];
            self.spins[i] = if self.rng.gen::<f64>() < p { 1 } else { -1 };
        }
        self.sweeps += 1;
    }

    pub fn sweeps_done(&self) -> u64 {
        self.sweeps
    }

    pub fn region(&self) -> Region {
        self.region
    }

    /// Current spins (`-1` / `+1`) in row-major order.
    pub fn spins(&self) -> &[i8] {
        &self.spins[..self.neighbors.len()]
    }

    pub fn configuration(&self) -> Configuration {
        let values = self.spins().iter().map(|&s| u8::from(s > 0)).collect();
        Configuration::new(self.region, values).expect("matching window")
    }

    /// Runs the sweeps that precede the next snapshot.
    pub fn advance(&mut self) {
        let n = if self.started { self.thinning } else { self.burn_in };
        self.started = true;
        for _ in 0..n {
            self.sweep();
        }
    }
}

impl Iterator for IsingChain {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        self.advance();
        Some(self.configuration())
    }
}

/// Snapshot stream of replica 0.
pub fn sample_gibbs(model: &FieldModel, region: Region, cfg: &SamplerConfig) -> Result<IsingChain> {
    IsingChain::new(model, region, cfg, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Boundary;

    #[test]
    fn iid_sampling_is_deterministic_and_fair() {
        let m = FieldModel::uniform(2).unwrap();
        let r = Region::new(0, 0, 1000, 1000).unwrap();
        let cfg = SamplerConfig { seed: 42, ..Default::default() };
        let a = sample_iid(&m, r, &cfg).unwrap();
        assert_eq!(a, sample_iid(&m, r, &cfg).unwrap());
        let freq = a.values().iter().filter(|&&v| v == 1).count() as f64 / 1e6;
        assert!((freq - 0.5).abs() < 2e-3, "{freq}");
    }

    #[test]
    fn near_degenerate_marginal() {
        let m = FieldModel::iid(vec![1e-6, 1.0 - 1e-6]).unwrap();
        let r = Region::new(0, 0, 30, 30).unwrap();
        let c = sample_iid(&m, r, &SamplerConfig::default()).unwrap();
        assert!(c.values().iter().filter(|&&v| v == 1).count() >= 899);
    }

    #[test]
    fn gibbs_streams_are_deterministic() {
        let m = FieldModel::ising(0.4, 0.0, Boundary::Periodic).unwrap();
        let r = Region::new(0, 0, 8, 8).unwrap();
        let cfg = SamplerConfig { seed: 7, burn_in_sweeps: 10, thinning_sweeps: 2, replicas: 1 };
        let a: Vec<_> = sample_gibbs(&m, r, &cfg).unwrap().take(5).collect();
        let b: Vec<_> = sample_gibbs(&m, r, &cfg).unwrap().take(5).collect();
        assert_eq!(a, b);
        let mut chain = sample_gibbs(&m, r, &cfg).unwrap();
        chain.next();
        assert_eq!(chain.sweeps_done(), 10);
        chain.next();
        assert_eq!(chain.sweeps_done(), 12);
    }

    #[test]
    fn gibbs_rejects_iid_and_bad_config() {
        let r = Region::new(0, 0, 2, 2).unwrap();
        assert!(sample_gibbs(&FieldModel::uniform(2).unwrap(), r, &SamplerConfig::default()).is_err());
        let m = FieldModel::ising(0.1, 0.0, Boundary::Free).unwrap();
        let bad = SamplerConfig { thinning_sweeps: 0, ..Default::default() };
        assert!(sample_gibbs(&m, r, &bad).is_err());
    }
}
