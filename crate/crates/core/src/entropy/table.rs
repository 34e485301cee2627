use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fields::{FieldModel, Region};
use crate::geometry::Site;

/// `H(p) = −Σ p ln p`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

/// `KL(p‖q) = Σ p ln(p/q)`; infinite when `q` misses mass of `p`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| if b > 0.0 { a * (a / b).ln() } else { f64::INFINITY })
        .sum()
}

/// KL divergence between binary distributions given by their `+` masses.
pub fn binary_kl(p_plus: f64, q_plus: f64) -> f64 {
    kl_divergence(&[1.0 - p_plus, p_plus], &[1.0 - q_plus, q_plus])
}

/// Slack of the inverse triangle inequality
/// `KL(ν‖λ) − KL(ν‖μ) − KL(μ‖λ)` for binary distributions.
pub fn inverse_triangle_gap(nu_plus: f64, mu_plus: f64, lambda_plus: f64) -> f64 {
    binary_kl(nu_plus, lambda_plus) - binary_kl(nu_plus, mu_plus) - binary_kl(mu_plus, lambda_plus)
}

/// Counts of the origin symbol per past pattern. Patterns are encoded as
/// mixed-radix integers over the ordered offsets. Counts are kept per
/// replica so that leave-one-replica-out tables are available.
#[derive(Clone, Debug)]
pub struct ConditionalTable {
    alphabet_size: usize,
    offsets: Vec<Site>,
    replicas: Vec<BTreeMap<u64, Vec<f64>>>,
}

pub(crate) fn check_key_space(alphabet_size: usize, pattern_len: usize) -> Result<()> {
    let bits = (alphabet_size as f64).log2() * pattern_len as f64;
    if bits >= 63.0 {
        return Err(Error::invalid(format!(
            "past of {pattern_len} sites over {alphabet_size} symbols is too large to encode"
        )));
    }
    Ok(())
}

impl ConditionalTable {
    pub fn new(alphabet_size: usize, offsets: Vec<Site>, replicas: usize) -> Result<Self> {
        check_key_space(alphabet_size, offsets.len())?;
        Ok(ConditionalTable { alphabet_size, offsets, replicas: vec![BTreeMap::new(); replicas] })
    }

    pub(crate) fn from_replicas(alphabet_size: usize, offsets: Vec<Site>, replicas: Vec<BTreeMap<u64, Vec<f64>>>) -> Self {
        ConditionalTable { alphabet_size, offsets, replicas }
    }

    pub fn offsets(&self) -> &[Site] {
        &self.offsets
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn replica_count(&self) -> usize {
        self.replicas.len()
    }

    pub fn encode(&self, pattern: &[u8]) -> u64 {
        encode_pattern(self.alphabet_size, pattern)
    }

    pub fn add(&mut self, replica: usize, pattern_key: u64, symbol: u8, weight: f64) {
        let k = self.alphabet_size;
        self.replicas[replica].entry(pattern_key).or_insert_with(|| vec![0.0; k])[symbol as usize] += weight;
    }

    /// Counts pooled over all replicas, or over all but `skip`.
    pub fn pooled(&self, skip: Option<usize>) -> BTreeMap<u64, Vec<f64>> {
        let mut out: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
        for (r, map) in self.replicas.iter().enumerate() {
            if Some(r) == skip {
                continue;
            }
            for (key, counts) in map {
                let e = out.entry(*key).or_insert_with(|| vec![0.0; self.alphabet_size]);
                for (a, b) in e.iter_mut().zip(counts) {
                    *a += b;
                }
            }
        }
        out
    }

    pub fn counts(&self) -> BTreeMap<u64, Vec<f64>> {
        self.pooled(None)
    }

    pub fn total(&self) -> f64 {
        self.replicas.iter().flat_map(|m| m.values()).flatten().sum()
    }

    /// Merges another table with the same offsets, replica by replica.
    pub fn merge(&mut self, other: &ConditionalTable) -> Result<()> {
        if other.offsets != self.offsets || other.replicas.len() != self.replicas.len() {
            return Err(Error::invalid("tables with different layouts cannot be merged"));
        }
        for (mine, theirs) in self.replicas.iter_mut().zip(&other.replicas) {
            for (key, counts) in theirs {
                let e = mine.entry(*key).or_insert_with(|| vec![0.0; self.alphabet_size]);
                for (a, b) in e.iter_mut().zip(counts) {
                    *a += b;
                }
            }
        }
        Ok(())
    }

    /// Exact joint table of the origin and its past under an Ising model on
    /// a small free-standing window, by enumerating every configuration
    /// with its Boltzmann weight.
    pub fn exact_ising(model: &FieldModel, region: Region, origin: Site, offsets: Vec<Site>) -> Result<Self> {
        let FieldModel::Ising { beta, field, boundary } = *model else {
            return Err(Error::Unsupported("exact enumeration is implemented for Ising models".into()));
        };
        let area = region.area();
        if area > 20 {
            return Err(Error::invalid("exact enumeration window larger than 20 sites"));
        }
        let outside = boundary
            .outside_spin()
            .ok_or_else(|| Error::Unsupported("exact enumeration needs a fixed or free boundary".into()))?;
        let origin_idx = region.index(origin).ok_or_else(|| Error::invalid("origin outside window"))?;
        let past_idx = offsets
            .iter()
            .map(|&o| region.index(origin + o).ok_or_else(|| Error::invalid("past site outside window")))
            .collect::<Result<Vec<_>>>()?;
        let mut table = ConditionalTable::new(2, offsets, 1)?;
        let weights = ising_weights(region.width, region.height, beta, field, outside);
        let mut pattern = vec![0u8; past_idx.len()];
        for (state, w) in weights.iter().enumerate() {
            for (slot, &i) in pattern.iter_mut().zip(&past_idx) {
                *slot = ((state >> i) & 1) as u8;
            }
            let key = table.encode(&pattern);
            table.add(0, key, ((state >> origin_idx) & 1) as u8, *w);
        }
        Ok(table)
    }
}

fn ising_weights(w: usize, h: usize, beta: f64, field: f64, outside: i8) -> Vec<f64> {
    let area = w * h;
    let spin = |state: usize, x: isize, y: isize| -> f64 {
        if x < 0 || y < 0 || x as usize >= w || y as usize >= h {
            outside as f64
        } else if (state >> (y as usize * w + x as usize)) & 1 == 1 {
            1.0
        } else {
            -1.0
        }
    };
    let energies: Vec<f64> = (0..1usize << area)
        .map(|state| {
            let mut e = 0.0;
            for y in 0..h as isize {
                for x in 0..w as isize {
                    let s = spin(state, x, y);
                    // bonds to the right and upwards, plus the outside bonds on the left and bottom
                    e += beta * s * (spin(state, x + 1, y) + spin(state, x, y + 1)) + field * s;
                    if x == 0 {
                        e += beta * s * spin(state, x - 1, y);
                    }
                    if y == 0 {
                        e += beta * s * spin(state, x, y - 1);
                    }
                }
            }
            e
        })
        .collect();
    let max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = energies.iter().map(|e| (e - max).exp()).collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / z).collect()
}

pub(crate) fn encode_pattern(alphabet_size: usize, pattern: &[u8]) -> u64 {
    pattern.iter().rev().fold(0u64, |acc, &v| acc * alphabet_size as u64 + v as u64)
}

/// Smoothed conditional distribution `(c_s + α) / (n + Kα)`.
pub fn smoothed(counts: &[f64], pseudocount: f64) -> Vec<f64> {
    let n: f64 = counts.iter().sum();
    let denom = n + pseudocount * counts.len() as f64;
    if denom <= 0.0 {
        return vec![1.0 / counts.len() as f64; counts.len()];
    }
    counts.iter().map(|c| (c + pseudocount) / denom).collect()
}

/// `Σ_pattern p̂(pattern) · H(p̂(· | pattern))`.
pub fn conditional_entropy_of(counts: &BTreeMap<u64, Vec<f64>>, pseudocount: f64) -> f64 {
    let total: f64 = counts.values().flatten().sum();
    if total <= 0.0 {
        return f64::NAN;
    }
    counts
        .values()
        .map(|c| {
            let n: f64 = c.iter().sum();
            n / total * shannon_entropy(&smoothed(c, pseudocount))
        })
        .sum()
}
