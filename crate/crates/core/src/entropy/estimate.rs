use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Method {
    Exact,
    MonteCarlo,
    Quadrature { grid: usize },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exact => f.write_str("exact"),
            Method::MonteCarlo => f.write_str("montecarlo"),
            Method::Quadrature { grid } => write!(f, "quadrature({grid})"),
        }
    }
}

/// An entropy value in nats with its standard error and provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub std_error: f64,
    pub depth: u32,
    pub samples: u64,
    pub method: Method,
    /// Named auxiliary numbers (quadrature spread, unseen patterns, ...).
    pub diagnostics: BTreeMap<String, f64>,
    pub flags: Vec<String>,
}

impl EntropyEstimate {
    pub fn exact(value: f64, depth: u32) -> Self {
        EntropyEstimate {
            value,
            std_error: 0.0,
            depth,
            samples: 0,
            method: Method::Exact,
            diagnostics: BTreeMap::new(),
            flags: Vec::new(),
        }
    }

    pub fn from_jackknife(sample: &JackknifeSample, depth: u32, samples: u64, method: Method) -> Self {
        let method = if sample.is_exact() && method == Method::MonteCarlo { Method::Exact } else { method };
        let mut est = EntropyEstimate {
            value: sample.value(),
            std_error: sample.std_error(),
            depth,
            samples,
            method,
            diagnostics: BTreeMap::new(),
            flags: Vec::new(),
        };
        if sample.loo.len() == 1 {
            est.flag("single_replica_no_error_estimate");
        }
        est
    }

    pub fn flag(&mut self, f: &str) {
        if !self.flags.iter().any(|g| g == f) {
            self.flags.push(f.to_string());
        }
    }

    pub fn diagnostic(&self, key: &str) -> Option<f64> {
        self.diagnostics.get(key).copied()
    }

    /// Number of joint standard errors separating two estimates.
    pub fn z_score(&self, other: &EntropyEstimate) -> f64 {
        let joint = self.std_error.hypot(other.std_error);
        let diff = (self.value - other.value).abs();
        if joint == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / joint
        }
    }
}

/// A statistic evaluated on the full replica pool and with each replica
/// left out in turn. An empty `loo` marks an exact value.
#[derive(Clone, Debug, PartialEq)]
pub struct JackknifeSample {
    pub full: f64,
    pub loo: Vec<f64>,
}

impl JackknifeSample {
    pub fn exact(value: f64) -> Self {
        JackknifeSample { full: value, loo: Vec::new() }
    }

    pub fn is_exact(&self) -> bool {
        self.loo.is_empty()
    }

    fn loo_mean(&self) -> f64 {
        self.loo.iter().sum::<f64>() / self.loo.len() as f64
    }

    /// Bias-corrected value `R·θ̂ − (R−1)·mean θ₋ᵣ`.
    pub fn value(&self) -> f64 {
        let r = self.loo.len();
        if r < 2 {
            return self.full;
        }
        r as f64 * self.full - (r - 1) as f64 * self.loo_mean()
    }

    pub fn std_error(&self) -> f64 {
        let r = self.loo.len();
        if r < 2 {
            return 0.0;
        }
        let m = self.loo_mean();
        let ss: f64 = self.loo.iter().map(|v| (v - m) * (v - m)).sum();
        ((r - 1) as f64 / r as f64 * ss).sqrt()
    }

    /// `Σ w_i · s_i`, evaluated replica by replica so that correlations
    /// between parts sharing the same samples are kept.
    pub fn combine(parts: &[(f64, &JackknifeSample)]) -> Result<JackknifeSample> {
        let r = parts.iter().map(|(_, s)| s.loo.len()).max().unwrap_or(0);
        if parts.iter().any(|(_, s)| !s.is_exact() && s.loo.len() != r) {
            return Err(Error::Estimation("jackknife parts use different replica counts".into()));
        }
        let full = parts.iter().map(|(w, s)| w * s.full).sum();
        let loo = (0..r)
            .map(|k| parts.iter().map(|(w, s)| w * if s.is_exact() { s.full } else { s.loo[k] }).sum())
            .collect();
        Ok(JackknifeSample { full, loo })
    }

    pub fn sub(&self, other: &JackknifeSample) -> Result<JackknifeSample> {
        JackknifeSample::combine(&[(1.0, self), (-1.0, other)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_samples_stay_exact() {
        let a = JackknifeSample::exact(std::f64::consts::LN_2);
        let c = JackknifeSample::combine(&[(0.5, &a), (0.5, &a)]).unwrap();
        assert!(c.is_exact());
        assert_eq!(c.std_error(), 0.0);
    }

    #[test]
    fn jackknife_of_a_mean_is_the_standard_error() {
        let xs = [1.0, 2.0, 4.0, 7.0];
        let n = xs.len() as f64;
        let full = xs.iter().sum::<f64>() / n;
        let loo = xs.iter().map(|x| (full * n - x) / (n - 1.0)).collect();
        let s = JackknifeSample { full, loo };
        let var = xs.iter().map(|x| (x - full) * (x - full)).sum::<f64>() / (n - 1.0);
        assert!((s.std_error() - (var / n).sqrt()).abs() < 1e-12);
        assert!((s.value() - full).abs() < 1e-12);
    }

    #[test]
    fn combine_keeps_correlation() {
        let s = JackknifeSample { full: 1.0, loo: vec![0.9, 1.1, 1.0] };
        let d = s.sub(&s).unwrap();
        assert_eq!(d.std_error(), 0.0);
        let other = JackknifeSample { full: 1.0, loo: vec![1.0; 2] };
        assert!(s.sub(&other).is_err());
    }
}
