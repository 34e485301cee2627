use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::Alphabet;
use crate::error::{Error, Result};
use crate::geometry::Site;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Plus,
    Minus,
    Free,
    Periodic,
}

impl Boundary {
    /// Spin value of sites outside the window; `None` for periodic wrap.
    pub fn outside_spin(self) -> Option<i8> {
        match self {
            Boundary::Plus => Some(1),
            Boundary::Minus => Some(-1),
            Boundary::Free => Some(0),
            Boundary::Periodic => None,
        }
    }

    pub fn flipped(self) -> Boundary {
        match self {
            Boundary::Plus => Boundary::Minus,
            Boundary::Minus => Boundary::Plus,
            b => b,
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Boundary::Plus),
            "minus" | "-" => Ok(Boundary::Minus),
            "free" => Ok(Boundary::Free),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::parse(format!("unknown boundary {other:?}"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Boundary::Plus => "plus",
            Boundary::Minus => "minus",
            Boundary::Free => "free",
            Boundary::Periodic => "periodic",
        };
        f.write_str(s)
    }
}

/// A stationary random field on `Z²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldModel {
    /// Independent sites with a common marginal over the ordered alphabet.
    Iid { marginal: Vec<f64> },
    /// Nearest-neighbor Ising model on a finite window with the given
    /// boundary condition.
    Ising { beta: f64, field: f64, boundary: Boundary },
}

impl FieldModel {
    pub fn iid(marginal: Vec<f64>) -> Result<Self> {
        let m = FieldModel::Iid { marginal };
        m.validate()?;
        Ok(m)
    }

    pub fn uniform(size: usize) -> Result<Self> {
        FieldModel::iid(vec![1.0 / size as f64; size])
    }

    pub fn ising(beta: f64, field: f64, boundary: Boundary) -> Result<Self> {
        let m = FieldModel::Ising { beta, field, boundary };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FieldModel::Iid { marginal } => {
                Alphabet::new(marginal.len())?;
                if marginal.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
                    return Err(Error::invalid("marginal entries must be positive"));
                }
                let total: f64 = marginal.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::invalid(format!("marginal sums to {total}, not 1")));
                }
            }
            FieldModel::Ising { beta, field, .. } => {
                if !(*beta >= 0.0) || !beta.is_finite() {
                    return Err(Error::invalid("beta must be a nonnegative number"));
                }
                if !field.is_finite() {
                    return Err(Error::invalid("external field must be finite"));
                }
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            FieldModel::Iid { marginal } => Alphabet::new(marginal.len()).expect("validated size"),
            FieldModel::Ising { .. } => Alphabet::binary(),
        }
    }

    pub fn is_iid(&self) -> bool {
        matches!(self, FieldModel::Iid { .. })
    }

    /// The model with `+` and `-` exchanged.
    pub fn spin_flipped(&self) -> FieldModel {
        match self {
            FieldModel::Iid { marginal } => FieldModel::Iid { marginal: marginal.iter().rev().copied().collect() },
            FieldModel::Ising { beta, field, boundary } => {
                FieldModel::Ising { beta: *beta, field: -field, boundary: boundary.flipped() }
            }
        }
    }
}

impl FromStr for FieldModel {
    type Err = Error;

    /// `iid:0.5,0.5` or `ising:beta=0.3,h=0,boundary=periodic`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        match kind.to_ascii_lowercase().as_str() {
            "iid" => {
                let marginal = args
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().map_err(|_| Error::parse(format!("bad probability {p:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                FieldModel::iid(marginal)
            }
            "ising" => {
                let (mut beta, mut field, mut boundary) = (None, 0.0, Boundary::Periodic);
                for kv in args.split(',').filter(|a| !a.trim().is_empty()) {
                    let (k, v) = kv.split_once('=').ok_or_else(|| Error::parse(format!("expected key=value, got {kv:?}")))?;
                    let num = || v.trim().parse::<f64>().map_err(|_| Error::parse(format!("bad number {v:?}")));
                    match k.trim() {
                        "beta" => beta = Some(num()?),
                        "h" | "field" => field = num()?,
                        "boundary" => boundary = v.parse()?,
                        other => return Err(Error::parse(format!("unknown ising parameter {other:?}"))),
                    }
                }
                let beta = beta.ok_or_else(|| Error::parse("ising model needs beta"))?;
                FieldModel::ising(beta, field, boundary)
            }
            other => Err(Error::parse(format!("unknown model kind {other:?}"))),
        }
    }
}

impl fmt::Display for FieldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldModel::Iid { marginal } => {
                let parts: Vec<String> = marginal.iter().map(|p| p.to_string()).collect();
                write!(f, "iid:{}", parts.join(","))
            }
            FieldModel::Ising { beta, field, boundary } => {
                write!(f, "ising:beta={beta},h={field},boundary={boundary}")
            }
        }
    }
}

/// Heat-bath probability of `+` given the sum of the four neighbor spins.
pub fn heat_bath_plus(beta: f64, field: f64, neighbor_sum: f64) -> f64 {
    let e = beta * neighbor_sum + field;
    1.0 / (1.0 + (-2.0 * e).exp())
}

/// Single-site conditional distribution `(P(-), P(+))` given the four
/// neighbor symbols.
pub fn local_conditional(model: &FieldModel, neighbors: [u8; 4]) -> Result<Vec<f64>> {
    match model {
        FieldModel::Ising { beta, field, .. } => {
            if neighbors.iter().any(|&v| v > 1) {
                return Err(Error::invalid("Ising neighbors must be binary symbols"));
            }
            let sum: f64 = neighbors.iter().map(|&v| if v == 1 { 1.0 } else { -1.0 }).sum();
            let p = heat_bath_plus(*beta, *field, sum);
            Ok(vec![1.0 - p, p])
        }
        FieldModel::Iid { .. } => Err(Error::Unsupported("local_conditional is defined for Ising models".into())),
    }
}

/// Product of marginal probabilities over the pattern's sites.
pub fn exact_pattern_probability(model: &FieldModel, pattern: &[(Site, u8)]) -> Result<f64> {
    let FieldModel::Iid { marginal } = model else {
        return Err(Error::Unsupported("exact pattern probabilities need an Iid model".into()));
    };
    let mut seen = std::collections::HashSet::new();
    let mut p = 1.0;
    for &(site, v) in pattern {
        if !seen.insert(site) {
            return Err(Error::invalid(format!("pattern repeats site {site:?}")));
        }
        p *= marginal.get(v as usize).ok_or_else(|| Error::invalid(format!("symbol {v} outside alphabet")))?;
    }
    Ok(p)
}
