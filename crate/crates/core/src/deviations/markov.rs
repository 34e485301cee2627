use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldModel, IsingChain, Region, SamplerConfig};
use crate::geometry::{polygon_contour_approx, polygon_lattice_approx, PolygonSpec, Site, SiteSetKind};

/// Largest number of random neighbor sites whose patterns are enumerated.
pub const MAX_PATTERN_BITS: usize = 20;
/// Largest interior whose configurations are enumerated.
pub const MAX_INTERIOR_SITES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MarkovSettings {
    /// The window is `[-r, r]²`.
    pub window_radius: usize,
    pub sampler: SamplerConfig,
}

impl Default for MarkovSettings {
    fn default() -> Self {
        MarkovSettings { window_radius: 3, sampler: SamplerConfig::default() }
    }
}

/// Outcome of comparing `E[φ | everything outside A]` with `E[φ | B]` where
/// `B` is a digitized polygon boundary, `A` the interior lattice points not
/// on `B`, and `φ` the mean spin over `A`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkovReport {
    pub boundary: SiteSetKind,
    pub interior_sites: usize,
    pub boundary_sites: usize,
    /// Window sites adjacent to `A`.
    pub neighborhood_sites: usize,
    /// Sites adjacent to `A` that are not on `B`.
    pub leak_sites: usize,
    /// Largest change of `E[φ | outside]` when only the sites off `B` vary,
    /// by exact enumeration. Zero exactly when `B` shields `A`.
    pub exact_deviation: f64,
    /// Monte Carlo mean of `|E[φ | outside] - E[φ | B]|` under the model.
    pub mc_deviation: f64,
    pub mc_std_error: f64,
    pub samples: u64,
}

struct Geometry {
    interior: Vec<Site>,
    /// In-window neighbors of the interior; boundary sites first.
    neighbors: Vec<Site>,
    on_boundary: usize,
    boundary: Vec<Site>,
}

fn geometry(poly: &PolygonSpec, kind: SiteSetKind, window: Region) -> Result<Geometry> {
    if !poly.is_closed() {
        return Err(Error::invalid("the boundary polygon must be closed"));
    }
    let b = match kind {
        SiteSetKind::LatticeApprox => polygon_lattice_approx(poly, 1)?,
        SiteSetKind::ContourApprox => polygon_contour_approx(poly, 1)?,
        SiteSetKind::Region => return Err(Error::invalid("boundary must be a lattice or contour approximation")),
    };
    if let Some(s) = b.sites().iter().find(|s| !window.contains(**s)) {
        return Err(Error::invalid(format!("boundary site ({}, {}) lies outside the window", s.x, s.y)));
    }
    let interior: Vec<Site> = poly.interior_lattice_points().into_iter().filter(|s| !b.contains(s)).collect();
    if interior.is_empty() {
        return Err(Error::invalid("the polygon has no interior sites off its boundary"));
    }
    if interior.len() > MAX_INTERIOR_SITES {
        return Err(Error::invalid(format!(
            "window too large: {} interior sites exceed the limit of {MAX_INTERIOR_SITES}",
            interior.len()
        )));
    }
    let mut near: Vec<Site> = Vec::new();
    for s in &interior {
        for t in s.neighbors() {
            if window.contains(t) && !interior.contains(&t) && !near.contains(&t) {
                near.push(t);
            }
        }
    }
    near.sort_by_key(|s| (!b.contains(s), s.y, s.x));
    let on_boundary = near.iter().filter(|s| b.contains(s)).count();
    if near.len() > MAX_PATTERN_BITS {
        return Err(Error::invalid(format!(
            "window too large: {} neighbor sites exceed the limit of {MAX_PATTERN_BITS}",
            near.len()
        )));
    }
    Ok(Geometry { interior, neighbors: near, on_boundary, boundary: b.into_sites() })
}

/// `E[φ | neighbor pattern]` for every pattern of the interior's neighbors,
/// indexed by the bit pattern (bit j set means neighbor j is `+`).
fn conditional_means(model: &FieldModel, g: &Geometry, window: Region) -> Result<Vec<f64>> {
    let FieldModel::Ising { beta, field, boundary } = *model else {
        return Err(Error::Unsupported("the Markov check needs an Ising model".into()));
    };
    let Some(outside) = boundary.outside_spin() else {
        return Err(Error::Unsupported("the Markov check needs a fixed or free boundary".into()));
    };
    let na = g.interior.len();
    let nn = g.neighbors.len();
    // energy terms that do not depend on the neighbor pattern
    let mut inner_pairs = Vec::new();
    let mut fixed_field = vec![field; na];
    let mut links: Vec<Vec<usize>> = vec![Vec::new(); na];
    for (i, s) in g.interior.iter().enumerate() {
        for t in s.neighbors() {
            if let Some(j) = g.interior.iter().position(|u| *u == t) {
                if j > i {
                    inner_pairs.push((i, j));
                }
            } else if let Some(j) = g.neighbors.iter().position(|u| *u == t) {
                links[i].push(j);
            } else if !window.contains(t) {
                fixed_field[i] += beta * outside as f64;
            }
        }
    }
    let spin = |bits: usize, i: usize| if bits >> i & 1 == 1 { 1.0 } else { -1.0 };
    let configs: Vec<(f64, f64)> = (0..1usize << na)
        .map(|a| {
            let pair: f64 = inner_pairs.iter().map(|&(i, j)| beta * spin(a, i) * spin(a, j)).sum();
            let own: f64 = (0..na).map(|i| fixed_field[i] * spin(a, i)).sum();
            let phi = (0..na).map(|i| spin(a, i)).sum::<f64>() / na as f64;
            (pair + own, phi)
        })
        .collect();
    let mut out = Vec::with_capacity(1 << nn);
    let mut local = vec![0.0; na];
    let mut energies = vec![0.0; configs.len()];
    for pattern in 0..1usize << nn {
        for i in 0..na {
            local[i] = beta * links[i].iter().map(|&j| spin(pattern, j)).sum::<f64>();
        }
        let mut top = f64::NEG_INFINITY;
        for (a, (e0, _)) in configs.iter().enumerate() {
            let e = e0 + (0..na).map(|i| local[i] * spin(a, i)).sum::<f64>();
            energies[a] = e;
            top = top.max(e);
        }
        let (mut z, mut m) = (0.0, 0.0);
        for (a, (_, phi)) in configs.iter().enumerate() {
            let w = (energies[a] - top).exp();
            z += w;
            m += w * phi;
        }
        out.push(m / z);
    }
    Ok(out)
}

/// Tests whether the digitized boundary of `poly` shields its interior in a
/// small window: exactly, by enumerating neighbor patterns, and by sampling
/// `n_samples` Gibbs snapshots of the window.
pub fn markov_boundary_check(
    model: &FieldModel,
    poly: &PolygonSpec,
    n_samples: u64,
    kind: SiteSetKind,
    settings: &MarkovSettings,
) -> Result<MarkovReport> {
    model.validate()?;
    if n_samples == 0 {
        return Err(Error::invalid("the Markov check needs at least one sample"));
    }
    let window = Region::centered(settings.window_radius);
    let g = geometry(poly, kind, window)?;
    let means = conditional_means(model, &g, window)?;
    let split = g.on_boundary;
    let mut ranges: HashMap<usize, (f64, f64)> = HashMap::new();
    for (pattern, &m) in means.iter().enumerate() {
        let r = ranges.entry(pattern & ((1 << split) - 1)).or_insert((m, m));
        r.0 = r.0.min(m);
        r.1 = r.1.max(m);
    }
    let exact_deviation = ranges.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max);

    let mut chain = IsingChain::new(model, window, &settings.sampler, 0)?;
    let neighbor_idx: Vec<usize> = g.neighbors.iter().map(|s| window.index(*s).expect("in window")).collect();
    let boundary_idx: Vec<usize> = g.boundary.iter().map(|s| window.index(*s).expect("in window")).collect();
    let mut draws: Vec<(Vec<bool>, f64)> = Vec::with_capacity(n_samples as usize);
    for _ in 0..n_samples {
        chain.advance();
        let spins = chain.spins();
        let pattern = neighbor_idx.iter().enumerate().filter(|(_, &i)| spins[i] > 0).fold(0usize, |p, (j, _)| p | 1 << j);
        let key = boundary_idx.iter().map(|&i| spins[i] > 0).collect();
        draws.push((key, means[pattern]));
    }
    let mut groups: BTreeMap<&[bool], (f64, f64)> = BTreeMap::new();
    for (key, v) in &draws {
        let e = groups.entry(key.as_slice()).or_insert((0.0, 0.0));
        e.0 += v;
        e.1 += 1.0;
    }
    let dev: Vec<f64> = draws
        .iter()
        .map(|(key, v)| {
            let (sum, count) = groups[key.as_slice()];
            (v - sum / count).abs()
        })
        .collect();
    let n = dev.len() as f64;
    let mean = dev.iter().sum::<f64>() / n;
    let var = if dev.len() > 1 { dev.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Ok(MarkovReport {
        boundary: kind,
        interior_sites: g.interior.len(),
        boundary_sites: g.boundary.len(),
        neighborhood_sites: g.neighbors.len(),
        leak_sites: g.neighbors.len() - split,
        exact_deviation,
        mc_deviation: mean,
        mc_std_error: (var / n).sqrt(),
        samples: n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Boundary;

    fn square() -> PolygonSpec {
        PolygonSpec::new(vec![[-2.0, -2.0], [2.0, -2.0], [2.0, 2.0], [-2.0, 2.0]], true).unwrap()
    }

    fn settings() -> MarkovSettings {
        MarkovSettings { sampler: SamplerConfig { burn_in_sweeps: 50, thinning_sweeps: 1, ..SamplerConfig::default() }, ..MarkovSettings::default() }
    }

    #[test]
    fn contour_square_shields() {
        let m = FieldModel::ising(0.3, 0.0, Boundary::Plus).unwrap();
        let r = markov_boundary_check(&m, &square(), 200, SiteSetKind::ContourApprox, &settings()).unwrap();
        assert_eq!(r.interior_sites, 9);
        assert!(r.exact_deviation <= 1e-10);
    }

    #[test]
    fn independent_field_has_no_deviation() {
        let m = FieldModel::ising(0.0, 0.0, Boundary::Free).unwrap();
        let r = markov_boundary_check(&m, &square(), 200, SiteSetKind::LatticeApprox, &settings()).unwrap();
        assert!(r.mc_deviation <= 3.0 * r.mc_std_error + 1e-12);
    }

    #[test]
    fn large_window_is_rejected() {
        let m = FieldModel::ising(0.3, 0.0, Boundary::Plus).unwrap();
        let big = PolygonSpec::new(vec![[-3.0, -3.0], [3.0, -3.0], [3.0, 3.0], [-3.0, 3.0]], true).unwrap();
        let err = markov_boundary_check(&m, &big, 10, SiteSetKind::LatticeApprox, &settings()).unwrap_err();
        assert!(err.to_string().contains("window too large"));
    }
}
