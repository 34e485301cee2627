use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{contour_approx, step_begins_after, LinearMap, Site, SiteSet, SiteSetKind, Slope, TorusPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PastVariant {
    /// `L_{λ,t}([−i, −1])`.
    Lattice,
    /// Contour past, plus the fill site below the origin when a step
    /// begins at the origin.
    ContourSharp,
    /// Contour past plus the site `(0, 1)` above the origin.
    ContourWithAbove,
}

/// The depth-`i` past of the origin along the line of slope `λ` through
/// the torus point `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PastWindowSpec {
    pub slope: Slope,
    pub torus_point: TorusPoint,
    pub depth: u32,
    pub variant: PastVariant,
}

impl PastWindowSpec {
    pub fn new(slope: Slope, torus_point: TorusPoint, depth: u32, variant: PastVariant) -> Result<Self> {
        if depth < 1 {
            return Err(Error::invalid("past depth must be at least 1"));
        }
        let v = slope.to_f64();
        if v.abs() > 1.0 {
            return Err(Error::invalid(format!("slope {v} outside [-1, 1]")));
        }
        if variant != PastVariant::Lattice && !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid("contour pasts need 0 <= λ <= 1"));
        }
        Ok(PastWindowSpec { slope, torus_point, depth, variant })
    }

    pub fn lattice(slope: Slope, torus_point: TorusPoint, depth: u32) -> Result<Self> {
        PastWindowSpec::new(slope, torus_point, depth, PastVariant::Lattice)
    }

    fn map(&self) -> LinearMap {
        LinearMap::new(self.slope, self.torus_point.value())
    }
}

/// Sites of the past window, nearest first.
pub fn past_sites(spec: &PastWindowSpec) -> SiteSet {
    let map = spec.map();
    let depth = spec.depth as i64;
    let axis = spec.slope.axis;
    match spec.variant {
        PastVariant::Lattice => {
            let sites = (1..=depth).map(|k| map.site_at(-k));
            SiteSet::from_sites(sites, SiteSetKind::LatticeApprox)
        }
        PastVariant::ContourSharp | PastVariant::ContourWithAbove => {
            let mut sites = Vec::new();
            if spec.variant == PastVariant::ContourSharp && step_begins_after(&map, -1) {
                sites.push(axis.site(0, map.floor_at(0) - 1));
            }
            let mut contour = contour_approx(&map, -depth, -1).expect("slope checked on construction").into_sites();
            contour.reverse();
            sites.extend(contour);
            if spec.variant == PastVariant::ContourWithAbove {
                sites.push(axis.site(0, 1));
            }
            SiteSet::from_sites(sites, SiteSetKind::ContourApprox)
        }
    }
}

/// Lexicographic half-window of radius `r`: all sites of `[−r, r]²`
/// strictly below the origin's row, and those left of it on its row.
pub fn lexicographic_past(radius: u32) -> Vec<Site> {
    let r = radius as i64;
    let mut out: Vec<Site> = (1..=r).map(|x| Site::new(-x, 0)).collect();
    for y in 1..=r {
        for x in -r..=r {
            out.push(Site::new(x, -y));
        }
    }
    out
}
