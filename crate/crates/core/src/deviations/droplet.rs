use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{PolygonSpec, Site, SiteSet, SiteSetKind};

/// Interior set `C` and exterior annulus `D` of the droplet built from
/// two blowups of a polygon inside the box `V_n = [-n, n]²`.
#[derive(Clone, Debug, Serialize)]
pub struct DropletSpec {
    #[serde(skip)]
    pub polygon: PolygonSpec,
    pub alpha: f64,
    pub n: u64,
    pub k_n: u64,
    pub l_n: u64,
    pub c_sites: SiteSet,
    pub d_sites: SiteSet,
}

impl DropletSpec {
    pub fn box_size(&self) -> usize {
        box_size(self.n)
    }

    pub fn c_fraction(&self) -> f64 {
        self.c_sites.len() as f64 / self.box_size() as f64
    }

    pub fn d_fraction(&self) -> f64 {
        self.d_sites.len() as f64 / self.box_size() as f64
    }
}

fn box_size(n: u64) -> usize {
    let side = 2 * n as usize + 1;
    side * side
}

fn box_sites(n: i64) -> impl Iterator<Item = Site> {
    (-n..=n).flat_map(move |y| (-n..=n).map(move |x| Site::new(x, y)))
}

/// `k = ⌊√(α|V_n| / area)⌋`, `l = ⌊k + √n⌋`, `C` the lattice points strictly
/// inside `kπ` and `D` the sites of `V_n` not strictly inside `lπ`.
/// For `α = 1` the droplet fills the whole box.
pub fn droplet_sets(poly: &PolygonSpec, alpha: f64, n: u64) -> Result<DropletSpec> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if !poly.is_closed() {
        return Err(Error::invalid("droplet polygon must be closed"));
    }
    if !poly.interior_contains([0.0, 0.0]) {
        return Err(Error::invalid("the origin must lie inside the droplet polygon"));
    }
    let volume = box_size(n) as f64;
    let k_n = (alpha * volume / poly.area()).sqrt().floor() as u64;
    let l_n = (k_n as f64 + (n as f64).sqrt()).floor() as u64;
    let ni = n as i64;
    let (c, d) = if alpha == 1.0 {
        (box_sites(ni).collect(), Vec::new())
    } else {
        let inner = poly.scaled(k_n.max(1) as f64)?;
        let c: Vec<Site> = if k_n == 0 {
            Vec::new()
        } else {
            inner
                .interior_lattice_points()
                .into_iter()
                .filter(|s| s.x.abs() <= ni && s.y.abs() <= ni)
                .collect()
        };
        let outer = poly.scaled(l_n.max(1) as f64)?;
        let d = box_sites(ni).filter(|s| !outer.interior_contains([s.x as f64, s.y as f64])).collect();
        (c, d)
    };
    Ok(DropletSpec {
        polygon: poly.clone(),
        alpha,
        n,
        k_n,
        l_n,
        c_sites: SiteSet::from_sites(c, SiteSetKind::Region),
        d_sites: SiteSet::from_sites(d, SiteSetKind::Region),
    })
}
