//! Lines over the integer lattice, their digitizations and the torus
//! rotation that tracks the fractional part of a line along the lattice.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::scalar::{real_fract, Rational, Scalar};
use crate::error::{Error, Result};

/// Which coordinate axis a line is written as a function of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    XAxis,
    YAxis,
}

impl Axis {
    /// Builds the lattice site whose coordinate along the axis is `along`
    /// and whose coordinate across it is `across`.
    pub fn site(self, along: i64, across: i64) -> Site {
        match self {
            Axis::XAxis => Site::new(along, across),
            Axis::YAxis => Site::new(across, along),
        }
    }

    pub fn other(self) -> Axis {
        match self {
            Axis::XAxis => Axis::YAxis,
            Axis::YAxis => Axis::XAxis,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SlopeKind {
    /// `p/q` in lowest terms with `q > 0`.
    Rational(Rational),
    /// A real slope the caller declares irrational.
    Irrational(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slope {
    pub kind: SlopeKind,
    pub axis: Axis,
}

impl Slope {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        Self::rational_on(p, q, Axis::XAxis)
    }

    pub fn rational_on(p: i64, q: i64, axis: Axis) -> Result<Self> {
        if q <= 0 {
            return Err(Error::invalid(format!("slope denominator must be positive, got {q}")));
        }
        let r = Rational::new(p, q);
        if r.numer().abs() > *r.denom() {
            return Err(Error::invalid(format!("slope {p}/{q} lies outside [-1, 1]")));
        }
        Ok(Slope { kind: SlopeKind::Rational(r), axis })
    }

    pub fn irrational(value: f64) -> Result<Self> {
        Self::irrational_on(value, Axis::XAxis)
    }

    pub fn irrational_on(value: f64, axis: Axis) -> Result<Self> {
        if !value.is_finite() || value.abs() > 1.0 {
            return Err(Error::invalid(format!("slope {value} lies outside [-1, 1]")));
        }
        Ok(Slope { kind: SlopeKind::Irrational(value), axis })
    }

    pub fn horizontal() -> Self {
        Slope { kind: SlopeKind::Rational(Rational::from_integer(0)), axis: Axis::XAxis }
    }

    pub fn vertical() -> Self {
        Slope { kind: SlopeKind::Rational(Rational::from_integer(0)), axis: Axis::YAxis }
    }

    /// Parses `p/q` (rational), `irr:<value>` (irrational) or a bare decimal,
    /// which is treated as irrational. A trailing `@y` selects the y-axis.
    pub fn parse(s: &str) -> Result<Self> {
        let (body, axis) = match s.trim().strip_suffix("@y") {
            Some(b) => (b, Axis::YAxis),
            None => (s.trim().strip_suffix("@x").unwrap_or(s.trim()), Axis::XAxis),
        };
        if let Some(v) = body.strip_prefix("irr:") {
            let v: f64 = v
                .parse()
                .map_err(|_| Error::invalid(format!("cannot parse slope '{s}'")))?;
            return Self::irrational_on(v, axis);
        }
        match Scalar::parse(body) {
            Some(Scalar::Exact(r)) => Self::rational_on(*r.numer(), *r.denom(), axis),
            Some(Scalar::Real(v)) => Self::irrational_on(v, axis),
            None => Err(Error::invalid(format!("cannot parse slope '{s}'"))),
        }
    }

    pub fn value(&self) -> Scalar {
        match self.kind {
            SlopeKind::Rational(r) => Scalar::Exact(r),
            SlopeKind::Irrational(v) => Scalar::Real(v),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64()
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.kind, SlopeKind::Rational(_))
    }

    /// `(p, q)` for rational slopes.
    pub fn fraction(&self) -> Option<(i64, i64)> {
        match self.kind {
            SlopeKind::Rational(r) => Some((*r.numer(), *r.denom())),
            SlopeKind::Irrational(_) => None,
        }
    }

    pub fn abs(&self) -> Slope {
        let kind = match self.kind {
            SlopeKind::Rational(r) => SlopeKind::Rational(if r < Rational::from_integer(0) { -r } else { r }),
            SlopeKind::Irrational(v) => SlopeKind::Irrational(v.abs()),
        };
        Slope { kind, axis: self.axis }
    }

    pub fn is_negative(&self) -> bool {
        match self.kind {
            SlopeKind::Rational(r) => *r.numer() < 0,
            SlopeKind::Irrational(v) => v < 0.0,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SlopeKind::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom())?,
            SlopeKind::Irrational(v) => write!(f, "irr:{v}")?,
        }
        if self.axis == Axis::YAxis {
            write!(f, "@y")?;
        }
        Ok(())
    }
}

/// The line `x ↦ λx + a`, written over `slope.axis`. For y-axis lines the
/// intercept is the x-intercept.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearMap {
    pub slope: Slope,
    pub intercept: Scalar,
}

impl LinearMap {
    pub fn new(slope: Slope, intercept: Scalar) -> Self {
        LinearMap { slope, intercept }
    }

    pub fn eval(&self, x: Scalar) -> Scalar {
        line_eval(self, x)
    }

    /// `⌊λz + a⌋`
    pub fn floor_at(&self, z: i64) -> i64 {
        self.eval(Scalar::int(z)).floor()
    }

    /// Lattice site `L_{λ,a}(z) = (z, ⌊λz + a⌋)` in the line's own frame.
    pub fn site_at(&self, z: i64) -> Site {
        self.slope.axis.site(z, self.floor_at(z))
    }
}

/// A point of the torus `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint(Scalar);

impl TorusPoint {
    /// Reduces any real modulo one.
    pub fn new(t: Scalar) -> Self {
        TorusPoint(t.fract())
    }

    pub fn real(t: f64) -> Self {
        TorusPoint(Scalar::Real(real_fract(t)))
    }

    pub fn zero() -> Self {
        TorusPoint(Scalar::int(0))
    }

    pub fn value(&self) -> Scalar {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}

impl Site {
    pub const ORIGIN: Site = Site { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Site { x, y }
    }

    pub fn l1(&self, other: &Site) -> i64 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }

    pub fn neighbors(&self) -> [Site; 4] {
        [
            Site::new(self.x + 1, self.y),
            Site::new(self.x - 1, self.y),
            Site::new(self.x, self.y + 1),
            Site::new(self.x, self.y - 1),
        ]
    }
}

impl Add for Site {
    type Output = Site;
    fn add(self, o: Site) -> Site {
        Site::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Site {
    type Output = Site;
    fn sub(self, o: Site) -> Site {
        Site::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Site {
    type Output = Site;
    fn neg(self) -> Site {
        Site::new(-self.x, -self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SiteSetKind {
    LatticeApprox,
    ContourApprox,
    /// A two-dimensional region such as a droplet interior.
    Region,
}

/// Ordered, duplicate-free list of lattice sites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteSet {
    sites: Vec<Site>,
    kind: SiteSetKind,
}

impl SiteSet {
    /// Keeps the first occurrence of every site.
    pub fn from_sites(sites: impl IntoIterator<Item = Site>, kind: SiteSetKind) -> Self {
        let mut seen = HashSet::new();
        let sites = sites.into_iter().filter(|s| seen.insert(*s)).collect();
        SiteSet { sites, kind }
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn kind(&self) -> SiteSetKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, s: &Site) -> bool {
        self.sites.contains(s)
    }

    pub fn translate(&self, by: Site) -> SiteSet {
        SiteSet { sites: self.sites.iter().map(|s| *s + by).collect(), kind: self.kind }
    }

    pub fn into_sites(self) -> Vec<Site> {
        self.sites
    }

    /// Newline-delimited `x y` pairs.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.sites.len() * 8);
        for s in &self.sites {
            out.push_str(&format!("{} {}\n", s.x, s.y));
        }
        out
    }

    pub fn from_text(text: &str, kind: SiteSetKind) -> Result<Self> {
        let mut sites = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |v: Option<&str>| -> Result<i64> {
                v.and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::parse(format!("line {}: expected 'x y'", lineno + 1)))
            };
            let x = parse(it.next())?;
            let y = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::parse(format!("line {}: trailing data", lineno + 1)));
            }
            sites.push(Site::new(x, y));
        }
        let n = sites.len();
        let set = SiteSet::from_sites(sites, kind);
        if set.len() != n {
            return Err(Error::parse("duplicate sites in site list"));
        }
        Ok(set)
    }
}

/// `λx + a`; exact whenever slope, intercept and `x` are exact.
pub fn line_eval(map: &LinearMap, x: Scalar) -> Scalar {
    map.slope.value().mul(x).add(map.intercept)
}

/// `{t + nλ}`, computed in one step (no iteration drift).
pub fn torus_translate(slope: &Slope, t: TorusPoint, n: i64) -> TorusPoint {
    TorusPoint::new(t.value().add(slope.value().mul_int(n)))
}

/// The unique zero of `t ↦ {t + νλ}` on the torus.
pub fn torus_zero(slope: &Slope, nu: i64) -> TorusPoint {
    let lambda = slope.value();
    if nu == 0 || lambda.is_zero() {
        return TorusPoint::zero();
    }
    let frac = lambda.mul_int(nu).fract();
    let same_sign = (nu > 0) == !slope.is_negative();
    if same_sign {
        TorusPoint::new(Scalar::int(1).sub(frac))
    } else {
        TorusPoint::new(frac.neg())
    }
}

/// Shift offset `κ_n(a) = (n, ⌊λn + a⌋)` of the n-th skew-product iterate.
pub fn skew_offset(map: &LinearMap, n: u64) -> Site {
    map.site_at(n as i64)
}

fn check_unit_slope(slope: &Slope) -> Result<()> {
    let v = slope.to_f64();
    if v.abs() > 1.0 {
        return Err(Error::invalid(format!(
            "slope {v} has magnitude above one; normalize it with direction_slope first"
        )));
    }
    Ok(())
}

/// Lattice approximation over the integers `z_lo..=z_hi`.
///
/// For `λ < 0` this is the point reflection `-L_{-λ,a}`.
pub fn lattice_approx(map: &LinearMap, z_lo: i64, z_hi: i64) -> Result<SiteSet> {
    if z_lo > z_hi {
        return Err(Error::invalid(format!("empty range {z_lo}..={z_hi}")));
    }
    check_unit_slope(&map.slope)?;
    let sites: Vec<Site> = if map.slope.is_negative() {
        let mirrored = LinearMap::new(map.slope.abs(), map.intercept);
        (z_lo..=z_hi).map(|z| -mirrored.site_at(z)).collect()
    } else {
        (z_lo..=z_hi).map(|z| map.site_at(z)).collect()
    };
    Ok(SiteSet::from_sites(sites, SiteSetKind::LatticeApprox))
}

/// True when a new step begins right after position `z`, i.e.
/// `τ_λ^z({a}) ≥ 1 − λ`. Ties count as a step.
pub fn step_begins_after(map: &LinearMap, z: i64) -> bool {
    let frac_a = TorusPoint::new(map.intercept);
    let t = torus_translate(&map.slope, frac_a, z);
    let lambda = map.slope.value();
    !lambda.is_zero() && t.value().ge(Scalar::int(1).sub(lambda))
}

/// Contour approximation: the lattice approximation plus one fill site
/// below the first site of every step, so that consecutive sites share a
/// bond.
pub fn contour_approx(map: &LinearMap, z_lo: i64, z_hi: i64) -> Result<SiteSet> {
    if z_lo > z_hi {
        return Err(Error::invalid(format!("empty range {z_lo}..={z_hi}")));
    }
    let v = map.slope.to_f64();
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::invalid(format!("contour approximation needs 0 <= λ <= 1, got {v}")));
    }
    let axis = map.slope.axis;
    let mut sites = Vec::with_capacity(((z_hi - z_lo) as usize) * 2 + 1);
    sites.push(map.site_at(z_lo));
    for z in z_lo..z_hi {
        let next = map.floor_at(z + 1);
        if step_begins_after(map, z) {
            sites.push(axis.site(z + 1, next - 1));
        }
        sites.push(axis.site(z + 1, next));
    }
    Ok(SiteSet::from_sites(sites, SiteSetKind::ContourApprox))
}

/// `(1/(n+1)) · #{0 ≤ i ≤ n : τ_λ^i(t0) ∈ [u_lo, u_hi)}`.
pub fn equidistribution_check(slope: &Slope, t0: TorusPoint, u: (f64, f64), n: u64) -> f64 {
    let (lo, hi) = u;
    let mut hits = 0u64;
    match (slope.kind, t0.value()) {
        (SlopeKind::Rational(l), Scalar::Exact(t)) => {
            // integer walk on the lattice (1/den)Z mod 1
            let den = num_integer::lcm(*l.denom(), *t.denom()) as i128;
            let step = (*l.numer() as i128 * (den / *l.denom() as i128)).rem_euclid(den);
            let mut cur = (*t.numer() as i128 * (den / *t.denom() as i128)).rem_euclid(den);
            for _ in 0..=n {
                let x = cur as f64 / den as f64;
                if x >= lo && x < hi {
                    hits += 1;
                }
                cur = (cur + step) % den;
            }
        }
        _ => {
            let step = slope.to_f64();
            let mut cur = t0.to_f64();
            for _ in 0..=n {
                if cur >= lo && cur < hi {
                    hits += 1;
                }
                cur = real_fract(cur + step);
            }
        }
    }
    hits as f64 / (n + 1) as f64
}

/// `|L_k| / length(B_k)` for the segment of slope `λ` over the base
/// interval `I`, blown up by `k`.
pub fn ratio_lattice_to_length(lambda: f64, k: u64, interval: (f64, f64)) -> Result<f64> {
    let (lo, hi) = interval;
    if !(hi > lo) {
        return Err(Error::invalid("base interval must have positive length"));
    }
    if lambda.abs() > 1.0 {
        return Err(Error::invalid(format!("slope {lambda} outside [-1, 1]")));
    }
    let (a, b) = (k as f64 * lo, k as f64 * hi);
    let count = (b.floor() - a.ceil() + 1.0).max(0.0);
    let length = (b - a) * (1.0 + lambda * lambda).sqrt();
    Ok(count / length)
}

/// Picks the axis and signed slope for a unit direction: the x-axis when
/// `|α| ≤ π/4` or `|α| ≥ 3π/4`, otherwise the y-axis.
pub fn direction_slope(v: [f64; 2]) -> Result<(Axis, f64)> {
    let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!("direction ({}, {}) is not a unit vector", v[0], v[1])));
    }
    Ok(axis_slope(v[0], v[1]))
}

/// Same rule as [`direction_slope`] for any nonzero vector.
pub(crate) fn axis_slope(dx: f64, dy: f64) -> (Axis, f64) {
    let (axis, lambda) = if dy.abs() <= dx.abs() { (Axis::XAxis, dy / dx) } else { (Axis::YAxis, dx / dy) };
    // -0.0 → 0.0
    (axis, lambda + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(slope: Slope, a: Scalar) -> LinearMap {
        LinearMap::new(slope, a)
    }

    fn pts(v: &[(i64, i64)]) -> Vec<Site> {
        v.iter().map(|&(x, y)| Site::new(x, y)).collect()
    }

    #[test]
    fn line_eval_examples() {
        let half = Slope::rational(1, 2).unwrap();
        assert_eq!(line_eval(&map(half, Scalar::int(0)), Scalar::int(4)), Scalar::int(2));
        let flat = Slope::rational(0, 1).unwrap();
        assert_eq!(line_eval(&map(flat, Scalar::Real(0.7)), Scalar::int(123)).to_f64(), 0.7);
        let s = Slope::irrational(0.3).unwrap();
        let v = line_eval(&map(s, Scalar::Real(0.15)), Scalar::int(3)).to_f64();
        assert!((v - 1.05).abs() < 1e-12);
    }

    #[test]
    fn lattice_approx_examples() {
        let half = Slope::rational(1, 2).unwrap();
        let l = lattice_approx(&map(half, Scalar::int(0)), 0, 4).unwrap();
        assert_eq!(l.sites(), pts(&[(0, 0), (1, 0), (2, 1), (3, 1), (4, 2)]).as_slice());

        let flat = Slope::rational(0, 1).unwrap();
        let l = lattice_approx(&map(flat, Scalar::int(0)), 0, 3).unwrap();
        assert_eq!(l.sites(), pts(&[(0, 0), (1, 0), (2, 0), (3, 0)]).as_slice());

        let neg = Slope::rational(-1, 2).unwrap();
        let l = lattice_approx(&map(neg, Scalar::int(0)), 0, 2).unwrap();
        assert_eq!(l.sites(), pts(&[(0, 0), (-1, 0), (-2, -1)]).as_slice());
    }

    #[test]
    fn lattice_approx_rejects_steep_and_swaps_for_y_axis() {
        let steep = LinearMap::new(
            Slope { kind: SlopeKind::Irrational(1.5), axis: Axis::XAxis },
            Scalar::int(0),
        );
        assert!(lattice_approx(&steep, 0, 3).is_err());
        let y = Slope::rational_on(1, 2, Axis::YAxis).unwrap();
        let l = lattice_approx(&map(y, Scalar::int(0)), 0, 2).unwrap();
        assert_eq!(l.sites(), pts(&[(0, 0), (0, 1), (1, 2)]).as_slice());
    }

    #[test]
    fn torus_translate_examples() {
        let s = Slope::irrational(0.3).unwrap();
        let t = torus_translate(&s, TorusPoint::real(0.9), 1);
        assert!((t.to_f64() - 0.2).abs() < 1e-12);
        let half = Slope::rational(1, 2).unwrap();
        assert_eq!(torus_translate(&half, TorusPoint::zero(), 2), TorusPoint::zero());
        let t0 = TorusPoint::real(0.123);
        assert_eq!(torus_translate(&s, t0, 0), t0);
    }

    #[test]
    fn torus_zero_examples() {
        let flat = Slope::rational(0, 1).unwrap();
        assert_eq!(torus_zero(&flat, 5), TorusPoint::zero());
        let s = Slope::irrational(0.3).unwrap();
        assert!((torus_zero(&s, -1).to_f64() - 0.3).abs() < 1e-12);
        assert!((torus_zero(&s, 2).to_f64() - 0.4).abs() < 1e-12);
        // exact counterparts
        let s = Slope::rational(3, 10).unwrap();
        assert_eq!(torus_zero(&s, -1), TorusPoint::new(Scalar::ratio(3, 10)));
        assert_eq!(torus_zero(&s, 2), TorusPoint::new(Scalar::ratio(2, 5)));
        // {νλ} = 0 wraps 1 back to 0
        let half = Slope::rational(1, 2).unwrap();
        assert_eq!(torus_zero(&half, 2), TorusPoint::zero());
    }

    #[test]
    fn skew_offset_examples() {
        let half = Slope::rational(1, 2).unwrap();
        assert_eq!(skew_offset(&map(half, Scalar::int(0)), 5), Site::new(5, 2));
        assert_eq!(skew_offset(&map(half, Scalar::Real(0.9)), 0), Site::new(0, 0));
        let s = Slope::irrational(0.3).unwrap();
        assert_eq!(skew_offset(&map(s, Scalar::Real(0.15)), 3), Site::new(3, 1));
    }

    #[test]
    fn contour_approx_examples() {
        let half = Slope::rational(1, 2).unwrap();
        let c = contour_approx(&map(half, Scalar::int(0)), 0, 4).unwrap();
        assert_eq!(
            c.sites(),
            pts(&[(0, 0), (1, 0), (2, 0), (2, 1), (3, 1), (4, 1), (4, 2)]).as_slice()
        );
        let flat = Slope::rational(0, 1).unwrap();
        let c = contour_approx(&map(flat, Scalar::int(0)), 0, 3).unwrap();
        let l = lattice_approx(&map(flat, Scalar::int(0)), 0, 3).unwrap();
        assert_eq!(c.sites(), l.sites());
        let neg = Slope::rational(-1, 2).unwrap();
        assert!(contour_approx(&map(neg, Scalar::int(0)), 0, 3).is_err());
    }

    #[test]
    fn contour_to_lattice_ratio_tends_to_one_plus_lambda() {
        let half = Slope::rational(1, 2).unwrap();
        let m = map(half, Scalar::int(0));
        let n = 5000;
        let c = contour_approx(&m, 0, 2 * n).unwrap().len() as f64;
        let l = lattice_approx(&m, 0, 2 * n).unwrap().len() as f64;
        assert!((c / l - 1.5).abs() < 1e-3);
    }

    #[test]
    fn equidistribution_examples() {
        let golden = Slope::irrational(2f64.sqrt() - 1.0).unwrap();
        let f = equidistribution_check(&golden, TorusPoint::zero(), (0.0, 0.5), 1_000_000);
        assert!((f - 0.5).abs() < 2e-3);
        let half = Slope::rational(1, 2).unwrap();
        let f = equidistribution_check(&half, TorusPoint::zero(), (0.0, 0.5), 100_001);
        assert!((f - 0.5).abs() < 1e-5);
        let f = equidistribution_check(&golden, TorusPoint::real(0.37), (0.0, 1.0), 1000);
        assert_eq!(f, 1.0);
    }

    #[test]
    fn ratio_examples() {
        for k in [1u64, 10, 1000] {
            let r = ratio_lattice_to_length(0.0, k, (0.0, 1.0)).unwrap();
            assert!((r - 1.0).abs() <= 1.0 / k as f64 + 1e-12);
        }
        let r = ratio_lattice_to_length(0.5, 10_000, (0.0, 1.0)).unwrap();
        assert!((r - 0.894427).abs() < 1e-3);
        let r = ratio_lattice_to_length(1.0, 10_000, (0.0, 1.0)).unwrap();
        assert!((r - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-3);
    }

    #[test]
    fn direction_slope_examples() {
        assert_eq!(direction_slope([1.0, 0.0]).unwrap(), (Axis::XAxis, 0.0));
        assert_eq!(direction_slope([0.0, 1.0]).unwrap(), (Axis::YAxis, 0.0));
        let a = 60f64.to_radians();
        let (axis, l) = direction_slope([a.cos(), a.sin()]).unwrap();
        assert_eq!(axis, Axis::YAxis);
        assert!((l.abs() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(direction_slope([1.0, 1.0]).is_err());
    }

    #[test]
    fn site_set_text_round_trip() {
        let set = SiteSet::from_sites(pts(&[(0, 0), (-3, 7), (2, -1)]), SiteSetKind::LatticeApprox);
        let text = set.to_text();
        assert_eq!(text, "0 0\n-3 7\n2 -1\n");
        assert_eq!(SiteSet::from_text(&text, SiteSetKind::LatticeApprox).unwrap(), set);
        assert!(SiteSet::from_text("1 2\n1 2\n", SiteSetKind::LatticeApprox).is_err());
        assert!(SiteSet::from_text("1\n", SiteSetKind::LatticeApprox).is_err());
    }

    #[test]
    fn slope_parsing() {
        assert_eq!(Slope::parse("1/2").unwrap(), Slope::rational(1, 2).unwrap());
        assert_eq!(Slope::parse("2/4").unwrap(), Slope::rational(1, 2).unwrap());
        assert!(!Slope::parse("irr:0.41").unwrap().is_rational());
        assert_eq!(Slope::parse("0@y").unwrap(), Slope::vertical());
        assert!(Slope::parse("3/2").is_err());
        assert!(Slope::rational(1, 0).is_err());
    }
}
