//! Polygons and arc-length parametrized curves, their blowups, and their
//! digitizations as unions of per-edge lattice approximations.


use serde::{Deserialize, Serialize};

use super::lattice::{axis_slope, Axis, Site, SiteSet, SiteSetKind, Slope};
use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Largest denominator tried when recognizing an edge slope as rational.
pub const MAX_EDGE_DENOMINATOR: i64 = 64;
const RATIONAL_TOL: f64 = 1e-9;
const SNAP_TOL: f64 = 1e-9;

/// One edge of a polygon, normalized onto the axis chosen by
/// [`direction_slope`](super::lattice::direction_slope).
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub index: usize,
    pub start: Point,
    pub end: Point,
    pub axis: Axis,
    /// Signed slope in `[-1, 1]` with respect to `axis`.
    pub lambda: f64,
    /// Intercept on the other axis.
    pub intercept: f64,
    /// Range of the axis coordinate covered by the edge.
    pub interval: (f64, f64),
    pub length: f64,
    /// `|λ|`, tagged rational when it matches `p/q` with a small `q`.
    pub direction: Slope,
}

impl Edge {
    fn new(index: usize, start: Point, end: Point) -> Self {
        let (dx, dy) = (end[0] - start[0], end[1] - start[1]);
        let (axis, lambda) = axis_slope(dx, dy);
        let (along0, along1, across0) = match axis {
            Axis::XAxis => (start[0], end[0], start[1]),
            Axis::YAxis => (start[1], end[1], start[0]),
        };
        Edge {
            index,
            start,
            end,
            axis,
            lambda,
            intercept: across0 - lambda * along0,
            interval: (along0.min(along1), along0.max(along1)),
            length: dx.hypot(dy),
            direction: classify_slope(lambda.abs(), axis),
        }
    }

    fn forward(&self) -> bool {
        match self.axis {
            Axis::XAxis => self.end[0] >= self.start[0],
            Axis::YAxis => self.end[1] >= self.start[1],
        }
    }

    /// `1/√(1+λ²)`, the asymptotic number of lattice sites per unit length.
    pub fn site_density(&self) -> f64 {
        1.0 / (1.0 + self.lambda * self.lambda).sqrt()
    }

    fn across_at(&self, z: i64) -> i64 {
        snapped_floor(self.lambda * z as f64 + self.intercept)
    }

    fn along_range(&self) -> (i64, i64) {
        let lo = snapped_ceil(self.interval.0);
        let hi = snapped_floor(self.interval.1);
        (lo, hi)
    }

    /// `(z, ⌊λz + t⌋)` over the integers of the edge interval, listed in
    /// traversal order.
    pub fn lattice_sites(&self) -> Vec<Site> {
        let (lo, hi) = self.along_range();
        let mut sites: Vec<Site> = (lo..=hi).map(|z| self.axis.site(z, self.across_at(z))).collect();
        if !self.forward() {
            sites.reverse();
        }
        sites
    }

    /// Lattice sites plus a fill site at every step so that consecutive
    /// sites share a bond. Walking in increasing axis order, a step from
    /// `(z, y)` to `(z+1, y')` is filled with `(z+1, y)`.
    pub fn contour_sites(&self) -> Vec<Site> {
        let (lo, hi) = self.along_range();
        let mut sites = Vec::new();
        let mut prev: Option<i64> = None;
        for z in lo..=hi {
            let y = self.across_at(z);
            if let Some(p) = prev {
                if p != y {
                    sites.push(self.axis.site(z, p));
                }
            }
            sites.push(self.axis.site(z, y));
            prev = Some(y);
        }
        if !self.forward() {
            sites.reverse();
        }
        sites
    }
}

/// Floor that treats values within `SNAP_TOL` of an integer as that integer.
fn snapped_floor(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() < SNAP_TOL {
        r as i64
    } else {
        v.floor() as i64
    }
}

fn snapped_ceil(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() < SNAP_TOL {
        r as i64
    } else {
        v.ceil() as i64
    }
}

/// Tags `v ∈ [0, 1]` as the rational `p/q` (`q ≤ MAX_EDGE_DENOMINATOR`)
/// it matches within `1e-9`, otherwise as irrational.
pub fn classify_slope(v: f64, axis: Axis) -> Slope {
    for q in 1..=MAX_EDGE_DENOMINATOR {
        let p = (v * q as f64).round();
        if (v - p / q as f64).abs() < RATIONAL_TOL {
            return Slope::rational_on(p as i64, q, axis).expect("p/q within [0, 1]");
        }
    }
    Slope::irrational_on(v, axis).expect("slope within [0, 1]")
}

/// A simple polygon or polyline. Closed polygons are positively oriented.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonSpec {
    vertices: Vec<Point>,
    closed: bool,
}

impl PolygonSpec {
    pub fn new(vertices: Vec<Point>, closed: bool) -> Result<Self> {
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::invalid("polygon vertices must be finite"));
        }
        let min = if closed { 3 } else { 2 };
        if vertices.len() < min {
            return Err(Error::invalid(format!("polygon needs at least {min} vertices")));
        }
        let poly = PolygonSpec { vertices, closed };
        let segments = poly.segments();
        if segments.iter().any(|(a, b)| a == b) {
            return Err(Error::invalid("polygon has a zero-length edge"));
        }
        poly.check_simple(&segments)?;
        if closed {
            let area = signed_area(&poly.vertices);
            if area <= 0.0 {
                return Err(Error::invalid(
                    "closed polygon must be positively oriented with positive area",
                ));
            }
        }
        Ok(poly)
    }

    /// Axis-aligned square of the given area centered at the origin.
    pub fn square(area: f64) -> Result<Self> {
        if !(area > 0.0) {
            return Err(Error::invalid("area must be positive"));
        }
        let h = area.sqrt() / 2.0;
        PolygonSpec::new(vec![[-h, -h], [h, -h], [h, h], [-h, h]], true)
    }

    /// Regular `k`-gon of the given area centered at the origin, with its
    /// first vertex at polar angle `rotation`.
    pub fn regular(k: usize, area: f64, rotation: f64) -> Result<Self> {
        if k < 3 {
            return Err(Error::invalid("a regular polygon needs at least 3 vertices"));
        }
        if !(area > 0.0) {
            return Err(Error::invalid("area must be positive"));
        }
        let step = std::f64::consts::TAU / k as f64;
        let radius = (2.0 * area / (k as f64 * step.sin())).sqrt();
        let vertices = (0..k)
            .map(|i| {
                let a = rotation + step * i as f64;
                [radius * a.cos(), radius * a.sin()]
            })
            .collect();
        PolygonSpec::new(vertices, true)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn edge_count(&self) -> usize {
        self.segments().len()
    }

    fn segments(&self) -> Vec<(Point, Point)> {
        let n = self.vertices.len();
        let m = if self.closed { n } else { n - 1 };
        (0..m).map(|i| (self.vertices[i], self.vertices[(i + 1) % n])).collect()
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.segments()
            .into_iter()
            .enumerate()
            .map(|(i, (a, b))| Edge::new(i, a, b))
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.edges().iter().map(|e| e.length).sum()
    }

    /// Enclosed area; zero for open polylines.
    pub fn area(&self) -> f64 {
        if self.closed {
            signed_area(&self.vertices)
        } else {
            0.0
        }
    }

    /// Blowup by `eta`: every vertex scaled about the origin.
    pub fn scaled(&self, eta: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::invalid("blowup factor must be positive"));
        }
        let vertices = self.vertices.iter().map(|v| [v[0] * eta, v[1] * eta]).collect();
        Ok(PolygonSpec { vertices, closed: self.closed })
    }

    fn check_simple(&self, segments: &[(Point, Point)]) -> Result<()> {
        let m = segments.len();
        for i in 0..m {
            for j in (i + 1)..m {
                let adjacent = j == i + 1 || (self.closed && i == 0 && j == m - 1);
                let (a, b) = segments[i];
                let (c, d) = segments[j];
                if adjacent {
                    // adjacent edges may only share their common vertex
                    let shared = if j == i + 1 { b } else { a };
                    let (far_i, far_j) = if j == i + 1 { (a, d) } else { (b, c) };
                    if m == 2 && self.closed {
                        continue;
                    }
                    if orient(far_i, shared, far_j) == 0.0 && dot_sub(far_i, shared, far_j) > 0.0 {
                        return Err(Error::invalid(format!("edges {i} and {j} overlap")));
                    }
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    return Err(Error::invalid(format!("edges {i} and {j} intersect")));
                }
            }
        }
        Ok(())
    }

    /// Strict interior test (even-odd rule). Points on the boundary are
    /// outside. Exact for coordinates representable without rounding.
    pub fn interior_contains(&self, p: Point) -> bool {
        if !self.closed {
            return false;
        }
        let mut inside = false;
        for (a, b) in self.segments() {
            if on_segment(a, b, p) {
                return false;
            }
            if (a[1] > p[1]) != (b[1] > p[1]) {
                // sign of (x-crossing - p.x) without division
                let lhs = (p[0] - a[0]) * (b[1] - a[1]);
                let rhs = (b[0] - a[0]) * (p[1] - a[1]);
                let crosses = if b[1] > a[1] { lhs < rhs } else { lhs > rhs };
                if crosses {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// `Γ(π)`: lattice points strictly inside the polygon.
    pub fn interior_lattice_points(&self) -> Vec<Site> {
        if !self.closed {
            return Vec::new();
        }
        let (x0, x1, y0, y1) = self.bounding_box();
        let mut out = Vec::new();
        for y in y0.ceil() as i64..=y1.floor() as i64 {
            for x in x0.ceil() as i64..=x1.floor() as i64 {
                if self.interior_contains([x as f64, y as f64]) {
                    out.push(Site::new(x, y));
                }
            }
        }
        out
    }

    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            b.0 = b.0.min(v[0]);
            b.1 = b.1.max(v[0]);
            b.2 = b.2.min(v[1]);
            b.3 = b.3.max(v[1]);
        }
        b
    }

    pub fn to_json(&self) -> String {
        let doc = ShapeDocument { vertices: Some(self.vertices.clone()), closed: Some(self.closed), samples: None };
        serde_json::to_string_pretty(&doc).expect("shape document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ShapeDocument = serde_json::from_str(text)?;
        let vertices = doc.vertices.ok_or_else(|| Error::parse("polygon document needs \"vertices\""))?;
        PolygonSpec::new(vertices, doc.closed.unwrap_or(true))
    }
}

/// `L_n^π`: union of the per-edge lattice approximations of `B_n π`.
/// Shared corners keep their first occurrence in traversal order.
pub fn polygon_lattice_approx(poly: &PolygonSpec, n: u64) -> Result<SiteSet> {
    if n == 0 {
        return Err(Error::invalid("blowup index must be positive"));
    }
    let blown = poly.scaled(n as f64)?;
    let sites = blown.edges().iter().flat_map(|e| e.lattice_sites()).collect::<Vec<_>>();
    Ok(SiteSet::from_sites(sites, SiteSetKind::LatticeApprox))
}

/// Contour approximation of `B_n π`: per-edge contour sites, with gaps at
/// corners bridged by unit steps around the outer side of the corner, so
/// that the traversal is a closed chain of nearest-neighbor bonds before
/// duplicates are dropped.
pub fn polygon_contour_approx(poly: &PolygonSpec, n: u64) -> Result<SiteSet> {
    if n == 0 {
        return Err(Error::invalid("blowup index must be positive"));
    }
    let blown = poly.scaled(n as f64)?;
    let mut raw: Vec<Site> = Vec::new();
    for e in blown.edges() {
        for s in e.contour_sites() {
            if let Some(&last) = raw.last() {
                bridge(&mut raw, last, s);
            }
            raw.push(s);
        }
    }
    if poly.is_closed() {
        if let (Some(&last), Some(&first)) = (raw.last(), raw.first()) {
            bridge(&mut raw, last, first);
        }
    }
    Ok(SiteSet::from_sites(raw, SiteSetKind::ContourApprox))
}

fn bridge(out: &mut Vec<Site>, from: Site, to: Site) {
    if from.l1(&to) <= 1 {
        return;
    }
    // closed polygons are positively oriented, so the interior lies to the
    // left of travel; take the L-route whose corner is on the right
    let x_first = (to.x - from.x) * (to.y - from.y) >= 0;
    let mut cur = from;
    let step_x = |cur: &mut Site, out: &mut Vec<Site>| {
        while cur.x != to.x {
            cur.x += (to.x - cur.x).signum();
            if *cur != to {
                out.push(*cur);
            }
        }
    };
    let step_y = |cur: &mut Site, out: &mut Vec<Site>| {
        while cur.y != to.y {
            cur.y += (to.y - cur.y).signum();
            if *cur != to {
                out.push(*cur);
            }
        }
    };
    if x_first {
        step_x(&mut cur, out);
        step_y(&mut cur, out);
    } else {
        step_y(&mut cur, out);
        step_x(&mut cur, out);
    }
}

/// `lim |L_k π| / length(B_k π) = Σ_r (1/√(1+λ_r²)) · length π_r / length π`.
pub fn polygon_site_density(poly: &PolygonSpec) -> f64 {
    let edges = poly.edges();
    let total: f64 = edges.iter().map(|e| e.length).sum();
    edges.iter().map(|e| e.site_density() * e.length / total).sum()
}

/// `|L_k π| / length(B_k π)` at a finite blowup index.
pub fn polygon_lattice_ratio(poly: &PolygonSpec, k: u64) -> Result<f64> {
    let sites = polygon_lattice_approx(poly, k)?.len() as f64;
    Ok(sites / (k as f64 * poly.length()))
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum();
    twice / 2.0
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn dot_sub(a: Point, o: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[0] - o[0]) + (a[1] - o[1]) * (b[1] - o[1])
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0.0
        && p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub p: Point,
    /// Right derivative at `t`.
    pub d: Point,
}

/// A piecewise-C¹ curve given by samples `(t, c(t), c'(t))`, parametrized
/// by arc length on `[0, T]`.
///
/// Between consecutive samples the curve is a straight piece when the
/// chord matches the left sample's derivative, otherwise a cubic Hermite
/// arc through both samples.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    samples: Vec<CurveSample>,
}

const ARC_TOL: f64 = 1e-9;

impl CurveSpec {
    pub fn new(samples: Vec<CurveSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("curve needs at least two samples"));
        }
        if samples[0].t != 0.0 {
            return Err(Error::invalid("curve parameter must start at 0"));
        }
        for w in samples.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::invalid("curve parameters must be strictly increasing"));
            }
        }
        for s in &samples {
            let speed = s.d[0].hypot(s.d[1]);
            if (speed - 1.0).abs() > ARC_TOL {
                return Err(Error::invalid(format!(
                    "curve is not parametrized by arc length at t={} (|c'|={speed})",
                    s.t
                )));
            }
        }
        Ok(CurveSpec { samples })
    }

    /// Circle of the given radius, counterclockwise, starting at angle 0.
    pub fn circle(center: Point, radius: f64, n_samples: usize) -> Result<Self> {
        if !(radius > 0.0) || n_samples < 3 {
            return Err(Error::invalid("circle needs positive radius and at least 3 samples"));
        }
        let samples = (0..=n_samples)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / n_samples as f64;
                CurveSample {
                    t: radius * a,
                    p: [center[0] + radius * a.cos(), center[1] + radius * a.sin()],
                    d: [-a.sin(), a.cos()],
                }
            })
            .collect();
        CurveSpec::new(samples)
    }

    /// Arc-length parametrization of a polyline through `points`.
    pub fn polyline(points: &[Point], closed: bool) -> Result<Self> {
        let mut pts = points.to_vec();
        if closed {
            pts.push(points[0]);
        }
        if pts.len() < 2 {
            return Err(Error::invalid("polyline needs at least two points"));
        }
        let mut samples = Vec::with_capacity(pts.len());
        let mut t = 0.0;
        for i in 0..pts.len() {
            let seg = if i + 1 < pts.len() { (pts[i], pts[i + 1]) } else { (pts[i - 1], pts[i]) };
            let (dx, dy) = (seg.1[0] - seg.0[0], seg.1[1] - seg.0[1]);
            let len = dx.hypot(dy);
            if len == 0.0 {
                return Err(Error::invalid("polyline has coincident consecutive points"));
            }
            samples.push(CurveSample { t, p: pts[i], d: [dx / len, dy / len] });
            if i + 1 < pts.len() {
                t += len;
            }
        }
        CurveSpec::new(samples)
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn total_length(&self) -> f64 {
        self.samples.last().expect("nonempty").t
    }

    pub fn is_closed(&self) -> bool {
        let (a, b) = (self.samples[0].p, self.samples.last().expect("nonempty").p);
        (a[0] - b[0]).hypot(a[1] - b[1]) <= 1e-9 * (1.0 + self.total_length())
    }

    /// True when no sample lies on the origin.
    pub fn excludes_origin(&self) -> bool {
        self.samples.iter().all(|s| s.p[0].hypot(s.p[1]) > 1e-12)
    }

    /// Rejects curves whose trace passes through the origin.
    pub fn validate_trace(&self) -> Result<()> {
        if self.excludes_origin() {
            Ok(())
        } else {
            Err(Error::invalid("curve trace passes through the origin"))
        }
    }

    fn piece(&self, t: f64) -> usize {
        let idx = self.samples.partition_point(|s| s.t <= t);
        idx.saturating_sub(1).min(self.samples.len() - 2)
    }

    fn is_straight(&self, i: usize) -> bool {
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let h = b.t - a.t;
        let ex = b.p[0] - a.p[0] - h * a.d[0];
        let ey = b.p[1] - a.p[1] - h * a.d[1];
        ex.hypot(ey) <= 1e-9 * h.max(1.0)
    }

    /// Position and right derivative at parameter `t ∈ [0, T]`.
    pub fn eval(&self, t: f64) -> (Point, Point) {
        let t = t.clamp(0.0, self.total_length());
        let i = self.piece(t);
        let (a, b) = (self.samples[i], self.samples[i + 1]);
        let h = b.t - a.t;
        if self.is_straight(i) {
            let s = t - a.t;
            return ([a.p[0] + s * a.d[0], a.p[1] + s * a.d[1]], a.d);
        }
        let s = (t - a.t) / h;
        let (s2, s3) = (s * s, s * s * s);
        let (h00, h10, h01, h11) = (2.0 * s3 - 3.0 * s2 + 1.0, s3 - 2.0 * s2 + s, -2.0 * s3 + 3.0 * s2, s3 - s2);
        let (g00, g10, g01, g11) = (6.0 * s2 - 6.0 * s, 3.0 * s2 - 4.0 * s + 1.0, -6.0 * s2 + 6.0 * s, 3.0 * s2 - 2.0 * s);
        let mut p = [0.0; 2];
        let mut d = [0.0; 2];
        for k in 0..2 {
            p[k] = h00 * a.p[k] + h10 * h * a.d[k] + h01 * b.p[k] + h11 * h * b.d[k];
            d[k] = (g00 * a.p[k] + g01 * b.p[k]) / h + g10 * a.d[k] + g11 * b.d[k];
        }
        (p, d)
    }

    pub fn to_json(&self) -> String {
        let doc = ShapeDocument { vertices: None, closed: Some(self.is_closed()), samples: Some(self.samples.clone()) };
        serde_json::to_string_pretty(&doc).expect("shape document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ShapeDocument = serde_json::from_str(text)?;
        let samples = doc.samples.ok_or_else(|| Error::parse("curve document needs \"samples\""))?;
        CurveSpec::new(samples)
    }
}

/// `B_η c(t) = η c(t/η)` on `[0, ηT]`.
pub fn blowup(curve: &CurveSpec, eta: f64) -> Result<CurveSpec> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::invalid("blowup factor must be positive"));
    }
    let samples = curve
        .samples
        .iter()
        .map(|s| CurveSample { t: eta * s.t, p: [eta * s.p[0], eta * s.p[1]], d: s.d })
        .collect();
    Ok(CurveSpec { samples })
}

#[derive(Clone, Debug)]
pub struct Polygonization {
    pub polygon: PolygonSpec,
    /// `sup_t |π'(t) − c'(t)|` over the sampled parameters, with `π` the
    /// chord polygon parametrized on the same grid.
    pub tangent_deviation: f64,
}

/// Chord polygon through `c` at `N + 1` equispaced parameter values.
pub fn polygonize(curve: &CurveSpec, n: usize) -> Result<Polygonization> {
    if n < 2 {
        return Err(Error::invalid("polygonization needs N >= 2"));
    }
    let total = curve.total_length();
    let ts: Vec<f64> = (0..=n).map(|k| total * k as f64 / n as f64).collect();
    let pts: Vec<Point> = ts.iter().map(|&t| curve.eval(t).0).collect();
    for w in pts.windows(2) {
        if w[0] == w[1] {
            return Err(Error::invalid("degenerate chord: coincident consecutive points"));
        }
    }
    let mut deviation: f64 = 0.0;
    for k in 0..n {
        let (t0, t1) = (ts[k], ts[k + 1]);
        let h = t1 - t0;
        let v = [(pts[k + 1][0] - pts[k][0]) / h, (pts[k + 1][1] - pts[k][1]) / h];
        let mut probe: Vec<f64> = (0..8).map(|j| t0 + h * j as f64 / 8.0).collect();
        probe.extend(curve.samples.iter().map(|s| s.t).filter(|&t| t >= t0 && t < t1));
        for t in probe {
            let d = curve.eval(t).1;
            deviation = deviation.max((v[0] - d[0]).hypot(v[1] - d[1]));
        }
    }
    let closed = curve.is_closed();
    let vertices = if closed { pts[..n].to_vec() } else { pts };
    Ok(Polygonization { polygon: PolygonSpec::new(vertices, closed)?, tangent_deviation: deviation })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShapeDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Point>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<CurveSample>>,
}
