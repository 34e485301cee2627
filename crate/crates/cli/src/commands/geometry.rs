use serde::Serialize;
use surfent::geometry::{
    contour_approx, equidistribution_check, lattice_approx, polygon_contour_approx, polygon_lattice_approx,
    ratio_lattice_to_length, LinearMap, Scalar, SiteSet, Slope, TorusPoint,
};

use super::{p, shape};
use crate::error::{CliError, CliResult};
use crate::output::Output;
use crate::params::{Param, Params};

pub const PARAMS: &[Param] = &[
    p("mode", "lattice", "lattice, contour, polygon, ratio or equidistribution"),
    p("slope", "1/2", "slope p/q, a decimal, or irr:<value>; @y for the y-axis"),
    p("intercept", "0", "line intercept (exact when written p/q)"),
    p("range", "0:4", "inclusive range of the axis coordinate"),
    p("shape", "square", "polygon for mode=polygon"),
    p("area", "", "rescale the polygon to this area"),
    p("blowup", "1", "integer blowup of the polygon"),
    p("kind", "lattice", "lattice or contour, for mode=polygon"),
    p("k", "10000", "blowup for mode=ratio"),
    p("interval", "0:1", "parameter interval for mode=ratio"),
    p("start", "0", "torus starting point for mode=equidistribution"),
    p("n", "1000000", "orbit length for mode=equidistribution"),
    p("set", "0:0.5", "target interval for mode=equidistribution"),
];

#[derive(Serialize)]
struct SiteRow {
    x: i64,
    y: i64,
}

#[derive(Serialize)]
struct RatioRow {
    lambda: f64,
    k: u64,
    ratio: f64,
    limit: f64,
}

#[derive(Serialize)]
struct EquidistributionRow {
    slope: f64,
    start: f64,
    n: u64,
    frequency: f64,
    expected: f64,
}

fn scalar(p: &Params, key: &str) -> CliResult<Scalar> {
    let v = p.str(key)?;
    Scalar::parse(v).ok_or_else(|| CliError::config(format!("invalid number '{v}' for '{key}'")))
}

fn emit_sites(out: &mut Output, sites: &SiteSet) -> CliResult<()> {
    let rows: Vec<SiteRow> = sites.sites().iter().map(|s| SiteRow { x: s.x, y: s.y }).collect();
    println!("x,y");
    for r in &rows {
        println!("{},{}", r.x, r.y);
    }
    out.csv("geometry.csv", &rows)
}

pub fn run(p: &Params, out: &mut Output) -> CliResult<()> {
    let slope = Slope::parse(p.str("slope")?)?;
    match p.str("mode")? {
        mode @ ("lattice" | "contour") => {
            let map = LinearMap::new(slope, scalar(p, "intercept")?);
            let (lo, hi) = p.range::<i64>("range")?;
            let sites = if mode == "lattice" { lattice_approx(&map, lo, hi)? } else { contour_approx(&map, lo, hi)? };
            emit_sites(out, &sites)
        }
        "polygon" => {
            let poly = shape(p)?;
            let n: u64 = p.get("blowup")?;
            let sites = match p.str("kind")? {
                "lattice" => polygon_lattice_approx(&poly, n)?,
                "contour" => polygon_contour_approx(&poly, n)?,
                other => return Err(CliError::config(format!("kind must be lattice or contour, got '{other}'"))),
            };
            emit_sites(out, &sites)
        }
        "ratio" => {
            let lambda = slope.to_f64();
            let k: u64 = p.get("k")?;
            let ratio = ratio_lattice_to_length(lambda, k, p.range("interval")?)?;
            let row = RatioRow { lambda, k, ratio, limit: 1.0 / (1.0 + lambda * lambda).sqrt() };
            println!("ratio={} limit={}", row.ratio, row.limit);
            out.csv("geometry.csv", &[row])
        }
        "equidistribution" => {
            let start = scalar(p, "start")?;
            let n: u64 = p.get("n")?;
            let set: (f64, f64) = p.range("set")?;
            let frequency = equidistribution_check(&slope, TorusPoint::new(start), set, n);
            let row = EquidistributionRow { slope: slope.to_f64(), start: start.to_f64(), n, frequency, expected: set.1 - set.0 };
            println!("frequency={} expected={}", row.frequency, row.expected);
            out.csv("geometry.csv", &[row])
        }
        other => Err(CliError::config(format!("unknown geometry mode '{other}'"))),
    }
}
