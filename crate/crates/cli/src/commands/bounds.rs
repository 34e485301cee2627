use serde::Serialize;
use serde_json::json;
use surfent::deviations::{
    bound_functional, evaluate_shape, markov_boundary_check, optimize_shape, AxisFavoringOracle, BoundValue,
    CachedOracle, ConstantOracle, DirectionOracle, EstimatorOracle, MarkovSettings, OptimizeSettings, ShapeFamily,
};
use surfent::entropy::relative_edge_entropies;
use surfent::geometry::{PolygonSpec, SiteSetKind};

use super::{estimator, model, p, sampler, shape, unit_scale, PLUS_SEED_OFFSET};
use crate::error::{CliError, CliResult};
use crate::output::Output;
use crate::params::{Param, Params};

pub const OPTIMIZE: &[Param] = &[
    p("alpha", "1", "area of the candidate shapes"),
    p("family", "vertex-free", "vertex-free or regular"),
    p("vertices", "8", "vertex count for the vertex-free family"),
    p("k-min", "4", "smallest regular polygon"),
    p("k-max", "64", "largest regular polygon"),
    p("rotations", "8", "orientations tried per regular polygon"),
    p("budget", "5000", "maximum functional evaluations"),
    p("tolerance", "1e-6", "smallest step of the local search"),
    p("oracle", "axis", "constant, axis or estimator"),
    p("oracle-value", "1", "entropy of the constant oracle, base of the axis oracle"),
    p("oracle-strength", "0.5", "slope penalty of the axis oracle"),
    p("cache-deg", "1", "angular resolution of the estimator cache in degrees"),
];

pub const MARKOV: &[Param] = &[
    p("model", "ising:beta=0.3,h=0,boundary=plus", "Ising model with a fixed or free boundary"),
    p("shape", "box:2", "polygon in window coordinates"),
    p("area", "", "rescale the polygon to this area"),
    p("boundary", "both", "lattice, contour or both"),
    p("samples", "2000", "Gibbs snapshots of the window"),
    p("window-radius", "3", "the window is [-r, r] squared"),
];

#[derive(Serialize)]
struct EdgeRow {
    edge: usize,
    lambda: f64,
    factor: f64,
    length: f64,
    h: f64,
    contribution: f64,
}

fn edge_rows(b: &BoundValue, scale: f64) -> Vec<EdgeRow> {
    b.per_edge
        .iter()
        .map(|e| EdgeRow {
            edge: e.index,
            lambda: e.lambda,
            factor: e.factor,
            length: e.length,
            h: e.entropy * scale,
            contribution: e.contribution * scale,
        })
        .collect()
}

pub fn bound(p: &Params, out: &mut Output) -> CliResult<()> {
    let poly = shape(p)?;
    let edges = poly.edge_count();
    let entropies: Vec<f64> = match (p.opt::<f64>("entropy-const")?, p.opt_str("entropies")) {
        (Some(_), Some(_)) => return Err(CliError::config("give either entropy-const or entropies, not both")),
        (Some(c), None) => vec![c; edges],
        (None, Some(_)) => p.list("entropies")?,
        (None, None) => {
            let mut minus = estimator(p, "minus", 0)?;
            let mut plus = estimator(p, "plus", PLUS_SEED_OFFSET)?;
            relative_edge_entropies(&mut minus, &mut plus, &poly, p.get("depth")?, p.get("samples")?)?
                .iter()
                .map(|e| e.value)
                .collect()
        }
    };
    let b = bound_functional(&poly, &entropies)?;
    let scale = unit_scale(p)?;
    println!("gamma={:.6} edges={} area={:.6}", b.gamma * scale, edges, poly.area());
    out.csv("bound.csv", &edge_rows(&b, scale))?;
    out.json(
        "bound.json",
        &json!({ "gamma": b.gamma * scale, "units": p.str("units")?, "area": poly.area(), "perimeter": poly.length(), "edges": edges }),
    )
}

#[derive(Serialize)]
struct TraceCsv {
    iteration: usize,
    gamma: f64,
    incumbent: f64,
    accepted: bool,
}

fn family(p: &Params) -> CliResult<ShapeFamily> {
    match p.str("family")? {
        "vertex-free" => Ok(ShapeFamily::VertexFree { vertices: p.get("vertices")? }),
        "regular" => Ok(ShapeFamily::RegularKGon { k_min: p.get("k-min")?, k_max: p.get("k-max")?, rotations: p.get("rotations")? }),
        other => Err(CliError::config(format!("family must be vertex-free or regular, got '{other}'"))),
    }
}

pub fn optimize(p: &Params, out: &mut Output) -> CliResult<()> {
    let alpha: f64 = p.get("alpha")?;
    let settings = OptimizeSettings {
        family: family(p)?,
        budget: p.get("budget")?,
        seed: p.get("seed")?,
        tolerance: p.get("tolerance")?,
    };
    let base: f64 = p.get("oracle-value")?;
    let mut constant = ConstantOracle(base);
    let mut axis = AxisFavoringOracle { base, strength: p.get("oracle-strength")? };
    let (mut minus, mut plus);
    let mut cached;
    let oracle: &mut dyn DirectionOracle = match p.str("oracle")? {
        "constant" => &mut constant,
        "axis" => &mut axis,
        "estimator" => {
            minus = estimator(p, "minus", 0)?;
            plus = estimator(p, "plus", PLUS_SEED_OFFSET)?;
            let inner = EstimatorOracle { minus: &mut minus, plus: &mut plus, depth: p.get("depth")?, n_samples: p.get("samples")? };
            cached = CachedOracle::new(inner, p.get("cache-deg")?)?;
            &mut cached
        }
        other => return Err(CliError::config(format!("oracle must be constant, axis or estimator, got '{other}'"))),
    };
    let r = optimize_shape(alpha, oracle, &settings)?;
    let square = evaluate_shape(&PolygonSpec::square(alpha)?, oracle)?;
    let scale = unit_scale(p)?;
    let trace: Vec<TraceCsv> = r
        .trace
        .iter()
        .map(|t| TraceCsv { iteration: t.iteration, gamma: t.gamma * scale, incumbent: t.incumbent * scale, accepted: t.accepted })
        .collect();
    println!(
        "gamma={:.6} square_gamma={:.6} evaluations={} converged={}",
        r.bound.gamma * scale,
        square.gamma * scale,
        r.evaluations,
        r.converged
    );
    out.csv("optimize-trace.csv", &trace)?;
    out.csv("optimize-edges.csv", &edge_rows(&r.bound, scale))?;
    out.text("optimize-shape.json", &format!("{}\n", r.polygon.to_json()))?;
    out.json(
        "optimize.json",
        &json!({
            "gamma": r.bound.gamma * scale,
            "square_gamma": square.gamma * scale,
            "units": p.str("units")?,
            "evaluations": r.evaluations,
            "converged": r.converged,
            "axis_aligned_fraction": r.axis_aligned_fraction(1e-6),
        }),
    )
}

pub fn markov(p: &Params, out: &mut Output) -> CliResult<()> {
    let model = model(p, "model")?;
    let poly = shape(p)?;
    let settings = MarkovSettings { window_radius: p.get("window-radius")?, sampler: sampler(p)? };
    let kinds: &[SiteSetKind] = match p.str("boundary")? {
        "lattice" => &[SiteSetKind::LatticeApprox],
        "contour" => &[SiteSetKind::ContourApprox],
        "both" => &[SiteSetKind::LatticeApprox, SiteSetKind::ContourApprox],
        other => return Err(CliError::config(format!("boundary must be lattice, contour or both, got '{other}'"))),
    };
    let n: u64 = p.get("samples")?;
    let reports = kinds
        .iter()
        .map(|&k| markov_boundary_check(&model, &poly, n, k, &settings))
        .collect::<surfent::Result<Vec<_>>>()?;
    for r in &reports {
        println!(
            "boundary={:?} exact_deviation={:.3e} mc_deviation={:.3e} mc_std_error={:.3e}",
            r.boundary, r.exact_deviation, r.mc_deviation, r.mc_std_error
        );
    }
    out.csv("markov-check.csv", &reports)
}
