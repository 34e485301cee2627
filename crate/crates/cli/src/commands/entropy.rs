use serde::Serialize;
use serde_json::json;
use surfent::entropy::{
    convergence_experiment, fo_specific_entropy, relative_entropy_curve, relative_entropy_line,
    relative_entropy_polygon, ConvergenceConfig, ConvergenceRow, EntropyEstimate,
};
use surfent::geometry::{LinearMap, Scalar, Slope};

use super::{curve, estimator, scaled, shape, unit_scale, PLUS_SEED_OFFSET};
use crate::error::{CliError, CliResult};
use crate::output::Output;
use crate::params::Params;

fn report(out: &mut Output, name: &str, p: &Params, e: &EntropyEstimate) -> CliResult<()> {
    let e = scaled(e, unit_scale(p)?);
    println!("value={:.6} std_error={:.6} method={:?} depth={} samples={}", e.value, e.std_error, e.method, e.depth, e.samples);
    for flag in &e.flags {
        println!("flag={flag}");
    }
    let units = p.str("units")?;
    out.json(&format!("{name}.json"), &json!({ "units": units, "estimate": e }))
}

fn depth_samples(p: &Params) -> CliResult<(u32, u64)> {
    Ok((p.get("depth")?, p.get("samples")?))
}

pub fn line(p: &Params, out: &mut Output) -> CliResult<()> {
    let mut est = estimator(p, "model", 0)?;
    let slope = Slope::parse(p.str("slope")?)?;
    let (depth, n) = depth_samples(p)?;
    let e = est.line_entropy(&slope, depth, n)?;
    report(out, "line-entropy", p, &e)
}

pub fn polygon(p: &Params, out: &mut Output) -> CliResult<()> {
    let mut est = estimator(p, "model", 0)?;
    let (depth, n) = depth_samples(p)?;
    let e = est.polygon_entropy(&shape(p)?, depth, n)?;
    report(out, "polygon-entropy", p, &e)
}

pub fn curve_entropy(p: &Params, out: &mut Output) -> CliResult<()> {
    let mut est = estimator(p, "model", 0)?;
    let (depth, n) = depth_samples(p)?;
    let e = est.curve_entropy(&curve(p)?, p.get("polygon-points")?, depth, n)?;
    report(out, "curve-entropy", p, &e)
}

pub fn contour(p: &Params, out: &mut Output) -> CliResult<()> {
    let mut est = estimator(p, "model", 0)?;
    let slope = Slope::parse(p.str("slope")?)?;
    let (depth, n) = depth_samples(p)?;
    let e = est.contour_line_entropy(&slope, depth, n, p.get("grid")?)?;
    report(out, "contour-entropy", p, &e)
}

pub fn relative(p: &Params, out: &mut Output) -> CliResult<()> {
    let mut minus = estimator(p, "minus", 0)?;
    let mut plus = estimator(p, "plus", PLUS_SEED_OFFSET)?;
    let (depth, n) = depth_samples(p)?;
    let e = match p.str("mode")? {
        "fo" => fo_specific_entropy(&mut minus, &mut plus, depth, n)?,
        "line" => relative_entropy_line(&mut minus, &mut plus, &Slope::parse(p.str("slope")?)?, depth, n)?,
        "polygon" => relative_entropy_polygon(&mut minus, &mut plus, &shape(p)?, depth, n)?,
        "curve" => relative_entropy_curve(&mut minus, &mut plus, &curve(p)?, p.get("polygon-points")?, depth, n)?,
        other => return Err(CliError::config(format!("mode must be fo, line, polygon or curve, got '{other}'"))),
    };
    report(out, "rel-entropy", p, &e)
}

#[derive(Serialize)]
struct Row {
    n: u64,
    mean: f64,
    spread: f64,
    std_error: f64,
    samples: usize,
}

pub fn converge(p: &Params, out: &mut Output) -> CliResult<()> {
    let mut est = estimator(p, "model", 0)?;
    let slope = Slope::parse(p.str("slope")?)?;
    let intercept = Scalar::parse(p.str("intercept")?)
        .ok_or_else(|| CliError::config(format!("invalid intercept '{}'", p.str("intercept").unwrap_or(""))))?;
    let cfg = ConvergenceConfig {
        n_list: p.list("n-list")?,
        depth: p.get("depth")?,
        table_samples: p.get("samples")?,
        fresh_samples: p.get("fresh-samples")?,
        baseline_radius: p.opt("baseline-radius")?,
        fresh_stream: p.get("fresh-stream")?,
    };
    let rep = convergence_experiment(&mut est, &LinearMap::new(slope, intercept), &cfg)?;
    let scale = unit_scale(p)?;
    let rows: Vec<Row> = rep
        .rows
        .iter()
        .map(|r: &ConvergenceRow| Row {
            n: r.n,
            mean: r.mean * scale,
            spread: r.spread * scale,
            std_error: r.std_error * scale,
            samples: r.samples,
        })
        .collect();
    println!("n,mean,std_error");
    for r in &rows {
        println!("{},{:.6},{:.6}", r.n, r.mean, r.std_error);
    }
    out.csv("converge.csv", &rows)?;
    if let Some(b) = &rep.baseline {
        let b = scaled(b, scale);
        println!("baseline={:.6} std_error={:.6}", b.value, b.std_error);
        out.json("converge-baseline.json", &json!({ "units": p.str("units")?, "estimate": b }))?;
    }
    Ok(())
}
