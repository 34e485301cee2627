use std::f64::consts::LN_2;
use std::path::Path;

use surfent::entropy::{EntropyEstimate, EntropyEstimator, McSettings};
use surfent::fields::{FieldModel, SamplerConfig};
use surfent::geometry::{CurveSpec, PolygonSpec};

use crate::error::{CliError, CliResult};
use crate::output::Output;
use crate::params::{Param, Params, ESTIMATION, REL_MODELS, SAMPLER, SEED};

mod bounds;
mod entropy;
mod geometry;
mod sample;

/// Seed offset of the alternative model in relative-entropy runs, so that
/// the two chains are not coupled through a shared random stream.
pub const PLUS_SEED_OFFSET: u64 = 1_000_000;

pub struct Command {
    pub name: &'static str,
    pub about: &'static str,
    pub params: Vec<Param>,
    pub run: fn(&Params, &mut Output) -> CliResult<()>,
}

const fn p(key: &'static str, default: &'static str, help: &'static str) -> Param {
    Param { key, default, help }
}

fn with(groups: &[&[Param]], own: &[Param]) -> Vec<Param> {
    groups.iter().flat_map(|g| g.iter().copied()).chain(own.iter().copied()).collect()
}

pub fn commands() -> Vec<Command> {
    vec![
        Command {
            name: "geometry",
            about: "Lattice and contour approximations, length ratios, equidistribution",
            params: geometry::PARAMS.to_vec(),
            run: geometry::run,
        },
        Command {
            name: "sample",
            about: "Field snapshots on a square window",
            params: with(&[SAMPLER], sample::PARAMS),
            run: sample::run,
        },
        Command {
            name: "line-entropy",
            about: "Specific entropy along lines of a given slope",
            params: with(&[SAMPLER, ESTIMATION], &[p("model", "iid:0.5,0.5", "field model"), p("slope", "1/2", "line slope")]),
            run: entropy::line,
        },
        Command {
            name: "polygon-entropy",
            about: "Length-weighted specific entropy along a polygon",
            params: with(&[SAMPLER, ESTIMATION], &[p("model", "iid:0.5,0.5", "field model"), SHAPE, AREA]),
            run: entropy::polygon,
        },
        Command {
            name: "curve-entropy",
            about: "Specific entropy along a polygonized curve",
            params: with(&[SAMPLER, ESTIMATION], &[p("model", "iid:0.5,0.5", "field model"), CURVE, POLYGON_POINTS]),
            run: entropy::curve_entropy,
        },
        Command {
            name: "contour-entropy",
            about: "Entropy given contour-approximation pasts",
            params: with(
                &[SAMPLER, ESTIMATION],
                &[p("model", "iid:0.5,0.5", "field model"), p("slope", "1/2", "line slope"), p("grid", "32", "torus grid for irrational slopes")],
            ),
            run: entropy::contour,
        },
        Command {
            name: "rel-entropy",
            about: "Specific relative entropy between two models",
            params: with(
                &[SAMPLER, ESTIMATION, REL_MODELS],
                &[p("mode", "fo", "fo, line, polygon or curve"), p("slope", "0", "line slope"), SHAPE, AREA, CURVE, POLYGON_POINTS],
            ),
            run: entropy::relative,
        },
        Command {
            name: "converge",
            about: "Shannon-McMillan ladder of rescaled information",
            params: with(
                &[SAMPLER, ESTIMATION],
                &[
                    p("model", "ising:beta=0.3,h=0,boundary=periodic", "field model"),
                    p("slope", "1/2", "line slope"),
                    p("intercept", "0", "line intercept"),
                    p("n-list", "10,100,1000,10000", "increasing line lengths"),
                    p("fresh-samples", "100", "independent configurations per row"),
                    p("fresh-stream", "0", "index of the fresh-sample stream"),
                    p("baseline-radius", "", "radius of the volume-order baseline window"),
                ],
            ),
            run: entropy::converge,
        },
        Command {
            name: "bound",
            about: "Evaluate the surface-order lower-bound functional",
            params: with(
                &[SAMPLER, ESTIMATION, REL_MODELS],
                &[
                    SHAPE,
                    AREA,
                    p("entropy-const", "", "same entropy for every edge"),
                    p("entropies", "", "comma-separated per-edge entropies"),
                ],
            ),
            run: bounds::bound,
        },
        Command {
            name: "optimize",
            about: "Search for the shape minimizing the bound at fixed area",
            params: with(&[SAMPLER, ESTIMATION, REL_MODELS], bounds::OPTIMIZE),
            run: bounds::optimize,
        },
        Command {
            name: "markov-check",
            about: "Small-window test of the Markov property across a polygon boundary",
            params: with(&[SAMPLER], bounds::MARKOV),
            run: bounds::markov,
        },
    ]
}

const SHAPE: Param = p("shape", "square", "square, box:H, regular:K[:ROT] or a polygon JSON file");
const AREA: Param = p("area", "", "rescale the shape to this area");
const CURVE: Param = p("curve", "circle:1", "circle:R or a curve JSON file");
const POLYGON_POINTS: Param = p("polygon-points", "16", "chords of the curve polygonization");

pub(crate) fn model(p: &Params, key: &str) -> CliResult<FieldModel> {
    Ok(p.str(key)?.parse::<FieldModel>()?)
}

pub(crate) fn sampler(p: &Params) -> CliResult<SamplerConfig> {
    let cfg = SamplerConfig {
        seed: p.get(SEED.key)?,
        burn_in_sweeps: p.get("burn-in")?,
        thinning_sweeps: p.get("thinning")?,
        replicas: p.get("replicas")?,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub(crate) fn mc_settings(p: &Params, seed_offset: u64) -> CliResult<McSettings> {
    let mut sampler = sampler(p)?;
    sampler.seed = sampler.seed.wrapping_add(seed_offset);
    Ok(McSettings {
        sampler,
        window: p.get("window")?,
        margin: p.get("margin")?,
        pseudocount: p.get("pseudocount")?,
        quadrature_points: p.get("quadrature")?,
        force_monte_carlo: p.get("force-mc")?,
        strip_height: p.get("strip-height")?,
        max_window_sites: p.get("max-window-sites")?,
    })
}

pub(crate) fn estimator(p: &Params, key: &str, seed_offset: u64) -> CliResult<EntropyEstimator> {
    Ok(EntropyEstimator::new(model(p, key)?, mc_settings(p, seed_offset)?)?)
}

/// Factor applied to entropies on output.
pub(crate) fn unit_scale(p: &Params) -> CliResult<f64> {
    match p.str("units")? {
        "nats" => Ok(1.0),
        "bits" => Ok(1.0 / LN_2),
        other => Err(CliError::config(format!("units must be nats or bits, got '{other}'"))),
    }
}

pub(crate) fn scaled(e: &EntropyEstimate, scale: f64) -> EntropyEstimate {
    let mut out = e.clone();
    out.value *= scale;
    out.std_error *= scale;
    out
}

pub(crate) fn shape(p: &Params) -> CliResult<PolygonSpec> {
    let spec = p.str("shape")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|_| CliError::config(format!("bad number '{v}' in shape '{spec}'")));
    let poly = if spec == "square" {
        PolygonSpec::square(1.0)?
    } else if let Some(h) = spec.strip_prefix("box:") {
        let h = parse(h)?;
        PolygonSpec::new(vec![[-h, -h], [h, -h], [h, h], [-h, h]], true)?
    } else if let Some(rest) = spec.strip_prefix("regular:") {
        let (k, rot) = rest.split_once(':').unwrap_or((rest, "0"));
        let k: usize = k.trim().parse().map_err(|_| CliError::config(format!("bad vertex count in '{spec}'")))?;
        PolygonSpec::regular(k, 1.0, parse(rot)?)?
    } else {
        PolygonSpec::from_json(&read_input(spec)?)?
    };
    match p.opt::<f64>("area")? {
        Some(a) if a > 0.0 => Ok(poly.scaled((a / poly.area()).sqrt())?),
        Some(a) => Err(CliError::config(format!("area must be positive, got {a}"))),
        None => Ok(poly),
    }
}

pub(crate) fn curve(p: &Params) -> CliResult<CurveSpec> {
    let spec = p.str("curve")?;
    if let Some(r) = spec.strip_prefix("circle:") {
        let r: f64 = r.trim().parse().map_err(|_| CliError::config(format!("bad radius in '{spec}'")))?;
        return Ok(CurveSpec::circle([0.0, 0.0], r, 256)?);
    }
    Ok(CurveSpec::from_json(&read_input(spec)?)?)
}

fn read_input(path: &str) -> CliResult<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::config(format!("cannot read {path}: {e}")))
}
