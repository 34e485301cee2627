use serde_json::json;
use surfent::fields::{replica_rng, sample_iid_with, write_stream, Configuration, FieldModel, IsingChain, Region};

use super::{model, p, sampler};
use crate::error::{CliError, CliResult};
use crate::output::Output;
use crate::params::{Param, Params};

pub const PARAMS: &[Param] = &[
    p("model", "ising:beta=0.3,h=0,boundary=periodic", "field model"),
    p("size", "32", "side of the square window"),
    p("count", "10", "number of snapshots"),
];

pub fn run(p: &Params, out: &mut Output) -> CliResult<()> {
    let model = model(p, "model")?;
    let cfg = sampler(p)?;
    let size: usize = p.get("size")?;
    let count: usize = p.get("count")?;
    if count == 0 {
        return Err(CliError::config("count must be positive"));
    }
    let region = Region::new(-(size as i64) / 2, -(size as i64) / 2, size, size)?;
    let configs: Vec<Configuration> = match &model {
        FieldModel::Iid { .. } => {
            let mut rng = replica_rng(cfg.seed, 0);
            (0..count).map(|_| sample_iid_with(&model, region, &mut rng)).collect::<surfent::Result<_>>()?
        }
        FieldModel::Ising { .. } => IsingChain::new(&model, region, &cfg, 0)?.take(count).collect(),
    };
    let meta = json!({ "model": model.to_string(), "sampler": cfg, "region": region });
    out.text("sample.txt", &write_stream(&meta, &model.alphabet(), &configs))?;
    let mean = configs.iter().map(Configuration::magnetization).sum::<f64>() / count as f64;
    println!("snapshots={count} size={size} mean_magnetization={mean}");
    Ok(())
}
