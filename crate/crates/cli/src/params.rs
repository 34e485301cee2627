use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::error::{CliError, CliResult};

/// One configurable key. An empty default means the key is optional.
#[derive(Clone, Copy, Debug)]
pub struct Param {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

const fn param(key: &'static str, default: &'static str, help: &'static str) -> Param {
    Param { key, default, help }
}

pub const SEED: Param = param("seed", "1", "root seed; replica r uses seed + r");

pub const SAMPLER: &[Param] = &[
    SEED,
    param("burn-in", "1000", "heat-bath sweeps before the first snapshot"),
    param("thinning", "5", "sweeps between snapshots"),
    param("replicas", "10", "independent chains used for the jackknife"),
];

pub const ESTIMATION: &[Param] = &[
    param("window", "64", "side of the square sampling window"),
    param("margin", "8", "distance of usable origins from a non-periodic edge"),
    param("pseudocount", "0.5", "Laplace pseudocount per table cell"),
    param("quadrature", "32", "torus quadrature points for irrational slopes"),
    param("strip-height", "32", "height of the periodic strip for long lines"),
    param("max-window-sites", "4000000", "upper bound on sampling window size"),
    param("force-mc", "false", "estimate iid models by sampling"),
    param("depth", "6", "number of past sites conditioned on"),
    param("samples", "100000", "conditioning samples"),
    param("units", "nats", "nats or bits"),
];

pub const REL_MODELS: &[Param] = &[
    param("minus", "ising:beta=0.6,h=0,boundary=minus", "reference model"),
    param("plus", "ising:beta=0.6,h=0,boundary=plus", "alternative model"),
];

/// Resolved parameters of one run: defaults, then the config file, then
/// command-line flags.
#[derive(Clone, Debug)]
pub struct Params {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

fn known<'a>(specs: &'a [Param], key: &str) -> Option<&'a Param> {
    specs.iter().find(|p| p.key == key)
}

impl Params {
    pub fn resolve(
        command: &str,
        specs: &[Param],
        file: Option<&Path>,
        flags: &[(String, String)],
    ) -> CliResult<Params> {
        let mut values: BTreeMap<String, String> = specs
            .iter()
            .filter(|p| !p.default.is_empty())
            .map(|p| (p.key.to_string(), p.default.to_string()))
            .collect();
        if let Some(path) = file {
            for (k, v) in read_config(command, path)? {
                let k = normalize(&k);
                if known(specs, &k).is_none() {
                    return Err(CliError::config(format!("unknown key '{k}' in {} for {command}", path.display())));
                }
                values.insert(k, v);
            }
        }
        for (k, v) in flags {
            values.insert(k.clone(), v.clone());
        }
        values.retain(|_, v| !v.is_empty());
        Ok(Params { values })
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn opt_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn str(&self, key: &str) -> CliResult<&str> {
        self.opt_str(key).ok_or_else(|| CliError::config(format!("missing value for '{key}'")))
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.opt_str(key)
            .map(|v| {
                v.trim()
                    .parse::<T>()
                    .map_err(|_| CliError::config(format!("invalid value '{v}' for '{key}'")))
            })
            .transpose()
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<T> {
        self.opt(key)?.ok_or_else(|| CliError::config(format!("missing value for '{key}'")))
    }

    pub fn list<T: FromStr>(&self, key: &str) -> CliResult<Vec<T>> {
        self.str(key)?
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<T>()
                    .map_err(|_| CliError::config(format!("invalid entry '{v}' in '{key}'")))
            })
            .collect()
    }

    /// `lo:hi` pairs.
    pub fn range<T: FromStr>(&self, key: &str) -> CliResult<(T, T)> {
        let v = self.str(key)?;
        let bad = || CliError::config(format!("'{key}' must look like lo:hi, got '{v}'"));
        let (lo, hi) = v.split_once(':').ok_or_else(bad)?;
        Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
    }
}

/// Reads `key = value` lines, or a JSON object. A metadata sidecar written
/// by a previous run is accepted as well: its `config` object is used and
/// its `command` must match.
fn read_config(command: &str, path: &Path) -> CliResult<Vec<(String, String)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("config {} is not valid JSON: {e}", path.display())))?;
        let obj = match (doc.get("config"), doc.get("command")) {
            (Some(cfg), cmd) => {
                if let Some(cmd) = cmd.and_then(Value::as_str) {
                    if cmd != command {
                        return Err(CliError::config(format!(
                            "config {} belongs to '{cmd}', not '{command}'",
                            path.display()
                        )));
                    }
                }
                cfg
            }
            (None, _) => &doc,
        };
        let obj = obj
            .as_object()
            .ok_or_else(|| CliError::config(format!("config {} must hold a JSON object", path.display())))?;
        return obj
            .iter()
            .map(|(k, v)| {
                let s = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(_) | Value::Bool(_) => v.to_string(),
                    _ => return Err(CliError::config(format!("value of '{k}' must be a string, number or boolean"))),
                };
                Ok((k.clone(), s))
            })
            .collect();
    }
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("{}:{}: expected key = value", path.display(), no + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
