use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::params::Params;

/// Not checked by any run: plus and minus boundary states are taken to
/// satisfy the strong zero-one law.
const ZERO_ONE_LAW: &str = "plus and minus states satisfy the strong 0-1 law";

/// Collects the files of one run and writes its metadata sidecar last.
pub struct Output {
    dir: PathBuf,
    command: String,
    protected: Option<PathBuf>,
    files: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path, command: &str, config: Option<&Path>) -> CliResult<Self> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Runtime(format!("cannot create output directory {}: {e}", dir.display())))?;
        let protected = config.and_then(|c| c.canonicalize().ok());
        Ok(Output { dir: dir.to_path_buf(), command: command.to_string(), protected, files: Vec::new() })
    }

    fn target(&mut self, name: &str) -> CliResult<PathBuf> {
        let path = self.dir.join(name);
        if let (Some(p), Ok(existing)) = (&self.protected, path.canonicalize()) {
            if *p == existing {
                return Err(CliError::config(format!(
                    "output {} would overwrite the config file; choose another --out",
                    path.display()
                )));
            }
        }
        self.files.push(name.to_string());
        Ok(path)
    }

    pub fn text(&mut self, name: &str, body: &str) -> CliResult<()> {
        let path = self.target(name)?;
        fs::write(path, body)?;
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut body = serde_json::to_string_pretty(value)?;
        body.push('\n');
        self.text(name, &body)
    }

    /// Comma-separated, header first, LF line endings.
    pub fn csv<R: Serialize>(&mut self, name: &str, rows: &[R]) -> CliResult<()> {
        let path = self.target(name)?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `<command>.meta.json`: the resolved configuration, the code
    /// version, the produced files and the modelling assumptions the run
    /// relies on. Contains nothing that varies between identical runs.
    pub fn finish(mut self, params: &Params) -> CliResult<()> {
        let files = self.files.clone();
        let phases = params.values().values().any(|v| v.contains("boundary=plus") || v.contains("boundary=minus"));
        let assumptions: Vec<&str> = if phases { vec![ZERO_ONE_LAW] } else { Vec::new() };
        let meta: Value = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "rng": surfent::fields::RNG_NAME,
            "config": params.values(),
            "outputs": files,
            "assumptions": assumptions,
        });
        let name = format!("{}.meta.json", self.command);
        self.json(&name, &meta)
    }
}
