use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command as Cli};

mod commands;
mod error;
mod output;
mod params;

use error::{CliError, CliResult};
use output::Output;
use params::Params;

fn cli() -> Cli {
    let mut cli = Cli::new("surfent")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Surface-order entropy experiments for lattice random fields")
        .subcommand_required(true);
    for c in commands::commands() {
        let mut sub = Cli::new(c.name)
            .about(c.about)
            .arg(Arg::new("config").long("config").value_name("FILE").help("key = value file or JSON; a previous run's .meta.json works too"))
            .arg(Arg::new("out").long("out").value_name("DIR").default_value("surfent-out").help("output directory"));
        for p in &c.params {
            let help = if p.default.is_empty() { p.help.to_string() } else { format!("{} [default: {}]", p.help, p.default) };
            sub = sub.arg(Arg::new(p.key).long(p.key).value_name("VALUE").action(ArgAction::Set).allow_hyphen_values(true).help(help));
        }
        cli = cli.subcommand(sub);
    }
    cli
}

fn run(matches: &ArgMatches) -> CliResult<()> {
    let (name, sub) = matches.subcommand().ok_or_else(|| CliError::config("no subcommand given"))?;
    let command = commands::commands()
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| CliError::config(format!("unknown subcommand '{name}'")))?;
    let config = sub.get_one::<String>("config").map(PathBuf::from);
    let flags: Vec<(String, String)> = command
        .params
        .iter()
        .filter_map(|p| sub.get_one::<String>(p.key).map(|v| (p.key.to_string(), v.clone())))
        .collect();
    let params = Params::resolve(name, &command.params, config.as_deref(), &flags)?;
    let dir = PathBuf::from(sub.get_one::<String>("out").expect("has default"));
    let mut out = Output::new(&dir, name, config.as_deref())?;
    (command.run)(&params, &mut out)?;
    out.finish(&params)
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let err = CliError::config(first.trim_start_matches("error: ").to_string());
            eprintln!("{}", err.line());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(&matches) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
