//! Command-line front end: subcommands, parameter resolution and exit codes.

pub mod args;
mod commands;
pub mod output;

use args::{Cli, Common, ModelArg};
use clap::Parser;
use fpp_params::{load_preset, parse_config, ModelParams};
use output::{emit, fnv, Meta, VERSION};
use std::ffi::OsString;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<fpp_events::EventError> for CliError {
    fn from(e: fpp_events::EventError) -> Self {
        match e {
            fpp_events::EventError::Budget { .. } => CliError::Config(format!("{e}; lower -k or raise --budget")),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<fpp_env::EnvError> for CliError {
    fn from(e: fpp_env::EnvError) -> Self {
        CliError::Config(format!("{e}; choose a smaller window"))
    }
}

impl From<fpp_geodesic::GeoError> for CliError {
    fn from(e: fpp_geodesic::GeoError) -> Self {
        CliError::Config(format!("{e}; widen --window or move the endpoints"))
    }
}

/// Parameters from --params, --preset or the model default, checked against --model.
pub fn resolve_params(c: &Common) -> Result<ModelParams, CliError> {
    let p = if let Some(path) = &c.params {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        parse_config(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
    } else {
        let name = c.preset.clone().unwrap_or_else(|| match c.model {
            Some(ModelArg::Simple) => "simple-A".into(),
            _ => "full-A".into(),
        });
        load_preset(&name).map_err(|e| CliError::Config(format!("{e}; known presets: {}", fpp_params::preset_names().join(", "))))?
    };
    let want = match c.model {
        Some(ModelArg::Simple) => Some("simple"),
        Some(ModelArg::Full) => Some("full"),
        None => None,
    };
    if let Some(m) = want {
        if m != p.model_name() {
            return Err(CliError::Config(format!("--model {m} does not match the {} parameters given", p.model_name())));
        }
    }
    Ok(p)
}

/// Hash of everything that determines a command's content except the seed.
pub fn config_hash(cli: &Cli, params: Option<&ModelParams>) -> String {
    let c = &cli.common;
    let text = format!(
        "{}\n{}\nwindow={:?}\ncutoff={:?}\nbudget={}\n{:?}",
        cli.command.name(),
        params.map(|p| p.to_config_string()).unwrap_or_default(),
        c.window,
        c.cutoff,
        c.budget,
        cli.command
    );
    format!("{:016x}", fnv(text.as_bytes()))
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.common.jobs {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let params = match &cli.command {
        args::Command::ValidateParams(a) if a.file.is_some() => None,
        args::Command::LpVerify(_) => None,
        _ => Some(resolve_params(&cli.common)?),
    };
    let outcome = commands::dispatch(cli, params.as_ref())?;
    let meta = Meta {
        tool: "fpp",
        version: VERSION,
        command: cli.command.name().into(),
        config_hash: config_hash(cli, params.as_ref()),
        seed: cli.common.seed,
    };
    emit(&outcome, &meta, cli.common.out.as_deref(), cli.common.format)?;
    Ok(exit_code(&outcome))
}

fn exit_code(o: &output::Outcome) -> i32 {
    match &o.failure {
        Some(why) => {
            eprintln!("check failed: {why}");
            3
        }
        None => 0,
    }
}
