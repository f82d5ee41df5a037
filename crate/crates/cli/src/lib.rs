//! Library side of the `fsosec` binary, kept separate so the commands can
//! be driven from tests without spawning a process.

pub mod args;
pub mod commands;
pub mod error;

use std::path::Path;

use fsosec_core::ScenarioConfig;
use serde::Serialize;

use crate::args::{Cli, Command};
pub use crate::error::{CliError, EXIT_CONFIG, EXIT_OK, EXIT_SOLVER, EXIT_VALIDATION};

/// Rendered command output and the exit code it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

/// Reads a JSON scenario. Errors name the offending field path.
pub fn load_config(path: Option<&Path>) -> Result<ScenarioConfig, CliError> {
    let cfg = match path {
        None => ScenarioConfig::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            parse_config(&text)?
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            CliError::Config(e.into_inner().to_string())
        } else {
            CliError::Config(format!("field `{path}`: {}", e.into_inner()))
        }
    })
}

fn json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = load_config(cli.config.as_deref())?;
    let ok = |text| Output { text, code: EXIT_OK };
    match &cli.command {
        Command::Params => Ok(ok(json(&commands::params(&cfg)?))),
        Command::Sweep(a) => {
            let rows = commands::sweep(&cfg, a)?;
            Ok(ok(commands::write_csv(a.axis, &rows)?))
        }
        Command::Optimize(a) => Ok(ok(json(&commands::optimize(&cfg, a)?))),
        Command::Validate(a) => {
            let report = commands::run_validate(&cfg, a)?;
            Ok(Output {
                text: json(&report),
                code: if report.ok() { EXIT_OK } else { EXIT_VALIDATION },
            })
        }
    }
}
