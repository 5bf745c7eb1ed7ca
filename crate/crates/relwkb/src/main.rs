use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use relwkb::cli::{execute, Command, OutputFormat, RunConfig};
use relwkb::error::Error;

const COLUMN_HELP: &str = "\
Commands and their fixed-order output columns:
  spectrum      n_r, l, energy, energy_closed_form, energy_oracle, residual_action
  verify        same as spectrum with the oracle column forced on; exits 3 when
                max |E_semiclassical - E_oracle| exceeds run.verify_tolerance
  action-table  energy, action, status   (sweep set by run.energy_min/max/count)
  wavefunction  r, value                 (level set by run.n_r_min, run.l_min)

Energies are totals in the configured unit system; `action` is I_r in units
of hbar. CSV cells use full 17-digit scientific notation, so identical
configs produce byte-identical tables. Exit codes: 0 success, 2 config
error, 3 numerical failure.";

#[derive(Parser, Debug)]
#[command(name = "relwkb", version, about = "Semiclassical bound states in relativistic central potentials", after_long_help = COLUMN_HELP)]
struct Cli {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override the command from the config file.
    #[arg(long)]
    command: Option<String>,

    /// Write the table here instead of the config's `run.output` (or stdout).
    #[arg(long)]
    output: Option<PathBuf>,

    /// Override the output format: csv | json-lines.
    #[arg(long)]
    format: Option<String>,

    /// Also solve every level with the independent integrator.
    #[arg(long)]
    with_oracle: bool,

    /// Print the fully resolved configuration as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err((code, message)) => {
            eprintln!("error: {message}");
            code
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, (ExitCode, String)> {
    let config_exit = ExitCode::from(2);
    let numeric_exit = ExitCode::from(3);

    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path).map_err(|e| (config_exit, format!("{e}")))?,
        None => {
            if cli.dump_config {
                default_config()
            } else {
                return Err((
                    config_exit,
                    "--config PATH is required (use --dump-config for a template)".into(),
                ));
            }
        }
    };

    if let Some(command) = &cli.command {
        config.run.command = command
            .parse::<Command>()
            .map_err(|e| (config_exit, format!("{e}")))?;
    }
    if let Some(format) = &cli.format {
        config.run.format = format
            .parse::<OutputFormat>()
            .map_err(|e| (config_exit, format!("{e}")))?;
    }
    if cli.with_oracle {
        config.run.with_oracle = true;
    }
    if let Some(output) = &cli.output {
        config.run.output = Some(output.clone());
    }

    if cli.dump_config {
        let text = config.to_toml();
        emit(config.run.output.as_deref(), &text).map_err(|e| (config_exit, format!("{e}")))?;
        return Ok(ExitCode::SUCCESS);
    }

    let table = execute(&config).map_err(|e| {
        let code = match e {
            Error::InvalidArgument(_)
            | Error::InvalidContext(_)
            | Error::InvalidTolerances(_)
            | Error::InvalidTable(_)
            | Error::Io(_) => config_exit,
            _ => numeric_exit,
        };
        (code, format!("{e}"))
    })?;
    let rendered = table.render(config.run.format);
    emit(config.run.output.as_deref(), &rendered).map_err(|e| (config_exit, format!("{e}")))?;
    if table.failed() {
        return Ok(numeric_exit);
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(path: Option<&std::path::Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn default_config() -> RunConfig {
    RunConfig::from_toml(
        r#"
[context]
mass = 1.0
c = 1.0
hbar = 1.0
coupling = 0.0072973525693

[potential]
kind = "coulomb"

[run]
command = "spectrum"
format = "csv"
n_r_min = 0
n_r_max = 2
l_min = 0
l_max = 2
"#,
    )
    .expect("built-in template parses")
}
