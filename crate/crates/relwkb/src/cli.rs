//! Configuration-driven front end: one TOML file fully determines a run,
//! and every table is rendered deterministically so identical configs yield
//! byte-identical output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::context::{Energy, PhysicalContext, Tolerances};
use crate::error::{Error, Result};
use crate::oracle::{solve_exact, GridSpec};
use crate::potential::{RadialPotential, TablePotential};
use crate::quantize::{
    coulomb_energy, radial_action_at, scan_spectrum_range, solve_level, QuantumCondition,
};
use crate::wavefunction::build_wavefunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    ActionTable,
    Wavefunction,
    Verify,
}

impl std::str::FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectrum" => Ok(Self::Spectrum),
            "action-table" => Ok(Self::ActionTable),
            "wavefunction" => Ok(Self::Wavefunction),
            "verify" => Ok(Self::Verify),
            other => Err(Error::InvalidArgument(format!(
                "unknown command {other:?}; expected spectrum | action-table | wavefunction | verify"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    JsonLines,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json-lines" => Ok(Self::JsonLines),
            other => Err(Error::InvalidArgument(format!(
                "unknown format {other:?}; expected csv | json-lines"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    /// coulomb | harmonic | linear | table
    pub kind: String,
    /// Harmonic stiffness (angular frequency).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Linear slope (energy per length).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    /// Path of a two-column `r value` table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
}

impl PotentialConfig {
    pub fn build(&self) -> Result<RadialPotential> {
        match self.kind.as_str() {
            "coulomb" => Ok(RadialPotential::Coulomb),
            "harmonic" => {
                let omega = self.omega.ok_or_else(|| {
                    Error::InvalidArgument("harmonic potential needs `omega`".into())
                })?;
                Ok(RadialPotential::Harmonic { omega })
            }
            "linear" => {
                let slope = self.slope.ok_or_else(|| {
                    Error::InvalidArgument("linear potential needs `slope`".into())
                })?;
                Ok(RadialPotential::Linear { slope })
            }
            "table" => {
                let path = self.table.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("table potential needs `table` (a file path)".into())
                })?;
                Ok(RadialPotential::Table(TablePotential::from_file(path)?))
            }
            other => Err(Error::InvalidArgument(format!(
                "unknown potential kind {other:?}"
            ))),
        }
    }
}

fn default_grid_size() -> usize {
    512
}
fn default_energy_count() -> usize {
    50
}
fn default_maslov() -> u32 {
    2
}
fn default_verify_tolerance() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub command: Command,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub n_r_min: u32,
    #[serde(default)]
    pub n_r_max: u32,
    #[serde(default)]
    pub l_min: u32,
    #[serde(default)]
    pub l_max: u32,
    /// Conjugate-point order sum entering the quantum condition.
    #[serde(default = "default_maslov")]
    pub maslov_m: u32,
    /// Also solve each level with the independent integrator.
    #[serde(default)]
    pub with_oracle: bool,
    /// Wavefunction sampling points (wavefunction command).
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    /// Energy sweep for action-table, total energies in units of m c^2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_max: Option<f64>,
    #[serde(default = "default_energy_count")]
    pub energy_count: usize,
    /// Verify threshold on |E_semiclassical - E_oracle| in units of m c^2.
    #[serde(default = "default_verify_tolerance")]
    pub verify_tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub context: PhysicalContext,
    pub potential: PotentialConfig,
    pub run: RunSection,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("config parse error: {e}")))?;
        config.context.validate()?;
        config.tolerances.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

/// One rendered cell; numbers carry full precision into both formats.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Text(t) => t.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::json!(v),
            Cell::Num(v) => serde_json::json!(v),
            Cell::Text(t) => serde_json::json!(t),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// Deterministic tabular result of a run.
#[derive(Debug, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub diagnostics: Vec<String>,
}

impl Table {
    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Csv => {
                for comment in &self.comments {
                    let _ = writeln!(out, "# {comment}");
                }
                let _ = writeln!(out, "{}", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
            }
            OutputFormat::JsonLines => {
                for row in &self.rows {
                    let mut object = serde_json::Map::new();
                    for (name, cell) in self.columns.iter().zip(row) {
                        object.insert((*name).to_string(), cell.json());
                    }
                    let _ = writeln!(out, "{}", serde_json::Value::Object(object));
                }
            }
        }
        if !self.diagnostics.is_empty() {
            for line in &self.diagnostics {
                let _ = writeln!(out, "# diagnostic: {line}");
            }
        }
        out
    }

    pub fn failed(&self) -> bool {
        !self.diagnostics.is_empty()
    }
}

pub fn execute(config: &RunConfig) -> Result<Table> {
    let potential = config.potential.build()?;
    match config.run.command {
        Command::Spectrum => run_spectrum(config, &potential, false),
        Command::Verify => run_spectrum(config, &potential, true),
        Command::ActionTable => run_action_table(config, &potential),
        Command::Wavefunction => run_wavefunction(config, &potential),
    }
}

/// Spectrum rows; with `verify` the oracle column is forced on and the
/// maximum |semiclassical - oracle| deviation is checked against the
/// configured threshold.
fn run_spectrum(config: &RunConfig, potential: &RadialPotential, verify: bool) -> Result<Table> {
    let ctx = &config.context;
    let run = &config.run;
    let with_oracle = run.with_oracle || verify;
    let is_coulomb = matches!(potential, RadialPotential::Coulomb) && ctx.coupling > 0.0;

    let mut table = Table {
        columns: vec![
            "n_r",
            "l",
            "energy",
            "energy_closed_form",
            "energy_oracle",
            "residual_action",
        ],
        ..Table::default()
    };

    if run.n_r_min > run.n_r_max || run.l_min > run.l_max {
        return Ok(table);
    }
    let scan = scan_spectrum_range(
        potential,
        ctx,
        &config.tolerances,
        run.n_r_min..=run.n_r_max,
        run.l_min..=run.l_max,
        run.maslov_m,
    );

    let mut max_oracle_dev: f64 = 0.0;
    for entry in &scan.entries {
        let closed = if is_coulomb {
            match coulomb_energy(ctx, entry.n_r, entry.l) {
                Ok(e) => Cell::Num(e.total()),
                Err(e) => {
                    table.diagnostics.push(format!(
                        "closed form (n_r={}, l={}): {e}",
                        entry.n_r, entry.l
                    ));
                    Cell::Empty
                }
            }
        } else {
            Cell::Empty
        };
        let oracle = if with_oracle {
            match solve_exact(
                potential,
                ctx,
                &config.tolerances,
                entry.n_r,
                entry.l,
                &GridSpec::default(),
            ) {
                Ok(sol) => {
                    let dev =
                        (sol.energy.offset() - entry.energy.offset()).abs() / ctx.rest_energy();
                    max_oracle_dev = max_oracle_dev.max(dev);
                    Cell::Num(sol.energy.total())
                }
                Err(e) => {
                    table
                        .diagnostics
                        .push(format!("oracle (n_r={}, l={}): {e}", entry.n_r, entry.l));
                    Cell::Empty
                }
            }
        } else {
            Cell::Empty
        };
        table.rows.push(vec![
            Cell::Int(entry.n_r as u64),
            Cell::Int(entry.l as u64),
            Cell::Num(entry.energy.total()),
            closed,
            oracle,
            Cell::Num(entry.residual),
        ]);
    }
    for failure in &scan.failures {
        table.diagnostics.push(format!(
            "level (n_r={}, l={}): {}",
            failure.n_r, failure.l, failure.error
        ));
    }
    if verify {
        table.comments.push(format!(
            "verify: max |E_semiclassical - E_oracle| = {:.3e} * mc^2 (threshold {:.3e})",
            max_oracle_dev, run.verify_tolerance
        ));
        if max_oracle_dev > run.verify_tolerance {
            table.diagnostics.push(format!(
                "verification failed: max deviation {max_oracle_dev:.3e} exceeds {:.3e}",
                run.verify_tolerance
            ));
        }
    }
    Ok(table)
}

/// Rows (E, I_r/hbar) over an inclusive energy sweep at l = l_min; energies
/// outside the bound range are flagged per row rather than failing the run.
fn run_action_table(config: &RunConfig, potential: &RadialPotential) -> Result<Table> {
    let ctx = &config.context;
    let run = &config.run;
    let (e_min, e_max) = match (run.energy_min, run.energy_max) {
        (Some(a), Some(b)) if a <= b => (a, b),
        (Some(a), None) => (a, a),
        _ => {
            return Err(Error::InvalidArgument(
                "action-table needs energy_min <= energy_max (units of mc^2)".into(),
            ))
        }
    };
    if run.energy_count == 0 {
        return Err(Error::InvalidArgument(
            "energy_count must be positive".into(),
        ));
    }

    let mut table = Table {
        columns: vec!["energy", "action", "status"],
        ..Table::default()
    };
    let rest = ctx.rest_energy();
    for k in 0..run.energy_count {
        let fraction = if run.energy_count == 1 {
            0.0
        } else {
            k as f64 / (run.energy_count - 1) as f64
        };
        let total_over_rest = e_min + (e_max - e_min) * fraction;
        let energy = Energy::from_offset((total_over_rest - 1.0) * rest, ctx);
        match radial_action_at(potential, ctx, &config.tolerances, energy, run.l_min) {
            Ok(action) => table.rows.push(vec![
                Cell::Num(energy.total()),
                Cell::Num(action.action),
                Cell::Text("ok".into()),
            ]),
            Err(e) => table.rows.push(vec![
                Cell::Num(energy.total()),
                Cell::Empty,
                Cell::Text(format!("{e}")),
            ]),
        }
    }
    Ok(table)
}

/// Solves one level (n_r_min, l_min) and samples its wavefunction.
fn run_wavefunction(config: &RunConfig, potential: &RadialPotential) -> Result<Table> {
    let ctx = &config.context;
    let run = &config.run;
    let condition = QuantumCondition::new(run.n_r_min, run.l_min).with_maslov(run.maslov_m);
    let entry = solve_level(potential, ctx, &config.tolerances, &condition)?;
    let semi = build_wavefunction(potential, ctx, &config.tolerances, &entry, run.grid_size)?;
    let mut table = Table {
        comments: vec![format!(
            "n_r={} l={} energy={:.16e}",
            entry.n_r,
            entry.l,
            entry.energy.total()
        )],
        columns: vec!["r", "value"],
        ..Table::default()
    };
    for (r, v) in semi.grid.iter().zip(&semi.value) {
        table.rows.push(vec![Cell::Num(*r), Cell::Num(*v)]);
    }
    Ok(table)
}
