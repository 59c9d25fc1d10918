//! `modal-lca`: assessments, sweeps, rankings and golden checks from the
//! command line.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use modal_lca::dataset::Evaluation;
use modal_lca::lci::FlowId;
use modal_lca::mode::contribution_breakdown;
use modal_lca::report::{self, BarSeries};
use modal_lca::scenario::{apply_scenario, breakeven_mileage, sweep, Axis, Breakeven, ScenarioSpec};
use modal_lca::{validate, Dataset, Error, Indicator, INDICATORS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Parser, Debug)]
#[command(
    name = "modal-lca",
    version,
    about = "Per passenger-kilometre life-cycle impacts of urban transport modes"
)]
struct Cli {
    /// Dataset root.
    #[arg(long, global = true, env = "MODAL_LCA_DATA")]
    data: Option<PathBuf>,
    /// Indicator for sweeps, rankings, break-even and comparisons.
    #[arg(long, global = true, default_value = "GWP100")]
    indicator: String,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Electricity mix for use and servicing.
    #[arg(long, global = true)]
    mix: Option<String>,
    /// Passengers per vehicle.
    #[arg(long, global = true)]
    occupancy: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assess modes (all when none given).
    Assess { modes: Vec<String> },
    /// Sweep one scenario axis: lifespan, servicing, shipping or electricity.
    Sweep {
        axis: String,
        /// Modes to sweep (the three shared modes by default).
        #[arg(long = "mode")]
        modes: Vec<String>,
    },
    /// Component shares of a mode's impacts.
    Contrib { mode: String },
    /// Lifetime mileage at which a mode matches a target impact.
    Breakeven {
        mode: String,
        /// Target per pkt: g CO2eq for GWP100, indicator units otherwise.
        #[arg(long)]
        target: f64,
    },
    /// Every mode divided by the most impacting one, per indicator.
    Normalize,
    /// Computed modes merged with a reference set.
    Compare {
        #[arg(long, default_value = "paris")]
        set: String,
    },
    /// Run the golden-number checks.
    Validate,
    /// Inventory and scores of one unit of a background product.
    Lci {
        product: String,
        #[arg(long, default_value_t = 1.0)]
        amount: f64,
    },
}

enum Failure {
    Data(Error),
    Io(String),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Data(e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Validation) => ExitCode::from(4),
    }
}

fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

/// Display scale and unit: GWP in grams, other indicators as they are.
fn display(k: Indicator) -> (f64, String) {
    match k {
        Indicator::Gwp100 => (1000.0, "g CO2eq/pkt".into()),
        _ => (1.0, format!("{}/pkt", k.unit())),
    }
}

fn evaluation(ds: &Dataset, cli: &Cli, mode: &str) -> Result<Evaluation<f64>, Failure> {
    let mut ev = ds.evaluation(mode)?;
    if let Some(mix) = &cli.mix {
        if !ds.mix_ids().contains(&mix.as_str()) {
            return Err(Error::Configuration(format!("unknown electricity mix `{mix}`")).into());
        }
        ev.mode = apply_scenario(&ev.mode, &ScenarioSpec::electricity(mix.clone()), &ev.freight)?;
    }
    if let Some(occ) = cli.occupancy {
        ev.mode.occupancy = occ;
    }
    Ok(ev)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let dir = cli.data.clone().unwrap_or_else(modal_lca::bundled_data_dir);
    let ds = Dataset::load(&dir)?;
    let k: Indicator = cli.indicator.parse()?;
    for w in ds.warnings() {
        eprintln!("warning: {w}");
    }
    let out = cli.out.as_deref();
    let all_modes = || -> Result<Vec<_>, Failure> {
        ds.mode_ids()
            .into_iter()
            .map(|id| Ok(evaluation(&ds, cli, id)?.assess()?))
            .collect()
    };
    match &cli.command {
        Command::Assess { modes } => {
            let results = if modes.is_empty() {
                all_modes()?
            } else {
                modes
                    .iter()
                    .map(|id| Ok(evaluation(&ds, cli, id)?.assess()?))
                    .collect::<Result<Vec<_>, Failure>>()?
            };
            for r in &results {
                for n in &r.notices {
                    eprintln!("note: {}: {n}", r.mode_id);
                }
            }
            emit(out, &report::results_csv(&results))
        }
        Command::Sweep { axis, modes } => {
            let axis: Axis = axis.parse()?;
            let ids: Vec<String> = if modes.is_empty() {
                validate::SHARED_MODES.iter().map(|s| s.to_string()).collect()
            } else {
                modes.clone()
            };
            let mut all = Vec::new();
            let mut series = Vec::new();
            let (scale, unit) = display(k);
            for id in &ids {
                let ev = evaluation(&ds, cli, id)?;
                let results = sweep(&ev.mode, &ds.levels(id, axis)?, &ev.context())?;
                series.push(BarSeries {
                    name: ev.mode.label.clone(),
                    values: results
                        .iter()
                        .map(|r| (r.scenario.clone().unwrap_or_default(), r.total[k] * scale))
                        .collect(),
                });
                all.extend(results);
            }
            match cli.format {
                Format::Csv => emit(out, &report::results_csv(&all)),
                Format::Svg => emit(
                    out,
                    &report::sweep_svg(&format!("{axis} sweep, {}", k.label()), &unit, &series),
                ),
            }
        }
        Command::Contrib { mode } => {
            let r = evaluation(&ds, cli, mode)?.assess()?;
            let c = contribution_breakdown(&r);
            for n in &c.notices {
                eprintln!("note: {n}");
            }
            emit(out, &report::contributions_csv(&c))
        }
        Command::Breakeven { mode, target } => {
            let ev = evaluation(&ds, cli, mode)?;
            let (scale, unit) = display(k);
            let line = match breakeven_mileage(&ev.mode, k, target / scale, &ev.context())? {
                Breakeven::Attained { lifetime_km, .. } => {
                    format!("mode,indicator,target,unit,lifetime_km\n{mode},{k},{target},{unit},{lifetime_km:.1}\n")
                }
                Breakeven::Unattainable { fixed_per_pkt, .. } => {
                    eprintln!(
                        "note: target unattainable, the lifetime-independent part is already {} {unit}",
                        fixed_per_pkt * scale
                    );
                    format!("mode,indicator,target,unit,lifetime_km\n{mode},{k},{target},{unit},unattainable\n")
                }
            };
            emit(out, &line)
        }
        Command::Normalize => {
            let m = report::normalize(&all_modes()?)?;
            match cli.format {
                Format::Csv => emit(out, &report::matrix_csv(&m)),
                Format::Svg => emit(
                    out,
                    &report::radar_svg("Impacts normalized to the most impacting mode", &m),
                ),
            }
        }
        Command::Compare { set } => {
            let refs = ds.references.set(set);
            if refs.is_empty() {
                eprintln!("note: reference set `{set}` is empty, listing computed modes only");
            }
            let rows = report::compare_reference(&all_modes()?, &refs, k);
            emit(out, &report::comparison_csv(&rows, &display(k).1))
        }
        Command::Validate => {
            let checks = validate::golden_checks(&ds);
            let mut body = String::new();
            for c in &checks {
                body.push_str(&format!(
                    "{:<4} {:>2}  {:<48} {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.criterion,
                    c.name,
                    c.detail
                ));
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            body.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
            emit(out, &body)?;
            if failed > 0 {
                return Err(Failure::Validation);
            }
            Ok(())
        }
        Command::Lci { product, amount } => {
            let demand = BTreeMap::from([(FlowId::from(product.as_str()), *amount)]);
            let g = ds.database.life_cycle_inventory(&demand)?;
            let scores = modal_lca::impact::apply_all(&g, &ds.cf);
            let mut body = String::from("kind,id,value,unit\n");
            for (flow, v) in &g.entries {
                let unit = ds.database.flow(flow).map(|f| f.unit.as_str()).unwrap_or("");
                body.push_str(&format!("flow,{flow},{v:e},{unit}\n"));
            }
            for k in INDICATORS {
                body.push_str(&format!("indicator,{k},{:e},{}\n", scores[k], k.unit()));
            }
            emit(out, &body)
        }
    }
}
