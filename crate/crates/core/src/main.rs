use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use galwalk::expcli::config::{parse_list, NumberList, PartialConfig};
use galwalk::expcli::emit::{emit, Metadata};
use galwalk::expcli::run::{
    catalog_rows, log_linear_fits, run_convergence, run_finite_field, run_oracle, ConvergenceOutput,
};
use galwalk::expcli::{builtin_scenarios, scenario, ExpError, ExperimentConfig, OutputFormat};

#[derive(Parser)]
#[command(
    name = "galwalk",
    version,
    about = "Galois groups of random matrix products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in scenarios.
    Scenarios,
    /// Convergence experiment: walk, identify, tabulate per k and coset.
    Run(Flags),
    /// Brute-force densities over small prime fields.
    Finfield(Flags),
    /// Exhaustive word enumeration for the counterexample scenario.
    Oracle(Flags),
    /// Print predicted-group cycle-type distributions.
    Catalog(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// Flat JSON file with default settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scenario: Option<String>,
    /// Walk lengths, comma-separated and ascending.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    primes_min: Option<u64>,
    #[arg(long)]
    primes_max: Option<u64>,
    /// Good primes per polynomial.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
    #[arg(long)]
    tv_max: Option<f64>,
    #[arg(long)]
    coverage_min: Option<f64>,
    #[arg(long)]
    tv_reject: Option<f64>,
    /// Primes for the finite-field census, comma-separated.
    #[arg(long)]
    field_primes: Option<String>,
    /// Largest group enumerated over a prime field.
    #[arg(long)]
    bound: Option<usize>,
    /// Largest word length for the exhaustive oracle.
    #[arg(long)]
    k_max: Option<usize>,
}

impl Flags {
    fn resolve(&self) -> Result<ExperimentConfig, ExpError> {
        if let Some(k) = &self.k {
            parse_list(k)?;
        }
        let flags = PartialConfig {
            scenario: self.scenario.clone(),
            k: self.k.clone().map(NumberList::Text),
            samples: self.samples,
            primes_min: self.primes_min,
            primes_max: self.primes_max,
            budget: self.budget,
            seed: self.seed,
            out: self.out.clone(),
            format: self.format,
            tv_max: self.tv_max,
            coverage_min: self.coverage_min,
            tv_reject: self.tv_reject,
            field_primes: self.field_primes.clone().map(NumberList::Text),
            bound: self.bound,
            k_max: self.k_max,
        };
        let file = match &self.config {
            Some(p) => PartialConfig::from_json_file(p)?,
            None => PartialConfig::default(),
        };
        ExperimentConfig::resolve(flags.over(file))
    }
}

fn execute(cli: Cli) -> Result<(), ExpError> {
    match cli.command {
        Command::Scenarios => {
            for s in builtin_scenarios()? {
                let cosets: Vec<String> = s
                    .cosets
                    .iter()
                    .map(|c| match &c.prediction {
                        Some(p) => format!("{}: {} (order {})", c.name, p.name, p.order()),
                        None => format!("{}: no prediction", c.name),
                    })
                    .collect();
                println!(
                    "{}\tN={}\t{}\t[{}]",
                    s.name,
                    s.dim(),
                    s.description,
                    cosets.join("; ")
                );
            }
        }
        Command::Run(flags) => {
            let cfg = flags.resolve()?;
            let sc = scenario(&cfg.scenario)?;
            let meta = Metadata::for_config(&cfg, "run");
            match run_convergence(&sc, &cfg)? {
                ConvergenceOutput::Predicted(rows) => {
                    for f in log_linear_fits(&rows) {
                        eprintln!(
                            "fit {} / {}: mismatch ~ {:.4} * exp(-{:.4} k) over {} points",
                            f.coset, f.target, f.c, f.beta, f.points
                        );
                    }
                    emit(&rows, &meta, cfg.out.as_deref(), cfg.format)?;
                }
                ConvergenceOutput::Quadratic(rows) => {
                    emit(&rows, &meta, cfg.out.as_deref(), cfg.format)?;
                }
            }
        }
        Command::Finfield(flags) => {
            let cfg = flags.resolve()?;
            let sc = scenario(&cfg.scenario)?;
            let out = run_finite_field(&sc, &cfg)?;
            for s in &out.skipped {
                eprintln!("{s}");
            }
            for s in &out.summaries {
                eprintln!(
                    "coset {}: min density {:.4}, fitted C {:.3}",
                    s.coset, s.min_density, s.fitted_c
                );
            }
            let flagged = out.rows.iter().filter(|r| r.flagged).count();
            if flagged > 0 {
                eprintln!("{flagged} flagged rows (zero density or type outside the target)");
            }
            emit(
                &out.rows,
                &Metadata::for_config(&cfg, "finfield"),
                cfg.out.as_deref(),
                cfg.format,
            )?;
        }
        Command::Oracle(flags) => {
            let mut cfg = flags.resolve()?;
            if flags.scenario.is_none() {
                cfg.scenario = "counterexample_6_3_1".into();
            }
            let sc = scenario(&cfg.scenario)?;
            if sc.cosets.iter().any(|c| c.prediction.is_some()) {
                return Err(ExpError::Config(format!(
                    "the oracle enumerates the counterexample scenario only, not {}",
                    sc.name
                )));
            }
            let rows = run_oracle(&sc, cfg.k_max);
            emit(
                &rows,
                &Metadata::for_config(&cfg, "oracle"),
                cfg.out.as_deref(),
                cfg.format,
            )?;
        }
        Command::Catalog(flags) => {
            let cfg = flags.resolve()?;
            let scenarios = match &flags.scenario {
                Some(name) => vec![scenario(name)?],
                None => builtin_scenarios()?,
            };
            let rows: Vec<_> = scenarios.iter().flat_map(catalog_rows).collect();
            emit(
                &rows,
                &Metadata::for_config(&cfg, "catalog"),
                cfg.out.as_deref(),
                cfg.format,
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
