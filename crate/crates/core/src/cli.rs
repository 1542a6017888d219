//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 on a configuration error (unknown case or
//! method, bad flag or config file), 2 on a runtime error (I/O, failed run).
//! All output tables go to `--out` when given, otherwise to stdout, and are
//! byte-identical across repeated invocations with the same arguments.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::cases::{all_cases, case_by_name};
use crate::config::{load_overrides, parse_methods, parse_seeds, RunOverrides};
use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::experiment::{
    export_density_plot_data, export_results, run_experiment, with_thread_cap, write_density_plot_csv,
    write_results_csv, ExperimentConfig,
};
use crate::order_stats::{verify_density_spacing, verify_uniform_spacing, MomentReport};

#[derive(Parser)]
#[command(
    name = "voronoi-class",
    version,
    about = "Voronoi-cell-area density estimation, classification benchmarks, and spacing checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation case over a seed list and emit the results CSV.
    RunCase {
        /// Preset name, `case1` .. `case7`.
        case: String,
        /// Training points per class (default 200).
        #[arg(long)]
        n_train: Option<usize>,
        /// Test points per class (default 100).
        #[arg(long)]
        n_test: Option<usize>,
        /// Reference uniforms per class (default 1000).
        #[arg(long)]
        n_uniforms: Option<usize>,
        /// Comma list of method rows (default: all applicable to the case).
        #[arg(long)]
        methods: Option<String>,
        /// Seed list, `a..b` or comma list (default 1..20).
        #[arg(long)]
        seeds: Option<String>,
        /// Boundary threshold in (0, 1] (default max(0.02, 5/n_train)).
        #[arg(long)]
        r: Option<f64>,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Key=value config file; flags take precedence over it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check spacing moments against theory by simulation; emits one CSV row.
    VerifyTheory {
        /// Sample size per replication.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Order-statistic gap.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Quantile level locating the spacing.
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        /// Distribution `uniform:LO,HI`, `normal:MEAN,SD` or `pareto:XM,ALPHA`;
        /// omitted: the uniform spacing statistic itself.
        #[arg(long)]
        dist: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        replications: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export fitted and true density curves for a 1-D case as CSV.
    PlotData {
        /// Preset name, `case1` .. `case5`.
        case: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Grid points spanning both reference windows (>= 500).
        #[arg(long, default_value_t = 500)]
        grid: usize,
        /// Training points per class (default 200).
        #[arg(long)]
        n_train: Option<usize>,
        /// Reference uniforms per class (default 2500 for plots).
        #[arg(long)]
        n_uniforms: Option<usize>,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in cases.
    ListCases,
}

enum Failure {
    Config(Error),
    Runtime(Error),
}

/// Run the CLI against the given arguments and return the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default()).try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if informational { 0 } else { 1 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            1
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::RunCase { case, n_train, n_test, n_uniforms, methods, seeds, r, out, config } => {
            let mut file_overrides = match config {
                Some(path) => load_overrides(&path).map_err(Failure::Config)?,
                None => RunOverrides::default(),
            };
            // Flags override the config file, which overrides the preset.
            if let Some(v) = n_train {
                file_overrides.n_train = Some(v);
            }
            if let Some(v) = n_test {
                file_overrides.n_test = Some(v);
            }
            if let Some(v) = n_uniforms {
                file_overrides.n_uniforms = Some(v);
            }
            if let Some(v) = r {
                file_overrides.r = Some(v);
            }
            if let Some(s) = methods {
                file_overrides.methods = Some(parse_methods(&s).map_err(Failure::Config)?);
            }
            if let Some(s) = seeds {
                file_overrides.seeds = Some(parse_seeds(&s).map_err(Failure::Config)?);
            }
            if let Some(p) = out {
                file_overrides.out = Some(p);
            }

            let config = build_run_config(&case, &file_overrides).map_err(Failure::Config)?;
            let results =
                with_thread_cap(|| run_experiment(&config)).map_err(Failure::Runtime)?;
            for m in &results.methods {
                if let Err(e) = &m.outcome {
                    eprintln!("note: {} skipped: {e}", m.method);
                }
            }
            match &file_overrides.out {
                Some(path) => export_results(&results, path).map_err(Failure::Runtime)?,
                None => {
                    let stdout = std::io::stdout();
                    write_results_csv(&results, stdout.lock()).map_err(Failure::Runtime)?;
                }
            }
            Ok(())
        }
        Command::VerifyTheory { n, m, q, dist, replications, seed, out } => {
            if !(0.0 < q && q < 1.0) {
                return Err(Failure::Config(Error::InvalidParameter(format!(
                    "quantile level must be in (0,1), got {q}"
                ))));
            }
            let report = with_thread_cap(|| -> Result<MomentReport> {
                match &dist {
                    Some(spec) => {
                        let d = parse_dist(spec)?;
                        verify_density_spacing(&d, q, n, m, replications, seed)
                    }
                    None => {
                        let r = ((q * n as f64).round() as usize)
                            .clamp(1, n.saturating_sub(m).max(1));
                        verify_uniform_spacing(n, r, m, replications, seed)
                    }
                }
            })
            .map_err(config_or_runtime)?;
            let mut text = String::new();
            text.push_str(MomentReport::CSV_HEADER);
            text.push('\n');
            text.push_str(&report.csv_row());
            text.push('\n');
            write_text(&out, &text).map_err(Failure::Runtime)
        }
        Command::PlotData { case, seed, grid, n_train, n_uniforms, out } => {
            let preset = case_by_name(&case).map_err(Failure::Config)?;
            let mut config = ExperimentConfig::from_case(&preset);
            config.n_train = n_train.unwrap_or(200);
            // Denser reference sample for curves.
            config.n_uniforms = n_uniforms.unwrap_or(2500);
            match &out {
                Some(path) => export_density_plot_data(&config, seed, grid, path)
                    .map_err(config_or_runtime)?,
                None => {
                    let stdout = std::io::stdout();
                    write_density_plot_csv(&config, seed, grid, stdout.lock())
                        .map_err(config_or_runtime)?;
                }
            }
            Ok(())
        }
        Command::ListCases => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            for c in all_cases() {
                let _ = writeln!(w, "{}  {}", c.name, c.summary);
            }
            Ok(())
        }
    }
}

fn build_run_config(case: &str, overrides: &RunOverrides) -> Result<ExperimentConfig> {
    let preset = case_by_name(case)?;
    let mut config = ExperimentConfig::from_case(&preset);
    if let Some(v) = overrides.n_train {
        config.n_train = v;
    }
    if let Some(v) = overrides.n_test {
        config.n_test = v;
    }
    if let Some(v) = overrides.n_uniforms {
        config.n_uniforms = v;
    }
    if let Some(v) = overrides.r {
        config.r = Some(v);
    }
    if let Some(v) = &overrides.methods {
        config.methods = v.clone();
    }
    if let Some(v) = &overrides.seeds {
        config.seeds = v.clone();
    }
    config.validate()?;
    Ok(config)
}

/// `uniform:LO,HI`, `normal:MEAN,SD`, or `pareto:XM,ALPHA`.
fn parse_dist(spec: &str) -> Result<Distribution> {
    let bad = || {
        Error::Config(format!(
            "bad distribution '{spec}'; expected uniform:LO,HI, normal:MEAN,SD or pareto:XM,ALPHA"
        ))
    };
    let (kind, params) = spec.split_once(':').ok_or_else(bad)?;
    let values: Vec<f64> = params
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    if values.len() != 2 {
        return Err(bad());
    }
    match kind.trim().to_ascii_lowercase().as_str() {
        "uniform" => Distribution::uniform_union(vec![(values[0], values[1])]),
        "normal" => Distribution::normal(values[0], values[1]),
        "pareto" => Distribution::pareto(values[0], values[1]),
        _ => Err(bad()),
    }
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Validation failures are configuration errors; anything else is runtime.
fn config_or_runtime(e: Error) -> Failure {
    match e {
        Error::Io(_) => Failure::Runtime(e),
        _ => Failure::Config(e),
    }
}
