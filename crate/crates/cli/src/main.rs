use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use maxalg::checks::{self, CheckOptions};
use maxalg::distfn::{bool_nth_root, free_nth_root, levy_distance, sup_distance};
use maxalg::limit_lab::DEFAULT_LEVY_RESOLUTION;
use maxalg::scenarios::{self, ExperimentConfig, SCENARIO_NAMES};
use maxalg::tails::{self, DEFAULT_PROBES, DEFAULT_RATIO_BASE};
use maxalg::{expr, DistFn, Error, EvalGrid, Result};

/// Exit status of `check` when an identity fails.
const CHECK_FAILED: u8 = 1;

#[derive(Parser)]
#[command(name = "maxalg", version, about = "Classical, free and Boolean max-convolution laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct GridArgs {
    /// Evaluation grid as lo:hi:n.
    #[arg(long, value_name = "LO:HI:N")]
    grid: Option<String>,
    /// Space the grid points geometrically (needs lo > 0).
    #[arg(long)]
    log_grid: bool,
}

#[derive(clap::Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate an expression as rows (x, F(x)).
    Table {
        expr: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Explicit evaluation points, comma separated; overrides --grid.
        #[arg(long, value_name = "X1,X2,...", value_delimiter = ',', allow_hyphen_values = true)]
        at: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Sup and Lévy distances between two expressions.
    Dist {
        left: String,
        right: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Lattice step of the Lévy distance search.
        #[arg(long, default_value_t = DEFAULT_LEVY_RESOLUTION)]
        resolution: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Run a built-in scenario or a JSON experiment configuration.
    Limit {
        /// Name of a built-in scenario.
        #[arg(required_unless_present_any = ["config", "list"], conflicts_with = "config")]
        scenario: Option<String>,
        /// JSON experiment configuration file.
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        /// Print the built-in scenario names and exit.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        threshold: Option<f64>,
        /// Sequence indices n, comma separated (k_n = n).
        #[arg(long, value_name = "N1,N2,...", value_delimiter = ',')]
        schedule: Option<Vec<u64>>,
        /// Also write the per-index table (n, x, power, candidate) here; mode run only.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Regular-variation index estimate and Fréchet-domain classification.
    Tails {
        expr: String,
        #[arg(long, value_name = "P1,P2,...", value_delimiter = ',')]
        probes: Option<Vec<f64>>,
        /// Ratio base t > 1.
        #[arg(long, default_value_t = DEFAULT_RATIO_BASE)]
        t: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate the free and Boolean n-th roots of an expression.
    Roots {
        expr: String,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Run the identity suite and print a JSON summary.
    Check {
        #[arg(long, default_value_t = checks::DEFAULT_SEED)]
        seed: u64,
        /// Perturb the named identity; exercises the failure path.
        #[arg(long, hide = true, value_name = "IDENTITY")]
        inject_fault: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("maxalg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Table {
            expr,
            grid,
            at,
            format,
            output,
        } => {
            let f = expr::evaluate(&expr)?;
            let points = match at {
                Some(points) => points,
                None => build_grid(&grid, std::slice::from_ref(&f))?.points().to_vec(),
            };
            emit(&output, &table(&f, &points, format))?;
        }
        Command::Dist {
            left,
            right,
            grid,
            resolution,
            output,
        } => {
            let (a, b) = (expr::evaluate(&left)?, expr::evaluate(&right)?);
            let g = build_grid(&grid, &[a.clone(), b.clone()])?;
            #[derive(Serialize)]
            struct Distances {
                sup_distance: f64,
                levy_distance: f64,
            }
            let d = Distances {
                sup_distance: sup_distance(&a, &b, &g)?,
                levy_distance: levy_distance(&a, &b, resolution)?,
            };
            emit(&output, &json(&d))?;
        }
        Command::Limit {
            scenario,
            config,
            list,
            threshold,
            schedule,
            csv,
            output,
        } => {
            if list {
                emit(&output, &(SCENARIO_NAMES.join("\n") + "\n"))?;
                return Ok(0);
            }
            let mut cfg = match (scenario, config) {
                (Some(name), _) => scenarios::scenario(&name)?,
                (None, Some(path)) => ExperimentConfig::from_json(&read(&path)?)?,
                (None, None) => unreachable!("clap requires a scenario or --config"),
            };
            if threshold.is_some() {
                cfg.threshold = threshold;
            }
            if schedule.is_some() {
                cfg.schedule = schedule;
                cfg.k = None;
            }
            let report = scenarios::run_experiment(&cfg)?;
            if let Some(path) = csv {
                write(&path, &scenarios::table_to_csv(&scenarios::experiment_table(&cfg)?))?;
            }
            emit(&output, &(report.to_json() + "\n"))?;
        }
        Command::Tails {
            expr,
            probes,
            t,
            format,
            output,
        } => {
            let f = expr::evaluate(&expr)?;
            let probes = probes.unwrap_or_else(|| DEFAULT_PROBES.to_vec());
            let report = tails::classify_domain(&f, t, &probes)?;
            let text = match format {
                Format::Json => json(&report),
                Format::Csv => report.to_csv(),
            };
            emit(&output, &text)?;
        }
        Command::Roots {
            expr,
            n,
            grid,
            format,
            output,
        } => {
            let f = expr::evaluate(&expr)?;
            let free = free_nth_root(&f, n)?;
            let boolean = bool_nth_root(&f, n)?;
            let g = build_grid(&grid, std::slice::from_ref(&f))?;
            emit(&output, &roots_table(&f, &free, &boolean, g.points(), format))?;
        }
        Command::Check {
            seed,
            inject_fault,
            output,
        } => {
            let summary = checks::run_checks(&CheckOptions {
                seed,
                inject_fault,
                ..CheckOptions::default()
            })?;
            emit(&output, &json(&summary))?;
            if !summary.all_passed {
                for r in summary.failed() {
                    eprintln!(
                        "maxalg: identity {} failed: deviation {:e} exceeds tolerance {:e}",
                        r.name, r.max_deviation, r.tolerance
                    );
                }
                return Ok(CHECK_FAILED);
            }
        }
    }
    Ok(0)
}

fn build_grid(args: &GridArgs, fs: &[DistFn]) -> Result<EvalGrid> {
    let Some(spec) = &args.grid else {
        if args.log_grid {
            return Err(Error::Config("--log-grid needs --grid lo:hi:n".into()));
        }
        return Ok(EvalGrid::covering(fs));
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Config(format!("grid must look like lo:hi:n, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Config(format!("grid needs finite lo < hi, got {lo} and {hi}")));
    }
    if n < 2 {
        return Err(Error::Config(format!("grid needs at least 2 points, got {n}")));
    }
    if args.log_grid {
        if lo <= 0.0 {
            return Err(Error::Config(format!("a logarithmic grid needs lo > 0, got {lo}")));
        }
        EvalGrid::logarithmic(lo, hi, n)
    } else {
        EvalGrid::linear(lo, hi, n)
    }
}

fn table(f: &DistFn, points: &[f64], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("x,F\n");
            for &x in points {
                out.push_str(&format!("{x},{}\n", f.value(x)));
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                x: f64,
                #[serde(rename = "F")]
                f: f64,
            }
            let rows: Vec<Row> = points.iter().map(|&x| Row { x, f: f.value(x) }).collect();
            json(&rows)
        }
    }
}

fn roots_table(f: &DistFn, free: &DistFn, boolean: &DistFn, points: &[f64], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("x,F,free_root,bool_root\n");
            for &x in points {
                out.push_str(&format!("{x},{},{},{}\n", f.value(x), free.value(x), boolean.value(x)));
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                x: f64,
                #[serde(rename = "F")]
                f: f64,
                free_root: f64,
                bool_root: f64,
            }
            let rows: Vec<Row> = points
                .iter()
                .map(|&x| Row {
                    x,
                    f: f.value(x),
                    free_root: free.value(x),
                    bool_root: boolean.value(x),
                })
                .collect();
            json(&rows)
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types always serialize") + "\n"
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => write(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Io(format!("stdout: {e}"))),
    }
}

