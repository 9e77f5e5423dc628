use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use squab::benchmark::{linear_grid, Benchmark, Control, Mode};
use squab::cellulation::{load_with, save, LoadOptions};
use squab::generators::{GeneratorRef, PlanarText};
use squab::table::csv_table;
use squab::{logical_qubit_count, CodeReport, DualSurface, Surface, SweepConfig, SweepResult};
use squab_service::ServiceConfig;

#[derive(Parser)]
#[command(
    name = "squab",
    version,
    about = "Homological benchmarking of surface codes under erasure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a lattice file (with its dual block)
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Print code parameters and stabilizer weights
    Info {
        file: PathBuf,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
        /// Reject unknown fields
        #[arg(long)]
        strict: bool,
    },
    /// Estimate failure rates over a sweep of erasure probabilities
    Bench {
        file: PathBuf,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run one sweep on several lattices; long-format CSV plus a per-p summary on stderr
    Compare {
        #[arg(num_args = 2.., required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Start the HTTP service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Largest trials_per_point a job may request
        #[arg(long, default_value_t = 1_000_000)]
        trial_cap: u64,
        /// Largest request body in bytes
        #[arg(long, default_value_t = 16 * 1024 * 1024)]
        body_limit: usize,
        /// Jobs allowed to run at once
        #[arg(long, default_value_t = 8)]
        max_jobs: usize,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Toric lattice on a d x d torus
    Toric {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: GenOutput,
    },
    /// Bravyi-Kitaev planar lattice
    Bk {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: GenOutput,
    },
    /// Rectangular planar lattice with classed sides and holes
    Planar {
        /// Face grid as RxC
        #[arg(long)]
        cells: String,
        /// Class of all four sides (open or closed)
        #[arg(long, default_value = "closed")]
        sides: String,
        #[arg(long)]
        top: Option<String>,
        #[arg(long)]
        bottom: Option<String>,
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        /// row,col,HxW:class with class open, closed or an o/c perimeter sequence; repeatable
        #[arg(long = "hole")]
        holes: Vec<String>,
        #[command(flatten)]
        out: GenOutput,
    },
}

#[derive(Args)]
struct GenOutput {
    /// Output file; stdout when absent
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Override the generated name
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    p_max: f64,
    #[arg(long, default_value_t = 11)]
    steps: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "both", value_parser = parse_mode)]
    mode: Mode,
    /// Worker threads; defaults to SQUAB_WORKERS, then to the machine's parallelism
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

/// Exit status 2 for usage errors, 1 for everything else.
enum Failure {
    Usage(String),
    Runtime(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn workers(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(w) = flag {
        return Ok(w);
    }
    match std::env::var("SQUAB_WORKERS") {
        Ok(v) => v.trim().parse().map_err(|_| {
            usage(format!(
                "SQUAB_WORKERS must be a non-negative integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(0),
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| runtime(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(runtime),
    }
}

fn read_lattice(path: &Path, strict: bool) -> Result<(Surface, DualSurface), Failure> {
    let bytes = std::fs::read(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    let file = squab::cellulation::CellulationFile::parse(&bytes, LoadOptions { strict })
        .map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    let report = file.validation_report();
    if !report.ok {
        let list: Vec<String> = report.violations.iter().map(|v| format!("  {v}")).collect();
        return Err(runtime(format!(
            "{}: invalid cellulation\n{}",
            path.display(),
            list.join("\n")
        )));
    }
    let loaded = load_with(&bytes, LoadOptions { strict })
        .map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    Ok((loaded.surface, loaded.dual))
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, Failure> {
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    Ok(SweepConfig {
        p_values: linear_grid(args.p_min, args.p_max, args.steps).map_err(usage)?,
        trials_per_point: args.trials,
        master_seed: args.seed,
        mode: args.mode,
    })
}

fn run_sweep(
    s: &Surface,
    dual: &DualSurface,
    config: &SweepConfig,
    workers: usize,
) -> Result<SweepResult, Failure> {
    Benchmark::new(s, dual, workers)
        .map_err(runtime)?
        .run_sweep(config, Control::default())
        .map_err(runtime)
}

fn cmd_gen(kind: GenKind) -> Outcome {
    let (generator, out) = match kind {
        GenKind::Toric { d, out } => (GeneratorRef::Toric { d }, out),
        GenKind::Bk { d, out } => (GeneratorRef::Bk { d }, out),
        GenKind::Planar {
            cells,
            sides,
            top,
            bottom,
            left,
            right,
            holes,
            out,
        } => (
            GeneratorRef::Planar(PlanarText {
                cells,
                sides: Some(sides),
                top,
                bottom,
                left,
                right,
                holes,
            }),
            out,
        ),
    };
    let (mut s, mut dual) = generator.build().map_err(usage)?;
    if let Some(name) = out.name {
        s = s.with_name(name);
        dual = squab::cellulation::derive_dual(&s);
    }
    write_output(out.output.as_deref(), &save(&s, Some(&dual)))?;
    let line = format!("n={} k={}", s.num_qubits(), logical_qubit_count(&s, &dual));
    if out.output.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn cmd_info(file: &Path, json: bool, strict: bool) -> Outcome {
    let (s, dual) = read_lattice(file, strict)?;
    let report = CodeReport::new(&s, &dual);
    let text = if json {
        let mut text = serde_json::to_string_pretty(&report).map_err(runtime)?;
        text.push('\n');
        text
    } else {
        report.to_text()
    };
    write_output(None, text.as_bytes())
}

fn cmd_bench(file: &Path, sweep: &SweepArgs, format: Format, output: Option<&Path>) -> Outcome {
    let config = sweep_config(sweep)?;
    let workers = workers(sweep.workers)?;
    let (s, dual) = read_lattice(file, false)?;
    let result = run_sweep(&s, &dual, &config, workers)?;
    eprintln!(
        "{}: {} points in {:.2} s",
        s.name(),
        result.points.len(),
        result.wall_time
    );
    let bytes = match format {
        Format::Csv => csv_table([(s.name(), &result)]),
        Format::Json => result.canonical_json() + "\n",
    };
    write_output(output, bytes.as_bytes())
}

fn cmd_compare(files: &[PathBuf], sweep: &SweepArgs, output: Option<&Path>) -> Outcome {
    let config = sweep_config(sweep)?;
    let workers = workers(sweep.workers)?;
    let mut labels: Vec<String> = Vec::new();
    let mut results = Vec::new();
    for file in files {
        let (s, dual) = read_lattice(file, false)?;
        let mut label = s.name().to_string();
        let repeats = labels
            .iter()
            .filter(|l| l.split('#').next() == Some(s.name()))
            .count();
        if repeats > 0 {
            label = format!("{label}#{}", repeats + 1);
        }
        results.push(run_sweep(&s, &dual, &config, workers)?);
        labels.push(label);
    }
    let table = csv_table(labels.iter().map(String::as_str).zip(&results));
    write_output(output, table.as_bytes())?;
    for (i, p) in config.p_values.iter().enumerate() {
        // ties go to the first file listed
        let best = (0..results.len())
            .min_by(|&a, &b| {
                results[a].points[i]
                    .rate_any
                    .value
                    .total_cmp(&results[b].points[i].rate_any.value)
            })
            .expect("at least two files");
        let rate = results[best].points[i].rate_any;
        eprintln!(
            "p={} best={} rate_any={} [{}, {}]",
            squab::table::format_sig6(*p),
            labels[best],
            squab::table::format_sig6(rate.value),
            squab::table::format_sig6(rate.ci_lo),
            squab::table::format_sig6(rate.ci_hi)
        );
    }
    Ok(())
}

fn cmd_serve(addr: SocketAddr, config: ServiceConfig) -> Outcome {
    let runtime_ = tokio::runtime::Runtime::new().map_err(runtime)?;
    eprintln!("listening on http://{addr}");
    runtime_
        .block_on(squab_service::serve(addr, config))
        .map_err(runtime)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen { kind } => cmd_gen(kind),
        Command::Info { file, json, strict } => cmd_info(&file, json, strict),
        Command::Bench {
            file,
            sweep,
            format,
            output,
        } => cmd_bench(&file, &sweep, format, output.as_deref()),
        Command::Compare {
            files,
            sweep,
            output,
        } => cmd_compare(&files, &sweep, output.as_deref()),
        Command::Serve {
            port,
            host,
            trial_cap,
            body_limit,
            max_jobs,
            workers: w,
        } => workers(w).and_then(|workers| {
            cmd_serve(
                SocketAddr::new(host, port),
                ServiceConfig {
                    trial_cap,
                    body_limit,
                    max_jobs,
                    workers,
                },
            )
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
