use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use terrace_core::barriers::{AuxConstants, BarrierSpeeds, Lattice, Which};
use terrace_core::ModelParams;
use terrace_lab::commands;
use terrace_lab::output;
use terrace_lab::run;
use terrace_lab::sweep::{self, Axis, CellClass, SweepSpec};
use terrace_lab::{LabError, Scenario};

/// Numerical lab for the monostable Lotka–Volterra competition–diffusion system.
#[derive(Parser)]
#[command(name = "terrace-lab", version)]
struct Cli {
    /// Worker threads; TERRACE_LAB_THREADS takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Scenario file. `simulate` runs it; other commands read their parameters from it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(short = 'd', allow_hyphen_values = true)]
    d: Option<f64>,
    #[arg(short = 'r', allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(short = 'a', allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(short = 'b', allow_hyphen_values = true)]
    b: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the predicted spreading speeds as JSON. Exits 2 on a boundary case.
    Predict {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        c_llw: Option<f64>,
    },
    /// Run a scenario file and write its artifacts. Exits 1 if any criterion fails.
    Simulate {
        /// Scenario file; alternative to --config.
        scenario: Option<PathBuf>,
    },
    /// Solve the travelling wave at speed `-c`; writes wave.csv and wave.json.
    Wave {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'c', long)]
        speed: f64,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long, default_value_t = 300.0)]
        truncation: f64,
        #[arg(long, default_value_t = 6001)]
        nodes: usize,
    },
    /// Assemble and certify a barrier pair. Exits 0 iff certified.
    VerifyBarriers {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        which: Which,
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        c2: f64,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        c_tilde: Option<f64>,
        #[arg(long, default_value_t = 0.02)]
        delta: f64,
        #[arg(long, default_value_t = 200)]
        nt: usize,
        #[arg(long, default_value_t = 400)]
        nx: usize,
        #[arg(long, default_value_t = 40.0)]
        t_cert: f64,
    },
    /// Classify a (c1, c2) grid and write region.csv.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1.5)]
        c1_min: f64,
        #[arg(long, default_value_t = 4.0)]
        c1_max: f64,
        #[arg(long, default_value_t = 26)]
        c1_n: usize,
        #[arg(long, default_value_t = 1.2)]
        c2_min: f64,
        #[arg(long, default_value_t = 3.0)]
        c2_max: f64,
        #[arg(long, default_value_t = 19)]
        c2_n: usize,
        #[arg(long)]
        c_llw: Option<f64>,
        /// Also simulate every interior cell up to this time.
        #[arg(long)]
        simulate: Option<f64>,
        #[arg(long, default_value_t = 0.2)]
        dx: f64,
    },
}

fn resolve_params(args: ParamArgs, config: Option<&Path>) -> Result<ModelParams, LabError> {
    let base = config.map(Scenario::load).transpose()?.map(|s| s.params);
    let pick = |flag: Option<f64>, from: Option<f64>, name: &str| {
        flag.or(from).ok_or_else(|| LabError::Config {
            field: name.into(),
            message: "missing; pass the flag or --config".into(),
        })
    };
    let p = ModelParams::new(
        pick(args.d, base.map(|p| p.d()), "d")?,
        pick(args.r, base.map(|p| p.r()), "r")?,
        pick(args.a, base.map(|p| p.a()), "a")?,
        pick(args.b, base.map(|p| p.b()), "b")?,
    )
    .map_err(|e| LabError::Config {
        field: "params".into(),
        message: e.to_string(),
    })?;
    Ok(p)
}

fn configure_threads(flag: Option<usize>) {
    let env = std::env::var("TERRACE_LAB_THREADS").ok();
    let n = match env.as_deref().map(str::parse::<usize>) {
        Some(Ok(n)) => Some(n),
        Some(Err(_)) => {
            eprintln!("warning: ignoring unparsable TERRACE_LAB_THREADS={:?}", env.unwrap_or_default());
            flag
        }
        None => flag,
    };
    #[cfg(feature = "parallel")]
    if let Some(n) = n {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: thread pool already configured: {e}");
        }
    }
    #[cfg(not(feature = "parallel"))]
    if n.is_some_and(|n| n > 1) {
        eprintln!("warning: built without the `parallel` feature; running on one thread");
    }
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("output serializes"));
}

fn execute(cli: Cli) -> Result<ExitCode, LabError> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::Predict { params, c_llw } => {
            let p = resolve_params(params, config)?;
            print_json(&commands::predict(&p, c_llw)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { scenario } => {
            let path = scenario.as_deref().or(config).ok_or_else(|| LabError::Config {
                field: "scenario".into(),
                message: "pass a scenario file or --config".into(),
            })?;
            let sc = Scenario::load(path)?;
            let r = run::simulate(&sc, Some(&cli.out_dir))?;
            for line in run::report_lines(&r.summary) {
                println!("{line}");
            }
            Ok(if r.summary.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Wave {
            params,
            speed,
            delta,
            truncation,
            nodes,
        } => {
            let p = resolve_params(params, config)?;
            let (w, s) = commands::wave(&p, speed, delta, truncation, nodes)?;
            output::ensure_dir(&cli.out_dir)?;
            let (path, mut f) = output::create(&cli.out_dir, "wave.csv")?;
            w.write_csv(&mut f)
                .and_then(|_| std::io::Write::flush(&mut f))
                .map_err(|e| LabError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
            output::write_json(&cli.out_dir, "wave.json", &s)?;
            print_json(&s);
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyBarriers {
            params,
            which,
            c1,
            c2,
            c,
            c_tilde,
            delta,
            nt,
            nx,
            t_cert,
        } => {
            let p = resolve_params(params, config)?;
            let sp = BarrierSpeeds { c1, c2, c, c_tilde };
            let lattice = Lattice { nt, nx, t_end: t_cert };
            let cert = commands::verify_barriers_to(&cli.out_dir, which, &p, sp, delta, &lattice, &AuxConstants::default())?;
            let r = &cert.report;
            println!(
                "{} {}: {} samples, {} excluded, {} wrong-sign",
                if r.certified { "CERTIFIED" } else { "NOT CERTIFIED" },
                which.name(),
                r.samples,
                r.excluded,
                r.wrong_sign
            );
            for prop in &r.properties {
                println!("  {} {}: {}", if prop.holds { "ok  " } else { "fail" }, prop.name, prop.detail);
            }
            Ok(if r.certified { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Sweep {
            params,
            c1_min,
            c1_max,
            c1_n,
            c2_min,
            c2_max,
            c2_n,
            c_llw,
            simulate,
            dx,
        } => {
            let p = resolve_params(params, config)?;
            let (c_llw, _, _) = commands::resolve_c_llw(&p, c_llw)?;
            let spec = SweepSpec {
                c1: Axis { lo: c1_min, hi: c1_max, n: c1_n },
                c2: Axis { lo: c2_min, hi: c2_max, n: c2_n },
                c_llw,
                simulate,
                dx,
            };
            let rows = sweep::sweep(&p, &spec)?;
            output::ensure_dir(&cli.out_dir)?;
            let (_, f) = output::create(&cli.out_dir, "region.csv")?;
            sweep::write_region_csv(&rows, f)?;
            let count = |c: CellClass| rows.iter().filter(|r| r.class == c).count();
            println!(
                "{} cells: {} interior, {} boundary, {} violated",
                rows.len(),
                count(CellClass::Interior),
                count(CellClass::Boundary),
                count(CellClass::Violated)
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.threads);
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
