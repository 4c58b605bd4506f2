use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ncphs::suite::{render, run_suite, Format, SuiteConfig, Suites};
use ncphs::Result;

#[derive(Parser)]
#[command(name = "ncphs", version, about = "Run verification suites for noncommutative spacetimes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a suite and print or write its report.
    Run {
        /// Suite name; may be omitted when the config file names one.
        suite: Option<String>,
        /// JSON config file; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        eta: Option<f64>,
        /// Cosmological constant, instead of --eta (positive for de Sitter).
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        zprime: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory with replacement data files.
        #[arg(long)]
        data_dir: Option<PathBuf>,
        /// Record per-check wall time in the report.
        #[arg(long)]
        timings: bool,
    },
    /// List the registered suites.
    List {
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::List { data_dir } => {
            let suites = Suites::open(data_dir.as_deref())?;
            for name in suites.names() {
                let s = suites.get(name)?;
                println!("{name}\t{}", s.about);
            }
            Ok(0)
        }
        Cmd::Run { suite, config, eta, lambda, kappa, z, zprime, seed, points, tol, format, out, data_dir, timings } => {
            let mut cfg = match &config {
                Some(p) => SuiteConfig::load(p)?,
                None => SuiteConfig::new(""),
            };
            if let Some(s) = suite {
                cfg.suite = s;
            }
            if cfg.suite.is_empty() {
                return Err(ncphs::Error::InvalidConfig("no suite named".into()));
            }
            // a flag for one of η, Λ replaces the other from the file
            if eta.is_some() {
                cfg.params.eta = eta;
                cfg.params.lambda = None;
            }
            if lambda.is_some() {
                cfg.params.lambda = lambda;
                if eta.is_none() {
                    cfg.params.eta = None;
                }
            }
            cfg.params.kappa = kappa.unwrap_or(cfg.params.kappa);
            cfg.params.z = z.unwrap_or(cfg.params.z);
            cfg.params.zprime = zprime.unwrap_or(cfg.params.zprime);
            cfg.sampling.seed = seed.unwrap_or(cfg.sampling.seed);
            cfg.sampling.points = points.or(cfg.sampling.points);
            cfg.sampling.tol = tol.or(cfg.sampling.tol);
            if let Some(f) = format {
                cfg.output.format = match f {
                    FormatArg::Json => Format::Json,
                    FormatArg::Markdown => Format::Markdown,
                };
            }
            cfg.output.path = out.or(cfg.output.path);
            cfg.output.timings |= timings;
            cfg.data_dir = data_dir.or(cfg.data_dir);

            let report = run_suite(&cfg)?;
            let text = render(&report, cfg.output.format);
            match &cfg.output.path {
                Some(p) => {
                    std::fs::write(p, text)?;
                    let s = report.summary;
                    eprintln!("{}: {} passed, {} failed, {} skipped", report.suite, s.passed, s.failed, s.skipped);
                }
                None => print!("{text}"),
            }
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
