//! `sc-burst-lab` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when an
//! experiment's interval check fails.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sc_burst_lab::experiments::{self, ExperimentConfig, ExperimentId, DEFAULT_MAX_N};
use sc_burst_lab::permute::apply_columns_sparse;
use sc_burst_lab::stopping::{self, DEFAULT_EXHAUSTIVE_LIMIT};
use sc_burst_lab::{
    apply_columns, build_base_matrix, bsp, compute_wmax, de, lift, random_permutation,
    BinaryMatrix, CodeParams, LiftSpec, LiftStyle, SparseParityCheck,
};

const MAX_N_VAR: &str = "SC_BURST_MAX_N";

#[derive(Parser)]
#[command(name = "sc-burst-lab", version, about = "Burst-erasure analysis of spatially coupled LDPC codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CodeArgs {
    /// Column weight l.
    #[arg(long)]
    l: usize,
    /// Maximum row weight r (a multiple of l).
    #[arg(long)]
    r: usize,
    /// Number of sections L.
    #[arg(long = "L")]
    sections: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write the base matrix B(l,r,L) as dense CSV.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a column permutation, or apply it to a matrix.
    Permute {
        #[arg(long, value_enum)]
        mode: PermuteMode,
        /// Required for bsp: the interleaver depth is r/l.
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long = "L")]
        sections: Option<usize>,
        /// Permutation size for random mode without --input.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Matrix to permute (.alist, otherwise dense CSV).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lift a base matrix into a parity-check matrix (alist output).
    Lift {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "M")]
        lift_factor: usize,
        #[arg(long, default_value = "random")]
        style: LiftStyle,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Span of a base matrix.
    Span {
        #[arg(long)]
        input: PathBuf,
    },
    /// List the irreducible stopping sets of a small matrix.
    Stopsets {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        max_cols: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximal correctable burst length by peeling.
    Wmax {
        #[arg(long)]
        input: PathBuf,
        /// Fill in the start of a failing burst of length wmax + 1.
        #[arg(long)]
        report_witness: bool,
    },
    /// BP threshold of B(l,r,L) on the erasure channel.
    Threshold {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = de::DEFAULT_PRECISION)]
        precision: f64,
    },
    /// Run a batch experiment and emit CSV.
    Experiment {
        #[arg(value_enum)]
        id: ExperimentArg,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// Comma-separated section counts.
        #[arg(long = "L", value_delimiter = ',')]
        sections: Option<Vec<usize>>,
        /// Comma-separated lift factors.
        #[arg(long = "M", value_delimiter = ',')]
        lift_factors: Option<Vec<usize>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        style: Option<LiftStyle>,
        /// Full-size run: 1000 histogram samples.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PermuteMode {
    Bsp,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    #[value(name = "lambda-vs-L", alias = "lambda-vs-l")]
    LambdaVsL,
    Histogram,
    VerifyBounds,
}

impl From<ExperimentArg> for ExperimentId {
    fn from(arg: ExperimentArg) -> Self {
        match arg {
            ExperimentArg::LambdaVsL => ExperimentId::LambdaVsL,
            ExperimentArg::Histogram => ExperimentId::Histogram,
            ExperimentArg::VerifyBounds => ExperimentId::VerifyBounds,
        }
    }
}

enum Outcome {
    Ok,
    AssertionFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::AssertionFailed) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn is_alist(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("alist"))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).with_context(|| format!("opening {}", path.display()))
}

fn read_dense(path: &Path) -> Result<BinaryMatrix> {
    if is_alist(path) {
        Ok(SparseParityCheck::read_alist(open(path)?)?.to_dense())
    } else {
        BinaryMatrix::read_csv(open(path)?).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_sparse(path: &Path) -> Result<SparseParityCheck> {
    if is_alist(path) {
        SparseParityCheck::read_alist(open(path)?).with_context(|| format!("reading {}", path.display()))
    } else {
        Ok(read_dense(path)?.to_sparse())
    }
}

fn max_n() -> Result<usize> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{MAX_N_VAR}={v:?} is not a count")),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Build { code, out } => {
            let b = build_base_matrix(code.l, code.r, code.sections)?;
            b.write_csv(sink(out.as_deref())?)?;
        }
        Command::Permute {
            mode,
            l,
            r,
            sections,
            n,
            seed,
            input,
            out,
        } => {
            let matrix = input.as_deref().map(read_sparse).transpose()?;
            let p = match mode {
                PermuteMode::Bsp => {
                    let (Some(l), Some(r), Some(sections)) = (l, r, sections) else {
                        bail!("bsp mode needs --l, --r and --L");
                    };
                    let params = CodeParams::base(l, r, sections)?;
                    bsp(params.k(), sections)?
                }
                PermuteMode::Random => {
                    let size = match (&matrix, n) {
                        (Some(h), _) => h.cols(),
                        (None, Some(n)) => n,
                        (None, None) => bail!("random mode needs --n or --input"),
                    };
                    random_permutation(size, seed)?
                }
            };
            let mut w = sink(out.as_deref())?;
            match (matrix, input) {
                (Some(h), Some(path)) => {
                    if is_alist(&path) {
                        apply_columns_sparse(&h, &p)?.write_alist(w)?;
                    } else {
                        apply_columns(&h.to_dense(), &p)?.write_csv(w)?;
                    }
                }
                _ => writeln!(w, "{p}")?,
            }
        }
        Command::Lift {
            input,
            lift_factor,
            style,
            seed,
            out,
        } => {
            let base = read_dense(&input)?;
            let cap = max_n()?;
            if base.cols() * lift_factor > cap {
                bail!(
                    "lifted length {} exceeds {MAX_N_VAR}={cap}",
                    base.cols() * lift_factor
                );
            }
            let h = lift(&base, &LiftSpec::new(lift_factor, style, seed)?);
            h.write_alist(sink(out.as_deref())?)?;
        }
        Command::Span { input } => {
            let m = read_dense(&input)?;
            let span = stopping::span_of(&m)?;
            let mut w = sink(None)?;
            writeln!(w, "cols,span")?;
            writeln!(w, "{},{span}", m.cols())?;
        }
        Command::Stopsets {
            input,
            max_cols,
            out,
        } => {
            let m = read_dense(&input)?;
            let sets = stopping::enumerate_irreducible_with_limit(&m, max_cols)?;
            let mut w = sink(out.as_deref())?;
            for set in sets {
                writeln!(w, "{set}")?;
            }
        }
        Command::Wmax {
            input,
            report_witness,
        } => {
            let h = read_sparse(&input)?;
            let report = compute_wmax(&h);
            let witness = match (report_witness, report.witness_start) {
                (true, Some(s)) => s.to_string(),
                _ => String::new(),
            };
            let mut w = sink(None)?;
            writeln!(w, "n,wmax,lambda_max,witness_start")?;
            writeln!(
                w,
                "{},{},{},{witness}",
                report.n,
                report.wmax,
                experiments::render_rate(report.lambda_max())
            )?;
        }
        Command::Threshold { code, precision } => {
            if !(precision > 0.0) {
                bail!("--precision must be positive");
            }
            let b = build_base_matrix(code.l, code.r, code.sections)?;
            let t = de::threshold(&b, precision, de::DEFAULT_MAX_ITERS, de::DEFAULT_TOLERANCE);
            let mut w = sink(None)?;
            writeln!(w, "l,r,L,theta,precision")?;
            writeln!(
                w,
                "{},{},{},{:.6},{}",
                code.l, code.r, code.sections, t.theta, t.precision
            )?;
        }
        Command::Experiment {
            id,
            l,
            r,
            sections,
            lift_factors,
            seed,
            samples,
            style,
            full,
            out,
        } => {
            let id = ExperimentId::from(id);
            let mut cfg = ExperimentConfig::defaults(id);
            if full && id == ExperimentId::Histogram {
                cfg.samples = 1000;
            }
            cfg.l = l.unwrap_or(cfg.l);
            cfg.r = r.unwrap_or(cfg.r);
            cfg.sections = sections.unwrap_or(cfg.sections);
            cfg.lift_factors = lift_factors.unwrap_or(cfg.lift_factors);
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.samples = samples.unwrap_or(cfg.samples);
            cfg.style = style.unwrap_or(cfg.style);
            cfg.max_n = max_n()?;

            let records = experiments::run(&cfg)?;
            let mut w = sink(out.as_deref())?;
            experiments::write_records(&records, &mut w)?;
            w.flush()?;
            let failed = experiments::failures(&records);
            if !failed.is_empty() {
                for r in &failed {
                    eprintln!(
                        "interval violated: {} {} (l,r,L)=({},{},{}) M={} seed={} wmax={:?}",
                        r.experiment, r.variant, r.l, r.r, r.sections, r.lift_factor, r.seed, r.wmax
                    );
                }
                return Ok(Outcome::AssertionFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}
