//! Batch experiments: burst ratio against the section count, the
//! random-permutation histogram, and interval verification for lifted
//! codes. Each experiment returns CSV-ready records.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{build_base_matrix, lift, CodeParams, LiftSpec, LiftStyle};
use crate::de;
use crate::decode::{compute_wmax, BurstReport};
use crate::error::{Error, Result};
use crate::gf2::{BinaryMatrix, SparseParityCheck};
use crate::permute::{apply_columns, apply_columns_sparse, bsp, random_permutation_with};
use crate::rng;
use crate::stopping::{lambda_interval, span_characterized, sridharan_interval};
use crate::{LengthInterval, Rate, RateInterval};

/// First line of every CSV file the experiments emit.
pub const CSV_VERSION_LINE: &str = "# sc-burst-lab v1";

/// Default cap on the code length of measured instances.
pub const DEFAULT_MAX_N: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    LambdaVsL,
    Histogram,
    VerifyBounds,
}

impl ExperimentId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::LambdaVsL => "lambda-vs-L",
            ExperimentId::Histogram => "histogram",
            ExperimentId::VerifyBounds => "verify-bounds",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda-vs-L" | "lambda-vs-l" => Ok(ExperimentId::LambdaVsL),
            "histogram" => Ok(ExperimentId::Histogram),
            "verify-bounds" => Ok(ExperimentId::VerifyBounds),
            other => Err(Error::Domain(format!("unknown experiment {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub l: usize,
    pub r: usize,
    /// Section counts `L`. The histogram uses the first entry only.
    pub sections: Vec<usize>,
    /// Lift factors `M`. Only verify-bounds uses more than the first entry.
    pub lift_factors: Vec<usize>,
    /// Random permutations for the histogram; lift seeds per `M` for
    /// verify-bounds.
    pub samples: usize,
    pub seed: u64,
    pub style: LiftStyle,
    /// Instances with a larger code length are not measured.
    pub max_n: usize,
    /// Bisection half-width for thresholds in lambda-vs-L.
    pub de_precision: f64,
}

impl ExperimentConfig {
    /// Desk-scale defaults for each experiment.
    pub fn defaults(experiment: ExperimentId) -> Self {
        let base = ExperimentConfig {
            experiment,
            l: 3,
            r: 6,
            sections: vec![8],
            lift_factors: vec![40],
            samples: 100,
            seed: 1,
            style: LiftStyle::RandomPermutation,
            max_n: DEFAULT_MAX_N,
            de_precision: de::DEFAULT_PRECISION,
        };
        match experiment {
            ExperimentId::LambdaVsL => ExperimentConfig {
                sections: vec![1, 2, 4, 8, 16, 32, 48, 64, 80, 96, 112, 128],
                lift_factors: vec![10],
                samples: 1,
                ..base
            },
            ExperimentId::Histogram => ExperimentConfig {
                sections: vec![32],
                ..base
            },
            ExperimentId::VerifyBounds => ExperimentConfig {
                lift_factors: vec![5, 10, 20],
                samples: 10,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sections.is_empty() || self.lift_factors.is_empty() {
            return Err(Error::Parameter("need at least one L and one M".into()));
        }
        if self.samples == 0 {
            return Err(Error::Parameter("sample count must be at least 1".into()));
        }
        if !(self.de_precision > 0.0) {
            return Err(Error::Parameter("DE precision must be positive".into()));
        }
        for &sections in &self.sections {
            for &m in &self.lift_factors {
                CodeParams::new(self.l, self.r, sections, m)?;
            }
        }
        Ok(())
    }

    fn params(&self, sections: usize, lift_factor: usize) -> Result<CodeParams> {
        CodeParams::new(self.l, self.r, sections, lift_factor)
    }

    fn check_budget(&self, params: &CodeParams) -> Result<()> {
        if params.n() > self.max_n {
            return Err(Error::Domain(format!(
                "code length {} for {params} exceeds the cap of {}",
                params.n(),
                self.max_n
            )));
        }
        Ok(())
    }
}

/// One CSV row. Columns are shared by every experiment; fields that do not
/// apply are left empty.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub experiment: &'static str,
    /// conventional | permuted | base-conventional | base-permuted | random
    /// | random-min | random-median | random-max
    pub variant: &'static str,
    pub l: usize,
    pub r: usize,
    #[serde(rename = "L")]
    pub sections: usize,
    #[serde(rename = "M")]
    pub lift_factor: usize,
    pub n: usize,
    pub sample: Option<usize>,
    pub seed: u64,
    pub wmax: Option<usize>,
    pub lambda_max: Option<String>,
    pub wmax_lower: Option<i64>,
    pub wmax_upper: Option<i64>,
    pub lambda_lower: Option<String>,
    pub lambda_upper: Option<String>,
    pub theta: Option<String>,
    pub pass: Option<bool>,
    pub skipped: bool,
    pub wall_ms: u64,
}

impl ExperimentRecord {
    fn new(cfg: &ExperimentConfig, variant: &'static str, params: &CodeParams, seed: u64) -> Self {
        ExperimentRecord {
            experiment: cfg.experiment.as_str(),
            variant,
            l: params.l(),
            r: params.r(),
            sections: params.sections(),
            lift_factor: params.lift_factor(),
            n: params.n(),
            sample: None,
            seed,
            wmax: None,
            lambda_max: None,
            wmax_lower: None,
            wmax_upper: None,
            lambda_lower: None,
            lambda_upper: None,
            theta: None,
            pass: None,
            skipped: false,
            wall_ms: 0,
        }
    }

    fn with_report(mut self, report: &BurstReport) -> Self {
        self.n = report.n;
        self.wmax = Some(report.wmax);
        self.lambda_max = Some(render_rate(report.lambda_max()));
        self
    }

    fn with_lambda_bounds(mut self, bounds: &RateInterval) -> Self {
        self.lambda_lower = Some(render_rate(bounds.lower));
        self.lambda_upper = Some(render_rate(bounds.upper));
        self
    }

    fn with_wmax_bounds(mut self, bounds: &LengthInterval) -> Self {
        self.wmax_lower = Some(bounds.lower);
        self.wmax_upper = Some(bounds.upper);
        self
    }

    /// Measured ratio `wmax / n`, exactly.
    pub fn lambda_exact(&self) -> Option<Rate> {
        self.wmax.map(|w| Rate::new(w as i64, self.n as i64))
    }
}

/// Fixed six-decimal rendering of an exact ratio.
pub fn render_rate(x: Rate) -> String {
    format!("{:.6}", *x.numer() as f64 / *x.denom() as f64)
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn permuted_base(params: &CodeParams) -> Result<(BinaryMatrix, BinaryMatrix)> {
    let base = build_base_matrix(params.l(), params.r(), params.sections())?;
    let permuted = apply_columns(&base, &bsp(params.k(), params.sections())?)?;
    Ok((base, permuted))
}

fn lifted(base: &BinaryMatrix, cfg: &ExperimentConfig, m: usize, seed: u64) -> Result<SparseParityCheck> {
    Ok(lift(base, &LiftSpec::new(m, cfg.style, seed)?))
}

/// For each section count: the ratio intervals of the plain and permuted
/// codes, the BP threshold of the base matrix, and, within the size cap,
/// the measured ratio of one lift of each.
pub fn run_lambda_vs_l(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let m = cfg.lift_factors[0];
    let per_l: Vec<Result<[ExperimentRecord; 2]>> = cfg
        .sections
        .par_iter()
        .enumerate()
        .map(|(index, &sections)| {
            let params = cfg.params(sections, m)?;
            let (base, permuted) = permuted_base(&params)?;
            let start = Instant::now();
            let theta = de::threshold(&base, cfg.de_precision, de::DEFAULT_MAX_ITERS, de::DEFAULT_TOLERANCE);
            let theta_ms = elapsed_ms(start);
            let seed = rng::derive_seed(cfg.seed, index as u64);
            let measure = params.n() <= cfg.max_n;

            let mut out = Vec::with_capacity(2);
            for (variant, matrix, is_permuted) in
                [("conventional", &base, false), ("permuted", &permuted, true)]
            {
                let start = Instant::now();
                let mut record = ExperimentRecord::new(cfg, variant, &params, seed)
                    .with_lambda_bounds(&lambda_interval(&params, is_permuted));
                record.theta = Some(format!("{:.4}", theta.theta));
                if measure {
                    let report = compute_wmax(&lifted(matrix, cfg, m, seed)?);
                    let wmax_base = span_characterized(
                        &params,
                        is_permuted.then(|| bsp(params.k(), sections)).transpose()?.as_ref(),
                    )? - 1;
                    let bounds = sridharan_interval(wmax_base, m);
                    record = record.with_report(&report).with_wmax_bounds(&bounds);
                    record.pass = Some(bounds.contains(report.wmax as i64));
                } else {
                    record.skipped = true;
                }
                record.wall_ms = elapsed_ms(start) + theta_ms;
                out.push(record);
            }
            let [a, b]: [ExperimentRecord; 2] = out.try_into().expect("two variants");
            Ok([a, b])
        })
        .collect();
    let mut records = Vec::with_capacity(2 * per_l.len());
    for pair in per_l {
        records.extend(pair?);
    }
    Ok(records)
}

/// Measured ratios of `samples` uniformly random column permutations of one
/// lifted plain code, followed by the permuted code lifted once and the
/// min / median / max of the random samples.
pub fn run_histogram(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let params = cfg.params(cfg.sections[0], cfg.lift_factors[0])?;
    cfg.check_budget(&params)?;
    let m = params.lift_factor();
    let (base, permuted) = permuted_base(&params)?;
    let conventional = lifted(&base, cfg, m, cfg.seed)?;

    let mut records: Vec<ExperimentRecord> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let p = random_permutation_with(params.n(), &mut rng::split(cfg.seed, i as u64));
            let h = apply_columns_sparse(&conventional, &p)?;
            let report = compute_wmax(&h);
            let mut record =
                ExperimentRecord::new(cfg, "random", &params, cfg.seed).with_report(&report);
            record.sample = Some(i);
            record.wall_ms = elapsed_ms(start);
            Ok(record)
        })
        .collect::<Result<_>>()?;

    let start = Instant::now();
    let report = compute_wmax(&lifted(&permuted, cfg, m, cfg.seed)?);
    let bounds = lambda_interval(&params, true);
    let mut record = ExperimentRecord::new(cfg, "permuted", &params, cfg.seed)
        .with_report(&report)
        .with_lambda_bounds(&bounds);
    record.pass = Some(bounds.contains(report.lambda_max()));
    record.wall_ms = elapsed_ms(start);
    records.push(record);

    let mut sampled: Vec<usize> = records
        .iter()
        .filter(|r| r.variant == "random")
        .filter_map(|r| r.wmax)
        .collect();
    sampled.sort_unstable();
    let summary = [
        ("random-min", sampled[0]),
        ("random-median", sampled[(sampled.len() - 1) / 2]),
        ("random-max", sampled[sampled.len() - 1]),
    ];
    for (variant, wmax) in summary {
        let report = BurstReport {
            n: params.n(),
            wmax,
            witness_start: None,
        };
        records.push(ExperimentRecord::new(cfg, variant, &params, cfg.seed).with_report(&report));
    }
    Ok(records)
}

/// Checks the burst-length intervals on every section count, lift factor
/// and lift seed: exact values for the base matrices and strict interval
/// membership for the lifted codes.
pub fn run_verify_bounds(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    for &sections in &cfg.sections {
        let base_params = cfg.params(sections, 1)?;
        let (base, permuted) = permuted_base(&base_params)?;
        let sigma = bsp(base_params.k(), sections)?;
        let expected = [
            span_characterized(&base_params, None)? - 1,
            span_characterized(&base_params, Some(&sigma))? - 1,
        ];

        for (variant, matrix, want) in [
            ("base-conventional", &base, expected[0]),
            ("base-permuted", &permuted, expected[1]),
        ] {
            let start = Instant::now();
            let report = compute_wmax(matrix);
            let mut record =
                ExperimentRecord::new(cfg, variant, &base_params, cfg.seed).with_report(&report);
            record.pass = Some(report.wmax == want);
            record.wall_ms = elapsed_ms(start);
            records.push(record);
        }

        let jobs: Vec<(usize, usize)> = cfg
            .lift_factors
            .iter()
            .flat_map(|&m| (0..cfg.samples).map(move |s| (m, s)))
            .collect();
        let lifted_records: Vec<Result<[ExperimentRecord; 2]>> = jobs
            .par_iter()
            .map(|&(m, s)| {
                let params = cfg.params(sections, m)?;
                cfg.check_budget(&params)?;
                let seed = rng::derive_seed(cfg.seed, s as u64);
                let mut pair = Vec::with_capacity(2);
                for (variant, matrix, wmax_base, is_permuted) in [
                    ("conventional", &base, expected[0], false),
                    ("permuted", &permuted, expected[1], true),
                ] {
                    let start = Instant::now();
                    let report = compute_wmax(&lifted(matrix, cfg, m, seed)?);
                    let bounds = sridharan_interval(wmax_base, m);
                    let mut record = ExperimentRecord::new(cfg, variant, &params, seed)
                        .with_report(&report)
                        .with_wmax_bounds(&bounds)
                        .with_lambda_bounds(&lambda_interval(&params, is_permuted));
                    record.sample = Some(s);
                    record.pass = Some(bounds.contains(report.wmax as i64));
                    record.wall_ms = elapsed_ms(start);
                    pair.push(record);
                }
                let [a, b]: [ExperimentRecord; 2] = pair.try_into().expect("two variants");
                Ok([a, b])
            })
            .collect();
        for pair in lifted_records {
            records.extend(pair?);
        }
    }
    Ok(records)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    match cfg.experiment {
        ExperimentId::LambdaVsL => run_lambda_vs_l(cfg),
        ExperimentId::Histogram => run_histogram(cfg),
        ExperimentId::VerifyBounds => run_verify_bounds(cfg),
    }
}

/// Records whose interval check failed.
pub fn failures(records: &[ExperimentRecord]) -> Vec<&ExperimentRecord> {
    records.iter().filter(|r| r.pass == Some(false)).collect()
}

/// Writes the version line, a header row and one row per record.
pub fn write_records<W: Write>(records: &[ExperimentRecord], mut sink: W) -> Result<()> {
    writeln!(sink, "{CSV_VERSION_LINE}")?;
    writeln!(sink, "# prng={}", rng::PRNG_ALGORITHM)?;
    let mut writer = csv::Writer::from_writer(sink);
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}
