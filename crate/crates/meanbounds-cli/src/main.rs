//! Command-line front end: compute bound tables from data files, emit merge
//! plans, run coverage experiments, and produce sweep CSVs for plotting.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 I/O error, 4 coverage
//! violation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use meanbounds::{
    compute_bounds, coverage_estimate, merge_plan, run_sweep, scenario_values, CategorizedSample,
    CountShape, Method, Side, SweepScenario, TrueDistribution, ValueShape,
};

#[derive(Debug)]
enum CliError {
    /// Bad flags, bad file contents, invalid parameters.
    Usage(String),
    /// Unreadable input or unwritable output.
    Io(String),
    /// Empirical failure rate exceeded the coverage threshold.
    Coverage(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Coverage(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Coverage(m) => m,
        }
    }
}

impl From<meanbounds::Error> for CliError {
    fn from(e: meanbounds::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "meanbounds",
    version,
    about = "PAC bounds on the mean of a discrete distribution from categorized counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute bounds for a sample file, one table row per method.
    Bound(BoundArgs),
    /// Sweep bounds over a grid of sample sizes and write CSV plot data.
    Sweep(SweepArgs),
    /// Show the optimal category merge plan for a value vector.
    MergePlan(MergePlanArgs),
    /// Estimate the empirical bound-failure rate by Monte Carlo.
    Coverage(CoverageArgs),
}

#[derive(Args)]
struct BoundArgs {
    /// Sample file: CSV with a `value,count` header, or JSON
    /// {"values": [...], "counts": [...]}.
    #[arg(long)]
    input: PathBuf,
    /// Failure budget for the bound.
    #[arg(long)]
    delta: f64,
    /// Method name (repeatable): hoeffding, maurer-pontil, box, nest,
    /// merged-nest, nearly-uniform, or all.
    #[arg(long = "method", required = true)]
    methods: Vec<String>,
    /// Which ends to bound: lower, upper, or two.
    #[arg(long, default_value = "two")]
    side: String,
    /// Cluster count for merged-nest.
    #[arg(long)]
    merged_categories: Option<usize>,
    /// Allowed frequency-bound failures for nearly-uniform.
    #[arg(long)]
    allowed_failures: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Count shape: balanced or doubling.
    #[arg(long, default_value = "balanced")]
    counts: String,
    /// Value shape: linear, exponential, or power:SCALE.
    #[arg(long, default_value = "linear")]
    values: String,
    /// Number of categories.
    #[arg(long)]
    m: usize,
    /// Totals to sweep: comma list (100,200) or range START:STOP:STEP.
    #[arg(long)]
    n_grid: String,
    #[arg(long)]
    delta: f64,
    /// Method name (repeatable); defaults to all four base methods.
    #[arg(long = "method")]
    methods: Vec<String>,
    /// Merged-nest cluster count (repeatable), adds one curve per value.
    #[arg(long = "merged-categories")]
    merged_categories: Vec<usize>,
    /// Nearly-uniform allowed failures (repeatable), adds one curve per value.
    #[arg(long = "allowed-failures")]
    allowed_failures: Vec<usize>,
    #[arg(long, default_value = "two")]
    side: String,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MergePlanArgs {
    /// Sample file to take category values from (CSV or JSON).
    #[arg(long, conflicts_with_all = ["values", "m"])]
    input: Option<PathBuf>,
    /// Generated value shape: linear, exponential, or power:SCALE.
    #[arg(long, requires = "m")]
    values: Option<String>,
    /// Number of categories for a generated value vector.
    #[arg(long)]
    m: Option<usize>,
    /// Target number of merged categories.
    #[arg(long)]
    merged_categories: usize,
}

#[derive(Args)]
struct CoverageArgs {
    /// Method to test (as in `bound`).
    #[arg(long)]
    method: String,
    /// True category probabilities: comma list or `uniform` (requires --m).
    #[arg(long)]
    probs: String,
    /// Category values: comma list, or linear / exponential / power:SCALE.
    #[arg(long)]
    values: String,
    /// Number of categories when probs/values are generated shapes.
    #[arg(long)]
    m: Option<usize>,
    /// Observations per trial.
    #[arg(long)]
    n: u64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "two")]
    side: String,
    #[arg(long)]
    merged_categories: Option<usize>,
    #[arg(long)]
    allowed_failures: Option<usize>,
}

const METHOD_NAMES: &str = "hoeffding, maurer-pontil, box, nest, merged-nest, nearly-uniform, all";

fn parse_side(s: &str) -> Result<Side, CliError> {
    match s {
        "lower" => Ok(Side::Lower),
        "upper" => Ok(Side::Upper),
        "two" | "two-sided" => Ok(Side::TwoSided),
        other => Err(CliError::Usage(format!(
            "unknown side '{other}': expected lower, upper, or two"
        ))),
    }
}

fn parse_methods(
    names: &[String],
    merged: Option<usize>,
    failures: Option<usize>,
) -> Result<Vec<Method>, CliError> {
    let mut methods = Vec::new();
    for name in names {
        match name.as_str() {
            "hoeffding" => methods.push(Method::Hoeffding),
            "maurer-pontil" | "mp" => methods.push(Method::MaurerPontil),
            "box" => methods.push(Method::BonferroniBox),
            "nest" => methods.push(Method::BonferroniNest),
            "all" => methods.extend(Method::BASE),
            "merged-nest" => {
                let clusters = merged.ok_or_else(|| {
                    CliError::Usage("method merged-nest requires --merged-categories".into())
                })?;
                methods.push(Method::MergedNest { clusters });
            }
            "nearly-uniform" => {
                let allowed_failures = failures.ok_or_else(|| {
                    CliError::Usage("method nearly-uniform requires --allowed-failures".into())
                })?;
                methods.push(Method::NearlyUniform { allowed_failures });
            }
            other => {
                return Err(CliError::Usage(format!(
                    "unknown method '{other}': valid methods are {METHOD_NAMES}"
                )))
            }
        }
    }
    Ok(methods)
}

fn parse_value_shape(spec: &str) -> Result<ValueShape, CliError> {
    match spec {
        "linear" => Ok(ValueShape::Linear),
        "exponential" => Ok(ValueShape::Exponential),
        other => {
            if let Some(scale) = other.strip_prefix("power:") {
                let scale: f64 = scale.parse().map_err(|_| {
                    CliError::Usage(format!("bad power scale '{scale}': expected a number"))
                })?;
                Ok(ValueShape::Power { scale })
            } else {
                Err(CliError::Usage(format!(
                    "unknown value shape '{other}': expected linear, exponential, or power:SCALE"
                )))
            }
        }
    }
}

fn parse_f64_list(spec: &str, what: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',')
        .map(|tok| {
            tok.trim().parse::<f64>().map_err(|_| {
                CliError::Usage(format!("bad {what} entry '{tok}': expected a number"))
            })
        })
        .collect()
}

#[derive(Deserialize)]
struct JsonSample {
    values: Vec<f64>,
    counts: Vec<u64>,
}

fn read_sample(path: &Path) -> Result<CategorizedSample, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let is_json =
        path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    let (values, counts) = if is_json {
        let parsed: JsonSample = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: bad JSON sample: {e}", path.display())))?;
        (parsed.values, parsed.counts)
    } else {
        parse_sample_csv(&text, path)?
    };
    Ok(CategorizedSample::normalize(&counts, &values)?)
}

fn parse_sample_csv(text: &str, path: &Path) -> Result<(Vec<f64>, Vec<u64>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        .clone();
    let col = |name: &str| -> Result<usize, CliError> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::Usage(format!(
                "{}: header line must name a '{name}' column, got '{}'",
                path.display(),
                headers.iter().collect::<Vec<_>>().join(",")
            ))
        })
    };
    let value_col = col("value")?;
    let count_col = col("count")?;
    let mut values = Vec::new();
    let mut counts = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2; // header is line 1
        let record = record.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let value_tok = record.get(value_col).unwrap_or_default();
        let count_tok = record.get(count_col).unwrap_or_default();
        values.push(value_tok.parse::<f64>().map_err(|_| {
            CliError::Usage(format!(
                "{} line {line}: field 'value' is not a number: '{value_tok}'",
                path.display()
            ))
        })?);
        counts.push(count_tok.parse::<u64>().map_err(|_| {
            CliError::Usage(format!(
                "{} line {line}: field 'count' is not a nonnegative integer: '{count_tok}'",
                path.display()
            ))
        })?);
    }
    Ok((values, counts))
}

fn parse_n_grid(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("bad n grid '{spec}': {why}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected START:STOP:STEP"));
        }
        let nums: Vec<u64> = parts
            .iter()
            .map(|p| p.parse::<u64>().map_err(|_| bad("expected integers")))
            .collect::<Result<_, _>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if step == 0 || stop < start {
            return Err(bad("need STOP >= START and STEP > 0"));
        }
        Ok((start..=stop).step_by(step as usize).collect())
    } else {
        spec.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u64>()
                    .map_err(|_| bad("expected integers"))
            })
            .collect()
    }
}

/// Writes to stdout, treating a closed pipe as a normal early exit.
fn write_stdout(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}

fn cmd_bound(args: &BoundArgs) -> Result<(), CliError> {
    let side = parse_side(&args.side)?;
    let methods = parse_methods(&args.methods, args.merged_categories, args.allowed_failures)?;
    let sample = read_sample(&args.input)?;
    let mut out = String::from("method,side,n,m,lower,upper\n");
    for method in methods {
        let bound = compute_bounds(method, &sample, args.delta, side)?;
        writeln!(
            out,
            "{},{},{},{},{:.16e},{:.16e}",
            method,
            bound.side,
            sample.total(),
            sample.len(),
            bound.lower,
            bound.upper
        )
        .expect("string write");
    }
    write_stdout(&out)
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let side = parse_side(&args.side)?;
    let count_shape = match args.counts.as_str() {
        "balanced" => CountShape::Balanced,
        "doubling" => CountShape::Doubling,
        other => {
            return Err(CliError::Usage(format!(
                "unknown count shape '{other}': expected balanced or doubling"
            )))
        }
    };
    let methods = if args.methods.is_empty() {
        Method::BASE.to_vec()
    } else {
        parse_methods(&args.methods, None, None)?
    };
    let scenario = SweepScenario {
        count_shape,
        value_shape: parse_value_shape(&args.values)?,
        m: args.m,
        n_grid: parse_n_grid(&args.n_grid)?,
        delta: args.delta,
        methods,
        merged_clusters: args.merged_categories.clone(),
        allowed_failures: args.allowed_failures.clone(),
        side,
    };
    let rows = run_sweep(&scenario)?;
    let mut out = String::from("scenario,method,m,n,param,lower,upper\n");
    for row in rows {
        let param = row
            .method
            .param()
            .map(|p| p.to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{:.16e},{:.16e}",
            row.scenario, row.method, row.m, row.n, param, row.lower, row.upper
        )
        .expect("string write");
    }
    std::fs::write(&args.out, out)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", args.out.display())))?;
    Ok(())
}

fn cmd_merge_plan(args: &MergePlanArgs) -> Result<(), CliError> {
    let values: Vec<f64> = match (&args.input, &args.values, args.m) {
        (Some(path), None, None) => read_sample(path)?.values().to_vec(),
        (None, Some(shape), Some(m)) => scenario_values(parse_value_shape(shape)?, m)?,
        _ => {
            return Err(CliError::Usage(
                "provide either --input FILE or both --values SHAPE and --m M".into(),
            ))
        }
    };
    let plan = merge_plan(&values, args.merged_categories)?;
    let mut out = String::new();
    for (idx, cluster) in plan.clusters().enumerate() {
        let lo = values[cluster.start];
        let hi = values[cluster.end - 1];
        writeln!(
            out,
            "cluster {:>3}: categories {}-{}  values [{}, {}]  range {}",
            idx + 1,
            cluster.start + 1,
            cluster.end,
            lo,
            hi,
            hi - lo
        )
        .expect("string write");
    }
    writeln!(out, "max range: {}", plan.max_range()).expect("string write");
    write_stdout(&out)
}

fn cmd_coverage(args: &CoverageArgs) -> Result<(), CliError> {
    let side = parse_side(&args.side)?;
    let method = parse_methods(
        std::slice::from_ref(&args.method),
        args.merged_categories,
        args.allowed_failures,
    )?;
    if method.len() != 1 {
        return Err(CliError::Usage(
            "coverage tests exactly one method at a time".into(),
        ));
    }
    let method = method[0];
    let values: Vec<f64> = if args.values.contains(',') {
        parse_f64_list(&args.values, "value")?
    } else if let Ok(shape) = parse_value_shape(&args.values) {
        let m = args
            .m
            .ok_or_else(|| CliError::Usage("generated value shapes require --m".into()))?;
        scenario_values(shape, m)?
    } else {
        parse_f64_list(&args.values, "value")?
    };
    let dist = if args.probs == "uniform" {
        TrueDistribution::uniform(values)?
    } else {
        TrueDistribution::new(parse_f64_list(&args.probs, "probability")?, values)?
    };
    if args.trials == 0 {
        return Err(CliError::Usage("at least one trial required".into()));
    }
    let report = coverage_estimate(
        method,
        side,
        &dist,
        args.n,
        args.delta,
        args.trials,
        args.seed,
    )?;
    let pass = report.passes();
    let mut out = String::new();
    writeln!(out, "method: {}", report.method).expect("string write");
    writeln!(out, "side: {}", report.side).expect("string write");
    writeln!(out, "m: {}", dist.len()).expect("string write");
    writeln!(out, "n: {}", args.n).expect("string write");
    writeln!(out, "delta: {}", report.delta).expect("string write");
    writeln!(out, "trials: {}", report.trials).expect("string write");
    writeln!(out, "seed: {}", report.seed).expect("string write");
    writeln!(out, "failures: {}", report.failures).expect("string write");
    writeln!(out, "failure_rate: {}", report.failure_rate).expect("string write");
    writeln!(out, "threshold: {}", report.threshold()).expect("string write");
    writeln!(out, "verdict: {}", if pass { "PASS" } else { "FAIL" }).expect("string write");
    write_stdout(&out)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Coverage(format!(
            "failure rate {} exceeds threshold {}",
            report.failure_rate,
            report.threshold()
        )))
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::MergePlan(args) => cmd_merge_plan(args),
        Command::Coverage(args) => cmd_coverage(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
