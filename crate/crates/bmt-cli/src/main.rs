//! Command-line frontend for the BMT distribution library.

mod dataset;
mod report;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bmt::descriptives::{self, summarize};
use bmt::estimation::{fit, fit_four_parameter, FitResult, Method, Model, ObjectiveSpec};
use bmt::simulation::{run_recovery, RecoveryConfig};
use bmt::{BmtDistribution, BmtDomain, BmtParams};
use report::{fmt_f64, FitReportDocument};

#[derive(Parser)]
#[command(
    name = "bmt",
    version,
    about = "BMT distribution toolkit: fitting, sampling, curves, summaries, and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit bounded distributions to a data column and report both objectives
    Fit(FitArgs),
    /// Draw reproducible inversion samples from a BMT distribution
    Sample(SampleArgs),
    /// Tabulate the CDF or PDF on an equispaced grid
    Curve(CurveArgs),
    /// Summary statistics of a data column
    Describe(DescribeArgs),
    /// Squared-skewness versus kurtosis region of the BMT family
    Region(RegionArgs),
    /// Descriptive-measure surfaces over the parameter square
    Grid(GridArgs),
    /// Parameter-recovery simulation study
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Bmt,
    Beta,
    Kumaraswamy,
}

impl std::fmt::Display for ModelArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelArg::Bmt => write!(f, "bmt"),
            ModelArg::Beta => write!(f, "beta"),
            ModelArg::Kumaraswamy => write!(f, "kumaraswamy"),
        }
    }
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Bmt => Model::Bmt,
            ModelArg::Beta => Model::Beta,
            ModelArg::Kumaraswamy => Model::Kumaraswamy,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mle,
    Mpse,
}

impl std::fmt::Display for MethodArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MethodArg::Mle => write!(f, "mle"),
            MethodArg::Mpse => write!(f, "mpse"),
        }
    }
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Mle => Method::Mle,
            MethodArg::Mpse => Method::Mpse,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct FitArgs {
    /// Input CSV file
    #[arg(long)]
    input: PathBuf,
    /// Column to read: zero-based index or header name
    #[arg(long, default_value = "0")]
    column: String,
    /// Models to fit
    #[arg(long, value_delimiter = ',', default_values_t = [ModelArg::Bmt, ModelArg::Beta, ModelArg::Kumaraswamy])]
    models: Vec<ModelArg>,
    /// Estimation methods
    #[arg(long, value_delimiter = ',', default_values_t = [MethodArg::Mle, MethodArg::Mpse])]
    methods: Vec<MethodArg>,
    /// 2 fits the shapes on a fixed domain; 4 estimates the domain as well
    #[arg(long, default_value_t = 2)]
    n_params: u8,
    /// Fixed domain "c,d" for two-parameter fits (default "0,1")
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    kappa_l: f64,
    #[arg(long)]
    kappa_r: f64,
    /// Support interval "c,d"
    #[arg(long, default_value = "0,1")]
    domain: String,
    /// Number of draws
    #[arg(short = 'n', long = "count")]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhichCurve {
    Cdf,
    Pdf,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    kappa_l: f64,
    #[arg(long)]
    kappa_r: f64,
    /// Support interval "c,d"
    #[arg(long, default_value = "0,1")]
    domain: String,
    /// Which function to tabulate
    #[arg(long, value_enum)]
    which: WhichCurve,
    /// Number of equispaced abscissae (at least 2)
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct DescribeArgs {
    /// Input CSV file
    #[arg(long)]
    input: PathBuf,
    /// Column to read: zero-based index or header name
    #[arg(long, default_value = "0")]
    column: String,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct RegionArgs {
    /// Grid resolution per axis
    #[arg(long, default_value_t = 64)]
    resolution: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct GridArgs {
    /// Grid resolution per axis
    #[arg(long, default_value_t = 64)]
    resolution: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 200)]
    replicates: usize,
    /// Sample sizes, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = [30usize, 300])]
    sizes: Vec<usize>,
    /// True parameter pairs, "kl,kr" separated by semicolons
    #[arg(long, default_value = "0.5,0.5;0.2,0.4;0.9,0.1")]
    thetas: String,
    #[arg(long, value_delimiter = ',', default_values_t = [MethodArg::Mle, MethodArg::Mpse])]
    methods: Vec<MethodArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Describe(args) => cmd_describe(args),
        Command::Region(args) => cmd_region(args),
        Command::Grid(args) => cmd_grid(args),
        Command::Simulate(args) => cmd_simulate(args),
    }
}

fn parse_domain(text: &str) -> anyhow::Result<BmtDomain> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        bail!("domain must be \"c,d\", got '{text}'");
    }
    let c: f64 = parts[0]
        .parse()
        .with_context(|| format!("bad domain endpoint '{}'", parts[0]))?;
    let d: f64 = parts[1]
        .parse()
        .with_context(|| format!("bad domain endpoint '{}'", parts[1]))?;
    Ok(BmtDomain::new(c, d)?)
}

fn parse_thetas(text: &str) -> anyhow::Result<Vec<BmtParams>> {
    text.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                bail!("theta must be \"kl,kr\", got '{pair}'");
            }
            let kl: f64 = parts[0]
                .parse()
                .with_context(|| format!("bad kappa '{}'", parts[0]))?;
            let kr: f64 = parts[1]
                .parse()
                .with_context(|| format!("bad kappa '{}'", parts[1]))?;
            Ok(BmtParams::new(kl, kr)?)
        })
        .collect()
}

fn write_output(path: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, content).with_context(|| format!("cannot write {}", p.display()))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_fit(args: FitArgs) -> anyhow::Result<()> {
    if args.n_params != 2 && args.n_params != 4 {
        bail!("--n-params must be 2 or 4, got {}", args.n_params);
    }
    if args.n_params == 4 && args.domain.is_some() {
        bail!("four-parameter fits estimate the domain; drop --domain");
    }
    if args.models.is_empty() || args.methods.is_empty() {
        bail!("need at least one model and one method");
    }
    let data = dataset::read_column(&args.input, &args.column)?;
    let summary = summarize(&data)?;

    let mut results: Vec<FitResult> = Vec::new();
    for &model in &args.models {
        for &method in &args.methods {
            let result = if args.n_params == 2 {
                let domain = match &args.domain {
                    Some(text) => parse_domain(text)?,
                    None => BmtDomain::unit(),
                };
                let spec = ObjectiveSpec::two_parameter(model.into(), method.into(), domain);
                fit(&spec, &data)?
            } else {
                fit_four_parameter(model.into(), method.into(), &data)?
            };
            results.push(result);
        }
    }
    let document = FitReportDocument::new(summary, results);
    let content = match args.format {
        Format::Json => serde_json::to_string_pretty(&document)? + "\n",
        Format::Csv => document.to_csv(),
    };
    write_output(args.output.as_deref(), &content)
}

fn cmd_sample(args: SampleArgs) -> anyhow::Result<()> {
    let params = BmtParams::new(args.kappa_l, args.kappa_r)?;
    let domain = parse_domain(&args.domain)?;
    let draws = BmtDistribution::new(params, domain).sample(args.count, args.seed);
    let content = match args.format {
        Format::Csv => {
            let mut out = String::from("x\n");
            for v in &draws {
                out.push_str(&fmt_f64(*v));
                out.push('\n');
            }
            out
        }
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({ "x": draws }))? + "\n",
    };
    write_output(args.output.as_deref(), &content)
}

fn cmd_curve(args: CurveArgs) -> anyhow::Result<()> {
    if args.points < 2 {
        bail!("--points must be at least 2, got {}", args.points);
    }
    let params = BmtParams::new(args.kappa_l, args.kappa_r)?;
    let domain = parse_domain(&args.domain)?;
    let dist = BmtDistribution::new(params, domain);
    let (c, d) = dist.support();
    let step = (d - c) / (args.points - 1) as f64;
    let label = match args.which {
        WhichCurve::Cdf => "cdf",
        WhichCurve::Pdf => "pdf",
    };
    let pairs: Vec<(f64, f64)> = (0..args.points)
        .map(|i| {
            let x = if i + 1 == args.points {
                d
            } else {
                c + i as f64 * step
            };
            let y = match args.which {
                WhichCurve::Cdf => dist.cdf(x),
                WhichCurve::Pdf => dist.pdf(x),
            };
            (x, y)
        })
        .collect();
    let content = match args.format {
        Format::Csv => {
            let mut out = format!("x,{label}\n");
            for (x, y) in &pairs {
                out.push_str(&format!("{},{}\n", fmt_f64(*x), fmt_f64(*y)));
            }
            out
        }
        Format::Json => {
            let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            serde_json::to_string_pretty(&serde_json::json!({ "x": xs, label: ys }))? + "\n"
        }
    };
    write_output(args.output.as_deref(), &content)
}

fn cmd_describe(args: DescribeArgs) -> anyhow::Result<()> {
    let data = dataset::read_column(&args.input, &args.column)?;
    let summary = summarize(&data)?;
    let content = match args.format {
        Format::Json => serde_json::to_string_pretty(&summary)? + "\n",
        Format::Csv => report::summary_csv(&summary),
    };
    write_output(args.output.as_deref(), &content)
}

fn cmd_region(args: RegionArgs) -> anyhow::Result<()> {
    let points = descriptives::skew2_kurt_region(args.resolution)?;
    let content = match args.format {
        Format::Csv => report::region_csv(&points),
        Format::Json => serde_json::to_string_pretty(&points)? + "\n",
    };
    write_output(args.output.as_deref(), &content)
}

fn cmd_grid(args: GridArgs) -> anyhow::Result<()> {
    let grid = descriptives::measure_grid(args.resolution)?;
    let content = match args.format {
        Format::Csv => report::grid_csv(&grid),
        Format::Json => serde_json::to_string_pretty(&grid)? + "\n",
    };
    write_output(args.output.as_deref(), &content)
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let config = RecoveryConfig {
        replicates: args.replicates,
        sizes: args.sizes.clone(),
        thetas: parse_thetas(&args.thetas)?,
        methods: args.methods.iter().map(|&m| m.into()).collect(),
        base_seed: args.seed,
    };
    let report_data = run_recovery(&config)?;
    let content = match args.format {
        Format::Csv => report::recovery_csv(&report_data),
        Format::Json => serde_json::to_string_pretty(&report_data)? + "\n",
    };
    write_output(args.output.as_deref(), &content)
}
