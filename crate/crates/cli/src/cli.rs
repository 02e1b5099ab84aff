use std::ffi::OsString;
use std::path::PathBuf;

use benford_core::{
    benford_pmf, conformance_report, gen_geometric_sequence, gen_power_sequence,
    gen_product_samples, ks_uniform_mantissa_in_base, mantissa_histogram, mantissa_in_base,
    DigitLawSpec, ExponentIntervalSpec, GeometricMode, GeometricSeqSpec, LogValue, ProductSpec,
    SourceDistribution, Verdict, DEFAULT_ALPHA,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, EXIT_NON_CONFORMING, EXIT_OK};
use crate::ingest::{ingest, Dataset, InputFormat, ValueKind};
use crate::report::{
    plot_data_csv, render_mantissa, render_pmf, render_report, samples_csv, write_output,
    OutputFormat,
};
use crate::reproduce::{run_claims, ClaimId, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(
    name = "benford",
    version,
    about = "Exact digit laws, generators and conformance tests"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Number base K.
    #[arg(long, global = true, default_value_t = 10)]
    base: u32,
    /// Digit position n (1 is the leading digit).
    #[arg(long, global = true, default_value_t = 1)]
    position: u32,
    /// RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Exit with status 1 when the verdict is non_conforming.
    #[arg(long, global = true)]
    strict: bool,
    /// Significance level of the chi-square test.
    #[arg(long, global = true, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the exact digit probabilities.
    Law,
    /// Write generated samples as a `log10_value` CSV.
    Gen(GenArgs),
    /// Ingest a column and test it for conformance.
    Analyze(AnalyzeArgs),
    /// Histogram of mantissas.
    Mantissa(MantissaArgs),
    /// Rerun the fixed-seed claim suite.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Power,
    Product,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Fresh,
    Cumulative,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Power base a (power).
    #[arg(long)]
    a: Option<f64>,
    /// Decade offset P (power).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    p: i64,
    /// Interval width M (power) or factor count (product).
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Number of samples or terms.
    #[arg(long)]
    n: usize,
    /// Lower end of the factor interval (product, geometric).
    #[arg(long)]
    lo: Option<f64>,
    /// Upper end of the factor interval (product, geometric).
    #[arg(long)]
    hi: Option<f64>,
    /// Comma-separated factor values, drawn with equal probability (product).
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = ModeArg::Fresh)]
    mode: ModeArg,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input file, or `-` for standard input.
    input: PathBuf,
    /// Column name or 0-based index.
    #[arg(long)]
    column: Option<String>,
    #[arg(long, value_enum, default_value_t = InputFormat::Csv)]
    input_format: InputFormat,
    #[arg(long, value_enum, default_value_t = ValueKind::Auto)]
    input_kind: ValueKind,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Also write `digit,expected,observed` CSV here.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MantissaArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 10)]
    bins: usize,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    /// Claim to run; repeat for several. All claims when absent.
    #[arg(long, value_enum)]
    claim: Vec<ClaimId>,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code. Errors are reported on standard error.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("benford: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let common = &cli.common;
    match &cli.command {
        Command::Law => law(common),
        Command::Gen(args) => gen(common, args),
        Command::Analyze(args) => analyze(common, args),
        Command::Mantissa(args) => mantissa(common, args),
        Command::Reproduce(args) => reproduce(common, args),
    }
}

fn digit_spec(common: &Common) -> Result<DigitLawSpec, CliError> {
    Ok(DigitLawSpec::new(common.base, common.position)?)
}

fn law(common: &Common) -> Result<i32, CliError> {
    let pmf = benford_pmf(digit_spec(common)?);
    let format = common.format.unwrap_or(OutputFormat::Text);
    write_output(common.out.as_deref(), &render_pmf(&pmf, format))?;
    Ok(EXIT_OK)
}

fn required<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--kind {kind} needs --{flag}")))
}

fn gen(common: &Common, args: &GenArgs) -> Result<i32, CliError> {
    let seed = common.seed.unwrap_or(0);
    let values = match args.kind {
        GenKind::Power => {
            let a = required(args.a, "a", "power")?;
            let spec = ExponentIntervalSpec::with_number_base(a, args.p, args.m, common.base)?;
            gen_power_sequence(&spec, args.n, seed)?
        }
        GenKind::Product => {
            let source = match &args.values {
                Some(list) => SourceDistribution::explicit_list(list.clone())?,
                None => SourceDistribution::uniform_interval(
                    required(args.lo, "lo", "product")?,
                    required(args.hi, "hi", "product")?,
                )?,
            };
            gen_product_samples(&ProductSpec::new(source, args.m, args.n, seed)?)
        }
        GenKind::Geometric => {
            let mode = match args.mode {
                ModeArg::Fresh => GeometricMode::FreshFactors,
                ModeArg::Cumulative => GeometricMode::Cumulative,
            };
            gen_geometric_sequence(&GeometricSeqSpec::new(
                required(args.lo, "lo", "geometric")?,
                required(args.hi, "hi", "geometric")?,
                args.n,
                seed,
                mode,
            )?)
        }
    };
    write_output(common.out.as_deref(), &samples_csv(&values))?;
    Ok(EXIT_OK)
}

fn load(input: &InputArgs) -> Result<Dataset, CliError> {
    let data = ingest(
        &input.input,
        input.column.as_deref(),
        input.input_format,
        input.input_kind,
    )?;
    eprintln!(
        "{}: {} rows, {} usable, {} zeros dropped, {} non-finite dropped, {} negatives folded",
        data.name,
        data.row_count,
        data.values.len(),
        data.dropped_zero_count,
        data.dropped_nonfinite_count,
        data.negatives_folded_count
    );
    Ok(data)
}

fn analyze(common: &Common, args: &AnalyzeArgs) -> Result<i32, CliError> {
    let spec = digit_spec(common)?;
    let data = load(&args.input)?;
    let report = conformance_report(&data.values, spec, common.alpha)?;
    let format = common.format.unwrap_or(OutputFormat::Json);
    write_output(common.out.as_deref(), &render_report(&report, format))?;
    if let Some(path) = &args.plot_data {
        write_output(Some(path), &plot_data_csv(&report))?;
    }
    if common.strict && report.verdict == Verdict::NonConforming {
        return Ok(EXIT_NON_CONFORMING);
    }
    Ok(EXIT_OK)
}

fn mantissa(common: &Common, args: &MantissaArgs) -> Result<i32, CliError> {
    if common.base < 2 {
        return Err(CliError::Usage(format!(
            "base must be at least 2, got {}",
            common.base
        )));
    }
    let data = load(&args.input)?;
    // A value whose log10 is the base-K mantissa bins the same as that mantissa.
    let in_base: Vec<LogValue> = if common.base == 10 {
        data.values.clone()
    } else {
        data.values
            .iter()
            .map(|&v| LogValue::new(mantissa_in_base(v, common.base)).expect("finite mantissa"))
            .collect()
    };
    let hist = mantissa_histogram(&in_base, args.bins)?;
    let ks = ks_uniform_mantissa_in_base(&data.values, common.base)?;
    let format = common.format.unwrap_or(OutputFormat::Text);
    write_output(common.out.as_deref(), &render_mantissa(&hist, ks, format))?;
    Ok(EXIT_OK)
}

fn reproduce(common: &Common, args: &ReproduceArgs) -> Result<i32, CliError> {
    let ids: &[ClaimId] = if args.claim.is_empty() {
        &ClaimId::ALL
    } else {
        &args.claim
    };
    let run = run_claims(ids, common.seed.unwrap_or(DEFAULT_SEED))?;
    let body = match common.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => run.to_json(),
        OutputFormat::Text => run.to_text(),
    };
    write_output(common.out.as_deref(), &body)?;
    Ok(if run.all_passed() {
        EXIT_OK
    } else {
        EXIT_NON_CONFORMING
    })
}
