use std::fmt::Write as _;
use std::io::{IsTerminal, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use conway_ramond::dataset::{self, ReportFormat, ReportStyle};
use conway_ramond::frame::{fmt_poly, FrameShape, RANK};
use conway_ramond::qseries::{parse_rational64, Exp};
use conway_ramond::theta::{theta_d12, theta_d12_plus, theta_z12, SignTwist};
use conway_ramond::{selfcheck, DEFAULT_TRUNCATION, VERSION};

#[derive(Parser, Debug)]
#[command(
    name = "conway-ramond",
    about = "Ramond-sector ground states of Conway moonshine, class by class"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full pipeline over a class table and print the results.
    Classify(ClassifyArgs),
    /// Frame shape utilities.
    Frame {
        #[command(subcommand)]
        command: FrameCommand,
    },
    /// Print a twisted theta series.
    Theta(ThetaArgs),
    /// Run the brute-force oracle suite.
    Selfcheck,
    /// Print the version.
    Version,
}

#[derive(Subcommand, Debug)]
enum FrameCommand {
    /// Characteristic polynomial, trace, log-eigenvalues and balancedness.
    Parse { shape: String },
}

#[derive(clap::Args, Debug)]
struct ClassifyArgs {
    /// Class table (co0_class,co1_class,frame_shape); defaults to the bundled table.
    #[arg(long, env = "CONWAY_RAMOND_FRAMES")]
    frames: Option<PathBuf>,
    /// Optional co1_class,anomalous table for the cross-check.
    #[arg(long)]
    anomalies: Option<PathBuf>,
    /// Truncation: coefficients of q^e are computed for e < T ("a/b" or integer).
    #[arg(short = 'T', long = "T", default_value_t = DEFAULT_TRUNCATION.to_string())]
    truncation: String,
    #[arg(long, value_enum, default_value_t = Format::Md)]
    format: Format,
    /// Only print the row for this Co0 class.
    #[arg(long = "class")]
    class: Option<String>,
    /// Write to a file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Plain classification marks even on a terminal.
    #[arg(long)]
    no_color: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CosetArg {
    Z12,
    D12,
    D12plus,
}

#[derive(clap::Args, Debug)]
struct ThetaArgs {
    /// Twelve comma-separated rationals, e.g. 0,0,1/2,...
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    sign: String,
    #[arg(long, value_enum, default_value_t = CosetArg::Z12)]
    coset: CosetArg,
    #[arg(short = 'T', long = "T", default_value = "3")]
    truncation: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Classify(args) => classify(args),
        Command::Frame {
            command: FrameCommand::Parse { shape },
        } => frame_parse(&shape),
        Command::Theta(args) => theta(args),
        Command::Selfcheck => run_selfcheck(),
        Command::Version => emit(&format!("conway-ramond {VERSION}\n")),
    }
}

/// Write to stdout; a reader that went away (`| head`) is not an error.
fn emit(text: &str) -> Result<(), String> {
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn parse_truncation(s: &str) -> Result<Exp, String> {
    let t = parse_rational64(s).ok_or_else(|| format!("bad truncation {s:?}"))?;
    if t < Exp::from_integer(1) {
        return Err(format!("truncation must be at least 1, got {s}"));
    }
    Ok(t)
}

fn describe_io(path: &std::path::Path, e: &dataset::DatasetError) -> String {
    match e {
        dataset::DatasetError::Io { source, .. }
            if source.kind() == std::io::ErrorKind::NotFound =>
        {
            format!("{}: file not found", path.display())
        }
        other => format!("{}: {other}", path.display()),
    }
}

fn classify(args: ClassifyArgs) -> Result<(), String> {
    let t = parse_truncation(&args.truncation)?;
    let rows = match &args.frames {
        Some(path) => dataset::load_frames(path).map_err(|e| describe_io(path, &e))?,
        None => dataset::bundled_frames(),
    };
    let mut records = dataset::run_all(&rows, t).map_err(|e| e.to_string())?;
    let anomalies = match &args.anomalies {
        Some(path) => Some(dataset::load_anomalies(path).map_err(|e| describe_io(path, &e))?),
        None => None,
    };
    if let Some(table) = &anomalies {
        dataset::attach_anomalies(&mut records, table);
    }
    // Consistency across Co0 lifts is part of the contract; fail loudly.
    dataset::summarize(&records).map_err(|e| e.to_string())?;
    let to_terminal = args.output.is_none() && std::io::stdout().is_terminal();
    let style = ReportStyle {
        color: to_terminal && !args.no_color && std::env::var_os("NO_COLOR").is_none(),
        ..ReportStyle::default()
    };
    let format = match args.format {
        Format::Csv => ReportFormat::Csv,
        Format::Md => ReportFormat::Markdown,
    };
    let mut text = dataset::emit_report(&records, format, style);
    if let Some(name) = &args.class {
        let idx = records
            .iter()
            .position(|r| &r.co0_name == name)
            .ok_or_else(|| format!("no Co0 class named {name}"))?;
        // Header plus the full run's rendering of that row, byte for byte.
        let skip = match format {
            ReportFormat::Csv => 1,
            ReportFormat::Markdown => 2,
        };
        let lines: Vec<&str> = text.lines().collect();
        let mut single = lines[..skip].join("\n");
        single.push('\n');
        single.push_str(lines[skip + idx]);
        single.push('\n');
        text = single;
    }
    if let Some(table) = &anomalies {
        let report = conway_ramond::classify::anomaly_cross_check(&records, Some(table));
        eprintln!(
            "anomaly cross-check: {}",
            if report.biconditional_holds() {
                "susy-breaking <=> anomalous holds for every Co1 class".to_string()
            } else {
                format!(
                    "mismatches {:?}, missing {:?}, unknown {:?}",
                    report.biconditional_failures.unwrap_or_default(),
                    report.missing_from_table,
                    report.unknown_in_table
                )
            }
        );
    }
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => emit(&text),
    }
}

fn frame_parse(text: &str) -> Result<(), String> {
    let f = FrameShape::parse(text).map_err(|e| format!("{text:?}: {e}"))?;
    let poly = f.char_poly().map_err(|e| e.to_string())?;
    let lambda = f.log_eigenvalues().map_err(|e| e.to_string())?;
    let mut out = String::new();
    writeln!(out, "shape:          {f}").unwrap();
    writeln!(out, "order:          {}", f.order()).unwrap();
    writeln!(out, "char poly:      {}", fmt_poly(&poly)).unwrap();
    writeln!(out, "trace (k1):     {}", f.trace_k1()).unwrap();
    writeln!(out, "log-eigenvalues {lambda}").unwrap();
    match f.balancing_level() {
        Some(n) => writeln!(out, "balanced:       true (N = {n})").unwrap(),
        None => writeln!(out, "balanced:       false").unwrap(),
    }
    writeln!(out, "-g:             {}", f.negated()).unwrap();
    emit(&out)
}

fn theta(args: ThetaArgs) -> Result<(), String> {
    let t = parse_rational64(&args.truncation)
        .ok_or_else(|| format!("bad truncation {:?}", args.truncation))?;
    let entries: Vec<Exp> = args
        .lambda
        .split(',')
        .map(|s| parse_rational64(s).ok_or_else(|| format!("bad rational {s:?}")))
        .collect::<Result<_, _>>()?;
    let lambda: [Exp; RANK] = entries
        .try_into()
        .map_err(|v: Vec<Exp>| format!("--lambda needs {RANK} entries, got {}", v.len()))?;
    let sign: SignTwist = args.sign.parse()?;
    let s = match args.coset {
        CosetArg::Z12 => theta_z12(&lambda, sign, t),
        CosetArg::D12 => theta_d12(&lambda, t),
        CosetArg::D12plus => theta_d12_plus(&lambda, sign, t),
    };
    emit(&format!("{s}\n{}", s.to_debug_string()))
}

fn run_selfcheck() -> Result<(), String> {
    let results = selfcheck::run_default();
    let mut out = String::new();
    let mut failed = 0;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {}: {}", r.name, r.detail).unwrap();
        if !r.passed {
            failed += 1;
        }
    }
    emit(&out)?;
    if failed > 0 {
        Err(format!("{failed} self-check(s) failed"))
    } else {
        Ok(())
    }
}
