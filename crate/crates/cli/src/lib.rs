//! `dubnet`: solve three-terminal Dubins network instances from JSON files,
//! sample junction loci and draw figures.
//!
//! Headings follow the network convention: every terminal's heading points
//! along its edge, away from the terminal and into the network. Pass
//! `--negate-headings` for files written in the classic path convention,
//! where the far end of a path carries its arrival heading.

pub mod instance;
pub mod result;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dubnet_core::limacon::Limacon;
use dubnet_core::planar::TopologyParity;
use dubnet_core::{parse_choices, CircleChoice};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use instance::{validate, Diagnostic, InstanceFile, Mode};
use result::{ResultFile, SolveOptions};
use svg::{render_svg, RenderOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dubnet", version, about = "Minimum Dubins networks on three directed terminals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Sample the junction locus r(θ).
    Locus(LocusArgs),
    /// Check an instance file and list diagnostics.
    Validate(ValidateArgs),
    /// Draw a result file.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Svg,
    /// JSON to `--out`, SVG next to it with an `.svg` extension.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityArg {
    Odd,
    Even,
}

impl From<ParityArg> for TopologyParity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Odd => TopologyParity::Odd,
            ParityArg::Even => TopologyParity::Even,
        }
    }
}

fn parse_topology(s: &str) -> Result<[CircleChoice; 3], String> {
    parse_choices(s).ok_or_else(|| format!("expected three of L/R such as LLR, got {s:?}"))
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Overrides the instance's mode.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum, default_value = "json")]
    pub emit: Emit,
    /// Also run the numerical oracle and report its gap to the solver.
    #[arg(long)]
    pub oracle: bool,
    /// Force one circle choice, such as LLR.
    #[arg(long, value_parser = parse_topology)]
    pub topology: Option<[CircleChoice; 3]>,
    #[arg(long)]
    pub show_construction: bool,
    /// Overlay the junction locus of the winner's first two terminals.
    #[arg(long)]
    pub locus: bool,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Reverse every terminal heading before solving.
    #[arg(long)]
    pub negate_headings: bool,
}

#[derive(Debug, Args)]
pub struct LocusArgs {
    /// Junction angle between the first two edges, in degrees.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Distance between the two circle centres, in units of ρ.
    #[arg(long, allow_negative_numbers = true)]
    pub d: f64,
    #[arg(long, value_enum)]
    pub parity: ParityArg,
    #[arg(long, default_value_t = 360)]
    pub samples: usize,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// A result file written by `solve`.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub show_construction: bool,
    #[arg(long)]
    pub locus: bool,
    #[arg(long, default_value_t = 360)]
    pub samples: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Json { path: String, line: usize, column: usize, message: String },
    #[error("{path}: invalid instance")]
    Invalid { path: String, diagnostics: Vec<Diagnostic> },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(#[from] dubnet_core::Error),
}

/// Polar samples of the locus, as printed by `locus`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusFile {
    pub alpha_degrees: f64,
    pub d: f64,
    pub parity: ParityArg,
    pub auxiliary_radius: f64,
    pub offset: f64,
    pub samples: Vec<LocusSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusSample {
    pub theta_degrees: f64,
    pub r: f64,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        // The location is reported in the prefix already.
        let message = e.to_string();
        let message = message.split(" at line ").next().unwrap_or_default().to_string();
        CliError::Json { path: path.display().to_string(), line: e.line(), column: e.column(), message }
    })
}

/// Parses and validates an instance, returning it with any warnings.
pub fn load_instance(path: &Path, text: &str) -> Result<(InstanceFile, Vec<Diagnostic>), CliError> {
    let doc: serde_json::Value = parse_json(path, text)?;
    let diagnostics = validate(&doc);
    if diagnostics.iter().any(Diagnostic::is_error) {
        return Err(CliError::Invalid { path: path.display().to_string(), diagnostics });
    }
    let inst = parse_json(path, text)?;
    Ok((inst, diagnostics))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "stdout".into(), source }),
    }
}

fn solve_cmd(args: &SolveArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    if args.emit == Emit::Both && args.out.is_none() {
        return Err(CliError::Usage("--emit both needs --out".into()));
    }
    let (inst, warnings) = load_instance(&args.input, &read(&args.input)?)?;
    for w in &warnings {
        let _ = writeln!(stderr, "{}: {w}", args.input.display());
    }
    let opts = SolveOptions {
        mode: args.mode,
        topology: args.topology,
        epsilon: args.epsilon,
        max_iter: args.max_iter,
        negate_headings: args.negate_headings,
        oracle: args.oracle,
    };
    if opts.mode == Some(Mode::Spatial) && inst.terminals.iter().any(|t| t.z.is_none()) {
        return Err(CliError::Usage("spatial mode needs z on every terminal".into()));
    }
    let result = result::solve(&inst, &opts)?;
    let render = RenderOptions { show_construction: args.show_construction, locus: args.locus, ..Default::default() };
    match args.emit {
        Emit::Json => emit(args.out.as_deref(), &to_json(&result), stdout)?,
        Emit::Svg => emit(args.out.as_deref(), &render_svg(&result, &render), stdout)?,
        Emit::Both => {
            let out = args.out.as_deref().expect("checked above");
            write_file(out, &to_json(&result))?;
            write_file(&out.with_extension("svg"), &render_svg(&result, &render))?;
        }
    }
    if result.winner.is_none() {
        for c in &result.candidates {
            let _ = writeln!(stderr, "{}: {}", c.choices, c.status);
        }
        return Ok(EXIT_DEGENERATE);
    }
    Ok(EXIT_OK)
}

pub fn locus_file(args: &LocusArgs) -> Result<LocusFile, CliError> {
    let curve = Limacon::new(args.alpha.to_radians(), args.d, args.parity.into())?;
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    Ok(LocusFile {
        alpha_degrees: args.alpha,
        d: args.d,
        parity: args.parity,
        auxiliary_radius: curve.auxiliary_radius(),
        offset: curve.offset(),
        samples: curve
            .samples(args.samples)
            .into_iter()
            .map(|(theta, r)| LocusSample { theta_degrees: theta.to_degrees(), r })
            .collect(),
    })
}

fn validate_cmd(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let doc: serde_json::Value = parse_json(&args.input, &read(&args.input)?)?;
    let diagnostics = validate(&doc);
    for d in &diagnostics {
        let _ = writeln!(stdout, "{d}");
    }
    if diagnostics.is_empty() {
        let _ = writeln!(stdout, "ok");
    }
    Ok(if diagnostics.iter().any(Diagnostic::is_error) { EXIT_INPUT } else { EXIT_OK })
}

fn render_cmd(args: &RenderArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let result: ResultFile = parse_json(&args.input, &read(&args.input)?)?;
    if result.winner.is_some_and(|w| w >= result.candidates.len()) {
        return Err(CliError::Usage(format!("{}: winner index out of range", args.input.display())));
    }
    let opts = RenderOptions { show_construction: args.show_construction, locus: args.locus, locus_samples: args.samples };
    emit(args.out.as_deref(), &render_svg(&result, &opts), stdout)?;
    Ok(EXIT_OK)
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code: 0 on success, 1 on input errors, 2 when every
/// candidate is degenerate.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => solve_cmd(a, stdout, stderr),
        Command::Locus(a) => locus_file(a).and_then(|f| emit(a.out.as_deref(), &to_json(&f), stdout)).map(|_| EXIT_OK),
        Command::Validate(a) => validate_cmd(a, stdout),
        Command::Render(a) => render_cmd(a, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let CliError::Invalid { diagnostics, .. } = &e {
                for d in diagnostics {
                    let _ = writeln!(stderr, "  {d}");
                }
            }
            EXIT_INPUT
        }
    }
}
