//! `bsforest`: batch front end for Britton reduction, the affine
//! representation, Bass-Serre tree exports, verification suites and
//! cylinder complexes.
//!
//! Exit codes: 0 success, 1 a property or consistency failure, 2 usage or
//! parse errors.

use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bsforest::affine::Gamma;
use bsforest::complex::{assign_radii, build_complex, check_cat0, intro_complex, ker_f_quotient_complex, ComplexError, CylinderComplex};
use bsforest::quotient::{quotient_ball_ker_f, GraphOfCircles};
use bsforest::tree::{ExportFormat, Tree, VertexAddress};
use bsforest::verify::{parse_generator, run_suite, Suite, VerifyConfig};
use bsforest::words::{britton_reduce, normalize_params, BsParams, Sign, Word};

const SEED_ENV: &str = "BSFOREST_SEED";

#[derive(Parser, Debug)]
#[command(name = "bsforest", version, about = "Computations in Baumslag-Solitar groups BS(m,n)")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    #[arg(long, global = true, default_value_t = 2, allow_negative_numbers = true)]
    m: i64,
    #[arg(long, global = true, default_value_t = 3, allow_negative_numbers = true)]
    n: i64,
    /// Overridden by the BSFOREST_SEED environment variable.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 500)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 3)]
    radius: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Reduce words in the given presentation rather than the normalized one.
    #[arg(long, global = true)]
    no_normalize: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Britton-reduce a word and decide whether it is trivial.
    Reduce { word: String },
    /// Image of a word in Z[1/mn] x| Z.
    Phi { word: String },
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Run a property suite and print a JSON report.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        /// Cyclic generator "x,y" for the free-action suite.
        #[arg(long = "gen", allow_hyphen_values = true)]
        generator: Option<String>,
        /// Largest |k| tried by the free-action suite.
        #[arg(long, default_value_t = 50)]
        bound: u64,
    },
    #[command(subcommand)]
    Complex(ComplexCommand),
}

#[derive(Subcommand, Debug)]
enum TreeCommand {
    /// Print the ball of the configured radius (DOT unless --format json).
    Export,
    /// Tree distance between two vertices, given as words or addresses.
    Distance { from: String, to: String },
    /// Signed distance: forward edges minus backward edges.
    #[command(name = "D")]
    SignedDistance { from: String, to: String },
}

#[derive(Subcommand, Debug)]
enum ComplexCommand {
    /// Cylinder complex of the ker f quotient of the configured ball.
    QuotientBuild,
    /// The ker f quotient itself as a graph of circles (JSON or DOT).
    QuotientGraph,
    /// Radii and complex for a graph of circles read from stdin.
    FromGraph,
    /// Two-cylinder model of BS(m, +m) or BS(m, -m).
    Intro {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
        sign: Sign,
    },
    /// Read a complex from stdin and check the link condition.
    Check,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        _ => Err(format!("sign must be + or -, got {s:?}")),
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

type Output = Result<(String, bool), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    match run(cli) {
        Ok((text, passed)) => {
            let _ = stdout.write_all(text.as_bytes());
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Failed(msg)) = &e;
            eprintln!("bsforest: {msg}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Output {
    let cfg = cli.config;
    let params = BsParams::new(cfg.m, cfg.n).map_err(usage)?;
    match cli.command {
        Command::Reduce { word } => reduce(&cfg, params, &word),
        Command::Phi { word } => {
            let w: Word = word.parse().map_err(usage)?;
            let image = Gamma::new(params).phi(&w);
            Ok((format!("{}\n", serde_json::to_string(&image).expect("serializable")), true))
        }
        Command::Tree(cmd) => tree(&cfg, params, cmd),
        Command::Verify { suite, generator, bound } => {
            let seed = match std::env::var(SEED_ENV) {
                Ok(s) => s.trim().parse().map_err(|_| usage(format!("{SEED_ENV} must be a u64")))?,
                Err(_) => cfg.seed,
            };
            let config = VerifyConfig {
                seed,
                samples: cfg.samples,
                radius: cfg.radius,
                generator: generator.as_deref().map(parse_generator).transpose().map_err(usage)?,
                exponent_bound: bound,
            };
            let report = run_suite(suite, params, &config);
            Ok((pretty(&report), report.passed))
        }
        Command::Complex(cmd) => complex(&cfg, params, cmd),
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn reduce(cfg: &RunConfig, params: BsParams, word: &str) -> Output {
    let w: Word = word.parse().map_err(usage)?;
    let form = if cfg.no_normalize {
        britton_reduce(&w, &params).to_word()
    } else {
        let nz = normalize_params(params.m(), params.n()).map_err(usage)?;
        let reduced = britton_reduce(&nz.to_normalized(&w), &nz.params);
        nz.from_normalized(&reduced.to_word())
    };
    let identity = form.is_empty();
    let text = match cfg.format {
        OutputFormat::Json => pretty(&json!({
            "params": params,
            "input": w.to_string(),
            "form": form.to_string(),
            "identity": identity,
        })),
        _ => format!("{form}\nidentity: {identity}\n"),
    };
    Ok((text, true))
}

fn vertex_arg(tree: &Tree, s: &str) -> Result<VertexAddress, CliError> {
    if s.contains(':') {
        VertexAddress::parse(s, tree.params()).map_err(usage)
    } else {
        let w: Word = s.parse().map_err(usage)?;
        Ok(tree.vertex_from_word(&w))
    }
}

fn tree(cfg: &RunConfig, params: BsParams, cmd: TreeCommand) -> Output {
    let tree = Tree::new(params);
    match cmd {
        TreeCommand::Export => {
            let format = match cfg.format {
                OutputFormat::Json => ExportFormat::Json,
                OutputFormat::Dot | OutputFormat::Text => ExportFormat::Dot,
            };
            let mut out = tree.export_ball(cfg.radius, format);
            if !out.ends_with('\n') {
                out.push('\n');
            }
            Ok((out, true))
        }
        TreeCommand::Distance { from, to } => {
            let (u, v) = (vertex_arg(&tree, &from)?, vertex_arg(&tree, &to)?);
            Ok((format!("{}\n", tree.tree_distance(&u, &v)), true))
        }
        TreeCommand::SignedDistance { from, to } => {
            let (u, v) = (vertex_arg(&tree, &from)?, vertex_arg(&tree, &to)?);
            Ok((format!("{}\n", tree.signed_distance(&u, &v)), true))
        }
    }
}

fn read_stdin() -> Result<String, CliError> {
    let mut buf = String::new();
    io::stdin().read_to_string(&mut buf).map_err(usage)?;
    Ok(buf)
}

fn complex(cfg: &RunConfig, params: BsParams, cmd: ComplexCommand) -> Output {
    match cmd {
        ComplexCommand::QuotientBuild => {
            let (_, _, x) = ker_f_quotient_complex(&Tree::new(params), cfg.radius).map_err(failed)?;
            Ok((pretty(&x), true))
        }
        ComplexCommand::QuotientGraph => {
            let q = quotient_ball_ker_f(&Tree::new(params), cfg.radius);
            let text = match cfg.format {
                OutputFormat::Dot => q.graph.to_dot(),
                _ => pretty(&q.graph),
            };
            Ok((text, true))
        }
        ComplexCommand::FromGraph => {
            let g: GraphOfCircles = serde_json::from_str(&read_stdin()?).map_err(usage)?;
            g.validate().map_err(usage)?;
            let base = 0;
            let radii = assign_radii(&g, base).map_err(failed)?;
            let x = build_complex(&g, &radii).map_err(failed)?;
            Ok((pretty(&x), true))
        }
        ComplexCommand::Intro { sign } => {
            if params.m() <= 0 {
                return Err(usage("intro needs --m >= 1"));
            }
            Ok((pretty(&intro_complex(params.m() as u64, sign)), true))
        }
        ComplexCommand::Check => {
            let x: CylinderComplex = serde_json::from_str(&read_stdin()?).map_err(usage)?;
            x.validate().map_err(failed)?;
            let report = check_cat0(&x);
            Ok((pretty(&report), report.passed))
        }
    }
}

fn failed(e: ComplexError) -> CliError {
    match e {
        ComplexError::InconsistentLoop { witness } => CliError::Failed(format!(
            "circumferences cannot be matched around loop {}",
            serde_json::to_string(&witness).expect("serializable")
        )),
        other => CliError::Failed(other.to_string()),
    }
}
