//! `mother`: constructions, exports and verification suites for the
//! alternating mother group.

mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use mothergroup::bratteli::Diagram;
use mothergroup::full_group::eta;
use mothergroup::schreier::{gray_piece, level_graph};
use mothergroup::{ClopenSet, Error, GeneratingSet, GroupWord, TildePoint};

use verify::{Params, Suite};

const REPORT_SCHEMA: &str = "mother-verify/1";

#[derive(Parser, Debug)]
#[command(name = "mother", version, about = "Alternating mother group: graphs, Bratteli model and full group checks")]
struct Cli {
    /// Alphabet size.
    #[arg(long, global = true, default_value_t = 5, env = "MOTHER_D")]
    d: usize,
    /// Seed for every sampled corpus.
    #[arg(long, global = true, default_value_t = 1, env = "MOTHER_SEED")]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "MOTHER_FORMAT")]
    format: Format,
    /// Write the artifact or report here instead of stdout.
    #[arg(long, global = true, env = "MOTHER_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Dot,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schreier graph of S0 on level n.
    LevelGraph {
        #[arg(short = 'n', long, default_value_t = 2)]
        n: usize,
        /// Shorthand for `--format dot`.
        #[arg(long)]
        dot: bool,
    },
    /// Central Gray code piece of length 2n+1 around a point.
    GrayPiece {
        /// Point such as `0|(13)` or `2|0*[14]`.
        #[arg(long)]
        point: String,
        #[arg(short = 'n', long, default_value_t = 2)]
        n: usize,
    },
    /// Bratteli diagram exports.
    Bratteli {
        #[command(subcommand)]
        command: BratteliCommand,
    },
    /// The element η(U, g, h) as a clopen table.
    Eta {
        /// Clopen set, e.g. `1@21*` or `0@12*,3@21*`.
        #[arg(long)]
        cylinder: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
    },
    /// Runs a verification suite and writes a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Level bound (bounded type) or largest n for pieces (marginals).
        #[arg(long, default_value_t = 6, env = "MOTHER_DEPTH")]
        depth: usize,
        /// Number of pieces for the marginals suite.
        #[arg(long, default_value_t = 1000, env = "MOTHER_PIECES")]
        pieces: usize,
        /// Sample count for the other suites.
        #[arg(long, default_value_t = 100, env = "MOTHER_SAMPLES")]
        samples: usize,
        /// Orbital ball radius for the n0 search.
        #[arg(long, default_value_t = 8)]
        radius: usize,
        /// Use this n0 instead of searching for it.
        #[arg(long, env = "MOTHER_N0")]
        n0: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum BratteliCommand {
    Export {
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
}

#[derive(Serialize)]
struct Report<'a> {
    schema: &'static str,
    config: &'a Params,
    config_hash: String,
    passed: bool,
    suites: Vec<verify::SuiteResult>,
}

enum Failure {
    Property,
    Usage(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Resource(m) => Failure::Resource(m),
            Error::Diagnostic(m) => {
                eprintln!("property check failed: {m}");
                Failure::Property
            }
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.d < 5 {
        return Err(Failure::Usage(format!("--d must be at least 5, got {}", cli.d)));
    }
    let d = cli.d;
    match &cli.command {
        Command::LevelGraph { n, dot } => {
            let g = level_graph(&GeneratingSet::standard(d)?, *n, 8)?;
            let text = if *dot || cli.format == Format::Dot { g.to_dot() } else { to_json(&g) };
            emit(cli, &text)
        }
        Command::GrayPiece { point, n } => {
            let p = TildePoint::parse(d, point)?;
            let piece = gray_piece(d, &p, *n)?;
            let text = match cli.format {
                Format::Dot => piece.to_dot(),
                Format::Json => to_json(&piece.to_json()),
            };
            emit(cli, &text)
        }
        Command::Bratteli { command: BratteliCommand::Export { levels } } => {
            let dg = Diagram::new(d)?;
            let text = match cli.format {
                Format::Dot => dg.to_dot(*levels),
                Format::Json => to_json(&dg.to_json(*levels)),
            };
            emit(cli, &text)
        }
        Command::Eta { cylinder, g, h } => {
            let dg = Diagram::new(d)?;
            let u = ClopenSet::parse(&dg, cylinder)?;
            let el = eta(d, &u, &GroupWord::parse(d, g)?, &GroupWord::parse(d, h)?)?;
            if cli.format == Format::Dot {
                return Err(Failure::Usage("eta only has a JSON form".into()));
            }
            let order = el.order(mothergroup::full_group::ORDER_BOUND);
            emit(cli, &to_json(&serde_json::json!({ "element": el.to_json(), "order": order })))
        }
        Command::Verify { suite, depth, pieces, samples, radius, n0 } => {
            let params = Params { d, seed: cli.seed, depth: *depth, pieces: *pieces, samples: *samples, radius: *radius, n0: *n0 };
            let suites: Vec<Suite> = if *suite == Suite::All { Suite::each().to_vec() } else { vec![*suite] };
            let mut results = Vec::new();
            for s in suites {
                let r = verify::run(s, &params)?;
                eprintln!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.suite, r.property);
                results.push(r);
            }
            let config = serde_json::to_string(&(&params, suite)).expect("serializable");
            let report = Report {
                schema: REPORT_SCHEMA,
                config: &params,
                config_hash: hex::encode(Sha256::digest(config.as_bytes())),
                passed: results.iter().all(|r| r.passed),
                suites: results,
            };
            emit(cli, &to_json(&report))?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Property)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("resource cap: {m}");
            ExitCode::from(3)
        }
    }
}
