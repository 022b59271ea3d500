//! Command-line interface: analyze patterns, evaluate correction terms,
//! build twist-reduction certificates, and run the built-in corpus.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use satlift::cobordism::{reduce_to_hopf, FramedLinkingMatrix};
use satlift::dinv::{d_lens_spectrum, d_surgery_pm1_alternating, zk_bound};
use satlift::exact::{rat_from_string, rat_to_string, IntMatrix};
use satlift::pipeline::SerializableCobordism;
use satlift::report::{
    analyze, analyze_corpus, builtin_file, render_text, AnalyzeOptions, PatternFile, Report,
    ReportError,
};

#[derive(Parser)]
#[command(
    name = "satlift",
    about = "Branched-cover lift calculus and concordance obstruction engine for satellite patterns",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a pattern file (or builtin:NAME) across cover degrees.
    Analyze(AnalyzeArgs),
    /// Exact correction-term arithmetic.
    Dinv(DinvArgs),
    /// Build a twist-reduction certificate from a raw framed linking matrix.
    Reduce(ReduceArgs),
    /// Analyze every built-in pattern plus the composition demo.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Path to a pattern JSON file, or builtin:NAME.
    input: String,
    /// Comma-separated cover degrees; defaults to every admissible prime
    /// power up to the cap.
    #[arg(long, value_delimiter = ',')]
    q: Vec<u32>,
    /// Largest cover degree considered.
    #[arg(long, default_value_t = 7)]
    max_q: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct DinvArgs {
    #[command(subcommand)]
    which: DinvCommand,
}

#[derive(Subcommand)]
enum DinvCommand {
    /// Correction terms of the lens space L(p, q), all Spin^c labels.
    Lens { p: u64, q: u64 },
    /// Correction term of +-1 surgery on an alternating knot of the given
    /// signature.
    Surgery {
        #[arg(allow_hyphen_values = true)]
        sigma: i64,
        /// Surgery coefficient, +1 or -1.
        #[arg(allow_hyphen_values = true)]
        sign: i64,
    },
    /// The obstruction bound -2k + 2C; C may be omitted to stay symbolic.
    Zk {
        k: i64,
        /// Exact rational constant, e.g. 3 or 7/2.
        c: Option<String>,
    },
}

#[derive(Args)]
struct ReduceArgs {
    /// Text file with one matrix row per line, whitespace-separated
    /// integers: linking off the diagonal, framings on it.
    matrix: PathBuf,
    /// Distinguished pair (1-based) kept at linking one; defaults to the
    /// first positively-linked pair.
    #[arg(long, num_args = 2)]
    pair: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 7)]
    max_q: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Dinv(args) => cmd_dinv(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Corpus(args) => cmd_corpus(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_pattern_file(input: &str) -> Result<PatternFile, ReportError> {
    if let Some(name) = input.strip_prefix("builtin:") {
        return builtin_file(name);
    }
    let raw = std::fs::read_to_string(input)
        .map_err(|e| ReportError::Parse(format!("cannot read '{input}': {e}")))?;
    serde_json::from_str(&raw).map_err(|e| ReportError::Parse(format!("bad pattern file: {e}")))
}

fn emit_reports(reports: &[Report], format: Format) -> Result<(), ReportError> {
    match format {
        Format::Json => {
            let json = serde_json::to_string_pretty(reports)
                .map_err(|e| ReportError::Parse(e.to_string()))?;
            println!("{json}");
        }
        Format::Text => {
            for r in reports {
                print!("{}", render_text(r));
            }
        }
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), ReportError> {
    let file = load_pattern_file(&args.input)?;
    let opts = AnalyzeOptions {
        degrees: args.q,
        max_q: args.max_q,
    };
    let report = analyze(&file, &opts)?;
    match args.format {
        Format::Json => {
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| ReportError::Parse(e.to_string()))?;
            println!("{json}");
            Ok(())
        }
        Format::Text => emit_reports(std::slice::from_ref(&report), args.format),
    }
}

fn cmd_dinv(args: DinvArgs) -> Result<(), ReportError> {
    match args.which {
        DinvCommand::Lens { p, q } => {
            let spec = d_lens_spectrum(p, q).map_err(|e| ReportError::Parse(e.to_string()))?;
            for (i, d) in spec.iter().enumerate() {
                println!("d(L({p},{q}), {i}) = {}", rat_to_string(d));
            }
        }
        DinvCommand::Surgery { sigma, sign } => {
            if sign != 1 && sign != -1 {
                return Err(ReportError::Parse("surgery sign must be +1 or -1".into()));
            }
            let d = d_surgery_pm1_alternating(sigma, sign as i8);
            println!(
                "d(S^3_{}(K)) = {} for alternating K with signature {sigma}",
                if sign == 1 { "+1" } else { "-1" },
                rat_to_string(&d)
            );
        }
        DinvCommand::Zk { k, c } => {
            let c = match c {
                None => None,
                Some(raw) => Some(
                    rat_from_string(&raw)
                        .ok_or_else(|| ReportError::Parse(format!("bad rational '{raw}'")))?,
                ),
            };
            let b = zk_bound(k, c);
            println!("bound(k={k}) = {}", b.expression);
            if let Some(t) = b.threshold {
                println!("negative from k = {t}");
            }
        }
    }
    Ok(())
}

fn parse_matrix_file(path: &PathBuf) -> Result<IntMatrix, ReportError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| ReportError::Parse(format!("cannot read '{}': {e}", path.display())))?;
    let rows: Vec<Vec<i64>> = raw
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| ReportError::Parse(format!("bad integer '{t}'")))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Err(ReportError::Parse("empty matrix".into()));
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(ReportError::Parse("matrix must be square".into()));
    }
    Ok(IntMatrix::from_rows(&rows))
}

fn cmd_reduce(args: ReduceArgs) -> Result<(), ReportError> {
    let m = parse_matrix_file(&args.matrix)?;
    let flm = FramedLinkingMatrix::new(m)
        .map_err(|e| ReportError::Parse(format!("not a framed linking matrix: {e}")))?;
    let n = flm.size();
    let (i0, j0) = match args.pair {
        Some(p) => {
            let (a, b) = (p[0], p[1]);
            if a == 0 || b == 0 || a > n || b > n {
                return Err(ReportError::Parse("pair indices are 1-based".into()));
            }
            (a - 1, b - 1)
        }
        None => {
            let mut found = None;
            'outer: for i in 0..n {
                for j in i + 1..n {
                    if flm.linking(i, j) >= &satlift::exact::Int::from(1) {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            found.ok_or_else(|| {
                ReportError::Parse("no positively-linked pair to distinguish".into())
            })?
        }
    };
    let cert = reduce_to_hopf(&flm, i0, j0)
        .map_err(|e| ReportError::Pipeline(satlift::pipeline::PipelineError::Cobordism(e)))?;
    match args.format {
        Format::Json => {
            let wire = SerializableCobordism::from(&cert);
            let json = serde_json::to_string_pretty(&wire)
                .map_err(|e| ReportError::Parse(e.to_string()))?;
            println!("{json}");
        }
        Format::Text => {
            println!("initial:\n{}", cert.initial.matrix());
            println!("moves ({}):", cert.two_handle_count);
            for mv in &cert.moves {
                println!("  twist({}, {})", mv.i + 1, mv.j + 1);
            }
            println!("final:\n{}", cert.final_matrix.matrix());
        }
    }
    Ok(())
}

fn cmd_corpus(args: CorpusArgs) -> Result<(), ReportError> {
    let opts = AnalyzeOptions {
        degrees: Vec::new(),
        max_q: args.max_q,
    };
    let reports = analyze_corpus(&opts)?;
    emit_reports(&reports, args.format)
}
