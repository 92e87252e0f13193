use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lsz_core::corpus;
use lsz_core::problem::{Command, GeneratorsFile, InputSpec, ProblemSpec, DEFAULT_FIELD};
use lsz_core::report::{run, Report, RunOptions, EXIT_USAGE};
use lsz_core::Bound;

/// Multigraded Betti numbers and binomial generators of lattice ideals.
///
/// Reports are written to stdout as JSON. Degrees are comma-separated SNF
/// coordinates, free part first, then torsion residues; `check` prints the
/// coordinate legend. Bounds are rationals in units of the positive functional.
#[derive(Parser, Debug)]
#[command(name = "lsz", version)]
struct Cli {
    #[command(flatten)]
    source: Source,
    /// Rank field: `q` (rationals) or `fp` (integers mod 32003).
    #[arg(long, global = true, default_value = DEFAULT_FIELD)]
    field: String,
    /// Seed for randomized cross-checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print a short summary to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Exit 0 even when the report carries warnings.
    #[arg(long, global = true)]
    allow_warnings: bool,
    /// Record elapsed time in the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Input JSON: {"n": .., "lattice_basis": [..]} or {"n": .., "grading_columns": [..]}.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Built-in instance: rational-quartic, total-degree, twisted-cubic, torsion, ci-incomparable.
    #[arg(long, global = true)]
    corpus: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct BoundArg {
    /// Scan bound (defaults to the corpus entry's bound).
    #[arg(long)]
    bound: Option<Bound>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Grading summary and pointedness.
    Check,
    /// The monomials of one degree.
    Fiber {
        #[arg(long, allow_hyphen_values = true)]
        degree: String,
    },
    /// Δ_gcd(b) or Δ_b with its reduced homology.
    Complex {
        #[arg(long, allow_hyphen_values = true)]
        degree: String,
        #[arg(long, default_value = "gcd", value_parser = ["gcd", "delta"])]
        kind: String,
    },
    /// Betti table up to the bound.
    Betti {
        #[command(flatten)]
        bound: BoundArg,
        #[arg(long, default_value = "both", value_parser = ["gcd", "tor", "both"])]
        oracle: String,
    },
    /// Minimal binomial census.
    Census {
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Indispensable binomials, cross-checked against sampled generating sets.
    Indispensable {
        #[command(flatten)]
        bound: BoundArg,
        #[arg(long, default_value_t = 50)]
        resamples: usize,
    },
    /// Strong indispensability conditions for every Betti degree.
    CheckStrong {
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Koszul complex on given binomials.
    KoszulCi {
        /// Generators JSON: {"binomials": [{"plus": [..], "minus": [..]}]}.
        #[arg(long)]
        gens: Option<PathBuf>,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Every cross-oracle check on one input.
    VerifyAll {
        #[command(flatten)]
        bound: BoundArg,
    },
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn build_spec(cli: &Cli) -> Result<ProblemSpec, String> {
    let entry = match &cli.source.corpus {
        Some(name) => Some(corpus::lookup(name).ok_or_else(|| {
            format!(
                "unknown corpus entry {name:?}; available: {}",
                corpus::names().join(", ")
            )
        })?),
        None => None,
    };
    let input = match (&cli.source.input, entry) {
        (Some(path), _) => InputSpec::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?,
        (None, Some(e)) => e.spec(),
        (None, None) => unreachable!("clap requires an input source"),
    };
    let bound = |b: &BoundArg| -> Result<Bound, String> {
        b.bound
            .or(entry.map(|e| e.default_bound()))
            .ok_or_else(|| "--bound is required".to_string())
    };
    let command = match &cli.command {
        Cmd::Check => Command::Check,
        Cmd::Fiber { degree } => Command::Fiber { degree: degree.clone() },
        Cmd::Complex { degree, kind } => Command::Complex {
            degree: degree.clone(),
            kind: kind.clone(),
        },
        Cmd::Betti { bound: b, oracle } => Command::Betti {
            bound: bound(b)?,
            oracle: oracle.clone(),
        },
        Cmd::Census { bound: b } => Command::Census { bound: bound(b)? },
        Cmd::Indispensable { bound: b, resamples } => Command::Indispensable {
            bound: bound(b)?,
            resamples: *resamples,
        },
        Cmd::CheckStrong { bound: b } => Command::CheckStrong { bound: bound(b)? },
        Cmd::KoszulCi { gens, bound: b } => {
            let generators = match (gens, entry.and_then(|e| e.generators())) {
                (Some(path), _) => {
                    GeneratorsFile::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?
                }
                (None, Some(g)) => g,
                (None, None) => return Err("--gens is required".into()),
            };
            Command::KoszulCi {
                bound: bound(b)?,
                generators,
            }
        }
        Cmd::VerifyAll { bound: b } => Command::VerifyAll { bound: bound(b)? },
    };
    Ok(ProblemSpec {
        input,
        command,
        field: cli.field.clone(),
        seed: cli.seed,
        allow_warnings: cli.allow_warnings,
    })
}

fn summarize(r: &Report) {
    eprintln!(
        "{} {}: {}",
        r.tool,
        r.spec.command.name(),
        if r.ok { "ok" } else { "FAILED" }
    );
    if let Some(g) = &r.grading {
        eprintln!(
            "  grading: d = {}, torsion = {:?}, y = {:?}, legend = [{}]",
            g.free_rank,
            g.torsion_moduli,
            g.y,
            g.legend.join(", ")
        );
    }
    for w in &r.warnings {
        eprintln!("  warning: {}", serde_json::to_string(w).expect("warning serializes"));
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("LSZ_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("LSZ_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let usage = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(EXIT_USAGE as u8)
    };
    if let Err(e) = configure_threads() {
        return usage(e);
    }
    let spec = match build_spec(&cli) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let report = match run(&spec, RunOptions { timing: cli.timing }) {
        Ok(r) => r,
        Err(e) => return usage(e.to_string()),
    };
    println!("{}", report.to_json());
    if cli.verbose {
        summarize(&report);
    }
    if let Some(f) = &report.failure {
        eprintln!("failure: {f}");
    } else if report.exit_code() != 0 {
        eprintln!(
            "failure: {} warning(s); pass --allow-warnings to accept",
            report.warnings.len()
        );
    }
    ExitCode::from(report.exit_code() as u8)
}
