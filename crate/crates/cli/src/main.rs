//! `polynorm`: command-line front end for the lattice polytope toolkit.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polynorm::cohomology::h_table;
use polynorm::harness::{analyze, generate_corpus, run_verification, verify_polytope, CorpusSpec};
use polynorm::syzygy::n1_probe;
use polynorm::{Error, Polytope};

const EXIT_INPUT: u8 = 1;
const EXIT_VIOLATION: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "polynorm",
    version,
    about = "Exact invariants of lattice polytopes"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Highest dilation level tested by the normality check.
    #[arg(long)]
    cap: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ehrhart data, codegree, bounds and normality of one polytope.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Full theorem checks on one polytope.
    Verify {
        file: PathBuf,
        /// Dilates checked beyond the corollary bound.
        #[arg(long, default_value_t = 2)]
        extra_levels: u32,
        /// Degree cap for the quadratic generation probe.
        #[arg(long, default_value_t = 4)]
        n1_cap: u32,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Cohomology table of the twists k_min..=k_max.
    Cohomology {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        k_max: i64,
    },
    /// Fiber connectivity under quadratic moves for the dilate ℓP.
    NpProbe {
        file: PathBuf,
        #[arg(long)]
        ell: i64,
        /// Highest fiber degree examined.
        #[arg(long, default_value_t = 4)]
        cap: u32,
    },
    /// Print a seeded random corpus.
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Polytopes per dimension.
        #[arg(long)]
        count: usize,
        /// Coordinates are sampled from 0..=bound.
        #[arg(long, default_value_t = 4)]
        bound: i64,
        /// Points sampled per polytope before taking the hull.
        #[arg(long, default_value_t = 6)]
        candidates: usize,
    },
    /// Verify every polytope of the corpus described by a JSON spec.
    VerifyCorpus {
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        extra_levels: u32,
        #[arg(long, default_value_t = 4)]
        n1_cap: u32,
        #[arg(long)]
        cap: Option<u32>,
    },
}

/// Outcome of a command that ran to completion.
struct Outcome {
    output: String,
    violation: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_INPUT);
    }
    match run(cli) {
        Ok(out) => {
            print!("{}", out.output);
            if out.violation {
                eprintln!("error: theorem or invariant violation detected");
                ExitCode::from(EXIT_VIOLATION)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::from(EXIT_VIOLATION)
            }
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("POLYNORM_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("POLYNORM_THREADS must be a non-negative integer, got {raw:?}"))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn run(cli: Cli) -> polynorm::Result<Outcome> {
    let fmt = cli.format;
    match cli.command {
        Command::Analyze { file, cap } => {
            let p = read_polytope(&file)?;
            let rec = analyze(&p, cap.or(cli.cap))?;
            let violation = !rec.checks.all();
            Ok(emit(fmt, &rec, render::analysis, violation))
        }
        Command::Verify {
            file,
            extra_levels,
            n1_cap,
            cap,
        } => {
            let p = read_polytope(&file)?;
            let source = file.display().to_string();
            let entry = verify_polytope(source, &p, extra_levels, n1_cap, cap.or(cli.cap))?;
            let violation = !entry.violations().is_empty();
            Ok(emit(fmt, &entry, render::verification, violation))
        }
        Command::Cohomology { file, k_min, k_max } => {
            let p = read_polytope(&file)?;
            let table = h_table(&p, k_min, k_max)?;
            Ok(emit(fmt, &table, render::cohomology, false))
        }
        Command::NpProbe { file, ell, cap } => {
            let p = read_polytope(&file)?;
            let report = n1_probe(&p, ell, cap)?;
            Ok(emit(fmt, &report, render::probe, false))
        }
        Command::Corpus {
            seed,
            dims,
            count,
            bound,
            candidates,
        } => {
            let spec = CorpusSpec {
                seed,
                dims,
                coord_bound: bound,
                count_per_dim: count,
                vertex_candidates: candidates,
            };
            spec.validate()?;
            let listing: Vec<render::CorpusItem> = generate_corpus(&spec)?
                .iter()
                .map(render::CorpusItem::new)
                .collect();
            Ok(emit(fmt, &listing, |items| render::corpus(items), false))
        }
        Command::VerifyCorpus {
            spec,
            extra_levels,
            n1_cap,
            cap,
        } => {
            let spec = CorpusSpec::from_json(&read_file(&spec)?)?;
            let report = run_verification(&spec, extra_levels, n1_cap, cap.or(cli.cap))?;
            let violation = !report.passed();
            Ok(emit(fmt, &report, render::batch, violation))
        }
    }
}

fn emit<T: Serialize + ?Sized>(
    fmt: Format,
    value: &T,
    text: impl Fn(&T) -> String,
    violation: bool,
) -> Outcome {
    let output = match fmt {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text(value),
    };
    Outcome { output, violation }
}

fn read_file(path: &Path) -> polynorm::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn read_polytope(path: &Path) -> polynorm::Result<Polytope> {
    Polytope::from_json(&read_file(path)?)
}
