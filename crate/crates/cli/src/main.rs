//! `stokes`: build Stokes stratified spaces from JSON, run checks on
//! functors, compute Stokes directions and tangent complexes.

mod commands;
mod corpus;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::{Outcome, Settings, Which};
use input::Source;
use report::{digest, Report};

/// Exit code for unreadable or invalid input.
const INPUT_ERROR: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "stokes", version, about = "Stokes stratified spaces and Stokes functors over Q")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Dimension bound for random functors.
    #[arg(long, global = true, default_value_t = 2)]
    dim_bound: usize,
    /// Number of randomized trials.
    #[arg(long, global = true, default_value_t = 64)]
    trials: usize,
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Record wall-clock time in reports.
    #[arg(long, global = true)]
    timing: bool,
    /// Run the bundled examples.
    #[arg(long)]
    corpus: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a space, irregular class or polyhedral file and dump its total poset.
    Build { file: PathBuf },
    /// Run a check on a space and (for most checks) a functor.
    Check {
        #[arg(long, value_enum)]
        which: Which,
        space: PathBuf,
        functor: Option<PathBuf>,
    },
    /// Stokes directions of every pair of an irregular class.
    Directions { file: PathBuf },
    /// Ext dimensions and Euler characteristic of RHom(F, F).
    Tangent { space: PathBuf, functor: PathBuf },
}

struct Job<'a> {
    command: String,
    sources: Vec<&'a Source>,
    run: Box<dyn FnOnce() -> Result<Outcome> + 'a>,
}

fn execute(job: Job, seed: u64, timing: bool) -> Result<Report> {
    let start = Instant::now();
    let input_digest = digest(&job.sources);
    let outcome = (job.run)()?;
    Ok(Report {
        command: job.command,
        input_digest,
        verdict: outcome.verdict,
        result: outcome.result,
        witness: outcome.witness,
        seed,
        elapsed_ms: timing.then(|| start.elapsed().as_millis() as u64),
        status: outcome.status,
    })
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn print(report: &Report, json: bool) {
    let mut out = String::new();
    if json {
        out = pretty(report);
    } else {
        out.push_str(&format!("{}: {}\n", report.command, report.verdict));
        if !report.result.is_null() {
            out.push_str(&pretty(&report.result));
        }
        if !report.witness.is_null() {
            out.push_str(&format!("witness: {}", pretty(&report.witness)));
        }
        if let Some(ms) = report.elapsed_ms {
            out.push_str(&format!("elapsed: {ms} ms\n"));
        }
    }
    // A closed pipe is not worth a panic.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn run_corpus(cli: &Cli) -> ExitCode {
    let sources: Vec<Source> = corpus::FILES.iter().map(|(n, t)| Source::inline(n, t)).collect();
    let get = |name: &str| sources.iter().find(|s| s.name == name).expect("bundled file");
    let mut mismatches = 0;
    for entry in corpus::entries() {
        let st = Settings { seed: cli.seed, dim_bound: cli.dim_bound, trials: entry.trials.unwrap_or(cli.trials) };
        let job = match entry.job {
            corpus::Job::Build(f) => Job {
                command: format!("build {f}"),
                sources: vec![get(f)],
                run: Box::new(move || commands::build(get(f))),
            },
            corpus::Job::Check(which, s, f) => Job {
                command: format!("check {} {s}{}", which.name(), f.map(|f| format!(" {f}")).unwrap_or_default()),
                sources: std::iter::once(get(s)).chain(f.map(get)).collect(),
                run: Box::new(move || commands::check(which, get(s), f.map(get), st)),
            },
            corpus::Job::Directions(f) => Job {
                command: format!("directions {f}"),
                sources: vec![get(f)],
                run: Box::new(move || commands::directions(get(f))),
            },
            corpus::Job::Tangent(s, f) => Job {
                command: format!("tangent {s} {f}"),
                sources: vec![get(s), get(f)],
                run: Box::new(move || commands::tangent(get(s), get(f))),
            },
        };
        let code = match execute(job, cli.seed, cli.timing) {
            Ok(report) => {
                print(&report, cli.json);
                report.status.exit_code()
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                INPUT_ERROR as i32
            }
        };
        let ok = code == entry.expected_exit;
        if !ok {
            mismatches += 1;
        }
        eprintln!("{} {}: exit {code}, expected {}", if ok { "ok" } else { "MISMATCH" }, entry.name, entry.expected_exit);
    }
    if mismatches == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.corpus {
        return run_corpus(&cli);
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand or --corpus is required (see --help)");
        return ExitCode::from(INPUT_ERROR);
    };
    let st = Settings { seed: cli.seed, dim_bound: cli.dim_bound, trials: cli.trials };
    let read = |paths: &[&PathBuf]| paths.iter().map(|p| Source::read(p)).collect::<Result<Vec<_>>>();
    let loaded = match command {
        Command::Build { file } | Command::Directions { file } => read(&[file]),
        Command::Check { space, functor, .. } => read(&std::iter::once(space).chain(functor).collect::<Vec<_>>()),
        Command::Tangent { space, functor } => read(&[space, functor]),
    };
    let sources = match loaded {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let job = match command {
        Command::Build { .. } => Job {
            command: "build".into(),
            sources: sources.iter().collect(),
            run: Box::new(|| commands::build(&sources[0])),
        },
        Command::Check { which, .. } => Job {
            command: format!("check {}", which.name()),
            sources: sources.iter().collect(),
            run: Box::new(|| commands::check(*which, &sources[0], sources.get(1), st)),
        },
        Command::Directions { .. } => Job {
            command: "directions".into(),
            sources: sources.iter().collect(),
            run: Box::new(|| commands::directions(&sources[0])),
        },
        Command::Tangent { .. } => Job {
            command: "tangent".into(),
            sources: sources.iter().collect(),
            run: Box::new(|| commands::tangent(&sources[0], &sources[1])),
        },
    };
    match execute(job, cli.seed, cli.timing) {
        Ok(report) => {
            print(&report, cli.json);
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
