use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use torclass::experiment::{
    self, draw_pair, emit, metadata, reproduce_table1, run_trials, Observation, DEFAULT_PRIME,
    DEFAULT_TRIALS,
};
use torclass::ideal::{socle_string, GradedIdeal};
use torclass::koszul::TorAlgebra;
use torclass::predictor::{general_e_bounds, gorenstein_profile, type2_profile};
use torclass::FieldPrime;

#[derive(Parser)]
#[command(
    name = "torclass",
    version,
    about = "Tor-algebra classes of graded artinian quotients of k[x,y,z]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Markdown,
}

impl From<TableFormat> for experiment::Format {
    fn from(f: TableFormat) -> Self {
        match f {
            TableFormat::Csv => experiment::Format::Csv,
            TableFormat::Markdown => experiment::Format::Markdown,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form profile for socle polynomial χ^s1 + χ^s.
    Predict {
        #[arg(long)]
        s1: usize,
        #[arg(long)]
        s: usize,
        /// Embedding dimension; ring-level predictions need 3.
        #[arg(long, default_value_t = 3)]
        e: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
    /// Invariants, Betti table and class of an ideal read from a JSON file.
    Classify {
        #[arg(long)]
        ideal: PathBuf,
        /// Overrides the prime stored in the file.
        #[arg(long)]
        prime: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Draws one compressed type-2 intersection and reports on it.
    Pair {
        #[arg(long)]
        s1: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory receiving i1.json, i2.json, intersection.json and sum.json.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Repeated trials for one (s1, s).
    Experiment {
        #[arg(long)]
        s1: usize,
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Trials for every valid (s1, s) with s <= max-s.
    Table1 {
        #[arg(long, default_value_t = 6)]
        max_s: usize,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "markdown")]
    format: TableFormat,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn field(p: u32) -> Result<FieldPrime> {
    FieldPrime::new(p).with_context(|| format!("invalid prime {p}"))
}

fn json_text(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn tuple(h: &[u64]) -> String {
    let parts: Vec<String> = h.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn predict(s1: usize, s: usize, e: u32, format: ReportFormat) -> Result<String> {
    if e != 3 {
        let (h, t) = gorenstein_profile(e, s);
        let bounds = general_e_bounds(e, s, s1)?;
        return json_text(
            &json!({ "e": e, "gorenstein_h": h, "gorenstein_t": t, "bounds": bounds }),
        );
    }
    let profile = type2_profile(s1, s)?;
    match format {
        ReportFormat::Json => json_text(&serde_json::to_value(&profile)?),
        ReportFormat::Text => {
            let mut out = String::new();
            writeln!(out, "s1 = {}, s = {}", profile.s1, profile.s)?;
            writeln!(out, "h = {}", tuple(&profile.h))?;
            writeln!(out, "t = {}, a = {}", profile.t, profile.a)?;
            writeln!(out, "f = ({}, {}, {})", profile.f0, profile.f1, profile.f2)?;
            writeln!(out, "golod by degree: {}", profile.golod_by_degree)?;
            writeln!(out, "generic class: {}", profile.generic_class)?;
            writeln!(out, "generic m: {}", profile.generic_m)?;
            if let Some(m) = profile.special_m {
                writeln!(out, "m is forced: {m}")?;
            }
            if let Some(b) = &profile.betti_shape {
                write!(out, "betti shape:\n{}", b.to_grid())?;
            }
            Ok(out)
        }
    }
}

fn classify(path: &PathBuf, prime: Option<u32>, format: ReportFormat) -> Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let ideal = GradedIdeal::from_json(&text, prime)?;
    let tor = TorAlgebra::new(&ideal);
    let socle = ideal.socle_polynomial();
    let degrees = ideal.minimal_generator_degrees();
    match format {
        ReportFormat::Json => json_text(&json!({
            "prime": ideal.field().p(),
            "h": ideal.hilbert(),
            "socle": socle,
            "type": tor.ring_type,
            "t": ideal.initial_degree(),
            "s": ideal.socle_degree(),
            "m": tor.m,
            "generator_degrees": degrees,
            "betti": tor.betti,
            "p": tor.p,
            "q": tor.q,
            "r": tor.r,
            "class": tor.class,
        })),
        ReportFormat::Text => {
            let mut out = String::new();
            writeln!(out, "prime: {}", ideal.field().p())?;
            writeln!(out, "h-vector: {}", tuple(&ideal.hilbert()))?;
            writeln!(out, "socle polynomial: {}", socle_string(&socle))?;
            writeln!(out, "type: {}", tor.ring_type)?;
            writeln!(
                out,
                "t = {}, s = {}",
                ideal.initial_degree(),
                ideal.socle_degree()
            )?;
            let per: Vec<String> = degrees.iter().map(|(d, n)| format!("{d}: {n}")).collect();
            writeln!(out, "generators: m = {} ({})", tor.m, per.join(", "))?;
            writeln!(out, "(p, q, r) = ({}, {}, {})", tor.p, tor.q, tor.r)?;
            writeln!(out, "class: {}", tor.class)?;
            write!(out, "betti table:\n{}", tor.betti.to_grid())?;
            Ok(out)
        }
    }
}

fn pair(s1: usize, s: usize, prime: u32, seed: u64, export: Option<PathBuf>) -> Result<String> {
    let f = field(prime)?;
    let pair = draw_pair(s1, s, f, seed)?;
    let obs = Observation::from_pair(&pair)?;
    if let Some(dir) = &export {
        fs::create_dir_all(dir)?;
        for (name, ideal) in [
            ("i1", &pair.i1),
            ("i2", &pair.i2),
            ("intersection", &pair.intersection),
            ("sum", &pair.sum),
        ] {
            let path = dir.join(format!("{name}.json"));
            fs::write(&path, ideal.to_json() + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    json_text(&json!({
        "s1": s1,
        "s": s,
        "prime": prime,
        "seed": seed,
        "pair_draws": pair.pair_draws,
        "gorenstein_draws": pair.gorenstein_draws,
        "observation": obs,
        "ideals": {
            "i1": pair.i1.to_file(),
            "i2": pair.i2.to_file(),
            "intersection": pair.intersection.to_file(),
            "sum": pair.sum.to_file(),
        },
    }))
}

fn write_rows(rows: &[experiment::TallyRow], run: &RunArgs) -> Result<String> {
    if let (TableFormat::Csv, Some(meta)) = (run.format, metadata(rows)) {
        eprintln!("{meta}");
    }
    let text = emit(rows, run.format.into());
    match &run.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Predict { s1, s, e, format } => predict(s1, s, e, format),
        Command::Classify {
            ideal,
            prime,
            format,
        } => classify(&ideal, prime, format),
        Command::Pair {
            s1,
            s,
            prime,
            seed,
            export,
        } => pair(s1, s, prime, seed, export),
        Command::Experiment { s1, s, run } => {
            if run.trials == 0 {
                bail!("--trials must be at least 1");
            }
            let row = run_trials(s1, s, field(run.prime)?, run.trials, run.seed)?;
            write_rows(std::slice::from_ref(&row), &run)
        }
        Command::Table1 { max_s, run } => {
            if run.trials == 0 {
                bail!("--trials must be at least 1");
            }
            let rows = reproduce_table1(max_s, field(run.prime)?, run.trials, run.seed)?;
            write_rows(&rows, &run)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let result =
        run(Cli::parse()).and_then(
            |text| match io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            },
        );
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
