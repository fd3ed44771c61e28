//! Batch front-end for the `ahecke` library.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ahecke::cache::{Cache, CACHE_DIR_ENV};
use ahecke::engine::Engine;

use output::{Failure, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "ahecke",
    version,
    about = "Exact computations in extended affine Weyl groups and affine Hecke algebras"
)]
pub struct Cli {
    /// Root datum: `preset:NAME`, a bare preset name, or a JSON file.
    #[arg(long, global = true)]
    datum: Option<String>,
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory of the persistent class-polynomial cache.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for scans (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct EltArg {
    /// Element in the engine notation, e.g. `t[1,0,0]*(1 2)`.
    #[arg(long)]
    elt: String,
}

/// Either one `(w̃, J, z)` or every triple up to a length bound.
#[derive(Args, Debug, Clone)]
pub struct TripleArgs {
    #[arg(long, conflicts_with = "max_len", requires_all = ["j", "z"])]
    elt: Option<String>,
    /// Finite simple reflections, e.g. `s1,s2` (empty for none).
    #[arg(long)]
    j: Option<String>,
    /// Minimal element of `W_J z` in `W₀`, e.g. `(1 2)` or `s1*s2`.
    #[arg(long)]
    z: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_len: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct SpecArgs {
    /// Dominant Newton point, comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// Kottwitz value, e.g. `5` or `1 mod 3`.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Index of the Γ element twisting the Frobenius.
    #[arg(long, default_value_t = 0)]
    delta: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the structural invariants of the root datum.
    Validate,
    Length(EltArg),
    /// Reduce an element to a minimal length element of its class.
    Minimize(EltArg),
    /// Conjugacy classes meeting elements of length at most L.
    Classes {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_len: u32,
    },
    /// Class polynomials of an element.
    Classpoly {
        #[command(flatten)]
        elt: EltArg,
        /// Also recompute with this many seeded random pivot sequences.
        #[arg(long, default_value_t = 0)]
        check_pivots: usize,
    },
    /// Cocenter image of the product `T_{e1} T_{e2} ...`.
    Reduce {
        #[arg(long = "elt", required = true)]
        elts: Vec<String>,
    },
    /// All `(J, z)`-alcove triples with `ℓ(w̃) ≤ L`.
    PalcoveScan {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_len: u32,
    },
    BernsteinDatum(EltArg),
    /// Cocenter identity for `(J, z)`-alcove elements via the parabolic Hecke algebra.
    VerifyA(TripleArgs),
    /// Bernstein presentation of the standard basis element of each class.
    VerifyB {
        #[arg(long, conflicts_with = "max_len", required_unless_present = "max_len")]
        elt: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_len: Option<u32>,
    },
    /// Class polynomials of `(J, z)`-alcove elements against the parabolic ones.
    VerifyC(TripleArgs),
    /// Dimension formula; without `--nu` every `(ν̄, κ)` in the support is listed.
    AdlvDim {
        #[command(flatten)]
        elt: EltArg,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Emptiness criterion for a `(J, z)`-alcove element and a class of the Levi.
    AdlvEmpty {
        #[command(flatten)]
        elt: EltArg,
        #[arg(long)]
        j: String,
        #[arg(long)]
        z: String,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Maintenance of the persistent cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    /// Drop corrupt and duplicate entries.
    Gc,
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let source = cli
        .datum
        .as_deref()
        .ok_or_else(|| Failure::usage("--datum is required"))?;
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    if let Command::Validate = cli.command {
        return commands::validate(source);
    }
    let eng = Engine::load(source)?;
    let mut cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Some(Cache::in_dir(dir, &eng)),
        _ => None,
    };
    if let Command::Cache {
        action: CacheAction::Gc,
    } = cli.command
    {
        let cache = cache
            .as_mut()
            .ok_or_else(|| Failure::usage("no cache directory configured"))?;
        return commands::cache_gc(&eng, cache);
    }
    if let Some(c) = cache.as_mut() {
        let stats = c.load(&eng)?;
        if stats.corrupt > 0 || stats.invalidated {
            eprintln!(
                "{}",
                serde_json::json!({ "warning": "cache entries ignored", "path": c.path(), "stats": stats })
            );
        }
    }
    let outcome = commands::dispatch(cli, &eng)?;
    if let Some(c) = cache.as_mut() {
        c.save(&eng)?;
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|o| output::emit(&cli, o)) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code)
        }
    }
}
