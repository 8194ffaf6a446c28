use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::builder::FalseyValueParser;
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use eqcob_core::schubert::BsWord;
use eqcob_core::{CoeffMode, FglContext, LawSpec, RootDatum, RootType};
use serde_json::{json, Value};

use crate::cache::{self, CacheStatus, FglCache};
use crate::config::{RunConfig, DEFAULT_LAW, DEFAULT_PRECISION, DEFAULT_SAMPLES};
use crate::error::CliError;
use crate::suites::{self, Report};

#[derive(Debug, Parser)]
#[command(name = "eqcob", version, about = "Equivariant oriented cohomology of flag varieties and wonderful compactifications")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// additive, multiplicative[:beta] or universal:N
    #[arg(long, global = true, env = "EQCOB_LAW", default_value_t = DEFAULT_LAW)]
    pub law: LawSpec,
    /// Root datum tag: glN, aN, b2, g2, or products such as a1xa1
    #[arg(long = "type", global = true, env = "EQCOB_TYPE", default_value = "gl3")]
    pub root_type: RootType,
    /// Truncation degree D; for basis computations, the degree of the basis
    #[arg(long, global = true, env = "EQCOB_DEGREE")]
    pub degree: Option<usize>,
    /// Truncation degree for basis computations (default: max(degree, 5))
    #[arg(long, global = true, env = "EQCOB_PRECISION")]
    pub precision: Option<usize>,
    /// Work over Q instead of Z
    #[arg(long, global = true, env = "EQCOB_RATIONAL", action = ArgAction::SetTrue, value_parser = FalseyValueParser::new())]
    pub rational: bool,
    /// Work over Z[1/t]
    #[arg(long, global = true, env = "EQCOB_TORSION_INDEX", conflicts_with = "rational")]
    pub torsion_index: Option<u64>,
    #[arg(long, global = true, env = "EQCOB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Random inputs per randomized check
    #[arg(long, global = true, env = "EQCOB_SAMPLES", default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Directory for cached formal group law data
    #[arg(long, global = true, env = "EQCOB_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Write the JSON artifact here instead of standard output
    #[arg(long, global = true, env = "EQCOB_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "EQCOB_THREADS")]
    pub threads: Option<usize>,
    /// Symmetric variety, e.g. group:psl2
    #[arg(long, global = true, env = "EQCOB_CASE", default_value = "group:psl2")]
    pub case: String,
    /// Bott-Samelson word of 1-based simple reflections, e.g. 1,2
    #[arg(long, global = true, env = "EQCOB_WORD")]
    pub word: Option<BsWord>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Formal group law checks
    Fgl {
        #[command(subcommand)]
        command: FglCommand,
    },
    /// Run a verification suite
    Verify { suite: Suite },
    /// Compute an object and write it in wire format
    Compute { what: Computation },
    /// Moment graph of the flag variety
    Gkm {
        #[command(subcommand)]
        command: GkmCommand,
    },
    /// Wonderful compactifications
    Symmetric {
        #[command(subcommand)]
        command: SymmetricCommand,
    },
    /// Schubert calculus
    Schubert {
        #[command(subcommand)]
        command: SchubertCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum FglCommand {
    Check,
}

#[derive(Debug, Subcommand)]
pub enum GkmCommand {
    Verify,
    Basis,
}

#[derive(Debug, Subcommand)]
pub enum SymmetricCommand {
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum SchubertCommand {
    BottSamelson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    LemmaDiv,
    Demazure,
    Gln,
    TensorIso,
    BottSamelson,
    Esph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Computation {
    BottSamelson,
    SubringBasis,
    Invariants,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

impl CommonArgs {
    fn mode(&self) -> CoeffMode {
        match (self.rational, self.torsion_index) {
            (true, _) => CoeffMode::Rational,
            (false, Some(t)) => CoeffMode::Localized(t),
            (false, None) => CoeffMode::Integer,
        }
    }

    fn config(&self, precision: usize) -> Result<RunConfig, CliError> {
        let cfg = RunConfig {
            law: self.law,
            precision,
            root_type: self.root_type.clone(),
            mode: self.mode(),
            seed: self.seed,
            samples: self.samples,
            cache_dir: self.cache_dir.clone(),
            threads: self.threads,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

struct Outcome {
    command: String,
    config: Value,
    passed: bool,
    summary: String,
    result: Value,
}

fn setup(cfg: &RunConfig) -> Result<FglContext, CliError> {
    let cache = cfg.cache_dir.as_ref().map(FglCache::new);
    let (ctx, status) = cache::context(cache.as_ref(), cfg.law, cfg.precision)?;
    match status {
        CacheStatus::Rebuilt(reason) => eprintln!("regenerated stale FGL cache ({reason})"),
        CacheStatus::Built => eprintln!("wrote FGL cache for {} at D = {}", cfg.law, cfg.precision),
        CacheStatus::Hit | CacheStatus::Disabled => {}
    }
    Ok(ctx)
}

fn from_report(command: String, cfg: &RunConfig, r: Report) -> Outcome {
    Outcome { command, config: cfg.describe(), passed: r.passed, summary: r.summary, result: r.details }
}

fn artifact(command: String, cfg: &RunConfig, summary: String, result: Value) -> Outcome {
    Outcome { command, config: cfg.describe(), passed: true, summary, result }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let c = &cli.common;
    let main_precision = c.precision.or(c.degree).unwrap_or(DEFAULT_PRECISION);
    let basis_precision = c.precision.unwrap_or(c.degree.unwrap_or(1).max(DEFAULT_PRECISION));
    match &cli.command {
        Command::Fgl { command: FglCommand::Check } => {
            let cfg = c.config(main_precision)?;
            let ctx = setup(&cfg)?;
            Ok(from_report("fgl check".into(), &cfg, suites::fgl_check(&ctx)?))
        }
        Command::Verify { suite } => {
            let name = format!("verify {}", suite.to_possible_value().expect("named").get_name());
            let mut cfg = c.config(main_precision)?;
            if *suite == Suite::Esph {
                cfg.mode = CoeffMode::Rational;
                let ctx = setup(&cfg)?;
                let mut out = from_report(name, &cfg, suites::esph_suite(&c.case, &ctx)?);
                out.config["case"] = json!(c.case);
                return Ok(out);
            }
            let ctx = setup(&cfg)?;
            let datum = RootDatum::build(&cfg.root_type)?;
            let report = match suite {
                Suite::LemmaDiv => suites::lemma_div(&cfg, &ctx, &datum)?,
                Suite::Demazure => suites::demazure_suite(&cfg, &ctx, &datum)?,
                Suite::Gln => suites::gln_suite(&cfg, &suites::flag_graph(&datum, &ctx)?)?,
                Suite::TensorIso => suites::tensor_iso_suite(&cfg, &suites::flag_graph(&datum, &ctx)?)?,
                Suite::BottSamelson => suites::bott_samelson_suite(&suites::flag_graph(&datum, &ctx)?)?,
                Suite::Esph => unreachable!("handled above"),
            };
            Ok(from_report(name, &cfg, report))
        }
        Command::Symmetric { command: SymmetricCommand::Verify } => {
            let mut cfg = c.config(main_precision)?;
            cfg.mode = CoeffMode::Rational;
            let ctx = setup(&cfg)?;
            let mut out = from_report("symmetric verify".into(), &cfg, suites::esph_suite(&c.case, &ctx)?);
            out.config["case"] = json!(c.case);
            Ok(out)
        }
        Command::Gkm { command: GkmCommand::Verify } => {
            let cfg = c.config(main_precision)?;
            let ctx = setup(&cfg)?;
            let datum = RootDatum::build(&cfg.root_type)?;
            Ok(from_report("gkm verify".into(), &cfg, suites::gkm_verify(&suites::flag_graph(&datum, &ctx)?)?))
        }
        Command::Gkm { command: GkmCommand::Basis } | Command::Compute { what: Computation::SubringBasis } => {
            let d = c.degree.unwrap_or(1);
            let cfg = c.config(basis_precision)?;
            let ctx = setup(&cfg)?;
            let graph = suites::flag_graph(&RootDatum::build(&cfg.root_type)?, &ctx)?;
            let basis = suites::compute_subring_basis(&graph, d, cfg.mode)?;
            let summary = format!("subring basis of {} in degree {d} over {}: {} tuples", cfg.root_type, cfg.mode, basis.len());
            let mut out = artifact("subring-basis".into(), &cfg, summary, json!({ "degree": d, "basis": basis }));
            out.config["basis_degree"] = json!(d);
            Ok(out)
        }
        Command::Compute { what: Computation::Invariants } => {
            let d = c.degree.unwrap_or(1);
            let cfg = c.config(basis_precision)?;
            let ctx = setup(&cfg)?;
            let datum = RootDatum::build(&cfg.root_type)?;
            let basis = suites::compute_invariants(&datum, &ctx, d, cfg.mode)?;
            let summary = format!("invariants of {} in degree {d} over {}: {} elements", cfg.root_type, cfg.mode, basis.len());
            let mut out = artifact("invariants".into(), &cfg, summary, json!({ "degree": d, "basis": basis }));
            out.config["basis_degree"] = json!(d);
            Ok(out)
        }
        Command::Compute { what: Computation::BottSamelson } | Command::Schubert { command: SchubertCommand::BottSamelson } => {
            let cfg = c.config(main_precision)?;
            let word = c.word.clone().ok_or_else(|| CliError::Config("--word is required".to_string()))?;
            let ctx = setup(&cfg)?;
            let graph = suites::flag_graph(&RootDatum::build(&cfg.root_type)?, &ctx)?;
            let class = suites::compute_bott_samelson(&graph, &word)?;
            let summary = format!("Bott-Samelson class of ({word}) on {} under {}", cfg.root_type, cfg.law);
            Ok(Outcome { command: "bott-samelson".into(), config: cfg.describe(), passed: true, summary, result: json!(class) })
        }
    }
}

fn emit(out: &Option<PathBuf>, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.common.threads.unwrap_or(0)).build();
    let result = match pool {
        Ok(pool) => pool.install(|| execute(&cli)),
        Err(e) => Err(CliError::Config(e.to_string())),
    };
    match result {
        Ok(o) => {
            // Bare artifacts for the commands whose output is a wire object.
            let value = match o.command.as_str() {
                "bott-samelson" => o.result.clone(),
                _ => json!({ "command": o.command, "config": o.config, "passed": o.passed, "result": o.result }),
            };
            if let Err(e) = emit(&cli.common.out, &value) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            eprintln!("{} [{:.2?}]", o.summary, start.elapsed());
            if o.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
