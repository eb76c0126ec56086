//! `hadamard`: run fixed-point experiments and verify model spaces.
//!
//! Exit status: 0 on success, 1 when a run exhausts its budget or a check
//! finds violations, 2 on invalid input.

mod space_arg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hadamard::experiment::{self, ExperimentConfig};
use hadamard::harness::{self, PowerDistorted, PropertyReport};
use hadamard::solvers::{validate_implicit_schedule, validate_schedules, Algorithm, ConditionCheck};
use hadamard::Space;
use rayon::prelude::*;

use space_arg::Target;

#[derive(Parser)]
#[command(name = "hadamard", version, about = "Fixed points and metric projections in Hadamard spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more experiment configs.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        /// Overrides the config seed (and HADAMARD_SEED).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget: Option<usize>,
        /// Directory for the trace and summary files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Configs run concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check the metric axioms and inequalities on random samples.
    Verify {
        /// euclidean:N, hyperbolic:N, tree-star:K:LEN, tree-random:E:SEED,
        /// tree:FILE, product(A,B), corrupted-demo or descriptor JSON.
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Report the convergence conditions of a config's schedule.
    Schedules {
        #[arg(long)]
        check: PathBuf,
    },
}

const INVALID: u8 = 2;
const UNMET: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { configs, seed, budget, out, jobs } => run(&configs, seed, budget, out, jobs),
        Command::Verify { space, trials, eps, seed } => verify(&space, trials, eps, seed),
        Command::Schedules { check } => schedules(&check),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INVALID)
        }
    }
}

fn load(path: &Path) -> std::result::Result<ExperimentConfig, String> {
    ExperimentConfig::load(path).map_err(|issue| match issue.line {
        Some(l) => format!("{}:{l}: {}: {}", path.display(), issue.key, issue.message),
        None => format!("{}: {}: {}", path.display(), issue.key, issue.message),
    })
}

fn run(paths: &[PathBuf], seed: Option<u64>, budget: Option<usize>, out: Option<PathBuf>, jobs: usize) -> Result<u8> {
    let mut configs = Vec::with_capacity(paths.len());
    for p in paths {
        match load(p) {
            Ok(mut c) => {
                c.apply_overrides(seed, budget, out.clone())?;
                configs.push(c.resolve().map_err(|i| anyhow::anyhow!("{}: {i}", p.display()))?);
            }
            Err(msg) => {
                eprintln!("{msg}");
                return Ok(INVALID);
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().context("building worker pool")?;
    let results: Vec<_> = pool.install(|| configs.par_iter().map(experiment::run).collect());
    let mut code = 0;
    for (config, result) in configs.iter().zip(results) {
        match result {
            Ok(outcome) => {
                let s = &outcome.summary;
                let (csv, json) = experiment::output_paths(&s.config);
                println!(
                    "{}: {:?} after {} rows, final residual {}, outputs {} {}",
                    s.name,
                    s.status,
                    s.rows,
                    s.final_fixed_residual.map_or("-".into(), |r| format!("{r:.3e}")),
                    csv.display(),
                    json.display()
                );
                if !outcome.converged() {
                    code = code.max(UNMET);
                }
            }
            Err(e) => {
                eprintln!("{}: {e}", config.name);
                code = INVALID;
            }
        }
    }
    Ok(code)
}

fn print_reports(reports: &[PropertyReport]) -> bool {
    println!("{:<30} {:>8} {:>10} {:>14}", "property", "trials", "violations", "worst margin");
    let mut clean = true;
    for r in reports {
        println!("{:<30} {:>8} {:>10} {:>14.3e}", r.property.name(), r.trials, r.violations, r.worst_margin);
        if !r.passed() {
            clean = false;
            if let Some(w) = &r.worst_witness {
                println!("  witness: {}", serde_json::to_string(w).expect("witnesses serialize"));
            }
        }
    }
    clean
}

fn verify(space: &str, trials: usize, eps: f64, seed: u64) -> Result<u8> {
    if trials == 0 {
        eprintln!("--trials must be at least 1");
        return Ok(INVALID);
    }
    if eps.is_nan() || eps < 0.0 {
        eprintln!("--eps must be nonnegative");
        return Ok(INVALID);
    }
    let target = match space_arg::parse_target(space) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("invalid --space: {e:#}");
            return Ok(INVALID);
        }
    };
    let reports = match target {
        Target::Space(d) => {
            let s = Space::new(&d)?;
            println!("space: {}", d.label());
            let mut r = harness::check_space_axioms(&s, trials, eps, seed)?;
            r.extend(harness::check_lemmas(&s, trials, eps, seed)?);
            r
        }
        Target::CorruptedDemo => {
            let inner = Space::new(&hadamard::SpaceDescriptor::Euclidean { dim: 2 })?;
            println!("space: euclidean(2) with distance d^1.5");
            harness::check_geometry(&PowerDistorted { inner: inner.clone(), power: 1.5 }, &inner, trials, eps, seed)?
        }
    };
    Ok(if print_reports(&reports) { 0 } else { UNMET })
}

fn print_check(name: &str, c: &ConditionCheck) {
    println!(
        "{:<24} {:<5}{} {}",
        name,
        if c.passed() { "pass" } else { "FAIL" },
        if c.heuristic { " (heuristic)" } else { "" },
        c.evidence
    );
}

fn schedules(path: &Path) -> Result<u8> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut config: ExperimentConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}:{}: {e}", path.display(), e.line());
            return Ok(INVALID);
        }
    };
    let schedule = config.schedule.take().unwrap_or_else(|| match config.algorithm {
        Algorithm::Implicit => hadamard::solvers::Schedule::default_implicit(),
        Algorithm::Explicit => hadamard::solvers::Schedule::default_explicit(),
    });
    let passed = match config.algorithm {
        Algorithm::Explicit => {
            let r = validate_schedules(&schedule, config.budget);
            print_check("condition (i)", &r.condition_i);
            print_check("condition (ii)", &r.condition_ii);
            print_check("condition (iii)", &r.condition_iii);
            print_check("range", &r.range);
            r.all_passed()
        }
        Algorithm::Implicit => {
            let r = validate_implicit_schedule(&schedule, config.budget);
            print_check("alpha -> 0", &r.alpha_vanishes);
            print_check("perturbation -> 0", &r.perturbation_vanishes);
            print_check("range", &r.range);
            r.all_passed()
        }
    };
    Ok(if passed { 0 } else { UNMET })
}
