use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ocim::config::{parse_evaluation, LoadedConfig, MuSpec};
use ocim::edge_list::EdgeList;
use ocim::harness::{bayesian_sweep, run_experiment};
use ocim::verify::{self, Tamper};
use ocim::{fixtures, trace, Error, Result};
use ocim_core::oracles::{exhaustive_seed_select, greedy_seed_select};
use ocim_core::spread::{estimate_spread, exact_spread_with_limit, ENUMERATION_LIMIT};
use ocim_core::{Action, Evaluation, IntervalVector, OfuOracle, OracleParams, TieRule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "ocim",
    version,
    about = "Online competitive influence maximization simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a regret experiment described by a config file.
    Run(RunArgs),
    /// Run the built-in fixture checks.
    Verify(VerifyArgs),
    /// Evaluate the A-spread of one action.
    Spread(SpreadArgs),
    /// Run an offline seed-selection oracle once.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override a config value: `section.key=value` or an unambiguous `key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output directory, replacing `run.output`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of nonmono, contested, mc-exact, tpm, tau.
    check: Option<String>,
    #[arg(long, conflicts_with = "check")]
    all: bool,
    #[arg(long, hide = true)]
    tamper_tie_rule: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    AOverB,
    BOverA,
}

impl From<Rule> for TieRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::AOverB => TieRule::AOverB,
            Rule::BOverA => TieRule::BOverA,
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file, or `fixture:<name>`.
    #[arg(long)]
    graph: String,
    /// `file`, `file:<path>`, `wc` or `const:<p>`.
    #[arg(long, default_value = "file")]
    mu: String,
    /// Comma-separated competitor seed labels.
    #[arg(long, default_value = "")]
    seeds_b: String,
    #[arg(long, value_enum, default_value = "b-over-a")]
    rule: Rule,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SpreadArgs {
    #[command(flatten)]
    common: GraphArgs,
    /// Comma-separated A seed labels.
    #[arg(long, default_value = "")]
    seeds_a: String,
    /// `exact` or `mc:<samples>`.
    #[arg(long, default_value = "exact")]
    mode: String,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OracleKind {
    Greedy,
    Exhaustive,
    OfuAuto,
    OfuBipartite,
    OfuBoundary,
    OfuHeuristic,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: GraphArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "greedy")]
    kind: OracleKind,
    /// Lower interval bounds for the OFU kinds (a means spec).
    #[arg(long)]
    lower: Option<String>,
    /// Upper interval bounds for the OFU kinds (a means spec).
    #[arg(long)]
    upper: Option<String>,
    /// `auto`, `exact`, `bipartite` or `mc:<samples>` inside the oracle.
    #[arg(long, default_value = "auto")]
    eval: String,
    #[arg(long, default_value_t = ocim_core::oracles::DEFAULT_MAX_ENUM_EDGES)]
    max_enum_edges: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Spread(args) => cmd_spread(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Core(ocim_core::Error::Capacity { .. }) = e {
                eprintln!("hint: use a sampled evaluation such as --mode mc:100000");
            }
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let loaded = LoadedConfig::load(&args.config, &args.overrides)?;
    let (exp, _) = loaded.resolve()?;
    let instances = loaded.config.run.bayesian_instances;
    let traces = if instances > 0 {
        bayesian_sweep(&exp, loaded.sweep_prior(), instances, args.jobs)?
    } else {
        run_experiment(&exp, args.jobs)?
    };
    let out_dir = args
        .output
        .unwrap_or_else(|| loaded.base_dir.join(&loaded.config.run.output));
    let metadata = serde_json::json!({
        "config": loaded.config,
        "config_hash": loaded.hash(),
        "overrides": loaded.overrides,
        "algorithm": exp.algorithm.name(),
        "exploration_rounds": exp.algorithm.exploration_rounds(&exp.graph, exp.k),
    });
    trace::write_run(&out_dir, &traces, &metadata)?;
    for tr in &traces {
        match tr.meta.instance {
            Some(i) => println!(
                "instance {i} rep {} cum_regret {}",
                tr.meta.repetition,
                tr.final_regret()
            ),
            None => println!(
                "rep {} cum_regret {}",
                tr.meta.repetition,
                tr.final_regret()
            ),
        }
    }
    let mean = traces.iter().map(|t| t.final_regret()).sum::<f64>() / traces.len() as f64;
    println!("mean cum_regret {mean}");
    eprintln!("wrote {} traces to {}", traces.len(), out_dir.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let selector = if args.all {
        None
    } else {
        args.check.as_deref()
    };
    let tamper = Tamper {
        flip_tie_rule: args.tamper_tie_rule,
    };
    let reports = verify::run(selector, tamper)?;
    let mut failed = Vec::new();
    for r in &reports {
        println!(
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        if !r.passed {
            failed.push(r.name);
        }
    }
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn load_graph(spec: &str) -> Result<EdgeList> {
    match spec.strip_prefix("fixture:") {
        Some(name) => fixtures::by_name(name).ok_or_else(|| {
            Error::Config(format!(
                "unknown fixture `{name}` (known: {:?})",
                fixtures::NAMES
            ))
        }),
        None => EdgeList::load(Path::new(spec)),
    }
}

fn means(el: &EdgeList, spec: &str, flag: &str) -> Result<ocim_core::ProbVector> {
    MuSpec::parse(spec)
        .and_then(|m| m.resolve(el, Path::new("")))
        .map_err(|e| Error::Config(format!("--{flag}: {e}")))
}

/// Shortest decimal agreeing with `x` to twelve places, so exact sums such
/// as `2.3000000000000003` print as `2.3`.
fn tidy(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn cmd_spread(args: SpreadArgs) -> Result<ExitCode> {
    let el = load_graph(&args.common.graph)?;
    let mu = means(&el, &args.common.mu, "mu")?;
    let seeds_a = el.nodes(&args.seeds_a)?;
    let seeds_b = el.nodes(&args.common.seeds_b)?;
    let k = seeds_a.len();
    let action = Action::new(seeds_a, seeds_b, k);
    let rule = args.common.rule.into();
    if args.mode == "exact" {
        let v = exact_spread_with_limit(&el.graph, &mu, &action, rule, ENUMERATION_LIMIT)?;
        println!("{}", tidy(v));
        return Ok(ExitCode::SUCCESS);
    }
    let samples = match args.mode.strip_prefix("mc:").map(str::parse::<usize>) {
        Some(Ok(n)) if n > 0 => n,
        _ => {
            return Err(Error::Config(format!(
                "--mode: expected exact or mc:<samples>, got `{}`",
                args.mode
            )))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.common.seed);
    let est = estimate_spread(&el.graph, &mu, &action, rule, samples, &mut rng)?;
    println!("{},{}", est.mean, est.stderr);
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode> {
    let el = load_graph(&args.common.graph)?;
    let g = &el.graph;
    let seeds_b = el.nodes(&args.common.seeds_b)?;
    let eval: Evaluation = parse_evaluation(&args.eval, g, 10, 200)
        .map_err(|e| Error::Config(format!("--eval: {e}")))?;
    let params = OracleParams::new(args.k, args.common.rule.into(), eval);
    let mut rng = ChaCha8Rng::seed_from_u64(args.common.seed);
    let result = match args.kind {
        OracleKind::Greedy | OracleKind::Exhaustive => {
            let mu = means(&el, &args.common.mu, "mu")?;
            if args.kind == OracleKind::Greedy {
                greedy_seed_select(g, &mu, &seeds_b, params, &mut rng)?
            } else {
                exhaustive_seed_select(g, &mu, &seeds_b, params, &mut rng)?
            }
        }
        kind => {
            let (lower, upper) = match (&args.lower, &args.upper) {
                (Some(l), Some(u)) => (means(&el, l, "lower")?, means(&el, u, "upper")?),
                _ => return Err(Error::Config("OFU oracles need --lower and --upper".into())),
            };
            let intervals = IntervalVector::new(lower.into_vec(), upper.into_vec())?;
            let oracle = match kind {
                OracleKind::OfuBipartite => OfuOracle::Bipartite,
                OracleKind::OfuBoundary => OfuOracle::BoundaryEnumeration {
                    max_edges: args.max_enum_edges,
                },
                OracleKind::OfuHeuristic => OfuOracle::Heuristic,
                _ => OfuOracle::Auto {
                    max_edges: args.max_enum_edges,
                    fallback: true,
                },
            };
            oracle.select(g, &intervals, &seeds_b, params, &mut rng)?
        }
    };
    let labels: Vec<&str> = result.seeds_a.iter().map(|&v| el.label(v)).collect();
    let out = serde_json::json!({
        "seeds_a": labels,
        "value": result.estimated_value,
        "mu_used": result.mu_used,
    });
    println!("{out}");
    Ok(ExitCode::SUCCESS)
}
