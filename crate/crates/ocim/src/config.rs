//! Experiment configuration: a TOML document with sections `graph`,
//! `environment`, `algorithm`, `competitor` and `run`, plus `key=value`
//! overrides applied before validation.

use std::path::{Path, PathBuf};

use ocim_core::bandits::{etc_choose_n, EtcMode};
use ocim_core::{Evaluation, Graph, OfuOracle, ProbVector, TieRule};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::edge_list::EdgeList;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::harness::{
    AlgorithmSpec, Baseline, BaselineMode, CompetitorPolicy, Experiment, PriorSpec,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub graph: GraphSection,
    #[serde(default)]
    pub environment: EnvironmentSection,
    pub algorithm: AlgorithmSection,
    #[serde(default)]
    pub competitor: CompetitorSection,
    #[serde(default)]
    pub run: RunSection,
}

/// Exactly one of `path` (an edge list, relative to the config file) or
/// `fixture` (a built-in graph).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    pub path: Option<PathBuf>,
    pub fixture: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvironmentSection {
    /// `file`, `file:<path>`, `wc` or `const:<p>`.
    pub mu: String,
    pub tie_rule: RuleName,
    /// `auto`, `exact`, `bipartite` or `mc`.
    pub evaluation: String,
    pub exact_up_to: usize,
    pub mc_samples: usize,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        EnvironmentSection {
            mu: "wc".into(),
            tie_rule: RuleName::BOverA,
            evaluation: "auto".into(),
            exact_up_to: 12,
            mc_samples: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleName {
    AOverB,
    BOverA,
}

impl From<RuleName> for TieRule {
    fn from(r: RuleName) -> Self {
        match r {
            RuleName::AOverB => TieRule::AOverB,
            RuleName::BOverA => TieRule::BOverA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmName {
    Ts,
    Ofu,
    Etc,
    Emp,
    EpsGreedy,
    Cucb,
    KnownMeans,
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleName {
    Auto,
    Bipartite,
    Boundary,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtcModeName {
    Independent,
    Dependent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorName {
    Uniform,
    Informative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSection {
    pub name: AlgorithmName,
    #[serde(default = "one")]
    pub budget: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "one_f")]
    pub alpha_rho: f64,
    #[serde(default = "default_oracle")]
    pub oracle: OracleName,
    #[serde(default = "default_max_enum")]
    pub max_enum_edges: usize,
    #[serde(default = "yes")]
    pub fallback: bool,
    /// `auto`, `exact`, `bipartite` or `mc` for the learners' oracles.
    #[serde(default = "default_auto")]
    pub oracle_evaluation: String,
    #[serde(default = "default_oracle_exact")]
    pub oracle_exact_up_to: usize,
    #[serde(default = "default_oracle_samples")]
    pub oracle_mc_samples: usize,
    #[serde(default = "default_etc_mode")]
    pub etc_mode: EtcModeName,
    /// Per-node exploration count; derived from `etc_mode` when absent.
    pub etc_visits: Option<u64>,
    /// Smoothness constant for the exploration length; the graph's maximum
    /// reach when absent.
    pub c_tilde: Option<f64>,
    pub delta_min: Option<f64>,
    #[serde(default = "default_prior")]
    pub prior: PriorName,
    #[serde(default = "default_strength")]
    pub prior_strength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    None,
    Rd,
    Im,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompetitorSection {
    pub policy: PolicyName,
    pub budget: usize,
    /// Node labels for the fixed policy.
    pub nodes: Vec<String>,
    /// `all`, or `sources` for nodes with at least one out-edge (RD only).
    pub pool: String,
}

impl Default for CompetitorSection {
    fn default() -> Self {
        CompetitorSection {
            policy: PolicyName::None,
            budget: 1,
            nodes: Vec::new(),
            pool: "all".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineName {
    Greedy,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub horizon: u64,
    pub repetitions: usize,
    pub seed: u64,
    pub output: PathBuf,
    pub baseline: BaselineName,
    /// Defaults to `1 - 1/e` for the greedy baseline and 1 for exhaustive.
    pub alpha: Option<f64>,
    pub beta: f64,
    /// Number of prior draws for a Bayesian sweep; 0 runs at the configured means.
    pub bayesian_instances: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            horizon: 1000,
            repetitions: 1,
            seed: 0,
            output: PathBuf::from("ocim-out"),
            baseline: BaselineName::Greedy,
            alpha: None,
            beta: 1.0,
            bayesian_instances: 0,
        }
    }
}

fn one() -> usize {
    1
}
fn one_f() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_oracle() -> OracleName {
    OracleName::Auto
}
fn default_max_enum() -> usize {
    ocim_core::oracles::DEFAULT_MAX_ENUM_EDGES
}
fn default_auto() -> String {
    "auto".into()
}
fn default_oracle_exact() -> usize {
    10
}
fn default_oracle_samples() -> usize {
    200
}
fn default_etc_mode() -> EtcModeName {
    EtcModeName::Independent
}
fn default_prior() -> PriorName {
    PriorName::Uniform
}
fn default_strength() -> f64 {
    5.0
}

const SECTIONS: [&str; 5] = ["graph", "environment", "algorithm", "competitor", "run"];

/// A parsed configuration together with the canonical text it was
/// validated from and where relative paths resolve.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: Config,
    pub canonical: String,
    pub base_dir: PathBuf,
    pub overrides: Vec<String>,
}

impl LoadedConfig {
    /// Hex SHA-256 of the canonical (post-override) document.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical.as_bytes()))
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base_dir = path.parent().map(Path::to_owned).unwrap_or_default();
        Self::parse(&text, overrides, base_dir)
    }

    pub fn parse(text: &str, overrides: &[String], base_dir: PathBuf) -> Result<Self> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::config(e.to_string()))?;
        for item in overrides {
            apply_override(&mut table, item)?;
        }
        let canonical = toml::to_string(&table).map_err(|e| Error::config(e.to_string()))?;
        let config: Config =
            toml::from_str(&canonical).map_err(|e| Error::config(e.to_string()))?;
        Ok(LoadedConfig {
            config,
            canonical,
            base_dir,
            overrides: overrides.to_vec(),
        })
    }

    /// Loads the graph and means and checks every cross-field constraint.
    pub fn resolve(&self) -> Result<(Experiment, EdgeList)> {
        let c = &self.config;
        let el = match (&c.graph.path, &c.graph.fixture) {
            (Some(p), None) => EdgeList::load(&self.base_dir.join(p))?,
            (None, Some(name)) => fixtures::by_name(name).ok_or_else(|| {
                Error::config(format!(
                    "graph.fixture: unknown fixture `{name}` (known: {:?})",
                    fixtures::NAMES
                ))
            })?,
            _ => {
                return Err(Error::config(
                    "graph: set exactly one of `path` or `fixture`",
                ))
            }
        };
        let g = &el.graph;
        let true_mu = MuSpec::parse(&c.environment.mu)
            .map_err(|e| Error::config(format!("environment.mu: {e}")))?
            .resolve(&el, &self.base_dir)
            .map_err(|e| Error::config(format!("environment.mu: {e}")))?;
        let env = &c.environment;
        let reward_eval = parse_evaluation(&env.evaluation, g, env.exact_up_to, env.mc_samples)
            .map_err(|e| Error::config(format!("environment.evaluation: {e}")))?;
        let a = &c.algorithm;
        let oracle_eval = parse_evaluation(
            &a.oracle_evaluation,
            g,
            a.oracle_exact_up_to,
            a.oracle_mc_samples,
        )
        .map_err(|e| Error::config(format!("algorithm.oracle_evaluation: {e}")))?;
        let rule: TieRule = env.tie_rule.into();

        if a.budget == 0 || a.budget > g.node_count() {
            return Err(Error::config(format!(
                "algorithm.budget: must lie in 1..={}, got {}",
                g.node_count(),
                a.budget
            )));
        }
        if !(0.0..=1.0).contains(&a.epsilon) {
            return Err(Error::config(format!(
                "algorithm.epsilon: must lie in [0, 1], got {}",
                a.epsilon
            )));
        }
        if a.alpha_rho.is_nan() || a.alpha_rho < 0.0 {
            return Err(Error::config(format!(
                "algorithm.alpha_rho: must be non-negative, got {}",
                a.alpha_rho
            )));
        }
        if a.prior_strength.is_nan() || a.prior_strength <= 0.0 {
            return Err(Error::config(format!(
                "algorithm.prior_strength: must be positive, got {}",
                a.prior_strength
            )));
        }
        let prior = match a.prior {
            PriorName::Uniform => PriorSpec::Uniform,
            PriorName::Informative => PriorSpec::Informative {
                strength: a.prior_strength,
            },
        };
        let oracle = match a.oracle {
            OracleName::Auto => OfuOracle::Auto {
                max_edges: a.max_enum_edges,
                fallback: a.fallback,
            },
            OracleName::Bipartite => OfuOracle::Bipartite,
            OracleName::Boundary => OfuOracle::BoundaryEnumeration {
                max_edges: a.max_enum_edges,
            },
            OracleName::Heuristic => OfuOracle::Heuristic,
        };
        let algorithm = match a.name {
            AlgorithmName::Ts => AlgorithmSpec::Ts { prior },
            AlgorithmName::Ofu => AlgorithmSpec::Ofu {
                oracle,
                alpha_rho: a.alpha_rho,
            },
            AlgorithmName::Etc => AlgorithmSpec::Etc {
                visits: self.etc_visits(g)?,
            },
            AlgorithmName::Emp => AlgorithmSpec::EpsilonGreedy { epsilon: 0.0 },
            AlgorithmName::EpsGreedy => AlgorithmSpec::EpsilonGreedy { epsilon: a.epsilon },
            AlgorithmName::Cucb => AlgorithmSpec::Cucb {
                alpha_rho: a.alpha_rho,
            },
            AlgorithmName::KnownMeans => AlgorithmSpec::KnownMeans,
            AlgorithmName::UniformRandom => AlgorithmSpec::UniformRandom,
        };

        let comp = &c.competitor;
        let competitor = match comp.policy {
            PolicyName::None => CompetitorPolicy::None,
            PolicyName::Fixed => CompetitorPolicy::Fixed(
                comp.nodes
                    .iter()
                    .map(|l| {
                        el.node(l).ok_or_else(|| {
                            Error::config(format!("competitor.nodes: unknown node `{l}`"))
                        })
                    })
                    .collect::<Result<_>>()?,
            ),
            PolicyName::Rd | PolicyName::Im => {
                if comp.budget > g.node_count() {
                    return Err(Error::config(format!(
                        "competitor.budget: {} exceeds node count {}",
                        comp.budget,
                        g.node_count()
                    )));
                }
                if comp.policy == PolicyName::Im {
                    CompetitorPolicy::Im {
                        budget: comp.budget,
                    }
                } else {
                    let pool = match comp.pool.as_str() {
                        "all" => None,
                        "sources" => Some(
                            g.nodes()
                                .filter(|&v| g.out_degree(v) > 0)
                                .collect::<Vec<_>>(),
                        ),
                        other => {
                            return Err(Error::config(format!(
                                "competitor.pool: expected `all` or `sources`, got `{other}`"
                            )))
                        }
                    };
                    if let Some(p) = &pool {
                        if comp.budget > p.len() {
                            return Err(Error::config(format!(
                                "competitor.budget: {} exceeds the pool of {} nodes",
                                comp.budget,
                                p.len()
                            )));
                        }
                    }
                    CompetitorPolicy::Random {
                        budget: comp.budget,
                        pool,
                    }
                }
            }
        };

        let run = &c.run;
        let mode = match run.baseline {
            BaselineName::Greedy => BaselineMode::Greedy,
            BaselineName::Exhaustive => BaselineMode::Exhaustive,
        };
        let baseline = Baseline {
            mode,
            alpha: run.alpha.unwrap_or(match mode {
                BaselineMode::Greedy => Baseline::default().alpha,
                BaselineMode::Exhaustive => 1.0,
            }),
            beta: run.beta,
        };
        if !(baseline.alpha > 0.0
            && baseline.alpha <= 1.0
            && baseline.beta > 0.0
            && baseline.beta <= 1.0)
        {
            return Err(Error::config("run.alpha and run.beta must lie in (0, 1]"));
        }
        if run.horizon == 0 {
            return Err(Error::config("run.horizon: must be at least 1"));
        }
        if run.repetitions == 0 {
            return Err(Error::config("run.repetitions: must be at least 1"));
        }
        if run.bayesian_instances > 0
            && a.prior == PriorName::Uniform
            && a.name == AlgorithmName::Ts
        {
            return Err(Error::config(
                "algorithm.prior: a Bayesian sweep draws instances from the prior, so it must be `informative`",
            ));
        }

        let exp = Experiment {
            graph: el.graph.clone(),
            true_mu,
            baseline_mu: None,
            rule,
            k: a.budget,
            algorithm,
            oracle_eval,
            reward_eval,
            competitor,
            baseline,
            horizon: run.horizon,
            repetitions: run.repetitions,
            seed: run.seed,
            config_hash: self.hash(),
        };
        Ok((exp, el))
    }

    /// Prior used to draw instances in a Bayesian sweep.
    pub fn sweep_prior(&self) -> PriorSpec {
        PriorSpec::Informative {
            strength: self.config.algorithm.prior_strength,
        }
    }

    fn etc_visits(&self, g: &Graph) -> Result<u64> {
        let a = &self.config.algorithm;
        if let Some(n) = a.etc_visits {
            if n == 0 {
                return Err(Error::config("algorithm.etc_visits: must be at least 1"));
            }
            return Ok(n);
        }
        let mode = match a.etc_mode {
            EtcModeName::Independent => EtcMode::Independent,
            EtcModeName::Dependent => EtcMode::Dependent {
                delta_min: a.delta_min.ok_or_else(|| {
                    Error::config(
                        "algorithm.delta_min: required by the dependent exploration length",
                    )
                })?,
            },
        };
        let c_tilde = a.c_tilde.unwrap_or(g.max_reach() as f64);
        etc_choose_n(
            mode,
            c_tilde,
            g.edge_count(),
            g.node_count(),
            a.budget,
            self.config.run.horizon as f64,
        )
        .map_err(|e| Error::config(format!("algorithm: exploration length: {e}")))
    }
}

/// Applies `section.key=value` or a bare `key=value` that names a key in
/// exactly one section. Values are read as TOML, falling back to a string.
fn apply_override(table: &mut toml::Table, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::config(format!("override `{item}`: expected key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_owned()));
    let (section, field) = match key.split_once('.') {
        Some((s, f)) => (s.to_owned(), f.to_owned()),
        None => {
            let owners: Vec<&str> = SECTIONS
                .iter()
                .copied()
                .filter(|s| section_has_key(s, key))
                .collect();
            match owners.as_slice() {
                [one] => (one.to_string(), key.to_owned()),
                [] => return Err(Error::config(format!("override `{item}`: unknown key `{key}`"))),
                many => {
                    return Err(Error::config(format!(
                        "override `{item}`: `{key}` is ambiguous between {many:?}; qualify it as section.{key}"
                    )))
                }
            }
        }
    };
    if !SECTIONS.contains(&section.as_str()) {
        return Err(Error::config(format!(
            "override `{item}`: unknown section `{section}`"
        )));
    }
    let entry = table
        .entry(section.clone())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let toml::Value::Table(sec) = entry else {
        return Err(Error::config(format!("`{section}` is not a table")));
    };
    sec.insert(field, value);
    Ok(())
}

fn section_has_key(section: &str, key: &str) -> bool {
    const GRAPH: &[&str] = &["path", "fixture"];
    const ENV: &[&str] = &["mu", "tie_rule", "evaluation", "exact_up_to", "mc_samples"];
    const ALG: &[&str] = &[
        "name",
        "budget",
        "epsilon",
        "alpha_rho",
        "oracle",
        "max_enum_edges",
        "fallback",
        "oracle_evaluation",
        "oracle_exact_up_to",
        "oracle_mc_samples",
        "etc_mode",
        "etc_visits",
        "c_tilde",
        "delta_min",
        "prior",
        "prior_strength",
    ];
    const COMP: &[&str] = &["policy", "budget", "nodes", "pool"];
    const RUN: &[&str] = &[
        "horizon",
        "repetitions",
        "seed",
        "output",
        "baseline",
        "alpha",
        "beta",
        "bayesian_instances",
    ];
    let keys = match section {
        "graph" => GRAPH,
        "environment" => ENV,
        "algorithm" => ALG,
        "competitor" => COMP,
        "run" => RUN,
        _ => return false,
    };
    keys.contains(&key)
}

/// `auto`, `exact`, `bipartite`, `mc` (using `samples`) or `mc:<samples>`.
pub fn parse_evaluation(
    spec: &str,
    g: &Graph,
    exact_up_to: usize,
    samples: usize,
) -> Result<Evaluation, String> {
    match spec {
        "auto" => Ok(Evaluation::auto(g, exact_up_to, samples)),
        "exact" => Ok(Evaluation::Exact),
        "bipartite" => Ok(Evaluation::Bipartite),
        "mc" => Ok(Evaluation::MonteCarlo { samples }),
        other => match other.strip_prefix("mc:").map(str::parse::<usize>) {
            Some(Ok(n)) if n > 0 => Ok(Evaluation::MonteCarlo { samples: n }),
            _ => Err(format!(
                "expected auto, exact, bipartite, mc or mc:<samples>, got `{other}`"
            )),
        },
    }
}

/// Source of the edge means.
#[derive(Debug, Clone, PartialEq)]
pub enum MuSpec {
    /// Probabilities carried by the graph's own edge list.
    Graph,
    /// Whitespace-separated probabilities, one per edge in edge order.
    File(PathBuf),
    WeightedCascade,
    Const(f64),
}

impl MuSpec {
    pub fn parse(spec: &str) -> Result<Self, String> {
        match spec {
            "file" => Ok(MuSpec::Graph),
            "wc" => Ok(MuSpec::WeightedCascade),
            _ => {
                if let Some(path) = spec.strip_prefix("file:") {
                    Ok(MuSpec::File(PathBuf::from(path)))
                } else if let Some(p) = spec.strip_prefix("const:") {
                    p.parse::<f64>()
                        .ok()
                        .filter(|p| (0.0..=1.0).contains(p))
                        .map(MuSpec::Const)
                        .ok_or_else(|| format!("`{p}` is not a probability"))
                } else {
                    Err(format!(
                        "expected file, file:<path>, wc or const:<p>, got `{spec}`"
                    ))
                }
            }
        }
    }

    pub fn resolve(&self, el: &EdgeList, base_dir: &Path) -> Result<ProbVector, String> {
        let m = el.graph.edge_count();
        match self {
            MuSpec::Graph => el
                .probs
                .clone()
                .ok_or_else(|| "the edge list carries no probabilities".to_owned()),
            MuSpec::WeightedCascade => Ok(ProbVector::weighted_cascade(&el.graph)),
            MuSpec::Const(p) => ProbVector::constant(m, *p).map_err(|e| e.to_string()),
            MuSpec::File(path) => {
                let path = base_dir.join(path);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let values = text
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| format!("{}: `{t}` is not a number", path.display()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if values.len() != m {
                    return Err(format!(
                        "{}: {} values for {m} edges",
                        path.display(),
                        values.len()
                    ));
                }
                ProbVector::new(values).map_err(|e| format!("{}: {e}", path.display()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEMO: &str = r#"
[graph]
fixture = "bipartite"

[algorithm]
name = "ofu"
budget = 2

[competitor]
policy = "rd"
budget = 2
pool = "sources"

[run]
horizon = 50
seed = 9
"#;

    fn load(overrides: &[&str]) -> Result<LoadedConfig> {
        let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        LoadedConfig::parse(DEMO, &o, PathBuf::new())
    }

    #[test]
    fn defaults_and_resolution() {
        let cfg = load(&[]).unwrap();
        let (exp, _) = cfg.resolve().unwrap();
        assert_eq!(exp.horizon, 50);
        assert_eq!(exp.rule, TieRule::BOverA);
        assert_eq!(exp.reward_eval, Evaluation::Bipartite);
        assert!(
            matches!(exp.competitor, CompetitorPolicy::Random { budget: 2, pool: Some(ref p) } if p.len() == 6)
        );
        assert_eq!(exp.config_hash.len(), 64);
    }

    #[test]
    fn overrides_apply_and_change_the_hash() {
        let base = load(&[]).unwrap();
        let cfg = load(&["horizon=10", "algorithm.alpha_rho=0.2", "tie_rule=a-over-b"]).unwrap();
        assert_eq!(cfg.config.run.horizon, 10);
        assert_eq!(cfg.config.algorithm.alpha_rho, 0.2);
        assert_eq!(cfg.config.environment.tie_rule, RuleName::AOverB);
        assert_ne!(cfg.hash(), base.hash());
    }

    #[test]
    fn override_errors() {
        assert!(load(&["budget=3"])
            .unwrap_err()
            .to_string()
            .contains("ambiguous"));
        assert!(load(&["nonsense=3"])
            .unwrap_err()
            .to_string()
            .contains("unknown key"));
        assert!(load(&["horizon"]).is_err());
    }

    #[test]
    fn field_errors_name_the_field() {
        let err = load(&["run.horizonn=3"]).unwrap_err().to_string();
        assert!(err.contains("horizonn"), "{err}");
        let err = load(&["tie_rule=sideways"]).unwrap_err().to_string();
        assert!(
            err.contains("tie_rule") || err.contains("sideways"),
            "{err}"
        );
        let err = load(&["algorithm.budget=40"])
            .unwrap()
            .resolve()
            .unwrap_err()
            .to_string();
        assert!(err.contains("algorithm.budget"), "{err}");
        let err = load(&["mu=const:2"])
            .unwrap()
            .resolve()
            .unwrap_err()
            .to_string();
        assert!(err.contains("environment.mu"), "{err}");
    }

    #[test]
    fn missing_graph_file_names_the_path() {
        let cfg = LoadedConfig::parse(
            "[graph]\npath = \"nowhere.txt\"\n[algorithm]\nname = \"ts\"\n",
            &[],
            PathBuf::from("/tmp/ocim-test-dir"),
        )
        .unwrap();
        let err = cfg.resolve().unwrap_err();
        assert!(err.is_config());
        assert!(err.to_string().contains("nowhere.txt"));
    }

    #[test]
    fn etc_length_defaults_to_the_independent_formula() {
        let cfg = load(&["name=etc", "horizon=3000"]).unwrap();
        let (exp, el) = cfg.resolve().unwrap();
        let c = el.graph.max_reach() as f64;
        let expected = etc_choose_n(EtcMode::Independent, c, 17, 18, 2, 3000.0).unwrap();
        assert_eq!(exp.algorithm, AlgorithmSpec::Etc { visits: expected });
    }

    #[test]
    fn mu_specs() {
        assert_eq!(MuSpec::parse("wc").unwrap(), MuSpec::WeightedCascade);
        assert_eq!(MuSpec::parse("const:0.25").unwrap(), MuSpec::Const(0.25));
        assert_eq!(
            MuSpec::parse("file:p.txt").unwrap(),
            MuSpec::File("p.txt".into())
        );
        assert!(MuSpec::parse("const:-1").is_err());
        assert!(MuSpec::parse("magic").is_err());
    }
}
