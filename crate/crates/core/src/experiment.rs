//! Config-driven experiments on grid worlds.
//!
//! An experiment config is a JSON document (paths relative to the config):
//!
//! ```json
//! {
//!   "grid": "four_rooms.json",
//!   "objective": { "kind": "entropy", "smoothing": 0.0 },
//!   "solvers": [
//!     { "name": "fp", "kind": "fictitious_play", "schedule": "fp", "iterations": 300 },
//!     { "name": "omd", "kind": "online_mirror_descent", "alpha": 0.01, "match_budget_of": "fp" }
//!   ],
//!   "exploitability_every": 1,
//!   "output_dir": "../out/entropy",
//!   "reference": { "tolerance": 1e-9, "max_iterations": 20000 },
//!   "record_wall_time": false
//! }
//! ```
//!
//! Each solver writes `metrics.csv`, `density.csv`, `log_density.pgm`,
//! `policy.csv` and `summary.json` into `<output_dir>/<name>/`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundMargins};
use crate::envs::{build_mdp, seeded_rng, GridSpec, ACTION_NAMES};
use crate::objectives::{finite_difference_gradient_with, gradient_error};
use crate::parallel::{self, ExecMode};
use crate::solvers::{
    fictitious_play, pairwise_frank_wolfe, RateSchedule, SolverConfig, SolverOptions, SolverTrace, StopRule,
};
use crate::{ConcaveObjective, Error, Objective, ObjectiveKind, Policy, PotentialMfg, Result, StateVector, Table};

/// Offset inside `ln(ρ + ε)` for heatmaps.
pub const LOG_DENSITY_OFFSET: f64 = 1e-12;

/// Objective selection; table-valued inputs name grid-spec fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveConfig {
    LinearRl {
        reward: String,
    },
    Entropy {
        #[serde(default)]
        smoothing: f64,
    },
    /// The field's values are weights, normalised into the target.
    MarginalMatching {
        target: String,
    },
    ConstrainedMdp {
        reward: String,
        cost: String,
        #[serde(default)]
        threshold: f64,
        #[serde(default = "default_penalty")]
        penalty: f64,
    },
    MultiObjective {
        rewards: Vec<String>,
        /// Defaults to 1 for every reward.
        #[serde(default)]
        targets: Vec<f64>,
    },
}

fn default_penalty() -> f64 {
    1.0
}

impl ObjectiveConfig {
    pub fn kind(&self) -> ObjectiveKind {
        match self {
            ObjectiveConfig::LinearRl { .. } => ObjectiveKind::LinearRl,
            ObjectiveConfig::Entropy { .. } => ObjectiveKind::Entropy,
            ObjectiveConfig::MarginalMatching { .. } => ObjectiveKind::MarginalMatching,
            ObjectiveConfig::ConstrainedMdp { .. } => ObjectiveKind::ConstrainedMdp,
            ObjectiveConfig::MultiObjective { .. } => ObjectiveKind::MultiObjective,
        }
    }

    pub fn build(&self, spec: &GridSpec) -> Result<Objective> {
        match self {
            ObjectiveConfig::LinearRl { reward } => Objective::linear_rl(spec.field_table(reward)?),
            ObjectiveConfig::Entropy { smoothing } => Objective::entropy(*smoothing),
            ObjectiveConfig::MarginalMatching { target } => {
                let weights = spec.field_vector(target)?;
                let total = weights.sum();
                if weights.iter().any(|w| *w < 0.0) || total <= 0.0 {
                    return Err(Error::Config(format!("target field {target:?} must be non-negative with positive mass")));
                }
                Objective::marginal_matching(&(weights / total))
            }
            ObjectiveConfig::ConstrainedMdp {
                reward,
                cost,
                threshold,
                penalty,
            } => Objective::constrained_mdp(spec.field_table(reward)?, spec.field_table(cost)?, *threshold, *penalty),
            ObjectiveConfig::MultiObjective { rewards, targets } => {
                let tables = rewards.iter().map(|r| spec.field_table(r)).collect::<Result<Vec<_>>>()?;
                let targets = if targets.is_empty() {
                    vec![1.0; tables.len()]
                } else {
                    targets.clone()
                };
                Objective::multi_objective(tables, targets)
            }
        }
    }
}

/// One solver entry. Exactly one of `iterations`, `budget` or
/// `match_budget_of` sets when it stops.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSpec {
    pub name: String,
    #[serde(flatten)]
    pub config: SolverConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Run to the final policy-evaluation count of the named solver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub match_budget_of: Option<String>,
    /// Overrides the experiment-wide exploitability cadence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exploitability_every: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceConfig {
    #[serde(default = "default_reference_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_reference_iterations")]
    pub max_iterations: usize,
}

fn default_reference_tolerance() -> f64 {
    1e-9
}

fn default_reference_iterations() -> usize {
    20_000
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        ReferenceConfig {
            tolerance: default_reference_tolerance(),
            max_iterations: default_reference_iterations(),
        }
    }
}

fn default_cadence() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: PathBuf,
    pub objective: ObjectiveConfig,
    pub solvers: Vec<SolverSpec>,
    #[serde(default = "default_cadence")]
    pub exploitability_every: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceConfig>,
    /// Wall times make `metrics.csv` non-reproducible, so they are written
    /// only on request.
    #[serde(default)]
    pub record_wall_time: bool,
    #[serde(skip)]
    base_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut config: ExperimentConfig = read_json(path)?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        config.validate()?;
        Ok(config)
    }

    /// Parses a config whose relative paths resolve against `base_dir`.
    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.base_dir = base_dir.into();
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.solvers.is_empty() {
            return Err(Error::Config("at least one solver is required".into()));
        }
        if self.exploitability_every == 0 {
            return Err(Error::Config("exploitability_every must be >= 1".into()));
        }
        let mut names = Vec::new();
        for s in &self.solvers {
            if names.contains(&s.name.as_str()) {
                return Err(Error::Config(format!("duplicate solver name {:?}", s.name)));
            }
            if s.name.is_empty() || s.name.contains(['/', '\\']) {
                return Err(Error::Config(format!("invalid solver name {:?}", s.name)));
            }
            names.push(&s.name);
            let stops = s.iterations.is_some() as u8 + s.budget.is_some() as u8 + s.match_budget_of.is_some() as u8;
            if stops != 1 {
                return Err(Error::Config(format!(
                    "solver {:?}: set exactly one of iterations, budget, match_budget_of",
                    s.name
                )));
            }
            if s.iterations == Some(0) || s.budget == Some(0) || s.exploitability_every == Some(0) {
                return Err(Error::Config(format!("solver {:?}: counts must be >= 1", s.name)));
            }
        }
        for s in &self.solvers {
            if let Some(target) = &s.match_budget_of {
                let Some(t) = self.solvers.iter().find(|o| &o.name == target) else {
                    return Err(Error::Config(format!("solver {:?} matches unknown solver {target:?}", s.name)));
                };
                if t.match_budget_of.is_some() {
                    return Err(Error::Config(format!("solver {:?}: budget matching cannot be chained", s.name)));
                }
            }
        }
        Ok(())
    }

    pub fn grid_path(&self) -> PathBuf {
        self.base_dir.join(&self.grid)
    }

    /// Output directory, resolved against the config location.
    pub fn output_path(&self) -> Option<PathBuf> {
        self.output_dir.as_ref().map(|d| self.base_dir.join(d))
    }

    pub fn load_grid(&self) -> Result<GridSpec> {
        GridSpec::load(self.grid_path())
    }

    pub fn build_mfg(&self) -> Result<(GridSpec, PotentialMfg)> {
        let spec = self.load_grid()?;
        let objective = self.objective.build(&spec)?;
        let mdp = build_mdp(&spec)?;
        Ok((spec, PotentialMfg::new(mdp, objective)?))
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Knobs that override a config at run time.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub output_dir: Option<PathBuf>,
    /// Runs every solver to this policy-evaluation budget instead.
    pub budget: Option<u64>,
    pub exec: ExecMode,
}

/// Optimum found by the pairwise Frank-Wolfe refiner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceOptimum {
    pub value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Runs pairwise Frank-Wolfe until the gap is at most `tolerance`.
pub fn compute_reference_optimum<O: ConcaveObjective>(
    mfg: &PotentialMfg<O>,
    reference: &ReferenceConfig,
) -> Result<ReferenceOptimum> {
    let opt = pairwise_frank_wolfe(mfg, reference.tolerance, reference.max_iterations)?;
    Ok(ReferenceOptimum {
        value: opt.value,
        gap: opt.gap,
        iterations: opt.iterations,
        converged: opt.converged,
    })
}

/// `F/ln|S|` for entropy, `F` otherwise.
pub fn normalized_objective(kind: ObjectiveKind, value: f64, n_states: usize) -> f64 {
    match kind {
        ObjectiveKind::Entropy if n_states > 1 => value / (n_states as f64).ln(),
        _ => value,
    }
}

#[derive(Debug, Clone)]
pub struct SolverOutput {
    pub name: String,
    pub directory: PathBuf,
    pub trace: SolverTrace,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub output_dir: PathBuf,
    pub solvers: Vec<SolverOutput>,
    pub reference: Option<ReferenceOptimum>,
}

impl ExperimentReport {
    pub fn solver(&self, name: &str) -> Option<&SolverOutput> {
        self.solvers.iter().find(|s| s.name == name)
    }
}

/// Runs every solver of `config` and writes the artifact directory.
pub fn run_experiment(config: &ExperimentConfig, overrides: &RunOverrides) -> Result<ExperimentReport> {
    let (spec, mfg) = config.build_mfg()?;
    let output_dir = overrides
        .output_dir
        .clone()
        .or_else(|| config.output_path())
        .ok_or_else(|| Error::Config("no output directory (set output_dir or --out)".into()))?;
    let traces = run_solvers(config, &mfg, overrides)?;

    for (_, trace) in &traces {
        if trace.records.windows(2).any(|w| w[1].policy_evals <= w[0].policy_evals) {
            return Err(Error::Invariant(format!("{}: policy_evals not strictly increasing", trace.solver)));
        }
        let residual = mfg.mdp.flow_residual(trace.occupancy.mu())?;
        if residual > crate::mdp::FLOW_TOL {
            return Err(Error::Invariant(format!("{}: final flow residual {residual:e}", trace.solver)));
        }
    }

    let reference = config
        .reference
        .as_ref()
        .map(|r| compute_reference_optimum(&mfg, r))
        .transpose()?;

    let log_densities: Vec<Vec<f64>> = traces
        .iter()
        .map(|(_, t)| t.occupancy.state_marginal().iter().map(|p| (p + LOG_DENSITY_OFFSET).ln()).collect())
        .collect();
    let lo = log_densities.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let hi = log_densities.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);

    fs::create_dir_all(&output_dir).map_err(|e| Error::io(&output_dir, e))?;
    let mut solvers = Vec::new();
    for ((name, trace), logs) in traces.into_iter().zip(&log_densities) {
        let dir = output_dir.join(&name);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        write_metrics(&dir.join("metrics.csv"), &trace, config, mfg.mdp.n_states())?;
        write_density(&dir.join("density.csv"), &spec, trace.occupancy.state_marginal())?;
        write_pgm(&dir.join("log_density.pgm"), &spec, &StateVector::from_vec(logs.clone()), lo, hi)?;
        write_policy(&dir.join("policy.csv"), &trace.policy)?;
        write_summary(&dir.join("summary.json"), &name, &trace, config, &mfg, reference.as_ref())?;
        solvers.push(SolverOutput {
            name,
            directory: dir,
            trace,
        });
    }
    Ok(ExperimentReport {
        output_dir,
        solvers,
        reference,
    })
}

/// Runs the solvers of `config` without writing anything; budget-matched
/// solvers run after the solvers they match.
pub fn run_solvers(
    config: &ExperimentConfig,
    mfg: &PotentialMfg,
    overrides: &RunOverrides,
) -> Result<Vec<(String, SolverTrace)>> {
    let options = |s: &SolverSpec| SolverOptions {
        exploitability_every: Some(s.exploitability_every.unwrap_or(config.exploitability_every)),
        keep_iterates: false,
        // solvers already fan out across each other
        exec: ExecMode::Sequential,
    };
    let run = |s: &SolverSpec, stop: StopRule| s.config.run(mfg, stop, &options(s));

    let (first, matched): (Vec<&SolverSpec>, Vec<&SolverSpec>) = config
        .solvers
        .iter()
        .partition(|s| overrides.budget.is_some() || s.match_budget_of.is_none());
    let stop_of = |s: &SolverSpec| match (overrides.budget, s.iterations, s.budget) {
        (Some(b), _, _) => StopRule::Budget(b),
        (None, Some(n), _) => StopRule::Iterations(n),
        (None, None, Some(b)) => StopRule::Budget(b),
        _ => unreachable!("validated"),
    };
    let mut done: BTreeMap<String, SolverTrace> = BTreeMap::new();
    for (s, trace) in first.iter().zip(parallel::map(overrides.exec, &first, |s| run(s, stop_of(s)))) {
        done.insert(s.name.clone(), trace?);
    }
    let budgets: Vec<u64> = matched
        .iter()
        .map(|s| done[s.match_budget_of.as_ref().expect("partitioned")].policy_evals())
        .collect();
    let second = parallel::map_range(overrides.exec, matched.len(), |i| run(matched[i], StopRule::Budget(budgets[i])));
    for (s, trace) in matched.iter().zip(second) {
        done.insert(s.name.clone(), trace?);
    }
    Ok(config
        .solvers
        .iter()
        .map(|s| (s.name.clone(), done.remove(&s.name).expect("every solver ran")))
        .collect())
}

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub const METRICS_HEADER: [&str; 6] = [
    "iteration",
    "policy_evals",
    "objective",
    "normalized_objective",
    "exploitability",
    "wall_time_s",
];

fn write_metrics(path: &Path, trace: &SolverTrace, config: &ExperimentConfig, n_states: usize) -> Result<()> {
    let kind = config.objective.kind();
    let mut w = csv_writer(path)?;
    w.write_record(METRICS_HEADER).map_err(csv_err(path))?;
    for r in &trace.records {
        w.write_record([
            r.iteration.to_string(),
            r.policy_evals.to_string(),
            format_float(r.objective),
            format_float(normalized_objective(kind, r.objective, n_states)),
            r.exploitability.map(format_float).unwrap_or_default(),
            if config.record_wall_time {
                format_float(r.wall_time_s)
            } else {
                String::new()
            },
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_density(path: &Path, spec: &GridSpec, rho: &StateVector) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in spec.to_grid(rho) {
        w.write_record(row.iter().map(|x| format_float(*x))).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Binary PGM (P5). Open cells map linearly from `[lo, hi]` to `0..=254`;
/// walls are 255.
pub fn write_pgm(path: &Path, spec: &GridSpec, values: &StateVector, lo: f64, hi: f64) -> Result<()> {
    let mut bytes = format!("P5\n{} {}\n255\n", spec.width, spec.height).into_bytes();
    for row in spec.to_grid(values) {
        for v in row {
            let level = if v.is_nan() {
                255
            } else if hi > lo {
                (254.0 * ((v - lo) / (hi - lo)).clamp(0.0, 1.0)).round() as u8
            } else {
                127
            };
            bytes.push(level);
        }
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))
}

/// Policy CSV: header `state,<action names>`, one row per state.
pub fn write_policy(path: &Path, policy: &Policy) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["state".to_string()];
    header.extend((0..policy.n_actions()).map(action_name));
    w.write_record(&header).map_err(csv_err(path))?;
    for s in 0..policy.n_states() {
        let mut row = vec![s.to_string()];
        row.extend((0..policy.n_actions()).map(|a| format_float(policy.prob(s, a))));
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn action_name(a: usize) -> String {
    ACTION_NAMES.get(a).map_or_else(|| format!("a{a}"), |s| s.to_string())
}

pub fn read_policy(path: &Path) -> Result<Policy> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(csv_err(path))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(csv_err(path))?;
        let mut fields = record.iter();
        let state: usize = fields
            .next()
            .and_then(|f| f.trim().parse().ok())
            .ok_or_else(|| Error::Config(format!("{}: row {i}: bad state index", path.display())))?;
        if state != i {
            return Err(Error::Config(format!("{}: row {i} has state {state}", path.display())));
        }
        let probs = fields
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Config(format!("{}: row {i}: {e}", path.display())))?;
        rows.push(probs);
    }
    Policy::from_rows(&rows)
}

#[derive(Serialize)]
struct Summary<'a> {
    solver: &'a str,
    algorithm: &'a str,
    iterations: usize,
    policy_evals: u64,
    exploitability_evals: u64,
    final_objective: f64,
    final_normalized_objective: f64,
    final_exploitability: Option<f64>,
    reference_optimum: Option<&'a ReferenceOptimum>,
    config: &'a ExperimentConfig,
}

fn write_summary(
    path: &Path,
    name: &str,
    trace: &SolverTrace,
    config: &ExperimentConfig,
    mfg: &PotentialMfg,
    reference: Option<&ReferenceOptimum>,
) -> Result<()> {
    let last = trace.last();
    let summary = Summary {
        solver: name,
        algorithm: trace.solver,
        iterations: trace.iterations(),
        policy_evals: last.policy_evals,
        exploitability_evals: trace.metric_evaluations,
        final_objective: last.objective,
        final_normalized_objective: normalized_objective(config.objective.kind(), last.objective, mfg.mdp.n_states()),
        final_exploitability: last.exploitability,
        reference_optimum: reference,
        config,
    };
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Gradient-check settings for one or more objectives on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradcheckConfig {
    pub grid: PathBuf,
    pub objectives: Vec<ObjectiveConfig>,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_gradcheck_tolerance")]
    pub tolerance: f64,
}

fn default_points() -> usize {
    20
}

fn default_step() -> f64 {
    1e-5
}

fn default_gradcheck_tolerance() -> f64 {
    1e-5
}

impl GradcheckConfig {
    /// Accepts either a gradcheck config or an experiment config, in which
    /// case its single objective is checked with default settings.
    pub fn load(path: impl AsRef<Path>) -> Result<(Self, PathBuf)> {
        let path = path.as_ref();
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        match serde_json::from_str::<GradcheckConfig>(&text) {
            Ok(c) => Ok((c, base)),
            Err(first) => match ExperimentConfig::from_json(&text, &base) {
                Ok(e) => Ok((
                    GradcheckConfig {
                        grid: e.grid,
                        objectives: vec![e.objective],
                        points: default_points(),
                        step: default_step(),
                        tolerance: default_gradcheck_tolerance(),
                    },
                    base,
                )),
                Err(_) => Err(Error::Json {
                    path: path.to_path_buf(),
                    source: first,
                }),
            },
        }
    }
}

/// Kink half-width excluded when checking the constrained objective.
pub const KINK_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradcheckReport {
    pub kind: ObjectiveKind,
    pub points: usize,
    pub max_error: f64,
}

/// Compares analytic and central-difference gradients at random interior
/// points of `Δ_{S×A}` (entries within a factor 3 of each other). Points
/// within [`KINK_MARGIN`] of the constrained objective's kink are resampled.
pub fn gradcheck(
    objective: &Objective,
    n_states: usize,
    n_actions: usize,
    points: usize,
    step: f64,
    seed: u64,
    mode: ExecMode,
) -> GradcheckReport {
    let mut rng = seeded_rng(seed);
    let mut max_error = 0.0f64;
    let mut taken = 0;
    let mut attempts = 0;
    while taken < points && attempts < 1000 * points.max(1) {
        attempts += 1;
        let mu = interior_point(&mut rng, n_states, n_actions);
        if let Objective::ConstrainedMdp(c) = objective {
            if c.excess(&mu).abs() <= KINK_MARGIN {
                continue;
            }
        }
        let numeric = finite_difference_gradient_with(mode, objective, &mu, step);
        max_error = max_error.max(gradient_error(&objective.gradient(&mu), &numeric));
        taken += 1;
    }
    GradcheckReport {
        kind: objective.kind(),
        points: taken,
        max_error,
    }
}

fn interior_point(rng: &mut impl Rng, n_states: usize, n_actions: usize) -> Table {
    let t = Table::from_fn(n_states, n_actions, |_, _| rng.random_range(0.5..1.5));
    let z = t.sum();
    t / z
}

/// Result of evaluating the Frank-Wolfe certificates along a trace.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheckReport {
    pub iterations: usize,
    pub beta: f64,
    pub analytic_beta: Option<f64>,
    pub radius: f64,
    pub reference: ReferenceOptimum,
    pub margins: Vec<BoundMargins>,
}

impl BoundCheckReport {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().map(BoundMargins::min).fold(f64::INFINITY, f64::min)
    }
}

/// Runs Frank-Wolfe (`η_t = 2/(t+1)`) for `iterations` steps, measures `β`
/// over the iterates and evaluates every certificate at every step.
pub fn bound_check<O: ConcaveObjective>(
    mfg: &PotentialMfg<O>,
    iterations: usize,
    reference: &ReferenceConfig,
    mode: ExecMode,
) -> Result<BoundCheckReport> {
    let options = SolverOptions {
        exploitability_every: Some(1),
        keep_iterates: true,
        exec: mode,
    };
    let initial = mfg.mdp.uniform_policy();
    let trace = fictitious_play(mfg, iterations, RateSchedule::Fw, &initial, &options)?;
    let reference = compute_reference_optimum(mfg, reference)?;
    let mut points = vec![mfg.mdp.occupancy_of_policy(&initial)?.mu().clone()];
    points.extend(bounds::tables(&trace.iterates));
    let beta = bounds::empirical_lipschitz(&mfg.objective, &points, mode);
    let radius = bounds::SIMPLEX_DIAMETER;
    let mut margins = Vec::with_capacity(trace.records.len());
    for r in &trace.records {
        let phi = r.exploitability.expect("measured every iteration");
        let sub = reference.value - r.objective;
        if sub < -crate::mfg::STALE_REFERENCE_TOL {
            return Err(Error::StaleReference {
                reference: reference.value,
                current: r.objective,
            });
        }
        margins.push(BoundMargins::compute(r.iteration, phi, sub, beta, radius));
    }
    Ok(BoundCheckReport {
        iterations,
        beta,
        analytic_beta: mfg.objective.smoothness(),
        radius,
        reference,
        margins,
    })
}
