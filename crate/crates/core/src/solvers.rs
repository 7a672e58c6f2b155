//! Iterative solvers for the potential game.
//!
//! Budget accounting: one policy evaluation is one exact solve of a
//! policy's Bellman equation. A best response costs every evaluation its
//! policy iteration performs; an OMD step costs exactly one; occupancy
//! solves are free. Exploitability is a metric and is accounted separately
//! in [`SolverTrace::metric_evaluations`].

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::mfg::PotentialMfg;
use crate::parallel::{self, ExecMode};
use crate::{ConcaveObjective, Error, OccupancyMeasure, Policy, Result, Table};

/// Step sizes `η_t` for `t ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateSchedule {
    /// `η_t = 1/(t+1)`: plain averaging of best responses.
    Fp,
    /// `η_t = 2/(t+1)`.
    Fw,
    Constant(f64),
}

impl RateSchedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RateSchedule::Constant(eta) if !(eta > 0.0 && eta <= 1.0) => {
                Err(Error::InvalidArgument(format!("constant rate {eta} outside (0, 1]")))
            }
            _ => Ok(()),
        }
    }

    /// Step size of iteration `t` (1-based).
    pub fn rate(&self, t: usize) -> f64 {
        debug_assert!(t >= 1);
        match *self {
            RateSchedule::Fp => 1.0 / (t as f64 + 1.0),
            RateSchedule::Fw => 2.0 / (t as f64 + 1.0),
            RateSchedule::Constant(eta) => eta,
        }
    }
}

/// One row of a solver trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    /// Cumulative solver policy evaluations.
    pub policy_evals: u64,
    pub objective: f64,
    pub exploitability: Option<f64>,
    /// Solver time since the start of the run, exploitability excluded.
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct SolverTrace {
    pub solver: &'static str,
    /// `iterations + 1` records, the first one for the initial policy.
    pub records: Vec<TraceRecord>,
    pub policy: Policy,
    pub occupancy: OccupancyMeasure,
    /// Populations after every iteration, when requested.
    pub iterates: Vec<OccupancyMeasure>,
    pub metric_evaluations: u64,
}

impl SolverTrace {
    pub fn iterations(&self) -> usize {
        self.records.len() - 1
    }

    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("trace has an initial record")
    }

    pub fn policy_evals(&self) -> u64 {
        self.last().policy_evals
    }

    pub fn final_exploitability(&self) -> Option<f64> {
        self.last().exploitability
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Measure exploitability every `k` iterations (and always at the
    /// initial and final records); `None` disables it.
    pub exploitability_every: Option<usize>,
    pub keep_iterates: bool,
    pub exec: ExecMode,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            exploitability_every: Some(1),
            keep_iterates: false,
            exec: ExecMode::default(),
        }
    }
}

impl SolverOptions {
    pub fn without_exploitability() -> Self {
        SolverOptions {
            exploitability_every: None,
            ..Default::default()
        }
    }
}

/// A solver that advances one iteration at a time.
pub trait Solver {
    fn name(&self) -> &'static str;

    /// Runs one iteration and returns the policy evaluations it used.
    fn step(&mut self) -> Result<u64>;

    /// Current population occupancy.
    fn occupancy(&self) -> &OccupancyMeasure;

    /// Policy the solver would return now.
    fn policy(&self) -> Policy;
}

/// Fictitious Play / Frank-Wolfe on the occupancy polytope:
/// `μ̄_{t+1} = (1-η_{t+1}) μ̄_t + η_{t+1} μ_{BR(∇F(μ̄_t))}`.
pub struct FictitiousPlay<'a, O: ConcaveObjective> {
    mfg: &'a PotentialMfg<O>,
    schedule: RateSchedule,
    average: OccupancyMeasure,
    t: usize,
}

impl<'a, O: ConcaveObjective> FictitiousPlay<'a, O> {
    pub fn new(mfg: &'a PotentialMfg<O>, schedule: RateSchedule, initial: &Policy) -> Result<Self> {
        schedule.validate()?;
        Ok(FictitiousPlay {
            mfg,
            schedule,
            average: mfg.mdp.occupancy_of_policy(initial)?,
            t: 0,
        })
    }
}

impl<O: ConcaveObjective> Solver for FictitiousPlay<'_, O> {
    fn name(&self) -> &'static str {
        match self.schedule {
            RateSchedule::Fp => "fp",
            RateSchedule::Fw => "fw",
            RateSchedule::Constant(_) => "fp_constant",
        }
    }

    fn step(&mut self) -> Result<u64> {
        let (lmo, _) = self.mfg.linear_maximization(&self.average)?;
        let eta = self.schedule.rate(self.t + 1);
        self.average = self.average.mix(&lmo.vertex, eta);
        self.t += 1;
        Ok(lmo.best_response.evaluations)
    }

    fn occupancy(&self) -> &OccupancyMeasure {
        &self.average
    }

    fn policy(&self) -> Policy {
        self.average.policy()
    }
}

/// A non-stationary mixture: sample component `i` with probability `α_i`
/// once, then follow it for the whole trajectory.
#[derive(Debug, Clone)]
pub struct MixturePolicy {
    pub components: Vec<Policy>,
    pub weights: Vec<f64>,
    component_occupancies: Vec<OccupancyMeasure>,
}

impl MixturePolicy {
    /// `Σ α_i μ_{π_i}`.
    pub fn occupancy(&self) -> OccupancyMeasure {
        let mut mu = Table::zeros(self.component_occupancies[0].mu().nrows(), self.component_occupancies[0].mu().ncols());
        for (w, occ) in self.weights.iter().zip(&self.component_occupancies) {
            mu += occ.mu() * *w;
        }
        OccupancyMeasure::from_parts(mu)
    }

    pub fn component_occupancies(&self) -> &[OccupancyMeasure] {
        &self.component_occupancies
    }

    /// Stationary policy with the same occupancy.
    pub fn stationary_policy(&self) -> Policy {
        self.occupancy().policy()
    }
}

/// The explicit mixture formulation: keep every best response and its
/// weight, `α_{t+1} = ((1-η)α_t, η)`.
pub struct MixtureFrankWolfe<'a, O: ConcaveObjective> {
    mfg: &'a PotentialMfg<O>,
    schedule: RateSchedule,
    mixture: MixturePolicy,
    current: OccupancyMeasure,
    t: usize,
}

impl<'a, O: ConcaveObjective> MixtureFrankWolfe<'a, O> {
    pub fn new(mfg: &'a PotentialMfg<O>, schedule: RateSchedule, initial: &Policy) -> Result<Self> {
        schedule.validate()?;
        let occ = mfg.mdp.occupancy_of_policy(initial)?;
        Ok(MixtureFrankWolfe {
            mfg,
            schedule,
            mixture: MixturePolicy {
                components: vec![initial.clone()],
                weights: vec![1.0],
                component_occupancies: vec![occ.clone()],
            },
            current: occ,
            t: 0,
        })
    }

    pub fn mixture(&self) -> &MixturePolicy {
        &self.mixture
    }
}

impl<O: ConcaveObjective> Solver for MixtureFrankWolfe<'_, O> {
    fn name(&self) -> &'static str {
        "mixture"
    }

    fn step(&mut self) -> Result<u64> {
        let (lmo, _) = self.mfg.linear_maximization(&self.current)?;
        let eta = self.schedule.rate(self.t + 1);
        for w in &mut self.mixture.weights {
            *w *= 1.0 - eta;
        }
        self.mixture.weights.push(eta);
        self.mixture.components.push(lmo.best_response.policy);
        self.mixture.component_occupancies.push(lmo.vertex);
        self.current = self.mixture.occupancy();
        self.t += 1;
        Ok(lmo.best_response.evaluations)
    }

    fn occupancy(&self) -> &OccupancyMeasure {
        &self.current
    }

    fn policy(&self) -> Policy {
        self.current.policy()
    }
}

/// Online Mirror Descent: `Q_{t+1} = Q_t + α q_{π_t, ∇F(μ_{π_t})}`,
/// `π_{t+1} = softmax(Q_{t+1})`. One policy evaluation per step.
pub struct OnlineMirrorDescent<'a, O: ConcaveObjective> {
    mfg: &'a PotentialMfg<O>,
    alpha: f64,
    cumulative_q: Table,
    policy: Policy,
    occupancy: OccupancyMeasure,
}

impl<'a, O: ConcaveObjective> OnlineMirrorDescent<'a, O> {
    pub fn new(mfg: &'a PotentialMfg<O>, alpha: f64, initial: &Policy) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("OMD step {alpha} must be > 0")));
        }
        Ok(OnlineMirrorDescent {
            mfg,
            alpha,
            cumulative_q: mfg.mdp.zeros(),
            policy: initial.clone(),
            occupancy: mfg.mdp.occupancy_of_policy(initial)?,
        })
    }

    pub fn cumulative_q(&self) -> &Table {
        &self.cumulative_q
    }
}

impl<O: ConcaveObjective> Solver for OnlineMirrorDescent<'_, O> {
    fn name(&self) -> &'static str {
        "omd"
    }

    fn step(&mut self) -> Result<u64> {
        let reward = self.mfg.population_reward(&self.occupancy);
        let q = self.mfg.mdp.policy_evaluation(&self.policy, &reward)?;
        self.cumulative_q += q.values * self.alpha;
        self.policy = Policy::softmax(&self.cumulative_q);
        self.occupancy = self.mfg.mdp.occupancy_of_policy(&self.policy)?;
        Ok(1)
    }

    fn occupancy(&self) -> &OccupancyMeasure {
        &self.occupancy
    }

    fn policy(&self) -> Policy {
        self.policy.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    Iterations(usize),
    /// Step until the cumulative evaluation count meets or exceeds the
    /// budget.
    Budget(u64),
}

/// Runs `solver` to `stop`, recording a trace.
pub fn drive<O: ConcaveObjective, S: Solver>(
    mfg: &PotentialMfg<O>,
    solver: &mut S,
    stop: StopRule,
    options: &SolverOptions,
) -> Result<SolverTrace> {
    match stop {
        StopRule::Iterations(0) => return Err(Error::InvalidArgument("iterations must be >= 1".into())),
        StopRule::Budget(0) => return Err(Error::InvalidArgument("budget must be >= 1".into())),
        _ => {}
    }
    let start = Instant::now();
    let mut records = vec![TraceRecord {
        iteration: 0,
        policy_evals: 0,
        objective: mfg.objective_value(solver.occupancy()),
        exploitability: None,
        wall_time_s: 0.0,
    }];
    let every = options.exploitability_every.map(|k| k.max(1));
    let mut probes: Vec<(usize, Policy)> = Vec::new();
    if every.is_some() {
        probes.push((0, solver.policy()));
    }
    let mut iterates = Vec::new();
    let mut evals = 0u64;
    let mut t = 0usize;
    loop {
        let done = match stop {
            StopRule::Iterations(n) => t >= n,
            StopRule::Budget(b) => evals >= b,
        };
        if done {
            break;
        }
        evals += solver.step()?;
        t += 1;
        records.push(TraceRecord {
            iteration: t,
            policy_evals: evals,
            objective: mfg.objective_value(solver.occupancy()),
            exploitability: None,
            wall_time_s: start.elapsed().as_secs_f64(),
        });
        if options.keep_iterates {
            iterates.push(solver.occupancy().clone());
        }
        if let Some(k) = every {
            if t.is_multiple_of(k) {
                probes.push((t, solver.policy()));
            }
        }
    }
    if every.is_some() && probes.last().map(|p| p.0) != Some(t) {
        probes.push((t, solver.policy()));
    }

    let measured = parallel::map(options.exec, &probes, |(_, pi)| mfg.exploitability(pi));
    let mut metric_evaluations = 0;
    for ((index, _), phi) in probes.iter().zip(measured) {
        let phi = phi?;
        metric_evaluations += phi.best_response.evaluations;
        records[*index].exploitability = Some(phi.value);
    }

    Ok(SolverTrace {
        solver: solver.name(),
        records,
        policy: solver.policy(),
        occupancy: solver.occupancy().clone(),
        iterates,
        metric_evaluations,
    })
}

/// Fictitious Play with the given schedule; returns `π̄_T = μ̄_T/ρ̄_T`.
pub fn fictitious_play<O: ConcaveObjective>(
    mfg: &PotentialMfg<O>,
    iterations: usize,
    schedule: RateSchedule,
    initial: &Policy,
    options: &SolverOptions,
) -> Result<SolverTrace> {
    let mut solver = FictitiousPlay::new(mfg, schedule, initial)?;
    drive(mfg, &mut solver, StopRule::Iterations(iterations), options)
}

/// The mixture formulation; with the `Fp` schedule its occupancy equals the
/// Fictitious Play average.
pub fn mixture_frank_wolfe<O: ConcaveObjective>(
    mfg: &PotentialMfg<O>,
    iterations: usize,
    schedule: RateSchedule,
    initial: &Policy,
    options: &SolverOptions,
) -> Result<(MixturePolicy, SolverTrace)> {
    let mut solver = MixtureFrankWolfe::new(mfg, schedule, initial)?;
    let trace = drive(mfg, &mut solver, StopRule::Iterations(iterations), options)?;
    Ok((solver.mixture.clone(), trace))
}

pub fn online_mirror_descent<O: ConcaveObjective>(
    mfg: &PotentialMfg<O>,
    iterations: usize,
    alpha: f64,
    initial: &Policy,
    options: &SolverOptions,
) -> Result<SolverTrace> {
    let mut solver = OnlineMirrorDescent::new(mfg, alpha, initial)?;
    drive(mfg, &mut solver, StopRule::Iterations(iterations), options)
}

/// `max_{μ∈M} ⟨μ - μ_t, ∇F(μ_t)⟩`.
pub fn frank_wolfe_gap<O: ConcaveObjective>(mfg: &PotentialMfg<O>, mu: &OccupancyMeasure) -> Result<f64> {
    mfg.frank_wolfe_gap(mu)
}

/// Solver selection for budgeted runs. All solvers start from the uniform
/// policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverConfig {
    FictitiousPlay { schedule: RateSchedule },
    Mixture { schedule: RateSchedule },
    OnlineMirrorDescent { alpha: f64 },
}

impl SolverConfig {
    pub fn run<O: ConcaveObjective>(&self, mfg: &PotentialMfg<O>, stop: StopRule, options: &SolverOptions) -> Result<SolverTrace> {
        let initial = mfg.mdp.uniform_policy();
        match *self {
            SolverConfig::FictitiousPlay { schedule } => {
                drive(mfg, &mut FictitiousPlay::new(mfg, schedule, &initial)?, stop, options)
            }
            SolverConfig::Mixture { schedule } => drive(mfg, &mut MixtureFrankWolfe::new(mfg, schedule, &initial)?, stop, options),
            SolverConfig::OnlineMirrorDescent { alpha } => {
                drive(mfg, &mut OnlineMirrorDescent::new(mfg, alpha, &initial)?, stop, options)
            }
        }
    }
}

/// Runs until the cumulative policy-evaluation count meets or exceeds
/// `budget`.
pub fn run_to_budget<O: ConcaveObjective>(
    mfg: &PotentialMfg<O>,
    config: &SolverConfig,
    budget: u64,
    options: &SolverOptions,
) -> Result<SolverTrace> {
    config.run(mfg, StopRule::Budget(budget), options)
}

/// High-precision maximiser found by [`pairwise_frank_wolfe`].
#[derive(Debug, Clone)]
pub struct RefinedOptimum {
    pub occupancy: OccupancyMeasure,
    pub policy: Policy,
    pub value: f64,
    /// Frank-Wolfe gap at the returned point.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    pub evaluations: u64,
}

struct Atom {
    key: Option<Vec<usize>>,
    mu: Table,
    weight: f64,
}

const LINE_SEARCH_STEPS: usize = 200;

/// Pairwise Frank-Wolfe with exact line search over the occupancy polytope.
///
/// Weight moves from the worst active vertex to the best-response vertex.
/// The line search never decreases `F`, so the returned point is the best
/// one visited.
pub fn pairwise_frank_wolfe<O: ConcaveObjective>(
    mfg: &PotentialMfg<O>,
    tolerance: f64,
    max_iterations: usize,
) -> Result<RefinedOptimum> {
    let start = mfg.mdp.occupancy_of_policy(&mfg.mdp.uniform_policy())?;
    let mut atoms = vec![Atom {
        key: None,
        mu: start.mu().clone(),
        weight: 1.0,
    }];
    let mut x = start;
    let mut evaluations = 0u64;
    let mut iterations = 0usize;
    let gap = loop {
        let (lmo, gap) = mfg.linear_maximization(&x)?;
        evaluations += lmo.best_response.evaluations;
        if gap <= tolerance || iterations >= max_iterations {
            break gap;
        }
        iterations += 1;

        let grad = lmo.reward;
        let (away, _) = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (i, a.mu.dot(&grad)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("active set is never empty");
        let key = lmo.best_response.actions.clone();
        let toward = match atoms.iter().position(|a| a.key.as_ref() == Some(&key)) {
            Some(i) => i,
            None => {
                atoms.push(Atom {
                    key: Some(key),
                    mu: lmo.vertex.mu().clone(),
                    weight: 0.0,
                });
                atoms.len() - 1
            }
        };
        if toward == away {
            break gap;
        }
        let direction = &atoms[toward].mu - &atoms[away].mu;
        let max_step = atoms[away].weight;
        let step = line_search(&mfg.objective, x.mu(), &direction, max_step);
        atoms[toward].weight += step;
        if step >= max_step {
            atoms[away].weight = 0.0;
        } else {
            atoms[away].weight -= step;
        }
        atoms.retain(|a| a.weight > 0.0);
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        let mut mu = Table::zeros(x.mu().nrows(), x.mu().ncols());
        for a in &mut atoms {
            a.weight /= total;
            mu += &a.mu * a.weight;
        }
        x = OccupancyMeasure::from_parts(mu);
    };
    Ok(RefinedOptimum {
        policy: x.policy(),
        value: mfg.objective_value(&x),
        occupancy: x,
        gap,
        iterations,
        converged: gap <= tolerance,
        evaluations,
    })
}

/// Maximises the concave `F(x + γd)` over `γ ∈ [0, max_step]` by bisection
/// on the directional derivative.
fn line_search<O: ConcaveObjective + ?Sized>(objective: &O, x: &Table, direction: &Table, max_step: f64) -> f64 {
    let slope = |g: f64| objective.gradient(&(x + direction * g)).dot(direction);
    if slope(max_step) >= 0.0 {
        return max_step;
    }
    let (mut lo, mut hi) = (0.0, max_step);
    for _ in 0..LINE_SEARCH_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the objective value decides between the bracket ends
    let value = |g: f64| objective.value(&(x + direction * g));
    if value(hi) > value(lo) {
        hi
    } else {
        lo
    }
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::envs::random_mdp;
    use crate::{Objective, StateVector, TabularMdp};

    fn linear(seed: u64) -> PotentialMfg {
        let mdp = random_mdp(6, 3, seed);
        let r = Table::from_fn(6, 3, |s, a| ((s * 5 + a * 7) % 4) as f64 / 4.0);
        PotentialMfg::new(mdp, Objective::linear_rl(r).unwrap()).unwrap()
    }

    #[test]
    fn schedules() {
        assert_eq!(RateSchedule::Fp.rate(1), 0.5);
        assert_eq!(RateSchedule::Fw.rate(1), 1.0);
        assert_eq!(RateSchedule::Fw.rate(3), 0.5);
        assert_eq!(RateSchedule::Constant(0.1).rate(7), 0.1);
        assert!(RateSchedule::Constant(0.0).validate().is_err());
        assert!(RateSchedule::Constant(1.5).validate().is_err());
    }

    #[test]
    fn fw_schedule_solves_linear_in_one_step() {
        let mfg = linear(1);
        let trace = fictitious_play(&mfg, 1, RateSchedule::Fw, &mfg.mdp.uniform_policy(), &SolverOptions::default()).unwrap();
        assert!(trace.final_exploitability().unwrap().abs() <= 1e-10);
        assert_eq!(trace.records.len(), 2);
    }

    #[test]
    fn single_state_is_always_at_equilibrium() {
        let mdp = TabularMdp::new(&[vec![vec![1.0], vec![1.0]]], 0.9, &[1.0]).unwrap();
        let mfg = PotentialMfg::new(mdp, Objective::entropy(0.0).unwrap()).unwrap();
        let pi = mfg.mdp.uniform_policy();
        let trace = fictitious_play(&mfg, 5, RateSchedule::Fp, &pi, &SolverOptions::default()).unwrap();
        for r in &trace.records {
            assert!(r.exploitability.unwrap().abs() <= 1e-12);
            assert!(r.objective.abs() <= 1e-15);
        }
    }

    #[test]
    fn rejects_zero_iterations_and_bad_alpha() {
        let mfg = linear(2);
        let pi = mfg.mdp.uniform_policy();
        let opts = SolverOptions::default();
        assert!(fictitious_play(&mfg, 0, RateSchedule::Fp, &pi, &opts).is_err());
        assert!(online_mirror_descent(&mfg, 0, 0.01, &pi, &opts).is_err());
        assert!(online_mirror_descent(&mfg, 3, 0.0, &pi, &opts).is_err());
        assert!(online_mirror_descent(&mfg, 3, -1.0, &pi, &opts).is_err());
        assert!(mixture_frank_wolfe(&mfg, 0, RateSchedule::Fp, &pi, &opts).is_err());
    }

    #[test]
    fn mixture_initial_state_and_geometric_decay() {
        let mfg = linear(3);
        let pi = mfg.mdp.uniform_policy();
        let solver = MixtureFrankWolfe::new(&mfg, RateSchedule::Fp, &pi).unwrap();
        assert_eq!(solver.mixture().weights, vec![1.0]);
        assert_eq!(solver.mixture().components, vec![pi.clone()]);
        assert_eq!(solver.occupancy(), &mfg.mdp.occupancy_of_policy(&pi).unwrap());

        let (mix, _) = mixture_frank_wolfe(&mfg, 10, RateSchedule::Constant(0.1), &pi, &SolverOptions::without_exploitability()).unwrap();
        assert_abs_diff_eq!(mix.weights[0], 0.9f64.powi(10), epsilon = 1e-15);
        assert_abs_diff_eq!(mix.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn omd_with_zero_reward_stays_uniform() {
        let mdp = random_mdp(4, 3, 4);
        let mfg = PotentialMfg::new(mdp, Objective::linear_rl(Table::zeros(4, 3)).unwrap()).unwrap();
        let mut omd = OnlineMirrorDescent::new(&mfg, 0.01, &mfg.mdp.uniform_policy()).unwrap();
        for _ in 0..5 {
            omd.step().unwrap();
            assert_eq!(omd.policy(), Policy::uniform(4, 3));
        }
    }

    #[test]
    fn omd_single_step_closed_form() {
        // one state, two actions, r = (1, 0), γ = 0.5, π₀ uniform:
        // v = 0.5/(1-0.5) = 1, q = r + γv = (1.5, 0.5)
        let mdp = TabularMdp::new(&[vec![vec![1.0], vec![1.0]]], 0.5, &[1.0]).unwrap();
        let r = Table::from_row_slice(1, 2, &[1.0, 0.0]);
        let mfg = PotentialMfg::new(mdp, Objective::linear_rl(r).unwrap()).unwrap();
        let mut omd = OnlineMirrorDescent::new(&mfg, 0.01, &mfg.mdp.uniform_policy()).unwrap();
        assert_eq!(omd.step().unwrap(), 1);
        assert_abs_diff_eq!(omd.cumulative_q()[(0, 0)], 0.015, epsilon = 1e-15);
        assert_abs_diff_eq!(omd.cumulative_q()[(0, 1)], 0.005, epsilon = 1e-15);
        let expected = 1.0 / (1.0 + (-0.01f64).exp());
        assert_abs_diff_eq!(omd.policy().prob(0, 0), expected, epsilon = 1e-15);
        assert!(omd.policy().prob(0, 0) > 0.5);
    }

    #[test]
    fn budgets() {
        let mfg = linear(5);
        let opts = SolverOptions::without_exploitability();
        let omd = run_to_budget(&mfg, &SolverConfig::OnlineMirrorDescent { alpha: 0.01 }, 37, &opts).unwrap();
        assert_eq!(omd.iterations(), 37);
        assert_eq!(omd.policy_evals(), 37);
        let fp = run_to_budget(&mfg, &SolverConfig::FictitiousPlay { schedule: RateSchedule::Fp }, 37, &opts).unwrap();
        assert!(fp.iterations() <= 37);
        assert!(fp.policy_evals() >= 37);
        assert!(run_to_budget(&mfg, &SolverConfig::FictitiousPlay { schedule: RateSchedule::Fp }, 0, &opts).is_err());
    }

    #[test]
    fn trace_shape_and_cadence() {
        let mdp = random_mdp(5, 2, 6);
        let mfg = PotentialMfg::new(mdp, Objective::entropy(0.0).unwrap()).unwrap();
        let opts = SolverOptions {
            exploitability_every: Some(3),
            keep_iterates: true,
            exec: ExecMode::Sequential,
        };
        let trace = fictitious_play(&mfg, 7, RateSchedule::Fp, &mfg.mdp.uniform_policy(), &opts).unwrap();
        assert_eq!(trace.records.len(), 8);
        assert_eq!(trace.iterates.len(), 7);
        let measured: Vec<usize> = trace
            .records
            .iter()
            .filter(|r| r.exploitability.is_some())
            .map(|r| r.iteration)
            .collect();
        assert_eq!(measured, vec![0, 3, 6, 7]);
        assert!(trace.records.windows(2).all(|w| w[1].policy_evals > w[0].policy_evals));
        assert!(trace.metric_evaluations > 0);
    }

    #[test]
    fn pairwise_reaches_tight_gap_on_random_mdp() {
        let mdp = random_mdp(5, 3, 7);
        let target = StateVector::from_vec(vec![0.4, 0.3, 0.1, 0.1, 0.1]);
        for obj in [Objective::entropy(0.0).unwrap(), Objective::marginal_matching(&target).unwrap()] {
            let mfg = PotentialMfg::new(mdp.clone(), obj).unwrap();
            let opt = pairwise_frank_wolfe(&mfg, 1e-10, 20_000).unwrap();
            assert!(opt.converged, "gap {}", opt.gap);
            mfg.mdp.check_occupancy(&opt.occupancy).unwrap();
            let phi = mfg.exploitability(&opt.policy).unwrap().value;
            assert!(phi <= 1e-9, "{phi}");
        }
    }

    #[test]
    fn pairwise_on_linear_matches_best_response() {
        let mfg = linear(8);
        let r = mfg.population_reward(&mfg.mdp.occupancy_of_policy(&mfg.mdp.uniform_policy()).unwrap());
        let br = mfg.mdp.best_response(&r).unwrap();
        let opt = pairwise_frank_wolfe(&mfg, 1e-12, 100).unwrap();
        assert_abs_diff_eq!(opt.value, mfg.mdp.mdp_value(&br.policy, &r).unwrap(), epsilon = 1e-12);
    }
}
