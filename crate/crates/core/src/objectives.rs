//! Concave utilities `F: Δ_{S×A} → ℝ` with analytic gradients.
//!
//! Values and gradients take the raw `S×A` table so they can be evaluated
//! anywhere on the simplex, not only on the Bellman-flow polytope.

use serde::{Deserialize, Serialize};

use crate::mdp::state_marginal;
use crate::parallel::{self, ExecMode};
use crate::{Error, Result, StateVector, Table};

/// Floor applied to densities inside logarithms.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    LinearRl,
    Entropy,
    MarginalMatching,
    ConstrainedMdp,
    MultiObjective,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 5] = [
        ObjectiveKind::LinearRl,
        ObjectiveKind::Entropy,
        ObjectiveKind::MarginalMatching,
        ObjectiveKind::ConstrainedMdp,
        ObjectiveKind::MultiObjective,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::LinearRl => "linear_rl",
            ObjectiveKind::Entropy => "entropy",
            ObjectiveKind::MarginalMatching => "marginal_matching",
            ObjectiveKind::ConstrainedMdp => "constrained_mdp",
            ObjectiveKind::MultiObjective => "multi_objective",
        }
    }
}

/// A concave function of the state-action occupancy measure.
///
/// `gradient(μ)` doubles as the population reward of the potential game.
pub trait ConcaveObjective: Send + Sync {
    fn kind(&self) -> ObjectiveKind;

    fn value(&self, mu: &Table) -> f64;

    fn gradient(&self, mu: &Table) -> Table;

    /// A known Euclidean Lipschitz constant of the gradient, if there is one.
    fn smoothness(&self) -> Option<f64> {
        None
    }
}

/// `F(μ) = ⟨μ, r⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRl {
    pub reward: Table,
}

impl ConcaveObjective for LinearRl {
    fn kind(&self) -> ObjectiveKind {
        ObjectiveKind::LinearRl
    }

    fn value(&self, mu: &Table) -> f64 {
        mu.dot(&self.reward)
    }

    fn gradient(&self, _mu: &Table) -> Table {
        self.reward.clone()
    }

    fn smoothness(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// State entropy `-⟨ρ, ln ρ⟩`, or the smoothed `-⟨ρ, ln(ρ+ε)⟩` for `ε > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Entropy {
    pub smoothing: f64,
}

impl ConcaveObjective for Entropy {
    fn kind(&self) -> ObjectiveKind {
        ObjectiveKind::Entropy
    }

    fn value(&self, mu: &Table) -> f64 {
        let eps = self.smoothing;
        state_marginal(mu)
            .iter()
            .map(|&p| {
                if eps > 0.0 {
                    -p * (p + eps).ln()
                } else if p > 0.0 {
                    -p * p.ln()
                } else {
                    0.0
                }
            })
            .sum()
    }

    fn gradient(&self, mu: &Table) -> Table {
        let eps = self.smoothing;
        let per_state = state_marginal(mu).map(|p| {
            if eps > 0.0 {
                -(p + eps).ln() - p / (p + eps)
            } else {
                -p.max(LOG_FLOOR).ln() - 1.0
            }
        });
        broadcast(&per_state, mu.ncols())
    }
}

/// `-KL(ρ‖ρ*)` for a target state distribution `ρ*`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalMatching {
    log_target: StateVector,
}

impl MarginalMatching {
    pub fn target_log_density(&self) -> &StateVector {
        &self.log_target
    }
}

impl ConcaveObjective for MarginalMatching {
    fn kind(&self) -> ObjectiveKind {
        ObjectiveKind::MarginalMatching
    }

    fn value(&self, mu: &Table) -> f64 {
        state_marginal(mu)
            .iter()
            .zip(self.log_target.iter())
            .map(|(&p, &lt)| if p > 0.0 { -p * (p.ln() - lt) } else { 0.0 })
            .sum()
    }

    fn gradient(&self, mu: &Table) -> Table {
        let rho = state_marginal(mu);
        let per_state = StateVector::from_iterator(
            rho.len(),
            rho.iter()
                .zip(self.log_target.iter())
                .map(|(&p, &lt)| lt - p.max(LOG_FLOOR).ln() - 1.0),
        );
        broadcast(&per_state, mu.ncols())
    }
}

/// `⟨μ, r⟩ - (λ/2)·max(0, ⟨μ, c⟩ - C)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedMdp {
    pub reward: Table,
    pub cost: Table,
    pub threshold: f64,
    pub penalty: f64,
}

impl ConstrainedMdp {
    /// `⟨μ, c⟩ - C`; the penalty is active only when this is positive.
    pub fn excess(&self, mu: &Table) -> f64 {
        mu.dot(&self.cost) - self.threshold
    }
}

impl ConcaveObjective for ConstrainedMdp {
    fn kind(&self) -> ObjectiveKind {
        ObjectiveKind::ConstrainedMdp
    }

    fn value(&self, mu: &Table) -> f64 {
        let excess = self.excess(mu).max(0.0);
        mu.dot(&self.reward) - 0.5 * self.penalty * excess * excess
    }

    fn gradient(&self, mu: &Table) -> Table {
        let excess = self.excess(mu);
        if excess > 0.0 {
            &self.reward - &self.cost * (self.penalty * excess)
        } else {
            self.reward.clone()
        }
    }

    fn smoothness(&self) -> Option<f64> {
        Some(self.penalty * self.cost.norm_squared())
    }
}

/// `-Σ_k (v̄_k - ⟨μ, r_k⟩)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiObjective {
    pub rewards: Vec<Table>,
    pub targets: Vec<f64>,
}

impl ConcaveObjective for MultiObjective {
    fn kind(&self) -> ObjectiveKind {
        ObjectiveKind::MultiObjective
    }

    fn value(&self, mu: &Table) -> f64 {
        self.rewards
            .iter()
            .zip(&self.targets)
            .map(|(r, &v)| {
                let d = v - mu.dot(r);
                -d * d
            })
            .sum()
    }

    fn gradient(&self, mu: &Table) -> Table {
        let mut grad = Table::zeros(mu.nrows(), mu.ncols());
        for (r, &v) in self.rewards.iter().zip(&self.targets) {
            grad += r * (2.0 * (v - mu.dot(r)));
        }
        grad
    }

    fn smoothness(&self) -> Option<f64> {
        Some(2.0 * self.rewards.iter().map(|r| r.norm_squared()).sum::<f64>())
    }
}

fn broadcast(per_state: &StateVector, n_actions: usize) -> Table {
    Table::from_fn(per_state.len(), n_actions, |s, _| per_state[s])
}

/// Raw inputs for building any objective.
#[derive(Debug, Clone, Default)]
pub struct ObjectiveParams {
    pub reward: Option<Table>,
    pub cost: Option<Table>,
    pub threshold: f64,
    pub penalty: Option<f64>,
    pub target: Option<StateVector>,
    pub rewards: Vec<Table>,
    pub targets: Vec<f64>,
    pub smoothing: f64,
}

/// The five shipped objectives behind one type.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    LinearRl(LinearRl),
    Entropy(Entropy),
    MarginalMatching(MarginalMatching),
    ConstrainedMdp(ConstrainedMdp),
    MultiObjective(MultiObjective),
}

impl Objective {
    pub fn linear_rl(reward: Table) -> Result<Self> {
        check_finite(&reward, "reward")?;
        Ok(Objective::LinearRl(LinearRl { reward }))
    }

    pub fn entropy(smoothing: f64) -> Result<Self> {
        if !(smoothing >= 0.0 && smoothing.is_finite()) {
            return Err(Error::InvalidArgument(format!("entropy smoothing {smoothing} must be >= 0")));
        }
        Ok(Objective::Entropy(Entropy { smoothing }))
    }

    /// `target` must be a distribution; zero entries are allowed and floored
    /// to `ln(1e-12)` inside the divergence.
    pub fn marginal_matching(target: &StateVector) -> Result<Self> {
        let sum: f64 = target.iter().sum();
        if target.iter().any(|p| !p.is_finite() || *p < 0.0) || (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument("target is not a distribution".into()));
        }
        Ok(Objective::MarginalMatching(MarginalMatching {
            log_target: target.map(|p| p.max(LOG_FLOOR).ln()),
        }))
    }

    pub fn constrained_mdp(reward: Table, cost: Table, threshold: f64, penalty: f64) -> Result<Self> {
        if !(penalty > 0.0 && penalty.is_finite()) {
            return Err(Error::InvalidArgument(format!("penalty {penalty} must be > 0")));
        }
        if reward.shape() != cost.shape() {
            return Err(Error::dims("cost", format!("{:?}", reward.shape()), format!("{:?}", cost.shape())));
        }
        check_finite(&reward, "reward")?;
        check_finite(&cost, "cost")?;
        Ok(Objective::ConstrainedMdp(ConstrainedMdp {
            reward,
            cost,
            threshold,
            penalty,
        }))
    }

    pub fn multi_objective(rewards: Vec<Table>, targets: Vec<f64>) -> Result<Self> {
        if rewards.is_empty() {
            return Err(Error::InvalidArgument("multi-objective needs at least one reward".into()));
        }
        if rewards.len() != targets.len() {
            return Err(Error::dims("multi-objective targets", rewards.len(), targets.len()));
        }
        let shape = rewards[0].shape();
        for r in &rewards {
            if r.shape() != shape {
                return Err(Error::dims("multi-objective reward", format!("{shape:?}"), format!("{:?}", r.shape())));
            }
            check_finite(r, "reward")?;
        }
        Ok(Objective::MultiObjective(MultiObjective { rewards, targets }))
    }

    /// Builds the objective of `kind` from `params`, checking shapes against
    /// an `n_states × n_actions` problem.
    pub fn from_params(kind: ObjectiveKind, params: &ObjectiveParams, n_states: usize, n_actions: usize) -> Result<Self> {
        let table = |t: &Option<Table>, what: &str| -> Result<Table> {
            let t = t
                .clone()
                .ok_or_else(|| Error::InvalidArgument(format!("{} needs a {what}", kind.name())))?;
            if t.shape() != (n_states, n_actions) {
                return Err(Error::dims("objective table", format!("{n_states}x{n_actions}"), format!("{:?}", t.shape())));
            }
            Ok(t)
        };
        match kind {
            ObjectiveKind::LinearRl => Objective::linear_rl(table(&params.reward, "reward")?),
            ObjectiveKind::Entropy => Objective::entropy(params.smoothing),
            ObjectiveKind::MarginalMatching => {
                let target = params
                    .target
                    .as_ref()
                    .ok_or_else(|| Error::InvalidArgument("marginal_matching needs a target".into()))?;
                if target.len() != n_states {
                    return Err(Error::dims("target", n_states, target.len()));
                }
                Objective::marginal_matching(target)
            }
            ObjectiveKind::ConstrainedMdp => Objective::constrained_mdp(
                table(&params.reward, "reward")?,
                table(&params.cost, "cost")?,
                params.threshold,
                params.penalty.unwrap_or(1.0),
            ),
            ObjectiveKind::MultiObjective => {
                let rewards = params
                    .rewards
                    .iter()
                    .map(|r| table(&Some(r.clone()), "reward"))
                    .collect::<Result<Vec<_>>>()?;
                let targets = if params.targets.is_empty() {
                    vec![1.0; rewards.len()]
                } else {
                    params.targets.clone()
                };
                Objective::multi_objective(rewards, targets)
            }
        }
    }

    fn inner(&self) -> &dyn ConcaveObjective {
        match self {
            Objective::LinearRl(o) => o,
            Objective::Entropy(o) => o,
            Objective::MarginalMatching(o) => o,
            Objective::ConstrainedMdp(o) => o,
            Objective::MultiObjective(o) => o,
        }
    }
}

impl ConcaveObjective for Objective {
    fn kind(&self) -> ObjectiveKind {
        self.inner().kind()
    }

    fn value(&self, mu: &Table) -> f64 {
        self.inner().value(mu)
    }

    fn gradient(&self, mu: &Table) -> Table {
        self.inner().gradient(mu)
    }

    fn smoothness(&self) -> Option<f64> {
        self.inner().smoothness()
    }
}

fn check_finite(t: &Table, what: &str) -> Result<()> {
    if t.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} has non-finite entries")))
    }
}

/// Central differences `(F(μ+h·e) - F(μ-h·e)) / 2h` in every coordinate.
pub fn finite_difference_gradient<O: ConcaveObjective + ?Sized>(objective: &O, mu: &Table, h: f64) -> Table {
    finite_difference_gradient_with(ExecMode::Sequential, objective, mu, h)
}

pub fn finite_difference_gradient_with<O: ConcaveObjective + ?Sized>(
    mode: ExecMode,
    objective: &O,
    mu: &Table,
    h: f64,
) -> Table {
    let (rows, cols) = mu.shape();
    let partials = parallel::map_range(mode, rows * cols, |i| {
        let (s, a) = (i / cols, i % cols);
        let mut plus = mu.clone();
        plus[(s, a)] += h;
        let mut minus = mu.clone();
        minus[(s, a)] -= h;
        (objective.value(&plus) - objective.value(&minus)) / (2.0 * h)
    });
    Table::from_fn(rows, cols, |s, a| partials[s * cols + a])
}

/// `‖analytic - numeric‖_∞ / max(1, ‖analytic‖_∞)`.
pub fn gradient_error(analytic: &Table, numeric: &Table) -> f64 {
    (analytic - numeric).amax() / analytic.amax().max(1.0)
}
