//! Exact tabular MDP machinery.
//!
//! Occupancy measures carry the `(1-γ)` normalisation, so they are
//! probability distributions over state-action pairs and
//! `J(π) = ⟨μ_π, r⟩`. All linear systems are solved by dense LU over the
//! state index set: `ρ_π = (1-γ)(I - γP_πᵀ)⁻¹ρ₀` for occupancies and
//! `v_π = (I - γP_π)⁻¹ r_π` for evaluation, from which `μ_π(s,a) = ρ_π(s)π(a|s)`
//! and `q_π(s,a) = r(s,a) + γ Σ_s' P(s'|s,a) v_π(s')` follow exactly.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, StateVector, Table};

/// Tolerance on row sums of transition kernels, policies and `ρ₀`.
pub const PROB_TOL: f64 = 1e-12;
/// Tolerance on the total mass of an occupancy measure.
pub const MASS_TOL: f64 = 1e-10;
/// Tolerance on the Bellman-flow residual of an occupancy measure.
pub const FLOW_TOL: f64 = 1e-10;
/// States with `ρ(s)` at or below this are treated as unreached.
pub const ZERO_DENSITY: f64 = 1e-12;

/// Relative tolerance used by greedy improvement when comparing q-values.
const GREEDY_RTOL: f64 = 1e-12;
const MAX_POLICY_ITERATIONS: u64 = 100_000;

/// A finite discounted MDP with known dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularMdp {
    n_states: usize,
    n_actions: usize,
    /// One `S×S` row-stochastic kernel per action.
    kernels: Vec<DMatrix<f64>>,
    discount: f64,
    init: StateVector,
}

impl TabularMdp {
    /// Builds an MDP from a nested `P[s][a][s']` probability table.
    pub fn new(transition: &[Vec<Vec<f64>>], discount: f64, init: &[f64]) -> Result<Self> {
        let n_states = transition.len();
        if n_states == 0 {
            return Err(Error::InvalidMdp("no states".into()));
        }
        let n_actions = transition[0].len();
        if n_actions == 0 {
            return Err(Error::InvalidMdp("no actions".into()));
        }
        let mut kernels = vec![DMatrix::zeros(n_states, n_states); n_actions];
        for (s, row) in transition.iter().enumerate() {
            if row.len() != n_actions {
                return Err(Error::dims("transition actions", n_actions, row.len()));
            }
            for (a, next) in row.iter().enumerate() {
                if next.len() != n_states {
                    return Err(Error::dims("transition next states", n_states, next.len()));
                }
                for (s2, &p) in next.iter().enumerate() {
                    kernels[a][(s, s2)] = p;
                }
            }
        }
        Self::from_kernels(kernels, discount, DVector::from_column_slice(init))
    }

    /// Builds an MDP from per-action `S×S` kernels whose rows are next-state
    /// distributions.
    pub fn from_kernels(kernels: Vec<DMatrix<f64>>, discount: f64, init: StateVector) -> Result<Self> {
        let n_actions = kernels.len();
        if n_actions == 0 {
            return Err(Error::InvalidMdp("no actions".into()));
        }
        let n_states = kernels[0].nrows();
        if n_states == 0 {
            return Err(Error::InvalidMdp("no states".into()));
        }
        if !(discount > 0.0 && discount < 1.0) {
            return Err(Error::InvalidMdp(format!("discount {discount} outside (0, 1)")));
        }
        if init.len() != n_states {
            return Err(Error::dims("initial distribution", n_states, init.len()));
        }
        check_distribution(init.iter().copied(), "initial distribution").map_err(Error::InvalidMdp)?;
        for (a, kernel) in kernels.iter().enumerate() {
            if kernel.nrows() != n_states || kernel.ncols() != n_states {
                return Err(Error::dims(
                    "transition kernel",
                    format!("{n_states}x{n_states}"),
                    format!("{}x{}", kernel.nrows(), kernel.ncols()),
                ));
            }
            for s in 0..n_states {
                check_distribution(kernel.row(s).iter().copied(), "transition row")
                    .map_err(|e| Error::InvalidMdp(format!("state {s}, action {a}: {e}")))?;
            }
        }
        Ok(TabularMdp {
            n_states,
            n_actions,
            kernels,
            discount,
            init,
        })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn discount(&self) -> f64 {
        self.discount
    }

    pub fn init_dist(&self) -> &StateVector {
        &self.init
    }

    /// `P(s'|s,a)`.
    pub fn transition(&self, s: usize, a: usize, next: usize) -> f64 {
        self.kernels[a][(s, next)]
    }

    /// The `S×S` kernel of action `a`.
    pub fn kernel(&self, a: usize) -> &DMatrix<f64> {
        &self.kernels[a]
    }

    pub fn uniform_policy(&self) -> Policy {
        Policy::uniform(self.n_states, self.n_actions)
    }

    /// Zero table of shape `S×A`.
    pub fn zeros(&self) -> Table {
        Table::zeros(self.n_states, self.n_actions)
    }

    /// `P_π(s'|s) = Σ_a π(a|s) P(s'|s,a)`.
    pub fn policy_kernel(&self, policy: &Policy) -> Result<DMatrix<f64>> {
        self.check_policy(policy)?;
        let mut kernel = DMatrix::zeros(self.n_states, self.n_states);
        for (a, pa) in self.kernels.iter().enumerate() {
            for s in 0..self.n_states {
                let w = policy.probs[(s, a)];
                if w != 0.0 {
                    let mut row = kernel.row_mut(s);
                    row += pa.row(s) * w;
                }
            }
        }
        Ok(kernel)
    }

    /// `μ_{0,π}(s,a) = ρ₀(s)π(a|s)`.
    pub fn initial_state_action(&self, policy: &Policy) -> Result<Table> {
        self.check_policy(policy)?;
        Ok(scale_rows(&policy.probs, &self.init))
    }

    /// Discounted, normalised state-action occupancy of `policy`.
    pub fn occupancy_of_policy(&self, policy: &Policy) -> Result<OccupancyMeasure> {
        let kernel = self.policy_kernel(policy)?;
        let system = DMatrix::identity(self.n_states, self.n_states) - kernel.transpose() * self.discount;
        let rhs = &self.init * (1.0 - self.discount);
        let mut rho = system
            .lu()
            .solve(&rhs)
            .ok_or(Error::Singular("occupancy system"))?;
        for r in rho.iter_mut() {
            // round-off only; the exact solution is non-negative
            if *r < 0.0 {
                *r = 0.0;
            }
        }
        let mu = scale_rows(&policy.probs, &rho);
        Ok(OccupancyMeasure::from_parts(mu))
    }

    /// Exact `q_{π,r}`, solving the Bellman equation of `policy` for `reward`.
    /// Each call is one policy evaluation for budget accounting.
    pub fn policy_evaluation(&self, policy: &Policy, reward: &Table) -> Result<QFunction> {
        self.check_table(reward, "reward")?;
        let kernel = self.policy_kernel(policy)?;
        let reward_pi = DVector::from_iterator(
            self.n_states,
            (0..self.n_states).map(|s| policy.probs.row(s).dot(&reward.row(s))),
        );
        self.q_from_kernel(kernel, &reward_pi, reward)
    }

    fn q_from_kernel(&self, kernel: DMatrix<f64>, reward_pi: &StateVector, reward: &Table) -> Result<QFunction> {
        let system = DMatrix::identity(self.n_states, self.n_states) - kernel * self.discount;
        let v = system
            .lu()
            .solve(reward_pi)
            .ok_or(Error::Singular("evaluation system"))?;
        let mut q = reward.clone();
        for (a, pa) in self.kernels.iter().enumerate() {
            let next = pa * &v;
            for s in 0..self.n_states {
                q[(s, a)] += self.discount * next[s];
            }
        }
        Ok(QFunction { values: q })
    }

    fn evaluate_deterministic(&self, actions: &[usize], reward: &Table) -> Result<QFunction> {
        let mut kernel = DMatrix::zeros(self.n_states, self.n_states);
        let mut reward_pi = DVector::zeros(self.n_states);
        for (s, &a) in actions.iter().enumerate() {
            kernel.row_mut(s).copy_from(&self.kernels[a].row(s));
            reward_pi[s] = reward[(s, a)];
        }
        self.q_from_kernel(kernel, &reward_pi, reward)
    }

    /// Deterministic optimal policy for a fixed reward, by policy iteration.
    ///
    /// Starts from the policy greedy in the immediate reward. A state switches
    /// action only on a strict improvement; the new action is the lowest
    /// index attaining the maximum.
    pub fn best_response(&self, reward: &Table) -> Result<BestResponse> {
        self.check_table(reward, "reward")?;
        let mut actions: Vec<usize> = (0..self.n_states)
            .map(|s| greedy_action(reward.row(s).iter().copied(), tolerance(reward)))
            .collect();
        let mut evaluations = 0u64;
        loop {
            let q = self.evaluate_deterministic(&actions, reward)?;
            evaluations += 1;
            let tol = tolerance(&q.values);
            let mut changed = false;
            for (s, action) in actions.iter_mut().enumerate() {
                let row = q.values.row(s);
                let best = row.max();
                if best > row[*action] + tol {
                    *action = greedy_action(row.iter().copied(), tol);
                    changed = true;
                }
            }
            if !changed || evaluations >= MAX_POLICY_ITERATIONS {
                let policy = Policy::deterministic(&actions, self.n_actions);
                return Ok(BestResponse {
                    policy,
                    actions,
                    q,
                    evaluations,
                });
            }
        }
    }

    /// `J(π) = ⟨μ_π, r⟩`.
    pub fn mdp_value(&self, policy: &Policy, reward: &Table) -> Result<f64> {
        self.check_table(reward, "reward")?;
        Ok(self.occupancy_of_policy(policy)?.mu.dot(reward))
    }

    /// `‖Σ_a μ(·,a) - (1-γ)ρ₀ - γ P^⊤μ‖_∞`.
    pub fn flow_residual(&self, mu: &Table) -> Result<f64> {
        self.check_table(mu, "occupancy")?;
        let rho = row_sums(mu);
        let mut inflow = &self.init * (1.0 - self.discount);
        for (a, pa) in self.kernels.iter().enumerate() {
            inflow += pa.tr_mul(&mu.column(a)) * self.discount;
        }
        Ok((rho - inflow).amax())
    }

    /// Checks the full invariants of `mu` against this MDP.
    pub fn check_occupancy(&self, mu: &OccupancyMeasure) -> Result<()> {
        let residual = self.flow_residual(&mu.mu)?;
        if residual > FLOW_TOL {
            return Err(Error::NotInPolytope { residual });
        }
        Ok(())
    }

    /// `π(a|s) = μ(s,a)/ρ(s)`, uniform on unreached states. Fails if `μ` is
    /// not in the Bellman-flow polytope, where the round trip would not hold.
    pub fn policy_of_occupancy(&self, mu: &OccupancyMeasure) -> Result<Policy> {
        self.check_occupancy(mu)?;
        Ok(mu.policy())
    }

    fn check_policy(&self, policy: &Policy) -> Result<()> {
        if policy.n_states() != self.n_states || policy.n_actions() != self.n_actions {
            return Err(Error::dims(
                "policy",
                format!("{}x{}", self.n_states, self.n_actions),
                format!("{}x{}", policy.n_states(), policy.n_actions()),
            ));
        }
        Ok(())
    }

    pub(crate) fn check_table(&self, table: &Table, context: &'static str) -> Result<()> {
        if table.nrows() != self.n_states || table.ncols() != self.n_actions {
            return Err(Error::dims(
                context,
                format!("{}x{}", self.n_states, self.n_actions),
                format!("{}x{}", table.nrows(), table.ncols()),
            ));
        }
        Ok(())
    }
}

fn tolerance(values: &Table) -> f64 {
    GREEDY_RTOL * values.amax().max(1.0)
}

fn greedy_action(row: impl Iterator<Item = f64> + Clone, tol: f64) -> usize {
    let best = row.clone().fold(f64::NEG_INFINITY, f64::max);
    row.into_iter().position(|x| x >= best - tol).unwrap_or(0)
}

fn check_distribution(values: impl Iterator<Item = f64>, what: &str) -> std::result::Result<(), String> {
    let mut sum = 0.0;
    for p in values {
        if !p.is_finite() || p < 0.0 {
            return Err(format!("{what} has invalid entry {p}"));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(format!("{what} sums to {sum}"));
    }
    Ok(())
}

fn scale_rows(table: &Table, weights: &StateVector) -> Table {
    let mut out = table.clone();
    for (s, mut row) in out.row_iter_mut().enumerate() {
        row *= weights[s];
    }
    out
}

/// `ρ(s) = Σ_a μ(s,a)`.
pub fn state_marginal(mu: &Table) -> StateVector {
    row_sums(mu)
}

fn row_sums(table: &Table) -> StateVector {
    DVector::from_iterator(table.nrows(), table.row_iter().map(|r| r.sum()))
}

/// A stationary stochastic policy `π[s][a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    probs: Table,
}

impl Policy {
    /// Validates that every row is a distribution.
    pub fn new(probs: Table) -> Result<Self> {
        if probs.nrows() == 0 || probs.ncols() == 0 {
            return Err(Error::InvalidPolicy("empty table".into()));
        }
        for s in 0..probs.nrows() {
            check_distribution(probs.row(s).iter().copied(), "policy row")
                .map_err(|e| Error::InvalidPolicy(format!("state {s}: {e}")))?;
        }
        Ok(Policy { probs })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_actions = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_actions) {
            return Err(Error::InvalidPolicy("ragged rows".into()));
        }
        Self::new(Table::from_fn(rows.len(), n_actions, |s, a| rows[s][a]))
    }

    pub fn uniform(n_states: usize, n_actions: usize) -> Self {
        Policy {
            probs: Table::from_element(n_states, n_actions, 1.0 / n_actions as f64),
        }
    }

    /// One-hot policy playing `actions[s]` in state `s`.
    pub fn deterministic(actions: &[usize], n_actions: usize) -> Self {
        let mut probs = Table::zeros(actions.len(), n_actions);
        for (s, &a) in actions.iter().enumerate() {
            probs[(s, a)] = 1.0;
        }
        Policy { probs }
    }

    /// Row-wise softmax of `logits`, computed with max subtraction.
    pub fn softmax(logits: &Table) -> Self {
        let mut probs = logits.clone();
        for mut row in probs.row_iter_mut() {
            let max = row.max();
            row.apply(|x| *x = (*x - max).exp());
            let z = row.sum();
            row /= z;
        }
        Policy { probs }
    }

    pub fn probs(&self) -> &Table {
        &self.probs
    }

    pub fn prob(&self, s: usize, a: usize) -> f64 {
        self.probs[(s, a)]
    }

    pub fn n_states(&self) -> usize {
        self.probs.nrows()
    }

    pub fn n_actions(&self) -> usize {
        self.probs.ncols()
    }

    pub fn into_table(self) -> Table {
        self.probs
    }
}

/// A discounted state-action distribution with its cached state marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyMeasure {
    mu: Table,
    rho: StateVector,
}

impl OccupancyMeasure {
    /// Validates non-negativity and unit mass. Membership in the
    /// Bellman-flow polytope depends on the MDP; see
    /// [`TabularMdp::check_occupancy`].
    pub fn new(mu: Table) -> Result<Self> {
        if mu.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidOccupancy("negative or non-finite entry".into()));
        }
        let total = mu.sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidOccupancy(format!("total mass {total}")));
        }
        Ok(Self::from_parts(mu))
    }

    pub(crate) fn from_parts(mu: Table) -> Self {
        let rho = row_sums(&mu);
        OccupancyMeasure { mu, rho }
    }

    /// `(1-η)·self + η·other`.
    pub fn mix(&self, other: &OccupancyMeasure, eta: f64) -> OccupancyMeasure {
        let mu = &self.mu * (1.0 - eta) + &other.mu * eta;
        Self::from_parts(mu)
    }

    pub fn mu(&self) -> &Table {
        &self.mu
    }

    pub fn state_marginal(&self) -> &StateVector {
        &self.rho
    }

    pub fn into_table(self) -> Table {
        self.mu
    }

    /// Normalised rows without the polytope check.
    pub(crate) fn policy(&self) -> Policy {
        let n_actions = self.mu.ncols();
        let mut probs = self.mu.clone();
        for (s, mut row) in probs.row_iter_mut().enumerate() {
            let mass = self.rho[s];
            if mass > ZERO_DENSITY {
                row /= mass;
            } else {
                row.fill(1.0 / n_actions as f64);
            }
        }
        Policy { probs }
    }
}

/// State-action values of a policy, in units of undiscounted-sum reward
/// (`q = r/(1-γ)` for a constant reward `r`).
#[derive(Debug, Clone, PartialEq)]
pub struct QFunction {
    pub values: Table,
}

/// Output of [`TabularMdp::best_response`].
#[derive(Debug, Clone)]
pub struct BestResponse {
    pub policy: Policy,
    pub actions: Vec<usize>,
    pub q: QFunction,
    /// Policy evaluations spent by policy iteration.
    pub evaluations: u64,
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;

    fn one_state(discount: f64) -> TabularMdp {
        TabularMdp::new(&[vec![vec![1.0]]], discount, &[1.0]).unwrap()
    }

    /// Two states, one action: 0 → 1, 1 → 1.
    fn chain(n_actions: usize) -> TabularMdp {
        let row0 = vec![vec![0.0, 1.0]; n_actions];
        let row1 = vec![vec![0.0, 1.0]; n_actions];
        TabularMdp::new(&[row0, row1], 0.5, &[1.0, 0.0]).unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(TabularMdp::new(&[vec![vec![0.5]]], 0.5, &[1.0]).is_err());
        assert!(TabularMdp::new(&[vec![vec![1.0]]], 1.0, &[1.0]).is_err());
        assert!(TabularMdp::new(&[vec![vec![1.0]]], 0.5, &[0.9]).is_err());
        assert!(TabularMdp::new(&vec![vec![vec![-0.5, 1.5], vec![0.5, 0.5]]; 2], 0.5, &[1.0, 0.0]).is_err());
        assert!(Policy::from_rows(&[vec![0.3, 0.3]]).is_err());
    }

    #[test]
    fn single_state_occupancy_is_one() {
        for gamma in [0.1, 0.5, 0.99] {
            let mdp = one_state(gamma);
            let mu = mdp.occupancy_of_policy(&mdp.uniform_policy()).unwrap();
            assert_abs_diff_eq!(mu.mu()[(0, 0)], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn chain_occupancy_hand_computed() {
        // ρ(0) = (1-γ) = 0.5, ρ(1) = (1-γ)Σ_{t≥1}γ^t = 0.5
        let mdp = chain(1);
        let mu = mdp.occupancy_of_policy(&mdp.uniform_policy()).unwrap();
        assert_abs_diff_eq!(mu.state_marginal()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(mu.state_marginal()[1], 0.5, epsilon = 1e-15);
        assert!(mdp.flow_residual(mu.mu()).unwrap() < 1e-15);
    }

    #[test]
    fn marginal_is_row_sum() {
        let rho = state_marginal(&Table::from_row_slice(2, 2, &[0.25, 0.25, 0.25, 0.25]));
        assert_eq!(rho.as_slice(), &[0.5, 0.5]);
        let rho = state_marginal(&Table::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(rho.as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn policy_from_occupancy_normalises_rows() {
        let mu = OccupancyMeasure::new(Table::from_row_slice(2, 2, &[0.5, 0.0, 0.25, 0.25])).unwrap();
        let pi = mu.policy();
        assert_eq!(pi.probs(), &Table::from_row_slice(2, 2, &[1.0, 0.0, 0.5, 0.5]));

        let mu = OccupancyMeasure::new(Table::from_row_slice(2, 2, &[0.5, 0.5, 0.0, 0.0])).unwrap();
        assert_eq!(mu.policy().probs().row(1).iter().copied().collect::<Vec<_>>(), vec![0.5, 0.5]);
    }

    #[test]
    fn policy_of_occupancy_rejects_infeasible() {
        // chain MDP forces ρ = (0.5, 0.5); a Dirac on state 1 violates the flow
        let mdp = chain(2);
        let mu = OccupancyMeasure::new(Table::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0])).unwrap();
        assert!(matches!(mdp.policy_of_occupancy(&mu), Err(Error::NotInPolytope { .. })));
    }

    #[test]
    fn evaluation_examples() {
        let mdp = one_state(0.5);
        let q = mdp
            .policy_evaluation(&mdp.uniform_policy(), &Table::from_element(1, 1, 1.0))
            .unwrap();
        assert_abs_diff_eq!(q.values[(0, 0)], 2.0, epsilon = 1e-14);

        let mdp = chain(1);
        let zero = mdp.policy_evaluation(&mdp.uniform_policy(), &mdp.zeros()).unwrap();
        assert_eq!(zero.values.amax(), 0.0);

        // q(0) = γ/(1-γ) = 1, q(1) = 1/(1-γ) = 2
        let reward = Table::from_row_slice(2, 1, &[0.0, 1.0]);
        let q = mdp.policy_evaluation(&mdp.uniform_policy(), &reward).unwrap();
        assert_abs_diff_eq!(q.values[(0, 0)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(q.values[(1, 0)], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn evaluation_rejects_wrong_shape() {
        let mdp = chain(1);
        assert!(matches!(
            mdp.policy_evaluation(&mdp.uniform_policy(), &Table::zeros(3, 1)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(mdp.occupancy_of_policy(&Policy::uniform(2, 3)).is_err());
    }

    #[test]
    fn best_response_zero_reward_picks_action_zero() {
        let mdp = chain(3);
        let br = mdp.best_response(&mdp.zeros()).unwrap();
        assert_eq!(br.actions, vec![0, 0]);
        assert_eq!(br.q.values.amax(), 0.0);
        assert_eq!(br.evaluations, 1);
    }

    #[test]
    fn best_response_on_chain() {
        // action 0 stays put, action 1 moves 0 → 1; state 1 absorbs
        let mdp = TabularMdp::new(
            &[
                vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            ],
            0.5,
            &[1.0, 0.0],
        )
        .unwrap();
        let reward = Table::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 1.0]);
        let br = mdp.best_response(&reward).unwrap();
        assert_eq!(br.actions[0], 1);
        assert_abs_diff_eq!(mdp.mdp_value(&br.policy, &reward).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn value_of_constant_rewards() {
        let mdp = chain(2);
        let pi = Policy::from_rows(&[vec![0.3, 0.7], vec![0.9, 0.1]]).unwrap();
        assert_eq!(mdp.mdp_value(&pi, &mdp.zeros()).unwrap(), 0.0);
        let ones = Table::from_element(2, 2, 1.0);
        assert_abs_diff_eq!(mdp.mdp_value(&pi, &ones).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn softmax_is_stable() {
        let pi = Policy::softmax(&Table::from_row_slice(1, 2, &[1000.0, 0.0]));
        assert_abs_diff_eq!(pi.prob(0, 0), 1.0, epsilon = 1e-15);
        let pi = Policy::softmax(&Table::zeros(3, 4));
        assert_eq!(pi, Policy::uniform(3, 4));
    }
}
