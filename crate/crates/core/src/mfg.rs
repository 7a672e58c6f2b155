//! The potential mean-field game induced by a concave objective.
//!
//! The population reward is `R(·,μ) = ∇F(μ)`, the criterion of a player
//! facing a frozen population is `J(π,μ) = ⟨μ_π, R(·,μ)⟩`, and exploitability
//! is the gain of the best deviation against the population the policy
//! itself induces.

use rand::SeedableRng;
use rand_xorshift::XorShiftRng;

use crate::envs::{random_policy, random_simplex_point};
use crate::mdp::BestResponse;
use crate::parallel::{self, ExecMode};
use crate::{ConcaveObjective, Error, Objective, OccupancyMeasure, Policy, Result, TabularMdp, Table};

/// Slack allowed when a reference optimum sits below the current value.
pub const STALE_REFERENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct PotentialMfg<O: ConcaveObjective = Objective> {
    pub mdp: TabularMdp,
    pub objective: O,
}

/// Result of an exploitability computation.
#[derive(Debug, Clone)]
pub struct Exploitability {
    /// `max_π' J(π',μ_π) - J(π,μ_π)`.
    pub value: f64,
    pub best_response: BestResponse,
    pub best_response_value: f64,
    pub policy_value: f64,
}

/// Largest `⟨μ-μ', R(·,μ) - R(·,μ')⟩` over sampled pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeReport {
    /// Pairs drawn from the Bellman-flow polytope (random policies).
    pub polytope: f64,
    /// Pairs drawn from the whole simplex `Δ_{S×A}`.
    pub simplex: f64,
}

impl ProbeReport {
    pub fn max(&self) -> f64 {
        self.polytope.max(self.simplex)
    }
}

impl<O: ConcaveObjective> PotentialMfg<O> {
    /// Checks that the objective's gradient has the MDP's `S×A` shape.
    pub fn new(mdp: TabularMdp, objective: O) -> Result<Self> {
        let probe = mdp.occupancy_of_policy(&mdp.uniform_policy())?;
        let grad = objective.gradient(probe.mu());
        mdp.check_table(&grad, "objective gradient")?;
        Ok(PotentialMfg { mdp, objective })
    }

    /// `R(·,μ) = ∇F(μ)`.
    pub fn population_reward(&self, mu: &OccupancyMeasure) -> Table {
        self.objective.gradient(mu.mu())
    }

    /// `F(μ)`.
    pub fn objective_value(&self, mu: &OccupancyMeasure) -> f64 {
        self.objective.value(mu.mu())
    }

    /// `J(π, μ_pop) = ⟨μ_π, ∇F(μ_pop)⟩`.
    pub fn criterion_j(&self, policy: &Policy, population: &OccupancyMeasure) -> Result<f64> {
        let mu = self.mdp.occupancy_of_policy(policy)?;
        Ok(mu.mu().dot(&self.population_reward(population)))
    }

    pub fn exploitability(&self, policy: &Policy) -> Result<Exploitability> {
        let mu = self.mdp.occupancy_of_policy(policy)?;
        let reward = self.population_reward(&mu);
        let best_response = self.mdp.best_response(&reward)?;
        let best_response_value = self.mdp.occupancy_of_policy(&best_response.policy)?.mu().dot(&reward);
        let policy_value = mu.mu().dot(&reward);
        Ok(Exploitability {
            value: best_response_value - policy_value,
            best_response,
            best_response_value,
            policy_value,
        })
    }

    /// Frank-Wolfe gap `max_{μ'∈M} ⟨μ' - μ, ∇F(μ)⟩`, computed with a best
    /// response to `∇F(μ)`. Fails if `μ` is not in the polytope.
    pub fn frank_wolfe_gap(&self, mu: &OccupancyMeasure) -> Result<f64> {
        self.mdp.check_occupancy(mu)?;
        Ok(self.linear_maximization(mu)?.1)
    }

    /// Best response to `∇F(μ)` and the resulting gap, without the polytope
    /// check.
    pub(crate) fn linear_maximization(&self, mu: &OccupancyMeasure) -> Result<(LinearStep, f64)> {
        let reward = self.population_reward(mu);
        let best_response = self.mdp.best_response(&reward)?;
        let vertex = self.mdp.occupancy_of_policy(&best_response.policy)?;
        let gap = (vertex.mu() - mu.mu()).dot(&reward);
        Ok((
            LinearStep {
                best_response,
                vertex,
                reward,
            },
            gap,
        ))
    }

    /// `F(μ*) - F(μ_π)` against a reference optimum `F(μ*)`.
    pub fn suboptimality(&self, policy: &Policy, f_star: f64) -> Result<f64> {
        let mu = self.mdp.occupancy_of_policy(policy)?;
        let current = self.objective_value(&mu);
        if f_star < current - STALE_REFERENCE_TOL {
            return Err(Error::StaleReference {
                reference: f_star,
                current,
            });
        }
        Ok(f_star - current)
    }

    /// Samples `n_pairs` pairs from the polytope and from the simplex and
    /// returns the largest monotonicity inner product of each family.
    pub fn monotonicity_probe(&self, n_pairs: usize, seed: u64, mode: ExecMode) -> Result<ProbeReport> {
        if n_pairs == 0 {
            return Err(Error::InvalidArgument("n_pairs must be >= 1".into()));
        }
        let (s, a) = (self.mdp.n_states(), self.mdp.n_actions());
        let mut rng = XorShiftRng::seed_from_u64(seed);
        let policies: Vec<(Policy, Policy)> = (0..n_pairs)
            .map(|_| (random_policy(&mut rng, s, a), random_policy(&mut rng, s, a)))
            .collect();
        let simplex: Vec<(Table, Table)> = (0..n_pairs)
            .map(|_| (random_simplex_point(&mut rng, s, a), random_simplex_point(&mut rng, s, a)))
            .collect();

        let on_polytope = parallel::map(mode, &policies, |(p, q)| -> Result<f64> {
            let mu = self.mdp.occupancy_of_policy(p)?;
            let nu = self.mdp.occupancy_of_policy(q)?;
            Ok(self.monotonicity_product(mu.mu(), nu.mu()))
        });
        let polytope = on_polytope
            .into_iter()
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let simplex = parallel::map(mode, &simplex, |(mu, nu)| self.monotonicity_product(mu, nu))
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(ProbeReport { polytope, simplex })
    }

    /// `⟨μ-ν, ∇F(μ) - ∇F(ν)⟩`.
    pub fn monotonicity_product(&self, mu: &Table, nu: &Table) -> f64 {
        (mu - nu).dot(&(self.objective.gradient(mu) - self.objective.gradient(nu)))
    }
}

/// One linear-maximization oracle call.
#[derive(Debug, Clone)]
pub(crate) struct LinearStep {
    pub best_response: BestResponse,
    pub vertex: OccupancyMeasure,
    pub reward: Table,
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::envs::random_mdp;
    use crate::StateVector;

    fn single_state() -> TabularMdp {
        TabularMdp::new(&[vec![vec![1.0], vec![1.0]]], 0.9, &[1.0]).unwrap()
    }

    #[test]
    fn population_reward_examples() {
        let mdp = random_mdp(4, 2, 1);
        let r = Table::from_fn(4, 2, |s, a| (s * 2 + a) as f64);
        let mfg = PotentialMfg::new(mdp.clone(), Objective::linear_rl(r.clone()).unwrap()).unwrap();
        let mu = mdp.occupancy_of_policy(&mdp.uniform_policy()).unwrap();
        assert_eq!(mfg.population_reward(&mu), r);

        let ent = PotentialMfg::new(mdp, Objective::entropy(0.0).unwrap()).unwrap();
        let uniform = OccupancyMeasure::new(Table::from_element(4, 2, 0.125)).unwrap();
        for g in ent.population_reward(&uniform).iter() {
            assert_abs_diff_eq!(*g, 4f64.ln() - 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn criterion_ignores_population_for_linear() {
        let mdp = random_mdp(5, 3, 2);
        let r = Table::from_fn(5, 3, |s, a| ((s + a) % 3) as f64);
        let mfg = PotentialMfg::new(mdp.clone(), Objective::linear_rl(r.clone()).unwrap()).unwrap();
        let pi = mdp.uniform_policy();
        let pop = mdp
            .occupancy_of_policy(&Policy::deterministic(&[0, 1, 2, 0, 1], 3))
            .unwrap();
        let j = mfg.criterion_j(&pi, &pop).unwrap();
        assert_abs_diff_eq!(j, mdp.mdp_value(&pi, &r).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn exploitability_of_optimal_linear_policy_is_zero() {
        let mdp = random_mdp(6, 3, 4);
        let r = Table::from_fn(6, 3, |s, a| ((s * 7 + a * 3) % 5) as f64 / 5.0);
        let mfg = PotentialMfg::new(mdp.clone(), Objective::linear_rl(r.clone()).unwrap()).unwrap();
        let br = mdp.best_response(&r).unwrap();
        let phi = mfg.exploitability(&br.policy).unwrap().value;
        assert!(phi.abs() <= 1e-10, "{phi}");
        assert!(mfg.exploitability(&mdp.uniform_policy()).unwrap().value > 0.0);
    }

    #[test]
    fn single_state_has_zero_exploitability() {
        let target = StateVector::from_element(1, 1.0);
        for obj in [
            Objective::entropy(0.0).unwrap(),
            Objective::marginal_matching(&target).unwrap(),
            Objective::multi_objective(vec![Table::from_row_slice(1, 2, &[1.0, 1.0])], vec![0.3]).unwrap(),
        ] {
            let mfg = PotentialMfg::new(single_state(), obj).unwrap();
            let pi = Policy::from_rows(&[vec![0.2, 0.8]]).unwrap();
            assert!(mfg.exploitability(&pi).unwrap().value.abs() <= 1e-12);
        }
    }

    #[test]
    fn linear_probe_is_exactly_zero() {
        let mdp = random_mdp(4, 2, 8);
        let r = Table::from_fn(4, 2, |s, a| (s as f64) - (a as f64));
        let mfg = PotentialMfg::new(mdp, Objective::linear_rl(r).unwrap()).unwrap();
        let report = mfg.monotonicity_probe(50, 1, ExecMode::Sequential).unwrap();
        assert_eq!(report.polytope, 0.0);
        assert_eq!(report.simplex, 0.0);
        assert!(mfg.monotonicity_probe(0, 1, ExecMode::Sequential).is_err());
    }

    #[test]
    fn probe_is_deterministic_across_modes() {
        let mdp = random_mdp(5, 2, 3);
        let mfg = PotentialMfg::new(mdp, Objective::entropy(0.0).unwrap()).unwrap();
        let a = mfg.monotonicity_probe(40, 17, ExecMode::Sequential).unwrap();
        let b = mfg.monotonicity_probe(40, 17, ExecMode::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.max() <= 1e-9);
    }

    #[test]
    fn suboptimality_rejects_stale_reference() {
        let mdp = random_mdp(4, 2, 5);
        let r = Table::from_fn(4, 2, |s, _| s as f64);
        let mfg = PotentialMfg::new(mdp.clone(), Objective::linear_rl(r.clone()).unwrap()).unwrap();
        let br = mdp.best_response(&r).unwrap();
        let f_star = mdp.mdp_value(&br.policy, &r).unwrap();
        assert!(mfg.suboptimality(&br.policy, f_star).unwrap().abs() <= 1e-12);
        assert!(mfg.suboptimality(&mdp.uniform_policy(), f_star).unwrap() > 0.0);
        assert!(matches!(
            mfg.suboptimality(&br.policy, f_star - 1e-3),
            Err(Error::StaleReference { .. })
        ));
    }

    #[test]
    fn gap_matches_exploitability() {
        let mdp = random_mdp(6, 3, 21);
        let mfg = PotentialMfg::new(mdp.clone(), Objective::entropy(1e-3).unwrap()).unwrap();
        let pi = Policy::from_rows(&vec![vec![0.6, 0.3, 0.1]; 6]).unwrap();
        let mu = mdp.occupancy_of_policy(&pi).unwrap();
        let gap = mfg.frank_wolfe_gap(&mu).unwrap();
        let phi = mfg.exploitability(&pi).unwrap().value;
        assert!((gap - phi).abs() <= 1e-12);
        let outside = OccupancyMeasure::new(Table::from_element(6, 3, 1.0 / 18.0)).unwrap();
        assert!(mfg.frank_wolfe_gap(&outside).is_err());
    }
}
