//! Convergence certificates for Frank-Wolfe on a smooth concave potential.
//!
//! With `β` the Euclidean Lipschitz constant of `∇F` and `R` the diameter of
//! the occupancy polytope:
//!
//! - `φ(π) ≤ Δ + R·√(2βΔ)` with `Δ = F(μ*) - F(μ_π)`;
//! - after `T` steps of `η_t = 2/(t+1)`, `Δ_T ≤ 2βR²/(T+1)` and
//!   `φ(π_T) ≤ 2βR²/√(T+1) + 2βR²/(T+1)`.

use serde::Serialize;

use crate::parallel::{self, ExecMode};
use crate::{ConcaveObjective, OccupancyMeasure, Table};

/// Upper bound on the Euclidean diameter of any set of distributions.
pub const SIMPLEX_DIAMETER: f64 = std::f64::consts::SQRT_2;

pub fn exploitability_bound(suboptimality: f64, beta: f64, radius: f64) -> f64 {
    let gap = suboptimality.max(0.0);
    gap + radius * (2.0 * beta * gap).sqrt()
}

pub fn fw_suboptimality_bound(t: usize, beta: f64, radius: f64) -> f64 {
    2.0 * beta * radius * radius / (t as f64 + 1.0)
}

pub fn fw_exploitability_bound(t: usize, beta: f64, radius: f64) -> f64 {
    let c = 2.0 * beta * radius * radius;
    c / (t as f64 + 1.0).sqrt() + c / (t as f64 + 1.0)
}

/// `max_{i<j} ‖∇F(μ_i) - ∇F(μ_j)‖ / ‖μ_i - μ_j‖` over distinct points.
pub fn empirical_lipschitz<O: ConcaveObjective + ?Sized>(objective: &O, points: &[Table], mode: ExecMode) -> f64 {
    let grads: Vec<Table> = parallel::map(mode, points, |mu| objective.gradient(mu));
    let n = points.len();
    let best = parallel::max_range(mode, n, |i| {
        let mut best = 0.0f64;
        for j in i + 1..n {
            let dx = (&points[i] - &points[j]).norm();
            if dx > 1e-12 {
                best = best.max((&grads[i] - &grads[j]).norm() / dx);
            }
        }
        best
    });
    best.max(0.0)
}

/// Margins of every certificate at one iterate; all should be `≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundMargins {
    pub iteration: usize,
    pub exploitability: f64,
    pub suboptimality: f64,
    /// `Δ + R√(2βΔ) - φ`.
    pub suboptimality_bound: f64,
    /// `2βR²/√(T+1) + 2βR²/(T+1) - φ`.
    pub rate_bound: f64,
    /// `2βR²/(T+1) - Δ`.
    pub fw_suboptimality: f64,
    /// `φ - Δ`.
    pub exploitability_dominates: f64,
}

impl BoundMargins {
    pub fn compute(iteration: usize, exploitability: f64, suboptimality: f64, beta: f64, radius: f64) -> Self {
        BoundMargins {
            iteration,
            exploitability,
            suboptimality,
            suboptimality_bound: exploitability_bound(suboptimality, beta, radius) - exploitability,
            rate_bound: fw_exploitability_bound(iteration, beta, radius) - exploitability,
            fw_suboptimality: fw_suboptimality_bound(iteration, beta, radius) - suboptimality,
            exploitability_dominates: exploitability - suboptimality,
        }
    }

    pub fn min(&self) -> f64 {
        self.suboptimality_bound
            .min(self.rate_bound)
            .min(self.fw_suboptimality)
            .min(self.exploitability_dominates)
    }
}

/// Convenience: the raw tables of a list of occupancies.
pub fn tables(occupancies: &[OccupancyMeasure]) -> Vec<Table> {
    occupancies.iter().map(|o| o.mu().clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Objective;

    #[test]
    fn bound_values() {
        assert_eq!(exploitability_bound(0.0, 5.0, 1.0), 0.0);
        assert!((exploitability_bound(0.5, 1.0, 1.0) - 1.5).abs() < 1e-15);
        assert!((fw_suboptimality_bound(3, 1.0, 1.0) - 0.5).abs() < 1e-15);
        assert!((fw_exploitability_bound(3, 1.0, 1.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn lipschitz_of_quadratic_is_below_analytic() {
        let r = Table::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.5]);
        let f = Objective::multi_objective(vec![r], vec![1.0]).unwrap();
        let pts: Vec<Table> = (0..10)
            .map(|i| {
                let x = i as f64 / 10.0;
                Table::from_row_slice(2, 2, &[x, 0.0, 0.0, 1.0 - x])
            })
            .collect();
        let beta = empirical_lipschitz(&f, &pts, ExecMode::Sequential);
        assert!(beta > 0.0 && beta <= f.smoothness().unwrap() + 1e-12);
        assert_eq!(beta, empirical_lipschitz(&f, &pts, ExecMode::Parallel));
    }
}
