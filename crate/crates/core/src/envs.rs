//! Grid worlds and seeded random MDPs.
//!
//! A grid spec is a JSON document:
//!
//! ```json
//! {
//!   "width": 11, "height": 11,
//!   "walls": [[0, 5], [1, 5]],
//!   "init": [0, 0],
//!   "gamma": 0.99,
//!   "fields": { "goal": [{ "cell": [10, 10], "value": 1.0 }] }
//! }
//! ```
//!
//! Cells are `[row, col]` with row 0 at the top. States are the non-wall
//! cells in row-major order; actions are up, down, left, right in that order.
//! Moves into a wall or off the grid leave the state unchanged.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;
use serde::{Deserialize, Serialize};

use crate::{Error, Policy, Result, StateVector, TabularMdp, Table};

pub type Cell = [usize; 2];

pub const N_GRID_ACTIONS: usize = 4;
pub const ACTION_NAMES: [&str; N_GRID_ACTIONS] = ["up", "down", "left", "right"];
const MOVES: [(isize, isize); N_GRID_ACTIONS] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

/// Discount used by [`random_mdp`].
pub const RANDOM_MDP_DISCOUNT: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldEntry {
    pub cell: Cell,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    #[serde(default)]
    pub walls: Vec<Cell>,
    pub init: Cell,
    pub gamma: f64,
    #[serde(default)]
    pub fields: BTreeMap<String, Vec<FieldEntry>>,
}

impl GridSpec {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let spec: GridSpec = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidGrid("width and height must be positive".into()));
        }
        let in_bounds = |c: &Cell| c[0] < self.height && c[1] < self.width;
        if let Some(c) = self.walls.iter().find(|c| !in_bounds(c)) {
            return Err(Error::InvalidGrid(format!("wall {c:?} out of bounds")));
        }
        if !in_bounds(&self.init) {
            return Err(Error::InvalidGrid(format!("init {:?} out of bounds", self.init)));
        }
        let walls = self.wall_set();
        if walls.contains(&self.init) {
            return Err(Error::InvalidGrid("init cell is a wall".into()));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidGrid(format!("gamma {} outside (0, 1)", self.gamma)));
        }
        for (name, entries) in &self.fields {
            for e in entries {
                if !in_bounds(&e.cell) {
                    return Err(Error::InvalidGrid(format!("field {name}: cell {:?} out of bounds", e.cell)));
                }
                if walls.contains(&e.cell) {
                    return Err(Error::InvalidGrid(format!("field {name}: cell {:?} is a wall", e.cell)));
                }
                if !e.value.is_finite() {
                    return Err(Error::InvalidGrid(format!("field {name}: non-finite value")));
                }
            }
        }
        Ok(())
    }

    fn wall_set(&self) -> BTreeSet<Cell> {
        self.walls.iter().copied().collect()
    }

    /// Non-wall cells in row-major order; position in this list is the
    /// state index.
    pub fn state_cells(&self) -> Vec<Cell> {
        let walls = self.wall_set();
        (0..self.height)
            .flat_map(|r| (0..self.width).map(move |c| [r, c]))
            .filter(|c| !walls.contains(c))
            .collect()
    }

    pub fn n_states(&self) -> usize {
        self.width * self.height - self.wall_set().len()
    }

    /// Map from cell to state index (`None` for walls).
    pub fn state_index(&self) -> Vec<Vec<Option<usize>>> {
        let mut index = vec![vec![None; self.width]; self.height];
        for (s, [r, c]) in self.state_cells().into_iter().enumerate() {
            index[r][c] = Some(s);
        }
        index
    }

    /// Deterministic successor state of every (state, action).
    pub fn successors(&self) -> Vec<[usize; N_GRID_ACTIONS]> {
        let index = self.state_index();
        self.state_cells()
            .iter()
            .enumerate()
            .map(|(s, &[r, c])| {
                let mut next = [s; N_GRID_ACTIONS];
                for (a, (dr, dc)) in MOVES.iter().enumerate() {
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr >= 0 && nc >= 0 && (nr as usize) < self.height && (nc as usize) < self.width {
                        if let Some(t) = index[nr as usize][nc as usize] {
                            next[a] = t;
                        }
                    }
                }
                next
            })
            .collect()
    }

    /// Per-state values of a named field, summed per cell, zero elsewhere.
    pub fn field_vector(&self, name: &str) -> Result<StateVector> {
        let entries = self
            .fields
            .get(name)
            .ok_or_else(|| Error::InvalidGrid(format!("unknown field {name:?}")))?;
        let index = self.state_index();
        let mut v = StateVector::zeros(self.n_states());
        for e in entries {
            let s = index[e.cell[0]][e.cell[1]]
                .ok_or_else(|| Error::InvalidGrid(format!("field {name}: cell {:?} is a wall", e.cell)))?;
            v[s] += e.value;
        }
        Ok(v)
    }

    /// A field as an action-independent `S×4` table.
    pub fn field_table(&self, name: &str) -> Result<Table> {
        let v = self.field_vector(name)?;
        Ok(Table::from_fn(v.len(), N_GRID_ACTIONS, |s, _| v[s]))
    }

    /// BFS reachability of every state from the initial cell.
    pub fn reachable_from_init(&self) -> Vec<bool> {
        let succ = self.successors();
        let start = self.state_index()[self.init[0]][self.init[1]].expect("init is not a wall");
        let mut seen = vec![false; succ.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for &t in &succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Row-major `height×width` grid of per-state values, NaN on walls.
    pub fn to_grid(&self, per_state: &StateVector) -> Vec<Vec<f64>> {
        self.state_index()
            .iter()
            .map(|row| row.iter().map(|s| s.map_or(f64::NAN, |s| per_state[s])).collect())
            .collect()
    }
}

/// Deterministic grid dynamics with `ρ₀` a Dirac on the initial cell.
pub fn build_mdp(spec: &GridSpec) -> Result<TabularMdp> {
    spec.validate()?;
    let n = spec.n_states();
    let mut kernels = vec![DMatrix::zeros(n, n); N_GRID_ACTIONS];
    for (s, next) in spec.successors().iter().enumerate() {
        for (a, &t) in next.iter().enumerate() {
            kernels[a][(s, t)] = 1.0;
        }
    }
    let start = spec.state_index()[spec.init[0]][spec.init[1]].expect("validated");
    let mut init = StateVector::zeros(n);
    init[start] = 1.0;
    TabularMdp::from_kernels(kernels, spec.gamma, init)
}

fn cells(entries: &[Cell], value: f64) -> Vec<FieldEntry> {
    entries.iter().map(|&cell| FieldEntry { cell, value }).collect()
}

fn square(top: usize, left: usize, size: usize) -> Vec<Cell> {
    (top..top + size)
        .flat_map(|r| (left..left + size).map(move |c| [r, c]))
        .collect()
}

/// 11×11 four-rooms layout with 104 open cells, start in the upper-left
/// corner and `γ = 0.99`.
///
/// Layout and field placements approximate the usual four-rooms figures;
/// they are editable data, not exact reproductions. Fields:
/// `goal` (linear RL), `target` (two disconnected 3×3 squares),
/// `cmdp_reward` / `cmdp_cost`, and `morl_r1..3` (three corner rewards).
pub fn four_rooms_default() -> GridSpec {
    let doors: BTreeSet<Cell> = [[2, 5], [8, 5], [5, 1], [6, 8]].into_iter().collect();
    let mut walls: Vec<Cell> = (0..11).map(|r| [r, 5]).collect();
    walls.extend((0..5).map(|c| [5, c]));
    walls.extend((6..11).map(|c| [6, c]));
    walls.retain(|c| !doors.contains(c));
    walls.sort();

    let mut fields = BTreeMap::new();
    fields.insert("goal".to_string(), cells(&[[10, 10]], 1.0));
    let mut target = square(1, 7, 3);
    target.extend(square(7, 1, 3));
    fields.insert("target".to_string(), cells(&target, 1.0));
    fields.insert("cmdp_reward".to_string(), cells(&[[10, 10]], 1.0));
    let mut cost = square(0, 6, 4);
    cost.extend(square(6, 0, 4));
    fields.insert("cmdp_cost".to_string(), cells(&cost, 1.0));
    fields.insert("morl_r1".to_string(), cells(&[[0, 10]], 1.0));
    fields.insert("morl_r2".to_string(), cells(&[[10, 0]], 1.0));
    fields.insert("morl_r3".to_string(), cells(&[[10, 10]], 1.0));

    GridSpec {
        width: 11,
        height: 11,
        walls,
        init: [0, 0],
        gamma: 0.99,
        fields,
    }
}

/// Uniform distribution over `cells` (a Dirac for a single cell).
pub fn dirac_target(spec: &GridSpec, target_cells: &[Cell]) -> Result<StateVector> {
    if target_cells.is_empty() {
        return Err(Error::InvalidArgument("target needs at least one cell".into()));
    }
    let index = spec.state_index();
    let mut v = StateVector::zeros(spec.n_states());
    for c in target_cells {
        let s = index
            .get(c[0])
            .and_then(|row| row.get(c[1]))
            .copied()
            .flatten()
            .ok_or_else(|| Error::InvalidArgument(format!("target cell {c:?} is not an open cell")))?;
        v[s] = 1.0;
    }
    let z = v.sum();
    Ok(v / z)
}

/// Sum of isotropic bumps `exp(-d²/2w²)` truncated at `3w`, normalised.
pub fn gaussian_like_target(spec: &GridSpec, centers: &[Cell], widths: &[f64]) -> Result<StateVector> {
    if centers.is_empty() || centers.len() != widths.len() {
        return Err(Error::InvalidArgument("need one width per center and at least one center".into()));
    }
    if widths.iter().any(|w| w.is_nan() || *w <= 0.0) {
        return Err(Error::InvalidArgument("widths must be positive".into()));
    }
    let cells = spec.state_cells();
    let mut v = StateVector::zeros(cells.len());
    for (center, &w) in centers.iter().zip(widths) {
        for (s, cell) in cells.iter().enumerate() {
            let dr = cell[0] as f64 - center[0] as f64;
            let dc = cell[1] as f64 - center[1] as f64;
            let d2 = dr * dr + dc * dc;
            if d2 <= 9.0 * w * w {
                v[s] += (-d2 / (2.0 * w * w)).exp();
            }
        }
    }
    let z = v.sum();
    if z <= 0.0 {
        return Err(Error::InvalidArgument("target has empty support".into()));
    }
    Ok(v / z)
}

/// Seeded generator used by every random fixture (Marsaglia xorshift128).
pub fn seeded_rng(seed: u64) -> XorShiftRng {
    XorShiftRng::seed_from_u64(seed)
}

/// Random MDP with Dirichlet-like transition rows, uniform `ρ₀` and
/// `γ = 0.9`; fully determined by `seed`.
pub fn random_mdp(n_states: usize, n_actions: usize, seed: u64) -> TabularMdp {
    random_mdp_with_discount(n_states, n_actions, RANDOM_MDP_DISCOUNT, seed)
}

pub fn random_mdp_with_discount(n_states: usize, n_actions: usize, discount: f64, seed: u64) -> TabularMdp {
    assert!(n_states >= 1 && n_actions >= 1, "sizes must be >= 1");
    let mut rng = seeded_rng(seed);
    let kernels = (0..n_actions)
        .map(|_| {
            let mut k = DMatrix::from_fn(n_states, n_states, |_, _| 1.0 - rng.random::<f64>());
            for mut row in k.row_iter_mut() {
                let z = row.sum();
                row /= z;
            }
            k
        })
        .collect();
    let init = StateVector::from_element(n_states, 1.0 / n_states as f64);
    TabularMdp::from_kernels(kernels, discount, init).expect("random rows are distributions")
}

fn exponential(rng: &mut impl Rng) -> f64 {
    -(1.0 - rng.random::<f64>()).ln()
}

/// Policy with independent flat-Dirichlet rows.
pub fn random_policy(rng: &mut impl Rng, n_states: usize, n_actions: usize) -> Policy {
    let mut probs = Table::from_fn(n_states, n_actions, |_, _| exponential(rng));
    for mut row in probs.row_iter_mut() {
        let z = row.sum();
        if z > 0.0 {
            row /= z;
        } else {
            row.fill(1.0 / n_actions as f64);
        }
    }
    Policy::new(probs).expect("normalised rows")
}

/// Flat-Dirichlet point of `Δ_{S×A}`.
pub fn random_simplex_point(rng: &mut impl Rng, n_states: usize, n_actions: usize) -> Table {
    let t = Table::from_fn(n_states, n_actions, |_, _| exponential(rng));
    let z = t.sum();
    t / z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(width: usize, height: usize) -> GridSpec {
        GridSpec {
            width,
            height,
            walls: vec![],
            init: [0, 0],
            gamma: 0.9,
            fields: BTreeMap::new(),
        }
    }

    #[test]
    fn one_cell_grid_self_loops() {
        let mdp = build_mdp(&tiny(1, 1)).unwrap();
        assert_eq!(mdp.n_states(), 1);
        for a in 0..4 {
            assert_eq!(mdp.transition(0, a, 0), 1.0);
        }
    }

    #[test]
    fn two_cell_grid_moves_right() {
        let mdp = build_mdp(&tiny(2, 1)).unwrap();
        assert_eq!(mdp.transition(0, 3, 1), 1.0);
        assert_eq!(mdp.transition(0, 0, 0), 1.0);
        assert_eq!(mdp.transition(0, 1, 0), 1.0);
        assert_eq!(mdp.transition(1, 2, 0), 1.0);
        assert_eq!(mdp.init_dist().as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn four_rooms_layout() {
        let spec = four_rooms_default();
        spec.validate().unwrap();
        assert_eq!(spec.n_states(), 104);
        assert!(spec.reachable_from_init().iter().all(|&r| r));
        let mdp = build_mdp(&spec).unwrap();
        assert_eq!(mdp.n_states(), 104);
        assert_eq!(mdp.discount(), 0.99);
    }

    #[test]
    fn rejects_invalid_specs() {
        let mut spec = tiny(3, 3);
        spec.walls.push([0, 0]);
        assert!(spec.validate().is_err());
        let mut spec = tiny(3, 3);
        spec.walls.push([3, 0]);
        assert!(spec.validate().is_err());
        let mut spec = tiny(3, 3);
        spec.gamma = 1.0;
        assert!(spec.validate().is_err());
        let mut spec = tiny(3, 3);
        spec.walls.push([1, 1]);
        spec.fields.insert("x".into(), vec![FieldEntry { cell: [1, 1], value: 1.0 }]);
        assert!(spec.validate().is_err());
        assert!(serde_json::from_str::<GridSpec>(r#"{"width":1,"height":1,"init":[0,0],"gamma":0.5,"extra":1}"#).is_err());
    }

    #[test]
    fn random_mdp_is_reproducible() {
        let a = random_mdp(7, 3, 42);
        let b = random_mdp(7, 3, 42);
        assert_eq!(a, b);
        assert_ne!(a, random_mdp(7, 3, 43));
        for act in 0..3 {
            for s in 0..7 {
                assert!((a.kernel(act).row(s).sum() - 1.0).abs() <= 1e-12);
            }
        }
        let one = random_mdp(1, 2, 0);
        assert_eq!(one.transition(0, 1, 0), 1.0);
    }

    #[test]
    fn targets() {
        let spec = four_rooms_default();
        let dirac = dirac_target(&spec, &[[3, 3]]).unwrap();
        assert_eq!(dirac.sum(), 1.0);
        assert_eq!(dirac.iter().filter(|p| **p > 0.0).count(), 1);

        let mut two = square(1, 7, 2);
        two.extend(square(8, 1, 2));
        let t = dirac_target(&spec, &two).unwrap();
        assert!((t.sum() - 1.0).abs() < 1e-15);
        assert_eq!(t.iter().filter(|p| **p > 0.0).count(), 8);
        assert!(dirac_target(&spec, &[]).is_err());
        assert!(dirac_target(&spec, &[[0, 5]]).is_err());

        let g = gaussian_like_target(&spec, &[[2, 8], [8, 2]], &[1.0, 1.0]).unwrap();
        assert!((g.sum() - 1.0).abs() < 1e-12);
        assert_eq!(g[spec.state_index()[0][0].unwrap()], 0.0);
    }

    #[test]
    fn fields_map_to_states() {
        let spec = four_rooms_default();
        let goal = spec.field_vector("goal").unwrap();
        assert_eq!(goal.sum(), 1.0);
        assert_eq!(goal[103], 1.0);
        assert!(spec.field_vector("nope").is_err());
        assert_eq!(spec.field_table("goal").unwrap().ncols(), 4);
    }
}
