//! Independent reference implementations used by the integration tests and
//! the acceptance suite. Nothing here calls into the library's algorithms;
//! only plain data types are shared.
#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use safemdp::{Action, Mdp, Metric, StateId, StateSet};

/// Dense GP posterior by direct linear solves.
pub struct DenseGp {
    k_inv: DMatrix<f64>,
    alpha: DVector<f64>,
    inputs: Vec<usize>,
}

impl DenseGp {
    pub fn new(cov: &dyn Fn(usize, usize) -> f64, noise_var: f64, inputs: &[usize], y: &[f64]) -> Self {
        let n = inputs.len();
        let k = DMatrix::from_fn(n, n, |i, j| cov(inputs[i], inputs[j]) + if i == j { noise_var } else { 0.0 });
        let k_inv = k.try_inverse().expect("kernel matrix with noise is invertible");
        let alpha = &k_inv * DVector::from_column_slice(y);
        Self { k_inv, alpha, inputs: inputs.to_vec() }
    }

    fn kvec(&self, cov: &dyn Fn(usize, usize) -> f64, q: usize) -> DVector<f64> {
        DVector::from_iterator(self.inputs.len(), self.inputs.iter().map(|&x| cov(x, q)))
    }

    pub fn mean(&self, cov: &dyn Fn(usize, usize) -> f64, q: usize) -> f64 {
        self.kvec(cov, q).dot(&self.alpha)
    }

    pub fn cov(&self, cov: &dyn Fn(usize, usize) -> f64, a: usize, b: usize) -> f64 {
        let (ka, kb) = (self.kvec(cov, a), self.kvec(cov, b));
        cov(a, b) - ka.dot(&(&self.k_inv * kb))
    }
}

/// `|a - b|` relative to `max(|b|, scale)`.
pub fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / b.abs().max(scale)
}

/// Random points in the plane with their Euclidean distance table.
pub fn random_table_metric(rng: &mut impl Rng, n: usize, extent: f64) -> Metric {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random::<f64>() * extent, rng.random::<f64>() * extent)).collect();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1);
        }
    }
    Metric::Table { n, distances: d.into() }
}

/// Random deterministic MDP with `1..=max_actions` actions per state.
pub fn random_mdp(rng: &mut impl Rng, n: usize, max_actions: u8, metric: Metric) -> Mdp {
    let transitions = (0..n)
        .map(|_| {
            let k = rng.random_range(1..=max_actions);
            (0..k).map(|a| (Action(a), StateId(rng.random_range(0..n)))).collect()
        })
        .collect();
    Mdp::new(transitions, metric).unwrap()
}

pub fn random_set(rng: &mut impl Rng, n: usize, p: f64) -> StateSet {
    StateSet::from_states(n, (0..n).filter(|_| rng.random_bool(p)).map(StateId))
}

/// Adjacency list read off the MDP.
pub fn edges(mdp: &Mdp) -> Vec<Vec<usize>> {
    mdp.states().map(|s| mdp.actions(s).iter().map(|&(_, t)| t.0).collect()).collect()
}

pub fn to_bools(set: &StateSet) -> Vec<bool> {
    (0..set.capacity()).map(|i| set.contains(StateId(i))).collect()
}

pub fn from_bools(b: &[bool]) -> StateSet {
    StateSet::from_states(b.len(), b.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| StateId(i)))
}

/// How certification works in the brute-force operators.
#[derive(Clone, Copy, Debug)]
pub enum Rule {
    Lipschitz(f64),
    Pointwise,
}

/// Brute-force reference for the set operators, written directly from the
/// set definitions over boolean vectors.
pub struct Brute<'a> {
    pub adj: Vec<Vec<usize>>,
    pub dist: &'a dyn Fn(usize, usize) -> f64,
    pub r: &'a [f64],
    pub eps: f64,
    pub h: f64,
    pub rule: Rule,
}

impl Brute<'_> {
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn safe(&self, base: &[bool]) -> Vec<bool> {
        (0..self.n())
            .map(|s| {
                base[s]
                    || match self.rule {
                        Rule::Pointwise => self.r[s] - self.eps >= self.h,
                        Rule::Lipschitz(l) => {
                            (0..self.n()).any(|w| base[w] && self.r[w] - self.eps - l * (self.dist)(s, w) >= self.h)
                        }
                    }
            })
            .collect()
    }

    pub fn reach(&self, base: &[bool]) -> Vec<bool> {
        (0..self.n()).map(|s| base[s] || (0..self.n()).any(|p| base[p] && self.adj[p].contains(&s))).collect()
    }

    pub fn ret_one(&self, through: &[bool], target: &[bool]) -> Vec<bool> {
        (0..self.n()).map(|s| target[s] || (through[s] && self.adj[s].iter().any(|&t| target[t]))).collect()
    }

    /// Transitive closure (Warshall) over edges leaving `through` states.
    pub fn ret_bar(&self, through: &[bool], target: &[bool]) -> Vec<bool> {
        let n = self.n();
        let mut path = vec![vec![false; n]; n];
        for s in 0..n {
            if through[s] {
                for &t in &self.adj[s] {
                    path[s][t] = true;
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                if path[i][k] {
                    for j in 0..n {
                        if path[k][j] {
                            path[i][j] = true;
                        }
                    }
                }
            }
        }
        (0..n).map(|s| target[s] || (0..n).any(|t| target[t] && path[s][t])).collect()
    }

    pub fn eps_step(&self, base: &[bool]) -> Vec<bool> {
        let safe = self.safe(base);
        let reach = self.reach(base);
        let ret = self.ret_bar(&safe, base);
        (0..self.n()).map(|s| safe[s] && reach[s] && ret[s]).collect()
    }

    /// Iterates [`Brute::eps_step`] from `seed`; returns the limit and the
    /// number of steps that changed the set.
    pub fn fixpoint(&self, seed: &[bool]) -> (Vec<bool>, usize) {
        let mut cur = seed.to_vec();
        let mut changes = 0;
        loop {
            let next = self.eps_step(&cur);
            if next == cur {
                return (cur, changes);
            }
            cur = next;
            changes += 1;
        }
    }
}

/// Hop distances by Bellman-Ford relaxation over allowed states.
pub fn relax_distances(adj: &[Vec<usize>], allowed: &[bool], from: usize) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut d = vec![None; n];
    if !allowed[from] {
        return d;
    }
    d[from] = Some(0);
    for _ in 0..n {
        let mut changed = false;
        for s in 0..n {
            let Some(ds) = d[s] else { continue };
            for &t in &adj[s] {
                if allowed[t] && d[t].map_or(true, |dt| dt > ds + 1) {
                    d[t] = Some(ds + 1);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}

/// BFS from `from` inside `allowed`, returning visited membership.
pub fn connected_within(adj: &[Vec<usize>], allowed: &[bool], from: usize, to: usize) -> bool {
    relax_distances(adj, allowed, from)[to].is_some()
}

pub mod explore_checks;
pub mod gp_checks;
pub mod property_checks;
pub mod reach_checks;
