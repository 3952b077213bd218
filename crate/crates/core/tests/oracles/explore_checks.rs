//! End-to-end checks on seeded exploration runs: the ergodic set stays
//! mutually connected through the safe set, and noiseless runs end between
//! the two brute-force closures.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use safemdp::gp::StationaryCovariance;
use safemdp::mdp::grid_mdp;
use safemdp::terrain::{build_terrain_environment, synth_terrain, CraterHillParams, TerrainKind, TerrainSafetySpec};
use safemdp::{
    run_safemdp, BetaSchedule, ClassifierMode, Environment, ExplorerConfig, GpBelief, Kernel, StateId, StateSet,
    TerminalReason,
};

use super::{connected_within, edges, from_bools, to_bools, Brute, Rule};

/// Aggregate of [`check_ergodicity`].
#[derive(Debug, Default)]
pub struct ErgodicitySummary {
    pub runs: usize,
    pub snapshots: usize,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

/// SafeMDP runs on 6 x 6 crater terrains whose crater position varies with the
/// seed. Every snapshot must have `Ŝ_t ⊆ S_t`, and `pairs` sampled pairs of
/// `Ŝ_t` must reach each other in both directions without leaving `S_t`.
pub fn check_ergodicity(runs: u64, pairs: usize) -> ErgodicitySummary {
    let mut summary = ErgodicitySummary::default();
    for seed in 0..runs {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let mut params = CraterHillParams::default_for(6, 6);
        params.hill.amplitude = 0.0;
        params.crater.center = (rng.random_range(3.0..5.0), rng.random_range(2.5..5.0));
        params.crater.radius = 1.2;
        params.crater.amplitude = 4.0;
        let grid = synth_terrain(&TerrainKind::CraterHill { params }, 6, 6, 1.0).unwrap();
        let terrain = build_terrain_environment(grid, &TerrainSafetySpec::default(), 0.075, seed).unwrap();
        let seed_set = terrain.seed_block(0, 0, 1).unwrap();
        let mut belief = terrain.difference_belief(Kernel::matern52(14.5, 10.0).unwrap(), 0.075).unwrap();
        let cfg =
            ExplorerConfig::new(seed_set, BetaSchedule::constant(2.0).unwrap(), ClassifierMode::GpDirect, 0.1, 0.15)
                .with_max_iterations(150);
        let mut env = terrain.env.clone();
        let trace = match run_safemdp(terrain.mdp(), &mut env, &mut belief, &cfg) {
            Ok(t) => t,
            Err(e) => {
                summary.failures.push(format!("run {seed}: {e}"));
                continue;
            }
        };
        summary.runs += 1;
        let adj = edges(terrain.mdp());
        for (i, sets) in trace.snapshots().enumerate() {
            summary.snapshots += 1;
            if !sets.ergodic.is_subset(&sets.safe) {
                summary.failures.push(format!("run {seed}, snapshot {i}: ergodic set leaves the safe set"));
                continue;
            }
            let members: Vec<StateId> = sets.ergodic.iter().collect();
            let allowed = to_bools(&sets.safe);
            for _ in 0..pairs {
                let a = members[rng.random_range(0..members.len())];
                let b = members[rng.random_range(0..members.len())];
                summary.pairs_checked += 1;
                if !connected_within(&adj, &allowed, a.0, b.0) || !connected_within(&adj, &allowed, b.0, a.0) {
                    summary.failures.push(format!("run {seed}, snapshot {i}: {a} and {b} not mutually reachable"));
                }
            }
        }
    }
    summary
}

/// Outcome of one completeness fixture.
#[derive(Debug)]
pub struct CompletenessRun {
    pub fixture: u64,
    pub terminal: TerminalReason,
    pub iterations: usize,
    pub explored: usize,
    pub lower: usize,
    pub upper: usize,
    pub ok: bool,
}

/// Noiseless runs on 5 x 5 grids whose safety values are exact draws from
/// the GP prior. The Lipschitz constant is the largest slope between any two
/// cells, the threshold sits at the 20% quantile and the seed is the best
/// cell. The terminal ergodic set must satisfy `R̄_ε(S₀) ⊆ Ŝ ⊆ R̄_0(S₀)` and
/// the run must stop before the iteration budget.
pub fn check_completeness(fixtures: u64, beta: f64, eps: f64, max_iterations: usize) -> Vec<CompletenessRun> {
    let (rows, cols) = (5, 5);
    let n = rows * cols;
    let kernel = Kernel::matern52(4.0, 1.0).unwrap();
    (0..fixtures)
        .map(|fixture| {
            let r =
                synth_terrain(&TerrainKind::GpSample { kernel, seed: 500 + fixture }, rows, cols, 1.0).unwrap().heights;
            let mdp = grid_mdp(rows, cols, 1.0);
            let dist = |a: usize, b: usize| mdp.distance(StateId(a), StateId(b));
            let mut lip: f64 = 0.0;
            for a in 0..n {
                for b in 0..a {
                    lip = lip.max((r[a] - r[b]).abs() / dist(a, b));
                }
            }
            let mut sorted = r.clone();
            sorted.sort_by(f64::total_cmp);
            let h = sorted[n / 5];
            let best = (0..n).max_by(|&a, &b| r[a].total_cmp(&r[b])).unwrap();
            let seed = StateSet::from_states(n, [StateId(best)]);

            let adj = edges(&mdp);
            let oracle = |e: f64| {
                let brute = Brute { adj: adj.clone(), dist: &dist, r: &r, eps: e, h, rule: Rule::Lipschitz(lip) };
                from_bools(&brute.fixpoint(&to_bools(&seed)).0)
            };
            let (lower, upper) = (oracle(eps), oracle(0.0));

            let cov = Arc::new(StationaryCovariance::new(kernel, mdp.metric().clone()));
            let mut belief = GpBelief::new(cov, 1e-6, n).unwrap();
            let mut env = Environment::new(r.clone(), h, 1e-6, fixture).unwrap();
            let cfg = ExplorerConfig::new(
                seed,
                BetaSchedule::constant(beta).unwrap(),
                ClassifierMode::Lipschitz(lip),
                lip,
                eps,
            )
            .with_max_iterations(max_iterations);
            let trace = run_safemdp(&mdp, &mut env, &mut belief, &cfg).unwrap();
            let explored = &trace.final_sets.ergodic;
            let stopped = matches!(trace.terminal, TerminalReason::Converged | TerminalReason::ExpandersEmpty);
            CompletenessRun {
                fixture,
                terminal: trace.terminal,
                iterations: trace.iterations(),
                explored: explored.len(),
                lower: lower.len(),
                upper: upper.len(),
                ok: stopped && lower.is_subset(explored) && explored.is_subset(&upper),
            }
        })
        .collect()
}
