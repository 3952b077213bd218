//! Order preservation of the set operators, band monotonicity and planner
//! optimality.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use safemdp::gp::update_bands;
use safemdp::mdp::masked_grid_mdp;
use safemdp::planner::shortest_safe_path;
use safemdp::reach::{r_eps_fixpoint_with, r_eps_with, r_reach, r_ret_fixpoint, r_safe, SafetyParams};
use safemdp::{ConfidenceBands, Error, StateId, StateSet};

use super::{edges, random_mdp, random_set, random_table_metric, relax_distances, to_bools};

fn subset_pair(rng: &mut ChaCha8Rng, n: usize) -> (StateSet, StateSet) {
    let pb = rng.random_range(0.1..0.8);
    let big = random_set(rng, n, pb);
    let small = StateSet::from_states(n, big.iter().filter(|_| rng.random_bool(0.6)));
    (small, big)
}

fn ensure(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!("order not preserved: {what}")))
    }
}

/// One randomized trial: for nested sets `A ⊆ B`, every operator maps to
/// nested results, and smaller safety values or larger `ε` never enlarge
/// the safe sets.
fn monotone_trial(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(4..=25);
    let metric = random_table_metric(&mut rng, n, 5.0);
    let mdp = random_mdp(&mut rng, n, 4, metric);
    let r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..2.0)).collect();
    let r_low: Vec<f64> = r.iter().map(|v| v - rng.random_range(0.0..0.5)).collect();
    let (lip, eps, h) = (rng.random_range(0.1..1.5), rng.random_range(0.0..0.3), 0.0);
    let (a, b) = subset_pair(&mut rng, n);
    let (ta, tb) = subset_pair(&mut rng, n);

    for params in [SafetyParams::lipschitz(&r, eps, lip, h), SafetyParams::pointwise(&r, eps, h)] {
        ensure(r_safe(&mdp, &a, &params).is_subset(&r_safe(&mdp, &b, &params)), "R_safe in S")?;
        ensure(r_eps_with(&mdp, &a, &params).is_subset(&r_eps_with(&mdp, &b, &params)), "R_eps in S")?;
        let fa = r_eps_fixpoint_with(&mdp, &a, &params).set;
        let fb = r_eps_fixpoint_with(&mdp, &b, &params).set;
        ensure(fa.is_subset(&fb), "closure in S")?;
    }
    let (lo, hi) = (SafetyParams::lipschitz(&r_low, eps, lip, h), SafetyParams::lipschitz(&r, eps, lip, h));
    ensure(r_safe(&mdp, &b, &lo).is_subset(&r_safe(&mdp, &b, &hi)), "R_safe in r")?;
    ensure(r_eps_fixpoint_with(&mdp, &b, &lo).set.is_subset(&r_eps_fixpoint_with(&mdp, &b, &hi).set), "closure in r")?;
    let (strict, loose) = (SafetyParams::pointwise(&r, eps + 0.2, h), SafetyParams::pointwise(&r, eps, h));
    ensure(
        r_eps_fixpoint_with(&mdp, &b, &strict).set.is_subset(&r_eps_fixpoint_with(&mdp, &b, &loose).set),
        "closure in eps",
    )?;
    ensure(r_reach(&mdp, &a).is_subset(&r_reach(&mdp, &b)), "R_reach")?;
    ensure(r_ret_fixpoint(&mdp, &a, &ta).is_subset(&r_ret_fixpoint(&mdp, &b, &ta)), "R_ret in through")?;
    ensure(r_ret_fixpoint(&mdp, &b, &ta).is_subset(&r_ret_fixpoint(&mdp, &b, &tb)), "R_ret in target")?;
    Ok(())
}

/// One 100-step sequence of random band updates.
fn band_trial(seed: u64) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=30);
    let seed_set = random_set(&mut rng, n, 0.3);
    let h = rng.random_range(-1.0..1.0);
    let mut bands = ConfidenceBands::initial(n, &seed_set, h);
    for _ in 0..100 {
        let means: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let vars: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
        let beta = rng.random_range(0.5..4.0);
        let next = update_bands(&bands, &means, &vars, beta);
        for s in 0..n {
            let (l0, u0, l1, u1) = (bands.lower()[s], bands.upper()[s], next.lower()[s], next.upper()[s]);
            if !(l1 >= l0 && u1 <= u0 && l1 <= u1) {
                return Err(TestCaseError::fail(format!("band [{l0}, {u0}] -> [{l1}, {u1}] at state {s}")));
            }
        }
        bands = next;
    }
    Ok(())
}

fn run_cases(cases: u32, trial: fn(u64) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&any::<u64>(), trial).map_err(|e| e.to_string())
}

pub fn check_operator_monotonicity(trials: u32) -> Result<(), String> {
    run_cases(trials, monotone_trial)
}

pub fn check_band_monotonicity(sequences: u32) -> Result<(), String> {
    run_cases(sequences, band_trial)
}

/// Planner hop counts against relaxation distances on random masked grids.
pub fn check_planner(grids: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for g in 0..grids {
        let (rows, cols) = (rng.random_range(2..12), rng.random_range(2..12));
        let keep: Vec<bool> = (0..rows * cols).map(|_| rng.random_bool(0.8)).collect();
        if !keep.iter().any(|&k| k) {
            continue;
        }
        let (mdp, _) = masked_grid_mdp(rows, cols, 1.0, |r, c| keep[r * cols + c]);
        let n = mdp.num_states();
        let allowed = random_set(&mut rng, n, 0.75);
        let allowed_b = to_bools(&allowed);
        let adj = edges(&mdp);
        for _ in 0..4 {
            let (from, to) = (StateId(rng.random_range(0..n)), StateId(rng.random_range(0..n)));
            let want = relax_distances(&adj, &allowed_b, from.0)[to.0];
            match (shortest_safe_path(&mdp, &allowed, from, to), want) {
                (Ok(plan), Some(d)) => {
                    if plan.hops() != d {
                        return Err(format!("grid {g}: {} hops, oracle {d}", plan.hops()));
                    }
                    if plan.states.first() != Some(&from) || plan.states.last() != Some(&to) {
                        return Err(format!("grid {g}: path endpoints wrong"));
                    }
                    if let Some(s) = plan.states.iter().find(|s| !allowed.contains(**s)) {
                        return Err(format!("grid {g}: path leaves the allowed set at {s}"));
                    }
                    for (i, &a) in plan.actions.iter().enumerate() {
                        if mdp.step(plan.states[i], a).ok() != Some(plan.states[i + 1]) {
                            return Err(format!("grid {g}: action {a} does not lead to the next path state"));
                        }
                    }
                }
                (Err(Error::NoPath { .. }), None) => {}
                (got, want) => return Err(format!("grid {g}: planner {got:?}, oracle {want:?}")),
            }
        }
    }
    Ok(())
}
