use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    Baseline, Environment, ExplorationTrace, ExplorerConfig, IterationRecord, SafetyBelief, Strategy, TerminalReason,
};
use crate::error::{Error, Result};
use crate::gp::{update_bands, ConfidenceBands};
use crate::mdp::{Mdp, StateId};
use crate::planner::{shortest_safe_path, PathPlan};
use crate::reach::StateSet;
use crate::safeset::{acquisition_target, classify_safe, ergodic_safe, reachable_safe, SafeSets};

/// Stream offset separating the random walk's action choices from the
/// environment's measurement noise.
const WALK_STREAM: u64 = 0x5DEE_CE66;

/// Runs the main algorithm.
pub fn run_safemdp(
    mdp: &Mdp,
    env: &mut Environment,
    belief: &mut dyn SafetyBelief,
    cfg: &ExplorerConfig,
) -> Result<ExplorationTrace> {
    run_strategy(Strategy::SafeMdp, mdp, env, belief, cfg)
}

/// Runs one of the comparison strategies.
pub fn run_baseline(
    kind: Baseline,
    mdp: &Mdp,
    env: &mut Environment,
    belief: &mut dyn SafetyBelief,
    cfg: &ExplorerConfig,
) -> Result<ExplorationTrace> {
    run_strategy(Strategy::Baseline(kind), mdp, env, belief, cfg)
}

pub fn run_strategy(
    strategy: Strategy,
    mdp: &Mdp,
    env: &mut Environment,
    belief: &mut dyn SafetyBelief,
    cfg: &ExplorerConfig,
) -> Result<ExplorationTrace> {
    cfg.validate(mdp)?;
    let n = mdp.num_states();
    for found in [env.num_states(), belief.num_states()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    let mut run = Run::new(strategy, mdp, cfg, env.threshold());
    let start = cfg.start_state().expect("validated seed set is nonempty");
    run.trajectory.push(start);
    if !env.is_safe(start) {
        let sets = run.classify(&run.bands.clone(), &cfg.seed_set)?;
        return Ok(run.finish(TerminalReason::Violation { step: 0 }, sets));
    }
    match strategy {
        Strategy::Baseline(Baseline::Random) => run.random_walk(env, belief, start),
        _ => run.explore(env, belief, start),
    }
}

struct Run<'a> {
    strategy: Strategy,
    mdp: &'a Mdp,
    cfg: &'a ExplorerConfig,
    h: f64,
    bands: ConfidenceBands,
    records: Vec<IterationRecord>,
    trajectory: Vec<StateId>,
}

impl<'a> Run<'a> {
    fn new(strategy: Strategy, mdp: &'a Mdp, cfg: &'a ExplorerConfig, h: f64) -> Self {
        Self {
            strategy,
            mdp,
            cfg,
            h,
            bands: ConfidenceBands::initial(mdp.num_states(), &cfg.seed_set, h),
            records: Vec::new(),
            trajectory: Vec::new(),
        }
    }

    fn agent_steps(&self) -> usize {
        self.trajectory.len() - 1
    }

    fn finish(self, terminal: TerminalReason, final_sets: SafeSets) -> ExplorationTrace {
        ExplorationTrace {
            strategy: self.strategy,
            agent_steps: self.trajectory.len() - 1,
            records: self.records,
            terminal,
            trajectory: self.trajectory,
            final_sets,
            band_collapses: self.bands.collapses(),
        }
    }

    fn refresh_bands(&mut self, belief: &dyn SafetyBelief, t: usize) -> Result<()> {
        let beta = self.cfg.beta.beta(t as u64)?;
        let (means, vars) = belief.posterior();
        self.bands = update_bands(&self.bands, &means, &vars, beta);
        Ok(())
    }

    fn classify(&self, bands: &ConfidenceBands, prev: &StateSet) -> Result<SafeSets> {
        let safe = classify_safe(self.mdp, bands, prev, self.h, self.cfg.mode);
        let ergodic = match self.strategy {
            Strategy::Baseline(Baseline::NonErgodic) => reachable_safe(self.mdp, &safe, prev),
            _ => ergodic_safe(self.mdp, &safe, prev)?,
        };
        Ok(SafeSets::from_parts(self.mdp, bands, safe, ergodic, self.cfg.lipschitz_for_expanders, self.h))
    }

    /// Repeats the classification under fixed bands until the ergodic set
    /// stops growing. Without this, a run could stop while the ergodic set
    /// can still expand from information it already has.
    fn settle(&self, mut sets: SafeSets) -> Result<SafeSets> {
        loop {
            let next = self.classify(&self.bands, &sets.ergodic)?;
            if next.ergodic == sets.ergodic {
                return Ok(next);
            }
            sets = next;
        }
    }

    fn candidates(&self, sets: &SafeSets) -> StateSet {
        match self.strategy {
            Strategy::SafeMdp | Strategy::Baseline(Baseline::NonErgodic) => sets.expanders.clone(),
            Strategy::Baseline(Baseline::NoExpanders) => sets.ergodic.clone(),
            Strategy::Baseline(Baseline::Unsafe) | Strategy::Baseline(Baseline::Random) => {
                StateSet::full(self.mdp.num_states())
            }
        }
    }

    fn choose(&self, sets: &SafeSets) -> std::result::Result<StateId, TerminalReason> {
        match acquisition_target(&self.candidates(sets), &sets.widths) {
            None => Err(TerminalReason::ExpandersEmpty),
            Some(s) if sets.widths[s.0] <= self.cfg.epsilon => Err(TerminalReason::Converged),
            Some(s) => Ok(s),
        }
    }

    fn explore(
        mut self,
        env: &mut Environment,
        belief: &mut dyn SafetyBelief,
        start: StateId,
    ) -> Result<ExplorationTrace> {
        let mut position = start;
        let mut ergodic = self.cfg.seed_set.clone();
        let full = StateSet::full(self.mdp.num_states());
        for t in 1..=self.cfg.max_iterations {
            self.refresh_bands(belief, t)?;
            let mut sets = self.classify(&self.bands, &ergodic)?;
            let mut choice = self.choose(&sets);
            if choice.is_err() {
                sets = self.settle(sets)?;
                choice = self.choose(&sets);
            }
            let target = match choice {
                Ok(s) => s,
                Err(reason) => return Ok(self.finish(reason, sets)),
            };
            // Ergodic states are only guaranteed to return through the safe
            // set, so paths may leave the ergodic set but never the safe set.
            let allowed = match self.strategy {
                Strategy::Baseline(Baseline::Unsafe) => &full,
                _ => &sets.safe,
            };
            let path = match shortest_safe_path(self.mdp, allowed, position, target) {
                Ok(p) => p,
                Err(Error::NoPath { .. }) => return Ok(self.finish(TerminalReason::Stuck, sets)),
                Err(e) => return Err(e),
            };
            for (i, &s) in path.states.iter().enumerate().skip(1) {
                self.trajectory.push(s);
                if !env.is_safe(s) {
                    let step = self.agent_steps();
                    return Ok(self.finish(TerminalReason::Violation { step }, sets));
                }
                if self.cfg.measure_along_path && i + 1 < path.states.len() {
                    belief.observe(s, env)?;
                }
            }
            position = target;
            let observation = belief.observe(target, env)?;
            ergodic = sets.ergodic.clone();
            self.records.push(IterationRecord {
                t,
                target,
                width: sets.widths[target.0],
                path,
                observation,
                bands_digest: self.bands.digest(),
                sets,
            });
        }
        self.refresh_bands(belief, self.cfg.max_iterations + 1)?;
        let sets = self.classify(&self.bands, &ergodic)?;
        Ok(self.finish(TerminalReason::MaxIterations, sets))
    }

    fn random_walk(
        mut self,
        env: &mut Environment,
        belief: &mut dyn SafetyBelief,
        start: StateId,
    ) -> Result<ExplorationTrace> {
        let mut rng = ChaCha8Rng::seed_from_u64(env.seed() ^ WALK_STREAM);
        let mut position = start;
        let mut ergodic = self.cfg.seed_set.clone();
        for t in 1..=self.cfg.max_iterations {
            self.refresh_bands(belief, t)?;
            let sets = self.classify(&self.bands, &ergodic)?;
            let actions = self.mdp.actions(position);
            let (action, next) = actions[rng.random_range(0..actions.len())];
            self.trajectory.push(next);
            if !env.is_safe(next) {
                let step = self.agent_steps();
                return Ok(self.finish(TerminalReason::Violation { step }, sets));
            }
            let observation = belief.observe(next, env)?;
            ergodic = sets.ergodic.clone();
            self.records.push(IterationRecord {
                t,
                target: next,
                width: sets.widths[next.0],
                path: PathPlan { actions: vec![action], states: vec![position, next] },
                observation,
                bands_digest: self.bands.digest(),
                sets,
            });
            position = next;
        }
        self.refresh_bands(belief, self.cfg.max_iterations + 1)?;
        let sets = self.classify(&self.bands, &ergodic)?;
        Ok(self.finish(TerminalReason::MaxIterations, sets))
    }
}
