//! Set-operator equivalence against brute force.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use safemdp::reach::{
    r_eps_fixpoint_with, r_eps_with, r_reach, r_ret_fixpoint, r_ret_iterate, r_ret_one, r_safe, SafetyParams,
};
use safemdp::{Action, Mdp, Metric, StateId, StateSet};

use super::{edges, from_bools, random_mdp, random_set, random_table_metric, to_bools, Brute, Rule};

const VALUES: [f64; 4] = [-1.0, 0.25, 0.6, 1.25];
const H: f64 = 0.0;
const EPS: f64 = 0.25;
const LIP: f64 = 1.0;

/// Successor masks of one of the 20 per-state action configurations on four
/// states: a single action, or two actions with any pair of successors.
fn config(o: usize) -> Vec<(Action, StateId)> {
    if o < 4 {
        vec![(Action(0), StateId(o))]
    } else {
        let (x, y) = ((o - 4) / 4, (o - 4) % 4);
        vec![(Action(0), StateId(x)), (Action(1), StateId(y))]
    }
}

fn mask(set: &StateSet) -> u8 {
    set.iter().fold(0, |m, s| m | 1 << s.0)
}

fn set_of(m: u8) -> StateSet {
    StateSet::from_mask(4, m as u64)
}

struct Small {
    succ: [u8; 4],
    r: [f64; 4],
}

impl Small {
    fn reach(&self, b: u8) -> u8 {
        (0..4).filter(|s| b >> s & 1 == 1).fold(b, |m, s| m | self.succ[s])
    }

    fn ret_one(&self, through: u8, target: u8) -> u8 {
        (0..4).filter(|&s| through >> s & 1 == 1 && self.succ[s] & target != 0).fold(target, |m, s| m | 1 << s)
    }

    fn ret_bar(&self, through: u8, target: u8) -> u8 {
        let mut cur = target;
        loop {
            let next = self.ret_one(through, cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    fn safe(&self, b: u8, rule: Rule) -> u8 {
        (0..4)
            .filter(|&s| match rule {
                Rule::Pointwise => self.r[s] - EPS >= H,
                Rule::Lipschitz(l) => (0..4).any(|w| {
                    let d = if w == s { 0.0 } else { 1.0 };
                    b >> w & 1 == 1 && self.r[w] - EPS - l * d >= H
                }),
            })
            .fold(b, |m, s| m | 1 << s)
    }

    fn eps(&self, b: u8, rule: Rule) -> u8 {
        let safe = self.safe(b, rule);
        safe & self.reach(b) & self.ret_bar(safe, b)
    }

    fn fixpoint(&self, b: u8, rule: Rule) -> u8 {
        let mut cur = b;
        loop {
            let next = self.eps(cur, rule);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

fn params(r: &[f64], rule: Rule) -> SafetyParams<'_> {
    match rule {
        Rule::Pointwise => SafetyParams::pointwise(r, EPS, H),
        Rule::Lipschitz(l) => SafetyParams::lipschitz(r, EPS, l, H),
    }
}

/// Every deterministic MDP on four states with one or two actions per state.
/// Returns the number of MDPs checked.
pub fn check_exhaustive_small() -> Result<usize, String> {
    let mut count = 0;
    for code in 0..20usize.pow(4) {
        let opts = [code % 20, code / 20 % 20, code / 400 % 20, code / 8000];
        let transitions: Vec<_> = opts.iter().map(|&o| config(o)).collect();
        let succ: [u8; 4] = std::array::from_fn(|s| transitions[s].iter().fold(0, |m, &(_, t)| m | 1 << t.0));
        let r: [f64; 4] = std::array::from_fn(|s| VALUES[(code >> (2 * s)) & 3]);
        let mdp = Mdp::new(transitions, Metric::Discrete).map_err(|e| e.to_string())?;
        let small = Small { succ, r };
        for b in 0..16u8 {
            let base = set_of(b);
            if mask(&r_reach(&mdp, &base)) != small.reach(b) {
                return Err(format!("r_reach mismatch, mdp {code}, base {b:04b}"));
            }
            for rule in [Rule::Pointwise, Rule::Lipschitz(LIP)] {
                let p = params(&r, rule);
                if mask(&r_safe(&mdp, &base, &p)) != small.safe(b, rule) {
                    return Err(format!("r_safe mismatch ({rule:?}), mdp {code}, base {b:04b}"));
                }
                if mask(&r_eps_with(&mdp, &base, &p)) != small.eps(b, rule) {
                    return Err(format!("r_eps mismatch ({rule:?}), mdp {code}, base {b:04b}"));
                }
                let fix = r_eps_fixpoint_with(&mdp, &base, &p);
                if mask(&fix.set) != small.fixpoint(b, rule) {
                    return Err(format!("fixpoint mismatch ({rule:?}), mdp {code}, base {b:04b}"));
                }
                if fix.iterations > 4 + 1 {
                    return Err(format!("fixpoint took {} iterations on 4 states", fix.iterations));
                }
            }
            for t in 0..16u8 {
                let target = set_of(t);
                if mask(&r_ret_one(&mdp, &base, &target)) != small.ret_one(b, t) {
                    return Err(format!("r_ret_one mismatch, mdp {code}, through {b:04b}, target {t:04b}"));
                }
                let (ret, rounds) = r_ret_iterate(&mdp, &base, &target);
                if mask(&ret) != small.ret_bar(b, t) || rounds > 4 + 1 {
                    return Err(format!("r_ret_fixpoint mismatch, mdp {code}, through {b:04b}, target {t:04b}"));
                }
            }
        }
        count += 1;
    }
    Ok(count)
}

/// Random MDPs with 20 to 30 states and a Euclidean metric.
pub fn check_random(instances: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        let n = rng.random_range(20..=30);
        let metric = random_table_metric(&mut rng, n, 6.0);
        let mdp = random_mdp(&mut rng, n, 4, metric);
        let r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..3.0)).collect();
        let lip = rng.random_range(0.2..1.5);
        let dist = |a: usize, b: usize| mdp.distance(StateId(a), StateId(b));
        for rule in [Rule::Pointwise, Rule::Lipschitz(lip)] {
            let brute = Brute { adj: edges(&mdp), dist: &dist, r: &r, eps: 0.1, h: 0.0, rule };
            let p = match rule {
                Rule::Pointwise => SafetyParams::pointwise(&r, 0.1, 0.0),
                Rule::Lipschitz(l) => SafetyParams::lipschitz(&r, 0.1, l, 0.0),
            };
            for _ in 0..3 {
                let (pb, pt) = (rng.random_range(0.05..0.5), rng.random_range(0.2..0.9));
                let base = random_set(&mut rng, n, pb);
                let through = random_set(&mut rng, n, pt);
                let b = to_bools(&base);
                let th = to_bools(&through);
                let checks = [
                    ("r_safe", r_safe(&mdp, &base, &p), from_bools(&brute.safe(&b))),
                    ("r_reach", r_reach(&mdp, &base), from_bools(&brute.reach(&b))),
                    ("r_ret_one", r_ret_one(&mdp, &through, &base), from_bools(&brute.ret_one(&th, &b))),
                    ("r_ret_fixpoint", r_ret_fixpoint(&mdp, &through, &base), from_bools(&brute.ret_bar(&th, &b))),
                    ("r_eps", r_eps_with(&mdp, &base, &p), from_bools(&brute.eps_step(&b))),
                ];
                for (name, got, want) in checks {
                    if got != want {
                        return Err(format!("{name} mismatch on random instance {i} ({rule:?})"));
                    }
                }
                let (_, rounds) = r_ret_iterate(&mdp, &through, &base);
                if rounds > n + 1 {
                    return Err(format!("r_ret_fixpoint took {rounds} rounds on {n} states"));
                }
                let fix = r_eps_fixpoint_with(&mdp, &base, &p);
                let (want, changes) = brute.fixpoint(&b);
                if fix.set != from_bools(&want) {
                    return Err(format!("fixpoint mismatch on random instance {i} ({rule:?})"));
                }
                if changes > n || fix.iterations > n + 1 {
                    return Err(format!("fixpoint did not stabilize within {n} iterations"));
                }
            }
        }
    }
    Ok(instances)
}
