//! Tabular episodic MDPs, trajectory simulation, and the two built-in
//! instance generators: a small risky/safe bandit-style MDP and a family of
//! hard exploration instances built around an A-ary tree.

use std::fs;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SIMPLEX_TOL: f64 = 1e-9;

/// Finite-horizon MDP with deterministic rewards in [0, 1].
///
/// Indexing is 0-based internally: `transitions[h][s][a]` is the next-state
/// row at step h+1, `rewards[h][s][a]` the reward collected when taking `a`
/// in `s` at step h+1.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularMDP {
    pub num_states: usize,
    pub num_actions: usize,
    pub horizon: usize,
    pub transitions: Vec<Vec<Vec<Vec<f64>>>>,
    pub rewards: Vec<Vec<Vec<f64>>>,
    pub initial_state: usize,
}

impl TabularMDP {
    pub fn new(
        transitions: Vec<Vec<Vec<Vec<f64>>>>,
        rewards: Vec<Vec<Vec<f64>>>,
        initial_state: usize,
    ) -> Result<Self> {
        let horizon = transitions.len();
        if horizon == 0 {
            return Err(Error::Validation("horizon must be >= 1".into()));
        }
        let num_states = transitions[0].len();
        if num_states == 0 {
            return Err(Error::Validation("need at least one state".into()));
        }
        let num_actions = transitions[0][0].len();
        if num_actions == 0 {
            return Err(Error::Validation("need at least one action".into()));
        }
        let mdp = TabularMDP {
            num_states,
            num_actions,
            horizon,
            transitions,
            rewards,
            initial_state,
        };
        mdp.validate()?;
        Ok(mdp)
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial_state >= self.num_states {
            return Err(Error::Validation(format!(
                "initial state {} out of range",
                self.initial_state
            )));
        }
        if self.transitions.len() != self.horizon || self.rewards.len() != self.horizon {
            return Err(Error::Validation("horizon-indexed tensors disagree".into()));
        }
        for h in 0..self.horizon {
            if self.transitions[h].len() != self.num_states
                || self.rewards[h].len() != self.num_states
            {
                return Err(Error::Validation(format!("ragged state axis at h={h}")));
            }
            for s in 0..self.num_states {
                if self.transitions[h][s].len() != self.num_actions
                    || self.rewards[h][s].len() != self.num_actions
                {
                    return Err(Error::Validation(format!(
                        "ragged action axis at h={h}, s={s}"
                    )));
                }
                for a in 0..self.num_actions {
                    let row = &self.transitions[h][s][a];
                    if row.len() != self.num_states {
                        return Err(Error::Validation(format!(
                            "ragged next-state axis at h={h}, s={s}, a={a}"
                        )));
                    }
                    let mut sum = 0.0;
                    for &p in row {
                        if !(0.0..=1.0 + SIMPLEX_TOL).contains(&p) {
                            return Err(Error::Validation(format!(
                                "transition probability {p} at h={h}, s={s}, a={a}"
                            )));
                        }
                        sum += p;
                    }
                    if (sum - 1.0).abs() > SIMPLEX_TOL {
                        return Err(Error::Validation(format!(
                            "transition row sums to {sum} at h={h}, s={s}, a={a}"
                        )));
                    }
                    let r = self.rewards[h][s][a];
                    if !(0.0..=1.0).contains(&r) {
                        return Err(Error::Validation(format!(
                            "reward {r} outside [0,1] at h={h}, s={s}, a={a}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Deterministic step-indexed policy: `actions[h][s]` is the action taken in
/// state `s` at step h+1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    pub actions: Vec<Vec<usize>>,
}

impl Policy {
    pub fn matches(&self, mdp: &TabularMDP) -> bool {
        self.actions.len() == mdp.horizon
            && self.actions.iter().all(|row| {
                row.len() == mdp.num_states && row.iter().all(|&a| a < mdp.num_actions)
            })
    }
}

/// One transition of a simulated episode; `h` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryStep {
    pub h: usize,
    pub state: usize,
    pub action: usize,
    pub reward: f64,
    pub next_state: usize,
}

/// A full episode, exactly `horizon` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
}

impl Trajectory {
    pub fn total_reward(&self) -> f64 {
        self.steps.iter().map(|st| st.reward).sum()
    }
}

/// Rolls out `policy` for one episode. Deterministic given the rng state.
pub fn simulate_episode<R: Rng>(mdp: &TabularMDP, policy: &Policy, rng: &mut R) -> Trajectory {
    assert!(policy.matches(mdp), "policy shape mismatch");
    let mut steps = Vec::with_capacity(mdp.horizon);
    let mut s = mdp.initial_state;
    for h in 0..mdp.horizon {
        let a = policy.actions[h][s];
        let row = &mdp.transitions[h][s][a];
        let u: f64 = rng.gen();
        let mut cum = 0.0;
        let mut next = mdp.num_states - 1;
        for (sp, &p) in row.iter().enumerate() {
            cum += p;
            if u < cum {
                next = sp;
                break;
            }
        }
        steps.push(TrajectoryStep {
            h: h + 1,
            state: s,
            action: a,
            reward: mdp.rewards[h][s][a],
            next_state: next,
        });
        s = next;
    }
    Trajectory { steps }
}

/// The 6-state, 5-action, horizon-5 benchmark MDP. Actions 0..3 are "risky":
/// half the mass lands on the reward-1 state, the rest spreads over three
/// zero-reward states. Action 4 is "safe": it reaches a reward-0.4 state with
/// probability 0.999. A risk-neutral agent prefers the risky actions (mean
/// 0.5 per step); a sufficiently risk-averse one prefers the safe action.
pub fn make_risky_mdp() -> TabularMDP {
    let s_count = 6;
    let a_count = 5;
    let horizon = 5;
    let mut row_risky = vec![0.0; s_count];
    row_risky[1] = 0.5;
    for sp in 2..=4 {
        row_risky[sp] = 0.5 / 3.0;
    }
    let mut row_safe = vec![0.0; s_count];
    row_safe[5] = 0.999;
    for sp in 1..=4 {
        row_safe[sp] = 0.001 / 4.0;
    }
    let mut transitions = vec![vec![vec![vec![0.0; s_count]; a_count]; s_count]; horizon];
    let mut rewards = vec![vec![vec![0.0; a_count]; s_count]; horizon];
    for h in 0..horizon {
        for s in 0..s_count {
            for a in 0..a_count {
                transitions[h][s][a] = if a == a_count - 1 {
                    row_safe.clone()
                } else {
                    row_risky.clone()
                };
                if s == 1 {
                    rewards[h][s][a] = 1.0;
                } else if s == 5 {
                    rewards[h][s][a] = 0.4;
                }
            }
        }
    }
    TabularMDP::new(transitions, rewards, 0).expect("risky MDP is valid by construction")
}

/// Parameters of one hard exploration instance: a waiting state feeding a
/// full `branching`-ary tree of depth `depth - 1`, whose leaves gamble
/// between a good absorbing state (reward 1 late in the episode) and a bad
/// one. Exactly one (step, leaf, action) triple has its success probability
/// raised from `p` to `p + epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardInstanceSpec {
    pub branching: usize,
    pub depth: usize,
    pub waiting: usize,
    pub horizon: usize,
    /// 1-based step at which the starred leaf must be entered.
    pub h_star: usize,
    /// 0-based leaf index (breadth-first order among leaves).
    pub leaf_star: usize,
    pub a_star: usize,
    pub p: f64,
    pub epsilon: f64,
    pub beta: f64,
}

impl HardInstanceSpec {
    pub fn validate(&self) -> Result<()> {
        let e = |m: String| Err(Error::invalid(m));
        if self.branching < 2 {
            return e(format!("branching {} must be >= 2", self.branching));
        }
        if self.depth < 1 {
            return e("tree depth must be >= 1".into());
        }
        if self.waiting < 1 || self.horizon != 3 * self.waiting {
            return e(format!(
                "need horizon = 3 * waiting with waiting >= 1, got {} and {}",
                self.horizon, self.waiting
            ));
        }
        if self.horizon < 3 * self.depth {
            return e(format!(
                "horizon {} shorter than 3 * depth {}",
                self.horizon, self.depth
            ));
        }
        if self.h_star < self.depth + 1 || self.h_star > self.waiting + self.depth {
            return e(format!(
                "h_star {} outside [{}, {}]",
                self.h_star,
                self.depth + 1,
                self.waiting + self.depth
            ));
        }
        if self.leaf_star >= self.num_leaves() {
            return e(format!(
                "leaf_star {} out of range (0..{})",
                self.leaf_star,
                self.num_leaves()
            ));
        }
        if self.a_star >= self.branching {
            return e(format!("a_star {} out of range", self.a_star));
        }
        if !(self.p >= 0.0 && self.epsilon >= 0.0 && self.p + self.epsilon <= 1.0) {
            return e(format!(
                "need p >= 0, epsilon >= 0, p + epsilon <= 1; got {} and {}",
                self.p, self.epsilon
            ));
        }
        if !self.beta.is_finite() || self.beta == 0.0 {
            return e(format!("beta must be finite and nonzero, got {}", self.beta));
        }
        Ok(())
    }

    /// Tree node count (branching^depth - 1) / (branching - 1).
    pub fn num_tree_nodes(&self) -> usize {
        let a = self.branching;
        (a.pow(self.depth as u32) - 1) / (a - 1)
    }

    pub fn num_leaves(&self) -> usize {
        self.branching.pow(self.depth as u32 - 1)
    }

    /// Total states: waiting state + tree + good/bad absorbing states.
    pub fn num_states(&self) -> usize {
        self.num_tree_nodes() + 3
    }

    /// First step at which the good state pays reward (1-based).
    pub fn reward_onset(&self) -> usize {
        self.waiting + self.depth + 1
    }

    /// Closed-form optimal EntRM value from the initial state: a single
    /// gamble paying `horizon + 1 - reward_onset` with probability p + eps.
    pub fn optimal_value(&self) -> f64 {
        let span = (self.horizon + 1 - self.reward_onset()) as f64;
        let win = self.p + self.epsilon;
        ((self.beta * span).exp() * win + 1.0 - win).ln() / self.beta
    }
}

/// Builds the hard instance. State layout: 0 is the waiting state, tree nodes
/// occupy 1..=num_tree_nodes breadth-first with the root at 1, then the good
/// and bad absorbing states. Action 0 waits.
pub fn make_hard_mdp(spec: &HardInstanceSpec) -> Result<TabularMDP> {
    spec.validate()?;
    let a_count = spec.branching;
    let horizon = spec.horizon;
    let n_tree = spec.num_tree_nodes();
    let n_leaves = spec.num_leaves();
    let s_count = spec.num_states();
    let s_wait = 0;
    let s_root = 1;
    let first_leaf = 1 + (n_tree - n_leaves);
    let s_good = n_tree + 1;
    let s_bad = n_tree + 2;

    let mut transitions = vec![vec![vec![vec![0.0; s_count]; a_count]; s_count]; horizon];
    let mut rewards = vec![vec![vec![0.0; a_count]; s_count]; horizon];
    for h in 0..horizon {
        let step = h + 1;
        for a in 0..a_count {
            if a == 0 && step <= spec.waiting {
                transitions[h][s_wait][a][s_wait] = 1.0;
            } else {
                transitions[h][s_wait][a][s_root] = 1.0;
            }
            for t in 1..=n_tree {
                if t < first_leaf {
                    // internal node: deterministic move to the a-th child
                    let child = a_count * (t - 1) + 2 + a;
                    transitions[h][t][a][child] = 1.0;
                } else {
                    let leaf = t - first_leaf;
                    let mut win = spec.p;
                    if step == spec.h_star && leaf == spec.leaf_star && a == spec.a_star {
                        win += spec.epsilon;
                    }
                    transitions[h][t][a][s_good] = win;
                    transitions[h][t][a][s_bad] = 1.0 - win;
                }
            }
            transitions[h][s_good][a][s_good] = 1.0;
            transitions[h][s_bad][a][s_bad] = 1.0;
            if step >= spec.reward_onset() {
                rewards[h][s_good][a] = 1.0;
            }
        }
    }
    TabularMDP::new(transitions, rewards, s_wait)
}

#[derive(Serialize, Deserialize)]
struct MdpFile {
    #[serde(rename = "S")]
    s: usize,
    #[serde(rename = "A")]
    a: usize,
    #[serde(rename = "H")]
    h: usize,
    initial_state: usize,
    #[serde(rename = "P")]
    p: Vec<Vec<Vec<Vec<f64>>>>,
    r: Vec<Vec<Vec<f64>>>,
}

/// Validates and converts the JSON form of an MDP (see [`load_mdp`]).
pub fn mdp_from_value(value: serde_json::Value) -> Result<TabularMDP> {
    let file: MdpFile = serde_json::from_value(value).map_err(|e| Error::Validation(format!(
        "malformed MDP object: {e}"
    )))?;
    mdp_from_file(file)
}

/// JSON form of an MDP (see [`save_mdp`]).
pub fn mdp_to_value(mdp: &TabularMDP) -> serde_json::Value {
    serde_json::to_value(MdpFile {
        s: mdp.num_states,
        a: mdp.num_actions,
        h: mdp.horizon,
        initial_state: mdp.initial_state,
        p: mdp.transitions.clone(),
        r: mdp.rewards.clone(),
    })
    .expect("MDP serializes")
}

fn mdp_from_file(file: MdpFile) -> Result<TabularMDP> {
    let mdp = TabularMDP::new(file.p, file.r, file.initial_state)?;
    if mdp.num_states != file.s || mdp.num_actions != file.a || mdp.horizon != file.h {
        return Err(Error::Validation(format!(
            "declared sizes (S={}, A={}, H={}) disagree with tensors (S={}, A={}, H={})",
            file.s, file.a, file.h, mdp.num_states, mdp.num_actions, mdp.horizon
        )));
    }
    Ok(mdp)
}

/// Reads an MDP from the JSON schema
/// `{ "S", "A", "H", "initial_state", "P": [H][S][A][S], "r": [H][S][A] }`
/// and validates it.
pub fn load_mdp(path: impl AsRef<Path>) -> Result<TabularMDP> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: MdpFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    mdp_from_file(file)
}

/// Writes an MDP to the JSON schema accepted by [`load_mdp`].
pub fn save_mdp(mdp: &TabularMDP, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string(&mdp_to_value(mdp)).expect("MDP serializes");
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
