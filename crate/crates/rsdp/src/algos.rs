//! Episodic learners behind one interface: four distribution-oriented
//! optimistic planners (full-support model-free and model-based passes, a
//! scalar equivalent, and two two-atom parametric variants), two
//! bonus-based baselines, and risk-neutral UCBVI.
//!
//! Every planning pass is a pure function of (visit counts, config): learners
//! keep no value tables between episodes. Rewards are treated as known.
//!
//! One learning episode is: plan from the current counts, deploy the greedy
//! policy, record the trajectory:
//!
//! ```
//! use rsdp::algos::{plan, Algorithm, LearnerConfig, LearnerState, RadiusMode};
//! use rsdp::dist::RiskParam;
//! use rsdp::mdp::{make_risky_mdp, simulate_episode};
//! use rsdp::rng::episode_rng;
//!
//! let mdp = make_risky_mdp();
//! let beta = RiskParam::new(-1.1).unwrap();
//! let cfg = LearnerConfig::for_mdp(&mdp, beta, 0.005, 100).unwrap();
//! let mut state = LearnerState::new(cfg.num_states, cfg.num_actions, cfg.horizon);
//! for episode in 0..5 {
//!     let out = plan(Algorithm::RodiMb, &state, &cfg, RadiusMode::Concentration).unwrap();
//!     let traj = simulate_episode(&mdp, &out.policy, &mut episode_rng(0, episode));
//!     state.observe(&traj);
//! }
//! let visits: u64 = (0..cfg.num_actions).map(|a| state.n(0, mdp.initial_state, a)).sum();
//! assert_eq!(visits, 5); // one start-state decision per episode
//! ```

use serde::{Deserialize, Serialize};

use crate::dist::{
    entrm, mix, optimism_cdf, optimism_pmf, shift, DiscreteDistribution, RiskParam,
};
use crate::error::{Error, Result};
use crate::mdp::{Policy, TabularMDP, Trajectory};
use crate::planner::{rs_ddp_scalar, DEFAULT_SUPPORT_CAP};

/// Algorithm selector. String ids are the CLI-facing names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    RodiMf,
    RodiMb,
    Rovi,
    RodiOtp,
    RodiPto,
    Rsvi,
    Rsvi2,
    Ucbvi,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::RodiMf,
        Algorithm::RodiMb,
        Algorithm::Rovi,
        Algorithm::RodiOtp,
        Algorithm::RodiPto,
        Algorithm::Rsvi,
        Algorithm::Rsvi2,
        Algorithm::Ucbvi,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::RodiMf => "rodi-mf",
            Algorithm::RodiMb => "rodi-mb",
            Algorithm::Rovi => "rovi",
            Algorithm::RodiOtp => "rodi-otp",
            Algorithm::RodiPto => "rodi-pto",
            Algorithm::Rsvi => "rsvi",
            Algorithm::Rsvi2 => "rsvi2",
            Algorithm::Ucbvi => "ucbvi",
        }
    }

    pub fn parse(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::invalid(format!("unknown algorithm {s:?}")))
    }

    /// True for every learner built on exponential utility (all but UCBVI).
    pub fn is_risk_sensitive(self) -> bool {
        !matches!(self, Algorithm::Ucbvi)
    }
}

/// Which log term feeds the confidence radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IotaMode {
    /// log(2 S A T / delta) with T = K H (default).
    LogTwoSat,
    /// log(S A T / delta).
    LogSat,
}

/// Static configuration shared by all learners: problem shape, known
/// rewards, risk and confidence parameters.
#[derive(Debug, Clone)]
pub struct LearnerConfig {
    pub beta: RiskParam,
    pub delta: f64,
    pub num_states: usize,
    pub num_actions: usize,
    pub horizon: usize,
    pub episodes: usize,
    pub rewards: Vec<Vec<Vec<f64>>>,
    pub iota_mode: IotaMode,
    pub support_cap: usize,
}

impl LearnerConfig {
    pub fn for_mdp(
        mdp: &TabularMDP,
        beta: RiskParam,
        delta: f64,
        episodes: usize,
    ) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::invalid(format!("delta {delta} outside (0,1)")));
        }
        if episodes < 1 {
            return Err(Error::invalid("episode budget must be >= 1"));
        }
        Ok(LearnerConfig {
            beta,
            delta,
            num_states: mdp.num_states,
            num_actions: mdp.num_actions,
            horizon: mdp.horizon,
            episodes,
            rewards: mdp.rewards.clone(),
            iota_mode: IotaMode::LogTwoSat,
            support_cap: DEFAULT_SUPPORT_CAP,
        })
    }

    /// Log term of the confidence radius.
    pub fn iota(&self) -> f64 {
        let t = (self.episodes * self.horizon) as f64;
        let sat = self.num_states as f64 * self.num_actions as f64 * t / self.delta;
        match self.iota_mode {
            IotaMode::LogTwoSat => (2.0 * sat).ln(),
            IotaMode::LogSat => sat.ln(),
        }
    }
}

/// Visit statistics accumulated across episodes. The empirical model is
/// derived from the transition counts on demand, so the incremental and
/// batch definitions coincide by construction; unvisited rows are uniform.
#[derive(Debug, Clone)]
pub struct LearnerState {
    num_states: usize,
    num_actions: usize,
    horizon: usize,
    counts: Vec<Vec<Vec<u64>>>,
    trans_counts: Vec<Vec<Vec<Vec<u64>>>>,
}

impl LearnerState {
    pub fn new(num_states: usize, num_actions: usize, horizon: usize) -> Self {
        LearnerState {
            num_states,
            num_actions,
            horizon,
            counts: vec![vec![vec![0; num_actions]; num_states]; horizon],
            trans_counts: vec![vec![vec![vec![0; num_states]; num_actions]; num_states]; horizon],
        }
    }

    /// Rebuilds a state from raw transition counts (e.g. a snapshot file).
    pub fn from_transition_counts(trans_counts: Vec<Vec<Vec<Vec<u64>>>>) -> Result<Self> {
        let horizon = trans_counts.len();
        if horizon == 0 {
            return Err(Error::Validation("empty count tensor".into()));
        }
        let num_states = trans_counts[0].len();
        let num_actions = trans_counts.first().and_then(|r| r.first()).map_or(0, Vec::len);
        let mut counts = vec![vec![vec![0u64; num_actions]; num_states]; horizon];
        for h in 0..horizon {
            if trans_counts[h].len() != num_states {
                return Err(Error::Validation(format!("ragged count tensor at h={h}")));
            }
            for s in 0..num_states {
                if trans_counts[h][s].len() != num_actions {
                    return Err(Error::Validation(format!(
                        "ragged count tensor at h={h}, s={s}"
                    )));
                }
                for a in 0..num_actions {
                    if trans_counts[h][s][a].len() != num_states {
                        return Err(Error::Validation(format!(
                            "ragged count tensor at h={h}, s={s}, a={a}"
                        )));
                    }
                    counts[h][s][a] = trans_counts[h][s][a].iter().sum();
                }
            }
        }
        Ok(LearnerState {
            num_states,
            num_actions,
            horizon,
            counts,
            trans_counts,
        })
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.num_states, self.num_actions, self.horizon)
    }

    pub fn n(&self, h: usize, s: usize, a: usize) -> u64 {
        self.counts[h][s][a]
    }

    pub fn visited(&self, h: usize, s: usize, a: usize) -> bool {
        self.counts[h][s][a] > 0
    }

    /// Empirical transition row; uniform over states when unvisited.
    pub fn p_hat_row(&self, h: usize, s: usize, a: usize) -> Vec<f64> {
        let n = self.counts[h][s][a];
        if n == 0 {
            return vec![1.0 / self.num_states as f64; self.num_states];
        }
        self.trans_counts[h][s][a]
            .iter()
            .map(|&m| m as f64 / n as f64)
            .collect()
    }

    /// Folds one episode into the counts.
    pub fn observe(&mut self, trajectory: &Trajectory) {
        for st in &trajectory.steps {
            let h = st.h - 1;
            self.counts[h][st.state][st.action] += 1;
            self.trans_counts[h][st.state][st.action][st.next_state] += 1;
        }
    }
}

/// Where the per-(h,s,a) optimism radii come from.
#[derive(Debug, Clone, Copy)]
pub enum RadiusMode<'a> {
    /// The concentration radius sqrt(2 S iota / max(N,1)).
    Concentration,
    /// Exact l1 error of the empirical row against the true model
    /// (diagnostic mode for optimism checks).
    Oracle(&'a TabularMDP),
    /// Radius 0 everywhere (no optimism).
    Zero,
}

/// The concentration radius sqrt(2 S iota / max(N, 1)).
pub fn optimism_radius(
    state: &LearnerState,
    cfg: &LearnerConfig,
    h: usize,
    s: usize,
    a: usize,
) -> f64 {
    let n = state.n(h, s, a).max(1) as f64;
    (2.0 * cfg.num_states as f64 * cfg.iota() / n).sqrt()
}

fn radius(
    state: &LearnerState,
    cfg: &LearnerConfig,
    mode: RadiusMode,
    h: usize,
    s: usize,
    a: usize,
) -> f64 {
    match mode {
        RadiusMode::Concentration => optimism_radius(state, cfg, h, s, a),
        RadiusMode::Oracle(mdp) => {
            let row = state.p_hat_row(h, s, a);
            row.iter()
                .zip(&mdp.transitions[h][s][a])
                .map(|(p, q)| (p - q).abs())
                .sum()
        }
        RadiusMode::Zero => 0.0,
    }
}

/// One planning pass: the greedy policy plus its optimistic EntRM value
/// table `values[h][s]`.
#[derive(Debug, Clone)]
pub struct PlanOutcome {
    pub policy: Policy,
    pub values: Vec<Vec<f64>>,
}

/// Near-tie margin for the greedy action choice. Candidate values that agree
/// in exact arithmetic can drift apart by a few ulps between the
/// distributional and scalar evaluation pipelines; treating anything within
/// this margin of the maximum as a tie (broken toward the lowest action
/// index) keeps provably equivalent passes selecting identical actions.
const GREEDY_TIE_TOL: f64 = 1e-9;

fn greedy<T>(candidates: Vec<(f64, T)>) -> (usize, f64, T) {
    let top = candidates
        .iter()
        .map(|c| c.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let best = candidates
        .iter()
        .position(|c| c.0 >= top - GREEDY_TIE_TOL)
        .unwrap();
    let v = candidates[best].0;
    let payload = candidates.into_iter().nth(best).unwrap().1;
    (best, v, payload)
}

/// Model-free distributional pass: empirical Bellman backup of the full
/// return distribution, then CDF-level optimism with the concentration
/// radius; unvisited pairs get the maximally optimistic point mass.
pub fn rodi_mf_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
) -> Result<PlanOutcome> {
    let (s_n, a_n, horizon) = (cfg.num_states, cfg.num_actions, cfg.horizon);
    let mut nu: Vec<DiscreteDistribution> = vec![DiscreteDistribution::dirac(0.0); s_n];
    let mut actions = vec![vec![0usize; s_n]; horizon];
    let mut values = vec![vec![0.0; s_n]; horizon];
    for h in (0..horizon).rev() {
        let hi = (horizon - h) as f64;
        let refs: Vec<&DiscreteDistribution> = nu.iter().collect();
        let mut nu_next = Vec::with_capacity(s_n);
        for s in 0..s_n {
            let mut cands = Vec::with_capacity(a_n);
            for a in 0..a_n {
                let eta = if state.visited(h, s, a) {
                    let row = state.p_hat_row(h, s, a);
                    let eta = shift(&mix(&row, &refs)?, cfg.rewards[h][s][a]);
                    if eta.len() > cfg.support_cap {
                        return Err(Error::Capacity {
                            h: h + 1,
                            s,
                            a,
                            atoms: eta.len(),
                            cap: cfg.support_cap,
                        });
                    }
                    eta
                } else {
                    DiscreteDistribution::dirac(hi)
                };
                let c = radius(state, cfg, radii, h, s, a).clamp(0.0, 1.0);
                let eta = optimism_cdf(&eta, c, hi)?;
                let v = entrm(&eta, cfg.beta)?;
                cands.push((v, eta));
            }
            let (a, v, eta) = greedy(cands);
            actions[h][s] = a;
            values[h][s] = v;
            nu_next.push(eta);
        }
        nu = nu_next;
    }
    Ok(PlanOutcome {
        policy: Policy { actions },
        values,
    })
}

/// Model-based distributional pass: picks the most favorable transition row
/// inside the l1 confidence ball, then backs up the full distribution.
pub fn rodi_mb_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
) -> Result<PlanOutcome> {
    let (s_n, a_n, horizon) = (cfg.num_states, cfg.num_actions, cfg.horizon);
    let mut nu: Vec<DiscreteDistribution> = vec![DiscreteDistribution::dirac(0.0); s_n];
    let mut actions = vec![vec![0usize; s_n]; horizon];
    let mut values = vec![vec![0.0; s_n]; horizon];
    for h in (0..horizon).rev() {
        let hi = (horizon - h) as f64;
        let refs: Vec<&DiscreteDistribution> = nu.iter().collect();
        let mut nu_vals = Vec::with_capacity(s_n);
        for d in &nu {
            nu_vals.push(entrm(d, cfg.beta)?);
        }
        let mut nu_next = Vec::with_capacity(s_n);
        for s in 0..s_n {
            let mut cands = Vec::with_capacity(a_n);
            for a in 0..a_n {
                let eta = if state.visited(h, s, a) {
                    let c = radius(state, cfg, radii, h, s, a);
                    let row = optimism_pmf(&state.p_hat_row(h, s, a), &nu_vals, c);
                    let eta = shift(&mix(&row, &refs)?, cfg.rewards[h][s][a]);
                    if eta.len() > cfg.support_cap {
                        return Err(Error::Capacity {
                            h: h + 1,
                            s,
                            a,
                            atoms: eta.len(),
                            cap: cfg.support_cap,
                        });
                    }
                    eta
                } else {
                    DiscreteDistribution::dirac(hi)
                };
                let v = entrm(&eta, cfg.beta)?;
                cands.push((v, eta));
            }
            let (a, v, eta) = greedy(cands);
            actions[h][s] = a;
            values[h][s] = v;
            nu_next.push(eta);
        }
        nu = nu_next;
    }
    Ok(PlanOutcome {
        policy: Policy { actions },
        values,
    })
}

/// Scalar equivalent of the model-based pass: each next state's return is
/// collapsed to a single certainty-equivalent atom before the one-step
/// exponential-utility backup J = e^{beta r} [P W]. The collapsed atoms run
/// through the same distribution construction (sort, merge, log-sum-exp
/// evaluation) as the model-based pass, so exact value ties — which arise
/// whenever optimism saturates — break identically and the two passes emit
/// the same action sequences.
pub fn rovi_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
) -> Result<PlanOutcome> {
    if cfg.beta.is_risk_neutral() {
        return Err(Error::invalid("this learner is undefined at beta = 0"));
    }
    let (s_n, a_n, horizon) = (cfg.num_states, cfg.num_actions, cfg.horizon);
    let mut v_next = vec![0.0f64; s_n];
    let mut actions = vec![vec![0usize; s_n]; horizon];
    let mut values = vec![vec![0.0; s_n]; horizon];
    for h in (0..horizon).rev() {
        let hi = (horizon - h) as f64;
        let mut v_here = vec![0.0; s_n];
        for s in 0..s_n {
            let mut cands = Vec::with_capacity(a_n);
            for a in 0..a_n {
                let collapsed = if state.visited(h, s, a) {
                    let c = radius(state, cfg, radii, h, s, a);
                    let row = optimism_pmf(&state.p_hat_row(h, s, a), &v_next, c);
                    let mut atoms = Vec::new();
                    let mut probs = Vec::new();
                    for (&p, &vn) in row.iter().zip(&v_next) {
                        if p > 0.0 {
                            atoms.push(vn);
                            probs.push(p);
                        }
                    }
                    shift(
                        &DiscreteDistribution::new(atoms, probs)?,
                        cfg.rewards[h][s][a],
                    )
                } else {
                    DiscreteDistribution::dirac(hi)
                };
                let v = entrm(&collapsed, cfg.beta)?;
                cands.push((v, ()));
            }
            let (a, v, ()) = greedy(cands);
            actions[h][s] = a;
            values[h][s] = v;
            v_here[s] = v;
        }
        v_next = v_here;
    }
    Ok(PlanOutcome {
        policy: Policy { actions },
        values,
    })
}

/// Two-atom parametric pass. Each step-h return is represented as mass `q` on
/// the right atom of the support (0, H+1-h); the backup composes the
/// empirical expectation of next-step masses, an optimism bump of the mass by
/// the radius, and the value-preserving reprojection onto the step-h support.
/// `optimism_first` selects bump-then-project; otherwise project-then-bump.
fn two_atom_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
    optimism_first: bool,
) -> Result<PlanOutcome> {
    if cfg.beta.is_risk_neutral() {
        return Err(Error::invalid("this learner is undefined at beta = 0"));
    }
    let b = cfg.beta.beta();
    let (s_n, a_n, horizon) = (cfg.num_states, cfg.num_actions, cfg.horizon);
    let mut q_next = vec![0.0f64; s_n];
    let mut actions = vec![vec![0usize; s_n]; horizon];
    let mut values = vec![vec![0.0; s_n]; horizon];
    for h in (0..horizon).rev() {
        let span = (horizon - h) as f64;
        let denom = (b * span).exp_m1();
        let top = (b * span).exp();
        let mut q_here = vec![0.0; s_n];
        for s in 0..s_n {
            let mut cands = Vec::with_capacity(a_n);
            for a in 0..a_n {
                let r = cfg.rewards[h][s][a];
                let q_lo = (b * r).exp_m1() / denom;
                let q_hi = (b * (r + span - 1.0)).exp_m1() / denom;
                let row = state.p_hat_row(h, s, a);
                let mut q: f64 = row.iter().zip(&q_next).map(|(p, x)| p * x).sum();
                let c = radius(state, cfg, radii, h, s, a);
                if optimism_first {
                    q = (q + c).min(1.0);
                    q = (1.0 - q) * q_lo + q * q_hi;
                } else {
                    q = (1.0 - q) * q_lo + q * q_hi;
                    q = (q + c).min(1.0);
                }
                q = q.clamp(0.0, 1.0);
                let v = (1.0 - q + q * top).ln() / b;
                cands.push((v, q));
            }
            let (a, v, q) = greedy(cands);
            actions[h][s] = a;
            values[h][s] = v;
            q_here[s] = q;
        }
        q_next = q_here;
    }
    Ok(PlanOutcome {
        policy: Policy { actions },
        values,
    })
}

/// Optimism-then-project two-atom pass.
pub fn rodi_otp_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
) -> Result<PlanOutcome> {
    two_atom_plan(state, cfg, radii, true)
}

/// Project-then-optimism two-atom pass.
pub fn rodi_pto_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
) -> Result<PlanOutcome> {
    two_atom_plan(state, cfg, radii, false)
}

/// Bonus-based scalar pass. `double_decay` selects the stage-decaying bonus
/// multiplier |e^{beta (H+1-h)} - 1|; otherwise the constant |e^{beta H} - 1|.
/// For beta < 0 the bonus is subtracted from the EU aggregate (1/beta log is
/// decreasing there) and floored at the minimum feasible aggregate.
fn bonus_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
    double_decay: bool,
) -> Result<PlanOutcome> {
    if cfg.beta.is_risk_neutral() {
        return Err(Error::invalid("this learner is undefined at beta = 0"));
    }
    let b = cfg.beta.beta();
    let (s_n, a_n, horizon) = (cfg.num_states, cfg.num_actions, cfg.horizon);
    let mut v_next = vec![0.0f64; s_n];
    let mut actions = vec![vec![0usize; s_n]; horizon];
    let mut values = vec![vec![0.0; s_n]; horizon];
    for h in (0..horizon).rev() {
        let span = (horizon - h) as f64;
        let mult = if double_decay {
            (b * span).exp_m1().abs()
        } else {
            (b * horizon as f64).exp_m1().abs()
        };
        let mut v_here = vec![0.0; s_n];
        for s in 0..s_n {
            let mut cands = Vec::with_capacity(a_n);
            for a in 0..a_n {
                let bonus = mult * radius(state, cfg, radii, h, s, a);
                let row = state.p_hat_row(h, s, a);
                let agg: f64 = row
                    .iter()
                    .zip(&v_next)
                    .map(|(p, v)| p * (b * v).exp())
                    .sum();
                let g = if b > 0.0 {
                    agg + bonus
                } else {
                    (agg - bonus).max((b * (span - 1.0)).exp())
                };
                let q = span.min(cfg.rewards[h][s][a] + g.ln() / b);
                cands.push((q, ()));
            }
            let (a, q, ()) = greedy(cands);
            actions[h][s] = a;
            values[h][s] = q;
            v_here[s] = q;
        }
        v_next = v_here;
    }
    Ok(PlanOutcome {
        policy: Policy { actions },
        values,
    })
}

/// Constant-multiplier bonus pass.
pub fn rsvi_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
) -> Result<PlanOutcome> {
    bonus_plan(state, cfg, radii, false)
}

/// Stage-decaying bonus pass.
pub fn rsvi2_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
) -> Result<PlanOutcome> {
    bonus_plan(state, cfg, radii, true)
}

/// Risk-neutral optimistic value iteration with a Hoeffding bonus.
pub fn ucbvi_plan(
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
) -> Result<PlanOutcome> {
    let (s_n, a_n, horizon) = (cfg.num_states, cfg.num_actions, cfg.horizon);
    let iota = cfg.iota();
    let mut v_next = vec![0.0f64; s_n];
    let mut actions = vec![vec![0usize; s_n]; horizon];
    let mut values = vec![vec![0.0; s_n]; horizon];
    for h in (0..horizon).rev() {
        let span = (horizon - h) as f64;
        let mut v_here = vec![0.0; s_n];
        for s in 0..s_n {
            let mut cands = Vec::with_capacity(a_n);
            for a in 0..a_n {
                let bonus = match radii {
                    RadiusMode::Zero => 0.0,
                    _ => {
                        let n = state.n(h, s, a).max(1) as f64;
                        (span - 1.0) * (2.0 * iota / n).sqrt()
                    }
                };
                let row = state.p_hat_row(h, s, a);
                let exp: f64 = row.iter().zip(&v_next).map(|(p, v)| p * v).sum();
                let q = span.min(cfg.rewards[h][s][a] + exp + bonus);
                cands.push((q, ()));
            }
            let (a, q, ()) = greedy(cands);
            actions[h][s] = a;
            values[h][s] = q;
            v_here[s] = q;
        }
        v_next = v_here;
    }
    Ok(PlanOutcome {
        policy: Policy { actions },
        values,
    })
}

/// Dispatches one planning pass for `algo`. Risk-sensitive learners reject
/// beta = 0.
pub fn plan(
    algo: Algorithm,
    state: &LearnerState,
    cfg: &LearnerConfig,
    radii: RadiusMode,
) -> Result<PlanOutcome> {
    if algo.is_risk_sensitive() && cfg.beta.is_risk_neutral() {
        return Err(Error::invalid(format!(
            "{} is undefined at beta = 0",
            algo.id()
        )));
    }
    match algo {
        Algorithm::RodiMf => rodi_mf_plan(state, cfg, radii),
        Algorithm::RodiMb => rodi_mb_plan(state, cfg, radii),
        Algorithm::Rovi => rovi_plan(state, cfg, radii),
        Algorithm::RodiOtp => rodi_otp_plan(state, cfg, radii),
        Algorithm::RodiPto => rodi_pto_plan(state, cfg, radii),
        Algorithm::Rsvi => rsvi_plan(state, cfg, radii),
        Algorithm::Rsvi2 => rsvi2_plan(state, cfg, radii),
        Algorithm::Ucbvi => ucbvi_plan(state, cfg, radii),
    }
}

/// Value tables of six planners run on identical counts, plus the exact
/// optimal values, for verifying the pointwise ordering chain.
#[derive(Debug, Clone)]
pub struct ValueComparison {
    pub rsvi: Vec<Vec<f64>>,
    pub rsvi2: Vec<Vec<f64>>,
    pub rodi_mf: Vec<Vec<f64>>,
    pub rodi_mb: Vec<Vec<f64>>,
    pub rodi_otp: Vec<Vec<f64>>,
    pub rodi_pto: Vec<Vec<f64>>,
    pub v_star: Vec<Vec<f64>>,
}

/// Runs each planning pass on the shared counts in `state` and the exact
/// planner on `mdp`, returning all value tables.
pub fn compare_planners(
    state: &LearnerState,
    cfg: &LearnerConfig,
    mdp: &TabularMDP,
) -> Result<ValueComparison> {
    let radii = RadiusMode::Concentration;
    Ok(ValueComparison {
        rsvi: rsvi_plan(state, cfg, radii)?.values,
        rsvi2: rsvi2_plan(state, cfg, radii)?.values,
        rodi_mf: rodi_mf_plan(state, cfg, radii)?.values,
        rodi_mb: rodi_mb_plan(state, cfg, radii)?.values,
        rodi_otp: rodi_otp_plan(state, cfg, radii)?.values,
        rodi_pto: rodi_pto_plan(state, cfg, radii)?.values,
        v_star: rs_ddp_scalar(mdp, cfg.beta)?.v_star,
    })
}
