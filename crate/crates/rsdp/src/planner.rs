//! Exact planning oracles: distributional backward induction over full
//! return distributions, the equivalent scalar exponential-utility recursion,
//! policy evaluation, and brute-force policy enumeration for tiny instances.
//!
//! All argmax ties break toward the lowest action index.
//!
//! The three oracles agree on the optimal value and are interchangeable on
//! small instances:
//!
//! ```
//! use rsdp::dist::RiskParam;
//! use rsdp::mdp::make_risky_mdp;
//! use rsdp::planner::{brute_force_optimal, rs_ddp_distributional, rs_ddp_scalar};
//!
//! let mdp = make_risky_mdp();
//! let beta = RiskParam::new(-1.1).unwrap();
//! let scalar = rs_ddp_scalar(&mdp, beta).unwrap();
//! let dist = rs_ddp_distributional(&mdp, beta, 200_000).unwrap();
//! let v_scalar = scalar.v_star[0][mdp.initial_state];
//! let v_dist = dist.v_star[0][mdp.initial_state];
//! assert!((v_scalar - v_dist).abs() < 1e-10);
//! // The distributional pass also returns the full optimal return
//! // distribution at every state.
//! assert!(dist.return_dists.is_some());
//! ```

use serde::Serialize;

use crate::dist::{entrm, mix, shift, DiscreteDistribution, RiskParam};
use crate::error::{Error, Result};
use crate::mdp::{Policy, TabularMDP};

/// Default cap on return-distribution support size. Backward induction over
/// full distributions can grow the support like S^(H-1); the cap turns that
/// blow-up into a diagnosable error.
pub const DEFAULT_SUPPORT_CAP: usize = 200_000;

/// Distribution tables produced by the distributional planner:
/// `eta[h][s][a]` is the optimal state-action return distribution,
/// `nu[h][s]` the optimal state return distribution.
#[derive(Debug, Clone, Serialize)]
pub struct ReturnDists {
    pub eta: Vec<Vec<Vec<DiscreteDistribution>>>,
    pub nu: Vec<Vec<DiscreteDistribution>>,
}

/// Planner output: optimal policy plus EntRM values `v_star[h][s]` and
/// exponential-utility values `w_star[h][s]` (constant 1 at beta = 0).
#[derive(Debug, Clone, Serialize)]
pub struct PlanResult {
    pub policy: Policy,
    pub v_star: Vec<Vec<f64>>,
    pub w_star: Vec<Vec<f64>>,
    pub return_dists: Option<ReturnDists>,
}

fn w_from_v(v: &[Vec<f64>], rp: RiskParam) -> Vec<Vec<f64>> {
    v.iter()
        .map(|row| row.iter().map(|&x| (rp.beta() * x).exp()).collect())
        .collect()
}

/// Backward induction carrying full return distributions. Fails with a
/// capacity error naming the offending (h, s, a) if any support exceeds
/// `support_cap`.
pub fn rs_ddp_distributional(
    mdp: &TabularMDP,
    rp: RiskParam,
    support_cap: usize,
) -> Result<PlanResult> {
    if support_cap < 2 {
        return Err(Error::invalid("support cap must be >= 2"));
    }
    let (s_n, a_n, horizon) = (mdp.num_states, mdp.num_actions, mdp.horizon);
    let mut nu: Vec<DiscreteDistribution> = vec![DiscreteDistribution::dirac(0.0); s_n];
    let mut eta_tab = Vec::with_capacity(horizon);
    let mut nu_tab = Vec::with_capacity(horizon);
    let mut v_star = vec![vec![0.0; s_n]; horizon];
    let mut actions = vec![vec![0usize; s_n]; horizon];
    for h in (0..horizon).rev() {
        let refs: Vec<&DiscreteDistribution> = nu.iter().collect();
        let mut eta_row = Vec::with_capacity(s_n);
        let mut nu_next = Vec::with_capacity(s_n);
        for s in 0..s_n {
            let mut etas = Vec::with_capacity(a_n);
            let mut best_a = 0;
            let mut best_v = f64::NEG_INFINITY;
            for a in 0..a_n {
                let mixed = mix(&mdp.transitions[h][s][a], &refs)?;
                let eta = shift(&mixed, mdp.rewards[h][s][a]);
                if eta.len() > support_cap {
                    return Err(Error::Capacity {
                        h: h + 1,
                        s,
                        a,
                        atoms: eta.len(),
                        cap: support_cap,
                    });
                }
                let v = entrm(&eta, rp)?;
                if v > best_v {
                    best_v = v;
                    best_a = a;
                }
                etas.push(eta);
            }
            actions[h][s] = best_a;
            v_star[h][s] = best_v;
            nu_next.push(etas[best_a].clone());
            eta_row.push(etas);
        }
        eta_tab.push(eta_row);
        nu_tab.push(nu_next.clone());
        nu = nu_next;
    }
    eta_tab.reverse();
    nu_tab.reverse();
    let w_star = w_from_v(&v_star, rp);
    Ok(PlanResult {
        policy: Policy { actions },
        v_star,
        w_star,
        return_dists: Some(ReturnDists {
            eta: eta_tab,
            nu: nu_tab,
        }),
    })
}

/// Log-domain exponential-utility aggregate: log sum_s' P(s') e^{log w(s')}.
fn log_expectation(row: &[f64], log_w: &[f64]) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for (&p, &lw) in row.iter().zip(log_w) {
        if p > 0.0 {
            let t = p.ln() + lw;
            if t > m {
                m = t;
            }
        }
    }
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = row
        .iter()
        .zip(log_w)
        .filter(|(&p, _)| p > 0.0)
        .map(|(&p, &lw)| (p.ln() + lw - m).exp())
        .sum();
    m + sum.ln()
}

/// Scalar backward induction on exponential utilities, computed in the log
/// domain so it stays finite for |beta| * horizon well past 700. Routes to
/// risk-neutral expected-value DP at beta = 0.
pub fn rs_ddp_scalar(mdp: &TabularMDP, rp: RiskParam) -> Result<PlanResult> {
    let (s_n, a_n, horizon) = (mdp.num_states, mdp.num_actions, mdp.horizon);
    let mut v_star = vec![vec![0.0; s_n]; horizon];
    let mut actions = vec![vec![0usize; s_n]; horizon];
    if rp.is_risk_neutral() {
        let mut v_next = vec![0.0; s_n];
        for h in (0..horizon).rev() {
            let mut v_here = vec![0.0; s_n];
            for s in 0..s_n {
                let mut best_a = 0;
                let mut best = f64::NEG_INFINITY;
                for a in 0..a_n {
                    let exp: f64 = mdp.transitions[h][s][a]
                        .iter()
                        .zip(&v_next)
                        .map(|(&p, &v)| p * v)
                        .sum();
                    let q = mdp.rewards[h][s][a] + exp;
                    if q > best {
                        best = q;
                        best_a = a;
                    }
                }
                actions[h][s] = best_a;
                v_star[h][s] = best;
                v_here[s] = best;
            }
            v_next = v_here;
        }
        let w_star = vec![vec![1.0; s_n]; horizon];
        return Ok(PlanResult {
            policy: Policy { actions },
            v_star,
            w_star,
            return_dists: None,
        });
    }
    let b = rp.beta();
    let mut log_w = vec![0.0; s_n];
    for h in (0..horizon).rev() {
        let mut log_w_here = vec![0.0; s_n];
        for s in 0..s_n {
            let mut best_a = 0;
            let mut best_v = f64::NEG_INFINITY;
            let mut best_log_j = 0.0;
            for a in 0..a_n {
                let log_j = b * mdp.rewards[h][s][a]
                    + log_expectation(&mdp.transitions[h][s][a], &log_w);
                let v = log_j / b;
                if v > best_v {
                    best_v = v;
                    best_a = a;
                    best_log_j = log_j;
                }
            }
            if !best_v.is_finite() {
                return Err(Error::NumericRange(format!(
                    "scalar backup non-finite at h={}, s={s}",
                    h + 1
                )));
            }
            actions[h][s] = best_a;
            v_star[h][s] = best_v;
            log_w_here[s] = best_log_j;
        }
        log_w = log_w_here;
    }
    let w_star = w_from_v(&v_star, rp);
    Ok(PlanResult {
        policy: Policy { actions },
        v_star,
        w_star,
        return_dists: None,
    })
}

/// EntRM value of a fixed policy: `result[h][s]` is the value of following
/// `policy` from (h+1, s) to the end of the episode.
pub fn policy_eval(mdp: &TabularMDP, policy: &Policy, rp: RiskParam) -> Result<Vec<Vec<f64>>> {
    if !policy.matches(mdp) {
        return Err(Error::invalid("policy shape mismatch"));
    }
    let (s_n, horizon) = (mdp.num_states, mdp.horizon);
    let mut v = vec![vec![0.0; s_n]; horizon];
    if rp.is_risk_neutral() {
        let mut v_next = vec![0.0; s_n];
        for h in (0..horizon).rev() {
            let mut v_here = vec![0.0; s_n];
            for s in 0..s_n {
                let a = policy.actions[h][s];
                let exp: f64 = mdp.transitions[h][s][a]
                    .iter()
                    .zip(&v_next)
                    .map(|(&p, &w)| p * w)
                    .sum();
                v_here[s] = mdp.rewards[h][s][a] + exp;
                v[h][s] = v_here[s];
            }
            v_next = v_here;
        }
        return Ok(v);
    }
    let b = rp.beta();
    let mut log_w = vec![0.0; s_n];
    for h in (0..horizon).rev() {
        let mut log_w_here = vec![0.0; s_n];
        for s in 0..s_n {
            let a = policy.actions[h][s];
            let log_j =
                b * mdp.rewards[h][s][a] + log_expectation(&mdp.transitions[h][s][a], &log_w);
            log_w_here[s] = log_j;
            v[h][s] = log_j / b;
        }
        log_w = log_w_here;
    }
    Ok(v)
}

/// Exhaustively enumerates every deterministic step-indexed policy and keeps
/// the one with the best initial-state value; ties break toward the
/// lexicographically smallest policy. Guarded to A^(S*H) <= 10^7 policies.
pub fn brute_force_optimal(mdp: &TabularMDP, rp: RiskParam) -> Result<PlanResult> {
    let cells = mdp.num_states * mdp.horizon;
    let total = (mdp.num_actions as f64).powi(cells as i32);
    if total > 1e7 {
        return Err(Error::Capacity {
            h: mdp.horizon,
            s: mdp.num_states,
            a: mdp.num_actions,
            atoms: total as usize,
            cap: 10_000_000,
        });
    }
    let mut flat = vec![0usize; cells];
    let mut best: Option<(f64, Policy, Vec<Vec<f64>>)> = None;
    loop {
        let actions: Vec<Vec<usize>> = (0..mdp.horizon)
            .map(|h| flat[h * mdp.num_states..(h + 1) * mdp.num_states].to_vec())
            .collect();
        let policy = Policy { actions };
        let v = policy_eval(mdp, &policy, rp)?;
        let v1 = v[0][mdp.initial_state];
        if best.as_ref().map_or(true, |(bv, _, _)| v1 > *bv) {
            best = Some((v1, policy, v));
        }
        // odometer over the flattened policy, last cell fastest
        let mut i = cells;
        loop {
            if i == 0 {
                let (_, policy, v) = best.unwrap();
                let w_star = w_from_v(&v, rp);
                return Ok(PlanResult {
                    policy,
                    v_star: v,
                    w_star,
                    return_dists: None,
                });
            }
            i -= 1;
            flat[i] += 1;
            if flat[i] < mdp.num_actions {
                break;
            }
            flat[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{make_hard_mdp, make_risky_mdp, HardInstanceSpec};
    use rand::Rng;

    fn rp(beta: f64) -> RiskParam {
        RiskParam::new(beta).unwrap()
    }

    pub(crate) fn random_mdp<R: Rng>(
        rng: &mut R,
        s_n: usize,
        a_n: usize,
        horizon: usize,
    ) -> TabularMDP {
        let mut transitions = vec![vec![vec![vec![0.0; s_n]; a_n]; s_n]; horizon];
        let mut rewards = vec![vec![vec![0.0; a_n]; s_n]; horizon];
        for h in 0..horizon {
            for s in 0..s_n {
                for a in 0..a_n {
                    let mut row: Vec<f64> = (0..s_n).map(|_| rng.gen::<f64>() + 1e-3).collect();
                    let sum: f64 = row.iter().sum();
                    row.iter_mut().for_each(|p| *p /= sum);
                    transitions[h][s][a] = row;
                    rewards[h][s][a] = rng.gen();
                }
            }
        }
        TabularMDP::new(transitions, rewards, 0).unwrap()
    }

    #[test]
    fn single_step_is_greedy_reward() {
        let mut rng = crate::rng::episode_rng(11, 1);
        let m = random_mdp(&mut rng, 3, 2, 1);
        let plan = rs_ddp_distributional(&m, rp(-1.1), 1000).unwrap();
        for s in 0..3 {
            let expect = m.rewards[0][s][0].max(m.rewards[0][s][1]);
            assert!((plan.v_star[0][s] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_chain_gives_dirac() {
        let transitions = vec![
            vec![vec![vec![0.0, 1.0]], vec![vec![0.0, 1.0]]],
            vec![vec![vec![0.0, 1.0]], vec![vec![0.0, 1.0]]],
        ];
        let rewards = vec![vec![vec![0.25], vec![0.5]], vec![vec![0.25], vec![0.5]]];
        let m = TabularMDP::new(transitions, rewards, 0).unwrap();
        let plan = rs_ddp_distributional(&m, rp(1.0), 100).unwrap();
        let eta = &plan.return_dists.as_ref().unwrap().eta[0][0][0];
        assert_eq!(eta.len(), 1);
        assert!((eta.atoms()[0] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn oracles_agree_on_random_tiny_mdps() {
        let mut rng = crate::rng::episode_rng(5, 1);
        for _ in 0..30 {
            let m = random_mdp(&mut rng, 3, 2, 3);
            for &b in &[-1.1, -0.1, 0.5, 1.0] {
                let scalar = rs_ddp_scalar(&m, rp(b)).unwrap();
                let dist = rs_ddp_distributional(&m, rp(b), 100_000).unwrap();
                let brute = brute_force_optimal(&m, rp(b)).unwrap();
                let v0 = scalar.v_star[0][0];
                assert!((v0 - dist.v_star[0][0]).abs() < 1e-10);
                assert!((v0 - brute.v_star[0][0]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn scalar_near_zero_beta_matches_neutral() {
        let mut rng = crate::rng::episode_rng(6, 1);
        let m = random_mdp(&mut rng, 3, 2, 3);
        let tiny = rs_ddp_scalar(&m, rp(1e-8)).unwrap();
        let neutral = rs_ddp_scalar(&m, rp(0.0)).unwrap();
        assert!((tiny.v_star[0][0] - neutral.v_star[0][0]).abs() < 1e-6);
    }

    #[test]
    fn scalar_survives_huge_beta_horizon() {
        let mut rng = crate::rng::episode_rng(7, 1);
        let m = random_mdp(&mut rng, 2, 2, 3);
        for &b in &[300.0, -300.0] {
            let plan = rs_ddp_scalar(&m, rp(b)).unwrap();
            assert!(plan.v_star[0][0].is_finite());
            assert!(plan.v_star[0][0] >= 0.0 && plan.v_star[0][0] <= 3.0);
        }
    }

    #[test]
    fn hard_instance_closed_form() {
        let spec = HardInstanceSpec {
            branching: 2,
            depth: 2,
            waiting: 2,
            horizon: 6,
            h_star: 3,
            leaf_star: 1,
            a_star: 0,
            p: 0.35,
            epsilon: 0.1,
            beta: -0.8,
        };
        let m = make_hard_mdp(&spec).unwrap();
        let plan = rs_ddp_scalar(&m, rp(spec.beta)).unwrap();
        assert!((plan.v_star[0][0] - spec.optimal_value()).abs() < 1e-9);
    }

    #[test]
    fn hard_instance_brute_force_reaches_star() {
        let spec = crate::mdp::tests::small_spec();
        let m = make_hard_mdp(&spec).unwrap();
        let plan = brute_force_optimal(&m, rp(spec.beta)).unwrap();
        // leave the waiting state immediately to reach the leaf at h_star = 2
        assert_eq!(plan.policy.actions[0][0], 1);
        assert_eq!(plan.policy.actions[spec.h_star - 1][1], spec.a_star);
        assert!((plan.v_star[0][0] - spec.optimal_value()).abs() < 1e-10);
    }

    #[test]
    fn policy_eval_consistent_with_planner() {
        let mut rng = crate::rng::episode_rng(8, 1);
        let m = random_mdp(&mut rng, 3, 2, 3);
        let plan = rs_ddp_scalar(&m, rp(-1.1)).unwrap();
        let v = policy_eval(&m, &plan.policy, rp(-1.1)).unwrap();
        for h in 0..3 {
            for s in 0..3 {
                assert!((v[h][s] - plan.v_star[h][s]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn risk_averse_prefers_safe_on_risky_mdp() {
        let m = make_risky_mdp();
        let safe = Policy {
            actions: vec![vec![4; 6]; 5],
        };
        let risky = Policy {
            actions: vec![vec![0; 6]; 5],
        };
        let averse = rp(-1.1);
        let v_safe = policy_eval(&m, &safe, averse).unwrap()[0][0];
        let v_risky = policy_eval(&m, &risky, averse).unwrap()[0][0];
        assert!(v_safe > v_risky, "safe {v_safe} risky {v_risky}");
        // risk-neutral preference reverses, and variance orders the same way
        let neutral = rp(0.0);
        let m_safe = policy_eval(&m, &safe, neutral).unwrap()[0][0];
        let m_risky = policy_eval(&m, &risky, neutral).unwrap()[0][0];
        assert!(m_safe < m_risky);
        let plan = rs_ddp_scalar(&m, averse).unwrap();
        assert_eq!(plan.policy.actions[0][0], 4);
    }

    #[test]
    fn value_bounds_and_eu_consistency() {
        let mut rng = crate::rng::episode_rng(9, 1);
        let m = random_mdp(&mut rng, 3, 2, 3);
        let plan = rs_ddp_scalar(&m, rp(0.7)).unwrap();
        for h in 0..3 {
            for s in 0..3 {
                let v = plan.v_star[h][s];
                assert!(v >= -1e-12 && v <= (3 - h) as f64 + 1e-12);
                let w = plan.w_star[h][s];
                assert!((v - w.ln() / 0.7).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn principle_of_optimality_on_tails() {
        let mut rng = crate::rng::episode_rng(10, 1);
        for _ in 0..5 {
            let m = random_mdp(&mut rng, 2, 2, 3);
            let b = rp(-0.9);
            let best = brute_force_optimal(&m, b).unwrap();
            // every tail value of the optimal policy attains the optimal tail value
            let opt_tail = rs_ddp_scalar(&m, b).unwrap();
            let v = policy_eval(&m, &best.policy, b).unwrap();
            for h in 0..3 {
                for s in 0..2 {
                    assert!(v[h][s] <= opt_tail.v_star[h][s] + 1e-10);
                }
            }
            assert!((v[0][0] - opt_tail.v_star[0][0]).abs() < 1e-10);
        }
    }

    #[test]
    fn capacity_guards_fire() {
        let mut rng = crate::rng::episode_rng(12, 1);
        let m = random_mdp(&mut rng, 3, 2, 3);
        match rs_ddp_distributional(&m, rp(0.5), 2) {
            Err(Error::Capacity { .. }) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
        let big = random_mdp(&mut rng, 4, 3, 6);
        assert!(matches!(
            brute_force_optimal(&big, rp(0.5)),
            Err(Error::Capacity { .. })
        ));
    }
}
