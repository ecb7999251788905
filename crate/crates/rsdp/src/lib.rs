//! Risk-sensitive distributional reinforcement learning for finite episodic
//! MDPs under the entropic risk measure.
//!
//! The crate splits into:
//!
//! - [`dist`]: discrete-distribution algebra, the entropic risk measure and
//!   exponential utility, optimism operators, and the value-preserving
//!   two-atom projection;
//! - [`mdp`]: tabular episodic MDPs, simulation, instance generators, JSON
//!   I/O;
//! - [`planner`]: exact planning oracles (distributional and scalar backward
//!   induction, policy evaluation, brute force);
//! - [`algos`]: optimistic episodic learners plus baselines;
//! - [`harness`]: multi-seed regret experiments with CSV/SVG output;
//! - [`rng`]: counter-based reproducible randomness.
//!
//! A minimal planning round trip:
//!
//! ```
//! use rsdp::dist::RiskParam;
//! use rsdp::mdp::make_risky_mdp;
//! use rsdp::planner::rs_ddp_scalar;
//!
//! let mdp = make_risky_mdp();
//! let averse = rs_ddp_scalar(&mdp, RiskParam::new(-1.1).unwrap()).unwrap();
//! let neutral = rs_ddp_scalar(&mdp, RiskParam::new(0.0).unwrap()).unwrap();
//! // a risk-averse agent takes the safe action, a neutral one does not
//! assert_eq!(averse.policy.actions[0][0], 4);
//! assert_ne!(neutral.policy.actions[0][0], 4);
//! ```

pub mod algos;
pub mod dist;
pub mod error;
pub mod harness;
pub mod mdp;
pub mod planner;
pub mod rng;

pub use error::{Error, Result};
