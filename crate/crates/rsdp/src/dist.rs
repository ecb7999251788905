//! Discrete-distribution algebra and risk functionals.
//!
//! Everything downstream (planners, learners, the experiment harness) works
//! with finite discrete return distributions. This module provides the
//! algebra over them: the entropic risk measure and its exponential-utility
//! transform, mixtures, shifts, the supremum (Kolmogorov) distance, two
//! optimism operators, and the value-equivalent two-atom projection.
//!
//! ```
//! use rsdp::dist::{entrm, DiscreteDistribution, RiskParam};
//!
//! let coin = DiscreteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
//! let neutral = entrm(&coin, RiskParam::new(0.0).unwrap()).unwrap();
//! let averse = entrm(&coin, RiskParam::new(-2.0).unwrap()).unwrap();
//! assert!((neutral - 0.5).abs() < 1e-12);
//! assert!(averse < neutral);
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Atoms closer than this are merged on construction.
pub const ATOM_MERGE_TOL: f64 = 1e-12;
/// Probability vectors must sum to 1 within this tolerance.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Risk-sensitivity parameter beta. Negative is risk-averse, positive is
/// risk-seeking, zero selects the risk-neutral (mean) limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskParam {
    beta: f64,
}

impl RiskParam {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::invalid(format!("beta must be finite, got {beta}")));
        }
        Ok(RiskParam { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_risk_neutral(&self) -> bool {
        self.beta == 0.0
    }

    /// Sign of beta: +1.0 or -1.0 (0.0 when risk-neutral).
    pub fn sign(&self) -> f64 {
        if self.beta > 0.0 {
            1.0
        } else if self.beta < 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    fn require_non_neutral(&self, what: &str) -> Result<()> {
        if self.is_risk_neutral() {
            return Err(Error::invalid(format!("{what} is undefined at beta = 0")));
        }
        Ok(())
    }
}

/// Two-atom support (theta1, theta2) for the Bernoulli representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernoulliSupport {
    theta1: f64,
    theta2: f64,
}

impl BernoulliSupport {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        if !(theta1.is_finite() && theta2.is_finite() && theta1 < theta2) {
            return Err(Error::invalid(format!(
                "Bernoulli support needs theta1 < theta2, got ({theta1}, {theta2})"
            )));
        }
        Ok(BernoulliSupport { theta1, theta2 })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }
}

/// A finite discrete distribution: strictly increasing atoms with positive
/// probabilities summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    atoms: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    /// Builds a distribution from parallel atom/probability lists. Atoms are
    /// sorted, near-duplicates (within [`ATOM_MERGE_TOL`]) merged, zero-mass
    /// atoms dropped, and the probability sum validated against 1.
    pub fn new(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if atoms.len() != probs.len() {
            return Err(Error::invalid(format!(
                "atom/prob length mismatch: {} vs {}",
                atoms.len(),
                probs.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::invalid("distribution needs at least one atom"));
        }
        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (&x, &p) in atoms.iter().zip(probs.iter()) {
            if !x.is_finite() {
                return Err(Error::invalid(format!("non-finite atom {x}")));
            }
            if !p.is_finite() || p < -PROB_SUM_TOL {
                return Err(Error::invalid(format!("invalid probability {p}")));
            }
            if p > 0.0 {
                pairs.push((x, p));
            }
        }
        if pairs.is_empty() {
            return Err(Error::invalid("all atoms carry zero probability"));
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        let mut out_atoms: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut out_probs: Vec<f64> = Vec::with_capacity(pairs.len());
        for (x, p) in pairs {
            match out_atoms.last() {
                Some(&last) if (x - last).abs() <= ATOM_MERGE_TOL => {
                    *out_probs.last_mut().unwrap() += p;
                }
                _ => {
                    out_atoms.push(x);
                    out_probs.push(p);
                }
            }
        }
        let sum: f64 = out_probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::invalid(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(DiscreteDistribution {
            atoms: out_atoms,
            probs: out_probs,
        })
    }

    /// Point mass at `c`.
    pub fn dirac(c: f64) -> Self {
        DiscreteDistribution {
            atoms: vec![c],
            probs: vec![1.0],
        }
    }

    /// Two-atom distribution with mass `q` on the right atom.
    pub fn bernoulli(sup: BernoulliSupport, q: f64) -> Result<Self> {
        DiscreteDistribution::new(vec![sup.theta1, sup.theta2], vec![1.0 - q, q])
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of support atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min_atom(&self) -> f64 {
        self.atoms[0]
    }

    pub fn max_atom(&self) -> f64 {
        *self.atoms.last().unwrap()
    }

    pub fn mean(&self) -> f64 {
        self.atoms
            .iter()
            .zip(&self.probs)
            .map(|(x, p)| x * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.atoms
            .iter()
            .zip(&self.probs)
            .map(|(x, p)| p * (x - m) * (x - m))
            .sum()
    }
}

/// Entropic risk measure (1/beta) log E[e^{beta X}], the mean at beta = 0.
/// Evaluated in log-sum-exp form so large |beta| * support stays finite.
pub fn entrm(d: &DiscreteDistribution, rp: RiskParam) -> Result<f64> {
    if rp.is_risk_neutral() {
        return Ok(d.mean());
    }
    // A unit point mass has EntRM exactly equal to its atom; bypassing the
    // log-sum-exp avoids a (b*x)/b round trip that costs an ulp.
    if d.atoms.len() == 1 && d.probs[0] == 1.0 {
        return Ok(d.atoms[0]);
    }
    let b = rp.beta();
    let mut m = f64::NEG_INFINITY;
    for (&x, &p) in d.atoms.iter().zip(&d.probs) {
        let t = b * x + p.ln();
        if t > m {
            m = t;
        }
    }
    let sum: f64 = d
        .atoms
        .iter()
        .zip(&d.probs)
        .map(|(&x, &p)| (b * x + p.ln() - m).exp())
        .sum();
    let out = (m + sum.ln()) / b;
    if !out.is_finite() {
        return Err(Error::NumericRange(format!(
            "entrm overflowed at beta = {b}"
        )));
    }
    Ok(out)
}

/// Exponential utility E[e^{beta X}] = e^{beta entrm}. Rejected at beta = 0,
/// where it is constant 1 and carries no ordering information.
pub fn eu(d: &DiscreteDistribution, rp: RiskParam) -> Result<f64> {
    rp.require_non_neutral("exponential utility")?;
    let b = rp.beta();
    let sum: f64 = d
        .atoms
        .iter()
        .zip(&d.probs)
        .map(|(&x, &p)| p * (b * x).exp())
        .sum();
    if !sum.is_finite() {
        return Err(Error::NumericRange(format!("eu overflowed at beta = {b}")));
    }
    Ok(sum)
}

/// Mixture sum_i w_i F_i with merged support. Zero-weight components are
/// dropped; the weights must lie on the simplex.
pub fn mix(weights: &[f64], dists: &[&DiscreteDistribution]) -> Result<DiscreteDistribution> {
    if weights.len() != dists.len() {
        return Err(Error::invalid(format!(
            "weight/distribution length mismatch: {} vs {}",
            weights.len(),
            dists.len()
        )));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::invalid(format!(
            "mixture weights sum to {sum}, expected 1"
        )));
    }
    let mut atoms = Vec::new();
    let mut probs = Vec::new();
    for (&w, d) in weights.iter().zip(dists.iter()) {
        if w < 0.0 {
            return Err(Error::invalid(format!("negative mixture weight {w}")));
        }
        if w == 0.0 {
            continue;
        }
        for (&x, &p) in d.atoms.iter().zip(&d.probs) {
            atoms.push(x);
            probs.push(w * p);
        }
    }
    DiscreteDistribution::new(atoms, probs)
}

/// Translates every atom by `c`.
pub fn shift(d: &DiscreteDistribution, c: f64) -> DiscreteDistribution {
    DiscreteDistribution {
        atoms: d.atoms.iter().map(|x| x + c).collect(),
        probs: d.probs.clone(),
    }
}

/// Supremum (Kolmogorov) distance sup_x |F(x) - G(x)|, attained on the union
/// of the two supports since both CDFs are right-continuous step functions.
pub fn sup_distance(f: &DiscreteDistribution, g: &DiscreteDistribution) -> f64 {
    let mut i = 0;
    let mut j = 0;
    let mut cf = 0.0;
    let mut cg = 0.0;
    let mut best: f64 = 0.0;
    while i < f.atoms.len() || j < g.atoms.len() {
        let xf = f.atoms.get(i).copied().unwrap_or(f64::INFINITY);
        let xg = g.atoms.get(j).copied().unwrap_or(f64::INFINITY);
        if xf <= xg {
            cf += f.probs[i];
            i += 1;
        }
        if xg <= xf {
            cg += g.probs[j];
            j += 1;
        }
        let gap = (cf - cg).abs();
        if gap > best {
            best = gap;
        }
    }
    best
}

/// Distributional optimism: subtracts `c` from the CDF at every atom below
/// `support_hi` (clipping at 0) and deposits the removed mass on the
/// `support_hi` atom, creating it if absent. The result stochastically
/// dominates every distribution within sup-distance `c` of the input that is
/// supported in the same range.
pub fn optimism_cdf(
    d: &DiscreteDistribution,
    c: f64,
    support_hi: f64,
) -> Result<DiscreteDistribution> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::invalid(format!("optimism level {c} outside [0,1]")));
    }
    if d.max_atom() > support_hi + ATOM_MERGE_TOL {
        return Err(Error::invalid(format!(
            "atom {} exceeds declared support top {support_hi}",
            d.max_atom()
        )));
    }
    let mut atoms = Vec::with_capacity(d.len() + 1);
    let mut probs = Vec::with_capacity(d.len() + 1);
    let mut cum = 0.0;
    let mut prev = 0.0;
    for (&x, &p) in d.atoms.iter().zip(&d.probs) {
        if x >= support_hi - ATOM_MERGE_TOL {
            break;
        }
        cum += p;
        let clipped = (cum - c).max(0.0);
        if clipped > prev {
            atoms.push(x);
            probs.push(clipped - prev);
            prev = clipped;
        }
    }
    atoms.push(support_hi);
    probs.push(1.0 - prev);
    DiscreteDistribution::new(atoms, probs)
}

/// Model optimism over transition rows: moves up to `c`/2 total mass from the
/// lowest-value states (drained in ascending value order, lower index first on
/// ties) onto the single highest-value state (largest index on ties). The
/// result stays within the l1 ball of radius `c` around `p_hat` intersected
/// with the simplex and maximizes the induced mixture value there.
///
/// ```
/// use rsdp::dist::optimism_pmf;
///
/// let row = optimism_pmf(&[0.5, 0.3, 0.2], &[0.0, 1.0, 2.0], 0.4);
/// // 0.2 mass drained from the lowest-value state onto the highest-value one
/// assert_eq!(row, vec![0.3, 0.3, 0.4]);
/// ```
pub fn optimism_pmf(p_hat: &[f64], entrm_values: &[f64], c: f64) -> Vec<f64> {
    debug_assert_eq!(p_hat.len(), entrm_values.len());
    let n = p_hat.len();
    let mut out = p_hat.to_vec();
    if n <= 1 || c <= 0.0 {
        return out;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        entrm_values[i]
            .partial_cmp(&entrm_values[j])
            .unwrap()
            .then(i.cmp(&j))
    });
    let recipient = *order.last().unwrap();
    let mut budget = c / 2.0;
    for &i in &order {
        if i == recipient {
            continue;
        }
        if budget <= 0.0 {
            break;
        }
        let take = out[i].min(budget);
        out[i] -= take;
        out[recipient] += take;
        budget -= take;
    }
    out
}

/// Value-equivalent projection onto a two-atom support: maps each atom `x` to
/// mass q(x) = (e^{beta x} - e^{beta theta1}) / (e^{beta theta2} - e^{beta theta1})
/// on the right atom, preserving the exponential utility (hence the EntRM)
/// exactly.
///
/// ```
/// use rsdp::dist::{bernoulli_project, entrm, BernoulliSupport, DiscreteDistribution, RiskParam};
///
/// let beta = RiskParam::new(-1.1).unwrap();
/// let d = DiscreteDistribution::new(vec![0.5, 1.0, 2.5], vec![0.2, 0.5, 0.3]).unwrap();
/// let two = bernoulli_project(&d, BernoulliSupport::new(0.0, 3.0).unwrap(), beta).unwrap();
/// assert_eq!(two.atoms().len(), 2);
/// let drift = (entrm(&two, beta).unwrap() - entrm(&d, beta).unwrap()).abs();
/// assert!(drift < 1e-12);
/// ```
pub fn bernoulli_project(
    d: &DiscreteDistribution,
    sup: BernoulliSupport,
    rp: RiskParam,
) -> Result<DiscreteDistribution> {
    rp.require_non_neutral("the value-equivalent projection")?;
    if d.min_atom() < sup.theta1 - 1e-9 || d.max_atom() > sup.theta2 + 1e-9 {
        return Err(Error::invalid(format!(
            "support [{}, {}] escapes projection atoms ({}, {})",
            d.min_atom(),
            d.max_atom(),
            sup.theta1,
            sup.theta2
        )));
    }
    let b = rp.beta();
    let denom = (b * (sup.theta2 - sup.theta1)).exp_m1();
    let q: f64 = d
        .atoms
        .iter()
        .zip(&d.probs)
        .map(|(&x, &p)| p * (b * (x - sup.theta1)).exp_m1() / denom)
        .sum();
    DiscreteDistribution::bernoulli(sup, q.clamp(0.0, 1.0))
}

/// Lipschitz constant |e^{beta M} - 1| of the exponential utility with respect
/// to the supremum distance over distributions supported in [0, M].
pub fn lipschitz_const(rp: RiskParam, m: f64) -> Result<f64> {
    rp.require_non_neutral("the EU Lipschitz constant")?;
    if m < 0.0 {
        return Err(Error::invalid(format!("support bound {m} must be >= 0")));
    }
    Ok((rp.beta() * m).exp_m1().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rp(beta: f64) -> RiskParam {
        RiskParam::new(beta).unwrap()
    }

    fn bern(p: f64) -> DiscreteDistribution {
        DiscreteDistribution::new(vec![0.0, 1.0], vec![1.0 - p, p]).unwrap()
    }

    #[test]
    fn entrm_dirac_is_translation() {
        let d = DiscreteDistribution::dirac(2.5);
        assert!((entrm(&d, rp(-1.1)).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn entrm_neutral_is_mean() {
        assert!((entrm(&bern(0.5), rp(0.0)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn entrm_matches_closed_form() {
        let v = entrm(&bern(0.5), rp(1.0)).unwrap();
        let expect = ((1.0 + std::f64::consts::E) / 2.0).ln();
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn entrm_survives_large_beta_horizon() {
        let d = DiscreteDistribution::new(vec![0.0, 700.0], vec![0.5, 0.5]).unwrap();
        let v = entrm(&d, rp(1.0)).unwrap();
        assert!(v.is_finite() && v > 699.0);
        let v = entrm(&d, rp(-1.0)).unwrap();
        assert!(v.is_finite() && v < 1.0);
    }

    #[test]
    fn eu_rejects_neutral() {
        assert!(eu(&bern(0.5), rp(0.0)).is_err());
    }

    #[test]
    fn eu_matches_closed_form() {
        let v = eu(&DiscreteDistribution::dirac(1.0), rp(2f64.ln())).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let v = eu(&bern(0.3), rp(1.0)).unwrap();
        assert!((v - (0.7 + 0.3 * std::f64::consts::E)).abs() < 1e-12);
    }

    #[test]
    fn mix_merges_duplicates() {
        let d0 = DiscreteDistribution::dirac(0.0);
        let m = mix(&[0.5, 0.5], &[&d0, &d0]).unwrap();
        assert_eq!(m.len(), 1);
        let m = mix(&[0.5, 0.5], &[&d0, &DiscreteDistribution::dirac(1.0)]).unwrap();
        assert_eq!(m.atoms(), &[0.0, 1.0]);
        assert_eq!(m.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn mix_rejects_off_simplex() {
        let d0 = DiscreteDistribution::dirac(0.0);
        assert!(mix(&[0.5, 0.6], &[&d0, &d0]).is_err());
    }

    #[test]
    fn sup_distance_examples() {
        assert_eq!(sup_distance(&bern(0.3), &bern(0.3)), 0.0);
        assert!((sup_distance(&bern(0.3), &bern(0.5)) - 0.2).abs() < 1e-12);
        let d0 = DiscreteDistribution::dirac(0.0);
        let d1 = DiscreteDistribution::dirac(1.0);
        assert!((sup_distance(&d0, &d1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimism_cdf_bernoulli_form() {
        let out = optimism_cdf(&bern(0.3), 0.2, 1.0).unwrap();
        assert_eq!(out.atoms(), &[0.0, 1.0]);
        assert!((out.probs()[1] - 0.5).abs() < 1e-12);
        let out = optimism_cdf(&bern(0.3), 0.9, 1.0).unwrap();
        assert_eq!(out.atoms(), &[1.0]);
    }

    #[test]
    fn optimism_cdf_three_atoms() {
        let d =
            DiscreteDistribution::new(vec![0.0, 0.5, 1.0], vec![0.5, 0.3, 0.2]).unwrap();
        let out = optimism_cdf(&d, 0.4, 1.0).unwrap();
        let expect = [0.1, 0.3, 0.6];
        for (p, e) in out.probs().iter().zip(expect.iter()) {
            assert!((p - e).abs() < 1e-12);
        }
    }

    #[test]
    fn optimism_cdf_creates_top_atom() {
        let d = DiscreteDistribution::dirac(0.0);
        let out = optimism_cdf(&d, 0.25, 2.0).unwrap();
        assert_eq!(out.atoms(), &[0.0, 2.0]);
        assert!((out.probs()[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn optimism_cdf_rejects_atom_above_top() {
        assert!(optimism_cdf(&bern(0.5), 0.1, 0.5).is_err());
    }

    #[test]
    fn optimism_pmf_examples() {
        let out = optimism_pmf(&[0.5, 0.3, 0.2], &[0.0, 1.0, 2.0], 0.4);
        let expect = [0.3, 0.3, 0.4];
        for (p, e) in out.iter().zip(expect.iter()) {
            assert!((p - e).abs() < 1e-12);
        }
        let p = [0.5, 0.3, 0.2];
        assert_eq!(optimism_pmf(&p, &[0.0, 1.0, 2.0], 0.0), p.to_vec());
        let out = optimism_pmf(&[0.5, 0.5], &[0.0, 1.0], 4.0);
        assert_eq!(out, vec![0.0, 1.0]);
    }

    #[test]
    fn optimism_pmf_tie_recipient_is_largest_index() {
        let out = optimism_pmf(&[0.4, 0.3, 0.3], &[0.0, 1.0, 1.0], 0.2);
        assert!((out[0] - 0.3).abs() < 1e-12);
        assert!((out[1] - 0.3).abs() < 1e-12);
        assert!((out[2] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_project_examples() {
        let sup = BernoulliSupport::new(0.0, 2.0).unwrap();
        let b = rp(2f64.ln());
        let out = bernoulli_project(&DiscreteDistribution::dirac(1.0), sup, b).unwrap();
        assert!((out.probs()[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((entrm(&out, b).unwrap() - 1.0).abs() < 1e-12);
        let out = bernoulli_project(&DiscreteDistribution::dirac(0.0), sup, b).unwrap();
        assert_eq!(out.atoms(), &[0.0]);
        let out = bernoulli_project(&DiscreteDistribution::dirac(2.0), sup, b).unwrap();
        assert_eq!(out.atoms(), &[2.0]);
    }

    #[test]
    fn lipschitz_const_examples() {
        assert_eq!(lipschitz_const(rp(1.0), 0.0).unwrap(), 0.0);
        assert!((lipschitz_const(rp(2f64.ln()), 1.0).unwrap() - 1.0).abs() < 1e-12);
        let v = lipschitz_const(rp(-1.0), 1.0).unwrap();
        assert!((v - (1.0 - (-1f64).exp())).abs() < 1e-12);
        assert!(lipschitz_const(rp(0.0), 1.0).is_err());
    }

    #[test]
    fn taylor_expansion_near_zero() {
        let d =
            DiscreteDistribution::new(vec![0.0, 0.7, 2.0], vec![0.3, 0.45, 0.25]).unwrap();
        let m3 = 8.0;
        let mut c_fit = 0.0f64;
        for &b in &[1e-3, 1e-4] {
            let err =
                (entrm(&d, rp(b)).unwrap() - d.mean() - b / 2.0 * d.variance()).abs();
            c_fit = c_fit.max(err / (b * b));
        }
        assert!(c_fit <= 10.0 * m3);
    }

    fn arb_dist(max_atom: f64) -> impl Strategy<Value = DiscreteDistribution> {
        proptest::collection::vec((0.0..max_atom, 0.01..1.0f64), 1..6).prop_map(|pairs| {
            let total: f64 = pairs.iter().map(|(_, w)| w).sum();
            let (atoms, probs): (Vec<f64>, Vec<f64>) =
                pairs.into_iter().map(|(x, w)| (x, w / total)).unzip();
            DiscreteDistribution::new(atoms, probs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn translation_invariance(d in arb_dist(5.0), c in -3.0..3.0f64, b in -2.0..2.0f64) {
            let r = rp(b);
            let lhs = entrm(&shift(&d, c), r).unwrap();
            let rhs = entrm(&d, r).unwrap() + c;
            prop_assert!((lhs - rhs).abs() <= 1e-9);
        }

        #[test]
        fn optimism_cdf_dominates(d in arb_dist(4.0), c in 0.0..1.0f64) {
            let up = optimism_cdf(&d, c, 4.0).unwrap();
            let total: f64 = up.probs().iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
            for &b in &[-2.0, -1.1, -0.1, 0.1, 1.0, 2.0] {
                let r = rp(b);
                prop_assert!(entrm(&up, r).unwrap() >= entrm(&d, r).unwrap() - 1e-12);
            }
        }

        #[test]
        fn mixture_independence(
            f in arb_dist(3.0), g in arb_dist(3.0), h in arb_dist(3.0),
            theta in 0.0..1.0f64, b in -2.0..2.0f64,
        ) {
            let r = rp(b);
            let (lo, hi) = if entrm(&f, r).unwrap() <= entrm(&g, r).unwrap() {
                (&f, &g)
            } else {
                (&g, &f)
            };
            let ml = mix(&[theta, 1.0 - theta], &[lo, &h]).unwrap();
            let mh = mix(&[theta, 1.0 - theta], &[hi, &h]).unwrap();
            prop_assert!(entrm(&ml, r).unwrap() <= entrm(&mh, r).unwrap() + 1e-9);
        }

        #[test]
        fn eu_linearity(
            f in arb_dist(3.0), g in arb_dist(3.0), w in 0.0..1.0f64, b in 0.1..2.0f64,
        ) {
            let r = rp(b);
            let m = mix(&[w, 1.0 - w], &[&f, &g]).unwrap();
            let lhs = eu(&m, r).unwrap();
            let rhs = w * eu(&f, r).unwrap() + (1.0 - w) * eu(&g, r).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
        }

        #[test]
        fn lipschitz_bound(f in arb_dist(3.0), g in arb_dist(3.0), b in -2.0..2.0f64) {
            prop_assume!(b != 0.0);
            let r = rp(b);
            let l = lipschitz_const(r, 3.0).unwrap();
            let gap = (eu(&f, r).unwrap() - eu(&g, r).unwrap()).abs();
            prop_assert!(gap <= l * sup_distance(&f, &g) + 1e-9);
        }

        #[test]
        fn projection_preserves_eu(d in arb_dist(3.0), b in -2.0..2.0f64) {
            prop_assume!(b.abs() > 1e-3);
            let r = rp(b);
            let sup = BernoulliSupport::new(-0.5, 3.5).unwrap();
            let pd = bernoulli_project(&d, sup, r).unwrap();
            let (a, e) = (eu(&pd, r).unwrap(), eu(&d, r).unwrap());
            prop_assert!((a - e).abs() <= 1e-12 * e.abs().max(1.0));
        }
    }
}
