//! Day-ahead commitment as a two-stage stochastic program.
//!
//! Expected slot cost is convex in the commitment `G`. Its subgradient is
//!
//! ```text
//! g(G) = (alpha - buy_pred) * P(zeta > G) + (alpha - sell_pred) * P(zeta <= G)
//! ```
//!
//! which is nondecreasing in `G`: below the demand every extra unit saves a
//! real-time purchase, above it every extra unit is sold back at a loss. The
//! probabilities are estimated from Monte-Carlo demand samples and the root
//! is found by bisection. The same samples are reused for every evaluation
//! in a slot, so the estimate is a fixed step function and bisection
//! terminates exactly.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Mno, NetworkConfig, SlotPrices};
use crate::rng;
use crate::scenario::{draw_slot_loads, ClampCounts, PriceCurve, TrafficModel};
use crate::sharing::shared_demand;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub m_samples: usize,
    /// Bisection stops once the bracket is narrower than this, Wh.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            m_samples: 1000,
            tol: 0.1,
            max_iter: 200,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_samples == 0 {
            return Err(Error::config("Monte-Carlo sample count must be at least 1"));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::config("bisection tolerance must be positive"));
        }
        Ok(())
    }
}

/// Per-slot day-ahead commitments, Wh.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitmentPlan {
    pub g: Vec<f64>,
}

impl CommitmentPlan {
    pub fn n_slots(&self) -> usize {
        self.g.len()
    }
}

fn check_inputs(model: &TrafficModel, net: &NetworkConfig, n: usize, cfg: &McConfig) -> Result<()> {
    cfg.validate()?;
    model.check_against(net)?;
    if n >= net.n_slots() {
        return Err(Error::domain(format!(
            "slot {n} out of range for {} slots",
            net.n_slots()
        )));
    }
    Ok(())
}

/// Realised loads of Monte-Carlo sample `m` in slot `n`.
///
/// Individual and group sampling both read these, so their demand samples
/// are paired draw by draw.
fn sample_loads(
    model: &TrafficModel,
    net: &NetworkConfig,
    n: usize,
    m: usize,
    seed: u64,
) -> Vec<[f64; 2]> {
    let mut r = rng::stream(seed, &[n as u64, m as u64]);
    let mut clamps = ClampCounts::default();
    draw_slot_loads(&mut r, model, net, n, &mut clamps)
}

/// Demand samples of one operator without load sharing.
pub fn sample_demands_individual(
    mno: Mno,
    n: usize,
    model: &TrafficModel,
    net: &NetworkConfig,
    cfg: &McConfig,
    seed: u64,
) -> Result<Vec<f64>> {
    check_inputs(model, net, n, cfg)?;
    let i = mno.index();
    Ok((0..cfg.m_samples)
        .map(|m| {
            sample_loads(model, net, n, m, seed)
                .iter()
                .zip(net.params())
                .map(|(d, p)| p[i].power_unchecked(d[i]))
                .sum()
        })
        .collect())
}

/// Post-sharing group demand samples; every sample re-runs the pair
/// offloading on its own realised loads.
pub fn sample_demands_group(
    n: usize,
    model: &TrafficModel,
    net: &NetworkConfig,
    cfg: &McConfig,
    seed: u64,
) -> Result<Vec<f64>> {
    check_inputs(model, net, n, cfg)?;
    (0..cfg.m_samples)
        .map(|m| shared_demand(&sample_loads(model, net, n, m, seed), net).map(|(z, _)| z))
        .collect()
}

/// Sample-average subgradient of the expected slot cost at commitment `g`,
/// evaluated at the forecast prices.
pub fn approx_subgradient(g: f64, samples: &[f64], prices: &SlotPrices) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let above = samples.iter().filter(|&&z| z > g).count() as f64;
    let below = samples.len() as f64 - above;
    Ok(
        ((prices.alpha - prices.alpha_buy) * above + (prices.alpha - prices.alpha_sell) * below)
            / samples.len() as f64,
    )
}

/// Sample-average expected cost at commitment `g`, used for cross-checks.
pub fn sample_average_cost(g: f64, samples: &[f64], prices: &SlotPrices) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let total: f64 = samples
        .iter()
        .map(|&z| crate::trading::individual_trade(g, z, prices).map(|t| t.cost))
        .sum::<Result<f64>>()?;
    Ok(total / samples.len() as f64)
}

/// Bisection on the sampled subgradient over `[0, max sample + 1]`.
///
/// If the subgradient is already non-negative at zero (day-ahead energy no
/// cheaper than real-time purchase) nothing is committed; if it is still
/// non-positive at the top of the bracket the top is returned.
pub fn optimize_commitment(samples: &[f64], prices: &SlotPrices, cfg: &McConfig) -> Result<f64> {
    cfg.validate()?;
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut lo = 0.0;
    let mut hi = samples.iter().cloned().fold(0.0, f64::max) + 1.0;
    let g_lo = approx_subgradient(lo, samples, prices)?;
    if g_lo >= 0.0 {
        return Ok(lo);
    }
    let g_hi = approx_subgradient(hi, samples, prices)?;
    if g_hi <= 0.0 {
        return Ok(hi);
    }
    let mut iter = 0;
    while hi - lo > cfg.tol && iter < cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        let g = approx_subgradient(mid, samples, prices)?;
        debug_assert!(
            (g_lo..=g_hi).contains(&g),
            "sampled subgradient not monotone"
        );
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
    }
    Ok(0.5 * (lo + hi))
}

fn check_curve(curve: &PriceCurve, net: &NetworkConfig) -> Result<()> {
    if curve.n_slots() != net.n_slots() {
        return Err(Error::config(format!(
            "price curve has {} slots, network has {}",
            curve.n_slots(),
            net.n_slots()
        )));
    }
    Ok(())
}

/// Non-cooperative day-ahead plan of one operator.
pub fn plan_noncoop(
    mno: Mno,
    model: &TrafficModel,
    net: &NetworkConfig,
    curve: &PriceCurve,
    cfg: &McConfig,
    seed: u64,
) -> Result<CommitmentPlan> {
    check_curve(curve, net)?;
    let g = (0..net.n_slots())
        .into_par_iter()
        .map(|n| {
            let samples = sample_demands_individual(mno, n, model, net, cfg, seed)?;
            optimize_commitment(&samples, &curve.predicted(n), cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CommitmentPlan { g })
}

/// Day-ahead group-buying plan of the cooperating operators.
pub fn plan_group(
    model: &TrafficModel,
    net: &NetworkConfig,
    curve: &PriceCurve,
    cfg: &McConfig,
    seed: u64,
) -> Result<CommitmentPlan> {
    check_curve(curve, net)?;
    let g = (0..net.n_slots())
        .into_par_iter()
        .map(|n| {
            let samples = sample_demands_group(n, model, net, cfg, seed)?;
            optimize_commitment(&samples, &curve.predicted(n), cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CommitmentPlan { g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BsParams;

    fn lte_net(k: usize, n: usize) -> NetworkConfig {
        NetworkConfig::uniform(k, n, BsParams::lte_macro()).unwrap()
    }

    fn pr() -> SlotPrices {
        SlotPrices::new(40.0, 50.0, 20.0)
    }

    #[test]
    fn degenerate_draws() {
        let net = lte_net(1, 1);
        let model = TrafficModel::new(vec![1.0], vec![[100.0, 40.0]], 0.0).unwrap();
        let cfg = McConfig {
            m_samples: 1,
            ..Default::default()
        };
        let s = sample_demands_individual(Mno::One, 0, &model, &net, &cfg, 1).unwrap();
        assert_eq!(s, vec![2400.0]);
        let g = sample_demands_group(0, &model, &net, &cfg, 1).unwrap();
        assert_eq!(g, vec![12.0 * 140.0 + 1200.0 + 30.0]);
    }

    #[test]
    fn empty_sample_set() {
        let net = lte_net(1, 1);
        let model = TrafficModel::new(vec![1.0], vec![[100.0, 40.0]], 0.4).unwrap();
        let cfg = McConfig {
            m_samples: 0,
            ..Default::default()
        };
        assert!(sample_demands_group(0, &model, &net, &cfg, 1).is_err());
        assert!(sample_demands_individual(Mno::Two, 0, &model, &net, &cfg, 1).is_err());
        assert!(matches!(
            approx_subgradient(1.0, &[], &pr()),
            Err(Error::EmptySamples)
        ));
        assert!(sample_demands_group(1, &model, &net, &McConfig::default(), 1).is_err());
    }

    #[test]
    fn subgradient_extremes() {
        let s = [10.0, 20.0, 30.0, 40.0];
        assert_eq!(approx_subgradient(0.0, &s, &pr()).unwrap(), -10.0);
        assert_eq!(approx_subgradient(100.0, &s, &pr()).unwrap(), 20.0);
        let mid = SlotPrices::new(35.0, 50.0, 20.0);
        assert_eq!(approx_subgradient(25.0, &s, &mid).unwrap(), 0.0);
    }

    #[test]
    fn expensive_day_ahead_commits_nothing() {
        let p = SlotPrices::new(60.0, 50.0, 20.0);
        assert_eq!(
            optimize_commitment(&[10.0, 20.0], &p, &McConfig::default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn midpoint_price_targets_median() {
        let samples: Vec<f64> = (0..101).map(|i| 1000.0 + 3.7 * i as f64).collect();
        let p = SlotPrices::new(35.0, 50.0, 20.0);
        let g = optimize_commitment(&samples, &p, &McConfig::default()).unwrap();
        assert!((g - samples[50]).abs() <= 0.1);
    }

    #[test]
    fn zero_error_plan_equals_forecast() {
        let net = lte_net(3, 4);
        let model =
            TrafficModel::new(vec![0.3, 0.5, 0.7, 0.9], vec![[50.0, 80.0]; 3], 0.0).unwrap();
        let curve = PriceCurve::new(vec![35.0; 4], vec![50.0; 4], vec![20.0; 4], 0.1, 0.1).unwrap();
        let cfg = McConfig {
            m_samples: 10,
            tol: 1e-6,
            max_iter: 200,
        };
        let plan = plan_noncoop(Mno::One, &model, &net, &curve, &cfg, 3).unwrap();
        assert_eq!(plan.n_slots(), 4);
        for n in 0..4 {
            let z = model.predicted_demand(&net, Mno::One, n);
            assert!(
                (plan.g[n] - z).abs() < 1e-5,
                "slot {n}: {} vs {z}",
                plan.g[n]
            );
        }
        assert_eq!(
            plan,
            plan_noncoop(Mno::One, &model, &net, &curve, &cfg, 3).unwrap()
        );
    }

    #[test]
    fn group_plan_below_individual_sum() {
        let net = lte_net(4, 3);
        let model = TrafficModel::new(vec![0.3, 0.5, 0.6], vec![[60.0, 50.0]; 4], 0.0).unwrap();
        let curve = PriceCurve::new(vec![35.0; 3], vec![50.0; 3], vec![20.0; 3], 0.1, 0.1).unwrap();
        let cfg = McConfig {
            m_samples: 5,
            ..Default::default()
        };
        let g = plan_group(&model, &net, &curve, &cfg, 9).unwrap();
        let p1 = plan_noncoop(Mno::One, &model, &net, &curve, &cfg, 9).unwrap();
        let p2 = plan_noncoop(Mno::Two, &model, &net, &curve, &cfg, 9).unwrap();
        for n in 0..3 {
            assert!(g.g[n] < p1.g[n] + p2.g[n]);
        }
        assert_eq!(g, plan_group(&model, &net, &curve, &cfg, 9).unwrap());
    }
}
