//! Repeated Nash bargaining between self-interested operators.
//!
//! In real time the operators always run the full-cooperation trades and
//! offloading for their combined commitment, then split the bill so both
//! gain the same amount over trading alone. Day ahead they agree to buy the
//! full-cooperation commitment and bargain over how to split it, which moves
//! expected value from one operator to the other.

use rayon::prelude::*;

use crate::commitment::CommitmentPlan;
use crate::error::{Error, Result};
use crate::model::{Mno, NetworkConfig, SlotPrices, TradeDecision};
use crate::scenario::{sample_scenario, PriceCurve, TrafficModel};
use crate::sharing::{no_share_energy, shared_demand, PairDecision};
use crate::trading::{group_trade, individual_trade};

/// Settlement of one slot under real-time bargaining.
#[derive(Debug, Clone, PartialEq)]
pub struct BargainSlotOutcome {
    /// Trades executed for the group.
    pub trade: TradeDecision,
    pub shares: Vec<PairDecision>,
    /// What each operator would have paid trading alone on its own commitment.
    pub standalone: [f64; 2],
    pub cost1: f64,
    pub cost2: f64,
    /// Net transfer from operator 1 to operator 2 (negative: 2 pays 1).
    pub payment_net: f64,
}

impl BargainSlotOutcome {
    pub fn group_cost(&self) -> f64 {
        self.trade.cost
    }

    pub fn cost(&self, mno: Mno) -> f64 {
        match mno {
            Mno::One => self.cost1,
            Mno::Two => self.cost2,
        }
    }

    /// Saving over trading alone; never negative.
    pub fn payoff(&self, mno: Mno) -> f64 {
        self.standalone[mno.index()] - self.cost(mno)
    }
}

/// Nash bargaining split of a joint cost `total` given each side's
/// stand-alone cost: both sides save the same amount.
pub fn nash_cost_split(total: f64, standalone: [f64; 2]) -> [f64; 2] {
    let cost1 = 0.5 * total + 0.5 * (standalone[0] - standalone[1]);
    [cost1, total - cost1]
}

/// Real-time bargaining for one slot.
///
/// `loads[k]` are the realised loads of pair `k`. The group runs optimal
/// offloading and trades against `g1 + g2`; each operator's stand-alone cost
/// is its own trade against its own commitment and unshared demand.
///
/// For the payment, each operator is first charged its own commitment plus
/// a share of the group's real-time bill proportional to its unshared
/// demand; `payment_net` then moves money so the charges match the bargained
/// split.
pub fn realtime_bargain(
    g1: f64,
    g2: f64,
    prices: &SlotPrices,
    loads: &[[f64; 2]],
    net: &NetworkConfig,
) -> Result<BargainSlotOutcome> {
    if !(g1 >= 0.0 && g2 >= 0.0) {
        return Err(Error::domain(format!(
            "commitments must be non-negative, got {g1} and {g2}"
        )));
    }
    let (zeta, shares) = shared_demand(loads, net)?;
    let trade = group_trade(g1 + g2, zeta, prices)?;
    let own = no_share_energy(loads, net);
    let standalone = [
        individual_trade(g1, own[0], prices)?.cost,
        individual_trade(g2, own[1], prices)?.cost,
    ];
    let [cost1, cost2] = nash_cost_split(trade.cost, standalone);

    let realtime = prices.alpha_buy * trade.buy - prices.alpha_sell * trade.sell;
    let weight1 = if own[0] + own[1] > 0.0 {
        own[0] / (own[0] + own[1])
    } else {
        0.5
    };
    let charged1 = prices.alpha * g1 + weight1 * realtime;
    Ok(BargainSlotOutcome {
        trade,
        shares,
        standalone,
        cost1,
        cost2,
        payment_net: cost1 - charged1,
    })
}

/// Expected costs on which the day-ahead bargain rests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpsilonEstimate {
    /// Expected daily saving of each operator if the group cost were split
    /// evenly: `E[own cost] - E[group cost] / 2`.
    pub upsilon: [f64; 2],
    /// Expected daily non-cooperative cost per operator.
    pub noncoop: [f64; 2],
    /// Expected daily full-cooperation cost.
    pub group: f64,
}

/// Monte-Carlo estimate of both operators' disagreement-relative savings,
/// on `realizations` scenarios seeded from `seed`. Both schemes see the same
/// scenarios.
#[allow(clippy::too_many_arguments)]
pub fn expected_upsilons(
    model: &TrafficModel,
    net: &NetworkConfig,
    curve: &PriceCurve,
    noncoop: [&CommitmentPlan; 2],
    group: &CommitmentPlan,
    realizations: usize,
    seed: u64,
) -> Result<UpsilonEstimate> {
    if realizations == 0 {
        return Err(Error::config("at least one realization is required"));
    }
    for plan in noncoop.iter().chain([&group]) {
        if plan.n_slots() != net.n_slots() {
            return Err(Error::config(
                "commitment plan length differs from slot count",
            ));
        }
    }
    let per_run = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let s = sample_scenario(curve, model, net, crate::rng::derive(seed, &[r as u64]))?;
            let mut own = [0.0; 2];
            let mut grp = 0.0;
            for n in 0..net.n_slots() {
                let d = no_share_energy(&s.traffic[n], net);
                for i in 0..2 {
                    own[i] += individual_trade(noncoop[i].g[n], d[i], &s.prices[n])?.cost;
                }
                let (z, _) = shared_demand(&s.traffic[n], net)?;
                grp += group_trade(group.g[n], z, &s.prices[n])?.cost;
            }
            Ok((own, grp))
        })
        .collect::<Result<Vec<_>>>()?;
    let r = realizations as f64;
    let mut own = [0.0; 2];
    let mut grp = 0.0;
    for (o, g) in &per_run {
        own[0] += o[0];
        own[1] += o[1];
        grp += g;
    }
    let noncoop = [own[0] / r, own[1] / r];
    let group = grp / r;
    Ok(UpsilonEstimate {
        upsilon: [noncoop[0] - 0.5 * group, noncoop[1] - 0.5 * group],
        noncoop,
        group,
    })
}

/// Maximiser of `(u1 + t)(u2 - t)` over `t` in `[t_min, t_max]` subject to
/// both factors being non-negative. `None` when no such `t` exists.
pub fn nash_transfer(u1: f64, u2: f64, t_min: f64, t_max: f64) -> Option<f64> {
    let lo = t_min.max(-u1);
    let hi = t_max.min(u2);
    if lo > hi {
        return None;
    }
    Some((0.5 * (u2 - u1)).clamp(lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BargainDayOutcome {
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub upsilon1: f64,
    pub upsilon2: f64,
    pub payoff1: f64,
    pub payoff2: f64,
    /// Expected value moved to operator 1 by the commitment split.
    pub transfer: f64,
    /// Fraction of each slot's group commitment assigned to operator 1.
    pub share1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DayAheadAgreement {
    Agreement(BargainDayOutcome),
    /// No split leaves both operators at least as well off as going alone.
    Disagreement {
        upsilon1: f64,
        upsilon2: f64,
    },
}

/// Day-ahead bargaining over the split of the group commitment.
///
/// Expected stand-alone cost of a commitment `G` is approximated by its
/// under-commitment branch at the forecast demand,
/// `(alpha - buy_pred) * G + buy_pred * demand_forecast`. Operator 1's
/// payoff is then `upsilon1 + t` and operator 2's `upsilon2 - t`, where the
/// transfer `t` is linear in the split. Every slot gets the same fraction
/// of its group commitment, chosen so `t` hits the Nash optimum.
pub fn dayahead_bargain(
    group_plan: &CommitmentPlan,
    upsilons: [f64; 2],
    model: &TrafficModel,
    net: &NetworkConfig,
    curve: &PriceCurve,
) -> Result<DayAheadAgreement> {
    model.check_against(net)?;
    if group_plan.n_slots() != net.n_slots() || curve.n_slots() != net.n_slots() {
        return Err(Error::config(
            "group plan, price curve and network disagree on slot count",
        ));
    }
    // t(share) = base + slope * share
    let mut base = 0.0;
    let mut slope = 0.0;
    for (n, &g) in group_plan.g.iter().enumerate() {
        let p = curve.predicted(n);
        let gap = p.alpha - p.alpha_buy;
        let z1 = model.predicted_demand(net, Mno::One, n);
        let z2 = model.predicted_demand(net, Mno::Two, n);
        base += 0.5 * (gap * g + p.alpha_buy * (z2 - z1));
        slope -= gap * g;
    }
    let [u1, u2] = upsilons;
    let (t_min, t_max) = (base.min(base + slope), base.max(base + slope));
    let Some(transfer) = nash_transfer(u1, u2, t_min, t_max) else {
        return Ok(DayAheadAgreement::Disagreement {
            upsilon1: u1,
            upsilon2: u2,
        });
    };
    let share1 = if slope.abs() > 0.0 {
        ((transfer - base) / slope).clamp(0.0, 1.0)
    } else {
        0.5
    };
    let g1: Vec<f64> = group_plan.g.iter().map(|g| share1 * g).collect();
    let g2 = group_plan.g.iter().zip(&g1).map(|(g, a)| g - a).collect();
    Ok(DayAheadAgreement::Agreement(BargainDayOutcome {
        g1,
        g2,
        upsilon1: u1,
        upsilon2: u2,
        payoff1: u1 + transfer,
        payoff2: u2 - transfer,
        transfer,
        share1,
    }))
}
