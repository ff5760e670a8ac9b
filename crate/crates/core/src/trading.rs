//! Optimal real-time trading against a day-ahead commitment.
//!
//! Real-time buying costs more than the day-ahead price and selling earns
//! less, so the best recourse simply covers the shortfall or sells the
//! surplus. The slot cost as a function of the commitment `G` is convex and
//! piecewise linear with its kink at `G = zeta`.

use crate::error::{Error, Result};
use crate::model::{SlotPrices, TradeDecision};

fn trade(commitment: f64, zeta: f64, pr: &SlotPrices) -> Result<TradeDecision> {
    if commitment.is_nan() || zeta.is_nan() || commitment < 0.0 || zeta < 0.0 {
        return Err(Error::domain(format!(
            "commitment ({commitment}) and demand ({zeta}) must be non-negative"
        )));
    }
    let buy = (zeta - commitment).max(0.0);
    let sell = (commitment - zeta).max(0.0);
    let cost = pr.alpha * commitment + pr.alpha_buy * buy - pr.alpha_sell * sell;
    Ok(TradeDecision {
        commitment,
        buy,
        sell,
        cost,
    })
}

/// Real-time recourse of one operator serving its own demand `zeta`.
pub fn individual_trade(commitment: f64, zeta: f64, pr: &SlotPrices) -> Result<TradeDecision> {
    trade(commitment, zeta, pr)
}

/// Real-time recourse of the aggregated group against its post-sharing
/// demand. Same rule as [`individual_trade`]; the gain comes from netting the
/// two operators' imbalances and from the reduced demand.
pub fn group_trade(commitment: f64, zeta_shared: f64, pr: &SlotPrices) -> Result<TradeDecision> {
    trade(commitment, zeta_shared, pr)
}
