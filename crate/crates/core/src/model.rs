//! Shared domain types, the base-station power model and the per-slot cost.
//!
//! Slot length is normalised to one, so a power draw in watts is numerically
//! the energy in watt-hours consumed during the slot. Costs are plain
//! `price * energy` products.

use crate::error::{Error, Result};

/// Served traffic at or below this level (Mbps) puts a base station to sleep.
pub const SLEEP_TOLERANCE: f64 = 1e-12;

/// One of the two operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mno {
    One,
    Two,
}

impl Mno {
    pub const BOTH: [Mno; 2] = [Mno::One, Mno::Two];

    pub fn index(self) -> usize {
        match self {
            Mno::One => 0,
            Mno::Two => 1,
        }
    }

    pub fn other(self) -> Mno {
        match self {
            Mno::One => Mno::Two,
            Mno::Two => Mno::One,
        }
    }

    /// 1-based label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Mno::One => "1",
            Mno::Two => "2",
        }
    }
}

/// Linear power model of a base station.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsParams {
    /// Transmission slope, W per Mbps.
    pub a: f64,
    /// Active non-transmission power, W.
    pub b: f64,
    /// Sleep power, W.
    pub c: f64,
    /// Maximum supportable traffic, Mbps.
    pub d_max: f64,
}

impl BsParams {
    pub fn new(a: f64, b: f64, c: f64, d_max: f64) -> Result<Self> {
        let p = BsParams { a, b, c, d_max };
        p.validate()?;
        Ok(p)
    }

    /// LTE macro cell: 12 W/Mbps, 1200 W static, 30 W asleep, 150 Mbps.
    pub fn lte_macro() -> Self {
        BsParams {
            a: 12.0,
            b: 1200.0,
            c: 30.0,
            d_max: 150.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.a > 0.0
            && self.b > 0.0
            && self.c >= 0.0
            && self.c < self.b
            && self.d_max > 0.0
            && [self.a, self.b, self.c, self.d_max]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "base-station parameters need a > 0, b > 0, 0 <= c < b, d_max > 0; got {self:?}"
            )))
        }
    }

    /// Power drawn when serving `d` Mbps.
    ///
    /// Sleep power `c` is drawn only when nothing is served; any positive load
    /// costs the full `a * d + b`.
    pub fn power(&self, d: f64) -> Result<f64> {
        if !(d >= 0.0 && d <= self.d_max) {
            return Err(Error::domain(format!(
                "traffic {d} Mbps outside [0, {}]",
                self.d_max
            )));
        }
        Ok(self.power_unchecked(d))
    }

    pub(crate) fn power_unchecked(&self, d: f64) -> f64 {
        if d <= SLEEP_TOLERANCE {
            self.c
        } else {
            self.a * d + self.b
        }
    }
}

/// Free-function form of [`BsParams::power`].
pub fn bs_power(d: f64, p: &BsParams) -> Result<f64> {
    p.power(d)
}

/// Prices in effect for one slot: day-ahead, real-time buy and real-time sell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotPrices {
    pub alpha: f64,
    pub alpha_buy: f64,
    pub alpha_sell: f64,
}

impl SlotPrices {
    pub fn new(alpha: f64, alpha_buy: f64, alpha_sell: f64) -> Self {
        SlotPrices {
            alpha,
            alpha_buy,
            alpha_sell,
        }
    }

    pub fn is_ordered(&self) -> bool {
        0.0 <= self.alpha_sell && self.alpha_sell <= self.alpha && self.alpha <= self.alpha_buy
    }
}

/// Energy bought for one slot: the commitment plus real-time corrections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeDecision {
    pub commitment: f64,
    pub buy: f64,
    pub sell: f64,
    pub cost: f64,
}

impl TradeDecision {
    /// Net energy delivered to the buyer.
    pub fn purchased(&self) -> f64 {
        self.commitment + self.buy - self.sell
    }
}

/// Cost of a set of purchases under the given slot prices.
pub fn slot_cost(t: &TradeDecision, pr: &SlotPrices) -> Result<f64> {
    if t.buy < 0.0 || t.sell < 0.0 {
        return Err(Error::domain(format!(
            "real-time amounts must be non-negative (buy {}, sell {})",
            t.buy, t.sell
        )));
    }
    Ok(pr.alpha * t.commitment + pr.alpha_buy * t.buy - pr.alpha_sell * t.sell)
}

/// Network layout: `K` pairs of co-located base stations over `N` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    n_slots: usize,
    params: Vec<[BsParams; 2]>,
}

impl NetworkConfig {
    pub fn new(n_slots: usize, params: Vec<[BsParams; 2]>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::config("at least one base-station pair is required"));
        }
        if n_slots == 0 {
            return Err(Error::config("at least one slot is required"));
        }
        for pair in &params {
            pair[0].validate()?;
            pair[1].validate()?;
        }
        Ok(NetworkConfig { n_slots, params })
    }

    /// `k_pairs` identical pairs of LTE macro cells.
    pub fn uniform(k_pairs: usize, n_slots: usize, params: BsParams) -> Result<Self> {
        Self::new(n_slots, vec![[params, params]; k_pairs])
    }

    pub fn k_pairs(&self) -> usize {
        self.params.len()
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    pub fn params(&self) -> &[[BsParams; 2]] {
        &self.params
    }

    pub fn bs(&self, k: usize, mno: Mno) -> &BsParams {
        &self.params[k][mno.index()]
    }
}
