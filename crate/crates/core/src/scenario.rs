//! Price and traffic inputs, and seeded sampling of realised scenarios.

use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Mno, NetworkConfig, SlotPrices};
use crate::rng;

/// Day-ahead prices and real-time price forecasts for every slot.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceCurve {
    alpha: Vec<f64>,
    alpha_buy_pred: Vec<f64>,
    alpha_sell_pred: Vec<f64>,
    /// Half-width of the uniform relative error on the buy price.
    pub buy_err_frac: f64,
    /// Half-width of the uniform relative error on the sell price.
    pub sell_err_frac: f64,
}

pub const DEFAULT_PRICE_ERR_FRAC: f64 = 0.1;
pub const DEFAULT_TRAFFIC_ERR_FRAC: f64 = 0.4;

impl PriceCurve {
    pub fn new(
        alpha: Vec<f64>,
        alpha_buy_pred: Vec<f64>,
        alpha_sell_pred: Vec<f64>,
        buy_err_frac: f64,
        sell_err_frac: f64,
    ) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::config("price curve has no slots"));
        }
        if alpha.len() != alpha_buy_pred.len() || alpha.len() != alpha_sell_pred.len() {
            return Err(Error::config("price columns differ in length"));
        }
        for (name, f) in [("buy", buy_err_frac), ("sell", sell_err_frac)] {
            if !(0.0..1.0).contains(&f) {
                return Err(Error::config(format!(
                    "{name} price error fraction {f} outside [0, 1)"
                )));
            }
        }
        for n in 0..alpha.len() {
            let (a, b, s) = (alpha[n], alpha_buy_pred[n], alpha_sell_pred[n]);
            if !(s >= 0.0 && s < a && a < b) || !b.is_finite() {
                return Err(Error::PriceOrdering { slot: n });
            }
        }
        Ok(PriceCurve {
            alpha,
            alpha_buy_pred,
            alpha_sell_pred,
            buy_err_frac,
            sell_err_frac,
        })
    }

    /// A winter-day shape in currency per kWh: cheap overnight, a small
    /// morning shoulder and a broad late-afternoon to evening peak. Real-time
    /// buy forecasts sit 30% above the day-ahead price and sell forecasts 40%
    /// below.
    pub fn builtin(n_slots: usize) -> Result<Self> {
        if n_slots == 0 {
            return Err(Error::config("price curve has no slots"));
        }
        let dt = 24.0 / n_slots as f64;
        let alpha: Vec<f64> = (0..n_slots)
            .map(|n| {
                let h = (n as f64 + 0.5) * dt;
                let bump = |centre: f64, width: f64| (-((h - centre) / width).powi(2)).exp();
                0.020 + 0.006 * bump(8.0, 2.0) + 0.050 * bump(17.5, 3.5)
            })
            .collect();
        let buy = alpha.iter().map(|a| 1.3 * a).collect();
        let sell = alpha.iter().map(|a| 0.6 * a).collect();
        Self::new(
            alpha,
            buy,
            sell,
            DEFAULT_PRICE_ERR_FRAC,
            DEFAULT_PRICE_ERR_FRAC,
        )
    }

    pub fn n_slots(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn alpha_buy_pred(&self) -> &[f64] {
        &self.alpha_buy_pred
    }

    pub fn alpha_sell_pred(&self) -> &[f64] {
        &self.alpha_sell_pred
    }

    /// Forecast prices for slot `n`; expected real-time cost depends only on these.
    pub fn predicted(&self, n: usize) -> SlotPrices {
        SlotPrices::new(
            self.alpha[n],
            self.alpha_buy_pred[n],
            self.alpha_sell_pred[n],
        )
    }

    pub fn with_error_fracs(mut self, buy: f64, sell: f64) -> Result<Self> {
        let alpha = std::mem::take(&mut self.alpha);
        let b = std::mem::take(&mut self.alpha_buy_pred);
        let s = std::mem::take(&mut self.alpha_sell_pred);
        Self::new(alpha, b, s, buy, sell)
    }
}

/// Predicted traffic: a shared diurnal profile scaled per base station.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficModel {
    theta: Vec<f64>,
    chi: Vec<[f64; 2]>,
    /// Half-width of the uniform traffic error relative to the predicted mean.
    pub err_frac: f64,
}

impl TrafficModel {
    pub fn new(theta: Vec<f64>, chi: Vec<[f64; 2]>, err_frac: f64) -> Result<Self> {
        if theta.is_empty() || chi.is_empty() {
            return Err(Error::config(
                "traffic model needs at least one slot and one pair",
            ));
        }
        if let Some((n, t)) = theta
            .iter()
            .enumerate()
            .find(|(_, t)| !(**t > 0.0 && **t <= 1.0))
        {
            return Err(Error::config(format!("theta[{n}] = {t} outside (0, 1]")));
        }
        if chi.iter().flatten().any(|c| !(*c >= 0.0 && c.is_finite())) {
            return Err(Error::config(
                "traffic amplitudes must be finite and non-negative",
            ));
        }
        if !(0.0..1.0).contains(&err_frac) {
            return Err(Error::config(format!(
                "traffic error fraction {err_frac} outside [0, 1)"
            )));
        }
        Ok(TrafficModel {
            theta,
            chi,
            err_frac,
        })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn chi(&self) -> &[[f64; 2]] {
        &self.chi
    }

    pub fn n_slots(&self) -> usize {
        self.theta.len()
    }

    pub fn k_pairs(&self) -> usize {
        self.chi.len()
    }

    /// Predicted mean load of BS `k` of `mno` in slot `n`.
    pub fn mean(&self, k: usize, mno: Mno, n: usize) -> f64 {
        self.chi[k][mno.index()] * self.theta[n]
    }

    pub fn with_err_frac(mut self, err_frac: f64) -> Result<Self> {
        let theta = std::mem::take(&mut self.theta);
        let chi = std::mem::take(&mut self.chi);
        Self::new(theta, chi, err_frac)
    }

    pub fn with_theta(mut self, theta: Vec<f64>) -> Result<Self> {
        let chi = std::mem::take(&mut self.chi);
        Self::new(theta, chi, self.err_frac)
    }

    /// Checks dimensions and that every predicted mean fits its base station.
    pub fn check_against(&self, net: &NetworkConfig) -> Result<()> {
        if self.k_pairs() != net.k_pairs() {
            return Err(Error::config(format!(
                "traffic model has {} pairs, network has {}",
                self.k_pairs(),
                net.k_pairs()
            )));
        }
        if self.n_slots() != net.n_slots() {
            return Err(Error::config(format!(
                "traffic model has {} slots, network has {}",
                self.n_slots(),
                net.n_slots()
            )));
        }
        let peak = self.theta.iter().cloned().fold(0.0, f64::max);
        for k in 0..self.k_pairs() {
            for mno in Mno::BOTH {
                let d_max = net.bs(k, mno).d_max;
                if self.chi[k][mno.index()] * peak > d_max {
                    return Err(Error::config(format!(
                        "predicted load of pair {k} operator {} exceeds d_max {d_max}",
                        mno.label()
                    )));
                }
            }
        }
        Ok(())
    }

    /// No-sharing demand forecast of one operator: sum over its base stations
    /// of `a * mean + b`.
    pub fn predicted_demand(&self, net: &NetworkConfig, mno: Mno, n: usize) -> f64 {
        (0..self.k_pairs())
            .map(|k| {
                let p = net.bs(k, mno);
                p.a * self.mean(k, mno, n) + p.b
            })
            .sum()
    }
}

/// Number of realised values that were pulled back into range.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClampCounts {
    /// Buy price raised to the day-ahead price.
    pub price_buy: u64,
    /// Sell price lowered to the day-ahead price.
    pub price_sell: u64,
    /// Traffic capped at `d_max`.
    pub traffic_high: u64,
    /// Traffic raised to zero.
    pub traffic_low: u64,
}

impl ClampCounts {
    pub fn total(&self) -> u64 {
        self.price_buy + self.price_sell + self.traffic_high + self.traffic_low
    }
}

impl std::ops::AddAssign for ClampCounts {
    fn add_assign(&mut self, o: Self) {
        self.price_buy += o.price_buy;
        self.price_sell += o.price_sell;
        self.traffic_high += o.traffic_high;
        self.traffic_low += o.traffic_low;
    }
}

/// One realised day.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub prices: Vec<SlotPrices>,
    /// `traffic[n][k]` holds the realised loads of pair `k` in slot `n`.
    pub traffic: Vec<Vec<[f64; 2]>>,
    pub clamps: ClampCounts,
}

impl Scenario {
    pub fn n_slots(&self) -> usize {
        self.prices.len()
    }

    pub fn load(&self, k: usize, mno: Mno, n: usize) -> f64 {
        self.traffic[n][k][mno.index()]
    }
}

/// Draws one realised load around `mean`, clamped to `[0, d_max]`.
pub(crate) fn draw_load<R: Rng + ?Sized>(
    rng: &mut R,
    mean: f64,
    err_frac: f64,
    d_max: f64,
    clamps: &mut ClampCounts,
) -> f64 {
    let raw = mean + rng::symmetric(rng, err_frac * mean);
    if raw > d_max {
        clamps.traffic_high += 1;
        d_max
    } else if raw < 0.0 {
        clamps.traffic_low += 1;
        0.0
    } else {
        raw
    }
}

/// Draws the loads of every pair in slot `n` from a single stream, pair by pair.
pub(crate) fn draw_slot_loads<R: Rng + ?Sized>(
    rng: &mut R,
    model: &TrafficModel,
    net: &NetworkConfig,
    n: usize,
    clamps: &mut ClampCounts,
) -> Vec<[f64; 2]> {
    (0..net.k_pairs())
        .map(|k| {
            Mno::BOTH.map(|mno| {
                draw_load(
                    rng,
                    model.mean(k, mno, n),
                    model.err_frac,
                    net.bs(k, mno).d_max,
                    clamps,
                )
            })
        })
        .collect()
}

/// Samples realised prices and loads for one day.
///
/// Buy and sell prices get independent uniform relative errors and are then
/// clamped so that `alpha_sell <= alpha <= alpha_buy`. Loads are clamped to
/// `[0, d_max]`. Each slot's prices and each (slot, pair) load draw come from
/// their own stream, so the result depends on `seed` alone.
pub fn sample_scenario(
    curve: &PriceCurve,
    model: &TrafficModel,
    net: &NetworkConfig,
    seed: u64,
) -> Result<Scenario> {
    model.check_against(net)?;
    if curve.n_slots() != net.n_slots() {
        return Err(Error::config(format!(
            "price curve has {} slots, network has {}",
            curve.n_slots(),
            net.n_slots()
        )));
    }
    let mut clamps = ClampCounts::default();
    let mut prices = Vec::with_capacity(net.n_slots());
    let mut traffic = Vec::with_capacity(net.n_slots());
    for n in 0..net.n_slots() {
        let mut prng = rng::stream(seed, &[rng::PRICE, n as u64]);
        let alpha = curve.alpha[n];
        let mut buy =
            curve.alpha_buy_pred[n] * (1.0 + rng::symmetric(&mut prng, curve.buy_err_frac));
        let mut sell =
            curve.alpha_sell_pred[n] * (1.0 + rng::symmetric(&mut prng, curve.sell_err_frac));
        if buy < alpha {
            buy = alpha;
            clamps.price_buy += 1;
        }
        if sell > alpha {
            sell = alpha;
            clamps.price_sell += 1;
        }
        prices.push(SlotPrices::new(alpha, buy, sell));

        let loads = (0..net.k_pairs())
            .map(|k| {
                let mut trng = rng::stream(seed, &[rng::TRAFFIC, n as u64, k as u64]);
                Mno::BOTH.map(|mno| {
                    draw_load(
                        &mut trng,
                        model.mean(k, mno, n),
                        model.err_frac,
                        net.bs(k, mno).d_max,
                        &mut clamps,
                    )
                })
            })
            .collect();
        traffic.push(loads);
    }
    Ok(Scenario {
        prices,
        traffic,
        clamps,
    })
}

/// How traffic amplitudes are drawn for a synthetic network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrafficPattern {
    /// Both operators: amplitude uniform on `[0.1, 0.9] * d_max`.
    Symmetric,
    /// Operator 1 as symmetric, operator 2 uniform on `[0.05, 0.45] * d_max`.
    Asymmetric,
}

/// Built-in normalised diurnal load: a low night around 05:00 rising to a
/// broad afternoon peak around 17:00.
pub fn diurnal_profile(n_slots: usize) -> Vec<f64> {
    let dt = 24.0 / n_slots as f64;
    (0..n_slots)
        .map(|n| {
            let h = n as f64 * dt;
            let t = 0.3 + 0.25 * (1.0 - (2.0 * PI * (h - 5.0) / 24.0).cos());
            t.clamp(f64::MIN_POSITIVE, 1.0)
        })
        .collect()
}

/// Synthetic traffic model with random per-BS amplitudes and the built-in profile.
pub fn synth_traffic_model(
    pattern: TrafficPattern,
    k_pairs: usize,
    n_slots: usize,
    d_max: f64,
    seed: u64,
) -> Result<TrafficModel> {
    if k_pairs == 0 {
        return Err(Error::config("at least one base-station pair is required"));
    }
    if n_slots == 0 {
        return Err(Error::config("at least one slot is required"));
    }
    let (lo2, hi2) = match pattern {
        TrafficPattern::Symmetric => (0.1, 0.9),
        TrafficPattern::Asymmetric => (0.05, 0.45),
    };
    let chi = (0..k_pairs)
        .map(|k| {
            let mut r = rng::stream(seed, &[rng::SYNTH, k as u64]);
            let c1 = d_max * r.gen_range(0.1..=0.9);
            let c2 = d_max * r.gen_range(lo2..=hi2);
            [c1, c2]
        })
        .collect();
    TrafficModel::new(diurnal_profile(n_slots), chi, DEFAULT_TRAFFIC_ERR_FRAC)
}

fn open_csv(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })
}

fn check_header(
    rdr: &mut csv::Reader<std::fs::File>,
    path: &Path,
    expected: &[&str],
) -> Result<()> {
    let headers = rdr.headers().map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::Ingest {
            path: path.to_path_buf(),
            message: format!("expected header `{}`", expected.join(",")),
        });
    }
    Ok(())
}

/// Reads numeric rows whose first column is the 0-based slot index.
fn read_rows(path: &Path, expected: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = open_csv(path)?;
    check_header(&mut rdr, path, expected)?;
    let ingest = |message: String| Error::Ingest {
        path: path.to_path_buf(),
        message,
    };
    let mut rows = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let slot: usize = rec[0]
            .parse()
            .map_err(|_| ingest(format!("row {row}: bad slot index `{}`", &rec[0])))?;
        if slot != row {
            return Err(ingest(format!(
                "row {row}: expected slot {row}, found {slot}"
            )));
        }
        let vals = rec
            .iter()
            .enumerate()
            .skip(1)
            .map(|(col, field)| {
                field.parse::<f64>().map_err(|_| {
                    ingest(format!(
                        "slot {slot}: bad `{}` value `{field}`",
                        expected[col]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(ingest("no data rows".into()));
    }
    Ok(rows)
}

/// Loads `slot,alpha,alpha_buy_pred,alpha_sell_pred` rows with default error
/// fractions.
pub fn load_price_curve(path: impl AsRef<Path>) -> Result<PriceCurve> {
    let rows = read_rows(
        path.as_ref(),
        &["slot", "alpha", "alpha_buy_pred", "alpha_sell_pred"],
    )?;
    let col = |c: usize| rows.iter().map(|r| r[c]).collect::<Vec<_>>();
    PriceCurve::new(
        col(0),
        col(1),
        col(2),
        DEFAULT_PRICE_ERR_FRAC,
        DEFAULT_PRICE_ERR_FRAC,
    )
}

/// Loads a `slot,theta` diurnal profile.
pub fn load_theta_profile(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let theta: Vec<f64> = read_rows(path, &["slot", "theta"])?
        .into_iter()
        .map(|r| r[0])
        .collect();
    if let Some((n, t)) = theta
        .iter()
        .enumerate()
        .find(|(_, t)| !(**t > 0.0 && **t <= 1.0))
    {
        return Err(Error::Ingest {
            path: path.to_path_buf(),
            message: format!("slot {n}: theta {t} outside (0, 1]"),
        });
    }
    Ok(theta)
}
