//! Traffic offloading between co-located base stations.
//!
//! Within a pair, only the net offload `y = x1 - x2` matters: BS 1 serves
//! `D1 - y` and BS 2 serves `D2 + y`. Total power as a function of `y` is
//! linear while both stations are active, jumps down where one of them goes
//! to sleep, and is bounded by the capacity limits. The optimum is therefore
//! one of a handful of breakpoints, which [`optimal_pair_share`] enumerates.

use crate::error::{Error, Result};
use crate::model::{BsParams, Mno, NetworkConfig};

/// Two candidate energies closer than this are treated as a tie.
const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDecision {
    /// Traffic offloaded from BS 1 to BS 2, Mbps.
    pub x1: f64,
    /// Traffic offloaded from BS 2 to BS 1, Mbps.
    pub x2: f64,
    pub served1: f64,
    pub served2: f64,
    /// Combined power of both stations, W.
    pub energy: f64,
    pub sleep1: bool,
    pub sleep2: bool,
}

impl PairDecision {
    fn from_net_offload(d1: f64, d2: f64, p1: &BsParams, p2: &BsParams, y: f64) -> Self {
        let (x1, x2) = if y >= 0.0 { (y, 0.0) } else { (0.0, -y) };
        // Sleeping stations serve exactly nothing; the partner absorbs the total.
        let (served1, served2) = if y == d1 {
            (0.0, d1 + d2)
        } else if y == -d2 {
            (d1 + d2, 0.0)
        } else {
            // Fill candidates can land one ulp past capacity.
            ((d1 - y).min(p1.d_max), (d2 + y).min(p2.d_max))
        };
        let energy = p1.power_unchecked(served1) + p2.power_unchecked(served2);
        PairDecision {
            x1,
            x2,
            served1,
            served2,
            energy,
            sleep1: served1 == 0.0,
            sleep2: served2 == 0.0,
        }
    }

    pub fn served(&self, mno: Mno) -> f64 {
        match mno {
            Mno::One => self.served1,
            Mno::Two => self.served2,
        }
    }
}

fn check_inputs(d1: f64, d2: f64, p1: &BsParams, p2: &BsParams) -> Result<()> {
    for (i, (d, p)) in [(d1, p1), (d2, p2)].into_iter().enumerate() {
        if !(d > 0.0 && d <= p.d_max) {
            return Err(Error::domain(format!(
                "load of BS {} is {d} Mbps, must lie in (0, {}]",
                i + 1,
                p.d_max
            )));
        }
    }
    Ok(())
}

/// Feasible range of the net offload `y`.
fn offload_range(d1: f64, d2: f64, p1: &BsParams, p2: &BsParams) -> (f64, f64) {
    let lo = (d1 - p1.d_max).max(-d2);
    let hi = (p2.d_max - d2).min(d1);
    (lo, hi)
}

/// Energy-minimising offload for one pair of base stations.
///
/// Candidates, in tie-break priority order: BS 1 asleep, BS 2 asleep, no
/// sharing, BS 1 filled to capacity, BS 2 filled to capacity. A later
/// candidate replaces the incumbent only if it is strictly cheaper; filled
/// candidates are ranked by how much traffic they move.
pub fn optimal_pair_share(d1: f64, d2: f64, p1: &BsParams, p2: &BsParams) -> Result<PairDecision> {
    check_inputs(d1, d2, p1, p2)?;
    let total = d1 + d2;

    let mut sleeping = Vec::with_capacity(2);
    if total <= p2.d_max {
        sleeping.push(d1);
    }
    if total <= p1.d_max {
        sleeping.push(-d2);
    }

    let (lo, hi) = offload_range(d1, d2, p1, p2);
    let mut active = vec![0.0];
    // BS 1 full: y = d1 - d_max1 (moves traffic 2 -> 1); BS 2 full: y = d_max2 - d2.
    let fill1 = d1 - p1.d_max;
    if fill1 >= lo && fill1 < 0.0 && fill1 > -d2 {
        active.push(fill1);
    }
    let fill2 = p2.d_max - d2;
    if fill2 <= hi && fill2 > 0.0 && fill2 < d1 {
        active.push(fill2);
    }
    active.sort_by(|a: &f64, b: &f64| a.abs().total_cmp(&b.abs()));

    let mut best: Option<PairDecision> = None;
    for y in sleeping.into_iter().chain(active) {
        let cand = PairDecision::from_net_offload(d1, d2, p1, p2, y);
        match &best {
            Some(b) if cand.energy >= b.energy - TIE_TOLERANCE => {}
            _ => best = Some(cand),
        }
    }
    // The no-share candidate is always feasible.
    Ok(best.expect("no-share candidate present"))
}

/// Exhaustive search over the net offload on a grid of width `step`, plus
/// the breakpoints of the power function. Used to cross-check
/// [`optimal_pair_share`].
pub fn pair_share_oracle(
    d1: f64,
    d2: f64,
    p1: &BsParams,
    p2: &BsParams,
    step: f64,
) -> Result<PairDecision> {
    check_inputs(d1, d2, p1, p2)?;
    if step.is_nan() || step <= 0.0 {
        return Err(Error::domain(format!(
            "grid step must be positive, got {step}"
        )));
    }
    let (lo, hi) = offload_range(d1, d2, p1, p2);
    let mut points: Vec<f64> = Vec::new();
    let count = ((hi - lo) / step).floor() as usize;
    points.extend((0..=count).map(|j| lo + j as f64 * step));
    points.push(hi);
    for y in [0.0, d1, -d2, d1 - p1.d_max, p2.d_max - d2] {
        if y >= lo && y <= hi {
            points.push(y);
        }
    }
    let energy = |y: f64| {
        let s1 = d1 - y;
        let s2 = d2 + y;
        let e1 = if s1.abs() <= 1e-12 {
            p1.c
        } else {
            p1.a * s1 + p1.b
        };
        let e2 = if s2.abs() <= 1e-12 {
            p2.c
        } else {
            p2.a * s2 + p2.b
        };
        e1 + e2
    };
    let best = points
        .into_iter()
        .filter(|y| d1 - y <= p1.d_max + 1e-9 && d2 + y <= p2.d_max + 1e-9)
        .min_by(|a, b| energy(*a).total_cmp(&energy(*b)))
        .expect("range endpoints are feasible");
    let (x1, x2) = if best >= 0.0 {
        (best, 0.0)
    } else {
        (0.0, -best)
    };
    let (s1, s2) = (d1 - best, d2 + best);
    Ok(PairDecision {
        x1,
        x2,
        served1: s1.max(0.0),
        served2: s2.max(0.0),
        energy: energy(best),
        sleep1: s1.abs() <= 1e-12,
        sleep2: s2.abs() <= 1e-12,
    })
}

/// Total post-sharing demand of both operators in one slot and the per-pair
/// decisions behind it. `loads[k]` holds the realised loads of pair `k`.
pub fn shared_demand(loads: &[[f64; 2]], net: &NetworkConfig) -> Result<(f64, Vec<PairDecision>)> {
    if loads.len() != net.k_pairs() {
        return Err(Error::config(format!(
            "slot has {} pairs, network has {}",
            loads.len(),
            net.k_pairs()
        )));
    }
    let decisions = loads
        .iter()
        .zip(net.params())
        .map(|(d, p)| optimal_pair_share(d[0], d[1], &p[0], &p[1]))
        .collect::<Result<Vec<_>>>()?;
    let zeta = decisions.iter().map(|d| d.energy).sum();
    Ok((zeta, decisions))
}

/// Pair energy with no offloading at all.
pub(crate) fn no_share_energy(loads: &[[f64; 2]], net: &NetworkConfig) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (d, p) in loads.iter().zip(net.params()) {
        for i in 0..2 {
            out[i] += p[i].power_unchecked(d[i]);
        }
    }
    out
}
