//! Seeded experiment harness: runs the three schemes over many realised
//! days on common random numbers and writes CSV reports.
//!
//! Seeds are derived per purpose from the master seed (traffic amplitudes,
//! day-ahead sampling, bargaining estimates, each realisation), so every
//! scheme sees the same realised days and results do not depend on the
//! number of worker threads.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::bargaining::{
    dayahead_bargain, expected_upsilons, realtime_bargain, BargainSlotOutcome, DayAheadAgreement,
    UpsilonEstimate,
};
use crate::commitment::{plan_group, plan_noncoop, CommitmentPlan, McConfig};
use crate::error::{Error, Result};
use crate::model::{BsParams, Mno, NetworkConfig, TradeDecision};
use crate::rng;
use crate::scenario::{
    load_price_curve, load_theta_profile, sample_scenario, synth_traffic_model, ClampCounts,
    PriceCurve, TrafficModel, TrafficPattern,
};
use crate::sharing::{no_share_energy, shared_demand};
use crate::trading::{group_trade, individual_trade};

pub const DEFAULT_SLOTS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    NonCoop,
    FullCoop,
    Bargain,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::NonCoop, Scheme::FullCoop, Scheme::Bargain];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::NonCoop => "noncoop",
            Scheme::FullCoop => "fullcoop",
            Scheme::Bargain => "bargain",
        }
    }

    /// Parses `noncoop`, `fullcoop`, `bargain`, `all`, or a comma-separated list.
    pub fn parse_list(s: &str) -> Result<Vec<Scheme>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "all" => out.extend(Scheme::ALL),
                "noncoop" => out.push(Scheme::NonCoop),
                "fullcoop" => out.push(Scheme::FullCoop),
                "bargain" => out.push(Scheme::Bargain),
                other => return Err(Error::config(format!("unknown scheme `{other}`"))),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrafficKind {
    Symmetric,
    Asymmetric,
    /// Diurnal profile from a `slot,theta` CSV, symmetric amplitudes.
    File(PathBuf),
}

impl FromStr for TrafficKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "symmetric" => Ok(TrafficKind::Symmetric),
            "asymmetric" => Ok(TrafficKind::Asymmetric),
            other => match other.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(TrafficKind::File(PathBuf::from(p))),
                _ => Err(Error::config(format!(
                    "traffic must be symmetric, asymmetric or file:<path>, got `{other}`"
                ))),
            },
        }
    }
}

impl std::fmt::Display for TrafficKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrafficKind::Symmetric => f.write_str("symmetric"),
            TrafficKind::Asymmetric => f.write_str("asymmetric"),
            TrafficKind::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub k_pairs: usize,
    /// `None`: taken from the price file, else 48.
    pub n_slots: Option<usize>,
    pub m_samples: usize,
    pub realizations: usize,
    pub seed: u64,
    pub traffic: TrafficKind,
    pub prices: Option<PathBuf>,
    pub out: PathBuf,
    /// Schemes to run besides the non-cooperative baseline, which always runs.
    pub schemes: Vec<Scheme>,
    pub bs: BsParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k_pairs: 50,
            n_slots: None,
            m_samples: 500,
            realizations: 50,
            seed: 1,
            traffic: TrafficKind::Symmetric,
            prices: None,
            out: PathBuf::from("out"),
            schemes: Scheme::ALL.to_vec(),
            bs: BsParams::lte_macro(),
        }
    }
}

fn parse_count(key: &str, value: &str) -> Result<usize> {
    let v: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("{key}: expected a count, got `{value}`")))?;
    if v == 0 {
        return Err(Error::config(format!("{key} must be at least 1")));
    }
    Ok(v)
}

impl ExperimentConfig {
    /// Applies one `key=value` setting. Keys mirror the command-line flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::config(format!("seed: expected u64, got `{value}`")))?
            }
            "bs-pairs" => self.k_pairs = parse_count("bs-pairs", value)?,
            "slots" => self.n_slots = Some(parse_count("slots", value)?),
            "mc-samples" => self.m_samples = parse_count("mc-samples", value)?,
            "realizations" => self.realizations = parse_count("realizations", value)?,
            "traffic" => self.traffic = value.parse()?,
            "prices" => self.prices = Some(PathBuf::from(value)),
            "scheme" => self.schemes = Scheme::parse_list(value)?,
            "out" => self.out = PathBuf::from(value),
            other => return Err(Error::config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parses a flat `key=value` file; `#` starts a comment.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_kv_str(text)?;
        Ok(cfg)
    }

    pub fn apply_kv_str(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key=value", lineno + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn from_kv_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_kv_str(&text).map_err(|e| Error::Ingest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn runs(&self, scheme: Scheme) -> bool {
        scheme == Scheme::NonCoop || self.schemes.contains(&scheme)
    }
}

/// Everything fixed before the operating day: inputs and day-ahead decisions.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub net: NetworkConfig,
    pub model: TrafficModel,
    pub curve: PriceCurve,
    pub noncoop: [CommitmentPlan; 2],
    pub group: Option<CommitmentPlan>,
    pub upsilons: Option<UpsilonEstimate>,
    pub agreement: Option<DayAheadAgreement>,
}

/// Outcome of one realised day for every scheme that ran.
#[derive(Debug, Clone)]
pub struct RealizationOutcome {
    pub noncoop: Vec<[TradeDecision; 2]>,
    pub fullcoop: Option<Vec<TradeDecision>>,
    /// Group cost at the summed non-cooperative commitments, per slot.
    pub matched_group: Vec<f64>,
    /// Per-slot settlement; `None` if bargaining did not run or ended in
    /// disagreement.
    pub bargain: Option<Vec<BargainSlotOutcome>>,
    pub clamps: ClampCounts,
}

impl RealizationOutcome {
    pub fn noncoop_total(&self) -> f64 {
        self.noncoop.iter().map(|t| t[0].cost + t[1].cost).sum()
    }

    pub fn matched_group_total(&self) -> f64 {
        self.matched_group.iter().sum()
    }

    pub fn trades(&self) -> impl Iterator<Item = &TradeDecision> {
        self.noncoop
            .iter()
            .flatten()
            .chain(self.fullcoop.iter().flatten())
            .chain(self.bargain.iter().flatten().map(|b| &b.trade))
    }
}

impl Experiment {
    /// Loads inputs and solves the day-ahead problems.
    pub fn prepare(config: &ExperimentConfig) -> Result<Self> {
        if config.k_pairs == 0 || config.m_samples == 0 || config.realizations == 0 {
            return Err(Error::config("all counts must be at least 1"));
        }
        let curve = match &config.prices {
            Some(p) => load_price_curve(p)?,
            None => PriceCurve::builtin(config.n_slots.unwrap_or(DEFAULT_SLOTS))?,
        };
        let n_slots = curve.n_slots();
        if let Some(n) = config.n_slots {
            if n != n_slots {
                return Err(Error::config(format!(
                    "slots = {n} but the price file has {n_slots} rows"
                )));
            }
        }
        let net = NetworkConfig::uniform(config.k_pairs, n_slots, config.bs)?;
        let synth_seed = rng::derive(config.seed, &[rng::SYNTH]);
        let d_max = config.bs.d_max;
        let model = match &config.traffic {
            TrafficKind::Symmetric => synth_traffic_model(
                TrafficPattern::Symmetric,
                config.k_pairs,
                n_slots,
                d_max,
                synth_seed,
            )?,
            TrafficKind::Asymmetric => synth_traffic_model(
                TrafficPattern::Asymmetric,
                config.k_pairs,
                n_slots,
                d_max,
                synth_seed,
            )?,
            TrafficKind::File(path) => {
                let theta = load_theta_profile(path)?;
                if theta.len() != n_slots {
                    return Err(Error::Ingest {
                        path: path.clone(),
                        message: format!("{} slots, expected {n_slots}", theta.len()),
                    });
                }
                synth_traffic_model(
                    TrafficPattern::Symmetric,
                    config.k_pairs,
                    n_slots,
                    d_max,
                    synth_seed,
                )?
                .with_theta(theta)?
            }
        };
        debug_assert_eq!(model.theta().len(), n_slots);
        model.check_against(&net)?;

        let mc = McConfig {
            m_samples: config.m_samples,
            ..McConfig::default()
        };
        let plan_seed = rng::derive(config.seed, &[rng::PLAN]);
        let noncoop = [
            plan_noncoop(Mno::One, &model, &net, &curve, &mc, plan_seed)?,
            plan_noncoop(Mno::Two, &model, &net, &curve, &mc, plan_seed)?,
        ];
        let needs_group = config.runs(Scheme::FullCoop) || config.runs(Scheme::Bargain);
        let group = if needs_group {
            Some(plan_group(&model, &net, &curve, &mc, plan_seed)?)
        } else {
            None
        };

        let (upsilons, agreement) = match (&group, config.runs(Scheme::Bargain)) {
            (Some(g), true) => {
                let est = expected_upsilons(
                    &model,
                    &net,
                    &curve,
                    [&noncoop[0], &noncoop[1]],
                    g,
                    config.realizations,
                    rng::derive(config.seed, &[rng::ESTIMATE]),
                )?;
                let agreement = dayahead_bargain(g, est.upsilon, &model, &net, &curve)?;
                (Some(est), Some(agreement))
            }
            _ => (None, None),
        };

        Ok(Experiment {
            config: config.clone(),
            net,
            model,
            curve,
            noncoop,
            group,
            upsilons,
            agreement,
        })
    }

    pub fn realization_seed(&self, r: usize) -> u64 {
        rng::derive(self.config.seed, &[rng::REALIZATION, r as u64])
    }

    /// Plays realised day `r` under every configured scheme.
    pub fn realization(&self, r: usize) -> Result<RealizationOutcome> {
        let s = sample_scenario(
            &self.curve,
            &self.model,
            &self.net,
            self.realization_seed(r),
        )?;
        let n_slots = self.net.n_slots();
        let mut noncoop = Vec::with_capacity(n_slots);
        let mut matched_group = Vec::with_capacity(n_slots);
        let mut fullcoop = self
            .config
            .runs(Scheme::FullCoop)
            .then(|| Vec::with_capacity(n_slots));
        let split = match &self.agreement {
            Some(DayAheadAgreement::Agreement(day)) => Some(day),
            _ => None,
        };
        let mut bargain = split.map(|_| Vec::with_capacity(n_slots));

        for n in 0..n_slots {
            let prices = &s.prices[n];
            let loads = &s.traffic[n];
            let own = no_share_energy(loads, &self.net);
            let t1 = individual_trade(self.noncoop[0].g[n], own[0], prices)?;
            let t2 = individual_trade(self.noncoop[1].g[n], own[1], prices)?;
            noncoop.push([t1, t2]);

            let (zeta, _) = shared_demand(loads, &self.net)?;
            let matched = self.noncoop[0].g[n] + self.noncoop[1].g[n];
            matched_group.push(group_trade(matched, zeta, prices)?.cost);

            if let (Some(out), Some(g)) = (fullcoop.as_mut(), &self.group) {
                out.push(group_trade(g.g[n], zeta, prices)?);
            }
            if let (Some(out), Some(day)) = (bargain.as_mut(), split) {
                out.push(realtime_bargain(
                    day.g1[n], day.g2[n], prices, loads, &self.net,
                )?);
            }
        }
        Ok(RealizationOutcome {
            noncoop,
            fullcoop,
            matched_group,
            bargain,
            clamps: s.clamps,
        })
    }

    /// Plays every realised day; results come back in realisation order.
    pub fn realizations(&self) -> Result<Vec<RealizationOutcome>> {
        (0..self.config.realizations)
            .into_par_iter()
            .map(|r| self.realization(r))
            .collect()
    }

    /// Converts `price * W` in a slot into currency when prices are per kWh.
    pub fn currency_scale(&self) -> f64 {
        24.0 / self.net.n_slots() as f64 / 1000.0
    }
}

/// Average per-slot costs of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeCosts {
    pub scheme: Scheme,
    /// Per-operator costs per slot; absent for full cooperation, which only
    /// has a joint bill.
    pub per_mno: Option<Vec<[f64; 2]>>,
    pub total: Vec<f64>,
}

impl SchemeCosts {
    pub fn daily(&self, mno: Mno) -> Option<f64> {
        self.per_mno
            .as_ref()
            .map(|v| v.iter().map(|c| c[mno.index()]).sum())
    }

    pub fn daily_total(&self) -> f64 {
        self.total.iter().sum()
    }
}

/// Summary of a run, costs in currency.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub config: ExperimentConfig,
    pub n_slots: usize,
    pub currency_scale: f64,
    pub schemes: Vec<SchemeCosts>,
    /// Average net payment from operator 1 to 2 per slot (bargaining).
    pub payment_net: Option<Vec<f64>>,
    pub clamps: ClampCounts,
    pub upsilons: Option<UpsilonEstimate>,
    pub agreement: Option<DayAheadAgreement>,
    /// Trades with both a purchase and a sale.
    pub complementarity_violations: usize,
    /// Realisations where group buying at the summed non-cooperative
    /// commitments cost more than trading separately.
    pub dominance_violations: usize,
    /// Slots where a bargaining participant saved less than nothing.
    pub negative_payoff_slots: usize,
}

impl CostReport {
    pub fn scheme(&self, scheme: Scheme) -> Option<&SchemeCosts> {
        self.schemes.iter().find(|s| s.scheme == scheme)
    }

    /// Relative saving of `scheme` over the non-cooperative baseline, in
    /// percent; `mno = None` for the joint total.
    pub fn reduction_pct(&self, scheme: Scheme, mno: Option<Mno>) -> Option<f64> {
        let base = self.scheme(Scheme::NonCoop)?;
        let s = self.scheme(scheme)?;
        let (b, v) = match mno {
            None => (base.daily_total(), s.daily_total()),
            Some(m) => (base.daily(m)?, s.daily(m)?),
        };
        Some(100.0 * (b - v) / b)
    }
}

/// Aggregates realisation outcomes into a report.
pub fn aggregate(exp: &Experiment, runs: &[RealizationOutcome]) -> CostReport {
    let n_slots = exp.net.n_slots();
    let scale = exp.currency_scale();
    let r = runs.len() as f64;
    let avg = |f: &dyn Fn(&RealizationOutcome, usize) -> f64| -> Vec<f64> {
        (0..n_slots)
            .map(|n| runs.iter().map(|o| f(o, n)).sum::<f64>() * scale / r)
            .collect()
    };
    let pair = |a: Vec<f64>, b: Vec<f64>| {
        a.into_iter()
            .zip(b)
            .map(|(x, y)| [x, y])
            .collect::<Vec<_>>()
    };

    let mut schemes = Vec::new();
    let nc1 = avg(&|o, n| o.noncoop[n][0].cost);
    let nc2 = avg(&|o, n| o.noncoop[n][1].cost);
    let nc_total = avg(&|o, n| o.noncoop[n][0].cost + o.noncoop[n][1].cost);
    schemes.push(SchemeCosts {
        scheme: Scheme::NonCoop,
        per_mno: Some(pair(nc1.clone(), nc2.clone())),
        total: nc_total.clone(),
    });
    if exp.config.runs(Scheme::FullCoop) && exp.group.is_some() {
        schemes.push(SchemeCosts {
            scheme: Scheme::FullCoop,
            per_mno: None,
            total: avg(&|o, n| o.fullcoop.as_ref().map_or(0.0, |t| t[n].cost)),
        });
    }
    let mut payment_net = None;
    if exp.config.runs(Scheme::Bargain) {
        let agreed = runs.iter().all(|o| o.bargain.is_some());
        if agreed {
            fn b(n: usize, o: &RealizationOutcome) -> &BargainSlotOutcome {
                &o.bargain.as_ref().expect("agreed")[n]
            }
            schemes.push(SchemeCosts {
                scheme: Scheme::Bargain,
                per_mno: Some(pair(avg(&|o, n| b(n, o).cost1), avg(&|o, n| b(n, o).cost2))),
                total: avg(&|o, n| b(n, o).cost1 + b(n, o).cost2),
            });
            payment_net = Some(avg(&|o, n| b(n, o).payment_net));
        } else {
            // Disagreement: both operators fall back to trading alone.
            schemes.push(SchemeCosts {
                scheme: Scheme::Bargain,
                per_mno: Some(pair(nc1, nc2)),
                total: nc_total,
            });
            payment_net = Some(vec![0.0; n_slots]);
        }
    }

    let mut clamps = ClampCounts::default();
    let mut complementarity_violations = 0;
    let mut dominance_violations = 0;
    let mut negative_payoff_slots = 0;
    for o in runs {
        clamps += o.clamps;
        complementarity_violations += o.trades().filter(|t| t.buy * t.sell != 0.0).count();
        let nc = o.noncoop_total();
        if o.matched_group_total() > nc + 1e-9 * nc.abs() {
            dominance_violations += 1;
        }
        for b in o.bargain.iter().flatten() {
            let tol = 1e-9 * b.group_cost().abs().max(1.0);
            if b.payoff(Mno::One) < -tol || b.payoff(Mno::Two) < -tol {
                negative_payoff_slots += 1;
            }
        }
    }

    CostReport {
        config: exp.config.clone(),
        n_slots,
        currency_scale: scale,
        schemes,
        payment_net,
        clamps,
        upsilons: exp.upsilons.map(|u| UpsilonEstimate {
            upsilon: [u.upsilon[0] * scale, u.upsilon[1] * scale],
            noncoop: [u.noncoop[0] * scale, u.noncoop[1] * scale],
            group: u.group * scale,
        }),
        agreement: exp.agreement.clone(),
        complementarity_violations,
        dominance_violations,
        negative_payoff_slots,
    }
}

/// Runs the full experiment.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<CostReport> {
    let exp = Experiment::prepare(cfg)?;
    let runs = exp.realizations()?;
    Ok(aggregate(&exp, &runs))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes `per_slot_costs.csv`, `summary.csv` and `meta.csv` into `dir`.
pub fn emit_report(report: &CostReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let mut per_slot = Vec::new();
    for n in 0..report.n_slots {
        for s in &report.schemes {
            if let Some(per_mno) = &s.per_mno {
                for mno in Mno::BOTH {
                    per_slot.push(vec![
                        n.to_string(),
                        s.scheme.label().into(),
                        mno.label().into(),
                        per_mno[n][mno.index()].to_string(),
                    ]);
                }
            }
            per_slot.push(vec![
                n.to_string(),
                s.scheme.label().into(),
                "total".into(),
                s.total[n].to_string(),
            ]);
        }
    }

    let mut summary = Vec::new();
    for s in &report.schemes {
        let mut push = |mno: Option<Mno>, total: f64| {
            let pct = report.reduction_pct(s.scheme, mno).unwrap_or(0.0);
            summary.push(vec![
                s.scheme.label().into(),
                mno.map_or("total", Mno::label).into(),
                total.to_string(),
                pct.to_string(),
            ]);
        };
        if s.per_mno.is_some() {
            for mno in Mno::BOTH {
                push(Some(mno), s.daily(mno).expect("per-operator costs"));
            }
        }
        push(None, s.daily_total());
    }

    let cfg = &report.config;
    let mut meta: Vec<(String, String)> = vec![
        ("seed".into(), cfg.seed.to_string()),
        ("bs_pairs".into(), cfg.k_pairs.to_string()),
        ("slots".into(), report.n_slots.to_string()),
        ("mc_samples".into(), cfg.m_samples.to_string()),
        ("realizations".into(), cfg.realizations.to_string()),
        ("traffic".into(), cfg.traffic.to_string()),
        (
            "prices".into(),
            cfg.prices
                .as_ref()
                .map_or("builtin".into(), |p| p.display().to_string()),
        ),
        (
            "schemes".into(),
            report
                .schemes
                .iter()
                .map(|s| s.scheme.label())
                .collect::<Vec<_>>()
                .join(";"),
        ),
        (
            "currency_per_price_watt".into(),
            report.currency_scale.to_string(),
        ),
        (
            "clamp_price_buy".into(),
            report.clamps.price_buy.to_string(),
        ),
        (
            "clamp_price_sell".into(),
            report.clamps.price_sell.to_string(),
        ),
        (
            "clamp_traffic_high".into(),
            report.clamps.traffic_high.to_string(),
        ),
        (
            "clamp_traffic_low".into(),
            report.clamps.traffic_low.to_string(),
        ),
        (
            "complementarity_violations".into(),
            report.complementarity_violations.to_string(),
        ),
        (
            "dominance_violations".into(),
            report.dominance_violations.to_string(),
        ),
        (
            "negative_payoff_slots".into(),
            report.negative_payoff_slots.to_string(),
        ),
    ];
    if let Some(u) = &report.upsilons {
        meta.push(("upsilon_1".into(), u.upsilon[0].to_string()));
        meta.push(("upsilon_2".into(), u.upsilon[1].to_string()));
    }
    match &report.agreement {
        Some(DayAheadAgreement::Agreement(day)) => {
            meta.push(("dayahead".into(), "agreement".into()));
            meta.push(("dayahead_share_1".into(), day.share1.to_string()));
            meta.push((
                "dayahead_payoff_1".into(),
                (day.payoff1 * report.currency_scale).to_string(),
            ));
            meta.push((
                "dayahead_payoff_2".into(),
                (day.payoff2 * report.currency_scale).to_string(),
            ));
        }
        Some(DayAheadAgreement::Disagreement { .. }) => {
            meta.push(("dayahead".into(), "disagreement".into()));
        }
        None => {}
    }
    if let Some(p) = &report.payment_net {
        meta.push((
            "payment_net_daily".into(),
            p.iter().sum::<f64>().to_string(),
        ));
    }

    let per_slot_path = dir.join("per_slot_costs.csv");
    let summary_path = dir.join("summary.csv");
    let meta_path = dir.join("meta.csv");
    write_csv(
        &per_slot_path,
        &["slot", "scheme", "mno", "avg_cost"],
        &per_slot,
    )?;
    write_csv(
        &summary_path,
        &["scheme", "mno", "total", "reduction_pct"],
        &summary,
    )?;
    let meta_rows: Vec<Vec<String>> = meta.into_iter().map(|(k, v)| vec![k, v]).collect();
    write_csv(&meta_path, &["key", "value"], &meta_rows)?;
    Ok(vec![per_slot_path, summary_path, meta_path])
}
