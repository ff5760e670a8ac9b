//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use groupbuy::experiment::{aggregate, Experiment};
use groupbuy::{
    approx_subgradient, emit_report, optimal_pair_share, optimize_commitment, pair_share_oracle,
    sample_average_cost, sample_demands_individual, BsParams, DayAheadAgreement, ExperimentConfig,
    McConfig, Mno, NetworkConfig, Scheme, SlotPrices, TrafficKind, TrafficModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn pair_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = |rng: &mut ChaCha8Rng| BsParams {
            a: rng.gen_range(10.0..14.0),
            b: rng.gen_range(1000.0..1400.0),
            c: rng.gen_range(20.0..40.0),
            d_max: rng.gen_range(120.0..180.0),
        };
        let (p1, p2) = (p(&mut rng), p(&mut rng));
        let d1 = rng.gen_range(0.001..=1.0) * p1.d_max;
        let d2 = rng.gen_range(0.001..=1.0) * p2.d_max;
        let fast = optimal_pair_share(d1, d2, &p1, &p2).unwrap().energy;
        let grid = pair_share_oracle(d1, d2, &p1, &p2, 0.01).unwrap().energy;
        worst = worst.max((fast - grid).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-6 && secs < 5.0,
        format!("1000 pairs, max |dE| = {worst:.2e} W, {secs:.2} s"),
    )
}

fn random_model(rng: &mut ChaCha8Rng, k: usize, lo: f64, hi: f64) -> (TrafficModel, NetworkConfig) {
    let chi = (0..k)
        .map(|_| [rng.gen_range(lo..hi), rng.gen_range(lo..hi)])
        .collect();
    let model = TrafficModel::new(vec![1.0], chi, 0.4).unwrap();
    let net = NetworkConfig::uniform(k, 1, BsParams::lte_macro()).unwrap();
    (model, net)
}

fn subgradient() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = McConfig {
        m_samples: 10_000,
        ..Default::default()
    };
    let (mut worst, mut monotone) = (0.0f64, true);
    for slot in 0..100 {
        let (model, net) = random_model(&mut rng, 10, 15.0, 135.0);
        let samples = sample_demands_individual(Mno::One, 0, &model, &net, &cfg, slot).unwrap();
        let alpha = rng.gen_range(20.0..60.0);
        let pr = SlotPrices::new(
            alpha,
            alpha * rng.gen_range(1.1..2.0),
            alpha * rng.gen_range(0.1..0.9),
        );
        let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().cloned().fold(0.0, f64::max);

        let g = rng.gen_range(lo..hi);
        let h = 1e-3;
        let fd = (sample_average_cost(g + h, &samples, &pr).unwrap()
            - sample_average_cost(g - h, &samples, &pr).unwrap())
            / (2.0 * h);
        let sg = approx_subgradient(g, &samples, &pr).unwrap();
        worst = worst.max((fd - sg).abs() / sg.abs());

        let mut prev = f64::NEG_INFINITY;
        for j in 0..=200 {
            let v = approx_subgradient(lo + (hi - lo) * j as f64 / 200.0, &samples, &pr).unwrap();
            monotone &= v >= prev;
            prev = v;
        }
    }
    outcome(
        worst <= 0.02 && monotone,
        format!("100 slots, M=1e4, max rel err {worst:.2e}, monotone {monotone}"),
    )
}

fn sign_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = McConfig {
        m_samples: 10_000,
        ..Default::default()
    };
    let mut hits = 0;
    for slot in 0..100 {
        // Means at most d_max / 1.4 keep the +-40% error inside capacity, so
        // the realised errors stay symmetric.
        let (model, net) = random_model(&mut rng, 20, 15.0, 150.0 / 1.4);
        let pr = loop {
            let alpha = rng.gen_range(20.0..60.0);
            let pr = SlotPrices::new(
                alpha,
                alpha * rng.gen_range(1.05..2.0),
                alpha * rng.gen_range(0.05..0.95),
            );
            if (2.0 * pr.alpha - pr.alpha_buy - pr.alpha_sell).abs() > 0.1 * pr.alpha {
                break pr;
            }
        };
        let samples =
            sample_demands_individual(Mno::One, 0, &model, &net, &cfg, 100 + slot).unwrap();
        let g = optimize_commitment(&samples, &pr, &cfg).unwrap();
        let forecast = model.predicted_demand(&net, Mno::One, 0);
        let expected = (0.5 * (pr.alpha_buy + pr.alpha_sell) - pr.alpha).signum();
        if (g - forecast).signum() == expected {
            hits += 1;
        }
    }
    outcome(
        hits >= 95,
        format!("{hits}/100 slots on the predicted side"),
    )
}

fn desk_config(traffic: TrafficKind) -> ExperimentConfig {
    ExperimentConfig {
        k_pairs: 50,
        n_slots: Some(48),
        m_samples: 500,
        realizations: 50,
        seed: 1,
        traffic,
        ..Default::default()
    }
}

struct DeskRun {
    report: groupbuy::CostReport,
    bargain_ok: Outcome,
    secs: f64,
}

fn desk_run(traffic: TrafficKind) -> DeskRun {
    let start = Instant::now();
    let exp = Experiment::prepare(&desk_config(traffic)).unwrap();
    let runs = exp.realizations().unwrap();
    let report = aggregate(&exp, &runs);
    let secs = start.elapsed().as_secs_f64();

    let mut sum_err = 0.0f64;
    let mut diff_err = 0.0f64;
    let mut min_payoff = f64::INFINITY;
    let mut slots = 0;
    for o in &runs {
        let (Some(b), Some(fc)) = (&o.bargain, &o.fullcoop) else {
            continue;
        };
        for (s, t) in b.iter().zip(fc) {
            let scale = t.cost.abs().max(1.0);
            sum_err = sum_err.max((s.cost1 + s.cost2 - t.cost).abs() / scale);
            let d = (s.cost1 - s.cost2) - (s.standalone[0] - s.standalone[1]);
            diff_err = diff_err.max(d.abs() / scale);
            min_payoff = min_payoff.min(s.payoff(Mno::One).min(s.payoff(Mno::Two)) / scale);
            slots += 1;
        }
    }
    let (dayahead_ok, dayahead) = match &exp.agreement {
        Some(DayAheadAgreement::Agreement(d)) => (
            d.payoff1 >= 0.0 && d.payoff2 >= 0.0,
            format!("agreement, payoffs {:.1}/{:.1}", d.payoff1, d.payoff2),
        ),
        Some(DayAheadAgreement::Disagreement { .. }) => (
            report.scheme(Scheme::Bargain).is_some(),
            "disagreement fallback".to_string(),
        ),
        None => (false, "bargaining did not run".to_string()),
    };
    let ok = slots > 0 && sum_err <= 1e-9 && diff_err <= 1e-9 && min_payoff >= -1e-9 && dayahead_ok;
    let bargain_ok = outcome(
        ok,
        format!(
            "{slots} slots, sum err {sum_err:.1e}, diff err {diff_err:.1e}, min payoff {min_payoff:.1e}, {dayahead}"
        ),
    );
    DeskRun {
        report,
        bargain_ok,
        secs,
    }
}

fn csv_bytes(dir: &Path) -> Vec<Vec<u8>> {
    ["per_slot_costs.csv", "summary.csv", "meta.csv"]
        .iter()
        .map(|f| std::fs::read(dir.join(f)).unwrap())
        .collect()
}

fn determinism() -> Outcome {
    let cfg = ExperimentConfig {
        k_pairs: 20,
        m_samples: 200,
        realizations: 12,
        seed: 42,
        traffic: TrafficKind::Asymmetric,
        ..Default::default()
    };
    let mut outputs = Vec::new();
    for threads in [1, 4, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let report = pool.install(|| groupbuy::run_experiment(&cfg)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        emit_report(&report, dir.path()).unwrap();
        outputs.push(csv_bytes(dir.path()));
    }
    let same = outputs.windows(2).all(|w| w[0] == w[1]);
    outcome(same, "1, 4 and 4 worker threads")
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("1 load-sharing oracle", pair_oracle()));
    results.push(("2 subgradient", subgradient()));
    results.push(("3 under-commit sign law", sign_law()));

    let sym = desk_run(TrafficKind::Symmetric);
    let asym = desk_run(TrafficKind::Asymmetric);
    let (s, a) = (&sym.report, &asym.report);
    let comp = s.complementarity_violations + a.complementarity_violations;
    results.push((
        "4 complementarity",
        outcome(comp == 0, format!("{comp} violations")),
    ));
    let dom = s.dominance_violations + a.dominance_violations;
    results.push((
        "5 group dominance",
        outcome(dom == 0, format!("{dom} violations over 2 x 50 days")),
    ));
    results.push(("6 bargaining identities (symmetric)", sym.bargain_ok));
    results.push(("6 bargaining identities (asymmetric)", asym.bargain_ok));

    let red_s = s.reduction_pct(Scheme::FullCoop, None).unwrap();
    let red_a = a.reduction_pct(Scheme::FullCoop, None).unwrap();
    let b = |r: &groupbuy::CostReport, m| r.reduction_pct(Scheme::Bargain, Some(m)).unwrap();
    let slowest = sym.secs.max(asym.secs);
    results.push((
        "7a symmetric reduction in [15, 30]%",
        outcome(
            (15.0..=30.0).contains(&red_s) && slowest < 60.0,
            format!("{red_s:.2}%, {slowest:.1} s per run"),
        ),
    ));
    results.push((
        "7b asymmetric > symmetric",
        outcome(red_a > red_s, format!("{red_a:.2}% vs {red_s:.2}%")),
    ));
    let (s1, s2) = (b(s, Mno::One), b(s, Mno::Two));
    results.push((
        "7c symmetric per-operator gap <= 4 pp",
        outcome((s1 - s2).abs() <= 4.0, format!("{s1:.2}% / {s2:.2}%")),
    ));
    let (a1, a2) = (b(a, Mno::One), b(a, Mno::Two));
    results.push((
        "7d asymmetric per-operator reductions positive",
        outcome(a1 > 0.0 && a2 > 0.0, format!("{a1:.2}% / {a2:.2}%")),
    ));
    results.push(("8 determinism across thread counts", determinism()));

    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
