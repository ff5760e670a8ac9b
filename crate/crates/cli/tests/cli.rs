use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn groupbuy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupbuy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small<'a>(out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![
        "--bs-pairs",
        "4",
        "--slots",
        "12",
        "--mc-samples",
        "50",
        "--realizations",
        "3",
        "--out",
        out,
    ];
    v.extend_from_slice(extra);
    v
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn writes_all_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = groupbuy(&small(out, &[]));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let per_slot = read(dir.path(), "per_slot_costs.csv");
    assert!(per_slot.starts_with("slot,scheme,mno,avg_cost\n"));
    // Per slot: noncoop and bargain each give two operators plus a total; fullcoop a total.
    assert_eq!(per_slot.lines().count(), 1 + 12 * 7);

    let summary = read(dir.path(), "summary.csv");
    let mut lines = summary.lines();
    assert_eq!(lines.next(), Some("scheme,mno,total,reduction_pct"));
    let noncoop: Vec<&str> = summary
        .lines()
        .filter(|l| l.starts_with("noncoop,"))
        .collect();
    assert!(!noncoop.is_empty());
    for l in noncoop {
        assert_eq!(l.rsplit(',').next().unwrap().parse::<f64>().unwrap(), 0.0);
    }
    assert!(read(dir.path(), "meta.csv").starts_with("key,value\n"));

    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("fullcoop"));
}

#[test]
fn baseline_only_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = groupbuy(&small(out, &["--scheme", "noncoop"]));
    assert!(o.status.success());
    let summary = read(dir.path(), "summary.csv");
    assert!(summary.lines().skip(1).all(|l| l.starts_with("noncoop,")));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# desk run\nbs-pairs = 3\nslots = 6\nmc-samples = 40\nrealizations = 2\nseed = 9\n",
    )
    .unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out in [&out_a, &out_b] {
        let o = groupbuy(&[
            "--config",
            cfg.to_str().unwrap(),
            "--realizations",
            "3",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let meta = read(&out_a, "meta.csv");
    assert!(meta.contains("realizations,3"), "{meta}");
    assert!(meta.contains("seed,9"), "{meta}");
    assert_eq!(
        read(&out_a, "per_slot_costs.csv").lines().count(),
        1 + 6 * 7
    );
    for f in ["per_slot_costs.csv", "summary.csv", "meta.csv"] {
        assert_eq!(read(&out_a, f), read(&out_b, f));
    }
}

#[test]
fn price_file_sets_slot_count() {
    let dir = tempfile::tempdir().unwrap();
    let prices = dir.path().join("prices.csv");
    let mut text = String::from("slot,alpha,alpha_buy_pred,alpha_sell_pred\n");
    for n in 0..8 {
        text.push_str(&format!(
            "{n},{},{},{}\n",
            0.03 + 0.001 * n as f64,
            0.05,
            0.01
        ));
    }
    fs::write(&prices, text).unwrap();
    let out = dir.path().join("out");
    let o = groupbuy(&[
        "--bs-pairs",
        "3",
        "--mc-samples",
        "40",
        "--realizations",
        "2",
        "--prices",
        prices.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&out, "per_slot_costs.csv").lines().count(), 1 + 8 * 7);
}

#[test]
fn bad_inputs_fail_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();

    let o = groupbuy(&["--bs-pairs", "many"]);
    assert!(!o.status.success());

    let o = groupbuy(&small(out, &["--scheme", "greedy"]));
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let missing = dir.path().join("nope.cfg");
    let o = groupbuy(&["--config", missing.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope.cfg"));

    let prices = dir.path().join("bad.csv");
    fs::write(
        &prices,
        "slot,alpha,alpha_buy_pred,alpha_sell_pred\n0,40,35,20\n",
    )
    .unwrap();
    let o = groupbuy(&["--prices", prices.to_str().unwrap(), "--out", out]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("price ordering violated at slot 0"), "{err}");

    let o = groupbuy(&small(out, &["--traffic", "file:/no/such/theta.csv"]));
    assert!(!o.status.success());
}
