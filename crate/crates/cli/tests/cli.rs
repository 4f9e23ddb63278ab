use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosetfusion"))
        .args(args)
        .env_remove("COSET_FUSION_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn kac_ising_has_three_rows() {
    let o = run(&["kac", "--m", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let weights: Vec<&str> = text.lines().skip(2).map(|l| l.split('\t').nth(3).unwrap()).collect();
    assert_eq!(weights, ["0", "1/16", "1/2"]);
}

#[test]
fn kac_json_lists_55_primaries() {
    let o = run(&["kac", "--m", "9", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["c"], "21/22");
    assert_eq!(v["primaries"].as_array().unwrap().len(), 55);
}

#[test]
fn weight_eight_squared() {
    let o = run(&["fusion", "--m", "9", "--a", "1.7", "--b", "1.7"]);
    assert!(o.status.success());
    let labels: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').next().unwrap().to_string())
        .collect();
    assert_eq!(labels, ["9:1.1", "9:1.3", "9:1.5", "9:1.7", "9:1.9"]);
}

#[test]
fn fusion_json_round_trips() {
    let o = run(&["fusion", "--m", "9", "--json"]);
    let json: coset_fusion::fusion::FusionRingJson = serde_json::from_slice(&o.stdout).unwrap();
    let ring = coset_fusion::FusionRing::from_json(&json).unwrap();
    assert_eq!(
        ring,
        coset_fusion::fusion::minimal_model_fusion(coset_fusion::MinimalModel::new(9).unwrap())
    );
    assert_eq!(ring.rank(), 55);
}

#[test]
fn instance_table_has_15_labels() {
    let o = run(&["fusion", "--instance", "3c", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["labels"].as_array().unwrap().len(), 15);
    let text = stdout(&run(&["fusion", "--instance", "3c"]));
    assert!(text.starts_with("note: U(2i) fuses as the (2i+1, 1) field"));
    let p = run(&["fusion", "--instance", "3c", "--a", "M_{1,2}", "--b", "M_{1,2}"]);
    assert_eq!(stdout(&p).lines().count(), 6);
}

#[test]
fn chars_prints_exact_lines() {
    let o = run(&["chars", "--c", "21/22", "--h", "8", "--order", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "1401/176\t1");
    assert!(text.lines().all(|l| l.split('\t').count() == 2));
}

#[test]
fn order_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cosetfusion"))
        .args(["chars", "--c", "1/2", "--h", "1/16"])
        .env("COSET_FUSION_ORDER", "3")
        .output()
        .unwrap();
    // Π(1+q^n) = 1 + q + q^2 + 2q^3
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn verify_decomp_passes() {
    let o = run(&["verify-decomp", "--order", "10"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last(), Some("PASS"));
}

#[test]
fn verify_factorization_instance() {
    let o = run(&["verify-factorization", "--instance", "3c"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("PASS\n"));
}

#[test]
fn verify_factorization_reports_broken_table() {
    let dir = std::env::temp_dir().join(format!("cosetfusion-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ds = coset_fusion::threec::ThreeCDataset::bundled().unwrap();
    let mut table = ds.table().to_json();
    table.rows.get_mut("U(4)").unwrap().pop();
    let table_path = dir.join("table.json");
    let big_path = dir.join("big.json");
    std::fs::write(&table_path, serde_json::to_string(&table).unwrap()).unwrap();
    std::fs::write(
        &big_path,
        serde_json::to_string(&ds.u_ring().unwrap().to_json()).unwrap(),
    )
    .unwrap();
    let args = [
        "verify-factorization",
        "--table",
        table_path.to_str().unwrap(),
        "--big",
        big_path.to_str().unwrap(),
        "--sub-m",
        "1",
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("J_U(4) != J"));

    let good = ds.table().to_json();
    std::fs::write(&table_path, serde_json::to_string(&good).unwrap()).unwrap();
    assert_eq!(run(&args).status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    for args in [
        &["fusion", "--instance", "4d"][..],
        &["chars", "--c", "1/x", "--h", "0"],
        &["chars", "--c", "1/3", "--h", "0"],
        &["kac", "--m", "0"],
        &["kac", "--nope"],
        &["fusion"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1, "{args:?}");
    }
}

#[test]
fn deterministic_output() {
    let a = run(&["fusion", "--instance", "3c"]);
    let b = run(&["fusion", "--instance", "3c"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dims_for_instance_list_lowest_weights() {
    let o = run(&["dims", "--instance", "3c", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 15);
    let m30 = rows.iter().find(|r| r["label"] == "M_{3,0}").unwrap();
    assert_eq!(m30["h"], "1/11");
    let text = stdout(&run(&["dims", "--m", "1"]));
    assert_eq!(text.lines().nth(2).unwrap().split('\t').nth(1), Some("1/16"));
}
