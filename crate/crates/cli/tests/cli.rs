use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn twsec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twsec"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .env_remove("TWSEC_OUT_DIR")
        .output()
        .expect("spawn twsec")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = twsec(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Parse a CSV file into its header and rows.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>());
    let header = lines.next().unwrap();
    (header, lines.collect())
}

fn field(header: &[String], row: &[String], name: &str) -> String {
    let i = header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    row[i].clone()
}

fn num(header: &[String], row: &[String], name: &str) -> f64 {
    field(header, row, name).parse().unwrap()
}

#[test]
fn capacity_at_blind_eavesdropper() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["capacity", "--kind", "tw_hard", "--gamma", "0", "--eta", "1.6"],
    );
    let (h, rows) = read_csv(&dir.path().join("capacity.csv"));
    assert_eq!(rows.len(), 1);
    let c = num(&h, &rows[0], "capacity");
    assert!((c - 0.5217).abs() < 1e-3, "{c}");
    assert!(dir.path().join("capacity.manifest.json").exists());
}

#[test]
fn capacity_all_kinds() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["capacity", "--gamma", "1", "--eta", "2"]);
    let (h, rows) = read_csv(&dir.path().join("capacity.csv"));
    let kinds: Vec<String> = rows.iter().map(|r| field(&h, r, "kind")).collect();
    assert_eq!(kinds, ["tw_soft", "tw_hard", "ow_soft", "ow_hard"]);
    // With equal SNRs the one-way capacities vanish and the two-way ones do not.
    for r in &rows {
        let c = num(&h, r, "capacity");
        if field(&h, r, "kind").starts_with("ow") {
            assert_eq!(c, 0.0);
        } else {
            assert!(c > 0.1);
        }
    }
}

#[test]
fn one_way_optimum_is_flat_when_eve_is_stronger() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(dir.path(), &["optimize", "--kind", "ow_hard", "--gamma", "2"]);
    assert!(stdout.contains("flat"), "{stdout}");
}

#[test]
fn optimized_threshold() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["threshold", "--optimized"]);
    let (h, rows) = read_csv(&dir.path().join("threshold.csv"));
    let g = num(&h, &rows[0], "gamma_cross");
    assert!((0.30..=0.34).contains(&g), "{g}");
}

#[test]
fn satellite_preset_gamma() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["satellite", "--preset", "II_LEO"]);
    let (h, rows) = read_csv(&dir.path().join("satellite.csv"));
    assert_eq!(field(&h, &rows[0], "scenario"), "II_LEO");
    let g = num(&h, &rows[0], "gamma_max");
    assert!((g - 18.0 / 17.0).abs() < 1e-9, "{g}");
}

#[test]
fn satellite_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenarios.txt");
    fs::write(
        &cfg,
        "# co-located eavesdropper\nname = colocated\nrho_l_km = 20000\nrho_e_min_km = 20000\n",
    )
    .unwrap();
    ok(dir.path(), &["satellite", "--config", cfg.to_str().unwrap()]);
    let (h, rows) = read_csv(&dir.path().join("satellite.csv"));
    assert_eq!(field(&h, &rows[0], "scenario"), "colocated");
    assert!((num(&h, &rows[0], "gamma_max") - 1.0).abs() < 1e-9);
}

#[test]
fn simulation_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["simulate", "--rounds", "500", "--n", "4", "--seed", "9", "--transcript"];
    ok(a.path(), &args);
    ok(b.path(), &args);
    for name in ["simulate.csv", "simulate_transcript.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn exhaustive_leakage_is_zero_for_blind_eve() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "simulate",
            "--leakage-exhaustive",
            "--n",
            "10",
            "--m",
            "5",
            "--gamma",
            "0",
        ],
    );
    let (h, rows) = read_csv(&dir.path().join("leakage.csv"));
    assert_eq!(num(&h, &rows[0], "mi_key_eve"), 0.0);
}

#[test]
fn replay_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["simulate", "--rounds", "300", "--n", "8", "--seed", "2", "--key"],
    );
    let csv = dir.path().join("key.csv");
    let first = fs::read(&csv).unwrap();
    fs::remove_file(&csv).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_twsec"))
        .arg("replay")
        .arg(dir.path().join("key.manifest.json"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&csv).unwrap(), first);
}

#[test]
fn bad_input_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        twsec(dir.path(), &["capacity", "--gamma", "x", "--eta", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        twsec(dir.path(), &["capacity", "--gamma", "1", "--eta", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(twsec(dir.path(), &["nonsense"]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    assert_eq!(
        twsec(dir.path(), &["satellite", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
}
