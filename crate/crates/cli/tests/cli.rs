use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn lgt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgt")).args(args).output().unwrap()
}

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn free_body(combo: &str, h: f64, t_end: f64, w: [f64; 3]) -> String {
    format!(
        r#"{{
  "model": {{"kind": "free_body", "body": {{"mass_kg": 3.0, "inertia_kgm2": [1.0, 2.0, 3.0]}}}},
  "initial_state": [{{"rotation_vector_rad": [0.3, -0.2, 0.5], "position_m": [0.1, 0.2, 0.3],
                      "angular_velocity_body_radps": [{}, {}, {}], "velocity_mps": [0.5, -0.25, 1.0]}}],
  "integrator": {{"combo": "{combo}", "h_s": {h}, "t_end_s": {t_end}}}
}}"#,
        w[0], w[1], w[2]
    )
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn run_writes_one_row_per_step_plus_initial() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(&dir, "s.json", &free_body("1a", 0.01, 0.5, [0.1, 2.0, 0.1]));
    let out = dir.path().join("traj.csv");
    let o = lgt(&["run", &file, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(!text.contains('\r'));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header[0], "t");
    assert_eq!(header[header.len() - 4..], ["energy", "gnorm", "gvnorm", "qnorm_err"]);
    assert_eq!(rows.len(), 51);
    assert!(rows.iter().all(|r| r.len() == header.len()));
    let t_end: f64 = rows.last().unwrap()[0].parse().unwrap();
    assert!((t_end - 0.5).abs() < 1e-12);
    let digits = rows[1][1].split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(digits.len(), 17);
}

#[test]
fn zero_duration_gives_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(&dir, "s.json", &free_body("2c", 0.01, 0.0, [0.1, 2.0, 0.1]));
    let o = lgt(&["run", &file, "--quiet"]);
    assert!(o.status.success());
    assert!(o.stderr.is_empty());
    let (_, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 1);
}

#[test]
fn malformed_scenario_exits_2_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = free_body("1a", 0.01, 0.5, [0.1, 2.0, 0.1]).replace("\"mass_kg\": 3.0", "\"mass_kg\": \"three\"");
    let o = lgt(&["run", &write(&dir, "bad.json", &bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("model.body.mass_kg"));

    let bad = free_body("4z", 0.01, 0.5, [0.1, 2.0, 0.1]);
    let o = lgt(&["run", &write(&dir, "bad2.json", &bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("integrator.combo"));
}

#[test]
fn inconsistent_initial_state_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(scenario_dir().join("pendulum.json"))
        .unwrap()
        .replace("\"position_m\": [0.0, 0.0, 0.0]", "\"position_m\": [0.0, 0.0, 0.01]");
    let o = lgt(&["run", &write(&dir, "p.json", &text)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn integration_failure_exits_4_with_step_index() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(&dir, "s.json", &free_body("2a", 1.0, 3.0, [0.0, 0.0, 4.0]));
    let o = lgt(&["run", &file]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step 1"));
}

#[test]
fn convergence_reports_fourth_order() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(&dir, "s.json", &free_body("1d", 0.01, 1.0, [2.0, 5.0, -3.0]));
    let o = lgt(&["convergence", &file, "--h", "1e-2,5e-3,2.5e-3,1.25e-3", "--quiet"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(header, ["h_s", "global_error", "slope", "r2"]);
    assert_eq!(rows.len(), 4);
    let slope: f64 = rows[0][2].parse().unwrap();
    let r2: f64 = rows[0][3].parse().unwrap();
    assert!((slope - 4.0).abs() <= 0.2, "{slope}");
    assert!(r2 > 0.99);
}

#[test]
fn convergence_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(&dir, "s.json", &free_body("2b", 0.01, 0.5, [2.0, 5.0, -3.0]));
    let o = lgt(&["convergence", &file, "--h", "1e-2,1e-2", "--quiet"]);
    assert!(o.status.success());
    let (_, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows[0][1], rows[1][1]);
}

#[test]
fn compare_combos_agree_and_baseline_drifts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cmp.csv");
    let pend = scenario_dir().join("pendulum.json");
    let o = lgt(&["compare", pend.to_str().unwrap(), "--out", out.to_str().unwrap(), "--quiet"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = parse_csv(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 9);
    assert_eq!(header.len(), 2 + 9);
    for r in &rows[..8] {
        for g in &r[2..10] {
            assert!(g.parse::<f64>().unwrap() < 1e-8, "{r:?}");
        }
    }

    // one revolution per second at h = 1e-2: the baseline leaves the sphere
    let file = write(&dir, "spin.json", &free_body("1a", 0.01, 20.0, [0.5, 6.283185307179586, 0.5]));
    let o = lgt(&["compare", &file, "--runs", "1a,1b,1c,1d,baseline", "--quiet"]);
    assert!(o.status.success());
    let (_, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    for r in &rows[..4] {
        assert!(r[1].parse::<f64>().unwrap() < 1e-12, "{r:?}");
    }
    assert!(rows[4][1].parse::<f64>().unwrap() > 1e-12, "{:?}", rows[4]);
}

#[test]
fn compare_same_combo_twice_has_zero_gap() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(&dir, "s.json", &free_body("2d", 0.01, 0.5, [0.1, 2.0, 0.1]));
    let o = lgt(&["compare", &file, "--runs", "2d,2d", "--quiet"]);
    assert!(o.status.success());
    let (header, rows) = parse_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(header, ["run", "max_qnorm_err", "gap_2d", "gap_2d"]);
    assert_eq!(rows[0][3].parse::<f64>().unwrap(), 0.0);
    assert_eq!(rows[0][1], "nan");
}

#[test]
fn bundled_scenarios_run() {
    for name in ["free_body.json", "pendulum.json", "chain.json"] {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("t.csv");
        let path = scenario_dir().join(name);
        let o = lgt(&["run", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let summary = String::from_utf8_lossy(&o.stderr);
        assert!(summary.contains("rows"), "{summary}");
    }
}
