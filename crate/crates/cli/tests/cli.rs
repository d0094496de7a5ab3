use std::process::{Command, Output};

fn mother(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mother")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn level_one_dot_has_five_vertices() {
    let o = mother(&["level-graph", "-n", "1", "--dot"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("digraph"));
    for v in 0..5 {
        assert!(text.contains(&format!("v{v} [label=\"{v}\"]")));
    }
}

#[test]
fn bratteli_export_has_forty_vertices_per_level() {
    let o = mother(&["bratteli", "export", "--levels", "3"]);
    assert!(o.status.success());
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["vertices_per_level"].as_array().unwrap().len(), 40);
    assert_eq!(j["levels"], 3);
}

#[test]
fn eta_reports_order_three() {
    let o = mother(&["eta", "--cylinder", "1@21*", "--g", "A[1 2 0 3 4]", "--h", "A[0 2 3 1 4]"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["order"], 3);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(mother(&["--d", "4", "level-graph"]).status.code(), Some(2));
    assert_eq!(mother(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(mother(&["gray-piece", "--point", "not a point"]).status.code(), Some(2));
}

#[test]
fn verify_reports_are_deterministic() {
    let args = ["verify", "brieussel", "--seed", "9"];
    let a = mother(&args);
    let b = mother(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let j: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(j["schema"], "mother-verify/1");
    assert_eq!(j["passed"], true);
    assert_eq!(j["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn config_hash_tracks_the_config() {
    let h = |seed: &str| {
        let o = mother(&["verify", "bounded-type", "--depth", "4", "--seed", seed]);
        let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        j["config_hash"].as_str().unwrap().to_string()
    };
    assert_ne!(h("1"), h("2"));
}

#[test]
fn env_overrides_flags_defaults() {
    let o = Command::new(env!("CARGO_BIN_EXE_mother"))
        .args(["verify", "bounded-type"])
        .env("MOTHER_DEPTH", "4")
        .output()
        .unwrap();
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j["config"]["depth"], 4);
}

#[test]
fn report_goes_to_out_file() {
    let path = std::env::temp_dir().join(format!("mother-report-{}.json", std::process::id()));
    let o = mother(&["verify", "brieussel", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.contains("\"suite\": \"brieussel\""));
}
