use std::process::{Command, Output};

fn ldual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldual"))
        .args(args)
        .env_remove("LDUAL_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn crystal_sizes() {
    for (ty, w, n) in [("B2", "1,0", 5), ("B2", "0,0", 1), ("G2", "0,3", 77)] {
        let o = ldual(&["crystal", "--type", ty, "--weight", w]);
        assert!(o.status.success());
        assert!(stdout(&o).contains(&format!("\nelements {n}\n")), "{ty} {w}");
    }
}

#[test]
fn crystal_census_of_b2_vector() {
    let out = stdout(&ldual(&["crystal", "--type", "B2", "--weight", "1,0"]));
    assert!(out.contains("component highest (1,0) size 4"));
    assert!(out.contains("component highest (0,0) size 1"));
}

#[test]
fn explicit_seed_and_cartan_json() {
    let o = ldual(&["crystal", "--type", "B2", "--seed", "1_1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\nelements 5\n"));
    let json = r#"{"name":"B2","cartan":[[2,-1],[-2,2]],"labels":[2,1]}"#;
    let o = ldual(&["crystal", "--type", json, "--weight", "0,1"]);
    assert!(stdout(&o).contains("\nelements 4\n"));
}

#[test]
fn dot_artifact_is_written() {
    let dir = std::env::temp_dir().join(format!("ldual-cli-{}", std::process::id()));
    let path = dir.join("b2.dot");
    let o = ldual(&["crystal", "--type", "B2", "--weight", "1,0", "--format", "dot", "--dual", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 3);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn branching_tables() {
    let rows = stdout(&ldual(&["branch", "--type", "G2", "--weight", "0,3"]));
    assert_eq!(rows, "(0,1) 1\n(1,0) 2\n(0,0) 1\n");
    let rows = stdout(&ldual(&["branch", "--type", "B2", "--weight", "1,0"]));
    assert_eq!(rows.lines().count(), 2);
    let rows = stdout(&ldual(&["branch", "--type", "B2", "--weight", "0,0"]));
    assert_eq!(rows, "(0,0) 1\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ldual(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(ldual(&["crystal", "--type", "B2", "--weight", "-1,0"]).status.code(), Some(2));
    assert_eq!(ldual(&["crystal", "--type", "B2", "--weight", "1,0,0"]).status.code(), Some(2));
    assert_eq!(ldual(&["crystal", "--type", "Q7", "--weight", "1"]).status.code(), Some(2));
}

#[test]
fn budget_overflow_fails() {
    let o = ldual(&["crystal", "--type", "G2", "--weight", "0,3", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_normality_passes() {
    let o = ldual(&["verify", "normality"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report[0]["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["crystal", "--type", "G2", "--weight", "1,1", "--format", "json"];
    assert_eq!(ldual(&args).stdout, ldual(&args).stdout);
    let args = ["verify", "tableaux"];
    assert_eq!(ldual(&args).stdout, ldual(&args).stdout);
}
