use std::process::{Command, Output};

fn symmwig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symmwig"))
        .args(args)
        .env_remove("SYMMWIG_THREADS")
        .output()
        .expect("run symmwig")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn classes_diii_two() {
    let o = symmwig(&["classes", "--class", "DIII", "--n", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("id,label,kind,size,representative,members\n"));
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn pattern_count_alpha1() {
    let o = symmwig(&["patterns", "--m", "4", "--condition", "forward", "--filter", "identical-rows-alpha1"]);
    assert!(o.status.success());
    assert_eq!(rows(&o), vec![vec!["4", "forward", "identical-rows-alpha1", "8", "8", "true"]]);
}

#[test]
fn pattern_table_all_match() {
    let o = symmwig(&["patterns", "--m", "3-10", "--condition", "reverse", "--filter", "tau-realizable"]);
    assert!(o.status.success());
    let r = rows(&o);
    assert_eq!(r.len(), 8);
    assert!(r.iter().all(|row| row[5] == "true"));
}

#[test]
fn asymptotic_variance() {
    let o = symmwig(&["variance", "--class", "CI", "--m", "4", "--mode", "asymptotic", "--sigma", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "class,n,m,value,mode,flag\nCI,4,4,16,asymptotic,theorem\n");
}

#[test]
fn exact_and_oracle_modes() {
    let exact = symmwig(&["variance", "--class", "DIII", "--n", "3", "--m", "2", "--mode", "exact"]);
    assert_eq!(rows(&exact)[0][3], "5.33333333333");
    let oracle = symmwig(&["variance", "--class", "DIII", "--n", "3", "--m", "2", "--mode", "oracle"]);
    assert_eq!(rows(&oracle)[0][3], "5.33333333333");
}

#[test]
fn unknown_flag_prints_usage() {
    let o = symmwig(&["variance", "--nonsense"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn validation_and_budget_exit_codes() {
    assert_eq!(symmwig(&["classes", "--class", "DIII", "--n", "1"]).status.code(), Some(1));
    assert_eq!(symmwig(&["simulate", "--samples", "1"]).status.code(), Some(1));
    let o = symmwig(&["report", "--n", "30", "--m", "9", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_precedence_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sizes\nn=64\nclass=CI\n").unwrap();
    let o = symmwig(&["variance", "--config", cfg.to_str().unwrap(), "--n", "32", "--print-config"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "n=32"), "{text}");
    assert!(text.lines().any(|l| l == "class=CI"));

    let empty = dir.path().join("empty.cfg");
    std::fs::write(&empty, "").unwrap();
    let o = symmwig(&["variance", "--config", empty.to_str().unwrap(), "--print-config"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "n=4"));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "n=4\nthis is not a pair\n").unwrap();
    let o = symmwig(&["variance", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    std::fs::write(&bad, "n=4\ncolour=red\n").unwrap();
    let o = symmwig(&["variance", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    std::fs::write(&bad, "n=four\n").unwrap();
    let o = symmwig(&["variance", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    let o = symmwig(&["report", "--class", "CI", "--n", "3", "--m", "2-4", "--out", first.to_str().unwrap()]);
    assert!(o.status.success());
    let manifest = dir.path().join("a.csv.manifest");
    let text = std::fs::read_to_string(&manifest).unwrap();
    assert!(text.starts_with("subcommand=report\nversion="));
    let o = symmwig(&["report", "--config", manifest.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());

    // a manifest belongs to its subcommand
    let o = symmwig(&["variance", "--config", manifest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.json");
    let args = ["simulate", "--class", "DIII", "--n", "6", "--M", "4", "--samples", "200", "--seed", "9"];
    let o = symmwig(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("degree,var_est,var_se,theory,flag,z,k3,k4\n"));
    assert!(csv.contains("\n1,0,0,0,theorem,n/a,n/a,n/a\n"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["schema"], "symmwig/1");
    assert_eq!(doc["manifest"]["seed"], 9);
    assert_eq!(doc["data"]["result"]["config"]["samples"], 200);

    // same seed, different thread count, same table
    let again = Command::new(env!("CARGO_BIN_EXE_symmwig"))
        .args(args)
        .env("SYMMWIG_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&again), csv);
}

#[test]
fn json_output_is_versioned() {
    let o = symmwig(&["patterns", "--m", "4,6", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["schema"], "symmwig/1");
    assert_eq!(doc["data"][1]["count"], 128);
    assert_eq!(doc["manifest"]["params"]["m"], "4,6");
}

#[test]
fn oracle_subcommand_agrees() {
    let o = symmwig(&["oracle", "--class", "CI", "--n", "2", "--M", "4"]);
    assert!(o.status.success());
    for row in rows(&o) {
        assert_eq!(row[6], "0", "{row:?}");
    }
}

#[test]
fn traces_of_one_sample() {
    let o = symmwig(&["traces", "--class", "CI", "--n", "5", "--M", "3", "--seed", "2"]);
    let r = rows(&o);
    assert_eq!(r.len(), 3);
    assert_eq!(r[0][1], "0");
}
