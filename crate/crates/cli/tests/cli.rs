use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn caystir(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_caystir"))
        .args(args)
        .env_remove("CAYSTIR_FORMAT")
        .env_remove("CAYSTIR_CONFIG")
        .env_remove("CAYSTIR_CAP")
        .env("CAYSTIR_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let dir = TempDir::new().unwrap();
    let out = caystir(dir.path(), args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout_of(&full)).unwrap()
}

#[test]
fn distance_reports_radius_and_rule() {
    let v = json_of(&["distance", "-k", "3", "-n", "12", "(1 2)"]);
    assert_eq!(v["distance"], 3);
    assert!(v["rule"].as_str().unwrap().contains("odd k"));

    assert_eq!(json_of(&["distance", "-k", "1", "-n", "5", "(1 2 3)"])["distance"], 2);
    assert_eq!(
        json_of(&["distance", "-k", "2", "-n", "5", "(1 2)"])["distance"],
        "not-a-vertex"
    );
}

#[test]
fn distance_between_two_vertices_is_left_invariant() {
    let v = json_of(&["distance", "-k", "1", "-n", "6", "(1 2 3)(4 5)", "--from", "(4 5)"]);
    assert_eq!(v["distance"], 2);
}

#[test]
fn outside_analytic_validity_points_to_the_oracle() {
    let dir = TempDir::new().unwrap();
    let out = caystir(dir.path(), &["distance", "-k", "3", "-n", "8", "(1 2)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--oracle"));

    let v = json_of(&["--oracle", "distance", "-k", "3", "-n", "8", "(1 2)"]);
    assert_eq!(v["regime"], "oracle");
    assert!(v["distance"].is_u64());
}

#[test]
fn spheres_and_diameters() {
    assert_eq!(stdout_of(&["--format", "csv", "spheres", "-k", "2", "-n", "5"]), "r,size\n0,1\n1,15\n2,44\n");
    assert_eq!(
        stdout_of(&["--oracle", "--format", "csv", "spheres", "-k", "2", "-n", "5"]),
        "r,size\n0,1\n1,15\n2,44\n"
    );
    assert_eq!(json_of(&["diameter", "-k", "4", "-n", "16"])["diameter"], 4);
    assert_eq!(json_of(&["diameter", "-k", "1", "-n", "6"])["diameter"], 5);
    assert_eq!(json_of(&["ball", "-k", "2", "-n", "5", "-r", "1"])["ball"], "16");
}

#[test]
fn sphere_sizes_stay_exact_beyond_machine_words() {
    let rows: Vec<serde_json::Value> =
        serde_json::from_value(json_of(&["spheres", "-k", "1", "-n", "30"])).unwrap();
    let total: num_bigint::BigUint = rows
        .iter()
        .map(|row| row["size"].as_str().unwrap().parse::<num_bigint::BigUint>().unwrap())
        .sum();
    let factorial: num_bigint::BigUint = (1u32..=30).product();
    assert_eq!(total, factorial);
}

#[test]
fn phi_values_carry_a_regime() {
    let v = json_of(&["phi", "-k", "1", "-n", "4", "-r", "1", "(1 2)"]);
    assert_eq!(v["phi"], "2");
    assert_eq!(json_of(&["phi", "-k", "2", "-n", "5", "-r", "2", "(1 2 3)"])["phi"], "60");
    assert_eq!(json_of(&["phi", "-k", "1", "-n", "100", "-r", "0", "(1 2)"])["phi"], "0");
    let by_type = json_of(&["phi", "-k", "1", "-n", "4", "-r", "1", "--type", "2^1"]);
    assert_eq!(by_type["phi"], "2");
    let forced = json_of(&["--oracle", "phi", "-k", "1", "-n", "4", "-r", "1", "(1 2)"]);
    assert_eq!(forced["regime"], "oracle");
}

#[test]
fn phi_table_marks_unsupported_cells() {
    let csv = stdout_of(&["--format", "csv", "phi-table", "-k", "3", "-n", "13", "(1 2)"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "r,phi,regime");
    assert_eq!(lines[3], "2,,unsupported");
    assert!(lines[4].ends_with(",analytic-recursion"));
}

#[test]
fn factorizations_multiply_back() {
    let v = json_of(&["factor", "-k", "2", "-n", "8", "(1 2 3 4)(5 6)"]);
    assert_eq!(v["factors"], serde_json::json!(["(1 2)(3 4)", "(1 3)(5 6)"]));
    let v = json_of(&["factor", "-k", "3", "-n", "12", "(1 2)"]);
    assert_eq!(v["factors"].as_array().unwrap().len(), 3);
    assert_eq!(v["distance"], 3);
    let v = json_of(&["factor", "-k", "3", "-n", "12", "e"]);
    assert_eq!(v["factors"], serde_json::json!([]));
}

#[test]
fn stirling_evaluates_rows_and_points() {
    assert_eq!(json_of(&["stirling", "-n", "5", "-m", "2"])["value"], "50");
    assert_eq!(
        stdout_of(&["--format", "csv", "stirling", "-n", "4"]),
        "m,value\n1,6\n2,11\n3,6\n4,1\n"
    );
}

#[test]
fn seed_rows_are_cached_and_cleared() {
    let dir = TempDir::new().unwrap();
    let run = |args: &[&str]| caystir(dir.path(), args);
    assert!(run(&["phi", "-k", "1", "-n", "9", "-r", "3", "(1 2 3)"]).status.success());
    let listed = String::from_utf8(run(&["--format", "csv", "cache", "list"]).stdout).unwrap();
    assert!(listed.contains("phi-k1,3^1,3,"), "{listed}");
    let cleared = String::from_utf8(run(&["cache", "clear"]).stdout).unwrap();
    assert!(cleared.starts_with("removed 1 "), "{cleared}");
    let listed = String::from_utf8(run(&["--format", "csv", "cache", "list"]).stdout).unwrap();
    assert_eq!(listed, "kind,g_type,t,entries\n");
}

#[test]
fn verify_reports_pass_and_unknown_suites() {
    let text = stdout_of(&["verify", "spheres-k3-n12"]);
    assert!(text.starts_with("PASS spheres-k3-n12"));
    assert!(text.contains("77 cycle types"));

    let v = json_of(&["verify", "stirling-classical"]);
    assert_eq!(v["passed"], true);

    let dir = TempDir::new().unwrap();
    assert_eq!(caystir(dir.path(), &["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn config_file_sits_below_flags_and_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("caystir.toml");
    std::fs::write(&cfg, "output_format = \"csv\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let out = caystir(dir.path(), &["--config", cfg, "diameter", "-k", "1", "-n", "4"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "k,n,diameter,regime\n1,4,3,analytic\n");

    let out = Command::new(env!("CARGO_BIN_EXE_caystir"))
        .args(["--config", cfg, "diameter", "-k", "1", "-n", "4"])
        .env("CAYSTIR_FORMAT", "json")
        .env("CAYSTIR_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with('{'));

    let out = caystir(dir.path(), &["--config", cfg, "--format", "table", "diameter", "-k", "1", "-n", "4"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("k "));

    std::fs::write(dir.path().join("bad.toml"), "colour = 3\n").unwrap();
    let bad = dir.path().join("bad.toml");
    let out = caystir(dir.path(), &["--config", bad.to_str().unwrap(), "diameter", "-k", "1", "-n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}
