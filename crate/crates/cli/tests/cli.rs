use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ngit"));
    c.env_remove("NGIT_OUT_DIR");
    c
}

fn sample(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("samples").join(name)
}

fn problem(v: &Value) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    write!(f, "{v}").unwrap();
    f
}

fn run(args: &[&str], files: &[&Path]) -> Output {
    bin().args(args).args(files).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).to_string()
}

fn json_result(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    v["result"].clone()
}

fn term(c: &str, exp: &[u32]) -> Value {
    json!({ "coeff": c, "exp": exp })
}

#[test]
fn grassmannian_mode_prints_two() {
    let f = problem(&json!({
        "mode": "grassmannian", "k": 2, "n": 4,
        "phi": [term("1", &[4, 0]), term("4", &[3, 1]), term("6", &[2, 2]), term("4", &[1, 3]), term("1", &[0, 4])],
    }));
    let o = run(&["--check-invariants"], &[f.path()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("2"));
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn betti_uhat_prints_series() {
    let f = problem(&json!({ "mode": "betti_uhat", "dims": { "dim_x": 6, "dim_u": 3, "dim_zmin": 0 } }));
    let o = run(&[], &[f.path()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 + t^2 + t^4");
}

#[test]
fn malformed_exponent_exits_one_with_path() {
    let f = problem(&json!({
        "mode": "pair_reductive",
        "group": { "rank": 2 },
        "fixed_points": [{ "normal_weights": [{ "form": ["1", "0"] }, { "form": ["0", "1"] }], "lambda_weight": "0" }],
        "class": [term("1", &[1, 1]), term("1", &[2])],
        "cone": ["1", "2"],
    }));
    let o = run(&[], &[f.path()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("class[1].exp"), "{}", stderr(&o));
}

#[test]
fn schema_errors_report_paths() {
    let f = problem(&json!({ "mode": "flag", "k": 1, "n": 2, "phi": [{ "coeff": "1/0", "exp": [1] }] }));
    let o = run(&[], &[f.path()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("phi[0].coeff"), "{}", stderr(&o));

    let f = problem(&json!({ "mode": "betti_uhat" }));
    let o = run(&[], &[f.path()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("dims: missing field"), "{}", stderr(&o));
}

#[test]
fn vanishing_cone_names_the_form() {
    let f = problem(&json!({
        "mode": "residue", "cone": ["1", "1"],
        "integrand": { "numerator": [term("1", &[0, 0])], "denominator": [{ "form": [1, -1] }, { "form": [1, 0] }] },
    }));
    let o = run(&[], &[f.path()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("z1 - z2"), "{}", stderr(&o));
}

#[test]
fn computation_errors_exit_two() {
    let f = problem(&json!({ "mode": "betti_uhat", "dims": { "dim_x": 3, "dim_u": 3, "dim_zmin": 0 } }));
    let o = run(&[], &[f.path()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("d = 0"), "{}", stderr(&o));
}

#[test]
fn json_output_round_trips_through_expect() {
    for name in ["gr24.json", "sl3_borel.json", "flag.json"] {
        let o = run(&["--format", "json"], &[&sample(name)]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let result = json_result(&o);
        let mut input: Value = serde_json::from_str(&std::fs::read_to_string(sample(name)).unwrap()).unwrap();
        input["expect"] = result.clone();
        let f = problem(&input);
        let again = run(&["--format", "json"], &[f.path()]);
        assert!(again.status.success(), "{name}: {}", stderr(&again));
        assert_eq!(json_result(&again), result);

        input["expect"]["kind"] = json!("other");
        let f = problem(&input);
        assert_eq!(run(&[], &[f.path()]).status.code(), Some(2));
    }
}

#[test]
fn samples_pass_their_checks() {
    let expected = [("gr24.json", "2"), ("sl3_borel.json", "1 + t^2 + t^4"), ("flag.json", "-1")];
    for (name, value) in expected {
        let o = run(&["--check-invariants"], &[&sample(name)]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let out = stdout(&o);
        assert_eq!(out.lines().next(), Some(value), "{name}");
        assert!(!out.contains("FAIL"), "{name}: {out}");
    }
}

#[test]
fn rationals_are_p_over_q_in_json() {
    let o = run(&["--format", "json"], &[&sample("flag.json")]);
    assert_eq!(json_result(&o)["value"], json!("-1/1"));
}

#[test]
fn latex_output() {
    let o = run(&["--format", "latex"], &[&sample("sl3_borel.json")]);
    assert_eq!(stdout(&o), "$1 + t^{2} + t^{4}$");
}

#[test]
fn many_files_keep_input_order() {
    let files: Vec<PathBuf> = ["flag.json", "gr24.json", "sl3_borel.json", "flag.json"].iter().map(|n| sample(n)).collect();
    let refs: Vec<&Path> = files.iter().map(PathBuf::as_path).collect();
    let o = run(&["--format", "json"], &refs);
    let docs: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    let values: Vec<&str> = docs.iter().map(|d| d["result"]["value"].as_str().unwrap_or("series")).collect();
    assert_eq!(values, ["-1/1", "2/1", "series", "-1/1"]);
    let again = run(&["--format", "json"], &refs);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn pairing_modes_agree_on_p3_quotient() {
    // C^4 minus the origin by the scalar torus, class z^3.
    let base = json!({
        "group": { "rank": 1 },
        "fixed_points": [{ "name": "origin", "normal_weights": [{ "form": ["1"], "mult": 4 }], "lambda_weight": "0", "is_min": true }],
        "class": [term("1", &[3])],
        "cone": ["1"],
    });
    for mode in ["pair_reductive", "pair_nonreductive", "pair_abelianized", "pair_uhat"] {
        let mut v = base.clone();
        v["mode"] = json!(mode);
        let f = problem(&v);
        let o = run(&["--check-invariants"], &[f.path()]);
        assert!(o.status.success(), "{mode}: {}", stderr(&o));
        assert_eq!(stdout(&o).lines().next(), Some("1"), "{mode}");
    }
}

#[test]
fn sign_flip_negates_odd_rank_residue() {
    let f = problem(&json!({
        "mode": "residue", "cone": ["1"],
        "integrand": { "numerator": [term("1", &[0])], "denominator": [{ "form": [1], "mult": 1 }] },
    }));
    assert_eq!(stdout(&run(&[], &[f.path()])), "1");
    assert_eq!(stdout(&run(&["--sign-flip"], &[f.path()])), "-1");
}

#[test]
fn morse_mode_reports_perfection() {
    let f = problem(&json!({
        "mode": "morse",
        "strata": [{ "codim": 1, "series": [1, 0, 1] }, { "codim": 2, "series": [1] }],
        "total": [0, 0, 1, 0, 2],
    }));
    let o = run(&["--format", "json", "--check-invariants"], &[f.path()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = json_result(&o);
    assert_eq!(r["text"], json!("t^2 + 2t^4"));
    assert_eq!(r["perfect"], json!(true));
}

#[test]
fn ring_mode_matches_projective_plane() {
    let f = problem(&json!({
        "mode": "ring",
        "group": { "rank": 2, "positive_roots": [["1", "-1"]], "weyl_generators": [{ "perm": [1, 0] }], "weyl_order": 2 },
        "ring": { "variables": 2, "relations": [[term("1", &[3, 0])], [term("1", &[0, 3])]] },
    }));
    let o = run(&["--format", "json", "--check-invariants"], &[f.path()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = json_result(&o);
    assert_eq!(r["text"], json!("1 + t^2 + t^4"));
    assert_eq!(r["invariant_dims"], json!([1, 1, 2, 1, 1]));
}

#[test]
fn betti_h_subtracts_residual_torus() {
    let f = problem(&json!({ "mode": "betti_H", "dims": { "dim_x": 8, "dim_u": 3, "dim_zmin": 0, "dim_residual": 1 } }));
    assert_eq!(stdout(&run(&[], &[f.path()])), "1 + t^2 + t^4 + t^6");
}

#[test]
fn moment_check_warns_on_mismatch() {
    let tau = std::f64::consts::TAU;
    let diag = json!([[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, tau]]]);
    let f = problem(&json!({
        "mode": "flag", "k": 1, "n": 2, "phi": [term("1", &[1])],
        "fixed_points": [
            { "name": "a", "normal_weights": [{ "form": [1] }], "lambda_weight": "0" },
            { "name": "b", "normal_weights": [{ "form": [-1] }], "lambda_weight": "5" },
        ],
        "moment_samples": [
            { "point": [[1.0, 0.0], [0.0, 0.0]], "matrix": diag, "fixed_point": "a", "tangent": [[0.0, 0.0], [0.3, 0.1]] },
            { "point": [[0.0, 0.0], [1.0, 0.0]], "matrix": diag, "fixed_point": "b" },
        ],
    }));
    let o = run(&["--check-moment"], &[f.path()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("moment_samples[1]") && !err.contains("moment_samples[0]"), "{err}");
}

#[test]
fn out_dir_receives_rendered_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().env("NGIT_OUT_DIR", dir.path()).arg(sample("flag.json")).output().unwrap();
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(dir.path().join("flag.txt")).unwrap().trim(), "-1");
}
