use gcrossed_core::builders::{from_crossed_module, trivial_grading, vect, CrossedModule};
use gcrossed_core::format::{category_to_json, crossed_module_to_json};
use gcrossed_core::FiniteGroup;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gcrossed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn gcrossed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcrossed")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn shipped_files_validate() {
    for f in [
        "fibonacci.json",
        "pointed_z3.json",
        "boundary_5simplex.json",
        "z3_by_z2.json",
        "coboundary_z2xz2.json",
    ] {
        let o = gcrossed(&["validate", path(&data(f))]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
    }
}

#[test]
fn corrupted_f_symbol_fails_validation() {
    let mut doc: Value =
        serde_json::from_str(&std::fs::read_to_string(data("fibonacci.json")).unwrap()).unwrap();
    let entry = doc["F"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e["indices"] == serde_json::json!([1, 1, 1, 1, 1, 1]))
        .unwrap();
    let re = entry["re"].as_f64().unwrap();
    entry["re"] = (-re).into();
    let bad = scratch("fib-bad.json", &doc.to_string());
    let o = gcrossed(&["validate", path(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("pentagon"));

    let o = gcrossed(&["validate", "--json", path(&bad)]);
    let reports = json(&o);
    let pentagon =
        reports[0]["reports"].as_array().unwrap().iter().find(|r| r["name"] == "pentagon").unwrap();
    assert!(pentagon["max_residual"].as_f64().unwrap() > 0.1);

    let o = gcrossed(&["compute", path(&bad)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn compute_known_values() {
    let cases = [
        ("vect.json", category_to_json(&vect()), 1.0),
        (
            "dz2.json",
            category_to_json(&from_crossed_module(&CrossedModule::discrete(FiniteGroup::cyclic(2))).unwrap()),
            2.0,
        ),
        ("vect-z2.json", category_to_json(&trivial_grading(&vect(), &FiniteGroup::cyclic(2)).unwrap()), 0.5),
    ];
    for (name, text, want) in cases {
        let cat = scratch(name, &text);
        let o = gcrossed(&["compute", path(&cat), path(&data("boundary_5simplex.json")), "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let r = json(&o);
        assert_eq!(r["schema"], "gcrossed.result.v1");
        assert!((r["value_re"].as_f64().unwrap() - want).abs() < 1e-12, "{name}");
        assert!(r["value_im"].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn twisted_compute_with_coboundary() {
    let cocycle = data("coboundary_z2xz2.json");
    let o = gcrossed(&["compute", "--json", "--cocycle", path(&cocycle), path(&data("vect_z2xz2.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!((json(&o)["value_re"].as_f64().unwrap() - 0.25).abs() < 1e-9);
}

#[test]
fn twist_on_a_different_group_is_refused() {
    let o = gcrossed(&[
        "compute",
        path(&data("pointed_z3.json")),
        "--cocycle",
        path(&data("coboundary_z2xz2.json")),
    ]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn guard_exit_code() {
    let o = gcrossed(&[
        "compute",
        path(&data("pointed_z3.json")),
        path(&data("subdivided.json")),
        "--max-colorings",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit exceeded"));
}

#[test]
fn parse_errors() {
    let o = gcrossed(&["validate", path(&scratch("unknown.json", r#"{"schema": "gcrossed.category.v9"}"#))]);
    assert_eq!(o.status.code(), Some(2));
    let o = gcrossed(&["compute", path(&scratch("broken.json", "{"))]);
    assert_eq!(o.status.code(), Some(2));
    let o = gcrossed(&["compute", "/nonexistent/cat.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invariance_needs_a_seed() {
    let o = gcrossed(&["invariance", path(&data("pointed_z3.json"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invariance_suite_for_vect_is_exact() {
    let vect = scratch("vect-inv.json", &category_to_json(&vect()));
    let o = gcrossed(&["invariance", path(&vect), "--seed", "11", "--permutations", "4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["ok"], true);
    let cases = r["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 4 + 6);
    assert!(cases.iter().all(|c| c["deviation"].as_f64().unwrap() == 0.0));
}

#[test]
fn invariance_reports_are_reproducible() {
    let run = || {
        let mut r = json(&gcrossed(&[
            "invariance",
            path(&data("pointed_z3.json")),
            "--seed",
            "5",
            "--permutations",
            "3",
            "--max-moves",
            "1",
            "--json",
        ]));
        r["cases"].as_array_mut().unwrap().iter_mut().for_each(|c| c["deviation"] = 0.into());
        r["cases"].to_string()
    };
    assert_eq!(run(), run());
}

#[test]
fn crossed_module_subdivision_keeps_three_halves() {
    let cm = gcrossed_core::format::crossed_module_from_json(
        &std::fs::read_to_string(data("z3_by_z2.json")).unwrap(),
    )
    .unwrap();
    let cat = scratch("z3z2.json", &category_to_json(&from_crossed_module(&cm).unwrap()));
    let o = gcrossed(&[
        "invariance",
        path(&cat),
        "--seed",
        "1",
        "--permutations",
        "1",
        "--max-moves",
        "1",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert!((r["base_re"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    for c in r["cases"].as_array().unwrap() {
        assert!((c["re"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    }
}

#[test]
fn exact_counts() {
    let o = gcrossed(&["dw", "S3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1/6"));
    assert_eq!(json(&gcrossed(&["dw", "Z2xZ3", "--json"]))["value"], "1/6");
    assert_eq!(gcrossed(&["dw", "Q8"]).status.code(), Some(2));

    let o = gcrossed(&["yetter-count", path(&data("z3_by_z2.json")), "--json"]);
    let r = json(&o);
    assert_eq!(r["count"], "1889568");
    assert_eq!(r["value"], "3/2");
    let dz2 =
        scratch("dz2-cm.json", &crossed_module_to_json(&CrossedModule::discrete(FiniteGroup::cyclic(2))));
    assert_eq!(json(&gcrossed(&["yetter-count", path(&dz2), "--json"]))["value"], "2");
}
