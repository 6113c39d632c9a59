use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

struct Run {
    code: i32,
    records: Vec<Value>,
    stderr: String,
}

fn stratcat(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_stratcat")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8");
    let records = if args.contains(&"--pretty") {
        Vec::new()
    } else {
        stdout.lines().map(|l| serde_json::from_str(l).expect("one JSON record per line")).collect()
    };
    Run { code: out.status.code().expect("exit code"), records, stderr: String::from_utf8_lossy(&out.stderr).into() }
}

/// Records with the timing field removed.
fn stable(records: &[Value]) -> Vec<Value> {
    records
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.as_object_mut().unwrap().remove("elapsed_ms");
            r
        })
        .collect()
}

#[test]
fn record_shape() {
    let run = stratcat(&["stratify", &fixture("russell.fml")]);
    assert_eq!(run.code, 0);
    assert_eq!(run.records.len(), 2);
    for r in &run.records {
        assert_eq!(r["subcommand"], "stratify");
        assert_eq!(r["status"], "ok");
        assert!(r["elapsed_ms"].as_f64().unwrap() >= 0.0);
        assert!(r["input"].as_str().unwrap().ends_with(".fml:2") || r["input"].as_str().unwrap().ends_with(".fml:3"));
    }
}

#[test]
fn russell_is_unstratified_and_universal_set_is_not() {
    let run = stratcat(&["stratify", &fixture("russell.fml")]);
    let russell = &run.records[0]["payload"];
    assert_eq!(russell["verdict"], "unstratified");
    assert_eq!(russell["cycle"]["sum"], 1);
    let universal = &run.records[1]["payload"];
    assert_eq!(universal["verdict"], "stratified");
    assert_eq!(universal["types"]["y"].as_i64().unwrap(), universal["types"]["x"].as_i64().unwrap() + 1);
}

#[test]
fn two_parallel_arrows_are_not_a_preorder() {
    let run = stratcat(&["cat", "freyd", &fixture("two-arrows.json")]);
    assert_eq!(run.code, 0);
    let p = &run.records[0]["payload"];
    assert_eq!(p["verdict"], "not-preorder-missing-product");
    assert_eq!(p["diagram"].as_array().unwrap().len(), 4);
}

#[test]
fn discrete_category_is_a_preorder() {
    let run = stratcat(&["cat", "freyd", &fixture("discrete.json")]);
    assert_eq!(run.code, 0);
    assert_eq!(run.records[0]["payload"]["verdict"], "preorder");
}

#[test]
fn reflection_output_reparses() {
    let run = stratcat(&["transform", "reflect", &fixture("phi.fml")]);
    assert_eq!(run.code, 0);
    let dir = std::env::temp_dir().join(format!("stratcat-reflect-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.fml");
    let lines: Vec<String> =
        run.records.iter().map(|r| r["payload"]["output"].as_str().unwrap().to_string()).collect();
    std::fs::write(&path, lines.join("\n")).unwrap();
    let again = stratcat(&["parse", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(again.code, 0);
    let printed: Vec<&str> = again.records.iter().map(|r| r["payload"]["formula"].as_str().unwrap()).collect();
    assert_eq!(printed, lines);
}

#[test]
fn usage_errors_exit_2() {
    let run = stratcat(&["frobnicate"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("frobnicate"));
    assert_eq!(stratcat(&["--dialect", "klingon", "parse"]).code, 2);
}

#[test]
fn help_exits_0() {
    let out = Command::new(env!("CARGO_BIN_EXE_stratcat")).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn syntax_error_is_malformed() {
    let run = stratcat(&["stratify", &fixture("bad.fml")]);
    assert_eq!(run.code, 3);
    assert_eq!(run.records[0]["status"], "ok");
    let bad = &run.records[1];
    assert_eq!(bad["status"], "malformed-input");
    assert!(bad["input"].as_str().unwrap().ends_with("bad.fml:2"));
    assert!(bad.get("payload").is_none());
    assert!(bad["error"].as_str().unwrap().contains("syntax"));
}

#[test]
fn missing_file_is_malformed() {
    let run = stratcat(&["parse", &fixture("no-such-file.fml")]);
    assert_eq!(run.code, 3);
    assert_eq!(run.records[0]["status"], "malformed-input");
}

#[test]
fn oversized_hf_level_hits_cap() {
    let run = stratcat(&["model", "build-vn", "6"]);
    assert_eq!(run.code, 4);
    assert_eq!(run.records[0]["status"], "feasibility-cap");
}

#[test]
fn hf_levels_have_tower_sizes() {
    for (n, size) in [(0, 0), (1, 1), (2, 2), (3, 4), (4, 16)] {
        let run = stratcat(&["model", "build-vn", &n.to_string()]);
        assert_eq!(run.code, 0);
        assert_eq!(run.records[0]["payload"]["size"], size);
    }
}

#[test]
fn morphism_cap_is_enforced() {
    let run = stratcat(&["cat", "validate", "--max-morphisms", "5", &fixture("order.json")]);
    assert_eq!(run.code, 4);
    assert_eq!(run.records[0]["status"], "feasibility-cap");
    assert_eq!(stratcat(&["cat", "validate", &fixture("order.json")]).code, 0);
}

#[test]
fn freyd_refuses_more_than_five_morphisms() {
    let run = stratcat(&["cat", "freyd", &fixture("order.json")]);
    assert_eq!(run.code, 4);
    assert!(run.records[0]["error"].as_str().unwrap().contains("6 morphisms"));
}

#[test]
fn large_rel_diagram_hits_cap() {
    let run = stratcat(&["cat", "rel-product", &fixture("huge.json")]);
    assert_eq!(run.code, 4);
    assert_eq!(run.records[0]["status"], "feasibility-cap");
}

#[test]
fn malformed_outranks_cap() {
    let run = stratcat(&["cat", "rel-product", &fixture("huge.json"), &fixture("no-such-file.json")]);
    assert_eq!(run.code, 3);
    assert_eq!(run.records.len(), 2);
}

#[test]
fn rel_and_set_constructions_are_universal() {
    for verb in ["rel-product", "rel-coproduct", "set-coproduct"] {
        for file in ["two-singletons.json", "three-tags.json"] {
            let run = stratcat(&["cat", verb, &fixture(file)]);
            assert_eq!(run.code, 0, "{verb} {file}");
            let p = &run.records[0]["payload"];
            assert_eq!(p["universal"], true, "{verb} {file}");
            assert!(p["checks"].as_array().unwrap().len() > 1);
        }
    }
}

#[test]
fn rel_product_is_the_disjoint_union() {
    let run = stratcat(&["cat", "rel-product", &fixture("two-singletons.json")]);
    let p = &run.records[0]["payload"];
    assert_eq!(p["apex"], serde_json::json!(["<0,0>", "<1,1>"]));
    assert_eq!(p["legs"][0]["pairs"], serde_json::json!([["<0,0>", "0"]]));
}

#[test]
fn limit_of_a_pair_in_a_total_order_is_the_larger_object() {
    let run = stratcat(&["cat", "limits", &fixture("pair-in-order.json")]);
    assert_eq!(run.code, 0);
    let limits = run.records[0]["payload"]["limits"].as_array().unwrap();
    assert_eq!(limits.len(), 1);
    assert_eq!(limits[0]["apex"], "2");
}

#[test]
fn validate_reports_missing_composite() {
    let run = stratcat(&["cat", "validate", &fixture("broken-category.json"), &fixture("monoid.json")]);
    assert_eq!(run.code, 0);
    let broken = &run.records[0]["payload"];
    assert_eq!(broken["valid"], false);
    assert_eq!(broken["violations"][0]["law"], "missing-composite");
    assert_eq!(run.records[1]["payload"]["valid"], true);
}

#[test]
fn yoneda_on_a_monoid_action() {
    let run = stratcat(&["cat", "yoneda", &fixture("monoid-action.json")]);
    assert_eq!(run.code, 0);
    let report = &run.records[0]["payload"]["reports"][0];
    assert_eq!(report["holds"], true);
    assert_eq!(report["transformations"], 3);
    assert_eq!(report["elements"], 3);
}

#[test]
fn yoneda_sweep_over_a_monoid() {
    let run = stratcat(&["cat", "yoneda", "--max-size", "3", &fixture("monoid.json")]);
    assert_eq!(run.code, 0);
    let p = &run.records[0]["payload"];
    // actions of {1, e} with e idempotent on sets of size 0..=3: 1 + 1 + 3 + 10
    assert_eq!(p["functors"], 15);
    assert_eq!(p["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn comprehension_rejects_unstratified_payload() {
    let run = stratcat(&["--dialect", "lstar", "transform", "comprehension", &fixture("comprehension.lstar")]);
    assert_eq!(run.code, 3);
    assert_eq!(run.records[0]["status"], "ok");
    let out = run.records[0]["payload"]["output"].as_str().unwrap();
    assert!(out.starts_with("exists Y. forall X. (X in Y <->"));
    assert_eq!(run.records[1]["status"], "malformed-input");
}

#[test]
fn cantor_on_small_hf_level() {
    let run = stratcat(&["model", "cantor", "--vn", "3"]);
    assert_eq!(run.code, 0);
    for r in &run.records {
        let p = &r["payload"];
        assert!(p["singletons"].as_u64().unwrap() < p["subsets"].as_u64().unwrap());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["stratify", "--oracle", "--random", "30", "--seed", "11"];
    let a = stratcat(&args);
    let b = stratcat(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.records.len(), 30);
    assert_eq!(stable(&a.records), stable(&b.records));
    for r in &a.records {
        assert_eq!(r["payload"]["agrees"], true);
    }
    let other = stratcat(&["stratify", "--random", "30", "--seed", "12"]);
    assert_ne!(stable(&a.records), stable(&other.records));
}

#[test]
fn jobs_do_not_change_output() {
    let files = [fixture("russell.fml"), fixture("phi.fml"), fixture("bad.fml")];
    let mut one = vec!["stratify"];
    one.extend(files.iter().map(String::as_str));
    let mut many = vec!["--jobs", "3"];
    many.extend(&one);
    let (a, b) = (stratcat(&one), stratcat(&many));
    assert_eq!(a.code, b.code);
    assert_eq!(stable(&a.records), stable(&b.records));
}

#[test]
fn pretty_output_is_readable() {
    let out = Command::new(env!("CARGO_BIN_EXE_stratcat"))
        .args(["--pretty", "cat", "validate", &fixture("monoid.json")])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(&format!("{} [cat validate] ok", fixture("monoid.json"))));
    assert!(text.contains("\"valid\": true"));
}
