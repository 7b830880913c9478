use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(rel: &str) -> String {
    root().join("corpus").join(rel).display().to_string()
}

fn gforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gforge"))
        .args(args)
        .env_remove("GFORGE_BOUND_OVERRIDE")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn verdict<'a>(r: &'a Value, check: &str) -> &'a Value {
    r["verdicts"].as_array().unwrap().iter().find(|v| v["check"] == check).unwrap_or_else(|| panic!("no {check}"))
}

#[test]
fn check_g2_passes_with_a_witness_table() {
    let out = gforge(&["check", &corpus("graphs/G2.json")]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(verdict(&r, "condition_PI")["status"], "pass");
    assert_eq!(verdict(&r, "condition_L")["status"], "pass");
    assert!(!verdict(&r, "topologically_free")["detail"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn check_g1_fails_on_loop_a() {
    let out = gforge(&["check", &corpus("graphs/G1.json")]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(verdict(&r, "condition_L")["witness"]["entryless_loops"][0], "a");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&gforge(&["check", "missing.json"])), 64);
    assert_eq!(code(&gforge(&["witness", &corpus("graphs/G2.json"), "Z(v"])), 64);
    assert_eq!(code(&gforge(&["nonsense"])), 64);
    assert_eq!(code(&gforge(&["sgp", "Z_axb", "axb", "--U", "0+2Z ! 1+2Z"])), 64);
    let bad = std::env::temp_dir().join(format!("gforge-bad-{}.json", std::process::id()));
    std::fs::write(&bad, r#"{"vertices": ["v"], "edges": [{"id": "a", "source": "v"}]}"#).unwrap();
    let out = gforge(&["check", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).ok();
    assert_eq!(code(&out), 64);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));
    assert!(out.stdout.is_empty());
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&gforge(&["--help"])), 0);
    assert_eq!(code(&gforge(&["--version"])), 0);
}

#[test]
fn witness_on_g2_and_refusal_on_g1() {
    let out = gforge(&["witness", &corpus("graphs/G2.json"), "Z(v)"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let w = &verdict(&r, "witness[0]")["detail"]["witness"];
    assert_eq!((w["g"].as_str(), w["h"].as_str()), (Some("a"), Some("b")));

    let out = gforge(&["witness", &corpus("graphs/G1.json"), "Z(v)"]);
    assert_eq!(code(&out), 1);
    let clause = verdict(&report(&out), "pure_infiniteness")["witness"]["precondition"].as_str().unwrap().to_string();
    assert!(clause.contains("condition (K)"), "{clause}");
}

#[test]
fn oe_examples() {
    let g2 = corpus("graphs/G2.json");
    for data in ["oe/identity-G2.json", "oe/swap-G2.json"] {
        let out = gforge(&["oe", &g2, &g2, &corpus(data), "--direction", "coe2oe"]);
        assert_eq!(code(&out), 0, "{data}");
        assert_eq!(verdict(&report(&out), "roundtrip")["status"], "pass");
    }
    let g1 = corpus("graphs/G1.json");
    let out = gforge(&["oe", &g1, &g1, &corpus("oe/identity-G1.json"), "--direction", "oe2coe"]);
    assert_eq!(code(&out), 1);
    assert!(verdict(&report(&out), "oe_to_coe")["witness"]["precondition"].as_str().unwrap().contains("(L)"));
}

#[test]
fn sgp_examples() {
    let out = gforge(&["sgp", "F+2", "paradox", "--U", "xP - xxP"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let d = &verdict(&r, "boundary_paradox")["detail"];
    assert_eq!((d["g"].as_str(), d["h"].as_str()), (Some("xyx"), Some("xyy")));

    assert_eq!(code(&gforge(&["sgp", "N^1", "paradox"])), 1);

    let out = gforge(&["sgp", "Z_axb", "axb", "--U", "0+2Z ! 0+6Z"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let d = &verdict(&r, "axb_paradox")["detail"];
    assert_eq!((d["g"].as_str(), d["h"].as_str()), (Some("(0,7)"), Some("(6,7)")));
}

#[test]
fn g0_and_independence_for_the_standard_families() {
    let r = report(&gforge(&["sgp", "N^2", "g0"]));
    assert_eq!(verdict(&r, "g0")["detail"]["G0"], "Z^2");
    let r = report(&gforge(&["sgp", "F+2", "g0"]));
    assert_eq!(verdict(&r, "g0")["detail"]["G0"], "{e}");
    for fam in ["N^2", "F+2"] {
        assert_eq!(code(&gforge(&["sgp", fam, "independence"])), 0, "{fam}");
    }
}

#[test]
fn exhausted_tail_cap_is_inconclusive() {
    let out = Command::new(env!("CARGO_BIN_EXE_gforge"))
        .args(["check", "corpus:two-vertex"])
        .env("GFORGE_BOUND_OVERRIDE", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let v = verdict(&report(&out), "condition_PI").clone();
    assert_eq!(v["status"], "inconclusive");
    assert_eq!(v["bounds"]["vertex count"], 1);
}

#[test]
fn timing_is_opt_in() {
    let plain = report(&gforge(&["check", "corpus:G2"]));
    assert!(plain.get("timing").is_none());
    let timed = report(&gforge(&["check", "corpus:G2", "--timing"]));
    assert!(timed["timing"]["elapsed_ms"].is_number());
}

#[test]
fn text_format_lists_each_check() {
    let out = gforge(&["check", "corpus:G1", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("FAIL") && l.contains("condition_L")));
    assert!(text.ends_with("status: fail\n"));
}

#[test]
fn file_inputs_match_corpus_references() {
    let a = report(&gforge(&["check", &corpus("graphs/G4.json")]));
    let b = report(&gforge(&["check", "corpus:G4"]));
    assert_eq!(a["verdicts"], b["verdicts"]);
}

#[test]
fn exported_corpus_matches_the_checked_in_files() {
    let dir = std::env::temp_dir().join(format!("gforge-export-{}", std::process::id()));
    assert_eq!(code(&gforge(&["corpus", "export", dir.to_str().unwrap()])), 0);
    for sub in ["graphs", "oe"] {
        let mut names: Vec<_> = std::fs::read_dir(dir.join(sub)).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        assert!(!names.is_empty());
        for name in names {
            let fresh = std::fs::read(dir.join(sub).join(&name)).unwrap();
            let kept = std::fs::read(root().join("corpus").join(sub).join(&name)).unwrap();
            assert_eq!(fresh, kept, "{sub}/{}", name.to_string_lossy());
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn corpus_run_passes_and_is_reproducible() {
    let a = gforge(&["corpus", "run"]);
    let b = gforge(&["corpus", "run"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let other_seed = gforge(&["corpus", "run", "--seed", "7"]);
    assert_ne!(a.stdout, other_seed.stdout);
}
