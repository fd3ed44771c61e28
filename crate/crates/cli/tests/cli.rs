use std::path::Path;
use std::process::{Command, Output};

use ahecke::cocenter::CocenterVector;
use ahecke::engine::Engine;
use serde_json::Value;

fn ahecke(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ahecke"));
    cmd.args(args).env_remove("AHECKE_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("AHECKE_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn classpoly_matches_library() {
    let o = ahecke(
        &[
            "classpoly",
            "--datum",
            "preset:GL3",
            "--elt",
            "t[1,0,0]*(1 2)",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let eng = Engine::load("GL3").unwrap();
    let e = eng.parse("t[1,0,0]*(1 2)").unwrap();
    let lib = eng.cocenter_json(&CocenterVector::from_polys(&eng.class_polynomials(&e)));
    assert_eq!(json(&o), serde_json::to_value(lib).unwrap());
}

#[test]
fn gl8_length() {
    let o = ahecke(
        &[
            "length",
            "--datum",
            "preset:GL8",
            "--elt",
            "t[1,1,1,1,1,0,0,0]*(1 6 3)(2 7 4 8 5)",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["length"], 1);
}

#[test]
fn verify_c_scan_passes() {
    let o = ahecke(
        &["verify-c", "--datum", "preset:GL3", "--max-len", "6"],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["checked"].as_u64().unwrap() > 0);
    assert_eq!(v["failed"], 0);
}

#[test]
fn single_triple_needs_alcove_element() {
    // with J empty the finite part of an alcove element must be trivial
    let o = ahecke(
        &[
            "verify-c", "--datum", "GL3", "--elt", "(1 2)", "--j", "", "--z", "1",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "precondition");
}

#[test]
fn exit_codes() {
    assert_eq!(
        ahecke(&["length", "--elt", "1"], None).status.code(),
        Some(1)
    );
    assert_eq!(
        ahecke(&["length", "--datum", "GL3", "--elt", "q7"], None)
            .status
            .code(),
        Some(1)
    );
    assert_eq!(ahecke(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(
        ahecke(&["cache", "gc", "--datum", "GL3"], None)
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ahecke(
            &["length", "--datum", "GL3", "--elt", "1", "--format", "csv"],
            None
        )
        .status
        .code(),
        Some(1)
    );

    // a datum whose pairing is not perfect fails validation
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"bad","rank":1,"roots":[[2],[-2]],"coroots":[[1],[-1]],"pairing":[[2]],"simples":[0]}"#,
    )
    .unwrap();
    let o = ahecke(&["validate", "--datum", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["valid"], false);
}

#[test]
fn warm_cache_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify-a", "--datum", "preset:C2", "--max-len", "4"];
    let cold = ahecke(&args, Some(dir.path()));
    let warm = ahecke(&args, Some(dir.path()));
    let uncached = ahecke(&[&args[..], &["--no-cache"]].concat(), Some(dir.path()));
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, uncached.stdout);
    assert!(warm.stderr.is_empty());
}

#[test]
fn corrupt_cache_entries_are_reported_and_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["classpoly", "--datum", "GL3", "--elt", "t[2,0,-1]*(1 3)"];
    let cold = ahecke(&args, Some(dir.path()));
    let file = std::fs::read_dir(dir.path())
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let text = std::fs::read_to_string(&file).unwrap();
    // tamper with every coefficient list
    std::fs::write(&file, text.replace("[1", "[7")).unwrap();
    let warm = ahecke(&args, Some(dir.path()));
    assert_eq!(cold.stdout, warm.stdout);
    let warn: Value = serde_json::from_slice(&warm.stderr).unwrap();
    assert!(warn["stats"]["corrupt"].as_u64().unwrap() > 0);

    let gc = ahecke(&["cache", "gc", "--datum", "GL3"], Some(dir.path()));
    assert_eq!(gc.status.code(), Some(0));
    let after = ahecke(&["cache", "gc", "--datum", "GL3"], Some(dir.path()));
    assert_eq!(json(&after)["stats"]["corrupt"], 0);
}

#[test]
fn adlv_dim_csv_columns() {
    let o = ahecke(
        &[
            "adlv-dim",
            "--datum",
            "GL3",
            "--elt",
            "t[2,0,-1]*(1 3)",
            "--format",
            "csv",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("element,nu_bar,kappa,dimension,contributing_classes")
    );
    assert!(lines.count() >= 1);
}

#[test]
fn adlv_empty_kappa_mismatch() {
    // t^λ with λ regular dominant is a (∅, 1)-alcove element
    let o = ahecke(
        &[
            "adlv-empty",
            "--datum",
            "GL3",
            "--elt",
            "t[2,1,0]",
            "--j",
            "",
            "--z",
            "1",
            "--nu",
            "2,1,0",
            "--kappa",
            "0,0,0",
        ],
        None,
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(json(&o)["verdict"], "empty");
}

#[test]
fn seeded_pivot_check() {
    let args = [
        "classpoly",
        "--datum",
        "C2",
        "--elt",
        "t[2,1]*s1*s2*s1",
        "--check-pivots",
        "8",
        "--seed",
        "11",
    ];
    let o = ahecke(&args, None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pivot_agree"], 8);
}
