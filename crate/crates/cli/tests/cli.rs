use std::path::PathBuf;
use std::process::{Command, Output};

fn milnor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milnor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("milnor-cli-{}-{name}", std::process::id()))
}

#[test]
fn hilbert_rows() {
    let o = milnor(&[
        "hilbert", "--preset", "f1", "--range", "3..12", "--format", "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("mu_k,1,3,6,10,12,12,11,11,11,11"), "{text}");
    assert!(text.contains("mu'_k,0,0,0,0,1,1,0,0,0,0"), "{text}");
}

#[test]
fn ss_table_json() {
    let o = milnor(&[
        "ss-table",
        "--poly",
        "x^3+y^3+z^3",
        "--range",
        "3..9",
        "--pages",
        "3",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn spectra() {
    let o = milnor(&["spectrum", "qh", "--weights", "1/5,1/4"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("{9/20, 13/20,"));
    let o = milnor(&[
        "spectrum",
        "join",
        "--left",
        "1/5,2/5,3/5,4/5",
        "--right",
        "1/4,1/2,3/4",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().map(Vec::len), Some(12), "{v}");
    assert!(milnor(&["spectrum", "puiseux", "--help"]).status.success());
}

#[test]
fn vfilt_and_local() {
    let o = milnor(&["vfilt", "--alpha", "4/5", "--alpha", "9/20"]);
    assert_eq!(stdout(&o), "Gr_V^4/5 vanishes\nGr_V^9/20 is nonzero\n");
    let o = milnor(&[
        "local",
        "--poly",
        "x^5+y^4*z+x^4*y",
        "--point",
        "0:0:1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["mu"].as_u64(), v["tau"].as_u64()), (Some(12), Some(11)));
    let bad = milnor(&["local", "--poly", "x^5+y^4*z+x^4*y", "--point", "1:0:0"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}

#[test]
fn verify_exit_codes() {
    let out = scratch("report.json");
    let o = milnor(&[
        "verify",
        "--preset",
        "f1",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let checks = v.as_array().unwrap();
    assert!(checks
        .iter()
        .any(|c| c["name"] == "pole_spectrum" && c["status"] == "pass"));
    std::fs::remove_file(&out).unwrap();

    assert_eq!(milnor(&["verify", "--preset", "f9"]).status.code(), Some(1));
    assert_eq!(
        milnor(&["verify", "--poly", "x^2*y"]).status.code(),
        Some(1)
    );

    let fixture = scratch("b.json");
    std::fs::write(&fixture, r#"{"roots":[{"num":3,"den":5,"mult":1}]}"#).unwrap();
    let o = milnor(&[
        "verify",
        "--poly",
        "x^3+y^3+z^3",
        "--fixture",
        fixture.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    std::fs::write(
        &fixture,
        r#"{"roots":[{"num":3,"den":5,"mult":1,"extra":0}]}"#,
    )
    .unwrap();
    let o = milnor(&[
        "verify",
        "--poly",
        "x^3+y^3+z^3",
        "--fixture",
        fixture.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_file(&fixture).unwrap();
}
