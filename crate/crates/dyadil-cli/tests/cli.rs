//! End-to-end exercises of the command-line surface: exit codes, emitted
//! formats, and determinism.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dyadil"))
}

#[test]
fn invalid_configs_exit_2() {
    let cases: &[&[&str]] = &[
        &["verify", "--structure", "nonsense"],
        &["verify", "--structure", "valued:0"],
        &["verify", "--structure", "valued:3/4"],
        &["ifs", "--system", "sierpinski"],
        &["real", "--example", "euclidean", "--probe", "a5"],
        &["real", "--example", "euclidean", "--probe", "a3", "--eps-grid", "junk"],
        &["orbit", "--structure", "additive", "--x0", "(0)", "--x1", "01(0)"],
        &["replay", "--file", "/nonexistent/witness.json"],
    ];
    for args in cases {
        let out = bin().args(*args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    // Unknown flags go through clap, which also exits 2.
    let out = bin().args(["verify", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ifs_emits_exact_interval_rows() {
    let out = bin()
        .args(["ifs", "--system", "cantor", "--iterations", "0", "--emit", "-"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0,0,1,1,1\n");

    let out = bin()
        .args(["ifs", "--system", "cantor", "--iterations", "3", "--emit", "-"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().all(|l| l.starts_with("3,")));
}

#[test]
fn real_probe_emits_csv_and_verdict() {
    let dir = std::env::temp_dir().join("dyadil-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("trace.csv");
    let out = bin()
        .args([
            "real",
            "--example",
            "log_shear",
            "--probe",
            "a3",
            "--eps-grid",
            "2^-1..2^-24",
            "--emit",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let verdict = String::from_utf8_lossy(&out.stdout);
    assert!(verdict.contains("\"diverging\""), "{verdict}");
    let trace = std::fs::read_to_string(&csv).unwrap();
    assert!(trace.starts_with("eps,value\n"));
    assert_eq!(trace.lines().count(), 25);
}

#[test]
fn tangent_on_a4_violator_exits_1() {
    let out = bin()
        .args([
            "tangent",
            "--structure",
            "mutant:lag",
            "--point",
            "(0)",
            "--u",
            "1(0)",
            "--v",
            "01(0)",
            "--depth",
            "8",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("no stabilization"), "{text}");
}

#[test]
fn wcodec_roundtrip_passes_for_bundled_structures() {
    for sel in ["additive", "dihedral"] {
        let out = bin()
            .args([
                "wcodec",
                "--structure",
                sel,
                "--decode-depth",
                "3",
                "--samples",
                "60",
                "--depth",
                "10",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{sel}");
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("\"roundtrip_pass\": true"), "{sel}: {text}");
        assert!(text.contains("\"portrait\""));
    }
}

#[test]
fn distinguish_reports_are_deterministic() {
    let run = || {
        bin()
            .args([
                "distinguish",
                "--a",
                "additive",
                "--b",
                "dihedral",
                "--depth",
                "8",
                "--samples",
                "40",
                "--seed",
                "11",
            ])
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(1));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn verify_accepts_wfile_structures() {
    let dir = std::env::temp_dir().join("dyadil-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.json");
    std::fs::write(
        &path,
        r#"{"default": {"kind": "identity"},
            "entries": [{"base_prefix": "1", "isometry": {"kind": "xor", "word": "(10)"}}]}"#,
    )
    .unwrap();
    let out = bin()
        .args([
            "verify",
            "--structure",
            &format!("wfile:{}", path.display()),
            "--depth",
            "8",
            "--samples",
            "40",
        ])
        .output()
        .unwrap();
    // A locally-constant W family gives a weak structure; A1-A3 must hold.
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"A1\": true"), "{text}");
    assert!(text.contains("\"A2\": true"), "{text}");
    assert!(text.contains("\"A3\": true"), "{text}");
}
