//! End-to-end checks of the command-line binary: exit codes, output
//! formats, and the JSON report contract.

use std::io::Write;
use std::process::Command;

fn satlift(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_satlift"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn corpus_succeeds_with_stable_order() {
    let out = satlift(&["corpus"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let order: Vec<usize> = [
        "pattern: alt-cable-3",
        "pattern: alt-cable-5",
        "pattern: cable-2-1",
        "pattern: whitehead",
    ]
    .iter()
    .map(|k| text.find(k).unwrap_or_else(|| panic!("missing {k}")))
    .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]), "output order unstable");
    assert!(text.contains("NOT a pseudo-homomorphism"));
}

#[test]
fn analyze_json_round_trips() {
    let out = satlift(&["analyze", "builtin:whitehead", "--format", "json"]);
    assert!(out.status.success());
    let report: satlift::report::Report =
        serde_json::from_slice(&out.stdout).expect("valid report JSON");
    assert_eq!(report.pattern, "whitehead");
    let again = serde_json::to_string(&report).unwrap();
    let back: satlift::report::Report = serde_json::from_str(&again).unwrap();
    assert_eq!(report, back);
}

#[test]
fn parse_errors_exit_two() {
    let out = satlift(&["analyze", "builtin:no-such-pattern"]);
    assert_eq!(out.status.code(), Some(2));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "{{ not json").unwrap();
    let out = satlift(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn consistency_errors_exit_three() {
    // Inconsistent user cover data: framings violating the identity.
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{
            "name": "bad",
            "word": "A[+,+]: x(1,+)",
            "cover_data": {{
                "2": {{
                    "w": 2,
                    "ambient": "TrivialS3",
                    "lk": [["0","1"],["1","0"]],
                    "fr": ["5","5"],
                    "n": 1
                }}
            }}
        }}"#
    )
    .unwrap();
    let out = satlift(&["analyze", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    // Explicitly requested inadmissible degree.
    let out = satlift(&["analyze", "builtin:cable-3-1", "--q", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dinv_prints_exact_rationals() {
    let out = satlift(&["dinv", "lens", "2", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1/4"));
    assert!(text.contains("-1/4"));

    let out = satlift(&["dinv", "surgery", "-12", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("= -6"));

    let out = satlift(&["dinv", "zk", "5", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("-4"));
    assert!(text.contains("k = 4"));
}

#[test]
fn reduce_emits_certificate() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "-2 2\n2 -2").unwrap();
    let out = satlift(&["reduce", f.path().to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let cert: satlift::pipeline::SerializableCobordism =
        serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert.two_handle_count, 1);
    assert_eq!(cert.moves, vec![(0, 1)]);

    // A non-admissible matrix is a consistency error.
    let mut g = tempfile::NamedTempFile::new().unwrap();
    writeln!(g, "0 1\n1 0").unwrap();
    let out = satlift(&["reduce", g.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}
