use std::process::{Command, Output};

use serde_json::Value;

fn podcong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_podcong"))
        .args(args)
        .env_remove("PODCONG_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn reports(out: &Output) -> Vec<Value> {
    stdout(out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn verify_relation_json() {
    let out = podcong(&[
        "verify", "--family", "thm1", "--n-max", "10000", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = &reports(&out)[0];
    assert_eq!(r["status"], "verified");
    assert_eq!(r["checked"], 10001);
    let line = stdout(&out);
    let fields = [
        "family",
        "instance",
        "modulus",
        "n_max",
        "checked",
        "status",
        "counterexamples",
        "elapsed_ms",
    ];
    let positions: Vec<usize> = fields
        .iter()
        .map(|f| line.find(&format!("\"{f}\":")).unwrap())
        .collect();
    assert!(
        positions.windows(2).all(|w| w[0] < w[1]),
        "field order in {line}"
    );
    assert_eq!(r.as_object().unwrap().len(), fields.len());
}

#[test]
fn verify_fixed_progressions() {
    let out = podcong(&["verify", "--family", "rs567", "--n-max", "300"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &reports(&out)[0];
    assert_eq!(r["status"], "verified");
    // both progressions, n = 0..=300 each
    assert_eq!(r["checked"], 602);
}

#[test]
fn falsified_progression_exits_one() {
    let out = podcong(&["verify", "--progression", "3,0,3", "--n-max", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let r = &reports(&out)[0];
    assert_eq!(r["status"], "falsified");
    let ns: Vec<u64> = r["counterexamples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["n"].as_u64().unwrap())
        .collect();
    assert!(ns.contains(&1), "{ns:?}");
}

#[test]
fn unknown_family_is_usage_error() {
    let out = podcong(&["verify", "--family", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn parametric_instance_with_progression_n() {
    let out = podcong(&[
        "verify",
        "--family",
        "thm5",
        "--p",
        "19",
        "--param-n",
        "8n+1",
        "--n-max",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = &reports(&out)[0];
    assert!(r["instance"].as_str().unwrap().contains("pod(34295n+4287)"));
    assert_eq!(r["checked"], 10);
}

#[test]
fn side_condition_failure_is_usage_error() {
    let out = podcong(&["verify", "--family", "thm5", "--p", "19", "--param-n", "57"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p | N"));
}

#[test]
fn table_rows() {
    let out = podcong(&["table", "--kind", "pod", "--limit", "8", "--modulus", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n,value"));
    assert_eq!(text.lines().last(), Some("8,10"));

    let out = podcong(&[
        "table",
        "--kind",
        "r",
        "--k",
        "3",
        "--limit",
        "9",
        "--modulus",
        "0",
    ]);
    assert_eq!(stdout(&out).lines().last(), Some("9,30"));

    let out = podcong(&["table", "--kind", "pod", "--limit", "5", "--modulus", "5"]);
    let residues: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(residues, ["1", "1", "1", "2", "3", "4"]);

    let out = podcong(&["table", "--kind", "r", "--k", "9", "--limit", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn replay_identities() {
    let out = podcong(&[
        "replay",
        "--identity",
        "palpha",
        "--p",
        "3",
        "--alpha",
        "2",
        "--trunc",
        "500",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = podcong(&["replay", "--identity", "thm3-chain", "--trunc", "500"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(reports(&out).len() > 1);
    assert!(reports(&out).iter().all(|r| r["status"] == "verified"));
    let out = podcong(&["replay", "--identity", "palpha", "--p", "4", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_finds_known_progressions() {
    let out = podcong(&[
        "search",
        "--modulus",
        "5",
        "--step-max",
        "135",
        "--n-max",
        "200",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for row in ["135,8,", "135,107,", "135,116,"] {
        assert!(text.lines().any(|l| l.starts_with(row)), "missing {row}");
    }
    let out = podcong(&[
        "search",
        "--modulus",
        "3",
        "--step-max",
        "27",
        "--n-max",
        "200",
        "--format",
        "csv",
    ]);
    assert!(stdout(&out).lines().any(|l| l.starts_with("27,26,")));
}

#[test]
fn search_candidates_reverify() {
    let out = podcong(&[
        "search",
        "--modulus",
        "9",
        "--step-max",
        "8",
        "--n-max",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let again = podcong(&[
        "search",
        "--modulus",
        "9",
        "--step-max",
        "8",
        "--n-max",
        "50",
    ]);
    assert_eq!(out.stdout, again.stdout);
    for c in reports(&out) {
        let spec = format!("{},{},9", c["a"], c["b"]);
        let check = podcong(&["verify", "--progression", &spec, "--n-max", "50"]);
        assert_eq!(check.status.code(), Some(0), "{spec}");
    }
}

#[test]
fn search_shortfall_is_error() {
    let out = podcong(&[
        "search",
        "--modulus",
        "5",
        "--step-max",
        "135",
        "--n-max",
        "200",
        "--limit",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_independent_of_jobs() {
    let run = |jobs: &str| {
        podcong(&[
            "--jobs",
            jobs,
            "--no-timing",
            "verify",
            "--family",
            "thm1",
            "--n-max",
            "10000",
        ])
    };
    let (one, four) = (run("1"), run("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert!(stdout(&one).contains("\"elapsed_ms\":0"));
}

#[test]
fn csv_and_text_reports() {
    let out = podcong(&[
        "verify",
        "--progression",
        "3,0,3",
        "--n-max",
        "10",
        "--format",
        "csv",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("family,instance,modulus,n_max,checked,status,counterexamples,elapsed_ms")
    );
    assert!(lines.next().unwrap().contains(",falsified,"));
    let out = podcong(&[
        "verify",
        "--progression",
        "3,0,3",
        "--n-max",
        "10",
        "--format",
        "text",
    ]);
    assert!(stdout(&out).starts_with("falsified"));
}
