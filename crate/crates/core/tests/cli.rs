//! The `ghost` binary and the stored transcript.

use std::path::PathBuf;
use std::process::{Command, Output};

use redistricting_ghost::experiments::Replay;
use serde_json::Value;

fn ghost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghost"))
        .args(args)
        .output()
        .expect("run ghost")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn transcript() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/crack_n33.jsonl")
}

#[test]
fn stored_transcript_verifies() {
    let replay = Replay::read_from(&transcript()).unwrap();
    let end = replay.verify().unwrap();
    assert!(end.is_terminal());
    assert_eq!(end.outcome().unwrap().b_districts_won, 3);
    assert_eq!(end.full_brick_columns(), 3);
    assert_eq!(replay.resimulate().unwrap().moves, replay.moves);

    let text = std::fs::read_to_string(transcript()).unwrap();
    assert_eq!(Replay::parse(&text).unwrap().to_text(), text);
}

#[test]
fn tampered_transcript_is_rejected() {
    let text = std::fs::read_to_string(transcript()).unwrap();
    let tampered = text.replacen("\"c\":\"brick\"", "\"c\":\"apple\"", 1);
    let verdict = Replay::parse(&tampered).and_then(|r| r.verify());
    assert!(verdict.is_err());
}

#[test]
fn replay_subcommand_reports_footer() {
    let out = ghost(&["replay", "--in", transcript().to_str().unwrap(), "--verify"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["terminal"], true);
    assert_eq!(v["footer"]["q"], 3);
    assert_eq!(v["footer"]["E"], "18/91");
}

#[test]
fn simulate_writes_a_replayable_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("game.jsonl");
    let out = ghost(&[
        "simulate",
        "--j",
        "4",
        "--m",
        "2",
        "--n",
        "9",
        "--b-strategy",
        "random",
        "--a-strategy",
        "crack-majority",
        "--seed",
        "11",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let replay = Replay::read_from(&path).unwrap();
    assert_eq!(replay.moves.len(), 20);
    assert!(replay.footer.is_some());

    let again = ghost(&["replay", "--in", path.to_str().unwrap(), "--verify"]);
    assert!(again.status.success());
}

#[test]
fn solve_prints_value_and_line() {
    let out = ghost(&["solve", "--j", "2", "--m", "1", "--n", "3"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], 1);
    assert_eq!(v["principal_variation"].as_array().unwrap().len(), 6);

    let out = ghost(&[
        "solve",
        "--j",
        "2",
        "--m",
        "1",
        "--n",
        "3",
        "--fixed-side",
        "A",
        "--fixed",
        "mirror",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], 1);
}

#[test]
fn sweep_exit_status_tracks_consistency() {
    let out = ghost(&["sweep", "--j-max", "3", "--m-max", "1"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("j,m,n,value"));
    assert!(!csv.contains("FATAL"));

    let out = ghost(&["sweep", "--j-max", "4", "--m-max", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out)
        .lines()
        .any(|l| l.starts_with("4,1,2,") && l.ends_with("FATAL")));
}

#[test]
fn bounds_csv_has_every_series() {
    let out = ghost(&["bounds", "--j", "4", "--m", "2"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("series,key,n_from,n_to,n_float"));
    for series in [
        "red_exact",
        "red_display",
        "blue_exact",
        "blue_display",
        "grey",
    ] {
        assert!(csv.lines().any(|l| l.starts_with(series)), "{series}");
    }
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(
        ghost(&["solve", "--j", "0", "--m", "1", "--n", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ghost(&[
            "simulate",
            "--j",
            "3",
            "--m",
            "1",
            "--n",
            "4",
            "--a-strategy",
            "mirror"
        ])
        .status
        .code(),
        Some(2)
    );
}
