use std::process::Command;

use sepprob::cli::OutputRecord;

fn sepprob(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sepprob")).args(args).output().expect("spawn");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf8"))
}

fn records(args: &[&str]) -> Vec<OutputRecord> {
    let mut v = args.to_vec();
    v.extend(["--format", "json"]);
    let (code, out) = sepprob(&v);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).expect("json")
}

#[test]
fn sep_prob_both_methods() {
    let recs = records(&["sep-prob", "--lambda", "2,2", "--alpha", "1,1", "--method", "both"]);
    let probs: Vec<_> = recs.iter().map(|r| r.probability.as_deref()).collect();
    assert_eq!(probs, [Some("5/9"), Some("5/9")]);
}

#[test]
fn documented_examples() {
    assert_eq!(records(&["ncycle", "--n", "4", "--alpha", "1,1"])[0].probability.as_deref(), Some("11/18"));
    assert_eq!(records(&["connection", "--lambda", "3", "--alpha", "1,1,1"])[0].count.as_deref(), Some("2"));
    let hz = records(&["hz", "--N", "2"]);
    let mono: Vec<_> = hz
        .iter()
        .filter(|r| r.params["basis"] == "monomial")
        .map(|r| (r.params["degree"].clone(), r.value.clone().unwrap()))
        .collect();
    assert_eq!(mono, [("1".to_string(), "1".to_string()), ("3".to_string(), "2".to_string())]);
}

#[test]
fn json_round_trips() {
    let (_, out) = sepprob(&["table", "--n", "5", "--alphas", "all", "--format", "json"]);
    let recs: Vec<OutputRecord> = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string_pretty(&recs).unwrap() + "\n", out);
}

#[test]
fn exit_codes() {
    assert_eq!(sepprob(&["sep-prob", "--lambda", "2,2", "--alpha", "0,1"]).0, 2);
    assert_eq!(sepprob(&["sep-prob", "--lambda", "9", "--alpha", "1,1", "--method", "oracle"]).0, 3);
    assert_eq!(sepprob(&["verify", "--suite", "lemmas", "--max-n", "3"]).0, 0);
    assert_eq!(sepprob(&["verify", "--suite", "nonsense"]).0, 2);
}

#[test]
fn disk_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_sepprob"))
            .args(["sep-prob", "--lambda", "3,2,1", "--alpha", "2,1"])
            .env("SEPPROB_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    let file = dir.path().join(sepprob::symfunc::cache_file_name(6));
    assert!(file.exists());
    std::fs::write(&file, "garbage").unwrap();
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert!(std::fs::read_to_string(&file).unwrap().starts_with("sepprob-transition"));
}
