mod common;

use common::{aec, demo_str, files, path_str};

#[test]
fn help_and_version_succeed() {
    assert_eq!(aec(&["--version"]), 0);
    assert_eq!(aec(&["--help-json"]), 0);
    assert_eq!(aec_toolkit::run(["aec", "--help"]), 0);
}

#[test]
fn usage_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = path_str(&tmp.path().join("out"));
    assert_eq!(aec(&["frobnicate"]), 1);
    assert_eq!(aec(&[]), 1);
    assert_eq!(aec(&["analyze", "--out", &out]), 1);
    assert_eq!(aec(&["analyze", "--annotations", &demo_str("annotations.jsonl")]), 1);
    assert_eq!(aec(&["ingest", "--annotations", &demo_str("annotations.jsonl"), "--out", &out, "--bogus"]), 1);
    assert_eq!(
        aec(&[
            "rerank",
            "--candidates",
            &demo_str("candidates.jsonl"),
            "--text-emb",
            &demo_str("text.bin"),
            "--img-emb",
            &demo_str("images.bin"),
            "--calibrate",
            "--rescale",
            "0.5",
            "--out",
            &out,
        ]),
        1
    );
    assert_eq!(
        aec(&[
            "rerank",
            "--candidates",
            &demo_str("candidates.jsonl"),
            "--text-emb",
            &demo_str("text.bin"),
            "--img-emb",
            &demo_str("images.bin"),
            "--beta",
            "1.5",
            "--out",
            &out,
        ]),
        1
    );
    assert_eq!(
        aec(&["analyze", "--annotations", &demo_str("annotations.jsonl"), "--majority-threshold", "2", "--out", &out]),
        1
    );
    assert_eq!(
        aec(&[
            "listen",
            "--text-emb",
            &demo_str("text.bin"),
            "--img-emb",
            &demo_str("images.bin"),
            "--distractors",
            "x",
            "--out",
            &out
        ]),
        1
    );
    assert_eq!(aec(&["report", "--out", &out]), 1);
    assert_eq!(aec(&["--threads", "0", "analyze", "--annotations", &demo_str("annotations.jsonl"), "--out", &out]), 1);
}

#[test]
fn data_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = path_str(&tmp.path().join("out"));
    let missing = path_str(&tmp.path().join("missing.jsonl"));
    assert_eq!(aec(&["analyze", "--annotations", &missing, "--out", &out]), 2);

    let bad = tmp.path().join("bad.jsonl");
    let mut text = std::fs::read_to_string(common::demo("annotations.jsonl")).unwrap();
    text.push_str(
        "{\"image_id\":\"x\",\"source\":\"coco\",\"emotion\":\"joyfulness\",\"explanation\":\"a b c d e\"}\n",
    );
    text.push_str("not json\n");
    std::fs::write(&bad, text).unwrap();
    assert_eq!(aec(&["ingest", "--annotations", &path_str(&bad), "--out", &out]), 2);
    assert_eq!(aec(&["ingest", "--annotations", &path_str(&bad), "--skip-invalid", "--out", &out]), 0);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("out/ingest.json")).unwrap()).unwrap();
    let skipped = summary["skipped_lines"].as_array().unwrap();
    assert_eq!(skipped.len(), 2);
    assert_eq!(skipped[0]["line"], 204);
    assert!(skipped[0]["reason"].as_str().unwrap().contains("joyfulness"));

    let probe_out = path_str(&tmp.path().join("probe"));
    assert_eq!(
        aec(&[
            "listen",
            "--text-emb",
            &demo_str("text.bin"),
            "--img-emb",
            &demo_str("images_probe.bin"),
            "--out",
            &probe_out,
        ]),
        2
    );
    assert_eq!(
        aec(&[
            "listen",
            "--text-emb",
            &demo_str("text.bin"),
            "--img-emb",
            &demo_str("images.bin"),
            "--distractors",
            "40",
            "--out",
            &probe_out,
        ]),
        2
    );
    assert_eq!(
        aec(&["eval", "--generations", &demo_str("generations.jsonl"), "--clf", &demo_str("text.bin"), "--out", &out]),
        2
    );
}

#[test]
fn outputs_stay_inside_the_out_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("nested/out");
    assert_eq!(aec(&["analyze", "--annotations", &demo_str("annotations.jsonl"), "--out", &path_str(&out)]), 0);
    for f in files(tmp.path()) {
        assert!(f.starts_with("nested/out"), "{} written outside --out", f.display());
    }
}

#[test]
fn help_json_lists_every_command() {
    let help = aec_toolkit::cli::help_json();
    let names: Vec<&str> = help["commands"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, aec_toolkit::cli::COMMANDS);
    let rerank = help["commands"].as_array().unwrap().iter().find(|c| c["name"] == "rerank").unwrap();
    assert!(rerank["args"].as_array().unwrap().iter().any(|a| a["long"] == "calibrate"));
    assert!(help["global_args"].as_array().unwrap().iter().any(|a| a["long"] == "threads"));
}
