use aec_core::classifiers::{train_image_probe, train_text_emotion, ProbeHyper, TextHyper};
use aec_core::listener::{ContrastiveHyper, ContrastiveProjection};
use aec_toolkit::io::annotations::{load_annotations, OnError};
use aec_toolkit::io::embeddings::load_embeddings;
use aec_toolkit::io::model::{load_image_probe, load_model, load_projection, load_text_classifier, Model};
use aec_toolkit::FormatError;

mod common;

fn rounded(w: &[f64]) -> Vec<f64> {
    w.iter().map(|&v| v as f32 as f64).collect()
}

#[test]
fn models_round_trip_through_single_precision() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = load_annotations(&common::demo("annotations.jsonl"), OnError::Fail).unwrap().corpus;
    let (clf, _) = train_text_emotion(&corpus, TextHyper { epochs: 2, ..TextHyper::default() }).unwrap();
    let config = serde_json::json!({"note": "unit"});
    let path = tmp.path().join("clf.bin");
    std::fs::write(&path, Model::TextEmotion(clf.clone()).to_bytes(&config)).unwrap();
    let back = load_text_classifier(&path).unwrap();
    assert_eq!(back.features(), clf.features());
    assert_eq!(back.hyper(), clf.hyper());
    assert_eq!(back.weights(), rounded(clf.weights()).as_slice());
    let (header, _) = load_model(&path).unwrap();
    assert_eq!(header.config, config);

    let table = load_embeddings(&common::demo("images_probe.bin")).unwrap();
    let targets = aec_core::classifiers::empirical_targets(&corpus);
    let (probe, _) = train_image_probe(&table, &targets, ProbeHyper { epochs: 3, ..ProbeHyper::default() }).unwrap();
    let path = tmp.path().join("probe.bin");
    std::fs::write(&path, Model::ImageProbe(probe.clone()).to_bytes(&config)).unwrap();
    let back = load_image_probe(&path).unwrap();
    assert_eq!((back.space_tag(), back.dim()), (probe.space_tag(), probe.dim()));
    assert_eq!(back.weights(), rounded(probe.weights()).as_slice());
    assert!(load_text_classifier(&path).unwrap_err().to_string().contains("found image-probe"));

    let proj =
        ContrastiveProjection::initialize(5, 3, &ContrastiveHyper { proj_dim: 4, ..Default::default() }).unwrap();
    let path = tmp.path().join("proj.bin");
    std::fs::write(&path, Model::ContrastiveProjection(proj.clone()).to_bytes(&config)).unwrap();
    let back = load_projection(&path).unwrap();
    assert_eq!(back.text_map(), rounded(proj.text_map()).as_slice());
    assert_eq!(back.image_map(), rounded(proj.image_map()).as_slice());
    assert_eq!(back.temperature(), proj.temperature());
}

#[test]
fn damaged_model_files_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let proj =
        ContrastiveProjection::initialize(2, 2, &ContrastiveHyper { proj_dim: 2, ..Default::default() }).unwrap();
    let bytes = Model::ContrastiveProjection(proj).to_bytes(&serde_json::Value::Null);
    let path = tmp.path().join("m.bin");

    let mut flipped = bytes.clone();
    *flipped.last_mut().unwrap() ^= 0x80;
    std::fs::write(&path, &flipped).unwrap();
    assert!(matches!(load_model(&path), Err(FormatError::Checksum { .. })));

    std::fs::write(&path, &bytes[..bytes.len() - 4]).unwrap();
    assert!(load_model(&path).unwrap_err().to_string().contains("declares 8 floats"));

    let text = String::from_utf8_lossy(&bytes).replace("aec-model/1", "aec-model/9");
    std::fs::write(&path, text.as_bytes()).unwrap();
    assert!(load_model(&path).is_err());

    std::fs::write(&path, b"no newline").unwrap();
    assert!(load_model(&path).unwrap_err().to_string().contains("missing model header"));
}
