//! Regenerate the synthetic demo dataset under `data/demo/`.
//!
//! `cargo run -p aec-toolkit --example make_demo [out_dir]`

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use aec_core::corpus::{EmbeddingTable, SourceDataset};
use aec_core::EmotionLabel;
use aec_toolkit::io::embeddings::write_packed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IMAGES: usize = 40;
const ANNOTATIONS_PER_IMAGE: usize = 5;
const CLIP_DIM: usize = 16;
const PROBE_DIM: usize = 12;
const CANDIDATES: usize = 4;

const ADJECTIVES: [&str; 8] = ["bright", "dark", "old", "small", "huge", "quiet", "colorful", "empty"];
const NOUNS: [&str; 10] = ["dog", "house", "river", "sky", "street", "child", "tree", "painting", "boat", "field"];

fn templates(label: EmotionLabel) -> &'static [&'static str] {
    match label {
        EmotionLabel::Amusement => &[
            "the ADJ NOUN looks so silly that i cannot stop laughing",
            "it is funny how the NOUN seems to wear a tiny hat",
            "the NOUN makes me laugh because it looks like a cartoon",
        ],
        EmotionLabel::Awe => &[
            "the ADJ NOUN under the vast sky is truly breathtaking",
            "i am amazed by the size of the ADJ NOUN",
            "the view of the NOUN is majestic and grand",
        ],
        EmotionLabel::Contentment => &[
            "the ADJ NOUN feels calm and peaceful to me",
            "i feel relaxed looking at the quiet NOUN",
            "the NOUN reminds me of a happy lazy afternoon",
        ],
        EmotionLabel::Excitement => &[
            "the ADJ NOUN makes me want to run and play",
            "i am thrilled by the energy of the NOUN",
            "the NOUN looks like the start of a great adventure",
        ],
        EmotionLabel::Anger => &[
            "the ADJ NOUN is ruined and that makes me furious",
            "i hate how someone left the NOUN so dirty",
            "the broken NOUN makes me angry at the careless people",
        ],
        EmotionLabel::Disgust => &[
            "the ADJ NOUN is filthy and smells terrible",
            "i feel sick looking at the rotten NOUN",
            "the NOUN is covered in gross slime",
        ],
        EmotionLabel::Fear => &[
            "the ADJ NOUN looks scary and threatening at night",
            "i am afraid something will jump out of the NOUN",
            "the NOUN seems like a place where danger hides",
        ],
        EmotionLabel::Sadness => &[
            "the ADJ NOUN looks lonely and abandoned",
            "i feel sad because the NOUN is empty and cold",
            "the NOUN reminds me of a friend i lost",
        ],
        EmotionLabel::SomethingElse => &[
            "the ADJ NOUN is just a NOUN with nothing special",
            "i do not feel much about the plain NOUN",
            "the NOUN is ordinary and makes me think of nothing",
        ],
    }
}

fn tag(word: &str) -> &'static str {
    match word {
        "the" | "a" | "an" | "that" | "nothing" | "much" | "someone" | "something" => {
            if matches!(word, "nothing" | "someone" | "something") {
                "PRON"
            } else {
                "DET"
            }
        }
        "i" | "me" | "it" | "its" => "PRON",
        "of" | "under" | "by" | "at" | "in" | "like" | "about" | "with" | "out" | "to" => "ADP",
        "and" | "because" | "how" | "where" => "SCONJ",
        "so" | "truly" | "just" | "not" | "stop" => "ADV",
        "is" | "am" | "do" | "cannot" | "will" => "AUX",
        "looks" | "seems" | "wear" | "makes" | "laugh" | "laughing" | "want" | "run" | "play" | "feel" | "feels"
        | "looking" | "amazed" | "thrilled" | "left" | "hate" | "smells" | "jump" | "hides" | "lost" | "reminds"
        | "think" | "covered" | "ruined" | "seem" => "VERB",
        _ if ADJECTIVES.contains(&word) => "ADJ",
        _ if NOUNS.contains(&word) => "NOUN",
        "vast" | "breathtaking" | "majestic" | "grand" | "calm" | "peaceful" | "relaxed" | "happy" | "lazy"
        | "great" | "furious" | "dirty" | "broken" | "angry" | "careless" | "filthy" | "terrible" | "sick"
        | "rotten" | "gross" | "scary" | "threatening" | "afraid" | "lonely" | "abandoned" | "sad" | "cold"
        | "special" | "plain" | "ordinary" | "silly" | "funny" | "tiny" => "ADJ",
        _ => "NOUN",
    }
}

struct Record {
    image: String,
    source: SourceDataset,
    emotion: EmotionLabel,
    tokens: Vec<String>,
}

fn fill(template: &str, rng: &mut ChaCha8Rng, noun: &str) -> Vec<String> {
    template
        .split_whitespace()
        .map(|w| match w {
            "ADJ" => ADJECTIVES[rng.random_range(0..ADJECTIVES.len())].to_string(),
            "NOUN" => noun.to_string(),
            other => other.to_string(),
        })
        .collect()
}

fn gaussian(rng: &mut ChaCha8Rng) -> f32 {
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random();
    ((-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()) as f32
}

fn noisy(center: &[f32], scale: f32, rng: &mut ChaCha8Rng) -> Vec<f32> {
    center.iter().map(|c| c + scale * gaussian(rng)).collect()
}

fn random_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f32> {
    (0..dim).map(|_| gaussian(rng)).collect()
}

fn annotation_labels(image: usize, dominant: EmotionLabel, rng: &mut ChaCha8Rng) -> Vec<EmotionLabel> {
    let mut labels = vec![dominant; ANNOTATIONS_PER_IMAGE];
    let others = match image % 8 {
        0 => 1,
        1..=4 => 2,
        5 | 6 => 3,
        _ => 4,
    };
    for slot in labels.iter_mut().skip(ANNOTATIONS_PER_IMAGE - others) {
        *slot = EmotionLabel::ALL[rng.random_range(0..EmotionLabel::ALL.len())];
    }
    labels
}

fn table(space: &str, dim: usize, rows: Vec<(String, Vec<f32>)>) -> EmbeddingTable {
    let (ids, data): (Vec<String>, Vec<Vec<f32>>) = rows.into_iter().unzip();
    EmbeddingTable::new(space, dim, ids, data.concat()).expect("demo tables are well formed")
}

fn json_line(out: &mut String, value: serde_json::Value) {
    writeln!(out, "{value}").expect("write to string");
}

fn main() {
    let out: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/demo"));
    std::fs::create_dir_all(&out).expect("create output directory");
    let mut rng = ChaCha8Rng::seed_from_u64(20_22);

    let dominant_cycle = [
        EmotionLabel::Contentment,
        EmotionLabel::Awe,
        EmotionLabel::Amusement,
        EmotionLabel::Excitement,
        EmotionLabel::Sadness,
        EmotionLabel::Fear,
        EmotionLabel::Contentment,
        EmotionLabel::Awe,
        EmotionLabel::Disgust,
        EmotionLabel::Anger,
        EmotionLabel::SomethingElse,
    ];
    let emotion_centers: Vec<Vec<f32>> = EmotionLabel::ALL.iter().map(|_| random_vector(CLIP_DIM, &mut rng)).collect();
    let probe_basis: Vec<Vec<f32>> = EmotionLabel::ALL.iter().map(|_| random_vector(PROBE_DIM, &mut rng)).collect();

    let mut records = Vec::new();
    let mut image_rows = Vec::new();
    let mut probe_rows = Vec::new();
    let mut text_rows = Vec::new();
    let mut candidates = String::new();
    let mut generations = String::new();

    for i in 0..IMAGES {
        let image = format!("img{i:03}");
        let dominant = dominant_cycle[i % dominant_cycle.len()];
        let noun = NOUNS[i % NOUNS.len()];
        let source = SourceDataset::ALL[i % SourceDataset::ALL.len()];
        let labels = annotation_labels(i, dominant, &mut rng);

        let own = random_vector(CLIP_DIM, &mut rng);
        let center: Vec<f32> =
            emotion_centers[dominant.index()].iter().zip(&own).map(|(c, o)| 0.6 * c + 0.8 * o).collect();
        image_rows.push((image.clone(), center.clone()));

        let mut counts = [0f32; 9];
        for l in &labels {
            counts[l.index()] += 1.0 / ANNOTATIONS_PER_IMAGE as f32;
        }
        let mut probe = vec![0f32; PROBE_DIM];
        for (k, w) in counts.iter().enumerate() {
            for (p, b) in probe.iter_mut().zip(&probe_basis[k]) {
                *p += 2.0 * w * b;
            }
        }
        probe_rows.push((image.clone(), noisy(&probe, 0.1, &mut rng)));

        for (k, &label) in labels.iter().enumerate() {
            let options = templates(label);
            let tokens = fill(options[rng.random_range(0..options.len())], &mut rng, noun);
            text_rows.push((format!("{image}#{k}"), noisy(&center, 1.2, &mut rng)));
            records.push(Record { image: image.clone(), source, emotion: label, tokens });
        }

        let mut cands = Vec::new();
        for c in 0..CANDIDATES {
            let label = if c == 0 { dominant } else { EmotionLabel::ALL[rng.random_range(0..EmotionLabel::ALL.len())] };
            let options = templates(label);
            let text = fill(options[rng.random_range(0..options.len())], &mut rng, noun).join(" ");
            let id = format!("{image}/c{c}");
            let spread = 0.9 + 0.5 * c as f32;
            text_rows.push((id.clone(), noisy(&center, spread, &mut rng)));
            let log_p_speaker = -(2.0 + 6.0 * rng.random::<f64>());
            cands.push(serde_json::json!({
                "text": text,
                "log_p_speaker": (log_p_speaker * 1e4).round() / 1e4,
                "emotion": label.as_str(),
                "text_embedding_id": id,
            }));
        }
        json_line(
            &mut candidates,
            serde_json::json!({"image_id": image, "image_embedding_id": image, "candidates": cands}),
        );

        let options = templates(dominant);
        let text = fill(options[i % options.len()], &mut rng, noun).join(" ");
        let gen_id = format!("{image}/g");
        text_rows.push((gen_id.clone(), noisy(&center, 1.4, &mut rng)));
        json_line(
            &mut generations,
            serde_json::json!({"image_id": image, "text": text, "emotion": dominant.as_str(), "text_embedding_id": gen_id}),
        );
    }

    let mut annotations = String::new();
    for (k, r) in records.iter().enumerate() {
        let pos: Vec<&str> = r.tokens.iter().map(|t| tag(t)).collect();
        json_line(
            &mut annotations,
            serde_json::json!({
                "image_id": r.image,
                "source": r.source.as_str(),
                "emotion": r.emotion.as_str(),
                "explanation": r.tokens.join(" "),
                "tokens": r.tokens,
                "pos": pos,
                "annotator_id": format!("w{:02}", k % 17),
            }),
        );
    }
    for (k, short) in ["so calm", "very scary", "funny dog"].iter().enumerate() {
        json_line(
            &mut annotations,
            serde_json::json!({
                "image_id": format!("img{:03}", 3 * k),
                "source": "coco",
                "emotion": "something-else",
                "explanation": short,
                "tokens": short.split(' ').collect::<Vec<_>>(),
                "pos": short.split(' ').map(tag).collect::<Vec<_>>(),
            }),
        );
    }

    std::fs::write(out.join("annotations.jsonl"), annotations).expect("write annotations");
    std::fs::write(out.join("candidates.jsonl"), candidates).expect("write candidates");
    std::fs::write(out.join("generations.jsonl"), generations).expect("write generations");
    write_packed(&out.join("images.bin"), &table("clip", CLIP_DIM, image_rows), Some("synthetic-clusters"))
        .expect("write image table");
    write_packed(&out.join("text.bin"), &table("clip", CLIP_DIM, text_rows), Some("synthetic-clusters"))
        .expect("write text table");
    write_packed(&out.join("images_probe.bin"), &table("probe", PROBE_DIM, probe_rows), Some("synthetic-mixture"))
        .expect("write probe table");
    eprintln!("wrote demo data to {}", out.display());
}
