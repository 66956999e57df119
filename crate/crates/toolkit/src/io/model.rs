//! Trained model files: one JSON header line, `\n`, then the weights as
//! little-endian `f32`.

use std::path::Path;

use aec_core::classifiers::{ImageEmotionProbe, NgramFeatures, ProbeHyper, TextEmotionClassifier, TextHyper};
use aec_core::listener::ContrastiveProjection;
use serde::{Deserialize, Serialize};

use super::embeddings::{decode_payload, encode_payload};
use super::{read_bytes, sha256_tag};
use crate::error::FormatError;
use crate::header::{TOOL_NAME, TOOL_VERSION};

pub const MODEL_FORMAT: &str = "aec-model/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    TextEmotion { hyper: TextHyper, features: Vec<String> },
    ImageProbe { hyper: ProbeHyper, space_tag: String, dim: usize },
    ContrastiveProjection { text_dim: usize, image_dim: usize, proj_dim: usize, temperature: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelHeader {
    pub format: String,
    pub tool: String,
    pub version: String,
    #[serde(flatten)]
    pub spec: ModelSpec,
    /// Resolved configuration of the run that produced the model.
    pub config: serde_json::Value,
    pub payload_floats: usize,
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    TextEmotion(TextEmotionClassifier),
    ImageProbe(ImageEmotionProbe),
    ContrastiveProjection(ContrastiveProjection),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::TextEmotion(_) => "text-emotion",
            Model::ImageProbe(_) => "image-probe",
            Model::ContrastiveProjection(_) => "contrastive-projection",
        }
    }

    fn parts(&self) -> (ModelSpec, Vec<f64>) {
        match self {
            Model::TextEmotion(c) => (
                ModelSpec::TextEmotion { hyper: *c.hyper(), features: c.features().names().to_vec() },
                c.weights().to_vec(),
            ),
            Model::ImageProbe(p) => (
                ModelSpec::ImageProbe { hyper: *p.hyper(), space_tag: p.space_tag().into(), dim: p.dim() },
                p.weights().to_vec(),
            ),
            Model::ContrastiveProjection(p) => (
                ModelSpec::ContrastiveProjection {
                    text_dim: p.text_dim(),
                    image_dim: p.image_dim(),
                    proj_dim: p.proj_dim(),
                    temperature: p.temperature(),
                },
                p.params(),
            ),
        }
    }

    /// Weights are stored as `f32`; reloading rounds each to single precision.
    pub fn to_bytes(&self, config: &serde_json::Value) -> Vec<u8> {
        let (spec, weights) = self.parts();
        let floats: Vec<f32> = weights.iter().map(|&w| w as f32).collect();
        let payload = encode_payload(&floats);
        let header = ModelHeader {
            format: MODEL_FORMAT.into(),
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            spec,
            config: config.clone(),
            payload_floats: floats.len(),
            checksum: sha256_tag(&payload),
        };
        let mut bytes = serde_json::to_vec(&header).expect("model header serializes");
        bytes.push(b'\n');
        bytes.extend(payload);
        bytes
    }

    pub fn from_bytes(bytes: &[u8], path: &Path) -> Result<(ModelHeader, Model), FormatError> {
        let split = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| FormatError::invalid(path, "missing model header line"))?;
        let header: ModelHeader = serde_json::from_slice(&bytes[..split])
            .map_err(|e| FormatError::invalid(path, format!("bad model header: {e}")))?;
        if header.format != MODEL_FORMAT {
            return Err(FormatError::invalid(
                path,
                format!("unsupported model format {:?}, expected {MODEL_FORMAT:?}", header.format),
            ));
        }
        let payload = &bytes[split + 1..];
        if payload.len() != header.payload_floats * 4 {
            return Err(FormatError::invalid(
                path,
                format!("payload is {} bytes, header declares {} floats", payload.len(), header.payload_floats),
            ));
        }
        let found = sha256_tag(payload);
        if found != header.checksum {
            return Err(FormatError::Checksum {
                path: path.display().to_string(),
                expected: header.checksum.clone(),
                found,
            });
        }
        let weights: Vec<f64> = decode_payload(payload).into_iter().map(f64::from).collect();
        let invalid = |e: aec_core::Error| FormatError::invalid(path, e.to_string());
        let model = match &header.spec {
            ModelSpec::TextEmotion { hyper, features } => {
                let features = NgramFeatures::from_names(features.clone()).map_err(invalid)?;
                Model::TextEmotion(TextEmotionClassifier::from_parts(features, weights, *hyper).map_err(invalid)?)
            }
            ModelSpec::ImageProbe { hyper, space_tag, dim } => Model::ImageProbe(
                ImageEmotionProbe::from_parts(space_tag.clone(), *dim, weights, *hyper).map_err(invalid)?,
            ),
            ModelSpec::ContrastiveProjection { text_dim, image_dim, proj_dim, temperature } => {
                let split = proj_dim * text_dim;
                if weights.len() < split {
                    return Err(FormatError::invalid(path, "projection payload too short"));
                }
                let image_map = weights[split..].to_vec();
                let mut text_map = weights;
                text_map.truncate(split);
                Model::ContrastiveProjection(
                    ContrastiveProjection::new(*text_dim, *image_dim, *proj_dim, text_map, image_map, *temperature)
                        .map_err(invalid)?,
                )
            }
        };
        Ok((header, model))
    }
}

pub fn load_model(path: &Path) -> Result<(ModelHeader, Model), FormatError> {
    Model::from_bytes(&read_bytes(path)?, path)
}

pub fn load_text_classifier(path: &Path) -> Result<TextEmotionClassifier, FormatError> {
    match load_model(path)?.1 {
        Model::TextEmotion(c) => Ok(c),
        other => Err(FormatError::invalid(path, format!("expected a text-emotion model, found {}", other.kind()))),
    }
}

pub fn load_image_probe(path: &Path) -> Result<ImageEmotionProbe, FormatError> {
    match load_model(path)?.1 {
        Model::ImageProbe(p) => Ok(p),
        other => Err(FormatError::invalid(path, format!("expected an image-probe model, found {}", other.kind()))),
    }
}

pub fn load_projection(path: &Path) -> Result<ContrastiveProjection, FormatError> {
    match load_model(path)?.1 {
        Model::ContrastiveProjection(p) => Ok(p),
        other => {
            Err(FormatError::invalid(path, format!("expected a contrastive-projection model, found {}", other.kind())))
        }
    }
}
