//! Embedding-space listeners: distractor retrieval studies and a linear
//! contrastive projection that aligns caption and image embeddings.

mod contrastive;
mod retrieval;

pub use contrastive::{
    train_contrastive_projection, ContrastiveHyper, ContrastiveObjective, ContrastiveProjection, ProjectionInit,
    DEFAULT_TEMPERATURE,
};
pub use retrieval::{
    enumerate_trials, retrieval_accuracy, retrieval_curve, retrieval_trial, CurvePoint, RetrievalCurve, RetrievalTrial,
};
