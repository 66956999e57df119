use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifiers::TrainReport;
use crate::corpus::EmbeddingTable;
use crate::vector::log_softmax_in_place;
use crate::{Error, Result};

pub const DEFAULT_TEMPERATURE: f64 = 0.07;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectionInit {
    /// Seeded uniform entries with variance `1 / input_dim`.
    Random,
    /// Ones on the leading diagonal, zeros elsewhere.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastiveHyper {
    pub proj_dim: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub temperature: f64,
    pub seed: u64,
    pub init: ProjectionInit,
}

impl Default for ContrastiveHyper {
    fn default() -> Self {
        Self {
            proj_dim: 64,
            learning_rate: 0.05,
            epochs: 50,
            batch_size: 32,
            temperature: DEFAULT_TEMPERATURE,
            seed: 0,
            init: ProjectionInit::Random,
        }
    }
}

/// Two linear maps into a shared space plus the logit temperature.
/// Maps are row-major `proj_dim × input_dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastiveProjection {
    text_dim: usize,
    image_dim: usize,
    proj_dim: usize,
    text_map: Vec<f64>,
    image_map: Vec<f64>,
    temperature: f64,
}

impl ContrastiveProjection {
    pub fn new(
        text_dim: usize,
        image_dim: usize,
        proj_dim: usize,
        text_map: Vec<f64>,
        image_map: Vec<f64>,
        temperature: f64,
    ) -> Result<Self> {
        if text_dim == 0 || image_dim == 0 || proj_dim == 0 {
            return Err(Error::InvalidArgument("projection dimensions must be positive".into()));
        }
        if text_map.len() != proj_dim * text_dim {
            return Err(Error::DimensionMismatch { expected: proj_dim * text_dim, found: text_map.len() });
        }
        if image_map.len() != proj_dim * image_dim {
            return Err(Error::DimensionMismatch { expected: proj_dim * image_dim, found: image_map.len() });
        }
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidArgument("temperature must be positive".into()));
        }
        if text_map.iter().chain(&image_map).any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("projection weights".into()));
        }
        Ok(Self { text_dim, image_dim, proj_dim, text_map, image_map, temperature })
    }

    pub fn initialize(text_dim: usize, image_dim: usize, hyper: &ContrastiveHyper) -> Result<Self> {
        let p = hyper.proj_dim;
        let (text_map, image_map) = match hyper.init {
            ProjectionInit::Identity => (identity(p, text_dim), identity(p, image_dim)),
            ProjectionInit::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
                let t = random_map(&mut rng, p, text_dim);
                (t, random_map(&mut rng, p, image_dim))
            }
        };
        Self::new(text_dim, image_dim, p, text_map, image_map, hyper.temperature)
    }

    pub fn text_dim(&self) -> usize {
        self.text_dim
    }

    pub fn image_dim(&self) -> usize {
        self.image_dim
    }

    pub fn proj_dim(&self) -> usize {
        self.proj_dim
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn text_map(&self) -> &[f64] {
        &self.text_map
    }

    pub fn image_map(&self) -> &[f64] {
        &self.image_map
    }

    /// Text map followed by image map, the parameter layout of [`ContrastiveObjective`].
    pub fn params(&self) -> Vec<f64> {
        let mut p = self.text_map.clone();
        p.extend_from_slice(&self.image_map);
        p
    }

    pub fn project_text(&self, x: &[f32]) -> Result<Vec<f64>> {
        project_checked(&self.text_map, self.proj_dim, self.text_dim, x)
    }

    pub fn project_image(&self, x: &[f32]) -> Result<Vec<f64>> {
        project_checked(&self.image_map, self.proj_dim, self.image_dim, x)
    }

    /// Project every row of a caption table into the joint space.
    pub fn project_text_table(&self, table: &EmbeddingTable, space_tag: &str) -> Result<EmbeddingTable> {
        self.project_table(table, space_tag, true)
    }

    pub fn project_image_table(&self, table: &EmbeddingTable, space_tag: &str) -> Result<EmbeddingTable> {
        self.project_table(table, space_tag, false)
    }

    fn project_table(&self, table: &EmbeddingTable, space_tag: &str, text: bool) -> Result<EmbeddingTable> {
        let mut data = Vec::with_capacity(table.len() * self.proj_dim);
        for (_, row) in table.iter() {
            let out = if text { self.project_text(row)? } else { self.project_image(row)? };
            data.extend(out.iter().map(|&v| v as f32));
        }
        EmbeddingTable::new(space_tag, self.proj_dim, table.ids().to_vec(), data)
    }
}

fn identity(p: usize, d: usize) -> Vec<f64> {
    let mut m = vec![0.0; p * d];
    for i in 0..p.min(d) {
        m[i * d + i] = 1.0;
    }
    m
}

fn random_map(rng: &mut ChaCha8Rng, p: usize, d: usize) -> Vec<f64> {
    let scale = libm::sqrt(3.0 / d as f64);
    (0..p * d).map(|_| rng.random_range(-scale..scale)).collect()
}

fn project_into(map: &[f64], p: usize, x: &[f64], out: &mut [f64]) {
    let d = x.len();
    for (r, o) in out.iter_mut().enumerate().take(p) {
        *o = map[r * d..(r + 1) * d].iter().zip(x).map(|(w, v)| w * v).sum();
    }
}

fn project_checked(map: &[f64], p: usize, d: usize, x: &[f32]) -> Result<Vec<f64>> {
    if x.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: x.len() });
    }
    let x: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    let mut out = vec![0.0; p];
    project_into(map, p, &x, &mut out);
    Ok(out)
}

/// Symmetric batch-contrastive loss over matched pairs.
///
/// For a batch of `B` pairs the logits are `cos(T x_i, I y_j) / τ`; the loss
/// is the mean of the text→image and image→text cross-entropies with the
/// matched pair as the target. Parameters are laid out as
/// [`ContrastiveProjection::params`].
pub struct ContrastiveObjective {
    text: Vec<f64>,
    image: Vec<f64>,
    text_dim: usize,
    image_dim: usize,
    proj_dim: usize,
    temperature: f64,
}

struct Side {
    unit: Vec<f64>,
    norms: Vec<f64>,
}

impl ContrastiveObjective {
    pub fn new(
        text: Vec<f64>,
        image: Vec<f64>,
        text_dim: usize,
        image_dim: usize,
        proj_dim: usize,
        temperature: f64,
    ) -> Result<Self> {
        if text_dim == 0 || image_dim == 0 || proj_dim == 0 {
            return Err(Error::InvalidArgument("dimensions must be positive".into()));
        }
        let n = text.len() / text_dim;
        if text.len() != n * text_dim || image.len() != n * image_dim {
            return Err(Error::DimensionMismatch { expected: n * image_dim, found: image.len() });
        }
        if !(temperature > 0.0) {
            return Err(Error::InvalidArgument("temperature must be positive".into()));
        }
        Ok(Self { text, image, text_dim, image_dim, proj_dim, temperature })
    }

    pub fn num_params(&self) -> usize {
        self.proj_dim * (self.text_dim + self.image_dim)
    }

    pub fn len(&self) -> usize {
        self.text.len() / self.text_dim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn split<'a>(&self, params: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        params.split_at(self.proj_dim * self.text_dim)
    }

    fn embed(&self, map: &[f64], inputs: &[f64], d: usize, batch: &[usize]) -> Side {
        let p = self.proj_dim;
        let mut unit = vec![0.0; batch.len() * p];
        let mut norms = Vec::with_capacity(batch.len());
        for (k, &i) in batch.iter().enumerate() {
            let out = &mut unit[k * p..(k + 1) * p];
            project_into(map, p, &inputs[i * d..(i + 1) * d], out);
            let n = libm::sqrt(out.iter().map(|v| v * v).sum::<f64>()).max(f64::MIN_POSITIVE);
            out.iter_mut().for_each(|v| *v /= n);
            norms.push(n);
        }
        Side { unit, norms }
    }

    fn check(&self, params: &[f64], batch: &[usize]) -> Result<()> {
        if params.len() != self.num_params() {
            return Err(Error::DimensionMismatch { expected: self.num_params(), found: params.len() });
        }
        if batch.len() < 2 {
            return Err(Error::InvalidArgument("contrastive batches need at least two pairs".into()));
        }
        Ok(())
    }

    /// Loss and the gradient of the loss with respect to each logit.
    fn forward(&self, params: &[f64], batch: &[usize]) -> (f64, Vec<f64>, Side, Side) {
        let (tm, im) = self.split(params);
        let t = self.embed(tm, &self.text, self.text_dim, batch);
        let v = self.embed(im, &self.image, self.image_dim, batch);
        let b = batch.len();
        let p = self.proj_dim;
        let mut logits = vec![0.0; b * b];
        for i in 0..b {
            for j in 0..b {
                let s: f64 =
                    t.unit[i * p..(i + 1) * p].iter().zip(&v.unit[j * p..(j + 1) * p]).map(|(a, c)| a * c).sum();
                logits[i * b + j] = s / self.temperature;
            }
        }
        let mut dlogits = vec![0.0; b * b];
        let mut loss = 0.0;
        let mut scratch = vec![0.0; b];
        let scale = 0.5 / b as f64;
        for i in 0..b {
            scratch.copy_from_slice(&logits[i * b..(i + 1) * b]);
            log_softmax_in_place(&mut scratch);
            loss -= scratch[i];
            for j in 0..b {
                dlogits[i * b + j] += scale * (libm::exp(scratch[j]) - (i == j) as u8 as f64);
            }
        }
        for j in 0..b {
            for i in 0..b {
                scratch[i] = logits[i * b + j];
            }
            log_softmax_in_place(&mut scratch);
            loss -= scratch[j];
            for i in 0..b {
                dlogits[i * b + j] += scale * (libm::exp(scratch[i]) - (i == j) as u8 as f64);
            }
        }
        (loss * scale, dlogits, t, v)
    }

    pub fn loss_on(&self, params: &[f64], batch: &[usize]) -> Result<f64> {
        self.check(params, batch)?;
        Ok(self.forward(params, batch).0)
    }

    pub fn gradient_on(&self, params: &[f64], batch: &[usize], grad: &mut [f64]) -> Result<f64> {
        self.check(params, batch)?;
        if grad.len() != params.len() {
            return Err(Error::DimensionMismatch { expected: params.len(), found: grad.len() });
        }
        let (loss, g, t, v) = self.forward(params, batch);
        let b = batch.len();
        let p = self.proj_dim;
        grad.iter_mut().for_each(|x| *x = 0.0);
        let (gt, gi) = grad.split_at_mut(p * self.text_dim);
        let mut du = vec![0.0; p];
        for k in 0..b {
            // Text side: d loss / d û_k = Σ_j g_kj v̂_j / τ.
            for (r, d) in du.iter_mut().enumerate() {
                *d = (0..b).map(|j| g[k * b + j] * v.unit[j * p + r]).sum::<f64>() / self.temperature;
            }
            backprop_unit(&mut du, &t.unit[k * p..(k + 1) * p], t.norms[k]);
            accumulate(gt, &du, &self.text[batch[k] * self.text_dim..(batch[k] + 1) * self.text_dim]);
            for (r, d) in du.iter_mut().enumerate() {
                *d = (0..b).map(|i| g[i * b + k] * t.unit[i * p + r]).sum::<f64>() / self.temperature;
            }
            backprop_unit(&mut du, &v.unit[k * p..(k + 1) * p], v.norms[k]);
            accumulate(gi, &du, &self.image[batch[k] * self.image_dim..(batch[k] + 1) * self.image_dim]);
        }
        Ok(loss)
    }

    /// Loss over the whole data as one batch.
    pub fn loss(&self, params: &[f64]) -> Result<f64> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.loss_on(params, &all)
    }

    pub fn gradient(&self, params: &[f64]) -> Result<Vec<f64>> {
        let all: Vec<usize> = (0..self.len()).collect();
        let mut grad = vec![0.0; params.len()];
        self.gradient_on(params, &all, &mut grad)?;
        Ok(grad)
    }
}

/// Turn a gradient with respect to `u / |u|` into one with respect to `u`.
fn backprop_unit(d: &mut [f64], unit: &[f64], norm: f64) {
    let along: f64 = d.iter().zip(unit).map(|(a, b)| a * b).sum();
    for (x, u) in d.iter_mut().zip(unit) {
        *x = (*x - u * along) / norm;
    }
}

fn accumulate(grad: &mut [f64], du: &[f64], x: &[f64]) {
    let d = x.len();
    for (r, &g) in du.iter().enumerate() {
        for (w, v) in grad[r * d..(r + 1) * d].iter_mut().zip(x) {
            *w += g * v;
        }
    }
}

fn epoch_batches(n: usize, batch_size: usize, rng: Option<&mut ChaCha8Rng>) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    if let Some(rng) = rng {
        use rand::seq::SliceRandom;
        order.shuffle(rng);
    }
    order.chunks(batch_size).filter(|c| c.len() >= 2).map(<[usize]>::to_vec).collect()
}

/// Fit both projections by mini-batch gradient descent.
///
/// `pairs` are `(caption id, image id)`. The reported loss after each epoch
/// is the mean batch loss over consecutive batches in pair order.
pub fn train_contrastive_projection(
    text: &EmbeddingTable,
    images: &EmbeddingTable,
    pairs: &[(String, String)],
    hyper: ContrastiveHyper,
) -> Result<(ContrastiveProjection, TrainReport)> {
    if hyper.batch_size < 2 {
        return Err(Error::InvalidArgument("contrastive batch size must be at least 2".into()));
    }
    if pairs.len() < hyper.batch_size {
        return Err(Error::InsufficientPool { needed: hyper.batch_size, available: pairs.len() });
    }
    if !(hyper.learning_rate > 0.0) {
        return Err(Error::InvalidArgument("learning rate must be positive".into()));
    }
    let mut tx = Vec::with_capacity(pairs.len() * text.dim());
    let mut ix = Vec::with_capacity(pairs.len() * images.dim());
    for (c, i) in pairs {
        tx.extend(text.require(c)?.iter().map(|&v| v as f64));
        ix.extend(images.require(i)?.iter().map(|&v| v as f64));
    }
    let objective = ContrastiveObjective::new(tx, ix, text.dim(), images.dim(), hyper.proj_dim, hyper.temperature)?;
    let init = ContrastiveProjection::initialize(text.dim(), images.dim(), &hyper)?;
    let mut params = init.params();
    let fixed = epoch_batches(objective.len(), hyper.batch_size, None);
    let epoch_loss = |params: &[f64]| -> Result<f64> {
        let total = fixed.iter().map(|b| objective.loss_on(params, b)).sum::<Result<f64>>()?;
        Ok(total / fixed.len() as f64)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    rng.set_stream(1);
    let mut grad = vec![0.0; params.len()];
    let mut history = Vec::with_capacity(hyper.epochs + 1);
    history.push(epoch_loss(&params)?);
    for _ in 0..hyper.epochs {
        for batch in epoch_batches(objective.len(), hyper.batch_size, Some(&mut rng)) {
            objective.gradient_on(&params, &batch, &mut grad)?;
            for (w, g) in params.iter_mut().zip(&grad) {
                *w -= hyper.learning_rate * g;
            }
        }
        history.push(epoch_loss(&params)?);
    }
    let (tm, im) = params.split_at(hyper.proj_dim * text.dim());
    let projection = ContrastiveProjection::new(
        text.dim(),
        images.dim(),
        hyper.proj_dim,
        tm.to_vec(),
        im.to_vec(),
        hyper.temperature,
    )?;
    let report = TrainReport {
        final_loss: *history.last().expect("initial loss recorded"),
        loss_history: history,
        examples: pairs.len(),
        degenerate: false,
    };
    Ok((projection, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn equal_logits_give_log_batch_size() {
        let text = vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        let image = vec![0.0, 1.0, 1.0, 1.0, 3.0, 1.0];
        let obj = ContrastiveObjective::new(text, image, 2, 2, 2, 0.07).unwrap();
        let proj =
            ContrastiveProjection::initialize(2, 2, &ContrastiveHyper { proj_dim: 2, ..Default::default() }).unwrap();
        let all_text_same = obj.loss(&proj.params()).unwrap();
        // All text rows identical, so the image→text direction is uniform.
        assert!(all_text_same > 0.5 * libm::log(3.0));
        let same = ContrastiveObjective::new(vec![1.0; 6], vec![2.0; 6], 2, 2, 2, 0.07).unwrap();
        assert!((same.loss(&proj.params()).unwrap() - libm::log(3.0)).abs() < 1e-12);
    }

    #[test]
    fn scaling_a_projection_leaves_loss_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let text: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
        let image: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
        let obj = ContrastiveObjective::new(text, image, 3, 3, 2, 0.5).unwrap();
        let proj =
            ContrastiveProjection::initialize(3, 3, &ContrastiveHyper { proj_dim: 2, ..Default::default() }).unwrap();
        let mut params = proj.params();
        let base = obj.loss(&params).unwrap();
        params[..6].iter_mut().for_each(|w| *w *= 3.5);
        assert!((obj.loss(&params).unwrap() - base).abs() < 1e-12);
    }

    #[test]
    fn rejects_batch_of_one() {
        let t = EmbeddingTable::new("s", 1, vec!["a".into(), "b".into()], vec![1.0, 2.0]).unwrap();
        let pairs = vec![("a".into(), "a".into()), ("b".into(), "b".into())];
        let hyper = ContrastiveHyper { batch_size: 1, proj_dim: 1, ..Default::default() };
        assert!(matches!(train_contrastive_projection(&t, &t, &pairs, hyper), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn identity_start_on_matched_pairs_improves() {
        let n = 16;
        let ids: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data: Vec<f32> = (0..n * 8).map(|_| rng.random_range(-1.0f32..1.0)).collect();
        let table = EmbeddingTable::new("s", 8, ids.clone(), data).unwrap();
        let pairs: Vec<(String, String)> = ids.iter().map(|i| (i.clone(), i.clone())).collect();
        let hyper = ContrastiveHyper {
            proj_dim: 8,
            batch_size: 8,
            epochs: 20,
            init: ProjectionInit::Identity,
            ..Default::default()
        };
        let (_, report) = train_contrastive_projection(&table, &table, &pairs, hyper).unwrap();
        assert!(report.final_loss < report.loss_history[0]);
    }
}
