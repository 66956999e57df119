use aec_core::classifiers::{NgramFeatures, ProbeObjective, TextObjective};
use aec_core::listener::{ContrastiveHyper, ContrastiveObjective, ContrastiveProjection};
use aec_core::{EmotionDistribution, EmotionLabel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `‖analytic − numeric‖ / max(‖analytic‖, ‖numeric‖)` with central differences.
fn relative_error(loss: impl Fn(&[f64]) -> f64, analytic: &[f64], at: &[f64]) -> f64 {
    let h = 1e-6;
    let mut p = at.to_vec();
    let mut diff = 0.0;
    let mut na = 0.0;
    let mut nn = 0.0;
    for i in 0..p.len() {
        let orig = p[i];
        p[i] = orig + h;
        let up = loss(&p);
        p[i] = orig - h;
        let down = loss(&p);
        p[i] = orig;
        let numeric = (up - down) / (2.0 * h);
        diff += (analytic[i] - numeric).powi(2);
        na += analytic[i].powi(2);
        nn += numeric.powi(2);
    }
    diff.sqrt() / na.sqrt().max(nn.sqrt()).max(1e-300)
}

fn random(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-scale..scale)).collect()
}

#[test]
fn text_cross_entropy_gradient() {
    let docs: Vec<Vec<&str>> = vec![
        vec!["a", "happy", "dog"],
        vec!["a", "sad", "dog"],
        vec!["scary", "dark", "night"],
        vec!["happy", "night"],
        vec!["a", "dark", "dog"],
        vec!["sad", "sad", "night"],
    ];
    let labels = [
        EmotionLabel::Amusement,
        EmotionLabel::Sadness,
        EmotionLabel::Fear,
        EmotionLabel::Contentment,
        EmotionLabel::Fear,
        EmotionLabel::Sadness,
    ];
    let features = NgramFeatures::build(docs.iter().map(Vec::as_slice), 1);
    let data: Vec<(&[&str], EmotionLabel)> = docs.iter().map(Vec::as_slice).zip(labels).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (l2, weighting) in [(0.0, false), (0.01, true)] {
        let obj = TextObjective::new(&features, &data, l2, weighting);
        let w = random(&mut rng, obj.num_params(), 0.5);
        let err = relative_error(|p| obj.loss(p), &obj.gradient(&w), &w);
        assert!(err < 1e-4, "relative error {err}");
    }
}

#[test]
fn probe_kl_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let dim = 4;
    let n = 8;
    let inputs = random(&mut rng, n * dim, 1.0);
    let targets: Vec<EmotionDistribution> = (0..n)
        .map(|_| {
            let counts: [u64; 9] = std::array::from_fn(|_| rng.random_range(0..4));
            let mut counts = counts;
            counts[0] += 1;
            EmotionDistribution::from_counts(&counts).unwrap()
        })
        .collect();
    for l2 in [0.0, 0.05] {
        let obj = ProbeObjective::new(inputs.clone(), targets.clone(), dim, l2).unwrap();
        let w = random(&mut rng, obj.num_params(), 0.5);
        let err = relative_error(|p| obj.loss(p), &obj.gradient(&w), &w);
        assert!(err < 1e-4, "relative error {err}");
    }
}

#[test]
fn contrastive_gradient_on_four_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (dt, di, p) = (5, 3, 4);
    let obj = ContrastiveObjective::new(random(&mut rng, 4 * dt, 1.0), random(&mut rng, 4 * di, 1.0), dt, di, p, 0.07)
        .unwrap();
    let hyper = ContrastiveHyper { proj_dim: p, seed: 9, ..Default::default() };
    let params = ContrastiveProjection::initialize(dt, di, &hyper).unwrap().params();
    let grad = obj.gradient(&params).unwrap();
    let err = relative_error(|w| obj.loss(w).unwrap(), &grad, &params);
    assert!(err < 1e-4, "relative error {err}");
}
