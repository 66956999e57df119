use std::collections::HashMap;

use aec_core::metrics::{
    bleu, bleu_counts, clip_div_cos, corpus_bleu, lcs_len, lcs_subsample, max_lcs, rouge_l, unique_fraction, ROUGE_BETA,
};
use proptest::prelude::*;

const VOCAB: [&str; 6] = ["a", "b", "c", "d", "the", "sky"];

fn sentence(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(&VOCAB[..]).prop_map(String::from), 1..=max)
}

/// Count occurrences of `gram` in `tokens` by scanning every position.
fn occurrences(tokens: &[String], gram: &[String]) -> usize {
    if gram.len() > tokens.len() {
        return 0;
    }
    (0..=tokens.len() - gram.len()).filter(|&i| tokens[i..i + gram.len()] == *gram).count()
}

/// Clipped matches and totals per order, by scanning.
fn naive_counts(cand: &[String], refs: &[Vec<String>]) -> ([u64; 4], [u64; 4]) {
    let (mut m, mut t) = ([0u64; 4], [0u64; 4]);
    for k in 1..=4 {
        let total = cand.len().saturating_sub(k - 1);
        let mut seen: Vec<&[String]> = Vec::new();
        for i in 0..total {
            let g = &cand[i..i + k];
            if seen.contains(&g) {
                continue;
            }
            seen.push(g);
            let r = refs.iter().map(|r| occurrences(r, g)).max().unwrap();
            m[k - 1] += occurrences(cand, g).min(r) as u64;
        }
        t[k - 1] = total as u64;
    }
    (m, t)
}

fn naive_bleu(cand: &[String], refs: &[Vec<String>], n: usize, smoothing: bool) -> f64 {
    let mut logs = 0.0;
    for k in 1..=n {
        let total = cand.len().saturating_sub(k - 1);
        let mut seen: Vec<&[String]> = Vec::new();
        let mut matched = 0;
        for i in 0..total {
            let g = &cand[i..i + k];
            if seen.contains(&g) {
                continue;
            }
            seen.push(g);
            let c = occurrences(cand, g);
            let r = refs.iter().map(|r| occurrences(r, g)).max().unwrap();
            matched += c.min(r);
        }
        let p = if matched > 0 {
            matched as f64 / total as f64
        } else if smoothing {
            1.0 / (total as f64 + 1.0)
        } else {
            return 0.0;
        };
        logs += p.ln();
    }
    let c = cand.len() as i64;
    let r = refs.iter().map(|r| r.len() as i64).min_by_key(|&r| ((r - c).abs(), r)).unwrap();
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    bp * (logs / n as f64).exp()
}

fn naive_lcs(a: &[String], b: &[String], memo: &mut HashMap<(usize, usize), usize>) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    if let Some(&v) = memo.get(&(a.len(), b.len())) {
        return v;
    }
    let v = if a[0] == b[0] {
        1 + naive_lcs(&a[1..], &b[1..], memo)
    } else {
        naive_lcs(&a[1..], b, memo).max(naive_lcs(a, &b[1..], memo))
    };
    memo.insert((a.len(), b.len()), v);
    v
}

fn naive_rouge(cand: &[String], refs: &[Vec<String>]) -> f64 {
    refs.iter()
        .map(|r| {
            let l = naive_lcs(cand, r, &mut HashMap::new()) as f64;
            if l == 0.0 {
                return 0.0;
            }
            let (p, rec) = (l / cand.len() as f64, l / r.len() as f64);
            let b2 = ROUGE_BETA * ROUGE_BETA;
            (1.0 + b2) * p * rec / (rec + b2 * p)
        })
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bleu_matches_naive_counting(
        cand in sentence(20),
        refs in prop::collection::vec(sentence(20), 1..4),
        n in 1usize..=4,
        smoothing in any::<bool>(),
    ) {
        let counts = bleu_counts(&cand, &refs).unwrap();
        let (m, t) = naive_counts(&cand, &refs);
        prop_assert_eq!(counts.matches, m);
        prop_assert_eq!(counts.totals, t);
        let fast = bleu(&cand, &refs, n, smoothing).unwrap();
        let slow = naive_bleu(&cand, &refs, n, smoothing);
        prop_assert!((fast - slow).abs() <= 1e-12 * slow.max(1e-300), "{} vs {}", fast, slow);
        prop_assert!((0.0..=1.0).contains(&fast));
    }

    #[test]
    fn rouge_matches_recursive_lcs(cand in sentence(20), refs in prop::collection::vec(sentence(20), 1..4)) {
        let fast = rouge_l(&cand, &refs).unwrap();
        prop_assert_eq!(fast, naive_rouge(&cand, &refs));
        prop_assert!((0.0..=1.0).contains(&fast));
    }

    #[test]
    fn lcs_matches_recursion(a in sentence(20), b in sentence(20)) {
        prop_assert_eq!(lcs_len(&a, &b), naive_lcs(&a, &b, &mut HashMap::new()));
    }

    #[test]
    fn corpus_bleu_of_one_item_is_sentence_bleu(cand in sentence(12), refs in prop::collection::vec(sentence(12), 1..3)) {
        let items = [(cand.as_slice(), refs.as_slice())];
        prop_assert_eq!(corpus_bleu(&items, 4, false).unwrap(), bleu(&cand, &refs, 4, false).unwrap());
    }

    #[test]
    fn max_lcs_grows_with_the_sample(
        generation in sentence(15),
        training in prop::collection::vec(sentence(15), 1..40),
        seed in any::<u64>(),
        small in 1usize..20,
        extra in 0usize..20,
    ) {
        let pick = |size| -> Vec<Vec<String>> {
            lcs_subsample(training.len(), size, seed).into_iter().map(|i| training[i].clone()).collect()
        };
        let a = max_lcs(&generation, &pick(small)).unwrap().percent;
        let b = max_lcs(&generation, &pick(small + extra)).unwrap().percent;
        prop_assert!(a <= b);
        prop_assert!((0.0..=100.0).contains(&b));
    }

    #[test]
    fn unique_fraction_in_range(texts in prop::collection::vec("[ab]{1,2}", 1..20)) {
        let u = unique_fraction(&texts).unwrap();
        prop_assert!(u > 0.0 && u <= 100.0);
    }

    #[test]
    fn div_cos_is_permutation_invariant_and_bounded(
        vectors in prop::collection::vec(prop::collection::vec(-1.0f32..1.0, 3), 2..10),
        rotate in 0usize..10,
    ) {
        prop_assume!(vectors.iter().all(|v| v.iter().any(|x| x.abs() > 1e-3)));
        let refs: Vec<&[f32]> = vectors.iter().map(Vec::as_slice).collect();
        let mut shuffled = refs.clone();
        let len = shuffled.len();
        shuffled.rotate_left(rotate % len);
        let a = clip_div_cos(&refs).unwrap();
        let b = clip_div_cos(&shuffled).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&a));
    }

    #[test]
    fn div_cos_of_positive_multiples_is_one(base in prop::collection::vec(0.1f32..1.0, 4), scales in prop::collection::vec(0.5f32..4.0, 2..6)) {
        let vectors: Vec<Vec<f32>> = scales.iter().map(|s| base.iter().map(|b| b * s).collect()).collect();
        let refs: Vec<&[f32]> = vectors.iter().map(Vec::as_slice).collect();
        prop_assert!((clip_div_cos(&refs).unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn bleu_hand_example() {
    let cand: Vec<String> = ["the", "the", "the"].map(String::from).to_vec();
    let refs = vec![["the", "cat"].map(String::from).to_vec()];
    assert!((bleu(&cand, &refs, 1, false).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((naive_bleu(&cand, &refs, 1, false) - 1.0 / 3.0).abs() < 1e-15);
}
