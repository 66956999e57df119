use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::EmbeddingTable;
use crate::vector::squared_euclidean;
use crate::{Error, Result};

/// Union over queries of each query's `k` nearest pool vectors (Euclidean),
/// ties broken by ascending pool id.
pub fn select_seed_neighbors(queries: &EmbeddingTable, pool: &EmbeddingTable, k: usize) -> Result<BTreeSet<String>> {
    if queries.is_empty() {
        return Err(Error::Empty("query table"));
    }
    if pool.is_empty() {
        return Err(Error::Empty("pool table"));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    queries.check_compatible(pool)?;

    let mut selected = BTreeSet::new();
    let mut scored: Vec<(f64, &str)> = Vec::with_capacity(pool.len());
    for (_, query) in queries.iter() {
        scored.clear();
        scored.extend(pool.iter().map(|(id, v)| (squared_euclidean(query, v), id)));
        let take = k.min(scored.len());
        let by_distance = |a: &(f64, &str), b: &(f64, &str)| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1));
        if take < scored.len() {
            scored.select_nth_unstable_by(take - 1, by_distance);
        }
        selected.extend(scored[..take].iter().map(|&(_, id)| String::from(id)));
    }
    Ok(selected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn table(rows: &[(&str, [f32; 2])]) -> EmbeddingTable {
        EmbeddingTable::new(
            "resnet",
            2,
            rows.iter().map(|(id, _)| String::from(*id)).collect(),
            rows.iter().flat_map(|(_, v)| *v).collect(),
        )
        .unwrap()
    }

    #[test]
    fn nearer_point_wins() {
        let pool = table(&[("far", [10.0, 10.0]), ("near", [0.0, 0.0])]);
        let q = table(&[("q", [1.0, 1.0])]);
        assert_eq!(select_seed_neighbors(&q, &pool, 1).unwrap(), ["near".into()].into());
    }

    #[test]
    fn union_semantics_and_zero_distance() {
        let pool = table(&[("a", [0.0, 0.0]), ("b", [1.0, 0.0]), ("c", [0.0, 1.0]), ("z", [9.0, 9.0])]);
        let q = table(&[("q1", [0.1, 0.1]), ("q2", [0.2, 0.2])]);
        let got = select_seed_neighbors(&q, &pool, 3).unwrap();
        assert_eq!(got.len(), 3);
        assert!(!got.contains("z"));
        let exact = table(&[("q", [9.0, 9.0])]);
        assert!(select_seed_neighbors(&exact, &pool, 1).unwrap().contains("z"));
    }

    #[test]
    fn ties_break_by_id() {
        let pool = table(&[("b", [1.0, 0.0]), ("a", [-1.0, 0.0])]);
        let q = table(&[("q", [0.0, 0.0])]);
        assert_eq!(select_seed_neighbors(&q, &pool, 1).unwrap(), ["a".into()].into());
    }

    #[test]
    fn mismatches_are_errors() {
        let pool = table(&[("a", [0.0, 0.0])]);
        let q3 = EmbeddingTable::new("resnet", 3, vec!["q".into()], vec![0.0; 3]).unwrap();
        assert!(matches!(select_seed_neighbors(&q3, &pool, 1), Err(Error::DimensionMismatch { .. })));
        let other = EmbeddingTable::new("clip", 2, vec!["q".into()], vec![0.0; 2]).unwrap();
        assert!(matches!(select_seed_neighbors(&other, &pool, 1), Err(Error::SpaceMismatch { .. })));
    }
}
