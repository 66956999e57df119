use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::EmbeddingTable;
use crate::vector::squared_euclidean;
use crate::{Error, Result};

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: alloc::vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            core::cmp::Ordering::Less => self.parent[ra] = rb,
            core::cmp::Ordering::Greater => self.parent[rb] = ra,
            core::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Group ids whose vectors lie within `epsilon` of each other (Euclidean),
/// closed transitively. Singletons are omitted; each group is sorted and the
/// groups are ordered by their first id.
pub fn deduplicate(vectors: &EmbeddingTable, epsilon: f64) -> Result<Vec<Vec<String>>> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument("epsilon must be >= 0".into()));
    }
    let n = vectors.len();
    let eps_sq = epsilon * epsilon;
    // Sweep along the first coordinate: pairs further apart than epsilon on
    // that axis cannot be within epsilon overall.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vectors.row(a)[0].total_cmp(&vectors.row(b)[0]));
    let mut sets = DisjointSet::new(n);
    for (pos, &i) in order.iter().enumerate() {
        let xi = vectors.row(i)[0] as f64;
        for &j in &order[pos + 1..] {
            if vectors.row(j)[0] as f64 - xi > epsilon {
                break;
            }
            if squared_euclidean(vectors.row(i), vectors.row(j)) <= eps_sq {
                sets.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for i in 0..n {
        let root = sets.find(i);
        groups.entry(root).or_default().push(vectors.ids()[i].clone());
    }
    let mut out: Vec<Vec<String>> = groups
        .into_values()
        .filter(|g| g.len() > 1)
        .map(|mut g| {
            g.sort();
            g
        })
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn table(points: &[f32]) -> EmbeddingTable {
        let ids = (0..points.len()).map(|i| alloc::format!("p{i}")).collect();
        EmbeddingTable::new("s", 1, ids, points.to_vec()).unwrap()
    }

    #[test]
    fn identical_vectors_group_at_zero_epsilon() {
        assert_eq!(deduplicate(&table(&[1.0, 1.0, 5.0]), 0.0).unwrap(), vec![vec!["p0", "p1"]]);
    }

    #[test]
    fn distinct_vectors_yield_nothing() {
        assert!(deduplicate(&table(&[1.0, 2.0, 3.0]), 0.0).unwrap().is_empty());
    }

    #[test]
    fn chains_close_transitively() {
        // a~b and b~c within 1.0, a-c is 1.8 apart.
        assert_eq!(deduplicate(&table(&[0.0, 0.9, 1.8]), 1.0).unwrap(), vec![vec!["p0", "p1", "p2"]]);
    }

    #[test]
    fn negative_epsilon_rejected() {
        assert!(deduplicate(&table(&[0.0]), -1.0).is_err());
    }
}
