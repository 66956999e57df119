use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A single embedding with its id and the name of the space it lives in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    pub id: String,
    pub values: Vec<f32>,
    pub space_tag: String,
}

/// Fixed-dimension vectors from one embedding space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    space_tag: String,
    dim: usize,
    ids: Vec<String>,
    data: Vec<f32>,
    index: BTreeMap<String, usize>,
}

impl EmbeddingTable {
    /// Build a table from parallel ids and row-major values.
    pub fn new(space_tag: impl Into<String>, dim: usize, ids: Vec<String>, data: Vec<f32>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be positive".into()));
        }
        if data.len() != ids.len() * dim {
            return Err(Error::DimensionMismatch { expected: ids.len() * dim, found: data.len() });
        }
        let mut index = BTreeMap::new();
        for (row, id) in ids.iter().enumerate() {
            if data[row * dim..(row + 1) * dim].iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(id.clone()));
            }
            if index.insert(id.clone(), row).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        Ok(Self { space_tag: space_tag.into(), dim, ids, data, index })
    }

    pub fn from_vectors(vectors: Vec<EmbeddingVector>) -> Result<Self> {
        let first = vectors.first().ok_or(Error::Empty("embedding vectors"))?;
        let (space_tag, dim) = (first.space_tag.clone(), first.values.len());
        let mut ids = Vec::with_capacity(vectors.len());
        let mut data = Vec::with_capacity(vectors.len() * dim);
        for v in vectors {
            if v.values.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.values.len() });
            }
            if v.space_tag != space_tag {
                return Err(Error::SpaceMismatch { expected: space_tag, found: v.space_tag });
            }
            ids.push(v.id);
            data.extend_from_slice(&v.values);
        }
        Self::new(space_tag, dim, ids, data)
    }

    pub fn space_tag(&self) -> &str {
        &self.space_tag
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Row-major payload.
    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn row(&self, row: usize) -> &[f32] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Option<&[f32]> {
        self.position(id).map(|r| self.row(r))
    }

    pub fn require(&self, id: &str) -> Result<&[f32]> {
        self.get(id).ok_or_else(|| Error::MissingEmbedding(String::from(id)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.ids.iter().enumerate().map(move |(r, id)| (id.as_str(), self.row(r)))
    }

    /// Error unless `other` has the same dimension and space tag.
    pub fn check_compatible(&self, other: &EmbeddingTable) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.space_tag != other.space_tag {
            return Err(Error::SpaceMismatch { expected: self.space_tag.clone(), found: other.space_tag.clone() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_bad_tables() {
        let ids = vec![String::from("a"), String::from("b")];
        assert!(EmbeddingTable::new("s", 2, ids.clone(), vec![0.0; 3]).is_err());
        assert_eq!(EmbeddingTable::new("s", 1, ids.clone(), vec![0.0, f32::NAN]), Err(Error::NonFinite("b".into())));
        let dup = vec![String::from("a"), String::from("a")];
        assert_eq!(EmbeddingTable::new("s", 1, dup, vec![0.0, 1.0]), Err(Error::DuplicateId("a".into())));
    }

    #[test]
    fn from_vectors_checks_space() {
        let v = |id: &str, tag: &str| EmbeddingVector { id: id.into(), values: vec![1.0, 2.0], space_tag: tag.into() };
        assert!(matches!(
            EmbeddingTable::from_vectors(vec![v("a", "x"), v("b", "y")]),
            Err(Error::SpaceMismatch { .. })
        ));
        let t = EmbeddingTable::from_vectors(vec![v("a", "x"), v("b", "x")]).unwrap();
        assert_eq!(t.get("b"), Some(&[1.0f32, 2.0][..]));
        assert_eq!(t.require("c"), Err(Error::MissingEmbedding("c".into())));
    }
}
