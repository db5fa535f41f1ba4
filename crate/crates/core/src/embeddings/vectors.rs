use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A lookup table from words to dense vectors.
///
/// This is all the similarity scorers need, and all a saved model file
/// carries.
#[derive(Debug, Clone, PartialEq)]
pub struct WordVectors {
    words: Vec<String>,
    index: BTreeMap<String, u32>,
    dim: usize,
    data: Vec<f64>,
}

impl WordVectors {
    /// `data` holds `words.len()` rows of `dim` values.
    pub fn new(words: Vec<String>, dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1"));
        }
        if data.len() != words.len() * dim {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: words.len() * dim,
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("vectors must be finite"));
        }
        let mut index = BTreeMap::new();
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i as u32).is_some() {
                return Err(Error::InvalidConfig("duplicate word in vector table"));
            }
        }
        Ok(WordVectors {
            words,
            index,
            dim,
            data,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn row(&self, id: u32) -> &[f64] {
        let start = id as usize * self.dim;
        &self.data[start..start + self.dim]
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.id(word).map(|id| self.row(id))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Multiplies every component by `factor`.
    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|x| *x *= factor);
    }

    /// Vectors of the in-vocabulary tokens, in order and with repetition.
    pub fn lookup_all<'a, S: AsRef<str>>(
        &'a self,
        tokens: &'a [S],
    ) -> impl Iterator<Item = &'a [f64]> + 'a {
        tokens.iter().filter_map(move |t| self.get(t.as_ref()))
    }
}
