use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::corpus::Vocabulary;
use crate::{Error, Result};

/// Binary Huffman code over word frequencies, for hierarchical softmax.
///
/// Inner nodes are numbered `0..V-1` in creation order; the root is the last
/// one. For every word, `path` lists the inner nodes from the root down and
/// `code` the branch taken at each (`false` = first-merged child).
#[derive(Debug, Clone, PartialEq)]
pub struct HuffmanTree {
    paths: Vec<Vec<u32>>,
    codes: Vec<Vec<bool>>,
}

impl HuffmanTree {
    /// Repeatedly merges the two lightest nodes. Equal weights prefer the
    /// lower node id; leaves take ids `0..V` (the vocabulary ids) and merged
    /// nodes are appended after them.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let leaves = counts.len();
        if leaves < 2 {
            return Err(Error::EmptyVocabulary);
        }
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| Reverse((c, i)))
            .collect();
        // parent[node] and the branch bit leading into it
        let mut parent = vec![usize::MAX; 2 * leaves - 1];
        let mut bit = vec![false; 2 * leaves - 1];
        let mut next = leaves;
        while heap.len() > 1 {
            let Reverse((w1, n1)) = heap.pop().unwrap();
            let Reverse((w2, n2)) = heap.pop().unwrap();
            parent[n1] = next;
            parent[n2] = next;
            bit[n2] = true;
            heap.push(Reverse((w1 + w2, next)));
            next += 1;
        }
        let root = next - 1;

        let mut paths = Vec::with_capacity(leaves);
        let mut codes = Vec::with_capacity(leaves);
        for leaf in 0..leaves {
            let mut path = Vec::new();
            let mut code = Vec::new();
            let mut node = leaf;
            while node != root {
                code.push(bit[node]);
                node = parent[node];
                path.push((node - leaves) as u32);
            }
            path.reverse();
            code.reverse();
            paths.push(path);
            codes.push(code);
        }
        Ok(HuffmanTree { paths, codes })
    }

    pub fn path(&self, word: u32) -> &[u32] {
        &self.paths[word as usize]
    }

    pub fn code(&self, word: u32) -> &[bool] {
        &self.codes[word as usize]
    }

    pub fn leaf_count(&self) -> usize {
        self.paths.len()
    }

    pub fn inner_count(&self) -> usize {
        self.paths.len() - 1
    }
}

pub fn build_huffman(vocab: &Vocabulary) -> Result<HuffmanTree> {
    HuffmanTree::from_counts(vocab.counts())
}
