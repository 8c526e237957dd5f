//! Streaming enumeration of free (unrooted) trees, one representative per
//! isomorphism class, in a deterministic order.
//!
//! Mechanism: successor generation of canonical rooted level sequences
//! (Beyer–Hedetniemi) in decreasing lexicographic order, filtered down to the
//! sequences that are the canonical centroid-rooted form of their underlying
//! free tree. The filter keeps exactly one rooted representation per free
//! isomorphism class, so the stream is both duplicate-free and restartable by
//! plain index arithmetic.

use super::{canonical_levelseq, Tree, TreeError};

/// Default guard rail for enumeration size.
pub const DEFAULT_MAX_N: usize = 16;

/// All non-isomorphic free trees on `n` vertices, deterministic order.
pub fn enumerate_trees(n: usize) -> Result<TreeIter, TreeError> {
    enumerate_trees_with_max(n, DEFAULT_MAX_N)
}

/// Same as [`enumerate_trees`] with an explicit size cap.
pub fn enumerate_trees_with_max(n: usize, max_n: usize) -> Result<TreeIter, TreeError> {
    if n == 0 || n > max_n {
        return Err(TreeError::SizeOutOfRange { n, max: max_n });
    }
    Ok(TreeIter {
        state: Some((0..n as u32).collect()),
    })
}

/// Iterator over canonical free trees; see module docs.
pub struct TreeIter {
    state: Option<Vec<u32>>,
}

impl Iterator for TreeIter {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        loop {
            let seq = self.state.as_ref()?;
            let tree = tree_from_levelseq(seq);
            let keep = is_free_canonical(seq, &tree);
            let cur = self.state.take().unwrap();
            self.state = next_levelseq(cur);
            if keep {
                return Some(tree);
            }
        }
    }
}

/// Successor of a canonical rooted level sequence in decreasing lex order;
/// `None` after the star `[0,1,1,…,1]`.
fn next_levelseq(mut l: Vec<u32>) -> Option<Vec<u32>> {
    let n = l.len();
    let p = (0..n).rev().find(|&i| l[i] >= 2)?;
    let q = (0..p)
        .rev()
        .find(|&i| l[i] == l[p] - 1)
        .expect("parent level exists left of p");
    for i in p..n {
        l[i] = l[q + (i - p) % (p - q)];
    }
    Some(l)
}

/// Decode a preorder depth sequence: the parent of vertex `i` is the nearest
/// `j < i` with `depth[j] == depth[i] - 1`.
fn tree_from_levelseq(seq: &[u32]) -> Tree {
    let n = seq.len();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut last_at_depth: Vec<usize> = vec![0; n + 1];
    for (i, &d) in seq.iter().enumerate() {
        if i > 0 {
            edges.push((last_at_depth[(d - 1) as usize], i));
        }
        last_at_depth[d as usize] = i;
    }
    Tree::new(n, edges).expect("level sequence decodes to a tree")
}

/// True iff `seq` is the canonical centroid-rooted sequence of its tree.
fn is_free_canonical(seq: &[u32], tree: &Tree) -> bool {
    let mut best: Option<Vec<u32>> = None;
    for c in tree.centroids() {
        let s = canonical_levelseq(tree, c);
        if best.as_ref().is_none_or(|b| s > *b) {
            best = Some(s);
        }
    }
    best.as_deref() == Some(seq)
}
