//! Combinatorial equilateral trees: validation, canonical codes, automorphism
//! orbits, and attachment surgery.
//!
//! Edge lengths are never stored. The spectral layer works in the formal
//! variable `z = c(λ,l)`, so at this level a tree is purely combinatorial and
//! "equilateral" is a property of the interpretation, not of the data.

mod enumerate;

pub use enumerate::{enumerate_trees, enumerate_trees_with_max, TreeIter, DEFAULT_MAX_N};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors from tree construction and surgery.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertex {v} out of range for a tree on {n} vertices")]
    InvalidVertex { v: usize, n: usize },
    #[error("a tree on {n} vertices needs {} edges, got {got}", n.saturating_sub(1))]
    WrongEdgeCount { n: usize, got: usize },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge set is not connected")]
    NotConnected,
    #[error("vertex count {n} outside supported range [1, {max}]")]
    SizeOutOfRange { n: usize, max: usize },
    #[error("attached tree must have at least 2 vertices")]
    AttachedTooSmall,
}

/// A free tree on vertices `0..n`, validated on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Tree {
    /// Build a tree from an edge list; checks count, range, simplicity, and
    /// connectivity (acyclicity follows).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Tree, TreeError> {
        if n == 0 {
            return Err(TreeError::SizeOutOfRange { n, max: usize::MAX });
        }
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(TreeError::InvalidVertex { v: u, n });
            }
            if v >= n {
                return Err(TreeError::InvalidVertex { v, n });
            }
            if u == v {
                return Err(TreeError::SelfLoop { v });
            }
            norm.push((u.min(v), u.max(v)));
        }
        if norm.len() != n - 1 {
            return Err(TreeError::WrongEdgeCount { n, got: norm.len() });
        }
        norm.sort_unstable();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(TreeError::DuplicateEdge { u: w[0].0, v: w[0].1 });
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        // connectivity by BFS
        let mut seen = vec![false; n];
        let mut queue = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push(w);
                }
            }
        }
        if count != n {
            return Err(TreeError::NotConnected);
        }
        Ok(Tree { n, edges: norm, adj })
    }

    /// Path on `n` vertices, labeled along the path.
    pub fn path(n: usize) -> Tree {
        Tree::new(n, (1..n).map(|i| (i - 1, i))).expect("path is a tree")
    }

    /// Star on `n` vertices with center 0.
    pub fn star(n: usize) -> Tree {
        Tree::new(n, (1..n).map(|i| (0, i))).expect("star is a tree")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as sorted `(min, max)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Vertices of degree 1 (for `n == 1` the lone vertex counts as pendant).
    pub fn pendants(&self) -> Vec<usize> {
        if self.n == 1 {
            return vec![0];
        }
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    /// Vertices of degree ≥ 2.
    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) >= 2).collect()
    }

    pub fn is_pendant(&self, v: usize) -> bool {
        self.n == 1 || self.degree(v) == 1
    }

    /// Vertex degrees sorted descending.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Canonical code of the free tree (level encoding rooted at the
    /// centroid; the lexicographically larger choice for bicentroidal trees).
    pub fn canon_code(&self) -> CanonCode {
        let mut best: Option<Vec<u32>> = None;
        for c in self.centroids() {
            let seq = canonical_levelseq(self, c);
            if best.as_ref().is_none_or(|b| seq > *b) {
                best = Some(seq);
            }
        }
        CanonCode(best.expect("tree has a centroid"))
    }

    /// The one or two centroid vertices.
    pub fn centroids(&self) -> Vec<usize> {
        if self.n == 1 {
            return vec![0];
        }
        // subtree sizes from root 0, iterative postorder
        let mut parent = vec![usize::MAX; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut stack = vec![0usize];
        let mut visited = vec![false; self.n];
        visited[0] = true;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in &self.adj[u] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        let mut size = vec![1usize; self.n];
        for &u in order.iter().rev() {
            if parent[u] != usize::MAX {
                size[parent[u]] += size[u];
            }
        }
        let mut best = usize::MAX;
        let mut arg = Vec::new();
        for v in 0..self.n {
            let mut heaviest = self.n - size[v];
            for &w in &self.adj[v] {
                if parent[w] == v {
                    heaviest = heaviest.max(size[w]);
                }
            }
            match heaviest.cmp(&best) {
                std::cmp::Ordering::Less => {
                    best = heaviest;
                    arg = vec![v];
                }
                std::cmp::Ordering::Equal => arg.push(v),
                std::cmp::Ordering::Greater => {}
            }
        }
        arg.sort_unstable();
        arg
    }

    /// Partition of the vertices into automorphism orbits: `u` and `w` share a
    /// block iff the tree rooted at `u` is isomorphic to the tree rooted at
    /// `w` (which is exactly when some automorphism maps one to the other).
    /// Blocks are sorted by smallest member.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
        for v in 0..self.n {
            let code = canonical_levelseq(self, v);
            match groups.iter_mut().find(|(c, _)| *c == code) {
                Some((_, members)) => members.push(v),
                None => groups.push((code, vec![v])),
            }
        }
        let mut orbits: Vec<Vec<usize>> = groups.into_iter().map(|(_, m)| m).collect();
        orbits.sort_by_key(|m| m[0]);
        orbits
    }

    /// True iff `u` and `v` lie in the same automorphism orbit.
    pub fn same_orbit(&self, u: usize, v: usize) -> bool {
        canonical_levelseq(self, u) == canonical_levelseq(self, v)
    }

    /// DOT rendering: pendant vertices as open circles, interior vertices as
    /// closed (filled) circles.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("graph {name} {{\n"));
        for v in 0..self.n {
            if self.is_pendant(v) {
                out.push_str(&format!("  {v} [shape=circle];\n"));
            } else {
                out.push_str(&format!("  {v} [shape=circle, style=filled];\n"));
            }
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// A tree with a distinguished root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    tree: Tree,
    root: usize,
}

impl RootedTree {
    pub fn new(tree: Tree, root: usize) -> Result<RootedTree, TreeError> {
        if root >= tree.n() {
            return Err(TreeError::InvalidVertex { v: root, n: tree.n() });
        }
        Ok(RootedTree { tree, root })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Canonical code of the rooted tree (level encoding from the root).
    pub fn canon_code(&self) -> CanonCode {
        CanonCode(canonical_levelseq(&self.tree, self.root))
    }
}

/// Isomorphism-invariant code: equal codes ⟺ isomorphic trees (root-preserving
/// for rooted input). The encoding is the canonical depth sequence in preorder
/// with children ordered by descending subtree code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonCode(Vec<u32>);

impl CanonCode {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for CanonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Canonical level (depth) sequence of `tree` rooted at `root`: at every
/// vertex the children's sequences are concatenated in descending
/// lexicographic order, which yields the lexicographically largest preorder
/// depth sequence over all plane embeddings.
pub(crate) fn canonical_levelseq(tree: &Tree, root: usize) -> Vec<u32> {
    fn go(tree: &Tree, v: usize, parent: usize, depth: u32) -> Vec<u32> {
        let mut child_seqs: Vec<Vec<u32>> = tree
            .neighbors(v)
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| go(tree, w, v, depth + 1))
            .collect();
        child_seqs.sort_unstable_by(|a, b| b.cmp(a));
        let mut out = vec![depth];
        for s in child_seqs {
            out.extend(s);
        }
        out
    }
    go(tree, root, usize::MAX, 0)
}

/// Identify the root of `attached` with vertex `v` of `base`.
///
/// Labels are deterministic: base labels are preserved; non-root vertices of
/// the attached tree take labels `base.n()`, `base.n()+1`, … in the order of
/// their original labels. The merged vertex has degree
/// `base.degree(v) + attached_degree(root)`.
pub fn attach(base: &Tree, v: usize, attached: &RootedTree) -> Result<Tree, TreeError> {
    if v >= base.n() {
        return Err(TreeError::InvalidVertex { v, n: base.n() });
    }
    if attached.tree().n() < 2 {
        return Err(TreeError::AttachedTooSmall);
    }
    let nb = base.n();
    let root = attached.root();
    let map = |u: usize| -> usize {
        if u == root {
            v
        } else if u < root {
            nb + u
        } else {
            nb + u - 1
        }
    };
    let mut edges = base.edges().to_vec();
    for &(a, b) in attached.tree().edges() {
        edges.push((map(a), map(b)));
    }
    Tree::new(nb + attached.tree().n() - 1, edges)
}

/// File form of a tree, optionally rooted: `{"n": …, "edges": [[i,j],…], "root": …|null}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub root: Option<usize>,
}

impl TreeJson {
    pub fn from_tree(tree: &Tree, root: Option<usize>) -> TreeJson {
        TreeJson {
            n: tree.n(),
            edges: tree.edges().to_vec(),
            root,
        }
    }

    pub fn to_tree(&self) -> Result<Tree, TreeError> {
        let t = Tree::new(self.n, self.edges.iter().copied())?;
        if let Some(r) = self.root {
            if r >= self.n {
                return Err(TreeError::InvalidVertex { v: r, n: self.n });
            }
        }
        Ok(t)
    }

    pub fn to_rooted(&self, root_override: Option<usize>) -> Result<RootedTree, TreeError> {
        let t = self.to_tree()?;
        let root = root_override.or(self.root).unwrap_or(0);
        RootedTree::new(t, root)
    }
}

/// The five-legged spider of the worked examples: legs of lengths
/// (1,1,1,2,2) around a degree-5 center. Returns the tree together with the
/// center and the interior degree-2 vertex of one long leg.
pub fn example_spider() -> (Tree, usize, usize) {
    let t = Tree::new(
        8,
        [(0, 1), (0, 2), (0, 3), (0, 4), (4, 5), (0, 6), (6, 7)],
    )
    .expect("spider is a tree");
    (t, 0, 4)
}
