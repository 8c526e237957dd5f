//! Shared test oracles, independent of the library paths they check.
//!
//! - labeled-tree generation by Prüfer decoding (not the library decoder);
//! - isomorphism and orbit oracles by explicit permutation search;
//! - a string-based AHU canonical form rooted at the centroid;
//! - cofactor-expansion determinants;
//! - exact invariant checks for characteristic functions.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use spectree::poly::IntPoly;
use spectree::spectral::CharFn;

pub type Edges = Vec<(usize, usize)>;

fn normalize(edges: &[(usize, usize)]) -> Edges {
    let mut e: Edges = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    e.sort_unstable();
    e
}

// ---- labeled trees by Prüfer decoding ----

/// Decode a Prüfer sequence without going through the library.
pub fn prufer_decode(n: usize, seq: &[usize]) -> Edges {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut todo: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| degree[v] == 1).collect();
    for &s in seq {
        let leaf = *todo.iter().next().unwrap();
        todo.remove(&leaf);
        edges.push((leaf.min(s), leaf.max(s)));
        degree[s] -= 1;
        if degree[s] == 1 {
            todo.insert(s);
        }
    }
    let rest: Vec<usize> = todo.into_iter().collect();
    assert_eq!(rest.len(), 2);
    edges.push((rest[0], rest[1]));
    normalize(&edges)
}

/// Every labeled tree on `n` vertices (all `n^(n-2)` Prüfer sequences).
pub fn all_labeled_trees(n: usize) -> Vec<Edges> {
    match n {
        1 => vec![vec![]],
        2 => vec![vec![(0, 1)]],
        _ => {
            let count = n.pow((n - 2) as u32);
            let mut out = Vec::with_capacity(count);
            let mut seq = vec![0usize; n - 2];
            loop {
                out.push(prufer_decode(n, &seq));
                // odometer
                let mut i = 0;
                loop {
                    if i == seq.len() {
                        return out;
                    }
                    seq[i] += 1;
                    if seq[i] < n {
                        break;
                    }
                    seq[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

// ---- permutation oracles ----

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

fn apply_perm(edges: &[(usize, usize)], perm: &[usize]) -> Edges {
    normalize(
        &edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect::<Edges>(),
    )
}

/// Brute-force free-tree isomorphism over all `n!` relabelings.
pub fn perm_isomorphic(n: usize, e1: &[(usize, usize)], e2: &[(usize, usize)]) -> bool {
    let t2 = normalize(e2);
    permutations(n).iter().any(|p| apply_perm(e1, p) == t2)
}

/// Brute-force rooted isomorphism: some relabeling maps edges to edges and
/// root to root.
pub fn perm_isomorphic_rooted(
    n: usize,
    e1: &[(usize, usize)],
    r1: usize,
    e2: &[(usize, usize)],
    r2: usize,
) -> bool {
    let t2 = normalize(e2);
    permutations(n)
        .iter()
        .any(|p| p[r1] == r2 && apply_perm(e1, p) == t2)
}

/// Automorphism orbits by explicit search over all `n!` permutations.
pub fn brute_orbits(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let base = normalize(edges);
    let mut reach: Vec<std::collections::BTreeSet<usize>> =
        (0..n).map(|v| [v].into_iter().collect()).collect();
    for p in permutations(n) {
        if apply_perm(&base, &p) == base {
            for v in 0..n {
                reach[v].insert(p[v]);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let members: Vec<usize> = reach[v].iter().copied().collect();
        for &m in &members {
            seen[m] = true;
        }
        orbits.push(members);
    }
    orbits
}

// ---- independent canonical form ----

/// String AHU code of the tree rooted at `root` (children sorted as strings).
fn ahu_string(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| ahu_string(adj, w, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Centroid-rooted canonical string of a free tree; independent of the
/// library's level-sequence canonicalization.
pub fn oracle_canon(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    if n == 1 {
        return "()".into();
    }
    let mut best = usize::MAX;
    let mut centroids = Vec::new();
    // subtree sizes rooted at 0 via DFS parent tracking
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0usize];
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    let mut sz = vec![1usize; n];
    for &u in order.iter().rev() {
        if parent[u] != usize::MAX {
            sz[parent[u]] += sz[u];
        }
    }
    for v in 0..n {
        let mut h = n - sz[v];
        for &w in &adj[v] {
            if parent[w] == v {
                h = h.max(sz[w]);
            }
        }
        match h.cmp(&best) {
            std::cmp::Ordering::Less => {
                best = h;
                centroids = vec![v];
            }
            std::cmp::Ordering::Equal => centroids.push(v),
            std::cmp::Ordering::Greater => {}
        }
    }
    centroids
        .into_iter()
        .map(|c| ahu_string(&adj, c, usize::MAX))
        .max()
        .unwrap()
}

// ---- determinant oracle ----

/// Cofactor-expansion determinant, exponential time, for cross-checking the
/// fraction-free elimination on small matrices.
pub fn cofactor_det(m: &[Vec<IntPoly>]) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return IntPoly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = IntPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<IntPoly>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&cofactor_det(&minor));
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

// ---- characteristic-function invariants ----

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Root range: every root of `P` lies in `[-1, 1]`, and all roots are real
/// (the square-free part has as many distinct real roots as its degree).
pub fn check_root_range(f: &CharFn) -> Result<(), String> {
    let p = &f.poly;
    if p.is_zero() {
        return Err("zero polynomial".into());
    }
    if p.degree() == Some(0) {
        return Ok(());
    }
    let sf = p.squarefree_part().map_err(|e| e.to_string())?;
    let deg = sf.degree().unwrap();
    let total = p.count_real_roots_all().map_err(|e| e.to_string())?;
    if total != deg {
        return Err(format!("{total} real roots but square-free degree {deg}"));
    }
    let inside = p
        .count_real_roots(&rat(-1), &rat(1))
        .map_err(|e| e.to_string())?
        + usize::from(p.sign_at(&rat(-1)) == 0);
    if inside != deg {
        return Err(format!("only {inside} of {deg} roots in [-1, 1]"));
    }
    Ok(())
}

/// Parity: `P(-z) = (-1)^(deg P) P(z)`, i.e. only coefficients with the
/// degree's parity are nonzero.
pub fn check_parity(f: &CharFn) -> Result<(), String> {
    let p = &f.poly;
    let Some(deg) = p.degree() else {
        return Err("zero polynomial".into());
    };
    for (i, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() && (deg - i) % 2 != 0 {
            return Err(format!("coefficient {c} at z^{i} breaks parity of degree {deg}"));
        }
    }
    Ok(())
}

/// Leading coefficient equals the product of the degrees of the non-deleted
/// vertices.
pub fn check_leading(f: &CharFn, kept_degrees: &[usize]) -> Result<(), String> {
    let expect: BigInt = kept_degrees
        .iter()
        .fold(BigInt::from(1), |acc, &d| acc * BigInt::from(d as i64));
    match f.poly.leading_coeff() {
        Some(l) if *l == expect => Ok(()),
        other => Err(format!("leading {other:?}, expected {expect}")),
    }
}

/// Weak interlacing of the Dirichlet roots between the Neumann roots, both
/// with multiplicity, checked exactly via Sturm counts: for every threshold,
/// `#D(≤t) ≤ #N(≤t) ≤ #D(≤t) + 1`.
pub fn check_interlacing(pn: &IntPoly, pd: &IntPoly) -> Result<(), String> {
    let distinct = pn.mul(pd).squarefree_part().map_err(|e| e.to_string())?;
    if distinct.degree() == Some(0) {
        return Ok(());
    }
    let intervals = distinct.isolate_real_roots().map_err(|e| e.to_string())?;
    let mult_in = |p: &IntPoly, iv: &spectree::poly::RootInterval| -> Result<u32, String> {
        let mut m = 0u32;
        for (factor, mult) in p.squarefree_decomposition().map_err(|e| e.to_string())? {
            let hit = if iv.lo == iv.hi {
                factor.sign_at(&iv.lo) == 0
            } else {
                factor
                    .count_real_roots(&iv.lo, &iv.hi)
                    .map_err(|e| e.to_string())?
                    == 1
            };
            if hit {
                m += mult;
            }
        }
        Ok(m)
    };
    let mut cum_n = 0u32;
    let mut cum_d = 0u32;
    for iv in &intervals {
        cum_n += mult_in(pn, iv)?;
        cum_d += mult_in(pd, iv)?;
        if !(cum_d <= cum_n && cum_n <= cum_d + 1) {
            return Err(format!(
                "interlacing violated after root in [{}, {}]: N-count {cum_n}, D-count {cum_d}",
                iv.lo, iv.hi
            ));
        }
    }
    Ok(())
}
