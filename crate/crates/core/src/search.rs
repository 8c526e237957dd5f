//! Exhaustive search pipelines over enumerated trees: cospectral pairs,
//! equal-M vertex pairs, theorem verification sweeps, and unequal-degree
//! witnesses.
//!
//! Determinism: records are keyed by the tree's position in the enumeration
//! stream and sorted by it, so identical configs produce byte-identical
//! reports, sharded runs merge to the unsharded record set, and `--jobs`
//! parallelism never reorders output.

use crate::poly::IntPoly;
use crate::spectral::{
    attach_char_fn, char_pair, cospectral, lemma32_check, neumann_char_fn, CharFn, CharPair,
    PendantMode, SpectralError,
};
use crate::trees::{
    attach, enumerate_trees_with_max, RootedTree, Tree, TreeError, DEFAULT_MAX_N,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("n = {n} outside supported range [{min}, {max}]")]
    InputRange { n: usize, min: usize, max: usize },
    #[error("attachment family must not be empty")]
    EmptyFamily,
    #[error("shard index {index} out of range for {count} shards")]
    BadShard { index: usize, count: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Knobs shared by all pipelines.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Guard rail for enumeration size.
    pub max_n: usize,
    /// Also scan vertex pairs involving pendant roots. Pendant pairs are
    /// outside the scope of the attachment theorems, so for them the direct
    /// pair-equality criterion is used instead of the fast one.
    pub include_pendant_roots: bool,
    /// Process only trees with `index % count == index_of_shard`.
    pub shard: Option<(usize, usize)>,
    /// Worker threads for the scan; 0 or 1 runs sequentially.
    pub jobs: usize,
    /// Seed echoed into reports and used by sampled subroutines.
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_n: DEFAULT_MAX_N,
            include_pendant_roots: false,
            shard: None,
            jobs: 1,
            seed: crate::numerics::DEFAULT_SAMPLE_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    CospectralPairs,
    EqualM,
    TheoremVerify,
    Remark35,
}

/// Full configuration echo embedded in every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: SearchMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub pendant_mode: PendantMode,
    pub include_pendant_roots: bool,
    pub shard: String,
    pub jobs: usize,
    pub seed: u64,
    pub max_n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attach_family: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub trees_scanned: u64,
    pub pairs_scanned: u64,
    /// Vertex pairs skipped from records because an automorphism maps one
    /// root to the other (trivially equal data).
    pub orbit_pruned: u64,
    pub records: u64,
    pub violations: u64,
}

/// A tree occurrence in a report: enumeration index, canonical code, and the
/// deterministic edge list the vertex labels refer to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeRef {
    pub index: usize,
    pub canon: String,
    pub edges: Vec<(usize, usize)>,
}

impl TreeRef {
    fn new(index: usize, tree: &Tree) -> TreeRef {
        TreeRef {
            index,
            canon: tree.canon_code().to_string(),
            edges: tree.edges().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    /// Trees sharing one cospectrality key `(e, primitive P)`.
    CospectralGroup {
        s_exp: i64,
        poly: IntPoly,
        members: Vec<TreeRef>,
    },
    /// A vertex pair indistinguishable by any attachment.
    EqualMPair {
        tree: TreeRef,
        v1: usize,
        v2: usize,
        degree: usize,
        neumann: CharFn,
        dirichlet: CharFn,
        attach_p2: CharFn,
    },
    /// Cospectral attachments at vertices of unequal degree: the merged
    /// functions are proportional with constant `c ≠ 1`, not identical.
    Remark35Witness {
        tree: TreeRef,
        v1: usize,
        v2: usize,
        d1: usize,
        d2: usize,
        c: String,
        phi1: CharFn,
        phi2: CharFn,
    },
    /// A failed consistency check; any occurrence is fatal for the run.
    Violation {
        tree: TreeRef,
        v1: usize,
        v2: usize,
        detail: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub complete: bool,
    pub stats: SearchStats,
    pub records: Vec<Record>,
}

impl SearchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flat CSV: `#`-prefixed config header, then one row per record member.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# mode={:?} pendant_mode={:?} shard={} jobs={} seed={} complete={}\n",
            self.config.mode,
            self.config.pendant_mode,
            self.config.shard,
            self.config.jobs,
            self.config.seed,
            self.complete
        ));
        out.push_str(&format!(
            "# trees_scanned={} pairs_scanned={} orbit_pruned={} records={} violations={}\n",
            self.stats.trees_scanned,
            self.stats.pairs_scanned,
            self.stats.orbit_pruned,
            self.stats.records,
            self.stats.violations
        ));
        out.push_str("kind,tree_index,canon,edges,v1,v2,data1,data2,data3\n");
        let fmt_edges = |edges: &[(usize, usize)]| {
            edges
                .iter()
                .map(|(u, v)| format!("{u}-{v}"))
                .collect::<Vec<_>>()
                .join(";")
        };
        for r in &self.records {
            match r {
                Record::CospectralGroup { s_exp, poly, members } => {
                    for m in members {
                        out.push_str(&format!(
                            "cospectral_group,{},{},{},,,s^{s_exp},{},\n",
                            m.index,
                            m.canon,
                            fmt_edges(&m.edges),
                            poly
                        ));
                    }
                }
                Record::EqualMPair {
                    tree,
                    v1,
                    v2,
                    degree,
                    neumann,
                    dirichlet,
                    attach_p2,
                } => {
                    out.push_str(&format!(
                        "equal_m_pair,{},{},{},{v1},{v2},deg={degree} N={neumann},D={dirichlet},attachP2={attach_p2}\n",
                        tree.index,
                        tree.canon,
                        fmt_edges(&tree.edges)
                    ));
                }
                Record::Remark35Witness {
                    tree,
                    v1,
                    v2,
                    d1,
                    d2,
                    c,
                    phi1,
                    phi2,
                } => {
                    out.push_str(&format!(
                        "remark35,{},{},{},{v1},{v2},d1={d1};d2={d2};C={c},phi1={phi1},phi2={phi2}\n",
                        tree.index,
                        tree.canon,
                        fmt_edges(&tree.edges)
                    ));
                }
                Record::Violation { tree, v1, v2, detail } => {
                    out.push_str(&format!(
                        "violation,{},{},{},{v1},{v2},{},,\n",
                        tree.index,
                        tree.canon,
                        fmt_edges(&tree.edges),
                        detail.replace(',', ";")
                    ));
                }
            }
        }
        out
    }
}

fn shard_string(opts: &SearchOptions) -> String {
    match opts.shard {
        Some((i, k)) => format!("{i}/{k}"),
        None => "0/1".into(),
    }
}

fn validate_shard(opts: &SearchOptions) -> Result<(), SearchError> {
    if let Some((i, k)) = opts.shard {
        if k == 0 || i >= k {
            return Err(SearchError::BadShard { index: i, count: k });
        }
    }
    Ok(())
}

/// Enumerate trees on `n` vertices with global indices, restricted to this
/// shard, then map `f` over them (in parallel when `jobs > 1`), preserving
/// enumeration order in the result.
fn scan_trees<T: Send, F: Fn(usize, &Tree) -> T + Sync>(
    n: usize,
    opts: &SearchOptions,
    f: F,
) -> Result<Vec<(usize, T)>, SearchError> {
    validate_shard(opts)?;
    let (shard_i, shard_k) = opts.shard.unwrap_or((0, 1));
    let trees: Vec<(usize, Tree)> = enumerate_trees_with_max(n, opts.max_n)?
        .enumerate()
        .filter(|(i, _)| i % shard_k == shard_i)
        .collect();
    let run = || {
        trees
            .par_iter()
            .map(|(i, t)| (*i, f(*i, t)))
            .collect::<Vec<_>>()
    };
    let mut results = if opts.jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .expect("thread pool")
            .install(run)
    } else {
        trees.iter().map(|(i, t)| (*i, f(*i, t))).collect()
    };
    results.sort_by_key(|(i, _)| *i);
    Ok(results)
}

/// Group all non-isomorphic trees on `n` vertices by the root-free
/// cospectrality key `(e, primitive P)` and report every group of size ≥ 2.
///
/// The key is the Neumann characteristic function of the whole tree: with
/// Dirichlet pendants this is the deleted-pendant determinant with
/// `e = r − 1`; with Neumann pendants the full determinant with `e = −1`.
pub fn find_cospectral_pairs(
    n: usize,
    pendant_mode: PendantMode,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    if n < 2 || n > opts.max_n {
        return Err(SearchError::InputRange {
            n,
            min: 2,
            max: opts.max_n,
        });
    }
    let keyed = scan_trees(n, opts, |i, t| {
        let f = neumann_char_fn(t, pendant_mode).expect("n >= 2");
        let key = f.normalized().expect("pencil determinant is nonzero");
        ((key.s_exp, key.poly), TreeRef::new(i, t))
    })?;
    let trees_scanned = keyed.len() as u64;
    let mut groups: Vec<((i64, IntPoly), Vec<TreeRef>)> = Vec::new();
    for (_, (key, tref)) in keyed {
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(tref),
            None => groups.push((key, vec![tref])),
        }
    }
    groups.retain(|(_, members)| members.len() >= 2);
    groups.sort_by_key(|(_, members)| members[0].index);

    let mut stats = SearchStats::default();
    stats.trees_scanned = trees_scanned;
    stats.pairs_scanned = groups
        .iter()
        .map(|(_, m)| (m.len() * (m.len() - 1) / 2) as u64)
        .sum();
    stats.records = groups.len() as u64;
    let records = groups
        .into_iter()
        .map(|((s_exp, poly), members)| Record::CospectralGroup {
            s_exp,
            poly,
            members,
        })
        .collect();
    Ok(SearchReport {
        config: SearchConfig {
            mode: SearchMode::CospectralPairs,
            n: Some(n),
            n_max: None,
            pendant_mode,
            include_pendant_roots: opts.include_pendant_roots,
            shard: shard_string(opts),
            jobs: opts.jobs,
            seed: opts.seed,
            max_n: opts.max_n,
            attach_family: None,
        },
        complete: true,
        stats,
        records,
    })
}

/// Candidate vertex pairs for one tree under the current options: unordered,
/// distinct, interior unless pendant roots are enabled.
fn eligible_pairs(tree: &Tree, include_pendants: bool) -> Vec<(usize, usize)> {
    let verts: Vec<usize> = if include_pendants {
        (0..tree.n()).collect()
    } else {
        tree.interior_vertices()
    };
    let mut out = Vec::new();
    for (a, &v1) in verts.iter().enumerate() {
        for &v2 in &verts[a + 1..] {
            out.push((v1, v2));
        }
    }
    out
}

struct PairScan {
    records: Vec<Record>,
    pairs_scanned: u64,
    orbit_pruned: u64,
    violations: u64,
}

/// Fast equal-M search: attach a single edge (`P₂`) at both candidate roots
/// and compare the results. Every hit is cross-checked against direct
/// equality of the Dirichlet characteristic functions; a disagreement is a
/// fatal consistency violation and is recorded as such.
pub fn find_equal_m_vertex_pairs(
    n: usize,
    pendant_mode: PendantMode,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    if n < 4 || n > opts.max_n {
        return Err(SearchError::InputRange {
            n,
            min: 4,
            max: opts.max_n,
        });
    }
    let include_pendants = opts.include_pendant_roots;
    let p2_pair = char_pair(
        &RootedTree::new(Tree::path(2), 0).expect("edge"),
        pendant_mode,
    )?;
    let scans = scan_trees(n, opts, |i, t| {
        scan_tree_for_equal_m(i, t, pendant_mode, &p2_pair, include_pendants)
    })?;
    let mut stats = SearchStats::default();
    stats.trees_scanned = scans.len() as u64;
    let mut records = Vec::new();
    for (_, s) in scans {
        stats.pairs_scanned += s.pairs_scanned;
        stats.orbit_pruned += s.orbit_pruned;
        stats.violations += s.violations;
        records.extend(s.records);
    }
    stats.records = records.len() as u64;
    Ok(SearchReport {
        config: SearchConfig {
            mode: SearchMode::EqualM,
            n: Some(n),
            n_max: None,
            pendant_mode,
            include_pendant_roots: include_pendants,
            shard: shard_string(opts),
            jobs: opts.jobs,
            seed: opts.seed,
            max_n: opts.max_n,
            attach_family: None,
        },
        complete: true,
        stats,
        records,
    })
}

fn scan_tree_for_equal_m(
    index: usize,
    tree: &Tree,
    mode: PendantMode,
    p2_pair: &CharPair,
    include_pendants: bool,
) -> PairScan {
    let mut scan = PairScan {
        records: Vec::new(),
        pairs_scanned: 0,
        orbit_pruned: 0,
        violations: 0,
    };
    let mut pairs_cache: Vec<Option<CharPair>> = vec![None; tree.n()];
    let mut pair_at = |v: usize| -> CharPair {
        if pairs_cache[v].is_none() {
            let rt = RootedTree::new(tree.clone(), v).expect("vertex in range");
            pairs_cache[v] = Some(char_pair(&rt, mode).expect("n >= 2"));
        }
        pairs_cache[v].clone().unwrap()
    };
    for (v1, v2) in eligible_pairs(tree, include_pendants) {
        if tree.degree(v1) != tree.degree(v2) {
            continue;
        }
        if tree.same_orbit(v1, v2) {
            scan.orbit_pruned += 1;
            continue;
        }
        scan.pairs_scanned += 1;
        let base1 = pair_at(v1);
        let base2 = pair_at(v2);
        let both_interior = !tree.is_pendant(v1) && !tree.is_pendant(v2);
        let direct_equal = cospectral(&base1.dirichlet, &base2.dirichlet)
            && cospectral(&base1.neumann, &base2.neumann);
        let f1 = attach_char_fn(&base1, p2_pair).expect("mode matches");
        let f2 = attach_char_fn(&base2, p2_pair).expect("mode matches");
        let hit = if both_interior {
            let fast = cospectral(&f1, &f2);
            if fast != direct_equal {
                scan.violations += 1;
                scan.records.push(Record::Violation {
                    tree: TreeRef::new(index, tree),
                    v1,
                    v2,
                    detail: format!(
                        "fast criterion ({fast}) disagrees with direct Dirichlet equality ({direct_equal})"
                    ),
                });
                continue;
            }
            fast
        } else {
            direct_equal
        };
        if hit {
            scan.records.push(Record::EqualMPair {
                tree: TreeRef::new(index, tree),
                v1,
                v2,
                degree: tree.degree(v1),
                neumann: base1.neumann.clone(),
                dirichlet: base1.dirichlet.clone(),
                attach_p2: f1,
            });
        }
    }
    scan
}

/// The default attachment family: paths on 2..4 vertices rooted at a leaf,
/// and the 3-star rooted at a leaf and at its center.
pub fn default_attach_family() -> Vec<RootedTree> {
    vec![
        RootedTree::new(Tree::path(2), 0).unwrap(),
        RootedTree::new(Tree::path(3), 0).unwrap(),
        RootedTree::new(Tree::path(4), 0).unwrap(),
        RootedTree::new(Tree::star(4), 1).unwrap(),
        RootedTree::new(Tree::star(4), 0).unwrap(),
    ]
}

/// Empirical verification sweep: for every tree up to `n_max` and every
/// eligible interior vertex pair, check the biconditional
///
/// > attach-P₂ results cospectral ∧ equal degrees ⟺ equal (N, D) pairs
///
/// and, for every pair with equal data, that each member of `attach_family`
/// produces *identical* characteristic functions at the two roots. All
/// violations are recorded with full witnesses; a clean run has none.
pub fn verify_theorems(
    n_max: usize,
    attach_family: &[RootedTree],
    pendant_mode: PendantMode,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    if n_max < 2 || n_max > opts.max_n {
        return Err(SearchError::InputRange {
            n: n_max,
            min: 2,
            max: opts.max_n,
        });
    }
    if attach_family.is_empty() {
        return Err(SearchError::EmptyFamily);
    }
    let family_pairs: Vec<CharPair> = attach_family
        .iter()
        .map(|rt| char_pair(rt, pendant_mode))
        .collect::<Result<_, _>>()?;
    let p2_pair = char_pair(&RootedTree::new(Tree::path(2), 0).unwrap(), pendant_mode)?;

    let mut stats = SearchStats::default();
    let mut records = Vec::new();
    for n in 2..=n_max {
        let scans = scan_trees(n, opts, |i, t| {
            verify_tree(i, t, pendant_mode, &p2_pair, &family_pairs)
        })?;
        for (_, s) in scans {
            stats.trees_scanned += 1;
            stats.pairs_scanned += s.pairs_scanned;
            stats.orbit_pruned += s.orbit_pruned;
            stats.violations += s.violations;
            records.extend(s.records);
        }
    }
    stats.records = records.len() as u64;
    Ok(SearchReport {
        config: SearchConfig {
            mode: SearchMode::TheoremVerify,
            n: None,
            n_max: Some(n_max),
            pendant_mode,
            include_pendant_roots: false,
            shard: shard_string(opts),
            jobs: opts.jobs,
            seed: opts.seed,
            max_n: opts.max_n,
            attach_family: Some(
                attach_family
                    .iter()
                    .map(|rt| rt.canon_code().to_string())
                    .collect(),
            ),
        },
        complete: true,
        stats,
        records,
    })
}

fn verify_tree(
    index: usize,
    tree: &Tree,
    mode: PendantMode,
    p2_pair: &CharPair,
    family: &[CharPair],
) -> PairScan {
    let mut scan = PairScan {
        records: Vec::new(),
        pairs_scanned: 0,
        orbit_pruned: 0,
        violations: 0,
    };
    let interior = tree.interior_vertices();
    let pairs_at: Vec<Option<CharPair>> = (0..tree.n())
        .map(|v| {
            if tree.is_pendant(v) {
                None
            } else {
                let rt = RootedTree::new(tree.clone(), v).expect("in range");
                Some(char_pair(&rt, mode).expect("n >= 2"))
            }
        })
        .collect();
    for (a, &v1) in interior.iter().enumerate() {
        for &v2 in &interior[a + 1..] {
            scan.pairs_scanned += 1;
            let base1 = pairs_at[v1].as_ref().unwrap();
            let base2 = pairs_at[v2].as_ref().unwrap();
            let f1 = attach_char_fn(base1, p2_pair).expect("mode matches");
            let f2 = attach_char_fn(base2, p2_pair).expect("mode matches");
            let lhs = tree.degree(v1) == tree.degree(v2) && cospectral(&f1, &f2);
            let rhs = cospectral(&base1.dirichlet, &base2.dirichlet)
                && cospectral(&base1.neumann, &base2.neumann)
                && tree.degree(v1) == tree.degree(v2);
            if lhs != rhs {
                scan.violations += 1;
                scan.records.push(Record::Violation {
                    tree: TreeRef::new(index, tree),
                    v1,
                    v2,
                    detail: format!("biconditional failed: attach-P2 side {lhs}, pair side {rhs}"),
                });
                continue;
            }
            if rhs {
                for (fi, fam) in family.iter().enumerate() {
                    let g1 = attach_char_fn(base1, fam).expect("mode matches");
                    let g2 = attach_char_fn(base2, fam).expect("mode matches");
                    if g1 != g2 {
                        scan.violations += 1;
                        scan.records.push(Record::Violation {
                            tree: TreeRef::new(index, tree),
                            v1,
                            v2,
                            detail: format!(
                                "equal pair but family member {fi} gave different functions"
                            ),
                        });
                    }
                }
            }
        }
    }
    scan
}

/// Witnesses for the unequal-degree phenomenon: interior pairs with
/// `d(v₁) ≠ d(v₂)` whose single-edge attachments are cospectral. The merged
/// functions are then proportional with a constant `C ≠ 1` given by the
/// leading-term formula; each witness records `C` and is checked exactly.
pub fn find_remark35_witnesses(
    n_max: usize,
    pendant_mode: PendantMode,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    if n_max < 2 || n_max > opts.max_n {
        return Err(SearchError::InputRange {
            n: n_max,
            min: 2,
            max: opts.max_n,
        });
    }
    let p2_pair = char_pair(&RootedTree::new(Tree::path(2), 0).unwrap(), pendant_mode)?;
    let mut stats = SearchStats::default();
    let mut records = Vec::new();
    for n in 2..=n_max {
        let scans = scan_trees(n, opts, |i, t| {
            let mut scan = PairScan {
                records: Vec::new(),
                pairs_scanned: 0,
                orbit_pruned: 0,
                violations: 0,
            };
            let interior = t.interior_vertices();
            for (a, &v1) in interior.iter().enumerate() {
                for &v2 in &interior[a + 1..] {
                    let (d1, d2) = (t.degree(v1), t.degree(v2));
                    if d1 == d2 {
                        continue;
                    }
                    scan.pairs_scanned += 1;
                    let base1 = char_pair(&RootedTree::new(t.clone(), v1).unwrap(), pendant_mode)
                        .expect("n >= 2");
                    let base2 = char_pair(&RootedTree::new(t.clone(), v2).unwrap(), pendant_mode)
                        .expect("n >= 2");
                    let f1 = attach_char_fn(&base1, &p2_pair).expect("mode matches");
                    let f2 = attach_char_fn(&base2, &p2_pair).expect("mode matches");
                    if !cospectral(&f1, &f2) {
                        continue;
                    }
                    match lemma32_check(&f1, &f2, (1, d1, d2)) {
                        Ok(report) if report.holds && !report.identical => {
                            scan.records.push(Record::Remark35Witness {
                                tree: TreeRef::new(i, t),
                                v1,
                                v2,
                                d1,
                                d2,
                                c: report.c.to_string(),
                                phi1: f1,
                                phi2: f2,
                            });
                        }
                        Ok(report) => {
                            scan.violations += 1;
                            scan.records.push(Record::Violation {
                                tree: TreeRef::new(i, t),
                                v1,
                                v2,
                                detail: format!(
                                    "cospectral unequal-degree attachments but constant check failed: holds={} c={}",
                                    report.holds, report.c
                                ),
                            });
                        }
                        Err(e) => {
                            scan.violations += 1;
                            scan.records.push(Record::Violation {
                                tree: TreeRef::new(i, t),
                                v1,
                                v2,
                                detail: format!("leading-term check errored: {e}"),
                            });
                        }
                    }
                }
            }
            scan
        })?;
        for (_, s) in scans {
            stats.trees_scanned += 1;
            stats.pairs_scanned += s.pairs_scanned;
            stats.violations += s.violations;
            records.extend(s.records);
        }
    }
    stats.records = records.len() as u64;
    Ok(SearchReport {
        config: SearchConfig {
            mode: SearchMode::Remark35,
            n: None,
            n_max: Some(n_max),
            pendant_mode,
            include_pendant_roots: false,
            shard: shard_string(opts),
            jobs: opts.jobs,
            seed: opts.seed,
            max_n: opts.max_n,
            attach_family: None,
        },
        complete: true,
        stats,
        records,
    })
}

// ---- surgery consistency sweeps ----

/// Outcome of a surgery-vs-direct comparison sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurgeryCheckReport {
    pub cases: u64,
    pub mismatches: u64,
}

fn surgery_case_matches(
    base: &Tree,
    v: usize,
    attached: &RootedTree,
    mode: PendantMode,
) -> bool {
    let base_pair = char_pair(&RootedTree::new(base.clone(), v).unwrap(), mode).expect("n >= 2");
    let att_pair = char_pair(attached, mode).expect("n >= 2");
    let merged = attach(base, v, attached).expect("valid surgery");
    let merged_rt = RootedTree::new(merged, v).unwrap();
    let combined = crate::spectral::combine_at_root(&base_pair, &att_pair).expect("same mode");
    let direct = char_pair(&merged_rt, mode).expect("n >= 2");
    let via_attach = attach_char_fn(&base_pair, &att_pair).expect("same mode");
    combined.neumann == direct.neumann
        && combined.dirichlet == direct.dirichlet
        && via_attach == direct.neumann
}

/// Exhaustively compare the gluing identity against direct computation for
/// every base tree on ≤ `n0_max` vertices, every base vertex, and every
/// rooted attachment class on ≤ `natt_max` vertices.
pub fn verify_surgery_exhaustive(
    n0_max: usize,
    natt_max: usize,
    mode: PendantMode,
) -> Result<SurgeryCheckReport, SearchError> {
    let mut report = SurgeryCheckReport {
        cases: 0,
        mismatches: 0,
    };
    let mut attachments: Vec<RootedTree> = Vec::new();
    for na in 2..=natt_max {
        for t in enumerate_trees_with_max(na, DEFAULT_MAX_N)? {
            for orbit in t.vertex_orbits() {
                attachments.push(RootedTree::new(t.clone(), orbit[0])?);
            }
        }
    }
    for n0 in 2..=n0_max {
        for base in enumerate_trees_with_max(n0, DEFAULT_MAX_N)? {
            for v in 0..base.n() {
                for att in &attachments {
                    report.cases += 1;
                    if !surgery_case_matches(&base, v, att, mode) {
                        report.mismatches += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Uniform random labeled tree on `n` vertices (decoded from a random
/// Prüfer-style sequence).
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Tree {
    assert!(n >= 1);
    if n == 1 {
        return Tree::new(1, []).unwrap();
    }
    if n == 2 {
        return Tree::path(2);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    tree_from_prufer(n, &seq)
}

/// Decode a Prüfer sequence over `0..n` into a labeled tree.
pub fn tree_from_prufer(n: usize, seq: &[usize]) -> Tree {
    assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 0usize;
    let mut leaf = usize::MAX;
    // find smallest current leaf, attach to next sequence entry
    let mut deg = degree.clone();
    for &s in seq {
        if leaf == usize::MAX {
            while deg[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
        edges.push((leaf, s));
        deg[leaf] -= 1;
        deg[s] -= 1;
        if deg[s] == 1 && s < ptr {
            leaf = s;
        } else {
            leaf = usize::MAX;
            ptr += 1;
            while ptr < n && deg[ptr] != 1 {
                ptr += 1;
            }
            if ptr < n {
                leaf = ptr;
            }
        }
    }
    let remaining: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    debug_assert_eq!(remaining.len(), 2);
    edges.push((remaining[0], remaining[1]));
    Tree::new(n, edges).expect("Prüfer decodes to a tree")
}

/// Randomized surgery-vs-direct sweep over larger trees.
pub fn verify_surgery_random(
    count: usize,
    base_n: (usize, usize),
    att_n: (usize, usize),
    mode: PendantMode,
    seed: u64,
) -> Result<SurgeryCheckReport, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SurgeryCheckReport {
        cases: 0,
        mismatches: 0,
    };
    for _ in 0..count {
        let n0 = rng.gen_range(base_n.0..=base_n.1);
        let na = rng.gen_range(att_n.0.max(2)..=att_n.1);
        let base = random_tree(n0, &mut rng);
        let attached_tree = random_tree(na, &mut rng);
        let v = rng.gen_range(0..base.n());
        let root = rng.gen_range(0..attached_tree.n());
        let attached = RootedTree::new(attached_tree, root)?;
        report.cases += 1;
        if !surgery_case_matches(&base, v, &attached, mode) {
            report.mismatches += 1;
        }
    }
    Ok(report)
}
