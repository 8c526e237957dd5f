//! Property and invariant tests: ring axioms on randomized inputs,
//! determinant cross-checks against cofactor expansion, canonical-code
//! correctness against permutation oracles, surgery label-independence, and
//! report determinism.

mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use spectree::poly::{det_poly_matrix, IntPoly};
use spectree::search::{
    find_cospectral_pairs, find_remark35_witnesses, random_tree, SearchOptions,
};
use spectree::spectral::{neumann_char_fn, PendantMode};
use spectree::trees::{attach, enumerate_trees, example_spider, RootedTree, Tree};

fn poly_strategy() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-20i64..=20, 0..7).prop_map(|c| IntPoly::from_i64(&c))
}

fn nonzero_poly_strategy() -> impl Strategy<Value = IntPoly> {
    poly_strategy().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #[test]
    fn ring_distributes(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
    }

    #[test]
    fn mul_commutes_and_associates(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn division_inverts_multiplication(a in poly_strategy(), b in nonzero_poly_strategy()) {
        prop_assert_eq!(a.mul(&b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn primitive_normalize_kills_constants(a in nonzero_poly_strategy(), k in -9i64..=9) {
        prop_assume!(k != 0);
        let norm = a.primitive_normalize().unwrap();
        prop_assert_eq!(a.scale(k).primitive_normalize().unwrap(), norm.clone());
        prop_assert_eq!(norm.primitive_normalize().unwrap(), norm);
    }

    #[test]
    fn determinant_matches_cofactor_expansion(
        n in 0usize..=4,
        entries in prop::collection::vec(-6i64..=6, 16),
        degs in prop::collection::vec(0usize..=2, 16),
    ) {
        let mut it = entries.iter().cycle();
        let mut dit = degs.iter().cycle();
        let m: Vec<Vec<IntPoly>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| IntPoly::monomial(*it.next().unwrap(), *dit.next().unwrap()))
                    .collect()
            })
            .collect();
        prop_assert_eq!(det_poly_matrix(&m).unwrap(), common::cofactor_det(&m));
    }

    #[test]
    fn determinant_invariant_under_symmetric_permutation(
        entries in prop::collection::vec(-5i64..=5, 16),
        perm_seed in 0u64..1000,
    ) {
        let n = 4;
        let m: Vec<Vec<IntPoly>> = (0..n)
            .map(|i| (0..n).map(|j| IntPoly::from_i64(&[entries[i * n + j], 1])).collect())
            .collect();
        // a deterministic permutation from the seed
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = perm_seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let permuted: Vec<Vec<IntPoly>> = (0..n)
            .map(|i| (0..n).map(|j| m[perm[i]][perm[j]].clone()).collect())
            .collect();
        prop_assert_eq!(det_poly_matrix(&m).unwrap(), det_poly_matrix(&permuted).unwrap());
    }

    #[test]
    fn root_counts_match_constructed_roots(
        roots in prop::collection::vec(-5i64..=5, 0..5),
        complex_pairs in 0u32..=2,
        lo2 in -12i64..=12,
        width2 in 1i64..=12,
    ) {
        let mut p = IntPoly::one();
        for &r in &roots {
            p = p.mul(&IntPoly::from_i64(&[-r, 1]));
        }
        for _ in 0..complex_pairs {
            p = p.mul(&IntPoly::from_i64(&[1, 0, 1]));
        }
        let lo = BigRational::new(BigInt::from(lo2), BigInt::from(2));
        let hi = BigRational::new(BigInt::from(lo2 + width2), BigInt::from(2));
        let mut distinct: Vec<i64> = roots.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let expected = distinct
            .iter()
            .filter(|&&r| {
                let r = BigRational::from_integer(BigInt::from(r));
                r > lo && r <= hi
            })
            .count();
        prop_assert_eq!(p.count_real_roots(&lo, &hi).unwrap(), expected);
    }

    #[test]
    fn canon_code_is_relabeling_invariant(n in 2usize..=9, pick in 0usize..512, seed in 0u64..u64::MAX) {
        let trees: Vec<Tree> = enumerate_trees(n).unwrap().collect();
        let tree = &trees[pick % trees.len()];
        let perm = pseudo_permutation(n, seed);
        let relabeled = Tree::new(
            n,
            tree.edges().iter().map(|&(u, v)| (perm[u], perm[v])),
        ).unwrap();
        prop_assert_eq!(tree.canon_code(), relabeled.canon_code());
    }

    #[test]
    fn attach_canon_independent_of_labelings(
        base_pick in 0usize..64,
        att_pick in 0usize..8,
        v in 0usize..6,
        root in 0usize..4,
        seed1 in 0u64..u64::MAX,
        seed2 in 0u64..u64::MAX,
    ) {
        let bases: Vec<Tree> = enumerate_trees(6).unwrap().collect();
        let atts: Vec<Tree> = enumerate_trees(4).unwrap().collect();
        let base = &bases[base_pick % bases.len()];
        let att = &atts[att_pick % atts.len()];
        let (v, root) = (v % base.n(), root % att.n());

        let merged = attach(base, v, &RootedTree::new(att.clone(), root).unwrap()).unwrap();

        let pb = pseudo_permutation(base.n(), seed1);
        let pa = pseudo_permutation(att.n(), seed2);
        let base2 = Tree::new(base.n(), base.edges().iter().map(|&(a, b)| (pb[a], pb[b]))).unwrap();
        let att2 = Tree::new(att.n(), att.edges().iter().map(|&(a, b)| (pa[a], pa[b]))).unwrap();
        let merged2 = attach(&base2, pb[v], &RootedTree::new(att2, pa[root]).unwrap()).unwrap();

        prop_assert_eq!(merged.canon_code(), merged2.canon_code());
    }

    #[test]
    fn attach_pendant_bookkeeping(
        base_pick in 0usize..64,
        att_pick in 0usize..8,
        v in 0usize..7,
        root in 0usize..4,
    ) {
        let bases: Vec<Tree> = enumerate_trees(7).unwrap().collect();
        let atts: Vec<Tree> = enumerate_trees(4).unwrap().collect();
        let base = &bases[base_pick % bases.len()];
        let att = &atts[att_pick % atts.len()];
        let (v, root) = (v % base.n(), root % att.n());
        let merged = attach(base, v, &RootedTree::new(att.clone(), root).unwrap()).unwrap();

        let mut expected: Vec<usize> = base.pendants().into_iter().filter(|&u| u != v).collect();
        let nb = base.n();
        for u in att.pendants() {
            if u != root {
                expected.push(nb + u - usize::from(u > root));
            }
        }
        expected.sort_unstable();
        prop_assert_eq!(merged.pendants(), expected);
    }

    #[test]
    fn charfn_invariants_beyond_exhaustive_range(n in 11usize..=13, seed in 0u64..u64::MAX) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let tree = random_tree(n, &mut rng);
        let interior_degs: Vec<usize> =
            tree.interior_vertices().iter().map(|&v| tree.degree(v)).collect();
        let f = neumann_char_fn(&tree, PendantMode::DirichletPendants).unwrap();
        prop_assert!(common::check_root_range(&f).is_ok());
        prop_assert!(common::check_parity(&f).is_ok());
        prop_assert!(common::check_leading(&f, &interior_degs).is_ok());

        // whole-graph mode always contains the factor z^2 - 1
        let g = neumann_char_fn(&tree, PendantMode::NeumannPendants).unwrap();
        prop_assert!(g.poly.exact_div(&IntPoly::from_i64(&[-1, 0, 1])).is_ok());
    }
}

/// Deterministic pseudo-random permutation from a seed (Fisher–Yates with a
/// splitmix-style generator).
fn pseudo_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        perm.swap(i, (s >> 33) as usize % (i + 1));
    }
    perm
}

#[test]
fn free_canon_codes_agree_with_permutation_isomorphism() {
    // exhaustive over all labeled trees with up to 6 vertices: equal codes
    // within a class, distinct codes across classes, both confirmed by
    // explicit permutation search
    for n in 1..=6 {
        let mut classes: Vec<(spectree::trees::CanonCode, common::Edges)> = Vec::new();
        for edges in common::all_labeled_trees(n) {
            let tree = Tree::new(n, edges.iter().copied()).unwrap();
            let code = tree.canon_code();
            match classes.iter().find(|(c, _)| *c == code) {
                Some((_, rep)) => {
                    assert!(
                        common::perm_isomorphic(n, &edges, rep),
                        "equal codes but not isomorphic: {edges:?} vs {rep:?}"
                    );
                }
                None => {
                    for (_, other) in &classes {
                        assert!(
                            !common::perm_isomorphic(n, &edges, other),
                            "distinct codes but isomorphic: {edges:?} vs {other:?}"
                        );
                    }
                    classes.push((code, edges));
                }
            }
        }
    }
}

#[test]
fn rooted_canon_codes_agree_with_rooted_isomorphism() {
    for n in 1..=5 {
        let mut classes: Vec<(spectree::trees::CanonCode, (common::Edges, usize))> = Vec::new();
        for edges in common::all_labeled_trees(n) {
            for root in 0..n {
                let rt = RootedTree::new(Tree::new(n, edges.iter().copied()).unwrap(), root).unwrap();
                let code = rt.canon_code();
                match classes.iter().find(|(c, _)| *c == code) {
                    Some((_, (rep, rep_root))) => {
                        assert!(
                            common::perm_isomorphic_rooted(n, &edges, root, rep, *rep_root),
                            "equal rooted codes but not isomorphic"
                        );
                    }
                    None => {
                        for (_, (other, other_root)) in &classes {
                            assert!(
                                !common::perm_isomorphic_rooted(n, &edges, root, other, *other_root),
                                "distinct rooted codes but isomorphic"
                            );
                        }
                        classes.push((code, (edges.clone(), root)));
                    }
                }
            }
        }
    }
}

#[test]
fn two_four_vertex_trees_have_distinct_codes() {
    let trees: Vec<Tree> = enumerate_trees(4).unwrap().collect();
    assert_eq!(trees.len(), 2);
    assert_ne!(trees[0].canon_code(), trees[1].canon_code());
    assert!(!common::perm_isomorphic(
        4,
        trees[0].edges(),
        trees[1].edges()
    ));
}

#[test]
fn orbits_match_brute_force_automorphism_search() {
    // exhaustive for every tree on up to 7 vertices
    for n in 2..=7 {
        for tree in enumerate_trees(n).unwrap() {
            let brute = common::brute_orbits(n, tree.edges());
            assert_eq!(tree.vertex_orbits(), brute, "n = {n}, {:?}", tree.edges());
        }
    }
    // and for the 8-vertex spider of the worked examples (8! relabelings)
    let (spider, _, _) = example_spider();
    assert_eq!(spider.vertex_orbits(), common::brute_orbits(8, spider.edges()));
}

#[test]
fn orbit_members_share_rooted_codes() {
    for tree in enumerate_trees(7).unwrap() {
        for orbit in tree.vertex_orbits() {
            let first = RootedTree::new(tree.clone(), orbit[0]).unwrap().canon_code();
            for &v in &orbit[1..] {
                assert_eq!(
                    RootedTree::new(tree.clone(), v).unwrap().canon_code(),
                    first
                );
            }
        }
    }
}

#[test]
fn reports_are_reproducible_byte_for_byte() {
    let opts = SearchOptions::default();
    let a = find_cospectral_pairs(9, PendantMode::NeumannPendants, &opts).unwrap();
    let b = find_cospectral_pairs(9, PendantMode::NeumannPendants, &opts).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_csv(), b.to_csv());

    let c = find_remark35_witnesses(8, PendantMode::DirichletPendants, &opts).unwrap();
    let d = find_remark35_witnesses(8, PendantMode::DirichletPendants, &opts).unwrap();
    assert_eq!(c.to_json(), d.to_json());
}
