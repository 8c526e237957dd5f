//! Characteristic functions of rooted equilateral trees and the surgery
//! calculus on them.
//!
//! A problem on a tree is encoded by which vertices carry Dirichlet
//! conditions. The characteristic function is represented up to a nonzero
//! constant as `φ(λ) = s(λ,l)^e · P(c(λ,l))` with
//!
//! - `P = det(zD̂ − Â)`, the degree/adjacency pencil restricted to the
//!   vertices *not* in the Dirichlet set (degrees taken in the full tree), and
//! - `e = |DirichletSet| − 1`.
//!
//! The determinant convention keeps leading coefficients positive (they equal
//! the product of the kept vertex degrees); the classical convention
//! `det(-λD̂ + Â)` differs by a constant sign, which is invisible modulo
//! nonzero factors. The exponent convention is validated against the raw
//! vertex-condition determinant by `numerics::ratio_constancy_check`.

use crate::poly::{IntPoly, PolyError};
use crate::trees::{RootedTree, Tree, TreeError};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Condition at the distinguished root vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootCondition {
    /// Standard (continuity + Kirchhoff) conditions at the root.
    Neumann,
    /// The solution vanishes on every edge end incident to the root.
    Dirichlet,
}

/// Condition regime at the non-root pendant vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PendantMode {
    /// Dirichlet conditions at every non-root pendant.
    DirichletPendants,
    /// Standard conditions everywhere; at a pendant these reduce to Neumann.
    NeumannPendants,
}

/// Which problem to pose on a rooted tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub root_condition: RootCondition,
    pub pendant_mode: PendantMode,
}

impl ProblemSpec {
    pub fn new(root_condition: RootCondition, pendant_mode: PendantMode) -> Self {
        ProblemSpec {
            root_condition,
            pendant_mode,
        }
    }
}

/// Errors from the spectral layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    /// Adding or subtracting characteristic functions with different
    /// s-exponents; signals misuse outside the scope of the surgery theorems.
    #[error("s-exponent mismatch: {left} vs {right}")]
    ExponentMismatch { left: i64, right: i64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    /// Single-vertex trees carry no edge and hence no characteristic function.
    #[error("characteristic functions require at least one edge")]
    SingleVertex,
    #[error("vertex pair must be distinct, got {v} twice")]
    SameVertex { v: usize },
    /// The comparison requires cospectral inputs.
    #[error("inputs are not cospectral")]
    NotCospectral,
    /// Surgery requires both operands to use the same pendant regime.
    #[error("pendant mode mismatch between surgery operands")]
    ModeMismatch,
}

/// A characteristic function `s(λ,l)^e · P(c(λ,l))`, up to a nonzero constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharFn {
    /// Exponent of `s(λ,l)`; `|DirichletSet| − 1 ≥ −1` when built from a tree.
    pub s_exp: i64,
    /// Integer polynomial in `z = c(λ,l)`.
    pub poly: IntPoly,
}

impl CharFn {
    pub fn new(s_exp: i64, poly: IntPoly) -> Self {
        CharFn { s_exp, poly }
    }

    pub fn mul(&self, other: &CharFn) -> CharFn {
        CharFn {
            s_exp: self.s_exp + other.s_exp,
            poly: self.poly.mul(&other.poly),
        }
    }

    pub fn add(&self, other: &CharFn) -> Result<CharFn, SpectralError> {
        if self.s_exp != other.s_exp {
            return Err(SpectralError::ExponentMismatch {
                left: self.s_exp,
                right: other.s_exp,
            });
        }
        Ok(CharFn {
            s_exp: self.s_exp,
            poly: self.poly.add(&other.poly),
        })
    }

    pub fn sub(&self, other: &CharFn) -> Result<CharFn, SpectralError> {
        if self.s_exp != other.s_exp {
            return Err(SpectralError::ExponentMismatch {
                left: self.s_exp,
                right: other.s_exp,
            });
        }
        Ok(CharFn {
            s_exp: self.s_exp,
            poly: self.poly.sub(&other.poly),
        })
    }

    /// Exact quotient; a `DivisionInexact` error here means the hypotheses of
    /// the surgery identity were violated by the inputs.
    pub fn exact_div(&self, other: &CharFn) -> Result<CharFn, SpectralError> {
        Ok(CharFn {
            s_exp: self.s_exp - other.s_exp,
            poly: self.poly.exact_div(&other.poly)?,
        })
    }

    /// Sign-and-content normalized copy (leading coefficient positive).
    pub fn normalized(&self) -> Result<CharFn, SpectralError> {
        Ok(CharFn {
            s_exp: self.s_exp,
            poly: self.poly.primitive_normalize()?,
        })
    }
}

impl fmt::Display for CharFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s^{} * ({})", self.s_exp, self.poly)
    }
}

/// The Neumann/Dirichlet pair of one rooted tree under one pendant regime.
/// The Dirichlet member's exponent always exceeds the Neumann member's by 1
/// (the root joins the Dirichlet set and nothing else changes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPair {
    pub neumann: CharFn,
    pub dirichlet: CharFn,
    pub mode: PendantMode,
}

/// Characteristic function of a rooted problem.
///
/// The Dirichlet set is: all non-root pendants when the mode is
/// `DirichletPendants` (none otherwise), plus the root itself when the root
/// condition is Dirichlet. With an empty Dirichlet set the exponent is −1;
/// the polynomial then contains the factor `z² − 1`, so the represented
/// function is still entire. The factor is kept, not cancelled.
pub fn char_fn(rt: &RootedTree, spec: ProblemSpec) -> Result<CharFn, SpectralError> {
    let tree = rt.tree();
    if tree.n() < 2 {
        return Err(SpectralError::SingleVertex);
    }
    let mut dirichlet = vec![false; tree.n()];
    if spec.pendant_mode == PendantMode::DirichletPendants {
        for p in tree.pendants() {
            dirichlet[p] = true;
        }
        dirichlet[rt.root()] = false;
    }
    if spec.root_condition == RootCondition::Dirichlet {
        dirichlet[rt.root()] = true;
    }
    Ok(charfn_from_dirichlet_set(tree, &dirichlet))
}

/// Root-free Neumann characteristic function: Dirichlet at every pendant
/// (`DirichletPendants`) or nowhere (`NeumannPendants`), standard conditions
/// at all interior vertices. For interior roots this is exactly what
/// [`char_fn`] returns with a Neumann root, independent of the root choice.
pub fn neumann_char_fn(tree: &Tree, mode: PendantMode) -> Result<CharFn, SpectralError> {
    if tree.n() < 2 {
        return Err(SpectralError::SingleVertex);
    }
    let mut dirichlet = vec![false; tree.n()];
    if mode == PendantMode::DirichletPendants {
        for p in tree.pendants() {
            dirichlet[p] = true;
        }
    }
    Ok(charfn_from_dirichlet_set(tree, &dirichlet))
}

fn charfn_from_dirichlet_set(tree: &Tree, dirichlet: &[bool]) -> CharFn {
    let kept: Vec<usize> = (0..tree.n()).filter(|&v| !dirichlet[v]).collect();
    let mut index = vec![usize::MAX; tree.n()];
    for (i, &v) in kept.iter().enumerate() {
        index[v] = i;
    }
    let m = kept.len();
    let mut matrix = vec![vec![IntPoly::zero(); m]; m];
    for (i, &v) in kept.iter().enumerate() {
        matrix[i][i] = IntPoly::monomial(tree.degree(v) as i64, 1);
        for &w in tree.neighbors(v) {
            if index[w] != usize::MAX {
                matrix[i][index[w]] = IntPoly::constant(-1);
            }
        }
    }
    let poly = crate::poly::det_poly_matrix(&matrix).expect("square by construction");
    debug_assert!(!poly.is_zero(), "pencil determinant is never the zero polynomial");
    let e = dirichlet.iter().filter(|&&d| d).count() as i64 - 1;
    CharFn { s_exp: e, poly }
}

/// Both members of the pair for one rooted tree.
pub fn char_pair(rt: &RootedTree, mode: PendantMode) -> Result<CharPair, SpectralError> {
    let neumann = char_fn(rt, ProblemSpec::new(RootCondition::Neumann, mode))?;
    let dirichlet = char_fn(rt, ProblemSpec::new(RootCondition::Dirichlet, mode))?;
    debug_assert_eq!(dirichlet.s_exp, neumann.s_exp + 1);
    Ok(CharPair {
        neumann,
        dirichlet,
        mode,
    })
}

/// Combine the pairs of two complementary subtrees sharing their root:
/// `N = N₁D₂ + D₁N₂`, `D = D₁D₂`. This is the gluing identity for the whole
/// tree rooted at the common vertex.
pub fn combine_at_root(pair1: &CharPair, pair2: &CharPair) -> Result<CharPair, SpectralError> {
    if pair1.mode != pair2.mode {
        return Err(SpectralError::ModeMismatch);
    }
    let neumann = pair1
        .neumann
        .mul(&pair2.dirichlet)
        .add(&pair1.dirichlet.mul(&pair2.neumann))?;
    let dirichlet = pair1.dirichlet.mul(&pair2.dirichlet);
    Ok(CharPair {
        neumann,
        dirichlet,
        mode: pair1.mode,
    })
}

/// Neumann characteristic function of the tree obtained by attaching a rooted
/// tree at the base pair's root: `φ = φ̃_N·φ_D + φ̃_D·φ_N` with tilde for the
/// attached tree.
pub fn attach_char_fn(
    base_pair: &CharPair,
    attached_pair: &CharPair,
) -> Result<CharFn, SpectralError> {
    if base_pair.mode != attached_pair.mode {
        return Err(SpectralError::ModeMismatch);
    }
    attached_pair
        .neumann
        .mul(&base_pair.dirichlet)
        .add(&attached_pair.dirichlet.mul(&base_pair.neumann))
}

/// Equality of zero sets: same s-exponent and proportional polynomials
/// (equal-degree polynomials with identical root multisets are proportional,
/// and proportional integer polynomials share their primitive normal form).
/// Both inputs must come from the same pendant regime for the comparison to
/// mean cospectrality of the underlying problems.
pub fn cospectral(f: &CharFn, g: &CharFn) -> bool {
    if f.s_exp != g.s_exp {
        return false;
    }
    match (f.poly.is_zero(), g.poly.is_zero()) {
        (true, true) => true,
        (true, false) | (false, true) => false,
        (false, false) => {
            f.poly.primitive_normalize().unwrap() == g.poly.primitive_normalize().unwrap()
        }
    }
}

/// Invert the attachment identity: recover `φ_D` of the base from the merged
/// Neumann function, the base Neumann function, and the attached pair, by
/// exact subtraction and exact division. A `DivisionInexact` error means the
/// inputs do not satisfy the identity's hypotheses.
pub fn recover_dirichlet_charfn(
    merged: &CharFn,
    base_neumann: &CharFn,
    attached_pair: &CharPair,
) -> Result<CharFn, SpectralError> {
    let numerator = merged.sub(&attached_pair.dirichlet.mul(base_neumann))?;
    numerator.exact_div(&attached_pair.neumann)
}

/// Outcome of the leading-coefficient proportionality check.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma32Report {
    /// True iff `P₁ = C·P₂` exactly and `C` matches the degree formula.
    pub holds: bool,
    /// Observed constant `leading(P₁) / leading(P₂)`.
    pub c: BigRational,
    /// `C = 1`, i.e. the two functions are identical, which happens exactly
    /// when `d(v₁) = d(v₂)`.
    pub identical: bool,
}

/// For the merged Neumann functions `f1`, `f2` of attachments at `v₁`, `v₂`
/// (attached root degree `d0`): verifies `P₁ = C·P₂` with
/// `C = [(d₁+d₀)·d₂] / [d₁·(d₂+d₀)]`, the ratio of the leading terms. The
/// inputs must already be cospectral.
pub fn lemma32_check(
    f1: &CharFn,
    f2: &CharFn,
    degrees: (usize, usize, usize),
) -> Result<Lemma32Report, SpectralError> {
    if !cospectral(f1, f2) {
        return Err(SpectralError::NotCospectral);
    }
    let (d0, d1, d2) = degrees;
    let l1 = f1
        .poly
        .leading_coeff()
        .ok_or(SpectralError::Poly(PolyError::ZeroInput))?
        .clone();
    let l2 = f2
        .poly
        .leading_coeff()
        .ok_or(SpectralError::Poly(PolyError::ZeroInput))?
        .clone();
    let c = BigRational::new(l1.clone(), l2.clone());
    let proportional = f1.poly.scale(l2) == f2.poly.scale(l1);
    let formula = BigRational::new(
        BigInt::from(((d1 + d0) * d2) as i64),
        BigInt::from((d1 * (d2 + d0)) as i64),
    );
    let identical = c == BigRational::new(BigInt::from(1), BigInt::from(1));
    Ok(Lemma32Report {
        holds: proportional && c == formula,
        c,
        identical,
    })
}

/// Indistinguishability of two roots: the Dirichlet characteristic functions
/// at `v₁` and `v₂` have equal zero sets and the degrees agree (the Neumann
/// members already coincide for interior roots, since the conditions there
/// are standard either way). Equal degrees force the leading coefficients to
/// match, so this is exact equality of the pair.
pub fn m_equivalent(
    t0: &Tree,
    v1: usize,
    v2: usize,
    pendant_mode: PendantMode,
) -> Result<bool, SpectralError> {
    if v1 == v2 {
        return Err(SpectralError::SameVertex { v: v1 });
    }
    if v1 >= t0.n() {
        return Err(TreeError::InvalidVertex { v: v1, n: t0.n() }.into());
    }
    if v2 >= t0.n() {
        return Err(TreeError::InvalidVertex { v: v2, n: t0.n() }.into());
    }
    if t0.degree(v1) != t0.degree(v2) {
        return Ok(false);
    }
    let spec = ProblemSpec::new(RootCondition::Dirichlet, pendant_mode);
    let f1 = char_fn(&RootedTree::new(t0.clone(), v1)?, spec)?;
    let f2 = char_fn(&RootedTree::new(t0.clone(), v2)?, spec)?;
    Ok(cospectral(&f1, &f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{attach, example_spider};

    const DP: PendantMode = PendantMode::DirichletPendants;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64(coeffs)
    }

    fn rooted(tree: &Tree, root: usize) -> RootedTree {
        RootedTree::new(tree.clone(), root).unwrap()
    }

    fn neumann(rt: &RootedTree) -> CharFn {
        char_fn(rt, ProblemSpec::new(RootCondition::Neumann, DP)).unwrap()
    }

    fn dirichlet(rt: &RootedTree) -> CharFn {
        char_fn(rt, ProblemSpec::new(RootCondition::Dirichlet, DP)).unwrap()
    }

    #[test]
    fn single_edge_and_small_stars() {
        let p2 = Tree::path(2);
        assert_eq!(neumann(&rooted(&p2, 0)), CharFn::new(0, p(&[0, 1])));
        assert_eq!(dirichlet(&rooted(&p2, 0)), CharFn::new(1, p(&[1])));

        let s4 = Tree::star(4);
        assert_eq!(neumann(&rooted(&s4, 0)), CharFn::new(2, p(&[0, 3])));

        let single = Tree::new(1, []).unwrap();
        assert_eq!(
            char_fn(&rooted(&single, 0), ProblemSpec::new(RootCondition::Neumann, DP)),
            Err(SpectralError::SingleVertex)
        );
    }

    #[test]
    fn spider_char_fns_match_worked_example() {
        let (spider, v1, v2) = example_spider();
        assert_eq!(neumann(&rooted(&spider, v1)), CharFn::new(4, p(&[0, -4, 0, 20])));
        assert_eq!(dirichlet(&rooted(&spider, v1)), CharFn::new(5, p(&[0, 0, 4])));
        assert_eq!(dirichlet(&rooted(&spider, v2)), CharFn::new(5, p(&[-1, 0, 10])));
        // the Neumann member is root-independent for interior roots
        assert_eq!(neumann(&rooted(&spider, v2)), neumann(&rooted(&spider, v1)));
        assert_eq!(
            neumann_char_fn(&spider, DP).unwrap(),
            neumann(&rooted(&spider, v1))
        );
    }

    #[test]
    fn charfn_arithmetic_and_exponent_guard() {
        let pn = p(&[-1, 0, 36, 0, -192, 0, 256]);
        let f = CharFn::new(1, p(&[1]));
        let g = CharFn::new(5, pn.clone());
        assert_eq!(f.mul(&g), CharFn::new(6, pn.clone()));

        // Example 1 assembly: z·P_D + 1·P_N at matching exponent 6
        let zpd = CharFn::new(6, p(&[0, 6, 0, -64, 0, 128]).mul(&p(&[0, 1])));
        let n = CharFn::new(6, pn);
        assert_eq!(
            zpd.add(&n).unwrap(),
            CharFn::new(6, p(&[-1, 0, 42, 0, -256, 0, 384]))
        );

        assert_eq!(
            CharFn::new(2, p(&[0, 1])).add(&CharFn::new(3, p(&[1]))),
            Err(SpectralError::ExponentMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn combine_two_edges_into_path() {
        let leaf_p2 = || char_pair(&rooted(&Tree::path(2), 0), DP).unwrap();
        let pair = combine_at_root(&leaf_p2(), &leaf_p2()).unwrap();
        assert_eq!(pair.neumann, CharFn::new(1, p(&[0, 2])));
        assert_eq!(pair.dirichlet, CharFn::new(2, p(&[1])));
        // agree with the direct computation on P3 rooted at its middle
        let p3 = Tree::path(3);
        assert_eq!(pair.neumann, neumann(&rooted(&p3, 1)));
        assert_eq!(pair.dirichlet, dirichlet(&rooted(&p3, 1)));
    }

    #[test]
    fn attach_reproduces_spider_example() {
        let (spider, v1, v2) = example_spider();
        let p2_pair = char_pair(&rooted(&Tree::path(2), 0), DP).unwrap();
        let f1 = attach_char_fn(&char_pair(&rooted(&spider, v1), DP).unwrap(), &p2_pair).unwrap();
        let f2 = attach_char_fn(&char_pair(&rooted(&spider, v2), DP).unwrap(), &p2_pair).unwrap();
        assert_eq!(f1, CharFn::new(5, p(&[0, -4, 0, 24])));
        assert_eq!(f2, CharFn::new(5, p(&[0, -5, 0, 30])));

        // surgery agrees with the direct computation on the merged trees
        let rp2 = RootedTree::new(Tree::path(2), 0).unwrap();
        let merged1 = attach(&spider, v1, &rp2).unwrap();
        let merged2 = attach(&spider, v2, &rp2).unwrap();
        assert_eq!(f1, neumann_char_fn(&merged1, DP).unwrap());
        assert_eq!(f2, neumann_char_fn(&merged2, DP).unwrap());

        assert!(cospectral(&f1, &f2));
        assert!(cospectral(&f1, &f1));
    }

    #[test]
    fn path_and_star_are_not_cospectral() {
        let f = neumann(&rooted(&Tree::path(4), 1));
        let g = neumann(&rooted(&Tree::star(4), 0));
        assert!(!cospectral(&f, &g));
    }

    #[test]
    fn recover_round_trips() {
        let (spider, v1, _) = example_spider();
        let base = char_pair(&rooted(&spider, v1), DP).unwrap();
        let p2_pair = char_pair(&rooted(&Tree::path(2), 0), DP).unwrap();
        let merged = attach_char_fn(&base, &p2_pair).unwrap();
        let recovered = recover_dirichlet_charfn(&merged, &base.neumann, &p2_pair).unwrap();
        assert_eq!(recovered, base.dirichlet);
        assert_eq!(recovered, CharFn::new(5, p(&[0, 0, 4])));

        // tampering with the merged function breaks exactness
        let bad = CharFn::new(merged.s_exp, merged.poly.add(&p(&[1])));
        assert_eq!(
            recover_dirichlet_charfn(&bad, &base.neumann, &p2_pair),
            Err(SpectralError::Poly(PolyError::DivisionInexact))
        );
    }

    #[test]
    fn lemma32_constant_on_spider_pair() {
        let f1 = CharFn::new(5, p(&[0, -4, 0, 24]));
        let f2 = CharFn::new(5, p(&[0, -5, 0, 30]));
        let report = lemma32_check(&f1, &f2, (1, 5, 2)).unwrap();
        assert!(report.holds);
        assert!(!report.identical);
        assert_eq!(
            report.c,
            BigRational::new(BigInt::from(4), BigInt::from(5))
        );

        let self_report = lemma32_check(&f1, &f1, (1, 5, 5)).unwrap();
        assert!(self_report.holds);
        assert!(self_report.identical);

        let unrelated = CharFn::new(5, p(&[1, 1]));
        assert_eq!(
            lemma32_check(&f1, &unrelated, (1, 5, 2)),
            Err(SpectralError::NotCospectral)
        );
    }

    #[test]
    fn m_equivalence_examples() {
        let (spider, v1, v2) = example_spider();
        assert!(!m_equivalent(&spider, v1, v2, DP).unwrap());

        // symmetric interior vertices are trivially equivalent
        let p4 = Tree::path(4);
        assert!(m_equivalent(&p4, 1, 2, DP).unwrap());

        assert_eq!(
            m_equivalent(&p4, 1, 1, DP),
            Err(SpectralError::SameVertex { v: 1 })
        );
        assert!(m_equivalent(&p4, 0, 7, DP).is_err());
    }

    #[test]
    fn neumann_pendants_mode_basics() {
        let np = PendantMode::NeumannPendants;
        // interval with standard conditions everywhere: e = -1, P = z^2 - 1
        let f = neumann_char_fn(&Tree::path(2), np).unwrap();
        assert_eq!(f, CharFn::new(-1, p(&[-1, 0, 1])));
        // P3: 2z^3 - 2z, still divisible by z^2 - 1
        let g = neumann_char_fn(&Tree::path(3), np).unwrap();
        assert_eq!(g, CharFn::new(-1, p(&[0, -2, 0, 2])));
        assert!(g.poly.exact_div(&p(&[-1, 0, 1])).is_ok());

        // surgery works in this mode too
        let pair = |t: &Tree, r: usize| char_pair(&rooted(t, r), np).unwrap();
        let combined = combine_at_root(&pair(&Tree::path(2), 0), &pair(&Tree::path(2), 0)).unwrap();
        assert_eq!(combined.neumann, g);

        // modes cannot be mixed
        assert_eq!(
            combine_at_root(&pair(&Tree::path(2), 0), &char_pair(&rooted(&Tree::path(2), 0), DP).unwrap()),
            Err(SpectralError::ModeMismatch)
        );
    }

    #[test]
    fn charfn_json_shape() {
        let f = CharFn::new(4, p(&[0, -4, 0, 20]));
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(js, r#"{"s_exp":4,"poly":["0","-4","0","20"]}"#);
        let back: CharFn = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
    }
}
