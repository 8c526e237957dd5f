//! Zero-potential analytic layer.
//!
//! Assembles the raw vertex-condition linear system (one continuity/Kirchhoff
//! or boundary row per condition, two unknowns per edge), evaluates its
//! determinant numerically as an oracle that is independent of the polynomial
//! route, and lists explicit eigenvalues from `(e, P)` data. Edge length is
//! fixed to `l = 1`; the general case rescales by `λ ↦ λ/l²`.

use crate::poly::IntPoly;
use crate::spectral::{self, CharFn, PendantMode, ProblemSpec, SpectralError};
use crate::trees::RootedTree;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fixed default seed for reproducible λ sampling.
pub const DEFAULT_SAMPLE_SEED: u64 = 0x0005_eed5;

#[derive(Debug, Error, PartialEq)]
pub enum NumericsError {
    /// An all-Neumann (`e = -1`) characteristic function must contain the
    /// factor `z² − 1` for the represented function to be entire.
    #[error("unsupported mode: {0}")]
    ModeUnsupported(String),
    /// The polynomial part has a root outside `[-1, 1]`, where `z = c(λ, 1)`
    /// has no real preimage.
    #[error("polynomial root near {0} lies outside [-1, 1]")]
    RootOutOfRange(f64),
    #[error("K must be at least 1")]
    BadK,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

// ---- basis solutions at zero potential ----

/// Sine-like basis solution `s(λ, x) = sin(√λ·x)/√λ`, by series near the
/// branch point so `λ → 0` stays finite (`s(0, x) = x`).
pub fn s_basis(lambda: f64, x: f64) -> f64 {
    let t = lambda * x * x;
    if t.abs() < 1e-8 {
        x * (1.0 - t / 6.0 + t * t / 120.0)
    } else if lambda > 0.0 {
        let w = lambda.sqrt();
        (w * x).sin() / w
    } else {
        let w = (-lambda).sqrt();
        (w * x).sinh() / w
    }
}

/// Cosine-like basis solution `c(λ, x) = cos(√λ·x)`.
pub fn c_basis(lambda: f64, x: f64) -> f64 {
    let t = lambda * x * x;
    if t.abs() < 1e-8 {
        1.0 - t / 2.0 + t * t / 24.0
    } else if lambda > 0.0 {
        (lambda.sqrt() * x).cos()
    } else {
        ((-lambda).sqrt() * x).cosh()
    }
}

// ---- the vertex-condition system ----

#[derive(Debug, Clone, Copy)]
enum Coef {
    /// `s(λ, 1)` — solution value at the far end of an edge.
    S,
    /// `c(λ, 1)`.
    C,
    /// `c'(λ, 1) = -λ · s(λ, 1)`.
    CPrime,
    One,
    NegOne,
}

impl Coef {
    fn value(self, s: f64, c: f64, lambda: f64) -> f64 {
        match self {
            Coef::S => s,
            Coef::C => c,
            Coef::CPrime => -lambda * s,
            Coef::One => 1.0,
            Coef::NegOne => -1.0,
        }
    }
}

/// The `2g × 2g` homogeneous system for a rooted problem. Unknowns are the
/// per-edge coefficients `(A_j, B_j)` of `y_j = A_j·s + B_j·c`, edges directed
/// away from the root with `x = 0` at the parent end. Row order: pendant
/// conditions, interior continuity chains, interior Kirchhoff rows, root
/// condition rows.
pub struct VertexSystem {
    size: usize,
    rows: Vec<Vec<(usize, Coef)>>,
}

/// Determinant evaluation with an element-growth report from the pivoted
/// elimination (large growth would flag accuracy loss; it stays O(1) here).
#[derive(Debug, Clone, Copy)]
pub struct DetEval {
    pub value: f64,
    pub growth: f64,
}

impl VertexSystem {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Dense matrix of the system at a given `λ`.
    pub fn matrix_at(&self, lambda: f64) -> Vec<Vec<f64>> {
        let s = s_basis(lambda, 1.0);
        let c = c_basis(lambda, 1.0);
        let mut m = vec![vec![0.0; self.size]; self.size];
        for (i, row) in self.rows.iter().enumerate() {
            for &(col, coef) in row {
                m[i][col] += coef.value(s, c, lambda);
            }
        }
        m
    }

    /// Numerical determinant via partially pivoted elimination.
    pub fn det_at(&self, lambda: f64) -> DetEval {
        det_lu(self.matrix_at(lambda))
    }
}

fn det_lu(mut m: Vec<Vec<f64>>) -> DetEval {
    let n = m.len();
    if n == 0 {
        return DetEval {
            value: 1.0,
            growth: 1.0,
        };
    }
    let entry_max = |m: &Vec<Vec<f64>>| {
        m.iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |a, &b| a.max(b.abs()))
    };
    let max0 = entry_max(&m).max(f64::MIN_POSITIVE);
    let mut maxu = max0;
    let mut det = 1.0;
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&a, &b| m[a][k].abs().partial_cmp(&m[b][k].abs()).unwrap())
            .unwrap();
        if m[pivot_row][k] == 0.0 {
            return DetEval {
                value: 0.0,
                growth: maxu / max0,
            };
        }
        if pivot_row != k {
            m.swap(pivot_row, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                m[i][j] -= f * m[k][j];
                maxu = maxu.max(m[i][j].abs());
            }
        }
    }
    DetEval {
        value: det,
        growth: maxu / max0,
    }
}

/// Assemble the vertex-condition system for a rooted tree with at least one
/// edge.
pub fn build_vertex_system(rt: &RootedTree, spec: ProblemSpec) -> Result<VertexSystem, NumericsError> {
    let tree = rt.tree();
    let n = tree.n();
    if n < 2 {
        return Err(SpectralError::SingleVertex.into());
    }
    let root = rt.root();

    // orient edges away from the root; discovery by DFS with ascending
    // neighbor order fixes deterministic edge ids
    let g = n - 1;
    let mut in_edge = vec![usize::MAX; n];
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut next_id = 0usize;
    let mut stack = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    while let Some(u) = stack.pop() {
        for &w in tree.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                out_edges[u].push(next_id);
                in_edge[w] = next_id;
                next_id += 1;
                stack.push(w);
            }
        }
    }
    debug_assert_eq!(next_id, g);

    let a = |j: usize| 2 * j;
    let b = |j: usize| 2 * j + 1;
    let mut rows: Vec<Vec<(usize, Coef)>> = Vec::with_capacity(2 * g);

    // pendant rows
    for v in 0..n {
        if v == root || tree.degree(v) != 1 {
            continue;
        }
        let j = in_edge[v];
        match spec.pendant_mode {
            PendantMode::DirichletPendants => rows.push(vec![(a(j), Coef::S), (b(j), Coef::C)]),
            PendantMode::NeumannPendants => rows.push(vec![(a(j), Coef::C), (b(j), Coef::CPrime)]),
        }
    }
    // continuity chains at non-root interior vertices
    for v in 0..n {
        if v == root || tree.degree(v) < 2 {
            continue;
        }
        let j = in_edge[v];
        for &k in &out_edges[v] {
            rows.push(vec![(a(j), Coef::S), (b(j), Coef::C), (b(k), Coef::NegOne)]);
        }
    }
    // Kirchhoff rows at non-root interior vertices
    for v in 0..n {
        if v == root || tree.degree(v) < 2 {
            continue;
        }
        let j = in_edge[v];
        let mut row = vec![(a(j), Coef::C), (b(j), Coef::CPrime)];
        for &k in &out_edges[v] {
            row.push((a(k), Coef::NegOne));
        }
        rows.push(row);
    }
    // root rows
    match spec.root_condition {
        spectral::RootCondition::Neumann => {
            let first = out_edges[root][0];
            for &k in &out_edges[root][1..] {
                rows.push(vec![(b(first), Coef::One), (b(k), Coef::NegOne)]);
            }
            rows.push(out_edges[root].iter().map(|&k| (a(k), Coef::One)).collect());
        }
        spectral::RootCondition::Dirichlet => {
            for &k in &out_edges[root] {
                rows.push(vec![(b(k), Coef::One)]);
            }
        }
    }
    debug_assert_eq!(rows.len(), 2 * g);
    Ok(VertexSystem { size: 2 * g, rows })
}

/// Numerical determinant of the assembled system at `λ`.
pub fn det_oracle(vs: &VertexSystem, lambda: f64) -> f64 {
    vs.det_at(lambda).value
}

// ---- ratio constancy: the oracle cross-validation ----

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioReport {
    /// True iff the ratio `det / (s^e·P(c))` is constant across the retained
    /// samples to relative deviation ≤ 1e-6.
    pub ok: bool,
    pub max_rel_dev: f64,
    pub samples_used: usize,
    pub max_growth: f64,
}

/// Evaluate `s^e · P(c)` at `λ`.
pub fn eval_char_fn(f: &CharFn, lambda: f64) -> f64 {
    let s = s_basis(lambda, 1.0);
    let c = c_basis(lambda, 1.0);
    let p = f.poly.eval_f64(c);
    if f.s_exp >= 0 {
        s.powi(f.s_exp as i32) * p
    } else {
        p / s.powi((-f.s_exp) as i32)
    }
}

/// Compare the system determinant against an explicit `(e, P)` representation
/// over the given samples. Samples too close to common zeros are dropped; if
/// fewer than three survive, a deterministic low-discrepancy fallback
/// sequence over the same range is used instead.
pub fn ratio_constancy(vs: &VertexSystem, f: &CharFn, samples: &[f64]) -> RatioReport {
    let scale_bound = f.poly.coeff_abs_sum_f64().max(1.0);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in samples {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = 0.1;
        hi = 40.0;
    }

    let evaluate = |points: &[f64]| -> (Vec<(f64, f64)>, f64) {
        let mut kept = Vec::new();
        let mut growth: f64 = 1.0;
        let phis: Vec<f64> = points.iter().map(|&x| eval_char_fn(f, x)).collect();
        let phi_max = phis.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        for (&x, &phi) in points.iter().zip(&phis) {
            if phi.abs() < 1e-3 * phi_max.max(1e-12 * scale_bound) {
                continue;
            }
            let d = vs.det_at(x);
            growth = growth.max(d.growth);
            kept.push((d.value, phi));
        }
        (kept, growth)
    };

    let (mut kept, mut growth) = evaluate(samples);
    if kept.len() < 3.min(samples.len().max(1)) {
        // deterministic fallback: golden-ratio sequence over the sample range
        let count = samples.len().max(16);
        let fallback: Vec<f64> = (1..=count)
            .map(|i| {
                let frac = (i as f64 * 0.618_033_988_749_894_9 + 0.31) % 1.0;
                lo + (hi - lo) * frac
            })
            .collect();
        let (k2, g2) = evaluate(&fallback);
        kept = k2;
        growth = g2;
    }

    if kept.is_empty() {
        return RatioReport {
            ok: false,
            max_rel_dev: f64::INFINITY,
            samples_used: 0,
            max_growth: growth,
        };
    }
    let ratios: Vec<f64> = kept.iter().map(|&(d, phi)| d / phi).collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let max_rel_dev = ratios
        .iter()
        .map(|r| (r - mean).abs() / mean.abs().max(f64::MIN_POSITIVE))
        .fold(0.0f64, f64::max);
    RatioReport {
        ok: max_rel_dev <= 1e-6,
        max_rel_dev,
        samples_used: ratios.len(),
        max_growth: growth,
    }
}

/// Build the `(e, P)` representation and the raw system for the same problem
/// and check ratio constancy over the samples.
pub fn ratio_constancy_check(
    rt: &RootedTree,
    spec: ProblemSpec,
    samples: &[f64],
) -> Result<RatioReport, NumericsError> {
    let f = spectral::char_fn(rt, spec)?;
    let vs = build_vertex_system(rt, spec)?;
    Ok(ratio_constancy(&vs, &f, samples))
}

/// Seeded uniform λ samples in `[lo, hi]`.
pub fn sample_lambdas(lo: f64, hi: f64, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(lo..hi)).collect()
}

// ---- explicit eigenvalue listings ----

/// Where an eigenvalue came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigSource {
    /// A zero of `s(λ, 1)`, i.e. `λ = (kπ)²`.
    SFactor,
    /// A root of `P` pulled back through `z = c(λ, 1)`.
    PRoot,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub multiplicity: u32,
    pub source: EigSource,
}

/// The `K` smallest eigenvalues with multiplicities, ascending.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<SpectrumEntry>,
}

impl Spectrum {
    /// Equality up to an absolute tolerance on λ.
    pub fn approx_eq(&self, other: &Spectrum, tol: f64) -> bool {
        self.eigenvalues.len() == other.eigenvalues.len()
            && self
                .eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .all(|(a, b)| (a.lambda - b.lambda).abs() <= tol && a.multiplicity == b.multiplicity)
    }
}

/// List the `K` smallest zeros of `s^e · P(c(λ,1))` for `λ ≥ 0`, with
/// multiplicities.
///
/// Multiplicity accounting in λ: a root of `P` at `z₀ ∈ (-1, 1)` of
/// multiplicity `m` contributes `m` at each preimage; at `z₀ = ±1` the map
/// `λ ↦ c(λ,1) ∓ 1` has a double zero at `λ = (kπ)²`, so those contribute
/// `2m` on top of the exponent `e`; at `λ = 0` (where `z = 1` but `s ≠ 0`)
/// the zero of `c - 1` is simple and the contribution is `m` again.
pub fn spectrum_from_charfn(f: &CharFn, k_count: usize) -> Result<Spectrum, NumericsError> {
    if k_count == 0 {
        return Err(NumericsError::BadK);
    }
    if f.poly.is_zero() {
        return Err(NumericsError::ModeUnsupported(
            "zero polynomial part".into(),
        ));
    }
    if f.s_exp < -1 {
        return Err(NumericsError::ModeUnsupported(format!(
            "s-exponent {} below -1",
            f.s_exp
        )));
    }
    let one = BigRational::from_integer(BigInt::from(1));
    let mult_p1 = f.poly.root_multiplicity_at(&one).expect("nonzero poly");
    let mult_m1 = f.poly.root_multiplicity_at(&(-one.clone())).expect("nonzero poly");
    if f.s_exp == -1 && (mult_p1 == 0 || mult_m1 == 0) {
        return Err(NumericsError::ModeUnsupported(
            "exponent -1 requires the factor z^2 - 1".into(),
        ));
    }

    // strip the ±1 roots; what remains must have its real roots inside (-1, 1)
    let mut q = f.poly.clone();
    let z_minus_1 = IntPoly::from_i64(&[-1, 1]);
    let z_plus_1 = IntPoly::from_i64(&[1, 1]);
    for _ in 0..mult_p1 {
        q = q.exact_div(&z_minus_1).expect("divisible by z - 1");
    }
    for _ in 0..mult_m1 {
        q = q.exact_div(&z_plus_1).expect("divisible by z + 1");
    }

    let mut thetas: Vec<(f64, u32)> = Vec::new(); // (arccos of root, multiplicity)
    if q.degree().is_some_and(|d| d >= 1) {
        let sf = q.squarefree_part().expect("nonzero");
        let width = BigRational::new(BigInt::from(1), BigInt::from(10u64).pow(13));
        for interval in q.isolate_real_roots().expect("nonzero") {
            let fine = crate::poly::refine_root_interval(&sf, &interval, &width);
            let z = fine.midpoint_f64();
            if !(-1.0..=1.0).contains(&z) {
                return Err(NumericsError::RootOutOfRange(z));
            }
            thetas.push((z.clamp(-1.0, 1.0).acos(), interval.multiplicity));
        }
    }

    use std::f64::consts::PI;
    let e = f.s_exp;
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    if mult_p1 > 0 {
        entries.push(SpectrumEntry {
            lambda: 0.0,
            multiplicity: mult_p1,
            source: EigSource::PRoot,
        });
    }

    // eigenvalues per 2π period of ω = √λ; grow the frequency window until
    // K entries are available
    let mut max_k = k_count + 2;
    loop {
        let mut all = entries.clone();
        for k in 1..=max_k {
            let m_end = if k % 2 == 0 { mult_p1 } else { mult_m1 };
            let m = e + 2 * m_end as i64;
            if m > 0 {
                all.push(SpectrumEntry {
                    lambda: (k as f64 * PI).powi(2),
                    multiplicity: m as u32,
                    source: EigSource::SFactor,
                });
            }
        }
        // preimages ω = ±θ + 2πj of each root, complete up to ω = max_k·π so
        // that truncation below never skips a smaller eigenvalue
        let bound = max_k as f64 * PI;
        for &(theta, m) in &thetas {
            let mut j = 0usize;
            loop {
                let up = theta + 2.0 * PI * j as f64;
                let down = 2.0 * PI * j as f64 - theta;
                if down > bound && up > bound {
                    break;
                }
                if j > 0 && down <= bound {
                    all.push(SpectrumEntry {
                        lambda: down * down,
                        multiplicity: m,
                        source: EigSource::PRoot,
                    });
                }
                if up <= bound {
                    all.push(SpectrumEntry {
                        lambda: up * up,
                        multiplicity: m,
                        source: EigSource::PRoot,
                    });
                }
                j += 1;
            }
        }
        all.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap());
        if all.len() >= k_count {
            all.truncate(k_count);
            return Ok(Spectrum { eigenvalues: all });
        }
        // nothing vanishes anywhere: e.g. e = 0 with constant P
        if all.is_empty() && thetas.is_empty() && e <= 0 && mult_p1 == 0 && mult_m1 == 0 {
            return Ok(Spectrum { eigenvalues: all });
        }
        max_k *= 2;
    }
}
