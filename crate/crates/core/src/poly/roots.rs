//! Real-root machinery: Sturm sequences, isolation by bisection, square-free
//! factorization.
//!
//! Counting runs on the square-free part, whose canonical Sturm chain ends in
//! a nonzero constant; with the ignore-zeros sign-variation convention the
//! count `V(lo) − V(hi)` is then exact for the half-open interval `(lo, hi]`
//! even when an endpoint is itself a root.

use super::{IntPoly, PolyError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Isolating interval for one distinct real root.
///
/// Semantics: the root lies in `(lo, hi]` when `lo < hi`, and equals `lo`
/// exactly when `lo == hi`. Intervals returned by [`isolate_real_roots`] are
/// pairwise disjoint and sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Multiplicity of the root in the original polynomial.
    pub multiplicity: u32,
}

impl RootInterval {
    /// True when the root is known exactly (degenerate interval).
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Midpoint as `f64`, for reporting.
    pub fn midpoint_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }
}

// ---- Rational-coefficient scratch arithmetic ----
//
// Used only inside gcd/Sturm/Yun; public results are primitive IntPolys.

type RatPoly = Vec<BigRational>;

fn rat_from_int(p: &IntPoly) -> RatPoly {
    p.coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn rat_trim(p: &mut RatPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn rat_is_zero(p: &RatPoly) -> bool {
    p.is_empty()
}

fn rat_derivative(p: &RatPoly) -> RatPoly {
    if p.len() <= 1 {
        return Vec::new();
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

/// Remainder of `a` divided by `b` over the rationals. `b` must be nonzero.
fn rat_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut rem = a.clone();
    rat_trim(&mut rem);
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let q = rem.last().unwrap() / &lead;
        for j in 0..=db {
            let t = &q * &b[j];
            rem[k + j] -= t;
        }
        rat_trim(&mut rem);
        if rem.len() <= db {
            break;
        }
    }
    rem
}

/// Exact quotient of `a` by `b` over the rationals; `None` if the remainder
/// is nonzero.
fn rat_div_exact(a: &RatPoly, b: &RatPoly) -> Option<RatPoly> {
    let mut rem = a.clone();
    rat_trim(&mut rem);
    if rat_is_zero(&rem) {
        return Some(Vec::new());
    }
    let db = b.len() - 1;
    if rem.len() - 1 < db {
        return None;
    }
    let lead = b.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db || (db == 0 && !rat_is_zero(&rem)) {
        if rem.len() <= db {
            break;
        }
        let k = rem.len() - 1 - db;
        let q = rem.last().unwrap() / &lead;
        quot[k] = q.clone();
        for j in 0..=db {
            let t = &q * &b[j];
            rem[k + j] -= t;
        }
        rat_trim(&mut rem);
    }
    if rat_is_zero(&rem) {
        Some(quot)
    } else {
        None
    }
}

/// Monic gcd over the rationals (empty for gcd of two zeros).
fn rat_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut f = a.clone();
    let mut g = b.clone();
    rat_trim(&mut f);
    rat_trim(&mut g);
    while !rat_is_zero(&g) {
        let r = rat_rem(&f, &g);
        f = g;
        g = r;
    }
    if !rat_is_zero(&f) {
        let lead = f.last().unwrap().clone();
        for c in &mut f {
            *c /= &lead;
        }
    }
    f
}

/// Clear denominators and strip content, keeping the sign: the positive
/// rational scaling makes this safe inside sign-sensitive chains.
fn rat_to_primitive_int(p: &RatPoly) -> IntPoly {
    if rat_is_zero(p) {
        return IntPoly::zero();
    }
    let mut denom_lcm = BigInt::one();
    for c in p {
        denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| c.numer() * (&denom_lcm / c.denom()))
        .collect();
    let scaled = IntPoly::from_coeffs(ints);
    let mut content = scaled.content();
    if content.is_negative() {
        content = -content;
    }
    IntPoly::from_coeffs(scaled.coeffs().iter().map(|c| c / &content).collect())
}

// ---- gcd / square-free structure ----

pub(super) fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() && b.is_zero() {
        return IntPoly::zero();
    }
    if a.is_zero() {
        return b.primitive_normalize().unwrap();
    }
    if b.is_zero() {
        return a.primitive_normalize().unwrap();
    }
    let g = rat_gcd(&rat_from_int(a), &rat_from_int(b));
    if g.len() == 1 {
        // coprime up to constants; the integer gcd of the contents remains
        let ca = a.content();
        let cb = b.content();
        return IntPoly::constant(num_integer::gcd(ca, cb));
    }
    rat_to_primitive_int(&g)
        .primitive_normalize()
        .expect("gcd of nonzero polynomials is nonzero")
}

pub(super) fn squarefree_part(p: &IntPoly) -> Result<IntPoly, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if p.degree() == Some(0) {
        return Ok(IntPoly::one());
    }
    let f = rat_from_int(p);
    let g = rat_gcd(&f, &rat_derivative(&f));
    let q = rat_div_exact(&f, &g).expect("gcd divides the polynomial");
    Ok(rat_to_primitive_int(&q).primitive_normalize().unwrap())
}

/// Yun's algorithm over the rationals; factors come back primitive over the
/// integers with positive leading coefficients.
pub(super) fn squarefree_decomposition(p: &IntPoly) -> Result<Vec<(IntPoly, u32)>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let f = rat_from_int(p);
    let fp = rat_derivative(&f);
    let g = rat_gcd(&f, &fp);
    let mut out = Vec::new();
    if g.len() == 1 {
        out.push((p.primitive_normalize()?, 1));
        return Ok(out);
    }
    let mut b = rat_div_exact(&f, &g).expect("gcd divides f");
    let c = rat_div_exact(&fp, &g).expect("gcd divides f'");
    let mut d: RatPoly = {
        let bp = rat_derivative(&b);
        sub_rat(&c, &bp)
    };
    let mut i = 1u32;
    while b.len() > 1 {
        let a = rat_gcd(&b, &d);
        if a.len() > 1 {
            out.push((rat_to_primitive_int(&a).primitive_normalize()?, i));
        }
        b = rat_div_exact(&b, &a).expect("a divides b");
        let cc = rat_div_exact(&d, &a).expect("a divides d");
        let bp = rat_derivative(&b);
        d = sub_rat(&cc, &bp);
        i += 1;
    }
    Ok(out)
}

fn sub_rat(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x - y);
    }
    rat_trim(&mut out);
    out
}

pub(super) fn root_multiplicity_at(p: &IntPoly, r: &BigRational) -> Result<u32, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let mut cur = rat_from_int(p);
    let divisor = vec![-r.clone(), BigRational::one()]; // z - r
    let mut mult = 0u32;
    loop {
        // synthetic check: value at r
        let mut acc = BigRational::zero();
        for c in cur.iter().rev() {
            acc = acc * r + c;
        }
        if !acc.is_zero() {
            return Ok(mult);
        }
        cur = rat_div_exact(&cur, &divisor).expect("root divides");
        mult += 1;
        if cur.len() <= 1 {
            return Ok(mult);
        }
    }
}

// ---- Sturm chains ----

/// Canonical Sturm chain of the square-free part, as primitive integer
/// polynomials (positive rescaling preserves all sign variations).
struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    fn new(squarefree: &IntPoly) -> Self {
        let mut chain = vec![squarefree.clone()];
        let d = squarefree.derivative();
        if !d.is_zero() {
            chain.push(rat_to_primitive_int(&rat_from_int(&d)));
            loop {
                let n = chain.len();
                let r = rat_rem(&rat_from_int(&chain[n - 2]), &rat_from_int(&chain[n - 1]));
                if rat_is_zero(&r) {
                    break;
                }
                let neg: RatPoly = r.iter().map(|c| -c).collect();
                chain.push(rat_to_primitive_int(&neg));
            }
        }
        SturmChain { chain }
    }

    /// Sign variations at a rational point, zeros ignored.
    fn variations_at(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last: i8 = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots of the square-free polynomial in `(lo, hi]`.
    fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations_at(lo) - self.variations_at(hi)
    }
}

/// Strict bound `B` with all real roots in `(-B, B)` (Cauchy bound).
fn cauchy_bound(p: &IntPoly) -> BigRational {
    let lead = p.leading_coeff().expect("nonzero").magnitude().clone();
    let mut max: BigInt = BigInt::zero();
    for c in p.coeffs() {
        let m = BigInt::from(c.magnitude().clone());
        if m > max {
            max = m;
        }
    }
    BigRational::one() + BigRational::new(max, BigInt::from(lead))
}

pub(super) fn count_real_roots(
    p: &IntPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if lo > hi {
        return Err(PolyError::InvalidInterval);
    }
    if p.degree() == Some(0) {
        return Ok(0);
    }
    let sf = squarefree_part(p)?;
    let chain = SturmChain::new(&sf);
    Ok(chain.count(lo, hi))
}

pub(super) fn count_real_roots_all(p: &IntPoly) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if p.degree() == Some(0) {
        return Ok(0);
    }
    let sf = squarefree_part(p)?;
    let bound = cauchy_bound(&sf);
    let chain = SturmChain::new(&sf);
    Ok(chain.count(&-bound.clone(), &bound))
}

pub(super) fn isolate_real_roots(p: &IntPoly) -> Result<Vec<RootInterval>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let sf = squarefree_part(p)?;
    let chain = SturmChain::new(&sf);
    let bound = cauchy_bound(&sf);
    let mut intervals = Vec::new();
    let lo = -bound.clone();
    let total = chain.count(&lo, &bound);
    split(&chain, &sf, lo, bound, total, &mut intervals);

    // Multiplicities: each isolated root belongs to exactly one square-free
    // factor; look it up by a contained-root test on that factor.
    let decomp = squarefree_decomposition(p)?;
    let mut out = Vec::with_capacity(intervals.len());
    for (ilo, ihi) in intervals {
        let mut mult = 0u32;
        for (factor, m) in &decomp {
            let hit = if ilo == ihi {
                factor.sign_at(&ilo) == 0
            } else {
                let fchain = SturmChain::new(factor);
                fchain.count(&ilo, &ihi) == 1
            };
            if hit {
                mult = *m;
                break;
            }
        }
        debug_assert!(mult > 0, "isolated root must belong to some factor");
        out.push(RootInterval {
            lo: ilo,
            hi: ihi,
            multiplicity: mult,
        });
    }
    Ok(out)
}

/// Recursive bisection; `count` is the number of roots of the square-free
/// polynomial in `(lo, hi]`. Degenerate intervals mark exact rational roots.
fn split(
    chain: &SturmChain,
    sf: &IntPoly,
    lo: BigRational,
    hi: BigRational,
    count: usize,
    out: &mut Vec<(BigRational, BigRational)>,
) {
    if count == 0 {
        return;
    }
    if count == 1 {
        if sf.sign_at(&hi) == 0 {
            out.push((hi.clone(), hi));
        } else {
            // tighten degenerate hits at rational midpoints early
            out.push((lo, hi));
        }
        return;
    }
    let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
    let left = chain.count(&lo, &mid);
    split(chain, sf, lo, mid.clone(), left, out);
    split(chain, sf, mid, hi, count - left, out);
}

/// Shrink an isolating interval below `width` by bisection, preserving the
/// invariant that the root stays within `(lo, hi]` (or is hit exactly).
pub fn refine_interval(sf: &IntPoly, interval: &RootInterval, width: &BigRational) -> RootInterval {
    let mut lo = interval.lo.clone();
    let mut hi = interval.hi.clone();
    let two = BigRational::from_integer(BigInt::from(2));
    let hi_sign = sf.sign_at(&hi);
    if hi_sign == 0 {
        return RootInterval {
            lo: hi.clone(),
            hi,
            multiplicity: interval.multiplicity,
        };
    }
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let s = sf.sign_at(&mid);
        if s == 0 {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
                multiplicity: interval.multiplicity,
            };
        }
        if s == hi_sign {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RootInterval {
        lo,
        hi,
        multiplicity: interval.multiplicity,
    }
}
