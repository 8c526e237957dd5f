//! Dense univariate polynomials over arbitrary-precision integers.
//!
//! `IntPoly` stores coefficients in ascending degree order as a `Vec<BigInt>`.
//! Invariant: the vector is either empty (zero polynomial) or the last element
//! is nonzero. All arithmetic is exact; nothing here ever rounds.
//!
//! Sign convention used by the spectral layer: characteristic polynomials are
//! determinants `det(zD̂ − Â)`, so leading coefficients come out positive
//! (products of vertex degrees). Comparisons that only care about zero sets go
//! through [`IntPoly::primitive_normalize`].

mod matrix;
mod roots;

pub use matrix::det_poly_matrix;
pub use roots::{refine_interval as refine_root_interval, RootInterval};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

/// Errors from exact polynomial operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    /// Division left a nonzero remainder or a non-integer quotient. In the
    /// spectral layer this signals a violated theorem hypothesis; it is always
    /// surfaced, never rounded away.
    #[error("polynomial division is not exact")]
    DivisionInexact,
    /// The operation is undefined for the zero polynomial.
    #[error("operation undefined for the zero polynomial")]
    ZeroInput,
    /// A matrix operation received a non-square matrix.
    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NonSquareMatrix { rows: usize, row: usize, cols: usize },
    /// An interval bound was invalid (lo > hi).
    #[error("invalid interval: lower bound exceeds upper bound")]
    InvalidInterval,
}

/// Dense univariate polynomial with `BigInt` coefficients, ascending degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    // ---- Constructors ----

    /// The zero polynomial.
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    /// The indeterminate `z`.
    pub fn var() -> Self {
        IntPoly {
            coeffs: vec![BigInt::zero(), BigInt::one()],
        }
    }

    /// A constant polynomial.
    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = IntPoly {
            coeffs: vec![c.into()],
        };
        p.normalize();
        p
    }

    /// The monomial `c * z^deg`.
    pub fn monomial(c: impl Into<BigInt>, deg: usize) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        IntPoly { coeffs }
    }

    /// Construct from coefficients in ascending degree order.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.normalize();
        p
    }

    /// Convenience constructor from `i64` coefficients, ascending degree.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    // ---- Queries ----

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Read-only coefficient slice, ascending degree.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    // ---- Ring operations ----

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// Multiply every coefficient by an integer.
    pub fn scale(&self, k: impl Into<BigInt>) -> IntPoly {
        let k = k.into();
        if k.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Exact division: returns `q` with `self = divisor * q`, coefficient-wise
    /// over the integers. Anything else is [`PolyError::DivisionInexact`].
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<IntPoly, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (dn, dd) = (self.degree().unwrap(), divisor.degree().unwrap());
        if dn < dd {
            return Err(PolyError::DivisionInexact);
        }
        // Long division over the rationals, then an integrality check.
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let lead = BigRational::from_integer(divisor.leading_coeff().unwrap().clone());
        let mut quot = vec![BigRational::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let q = &rem[k + dd] / &lead;
            if !q.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    let t = &q * BigRational::from_integer(b.clone());
                    rem[k + j] -= t;
                }
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(PolyError::DivisionInexact);
        }
        let mut coeffs = Vec::with_capacity(quot.len());
        for q in quot {
            if !q.denom().is_one() {
                return Err(PolyError::DivisionInexact);
            }
            coeffs.push(q.to_integer());
        }
        Ok(Self::from_coeffs(coeffs))
    }

    // ---- Content and normal forms ----

    /// The gcd of the absolute coefficient values (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Divides out the integer content and fixes the leading coefficient
    /// positive. Two polynomials are proportional iff their primitive
    /// normalizations coincide.
    pub fn primitive_normalize(&self) -> Result<IntPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        let mut content = self.content();
        if self.leading_coeff().unwrap().is_negative() {
            content = -content;
        }
        let coeffs = self.coeffs.iter().map(|c| c / &content).collect();
        Ok(IntPoly { coeffs })
    }

    // ---- Evaluation ----

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of the value at a rational point, computed without building the
    /// full rational: for `x = p/q` this is the sign of `Σ c_i p^i q^(d-i)`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let d = self.degree().unwrap();
        let (p, q) = (x.numer(), x.denom());
        let mut p_pow = BigInt::one();
        let mut powers = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            powers.push(p_pow.clone());
            p_pow *= p;
        }
        let mut acc = BigInt::zero();
        let mut q_pow = BigInt::one();
        for i in (0..=d).rev() {
            acc += &self.coeffs()[i] * &powers[i] * &q_pow;
            q_pow *= q;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Floating-point evaluation (Horner). Coefficients outside the `f64`
    /// range saturate; fine for the desk-scale polynomials this crate builds.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::INFINITY);
        }
        acc
    }

    /// Sum of absolute coefficient values as `f64`: a bound for `|P|` on `[-1, 1]`.
    pub fn coeff_abs_sum_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.magnitude().to_f64().unwrap_or(f64::INFINITY))
            .sum()
    }

    // ---- Root machinery (implemented in roots.rs) ----

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_real_roots(
        &self,
        lo: &BigRational,
        hi: &BigRational,
    ) -> Result<usize, PolyError> {
        roots::count_real_roots(self, lo, hi)
    }

    /// Distinct real roots over the whole real line.
    pub fn count_real_roots_all(&self) -> Result<usize, PolyError> {
        roots::count_real_roots_all(self)
    }

    /// Disjoint isolating intervals for every distinct real root, sorted
    /// ascending, with multiplicities from square-free factorization.
    pub fn isolate_real_roots(&self) -> Result<Vec<RootInterval>, PolyError> {
        roots::isolate_real_roots(self)
    }

    /// Square-free part `self / gcd(self, self')`, primitive-normalized.
    pub fn squarefree_part(&self) -> Result<IntPoly, PolyError> {
        roots::squarefree_part(self)
    }

    /// Square-free decomposition: pairs `(factor, multiplicity)` with the
    /// factors pairwise coprime, primitive, and of positive degree;
    /// `Π factor^multiplicity` is proportional to `self`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(IntPoly, u32)>, PolyError> {
        roots::squarefree_decomposition(self)
    }

    /// Multiplicity of the rational point `r` as a root (0 if not a root).
    pub fn root_multiplicity_at(&self, r: &BigRational) -> Result<u32, PolyError> {
        roots::root_multiplicity_at(self, r)
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    /// Zero if both inputs are zero.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        roots::gcd(self, other)
    }

    // ---- Text and JSON forms ----

    /// Coefficients as exact decimal strings, ascending degree (the machine
    /// report format).
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// Parse from decimal-string coefficients, ascending degree.
    pub fn from_coeff_strings(strs: &[String]) -> Option<IntPoly> {
        let mut coeffs = Vec::with_capacity(strs.len());
        for s in strs {
            coeffs.push(s.trim().parse::<BigInt>().ok()?);
        }
        Some(Self::from_coeffs(coeffs))
    }
}

impl fmt::Display for IntPoly {
    /// Report text form: `c0 + c1*z + c2*z^2 + ...` with exact decimal integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i == 0 {
                write!(f, "{c}")?;
            } else if i == 1 {
                write!(f, " + {c}*z")?;
            } else {
                write!(f, " + {c}*z^{i}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

// Machine format: a JSON array of decimal strings, ascending degree. Numbers
// are accepted on input for hand-written files.
impl serde::Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> serde::Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = Vec::<serde_json::Value>::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(raw.len());
        for v in raw {
            let c = match &v {
                serde_json::Value::String(s) => s.trim().parse::<BigInt>().ok(),
                serde_json::Value::Number(n) => n.to_string().parse::<BigInt>().ok(),
                _ => None,
            };
            coeffs.push(c.ok_or_else(|| D::Error::custom(format!("bad coefficient: {v}")))?);
        }
        Ok(Self::from_coeffs(coeffs))
    }
}
