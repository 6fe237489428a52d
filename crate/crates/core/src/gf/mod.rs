//! Exact arithmetic in `B = GF(q)` and `F = GF(q^l)`.
//!
//! `F` is represented as `GF(q)[x] / (f)` for a monic irreducible `f` of
//! degree `l`; an element is its length-`l` coefficient vector, constant term
//! first. Every field carries a primitive element `ζ` whose order is certified
//! from the prime factorization of `q^l − 1`.

mod factor;
mod linalg;
pub(crate) mod poly;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

pub use factor::{cyclotomic_value, factor_field_order, factor_u64, is_prime_u64};
pub use linalg::{invert_matrix, DualBasisPair, LinearSpan, RankInfo, SpanInsert};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: usize },
    #[error("modulus is reducible over GF({q})")]
    ReducibleModulus { q: u32 },
    #[error("q^l - 1 for q={q}, l={l} has a cyclotomic piece beyond 64 bits")]
    OrderTooLarge { q: u32, l: usize },
    #[error("element belongs to a different field")]
    FieldMismatch,
    #[error("coefficient vector must have length {expected} with entries below {q}")]
    BadCoefficients { expected: usize, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("sum of conjugates left the base field (coefficients {0:?})")]
    TraceNotInBase(Vec<u32>),
    #[error("basis has rank {rank} over the base field, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("expected {expected} trace values, got {got}")]
    TraceCount { expected: usize, got: usize },
}

/// The prime field `B = GF(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self, GfError> {
        // keeps products of two residues inside u64 with room for accumulation
        if q >= 1 << 31 || !is_prime_u64(q as u64) {
            return Err(GfError::NotPrime(q as u64));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.q as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.q as u64 - b as u64 % self.q as u64) % self.q as u64) as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.q as u64) as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a % self.q == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(poly::mod_inv(a % self.q, self.q))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        poly::mod_pow(a as u64, e, self.q as u64) as u32
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order(&self, a: u32) -> Result<u64, GfError> {
        if a % self.q == 0 {
            return Err(GfError::ZeroOrder);
        }
        let mut order = self.q as u64 - 1;
        for p in factor_u64(order) {
            if self.pow(a, order / p) == 1 {
                order /= p;
            }
        }
        Ok(order)
    }

    /// Smallest generator of `B^*`.
    pub fn primitive_element(&self) -> u32 {
        (1..self.q)
            .find(|&a| self.order(a) == Ok(self.q as u64 - 1))
            .expect("GF(q)^* is cyclic")
    }
}

/// An element of some `GF(q^l)`: `l` residues mod `q`, constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    tag: u64,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.coeffs.iter().map(u32::to_string).collect();
        write!(f, "{}", digits.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Serializable summary of a constructed extension field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldDescription {
    pub q: u32,
    pub l: usize,
    pub modulus: Vec<u32>,
    pub zeta: Vec<u32>,
    pub order_factorization: Vec<u64>,
}

/// The extension `F = GF(q^l)` with its certified primitive element.
#[derive(Debug, Clone)]
pub struct ExtField {
    base: PrimeField,
    l: usize,
    modulus: Vec<u32>,
    zeta: FieldElement,
    order: BigUint,
    order_factors: Vec<u64>,
    // tr(x^i) for i in 0..l
    trace_table: Vec<u32>,
    tag: u64,
}

impl ExtField {
    /// Builds `GF(q^l)` from the first irreducible modulus in enumeration order.
    pub fn new(q: u32, l: usize) -> Result<Self, GfError> {
        let base = PrimeField::new(q)?;
        if l == 0 {
            return Err(GfError::ZeroDegree);
        }
        let modulus = poly::find_irreducible(q, l);
        Self::assemble(base, modulus)
    }

    /// Builds `GF(q^l)` from a caller-chosen monic modulus of degree `l`.
    pub fn with_modulus(q: u32, modulus: Vec<u32>) -> Result<Self, GfError> {
        let base = PrimeField::new(q)?;
        let l = modulus.len().saturating_sub(1);
        if l == 0 {
            return Err(GfError::ZeroDegree);
        }
        if modulus[l] != 1 || modulus.iter().any(|&c| c >= q) {
            return Err(GfError::BadModulus { expected: l });
        }
        if !poly::is_irreducible(&modulus, q) {
            return Err(GfError::ReducibleModulus { q });
        }
        Self::assemble(base, modulus)
    }

    fn assemble(base: PrimeField, modulus: Vec<u32>) -> Result<Self, GfError> {
        let q = base.q;
        let l = modulus.len() - 1;
        let order_factors = factor_field_order(q, l)?;
        let order = BigUint::from(q).pow(l as u32) - 1u32;
        debug_assert_eq!(
            order_factors.iter().fold(BigUint::one(), |acc, &p| acc * p),
            order
        );
        let mut hasher = DefaultHasher::new();
        (q, &modulus).hash(&mut hasher);
        let tag = hasher.finish();
        let mut one = vec![0u32; l];
        one[0] = 1;
        let mut field = Self {
            base,
            l,
            modulus,
            zeta: FieldElement { tag, coeffs: one },
            order,
            order_factors,
            trace_table: Vec::new(),
            tag,
        };
        field.trace_table = (0..l)
            .map(|i| field.trace_by_conjugates(&field.monomial(i)))
            .collect::<Result<_, _>>()?;
        field.zeta = field.find_primitive_element();
        Ok(field)
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn q(&self) -> u32 {
        self.base.q
    }

    /// Extension degree `l`.
    pub fn degree(&self) -> usize {
        self.l
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The certified primitive element `ζ`.
    pub fn zeta(&self) -> &FieldElement {
        &self.zeta
    }

    /// `q^l − 1`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_factorization(&self) -> &[u64] {
        &self.order_factors
    }

    pub fn describe(&self) -> FieldDescription {
        FieldDescription {
            q: self.q(),
            l: self.l,
            modulus: self.modulus.clone(),
            zeta: self.zeta.coeffs.clone(),
            order_factorization: self.order_factors.clone(),
        }
    }

    fn wrap(&self, mut coeffs: Vec<u32>) -> FieldElement {
        coeffs.resize(self.l, 0);
        FieldElement { tag: self.tag, coeffs }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(Vec::new())
    }

    pub fn one(&self) -> FieldElement {
        self.from_base(1)
    }

    /// Embeds a residue of `B` into `F`.
    pub fn from_base(&self, c: u32) -> FieldElement {
        self.wrap(vec![c % self.q()])
    }

    /// `x^i` reduced modulo the field polynomial.
    pub fn monomial(&self, i: usize) -> FieldElement {
        let mut p = vec![0u32; i + 1];
        p[i] = 1;
        self.wrap(poly::rem(&p, &self.modulus, self.q()))
    }

    pub fn element(&self, coeffs: Vec<u32>) -> Result<FieldElement, GfError> {
        if coeffs.len() != self.l || coeffs.iter().any(|&c| c >= self.q()) {
            return Err(GfError::BadCoefficients { expected: self.l, q: self.q() });
        }
        Ok(self.wrap(coeffs))
    }

    /// Element whose coefficient vector is the base-`q` expansion of `index`,
    /// constant term least significant. Enumerates the field for small `q^l`.
    pub fn element_from_index(&self, mut index: u128) -> FieldElement {
        let q = self.q() as u128;
        let coeffs = (0..self.l)
            .map(|_| {
                let c = (index % q) as u32;
                index /= q;
                c
            })
            .collect();
        self.wrap(coeffs)
    }

    /// Number of elements when it fits in `u128`.
    pub fn size(&self) -> Option<u128> {
        (self.q() as u128).checked_pow(self.l as u32)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let q = self.q();
        self.wrap((0..self.l).map(|_| rng.gen_range(0..q)).collect())
    }

    /// Rejects elements built for another field or with malformed coefficients.
    pub fn check(&self, a: &FieldElement) -> Result<(), GfError> {
        if a.tag != self.tag {
            return Err(GfError::FieldMismatch);
        }
        if a.coeffs.len() != self.l || a.coeffs.iter().any(|&c| c >= self.q()) {
            return Err(GfError::BadCoefficients { expected: self.l, q: self.q() });
        }
        Ok(())
    }

    /// Checked binary operation.
    pub fn arith(
        &self,
        a: &FieldElement,
        b: &FieldElement,
        op: ArithOp,
    ) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(a.tag == self.tag && b.tag == self.tag);
        let f = self.base;
        self.wrap(a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.add(x, y)).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(a.tag == self.tag && b.tag == self.tag);
        let f = self.base;
        self.wrap(a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let f = self.base;
        self.wrap(a.coeffs.iter().map(|&x| f.neg(x)).collect())
    }

    /// Multiplication by a base-field scalar.
    pub fn scale(&self, a: &FieldElement, c: u32) -> FieldElement {
        let f = self.base;
        self.wrap(a.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        debug_assert!(a.tag == self.tag && b.tag == self.tag);
        self.wrap(poly::mul_mod(&a.coeffs, &b.coeffs, &self.modulus, self.q()))
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, GfError> {
        poly::inv_mod(&a.coeffs, &self.modulus, self.q())
            .map(|c| self.wrap(c))
            .ok_or(GfError::DivisionByZero)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Square-and-multiply with an unbounded exponent; `a^0 = 1`.
    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> FieldElement {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &FieldElement, e: u64) -> FieldElement {
        self.pow(a, &BigUint::from(e))
    }

    /// `tr(a) = a + a^q + … + a^(q^(l−1))`, computed literally. Fails if the
    /// sum is not a constant, which would mean the arithmetic is broken.
    pub fn trace_by_conjugates(&self, a: &FieldElement) -> Result<u32, GfError> {
        let q = BigUint::from(self.q());
        let mut conj = a.clone();
        let mut sum = a.clone();
        for _ in 1..self.l {
            conj = self.pow(&conj, &q);
            sum = self.add(&sum, &conj);
        }
        if sum.coeffs[1..].iter().any(|&c| c != 0) {
            return Err(GfError::TraceNotInBase(sum.coeffs));
        }
        Ok(sum.coeffs[0])
    }

    /// `tr_{F/B}(a)` through the cached traces of the monomial basis.
    pub fn trace(&self, a: &FieldElement) -> u32 {
        let f = self.base;
        a.coeffs
            .iter()
            .zip(&self.trace_table)
            .fold(0, |acc, (&c, &t)| f.add(acc, f.mul(c, t)))
    }

    /// Least `e ≥ 1` with `a^e = 1`, found by stripping primes from `q^l − 1`.
    pub fn element_order(&self, a: &FieldElement) -> Result<BigUint, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroOrder);
        }
        let one = self.one();
        let mut order = self.order.clone();
        for &p in &self.order_factors {
            let candidate = &order / p;
            if self.pow(a, &candidate) == one {
                order = candidate;
            }
        }
        Ok(order)
    }

    /// `a^((q^l−1)/p) ≠ 1` for every prime `p` dividing `q^l − 1`.
    pub fn is_primitive(&self, a: &FieldElement) -> bool {
        if a.is_zero() {
            return false;
        }
        let one = self.one();
        let mut primes = self.order_factors.clone();
        primes.dedup();
        primes
            .iter()
            .all(|&p| self.pow(a, &(&self.order / p)) != one)
    }

    fn find_primitive_element(&self) -> FieldElement {
        (1u128..)
            .map(|i| self.element_from_index(i))
            .find(|a| self.is_primitive(a))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        a.coeffs[0] == 1 && a.coeffs[1..].iter().all(|&c| c == 0)
    }
}
