//! Reed–Solomon codes `RS(A, k)` over `F` laid out in racks.
//!
//! Symbols are stored rack-major: node `(e, m)` (rack `e`, slot `m`, both
//! 1-based) sits at flat position `(e−1)·u + (m−1)`.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{ExtField, FieldElement, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("evaluation points are not pairwise distinct")]
    RepeatedPoints,
    #[error("invalid code shape: {0}")]
    Shape(String),
    #[error("polynomial degree {degree} exceeds the bound {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("expected {expected} symbols, got {got}")]
    SymbolCount { expected: usize, got: usize },
    #[error("position {0} is repeated or out of range")]
    BadPosition(usize),
    #[error("malformed codeword text: {0}")]
    Parse(String),
}

/// A storage node: 1-based rack and slot within the rack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId {
    pub rack: usize,
    pub slot: usize,
}

impl NodeId {
    pub fn new(rack: usize, slot: usize) -> Self {
        Self { rack, slot }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rack, self.slot)
    }
}

/// Message polynomial `f` with exactly `k` coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessagePoly {
    coeffs: Vec<FieldElement>,
}

impl MessagePoly {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }
}

/// `λ_i = ∏_{j≠i} (α_i − α_j)^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualWeights {
    pub lambdas: Vec<FieldElement>,
}

/// Horner evaluation of a polynomial given low-degree first.
pub fn eval_poly(field: &ExtField, coeffs: &[FieldElement], x: &FieldElement) -> FieldElement {
    coeffs
        .iter()
        .rev()
        .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
}

fn effective_degree(coeffs: &[FieldElement]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

#[derive(Debug, Clone)]
pub struct CodeSpec {
    field: Arc<ExtField>,
    points: Vec<FieldElement>,
    u: usize,
    k: usize,
}

impl CodeSpec {
    /// `points` are listed rack-major; `u` nodes per rack.
    pub fn new(
        field: Arc<ExtField>,
        points: Vec<FieldElement>,
        u: usize,
        k: usize,
    ) -> Result<Self, CodeError> {
        let n = points.len();
        if u == 0 || n % u != 0 {
            return Err(CodeError::Shape(format!("n = {n} is not a multiple of u = {u}")));
        }
        if k < u || k >= n {
            return Err(CodeError::Shape(format!("need u ≤ k < n, got u={u}, k={k}, n={n}")));
        }
        for p in &points {
            field.check(p)?;
        }
        let distinct: HashSet<&FieldElement> = points.iter().collect();
        if distinct.len() != n {
            return Err(CodeError::RepeatedPoints);
        }
        Ok(Self { field, points, u, k })
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn points(&self) -> &[FieldElement] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn n_bar(&self) -> usize {
        self.n() / self.u
    }

    pub fn r(&self) -> usize {
        self.n() - self.k
    }

    pub fn v(&self) -> usize {
        self.k % self.u
    }

    pub fn k_bar(&self) -> usize {
        self.k / self.u
    }

    pub fn r_bar(&self) -> usize {
        self.n_bar() - self.k_bar()
    }

    pub fn flat_index(&self, node: NodeId) -> usize {
        (node.rack - 1) * self.u + (node.slot - 1)
    }

    pub fn node_at(&self, flat: usize) -> NodeId {
        NodeId::new(flat / self.u + 1, flat % self.u + 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n()).map(|i| self.node_at(i))
    }

    pub fn contains(&self, node: NodeId) -> bool {
        (1..=self.n_bar()).contains(&node.rack) && (1..=self.u).contains(&node.slot)
    }

    pub fn point(&self, node: NodeId) -> &FieldElement {
        &self.points[self.flat_index(node)]
    }

    pub fn random_message<R: Rng + ?Sized>(&self, rng: &mut R) -> MessagePoly {
        MessagePoly::new((0..self.k).map(|_| self.field.random(rng)).collect())
    }

    /// `(f(α_1), …, f(α_n))`.
    pub fn encode(&self, f: &MessagePoly) -> Result<Vec<FieldElement>, CodeError> {
        if let Some(d) = effective_degree(&f.coeffs) {
            if d >= self.k {
                return Err(CodeError::DegreeOverflow { degree: d, max: self.k - 1 });
            }
        }
        for c in &f.coeffs {
            self.field.check(c)?;
        }
        Ok(self.points.iter().map(|x| eval_poly(&self.field, &f.coeffs, x)).collect())
    }

    pub fn dual_weights(&self) -> DualWeights {
        let f = &self.field;
        let lambdas = self
            .points
            .iter()
            .enumerate()
            .map(|(i, ai)| {
                let prod = self
                    .points
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(f.one(), |acc, (_, aj)| f.mul(&acc, &f.sub(ai, aj)));
                f.inv(&prod).expect("points are distinct")
            })
            .collect();
        DualWeights { lambdas }
    }

    /// Largest degree allowed for a polynomial generating a dual codeword.
    pub fn max_dual_degree(&self) -> usize {
        self.r() - 1
    }

    pub fn check_dual_degree(&self, degree: usize) -> Result<(), CodeError> {
        if degree > self.max_dual_degree() {
            return Err(CodeError::DegreeOverflow { degree, max: self.max_dual_degree() });
        }
        Ok(())
    }

    /// `(λ_1 g(α_1), …, λ_n g(α_n))`.
    pub fn dual_codeword(
        &self,
        g: &[FieldElement],
        weights: &DualWeights,
    ) -> Result<Vec<FieldElement>, CodeError> {
        if let Some(d) = effective_degree(g) {
            self.check_dual_degree(d)?;
        }
        Ok(self
            .points
            .iter()
            .zip(&weights.lambdas)
            .map(|(x, lam)| self.field.mul(lam, &eval_poly(&self.field, g, x)))
            .collect())
    }

    /// Lagrange interpolation from exactly `k` `(flat position, symbol)` pairs.
    pub fn erasure_decode(
        &self,
        partial: &[(usize, FieldElement)],
    ) -> Result<MessagePoly, CodeError> {
        let f = &self.field;
        if partial.len() != self.k {
            return Err(CodeError::SymbolCount { expected: self.k, got: partial.len() });
        }
        let mut seen = HashSet::new();
        for (pos, sym) in partial {
            if *pos >= self.n() || !seen.insert(*pos) {
                return Err(CodeError::BadPosition(*pos));
            }
            f.check(sym)?;
        }
        let xs: Vec<&FieldElement> = partial.iter().map(|(p, _)| &self.points[*p]).collect();
        // full(x) = ∏ (x − x_j), low-degree first
        let mut full = vec![f.one()];
        for x in &xs {
            let mut next = vec![f.zero(); full.len() + 1];
            for (i, c) in full.iter().enumerate() {
                next[i + 1] = f.add(&next[i + 1], c);
                next[i] = f.sub(&next[i], &f.mul(c, x));
            }
            full = next;
        }
        let mut out = vec![f.zero(); self.k];
        for (i, (_, y)) in partial.iter().enumerate() {
            // basis(x) = full(x) / (x − x_i) by synthetic division
            let mut basis = vec![f.zero(); self.k];
            let mut carry = f.zero();
            for d in (0..self.k).rev() {
                carry = f.add(&full[d + 1], &f.mul(&carry, xs[i]));
                basis[d] = carry.clone();
            }
            let denom = eval_poly(f, &basis, xs[i]);
            let scale = f.div(y, &denom)?;
            for (o, b) in out.iter_mut().zip(&basis) {
                *o = f.add(o, &f.mul(b, &scale));
            }
        }
        Ok(MessagePoly::new(out))
    }
}

/// One line per symbol, each the `l` base-`q` digits low-first, comma separated.
pub fn codeword_to_text(codeword: &[FieldElement]) -> String {
    let mut out = String::new();
    for sym in codeword {
        out.push_str(&sym.to_string());
        out.push('\n');
    }
    out
}

pub fn codeword_from_text(field: &ExtField, text: &str) -> Result<Vec<FieldElement>, CodeError> {
    text.lines()
        .filter(|line| !line.trim().is_empty())
        .map(|line| {
            let digits = line
                .split(',')
                .map(|d| d.trim().parse::<u32>().map_err(|e| CodeError::Parse(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(field.element(digits)?)
        })
        .collect()
}
