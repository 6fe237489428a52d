//! Linear algebra over `B` with `F` viewed as `B^l`.

use super::{ExtField, FieldElement, GfError, PrimeField};

/// Incrementally built row-echelon basis of a subspace of `B^dim`.
///
/// Every echelon row remembers how it is written in terms of the inserted
/// vectors that were independent when they arrived ("members"), so any vector
/// in the span can be expressed in member coordinates.
#[derive(Debug, Clone)]
pub struct LinearSpan {
    base: PrimeField,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivot_cols: Vec<usize>,
    // rows[k] = Σ_j reps[k][j] · member_j
    reps: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanInsert {
    /// The vector became member number `.0`.
    Independent(usize),
    /// The vector is already spanned; coordinates over the current members.
    Dependent(Vec<u32>),
}

impl LinearSpan {
    pub fn new(base: PrimeField, dim: usize) -> Self {
        Self { base, dim, rows: Vec::new(), pivot_cols: Vec::new(), reps: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual after elimination and the multiple of each row removed.
    fn reduce(&self, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        assert_eq!(v.len(), self.dim);
        let f = self.base;
        let mut w = v.to_vec();
        let mut factors = Vec::with_capacity(self.rows.len());
        for (row, &col) in self.rows.iter().zip(&self.pivot_cols) {
            let c = w[col];
            factors.push(c);
            if c != 0 {
                for (wi, &ri) in w.iter_mut().zip(row) {
                    *wi = f.sub(*wi, f.mul(c, ri));
                }
            }
        }
        (w, factors)
    }

    fn combine(&self, factors: &[u32]) -> Vec<u32> {
        let f = self.base;
        let mut coords = vec![0u32; self.rows.len()];
        for (rep, &c) in self.reps.iter().zip(factors) {
            if c == 0 {
                continue;
            }
            for (x, &r) in coords.iter_mut().zip(rep) {
                *x = f.add(*x, f.mul(c, r));
            }
        }
        coords
    }

    /// Coordinates of `v` over the members, or `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        let (w, factors) = self.reduce(v);
        w.iter().all(|&x| x == 0).then(|| self.combine(&factors))
    }

    pub fn insert(&mut self, v: &[u32]) -> SpanInsert {
        let (mut w, factors) = self.reduce(v);
        let Some(col) = w.iter().position(|&x| x != 0) else {
            return SpanInsert::Dependent(self.combine(&factors));
        };
        let f = self.base;
        let member = self.rows.len();
        // w = v − Σ factors[k]·rows[k], so rep(w) = e_member − Σ factors[k]·reps[k]
        let mut rep = self.combine(&factors);
        for x in rep.iter_mut() {
            *x = f.neg(*x);
        }
        rep.push(1);
        let inv = f.inv(w[col]).expect("pivot is nonzero");
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for x in rep.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push(w);
        self.pivot_cols.push(col);
        self.reps.push(rep);
        SpanInsert::Independent(member)
    }
}

/// Result of a rank computation over `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankInfo {
    pub rank: usize,
    /// Indices (into the input) of the first maximal independent subset.
    pub independent: Vec<usize>,
    /// For every input element, its coordinates over `independent`.
    pub coords: Vec<Vec<u32>>,
}

/// A basis of `F` over `B` paired with its trace-dual basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualBasisPair {
    pub primal: Vec<FieldElement>,
    pub dual: Vec<FieldElement>,
}

/// Gauss–Jordan inverse of a square matrix over `B`; `None` if singular.
pub fn invert_matrix(base: PrimeField, mat: &[Vec<u32>]) -> Option<Vec<Vec<u32>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<u32>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| aug[r][col] != 0)?;
        aug.swap(col, pivot);
        let inv = base.inv(aug[col][col]).ok()?;
        for x in aug[col].iter_mut() {
            *x = base.mul(*x, inv);
        }
        for r in 0..n {
            if r == col || aug[r][col] == 0 {
                continue;
            }
            let c = aug[r][col];
            for j in 0..2 * n {
                let v = base.mul(c, aug[col][j]);
                aug[r][j] = base.sub(aug[r][j], v);
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl ExtField {
    /// Rank of the coefficient vectors over `B`, with a maximal independent
    /// subset and coordinates of every element in it.
    pub fn rank_over_base(&self, elems: &[FieldElement]) -> RankInfo {
        let mut span = LinearSpan::new(self.base(), self.degree());
        let mut independent = Vec::new();
        let mut raw = Vec::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            match span.insert(e.coeffs()) {
                SpanInsert::Independent(member) => {
                    independent.push(i);
                    raw.push(Err(member));
                }
                SpanInsert::Dependent(c) => raw.push(Ok(c)),
            }
        }
        let rank = span.rank();
        let coords = raw
            .into_iter()
            .map(|entry| match entry {
                Ok(mut c) => {
                    c.resize(rank, 0);
                    c
                }
                Err(member) => {
                    let mut unit = vec![0u32; rank];
                    unit[member] = 1;
                    unit
                }
            })
            .collect();
        RankInfo { rank, independent, coords }
    }

    /// Trace-dual basis: inverts the Gram matrix `G[i][j] = tr(b_i b_j)` and
    /// takes `μ_j = Σ_k (G⁻¹)[j][k] b_k`.
    pub fn dual_basis(&self, basis: &[FieldElement]) -> Result<DualBasisPair, GfError> {
        let l = self.degree();
        let rank = self.rank_over_base(basis).rank;
        if basis.len() != l || rank != l {
            return Err(GfError::RankDeficient { rank, expected: l });
        }
        let gram: Vec<Vec<u32>> = (0..l)
            .map(|i| (0..l).map(|j| self.trace(&self.mul(&basis[i], &basis[j]))).collect())
            .collect();
        let inv = invert_matrix(self.base(), &gram)
            .ok_or(GfError::RankDeficient { rank, expected: l })?;
        let dual = inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(basis)
                    .fold(self.zero(), |acc, (&c, b)| self.add(&acc, &self.scale(b, c)))
            })
            .collect();
        Ok(DualBasisPair { primal: basis.to_vec(), dual })
    }

    /// Rebuilds `a = Σ_i traces[i]·μ_i` from `traces[i] = tr(ζ_i a)`.
    pub fn expand_in_dual_basis(
        &self,
        traces: &[u32],
        pair: &DualBasisPair,
    ) -> Result<FieldElement, GfError> {
        if traces.len() != pair.dual.len() {
            return Err(GfError::TraceCount { expected: pair.dual.len(), got: traces.len() });
        }
        Ok(traces
            .iter()
            .zip(&pair.dual)
            .fold(self.zero(), |acc, (&t, mu)| self.add(&acc, &self.scale(mu, t))))
    }
}
