//! Evaluation points and monomial repair families.
//!
//! Every node of rack `e` is evaluated at `ζ^{x_e}·α^j`, `j ∈ [u]`, where `α`
//! has order `u` in `B` and `x_e` is the rack exponent: `r̄^{e−1}` in the
//! `r̄`-ary layout, `d_{w,y}` in the multi-base layout. A failed node in rack
//! `e` is repaired with `g_{t,s}(x) = ζ^{ut}·x^{us}` for `t` in the rack's
//! index set and `s ∈ [0, r̄−1]`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{factor_u64, is_prime_u64, ExtField, FieldElement, GfError, PrimeField};
use crate::radix::{self, RadixError, RadixSystem};
use crate::rs_code::{CodeError, CodeSpec, NodeId};

/// Largest sub-packetization this crate will build a field for.
pub const MAX_SUBPACKETIZATION: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Radix(#[from] RadixError),
    #[error("u = {u} does not divide q − 1 = {}", q - 1)]
    UDoesNotDivide { u: usize, q: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("r̄ = {0} is 2 or 3; use Construction 1")]
    UseConstruction1(u64),
    #[error("r̄ = {0} is composite; use Construction 2")]
    UseConstruction2(u64),
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("node {0} is not part of the code")]
    UnknownNode(NodeId),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    C1,
    C2,
    C2Remainder,
    Cor7,
    Homogeneous,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::C1 => "C1",
            Mode::C2 => "C2",
            Mode::C2Remainder => "C2-remainder",
            Mode::Cor7 => "Cor7",
            Mode::Homogeneous => "homogeneous",
        })
    }
}

/// User-facing parameters. `r_bar` drives C1, Cor7 and homogeneous mode;
/// `primes` drives C2 (`r̄ = ∏ primes`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeParams {
    pub mode: Mode,
    pub q: u32,
    pub u: usize,
    pub n_bar: usize,
    pub r_bar: Option<u64>,
    pub primes: Option<Vec<u64>>,
    pub v: usize,
}

impl SchemeParams {
    pub fn c1(q: u32, u: usize, n_bar: usize, r_bar: u64) -> Self {
        Self { mode: Mode::C1, q, u, n_bar, r_bar: Some(r_bar), primes: None, v: 0 }
    }

    pub fn c2(q: u32, u: usize, n_bar: usize, primes: Vec<u64>) -> Self {
        Self { mode: Mode::C2, q, u, n_bar, r_bar: None, primes: Some(primes), v: 0 }
    }

    pub fn cor7(q: u32, u: usize, n_bar: usize, r_bar: u64) -> Self {
        Self { mode: Mode::Cor7, q, u, n_bar, r_bar: Some(r_bar), primes: None, v: 0 }
    }

    pub fn homogeneous(q: u32, n: usize, r: u64) -> Self {
        Self { mode: Mode::Homogeneous, q, u: 1, n_bar: n, r_bar: Some(r), primes: None, v: 0 }
    }

    pub fn with_v(mut self, v: usize) -> Self {
        self.v = v;
        self
    }

    /// Checks every integer constraint and derives the layout without
    /// touching field arithmetic.
    pub fn validate(&self) -> Result<Layout, ConstructionError> {
        let base = PrimeField::new(self.q)?;
        let q = base.q();
        let (u, n_bar, v) = (self.u, self.n_bar, self.v);
        if u == 0 || (q - 1) as usize % u != 0 {
            return Err(ConstructionError::UDoesNotDivide { u, q });
        }
        if v >= u {
            return Err(ConstructionError::Invalid(format!("v = {v} must be below u = {u}")));
        }
        let need_r_bar = || {
            self.r_bar
                .ok_or_else(|| ConstructionError::Invalid(format!("{} needs r̄", self.mode)))
        };
        let (mode, r_bar, primes) = match self.mode {
            Mode::C1 | Mode::Homogeneous => {
                if self.mode == Mode::Homogeneous && u != 1 {
                    return Err(ConstructionError::Invalid("homogeneous mode has u = 1".into()));
                }
                let r_bar = need_r_bar()?;
                (self.mode, r_bar, vec![r_bar])
            }
            Mode::C2 | Mode::C2Remainder => {
                let primes = self
                    .primes
                    .clone()
                    .ok_or_else(|| ConstructionError::Invalid("C2 needs a prime list".into()))?;
                if let Some(&p) = primes.iter().find(|&&p| !is_prime_u64(p)) {
                    return Err(ConstructionError::NotPrime(p));
                }
                if primes.len() < 2 {
                    return Err(ConstructionError::Invalid(
                        "C2 needs at least two prime factors (m ≥ 2)".into(),
                    ));
                }
                let r_bar = primes
                    .iter()
                    .try_fold(1u64, |acc, &p| acc.checked_mul(p))
                    .ok_or_else(|| ConstructionError::Invalid("r̄ overflows".into()))?;
                let mode = if n_bar % primes.len() == 0 { Mode::C2 } else { Mode::C2Remainder };
                (mode, r_bar, primes)
            }
            Mode::Cor7 => {
                let r_bar = need_r_bar()?;
                if r_bar == 2 || r_bar == 3 {
                    return Err(ConstructionError::UseConstruction1(r_bar));
                }
                if !is_prime_u64(r_bar) {
                    return Err(ConstructionError::UseConstruction2(r_bar));
                }
                (Mode::Cor7, r_bar, factor_u64(r_bar - 1))
            }
        };
        if r_bar < 2 {
            return Err(ConstructionError::Invalid(format!("r̄ = {r_bar} must be at least 2")));
        }
        if n_bar as u64 <= r_bar {
            return Err(ConstructionError::Invalid(format!(
                "k̄ = n̄ − r̄ = {n_bar} − {r_bar} must be at least 1"
            )));
        }
        let r_bar_eff: u64 = primes.iter().product();
        let m = primes.len();
        let (n_prime, h) = (n_bar / m, n_bar % m);
        if m >= 2 && n_prime < 2 {
            return Err(ConstructionError::Invalid(format!(
                "n' = ⌊n̄/m⌋ = {n_prime} must be at least 2"
            )));
        }
        let radix = if m == 1 {
            RadixSystem::uniform(r_bar_eff, n_bar)
        } else {
            RadixSystem::multi_base(&primes, n_bar)
        }
        .map_err(|_| ConstructionError::Invalid("sub-packetization overflows".into()))?;
        let l = radix.capacity();
        if l > MAX_SUBPACKETIZATION {
            return Err(ConstructionError::Invalid(format!(
                "sub-packetization l = {l} exceeds {MAX_SUBPACKETIZATION}"
            )));
        }
        let k_bar = n_bar - r_bar as usize;
        let k = k_bar * u + v;
        let n = n_bar * u;
        let k_eff = (n_bar - r_bar_eff as usize) * u + v;
        let max_degree = u * (r_bar_eff as usize - 1);
        if max_degree > n - k_eff - 1 {
            return Err(ConstructionError::Internal(format!(
                "repair degree {max_degree} exceeds n − k' − 1 = {}",
                n - k_eff - 1
            )));
        }
        Ok(Layout {
            mode,
            q,
            u,
            n_bar,
            v,
            r_bar,
            r_bar_eff,
            primes,
            m,
            h,
            n_prime,
            l: l as usize,
            k_bar,
            k,
            k_eff,
            n,
            radix,
        })
    }
}

/// Validated integer parameters of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub mode: Mode,
    pub q: u32,
    pub u: usize,
    pub n_bar: usize,
    pub v: usize,
    /// `n̄ − k̄` of the code actually built.
    pub r_bar: u64,
    /// `r̄` the repair family is generated with (`r̄ − 1` in Cor7 mode).
    pub r_bar_eff: u64,
    /// Prime factors behind `r_bar_eff`; `[r̄]` for the `r̄`-ary layout.
    pub primes: Vec<u64>,
    pub m: usize,
    pub h: usize,
    pub n_prime: usize,
    pub l: usize,
    pub k_bar: usize,
    pub k: usize,
    /// Dimension whose dual admits the repair family (`k'` in Cor7 mode).
    pub k_eff: usize,
    pub n: usize,
    #[serde(skip)]
    pub radix: RadixSystem,
}

impl Layout {
    pub fn r(&self) -> usize {
        self.n - self.k
    }

    /// Multi-base layouts (C2, C2-remainder, Cor7) versus the `r̄`-ary one.
    pub fn is_multi_base(&self) -> bool {
        matches!(self.mode, Mode::C2 | Mode::C2Remainder | Mode::Cor7)
    }

    /// `(w, y)` label of a 1-based rack in the multi-base layout.
    pub fn rack_label(&self, rack: usize) -> (usize, usize) {
        ((rack - 1) / self.m, (rack - 1) % self.m + 1)
    }

    /// `∏_{j<y} p_j` for the rack's `y`; 1 in the `r̄`-ary layout.
    pub fn rack_prefix(&self, rack: usize) -> u64 {
        if !self.is_multi_base() {
            return 1;
        }
        let (_, y) = self.rack_label(rack);
        self.primes[..y - 1].iter().product()
    }

    pub fn rack_exponent(&self, rack: usize) -> u64 {
        self.radix.weight(rack)
    }

    pub fn index_set(&self, rack: usize) -> Result<Vec<u64>, ConstructionError> {
        if self.is_multi_base() {
            let (w, y) = self.rack_label(rack);
            Ok(radix::index_set_c2(w, y, &self.primes, self.n_bar)?)
        } else {
            Ok(radix::index_set_c1(rack, self.n_bar, self.r_bar_eff)?)
        }
    }
}

/// `α`, the rack exponents and the resulting point table.
#[derive(Debug, Clone)]
pub struct EvaluationPlan {
    /// Residue of `B` with multiplicative order `u`.
    pub alpha: u32,
    pub rack_exponents: Vec<u64>,
    /// `ζ^u` raised to `0..l`.
    pub zeta_u_powers: Vec<FieldElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanDescription {
    pub mode: String,
    pub params: Layout,
    pub field: crate::gf::FieldDescription,
    pub alpha: u32,
    pub rack_exponents: Vec<u64>,
    pub points: Vec<NodePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodePoint {
    pub rack: usize,
    pub slot: usize,
    pub digits: Vec<u32>,
}

/// A constructed code together with its evaluation plan.
#[derive(Debug, Clone)]
pub struct Instance {
    pub layout: Layout,
    pub code: CodeSpec,
    pub plan: EvaluationPlan,
}

impl Instance {
    pub fn field(&self) -> &Arc<ExtField> {
        self.code.field()
    }

    pub fn describe(&self) -> PlanDescription {
        PlanDescription {
            mode: self.layout.mode.to_string(),
            params: self.layout.clone(),
            field: self.field().describe(),
            alpha: self.plan.alpha,
            rack_exponents: self.plan.rack_exponents.clone(),
            points: self
                .code
                .nodes()
                .map(|node| NodePoint {
                    rack: node.rack,
                    slot: node.slot,
                    digits: self.code.point(node).coeffs().to_vec(),
                })
                .collect(),
        }
    }

    /// `g_{t,s}(x) = ζ^{ut}·x^{us}` evaluated for every member of `scheme` at `x`.
    pub fn evaluate_family(&self, scheme: &RepairScheme, x: &FieldElement) -> Vec<FieldElement> {
        let f = self.field();
        let xu = f.pow_u64(x, self.layout.u as u64);
        let mut x_pows = vec![f.one()];
        for s in 1..scheme.r_bar_eff {
            x_pows.push(f.mul(&x_pows[s as usize - 1], &xu));
        }
        scheme
            .polys
            .iter()
            .map(|p| f.mul(&self.plan.zeta_u_powers[p.t as usize], &x_pows[p.s as usize]))
            .collect()
    }

    /// Dense coefficients of `g_{t,s}`, low-degree first.
    pub fn dense_poly(&self, p: RepairPoly) -> Vec<FieldElement> {
        let f = self.field();
        let degree = p.degree(self.layout.u);
        let mut coeffs = vec![f.zero(); degree + 1];
        coeffs[degree] = self.plan.zeta_u_powers[p.t as usize].clone();
        coeffs
    }
}

fn alpha_of_order(base: PrimeField, u: usize) -> u32 {
    let xi = base.primitive_element();
    base.pow(xi, (base.q() as u64 - 1) / u as u64)
}

fn assemble(layout: Layout) -> Result<Instance, ConstructionError> {
    let field = Arc::new(ExtField::new(layout.q, layout.l)?);
    let base = field.base();
    let alpha = alpha_of_order(base, layout.u);
    if base.order(alpha)? != layout.u as u64 {
        return Err(ConstructionError::Internal(format!("α = {alpha} does not have order u")));
    }
    let rack_exponents: Vec<u64> = (1..=layout.n_bar).map(|e| layout.rack_exponent(e)).collect();
    let zeta = field.zeta().clone();
    let alpha_pows: Vec<FieldElement> =
        (1..=layout.u).map(|j| field.from_base(base.pow(alpha, j as u64))).collect();
    let mut points = Vec::with_capacity(layout.n);
    for &x in &rack_exponents {
        let rack_base = field.pow_u64(&zeta, x);
        points.extend(alpha_pows.iter().map(|a| field.mul(&rack_base, a)));
    }
    let zeta_u = field.pow_u64(&zeta, layout.u as u64);
    let mut zeta_u_powers = vec![field.one()];
    for t in 1..layout.l {
        zeta_u_powers.push(field.mul(&zeta_u_powers[t - 1], &zeta_u));
    }
    let code = CodeSpec::new(field, points, layout.u, layout.k).map_err(|e| match e {
        CodeError::RepeatedPoints => {
            ConstructionError::Internal("evaluation points collide".into())
        }
        other => other.into(),
    })?;
    Ok(Instance { layout, code, plan: EvaluationPlan { alpha, rack_exponents, zeta_u_powers } })
}

/// `r̄`-ary layout with `l = r̄^n̄`.
pub fn build_construction1(params: &SchemeParams) -> Result<Instance, ConstructionError> {
    let layout = params.validate()?;
    if layout.is_multi_base() {
        return Err(ConstructionError::Invalid(format!("{} is not Construction 1", layout.mode)));
    }
    assemble(layout)
}

/// Multi-base layout, `l = r̄^⌊n̄/m⌋·p_1⋯p_h`.
pub fn build_construction2(params: &SchemeParams) -> Result<Instance, ConstructionError> {
    let layout = params.validate()?;
    if !matches!(layout.mode, Mode::C2 | Mode::C2Remainder) {
        return Err(ConstructionError::Invalid(format!("{} is not Construction 2", layout.mode)));
    }
    assemble(layout)
}

/// Prime `r̄ ≥ 5`: Construction 2 for `r̄' = r̄ − 1` with the code dimension of `r̄`.
pub fn build_cor7(params: &SchemeParams) -> Result<Instance, ConstructionError> {
    let layout = params.validate()?;
    if layout.mode != Mode::Cor7 {
        return Err(ConstructionError::Invalid(format!("{} is not Cor7", layout.mode)));
    }
    assemble(layout)
}

pub fn build(params: &SchemeParams) -> Result<Instance, ConstructionError> {
    assemble(params.validate()?)
}

/// One repair polynomial `g_{t,s}(x) = ζ^{ut} x^{us}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RepairPoly {
    pub t: u64,
    pub s: u64,
}

impl RepairPoly {
    pub fn degree(&self, u: usize) -> usize {
        u * self.s as usize
    }
}

/// The repair family for one failed node, in `(t, s)` order, `t` major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairScheme {
    pub failed: NodeId,
    pub index_set: Vec<u64>,
    pub r_bar_eff: u64,
    pub polys: Vec<RepairPoly>,
}

impl RepairScheme {
    pub fn max_degree(&self, u: usize) -> usize {
        self.polys.iter().map(|p| p.degree(u)).max().unwrap_or(0)
    }
}

pub fn repair_family(instance: &Instance, failed: NodeId) -> Result<RepairScheme, ConstructionError> {
    if !instance.code.contains(failed) {
        return Err(ConstructionError::UnknownNode(failed));
    }
    let layout = &instance.layout;
    let index_set = layout.index_set(failed.rack)?;
    let polys: Vec<RepairPoly> = index_set
        .iter()
        .flat_map(|&t| (0..layout.r_bar_eff).map(move |s| RepairPoly { t, s }))
        .collect();
    if polys.len() != layout.l {
        return Err(ConstructionError::Internal(format!(
            "|T|·r̄ = {} differs from l = {}",
            polys.len(),
            layout.l
        )));
    }
    let scheme = RepairScheme { failed, index_set, r_bar_eff: layout.r_bar_eff, polys };
    let max_degree = scheme.max_degree(layout.u);
    if max_degree > layout.u * (layout.r_bar_eff as usize - 1) || max_degree > layout.r() - 1 {
        return Err(ConstructionError::Internal(format!(
            "repair degree {max_degree} exceeds u·r̄ − u or r − 1"
        )));
    }
    Ok(scheme)
}

/// Outcome of the rank check at the failed point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub rank: usize,
    pub l: usize,
    pub ok: bool,
    /// `r̄`-ary layout only: the evaluated set equals `{(ζ^u)^a : a ∈ [0, l−1]}`.
    pub power_identity: Option<bool>,
}

pub fn verify_rank_condition(instance: &Instance, scheme: &RepairScheme) -> RankCheck {
    let field = instance.field();
    let values = instance.evaluate_family(scheme, instance.code.point(scheme.failed));
    let rank = field.rank_over_base(&values).rank;
    let l = instance.layout.l;
    let power_identity = (!instance.layout.is_multi_base()).then(|| {
        let mut got = values.clone();
        got.sort();
        let mut want = instance.plan.zeta_u_powers.clone();
        want.sort();
        got == want
    });
    RankCheck { rank, l, ok: rank == l, power_identity }
}

/// How the exponents `t + s·x_e` (`t ∈ T`, `s ∈ [0, r̄−1]`) of the failed
/// rack's evaluations sit in the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExponentCover {
    /// Exactly `[0, l−1]`, each once.
    Full,
    /// Exactly `P·[0, l−1]` with `P = p_1⋯p_{y−1}`.
    Scaled(u64),
    Neither,
}

pub fn exponent_cover(instance: &Instance, scheme: &RepairScheme) -> ExponentCover {
    let layout = &instance.layout;
    let x = layout.rack_exponent(scheme.failed.rack);
    let mut exps: Vec<u64> = scheme.polys.iter().map(|p| p.t + p.s * x).collect();
    exps.sort_unstable();
    let l = layout.l as u64;
    if exps.iter().copied().eq(0..l) {
        return ExponentCover::Full;
    }
    let prefix = layout.rack_prefix(scheme.failed.rack);
    if prefix > 1 && exps.iter().copied().eq((0..l).map(|v| v * prefix)) {
        return ExponentCover::Scaled(prefix);
    }
    ExponentCover::Neither
}

/// `g_{t,s}(α_{e,j})` is the same for every `j` in each rack.
pub fn check_slot_independence(instance: &Instance, scheme: &RepairScheme) -> bool {
    let code = &instance.code;
    (1..=code.n_bar()).all(|rack| {
        let first = instance.evaluate_family(scheme, code.point(NodeId::new(rack, 1)));
        (2..=code.u()).all(|slot| {
            instance.evaluate_family(scheme, code.point(NodeId::new(rack, slot))) == first
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_errors() {
        assert_eq!(
            SchemeParams::c1(3, 4, 3, 2).validate().unwrap_err(),
            ConstructionError::UDoesNotDivide { u: 4, q: 3 }
        );
        assert!(SchemeParams::c1(3, 2, 2, 2).validate().is_err()); // k̄ = 0
        assert!(SchemeParams::c1(3, 2, 3, 2).with_v(2).validate().is_err());
        assert_eq!(
            SchemeParams::c2(3, 2, 6, vec![2, 4]).validate().unwrap_err(),
            ConstructionError::NotPrime(4)
        );
        assert!(SchemeParams::c2(3, 2, 3, vec![2, 2]).validate().is_err()); // n' = 1
        assert!(SchemeParams::c2(3, 2, 6, vec![5]).validate().is_err()); // m = 1
        assert_eq!(
            SchemeParams::cor7(3, 2, 6, 3).validate().unwrap_err(),
            ConstructionError::UseConstruction1(3)
        );
        assert_eq!(
            SchemeParams::cor7(3, 2, 8, 6).validate().unwrap_err(),
            ConstructionError::UseConstruction2(6)
        );
        assert!(SchemeParams::homogeneous(3, 3, 2).validate().is_ok());
        let mut bad = SchemeParams::homogeneous(3, 3, 2);
        bad.u = 2;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn derived_parameters() {
        let c1 = SchemeParams::c1(3, 2, 3, 2).validate().unwrap();
        assert_eq!((c1.l, c1.n, c1.k, c1.r()), (8, 6, 2, 4));
        let c2 = SchemeParams::c2(3, 2, 6, vec![2, 2]).validate().unwrap();
        assert_eq!((c2.mode, c2.r_bar, c2.m, c2.h, c2.n_prime), (Mode::C2, 4, 2, 0, 3));
        assert_eq!((c2.l, c2.n, c2.k), (64, 12, 4));
        assert_eq!((1..=6).map(|e| c2.rack_exponent(e)).collect::<Vec<_>>(), [1, 2, 4, 8, 16, 32]);
        let rem = SchemeParams::c2(3, 2, 5, vec![2, 2]).validate().unwrap();
        assert_eq!((rem.mode, rem.h, rem.l, rem.n, rem.k), (Mode::C2Remainder, 1, 32, 10, 2));
        assert_eq!((1..=5).map(|e| rem.rack_exponent(e)).collect::<Vec<_>>(), [1, 2, 4, 8, 16]);
        let cor = SchemeParams::cor7(3, 2, 6, 5).validate().unwrap();
        assert_eq!((cor.r_bar, cor.r_bar_eff, cor.primes.clone()), (5, 4, vec![2, 2]));
        assert_eq!((cor.l, cor.n, cor.k, cor.k_eff), (64, 12, 2, 4));
        assert_eq!(cor.u * (cor.r_bar_eff as usize - 1), 6);
        assert_eq!(cor.n - cor.k_eff - 1, 7);
        let mixed = SchemeParams::c2(7, 3, 8, vec![2, 3]).with_v(2).validate().unwrap();
        assert_eq!((mixed.l, mixed.k, mixed.r()), (1296, 8, 16));
    }

    #[test]
    fn construction1_small_instance() {
        let inst = build_construction1(&SchemeParams::c1(3, 2, 3, 2)).unwrap();
        assert_eq!(inst.plan.alpha, 2);
        assert_eq!(inst.plan.rack_exponents, vec![1, 2, 4]);
        let f = inst.field();
        let zeta = f.zeta();
        for (rack, &x) in [1u64, 2, 4].iter().enumerate() {
            let base = f.pow_u64(zeta, x);
            assert_eq!(inst.code.point(NodeId::new(rack + 1, 2)), &base);
            assert_eq!(inst.code.point(NodeId::new(rack + 1, 1)), &f.scale(&base, 2));
        }
        let scheme = repair_family(&inst, NodeId::new(2, 1)).unwrap();
        assert_eq!(scheme.index_set, vec![0, 1, 4, 5]);
        assert_eq!(scheme.polys.len(), 8);
        let degrees: std::collections::BTreeSet<_> = scheme.polys.iter().map(|p| p.degree(2)).collect();
        assert_eq!(degrees.into_iter().collect::<Vec<_>>(), vec![0, 2]);
        let other_slot = repair_family(&inst, NodeId::new(2, 2)).unwrap();
        assert_eq!(other_slot.polys, scheme.polys);
        assert!(repair_family(&inst, NodeId::new(4, 1)).is_err());
    }

    #[test]
    fn rank_condition_and_identities_c1() {
        for params in [SchemeParams::c1(3, 2, 3, 2), SchemeParams::homogeneous(3, 3, 2), SchemeParams::c1(5, 4, 3, 2), SchemeParams::c1(7, 3, 3, 2).with_v(1)] {
            let inst = build(&params).unwrap();
            for node in inst.code.nodes() {
                let scheme = repair_family(&inst, node).unwrap();
                let check = verify_rank_condition(&inst, &scheme);
                assert!(check.ok, "{params:?} {node}");
                assert_eq!(check.power_identity, Some(true));
                assert_eq!(exponent_cover(&inst, &scheme), ExponentCover::Full);
                assert!(check_slot_independence(&inst, &scheme));
            }
        }
    }

    #[test]
    fn dropping_a_polynomial_loses_rank() {
        let inst = build(&SchemeParams::c1(3, 2, 3, 2)).unwrap();
        let mut scheme = repair_family(&inst, NodeId::new(1, 1)).unwrap();
        scheme.polys.pop();
        let check = verify_rank_condition(&inst, &scheme);
        assert_eq!((check.rank, check.ok), (7, false));
    }

    #[test]
    fn homogeneous_points_are_single_powers() {
        let inst = build(&SchemeParams::homogeneous(3, 3, 2)).unwrap();
        let f = inst.field();
        assert_eq!(inst.plan.alpha, 1);
        for (i, x) in [1u64, 2, 4].iter().enumerate() {
            assert_eq!(inst.code.points()[i], f.pow_u64(f.zeta(), *x));
        }
    }
}
