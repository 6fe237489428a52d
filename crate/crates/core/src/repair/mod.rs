//! Trace repair of one failed node with per-rack bandwidth accounting.

mod audit;
mod bounds;

pub use audit::{audit, AuditFindings, RackMismatch};
pub use bounds::{bounds, BoundCase, BoundSet, InfoCase};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::constructions::{verify_rank_condition, ConstructionError, Instance, RankCheck, RepairScheme};
use crate::gf::{DualBasisPair, FieldElement, GfError};
use crate::rs_code::NodeId;

#[derive(Debug, Error)]
pub enum RepairError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("rack {0} hosts the failed node")]
    HostRack(usize),
    #[error("rack {0} is not part of the code")]
    UnknownRack(usize),
    #[error("rank condition fails at {node}: rank {rank} < l = {l}")]
    RankDeficient { node: NodeId, rank: usize, l: usize },
    #[error("repair evaluations differ between slots of rack {0}")]
    SlotDependence(usize),
    #[error("codeword has {got} symbols, expected {expected}")]
    CodewordLength { expected: usize, got: usize },
    #[error("payload count {payload} differs from rank sum {rank_sum}")]
    AccountingMismatch { payload: usize, rank_sum: usize },
    #[error("recovered symbol at {} differs from the erased symbol", .0.failed)]
    Mismatch(Box<RepairTranscript>),
}

/// What one helper rack sends across the rack boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RackMessage {
    pub rack: usize,
    pub basis: Vec<FieldElement>,
    /// `tr(β_w·μ_e)` for each basis element; the only counted symbols.
    pub payload: Vec<u32>,
    /// Coordinates of each `g_{t,s}(α_{e,·})` in `basis`, in scheme order.
    pub recombination: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HostSymbol {
    pub node: NodeId,
    pub symbol: FieldElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairTranscript {
    pub failed: NodeId,
    pub messages: Vec<RackMessage>,
    /// Survivors in the failed node's rack; intra-rack, never counted.
    pub host_symbols: Vec<HostSymbol>,
    pub recovered: FieldElement,
    /// The erased symbol, held back from the computation for auditing.
    pub erased: FieldElement,
}

impl RepairTranscript {
    pub fn payload_count(&self) -> usize {
        self.messages.iter().map(|m| m.payload.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandwidthReport {
    pub failed: NodeId,
    /// `(rack, b_e)` for every helper rack, in rack order.
    pub per_rack: Vec<(usize, usize)>,
    pub b: usize,
    pub bounds: BoundSet,
    pub ratio: Ratio<u64>,
    pub lower_ok: bool,
    pub upper_ok: Option<bool>,
}

impl BandwidthReport {
    pub fn rack_bandwidth(&self, rack: usize) -> Option<usize> {
        self.per_rack.iter().find(|(e, _)| *e == rack).map(|&(_, b)| b)
    }

    pub fn bounds_ok(&self) -> bool {
        self.lower_ok && self.upper_ok != Some(false)
    }
}

fn rack_values(instance: &Instance, scheme: &RepairScheme, rack: usize) -> Vec<Vec<FieldElement>> {
    (1..=instance.code.u())
        .map(|slot| instance.evaluate_family(scheme, instance.code.point(NodeId::new(rack, slot))))
        .collect()
}

/// `b_e`: rank over `B` of `{g(α_{e,m})}` across every slot of rack `e`.
pub fn per_rack_bandwidth(
    instance: &Instance,
    scheme: &RepairScheme,
    rack: usize,
) -> Result<usize, RepairError> {
    if rack == scheme.failed.rack {
        return Err(RepairError::HostRack(rack));
    }
    if rack == 0 || rack > instance.code.n_bar() {
        return Err(RepairError::UnknownRack(rack));
    }
    let all: Vec<FieldElement> = rack_values(instance, scheme, rack).concat();
    Ok(instance.field().rank_over_base(&all).rank)
}

#[derive(Debug, Clone)]
struct HelperPlan {
    rack: usize,
    basis: Vec<FieldElement>,
    recombination: Vec<Vec<u32>>,
}

/// Precomputed repair of one node. Construction refuses when the rank
/// condition fails.
#[derive(Debug, Clone)]
pub struct Repairer<'a> {
    instance: &'a Instance,
    scheme: RepairScheme,
    rank: RankCheck,
    lambdas: Vec<FieldElement>,
    helpers: Vec<HelperPlan>,
    // λ_{i,m}·g_j(α_{i,m}) for each host survivor
    host_weights: Vec<(NodeId, Vec<FieldElement>)>,
    dual: DualBasisPair,
    report: BandwidthReport,
}

impl<'a> Repairer<'a> {
    pub fn new(instance: &'a Instance, scheme: RepairScheme) -> Result<Self, RepairError> {
        let code = &instance.code;
        let field = instance.field();
        let failed = scheme.failed;
        let rank = verify_rank_condition(instance, &scheme);
        if !rank.ok {
            return Err(RepairError::RankDeficient { node: failed, rank: rank.rank, l: rank.l });
        }
        let lambdas = code.dual_weights().lambdas;

        let mut helpers = Vec::with_capacity(code.n_bar() - 1);
        let mut per_rack = Vec::with_capacity(code.n_bar() - 1);
        for rack in (1..=code.n_bar()).filter(|&e| e != failed.rack) {
            let values = rack_values(instance, &scheme, rack);
            if values.iter().any(|v| v != &values[0]) {
                return Err(RepairError::SlotDependence(rack));
            }
            let info = field.rank_over_base(&values[0]);
            let basis: Vec<FieldElement> =
                info.independent.iter().map(|&j| values[0][j].clone()).collect();
            let b_e = per_rack_bandwidth(instance, &scheme, rack)?;
            if b_e != basis.len() {
                return Err(RepairError::AccountingMismatch { payload: basis.len(), rank_sum: b_e });
            }
            per_rack.push((rack, b_e));
            helpers.push(HelperPlan { rack, basis, recombination: info.coords });
        }

        let host_weights = (1..=code.u())
            .filter(|&slot| slot != failed.slot)
            .map(|slot| {
                let node = NodeId::new(failed.rack, slot);
                let lambda = &lambdas[code.flat_index(node)];
                let weights = instance
                    .evaluate_family(&scheme, code.point(node))
                    .iter()
                    .map(|g| field.mul(lambda, g))
                    .collect();
                (node, weights)
            })
            .collect();

        let dual = field.dual_basis(&instance.evaluate_family(&scheme, code.point(failed)))?;

        let b: usize = per_rack.iter().map(|&(_, b_e)| b_e).sum();
        let bounds = bounds(&instance.layout, failed);
        let ratio = Ratio::from_integer(b as u64) / bounds.b_min;
        let report = BandwidthReport {
            failed,
            per_rack,
            b,
            lower_ok: bounds.lower_ok(b as u64),
            upper_ok: bounds.upper_ok(b as u64),
            bounds,
            ratio,
        };
        Ok(Self { instance, scheme, rank, lambdas, helpers, host_weights, dual, report })
    }

    pub fn scheme(&self) -> &RepairScheme {
        &self.scheme
    }

    pub fn rank_check(&self) -> &RankCheck {
        &self.rank
    }

    pub fn report(&self) -> &BandwidthReport {
        &self.report
    }

    fn rack_message(&self, plan: &HelperPlan, codeword: &[FieldElement]) -> RackMessage {
        let code = &self.instance.code;
        let field = self.instance.field();
        let mu = (1..=code.u()).fold(field.zero(), |acc, slot| {
            let idx = code.flat_index(NodeId::new(plan.rack, slot));
            field.add(&acc, &field.mul(&self.lambdas[idx], &codeword[idx]))
        });
        RackMessage {
            rack: plan.rack,
            basis: plan.basis.clone(),
            payload: plan.basis.iter().map(|beta| field.trace(&field.mul(beta, &mu))).collect(),
            recombination: plan.recombination.clone(),
        }
    }

    /// Rebuilds the failed symbol from helper messages and host survivors.
    pub fn reconstruct(
        &self,
        messages: &[RackMessage],
        host_symbols: &[HostSymbol],
    ) -> Result<FieldElement, RepairError> {
        let field = self.instance.field();
        let base = field.base();
        let l = self.scheme.polys.len();
        let mut totals = vec![0u32; l];
        for msg in messages {
            for (total, coords) in totals.iter_mut().zip(&msg.recombination) {
                for (&c, &p) in coords.iter().zip(&msg.payload) {
                    *total = base.add(*total, base.mul(c, p));
                }
            }
        }
        for (host, (node, weights)) in host_symbols.iter().zip(&self.host_weights) {
            debug_assert_eq!(host.node, *node);
            for (total, w) in totals.iter_mut().zip(weights) {
                *total = base.add(*total, field.trace(&field.mul(w, &host.symbol)));
            }
        }
        let traces: Vec<u32> = totals.into_iter().map(|t| base.neg(t)).collect();
        let scaled = field.expand_in_dual_basis(&traces, &self.dual)?;
        let lambda = &self.lambdas[self.instance.code.flat_index(self.scheme.failed)];
        Ok(field.div(&scaled, lambda)?)
    }

    /// Repairs the failed position of `codeword`, which is withheld from
    /// every computation and only compared against at the end.
    pub fn repair(&self, codeword: &[FieldElement]) -> Result<RepairTranscript, RepairError> {
        let code = &self.instance.code;
        if codeword.len() != code.n() {
            return Err(RepairError::CodewordLength { expected: code.n(), got: codeword.len() });
        }
        let failed = self.scheme.failed;
        let messages: Vec<RackMessage> =
            self.helpers.par_iter().map(|plan| self.rack_message(plan, codeword)).collect();
        let host_symbols: Vec<HostSymbol> = self
            .host_weights
            .iter()
            .map(|(node, _)| HostSymbol {
                node: *node,
                symbol: codeword[code.flat_index(*node)].clone(),
            })
            .collect();
        let recovered = self.reconstruct(&messages, &host_symbols)?;
        let transcript = RepairTranscript {
            failed,
            messages,
            host_symbols,
            recovered,
            erased: codeword[code.flat_index(failed)].clone(),
        };
        let payload = transcript.payload_count();
        if payload != self.report.b {
            return Err(RepairError::AccountingMismatch { payload, rank_sum: self.report.b });
        }
        if transcript.recovered != transcript.erased {
            return Err(RepairError::Mismatch(Box::new(transcript)));
        }
        Ok(transcript)
    }
}

/// One-shot repair: builds the [`Repairer`] and runs it once.
pub fn execute_repair(
    instance: &Instance,
    scheme: RepairScheme,
    codeword: &[FieldElement],
) -> Result<(RepairTranscript, BandwidthReport), RepairError> {
    let repairer = Repairer::new(instance, scheme)?;
    let transcript = repairer.repair(codeword)?;
    Ok((transcript, repairer.report.clone()))
}
