use serde::Serialize;

use super::{BandwidthReport, RepairTranscript};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RackMismatch {
    pub rack: usize,
    pub payload: usize,
    pub basis: usize,
    pub rank: Option<usize>,
}

/// Structured result of checking a transcript against its report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditFindings {
    pub rack_mismatches: Vec<RackMismatch>,
    /// Helper racks in the report with no message in the transcript.
    pub missing_racks: Vec<usize>,
    pub host_rack_sent: bool,
    pub payload_total: usize,
    pub total_matches: bool,
    pub lower_ok: bool,
    pub upper_ok: Option<bool>,
    pub recovery_ok: bool,
}

impl AuditFindings {
    pub fn passed(&self) -> bool {
        self.rack_mismatches.is_empty()
            && self.missing_racks.is_empty()
            && !self.host_rack_sent
            && self.total_matches
            && self.lower_ok
            && self.upper_ok != Some(false)
            && self.recovery_ok
    }
}

pub fn audit(transcript: &RepairTranscript, report: &BandwidthReport) -> AuditFindings {
    let rack_mismatches = transcript
        .messages
        .iter()
        .filter_map(|msg| {
            let rank = report.rack_bandwidth(msg.rack);
            let ok = rank == Some(msg.payload.len()) && msg.basis.len() == msg.payload.len();
            (!ok).then_some(RackMismatch {
                rack: msg.rack,
                payload: msg.payload.len(),
                basis: msg.basis.len(),
                rank,
            })
        })
        .collect();
    let missing_racks = report
        .per_rack
        .iter()
        .map(|&(rack, _)| rack)
        .filter(|rack| transcript.messages.iter().all(|m| m.rack != *rack))
        .collect();
    let payload_total = transcript.payload_count();
    AuditFindings {
        rack_mismatches,
        missing_racks,
        host_rack_sent: transcript.messages.iter().any(|m| m.rack == transcript.failed.rack),
        payload_total,
        total_matches: payload_total == report.b,
        lower_ok: report.bounds.lower_ok(payload_total as u64),
        upper_ok: report.bounds.upper_ok(payload_total as u64),
        recovery_ok: transcript.recovered == transcript.erased,
    }
}
