//! Sweeps over every node of an instance and bandwidth-versus-bound reports.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::constructions::{build, repair_family, ConstructionError, Instance, Layout, SchemeParams};
use crate::repair::{audit, RepairError, Repairer};
use crate::rs_code::NodeId;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("report has no rows")]
    EmptyReport,
    #[error("unknown format {0:?}; expected csv or json")]
    UnknownFormat(String),
    #[error("n̄ range {from}..={to} is empty")]
    EmptyRange { from: usize, to: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(HarnessError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub params: SchemeParams,
    pub trials: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(params: SchemeParams) -> Self {
        Self { params, trials: 10, seed: 0, format: OutputFormat::Csv }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<Layout, HarnessError> {
        Ok(self.params.validate()?)
    }
}

/// Exact rational rendered with six decimals, rounding half up.
pub fn render_ratio(r: Ratio<u64>) -> String {
    let (num, den) = (*r.numer() as u128, *r.denom() as u128);
    let scaled = (num * 1_000_000 * 2 + den) / (den * 2);
    format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RepairStatus {
    Ok,
    Failed,
    Skipped,
}

impl fmt::Display for RepairStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepairStatus::Ok => "true",
            RepairStatus::Failed => "false",
            RepairStatus::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub mode: String,
    pub q: u32,
    pub u: usize,
    pub nbar: usize,
    pub rbar: u64,
    pub rbar_eff: u64,
    pub l: usize,
    pub rack: usize,
    /// Global 1-based position, rack-major.
    pub node: usize,
    pub b: Option<usize>,
    #[serde(skip)]
    pub b_min_exact: Ratio<u64>,
    pub b_min: String,
    pub upper: Option<String>,
    pub case: String,
    #[serde(skip)]
    pub ratio_exact: Option<Ratio<u64>>,
    pub ratio: Option<String>,
    pub repair_ok: RepairStatus,
    pub rank_ok: bool,
    /// Enforced bound broken; informational values never count.
    pub bound_violation: bool,
}

/// A node whose repair failed, with whatever transcript was produced.
#[derive(Debug, Clone, Serialize)]
pub struct SweepFailure {
    pub node: NodeId,
    pub reason: String,
    pub transcript: Option<String>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<ReportRow>,
    pub failures: Vec<SweepFailure>,
}

impl SweepOutcome {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.bound_violation).count()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.violations() == 0
    }
}

struct NodeResult {
    row: ReportRow,
    failure: Option<SweepFailure>,
}

fn node_rng(seed: u64, flat: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(flat as u64);
    rng
}

fn sweep_node(instance: &Instance, node: NodeId, config: &ExperimentConfig) -> NodeResult {
    let layout = &instance.layout;
    let flat = instance.code.flat_index(node);
    let bounds = crate::repair::bounds(layout, node);
    let mut row = ReportRow {
        mode: layout.mode.to_string(),
        q: layout.q,
        u: layout.u,
        nbar: layout.n_bar,
        rbar: layout.r_bar,
        rbar_eff: layout.r_bar_eff,
        l: layout.l,
        rack: node.rack,
        node: flat + 1,
        b: None,
        b_min_exact: bounds.b_min,
        b_min: render_ratio(bounds.b_min),
        upper: bounds.shown_upper().map(render_ratio),
        case: bounds.case.to_string(),
        ratio_exact: None,
        ratio: None,
        repair_ok: RepairStatus::Failed,
        rank_ok: false,
        bound_violation: false,
    };
    let fail = |reason: String, transcript: Option<String>| {
        Some(SweepFailure { node, reason, transcript })
    };
    let scheme = match repair_family(instance, node) {
        Ok(s) => s,
        Err(e) => return NodeResult { row, failure: fail(e.to_string(), None) },
    };
    let repairer = match Repairer::new(instance, scheme) {
        Ok(r) => r,
        Err(e) => return NodeResult { row, failure: fail(e.to_string(), None) },
    };
    let report = repairer.report();
    row.rank_ok = repairer.rank_check().ok;
    row.b = Some(report.b);
    row.ratio_exact = Some(report.ratio);
    row.ratio = Some(render_ratio(report.ratio));
    row.bound_violation = !report.bounds_ok();
    if config.trials == 0 {
        row.repair_ok = RepairStatus::Skipped;
        return NodeResult { row, failure: None };
    }
    let mut rng = node_rng(config.seed, flat);
    for trial in 0..config.trials {
        let message = instance.code.random_message(&mut rng);
        let codeword = match instance.code.encode(&message) {
            Ok(c) => c,
            Err(e) => return NodeResult { row, failure: fail(e.to_string(), None) },
        };
        match repairer.repair(&codeword) {
            Ok(transcript) => {
                let findings = audit(&transcript, report);
                if !findings.passed() {
                    let reason = format!(
                        "trial {trial}: audit failed: {}",
                        serde_json::to_string(&findings).expect("findings serialize")
                    );
                    return NodeResult { row, failure: fail(reason, Some(transcript.to_json())) };
                }
            }
            Err(RepairError::Mismatch(t)) => {
                let reason = format!("trial {trial}: recovered symbol differs from erased symbol");
                return NodeResult { row, failure: fail(reason, Some(t.to_json())) };
            }
            Err(e) => {
                return NodeResult { row, failure: fail(format!("trial {trial}: {e}"), None) };
            }
        }
    }
    row.repair_ok = RepairStatus::Ok;
    NodeResult { row, failure: None }
}

/// Builds the instance once, then checks and repairs every node.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutcome, HarnessError> {
    config.validate()?;
    let instance = build(&config.params)?;
    Ok(sweep_instance(&instance, config))
}

/// [`run_sweep`] on an already built instance.
pub fn sweep_instance(instance: &Instance, config: &ExperimentConfig) -> SweepOutcome {
    let nodes: Vec<NodeId> = instance.code.nodes().collect();
    let results: Vec<NodeResult> =
        nodes.par_iter().map(|&node| sweep_node(instance, node, config)).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        rows.push(r.row);
        failures.extend(r.failure);
    }
    SweepOutcome { rows, failures }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub max_ratio: Option<String>,
    pub min_ratio: Option<String>,
    pub bound_violations: usize,
    pub repair_failures: usize,
}

pub fn summarize(rows: &[ReportRow]) -> Summary {
    let ratios = rows.iter().filter_map(|r| r.ratio_exact);
    Summary {
        rows: rows.len(),
        max_ratio: ratios.clone().max().map(render_ratio),
        min_ratio: ratios.min().map(render_ratio),
        bound_violations: rows.iter().filter(|r| r.bound_violation).count(),
        repair_failures: rows.iter().filter(|r| r.repair_ok == RepairStatus::Failed).count(),
    }
}

pub const CSV_HEADER: &str =
    "mode,q,u,nbar,rbar,rbar_eff,l,rack,node,b,b_min,upper,case,ratio,repair_ok,rank_ok";

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

/// CSV or JSON rows followed by the summary block.
pub fn emit_report(rows: &[ReportRow], format: OutputFormat) -> Result<String, HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    let summary = summarize(rows);
    Ok(match format {
        OutputFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let fields = [
                    r.mode.clone(),
                    r.q.to_string(),
                    r.u.to_string(),
                    r.nbar.to_string(),
                    r.rbar.to_string(),
                    r.rbar_eff.to_string(),
                    r.l.to_string(),
                    r.rack.to_string(),
                    r.node.to_string(),
                    opt(&r.b),
                    r.b_min.clone(),
                    opt(&r.upper),
                    r.case.clone(),
                    opt(&r.ratio),
                    r.repair_ok.to_string(),
                    r.rank_ok.to_string(),
                ];
                out.push_str(&fields.join(","));
                out.push('\n');
            }
            out.push_str(&format!(
                "\n# summary\n# rows={}\n# max_ratio={}\n# min_ratio={}\n# bound_violations={}\n# repair_failures={}\n",
                summary.rows,
                opt(&summary.max_ratio),
                opt(&summary.min_ratio),
                summary.bound_violations,
                summary.repair_failures
            ));
            out
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                rows: &'a [ReportRow],
                summary: Summary,
            }
            let mut s = serde_json::to_string_pretty(&Doc { rows, summary })
                .expect("report serializes");
            s.push('\n');
            s
        }
    })
}

/// One C1 instance of an n̄-sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrendRow {
    pub nbar: usize,
    pub l: usize,
    pub b_min: String,
    pub max_b: usize,
    pub max_ratio: String,
    pub min_ratio: String,
    #[serde(skip)]
    pub max_ratio_exact: Ratio<u64>,
    pub all_ok: bool,
}

#[derive(Debug, Clone)]
pub struct Trend {
    pub rows: Vec<TrendRow>,
    pub failures: Vec<SweepFailure>,
}

impl Trend {
    /// Whether the max-ratio column never increases.
    pub fn non_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_ratio_exact <= w[0].max_ratio_exact)
    }
}

/// Repeats the C1 sweep for `n̄ ∈ [from, to]` at fixed `r̄`.
pub fn nbar_sweep(
    q: u32,
    u: usize,
    r_bar: u64,
    from: usize,
    to: usize,
    trials: usize,
    seed: u64,
) -> Result<Trend, HarnessError> {
    if from > to {
        return Err(HarnessError::EmptyRange { from, to });
    }
    let configs: Vec<ExperimentConfig> = (from..=to)
        .map(|n_bar| {
            ExperimentConfig::new(SchemeParams::c1(q, u, n_bar, r_bar))
                .with_trials(trials)
                .with_seed(seed)
        })
        .collect();
    for c in &configs {
        c.validate()?;
    }
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for config in &configs {
        let outcome = run_sweep(config)?;
        let row0 = &outcome.rows[0];
        let ratios: Vec<Ratio<u64>> = outcome.rows.iter().filter_map(|r| r.ratio_exact).collect();
        let max_ratio = ratios.iter().copied().max().unwrap_or_default();
        rows.push(TrendRow {
            nbar: row0.nbar,
            l: row0.l,
            b_min: row0.b_min.clone(),
            max_b: outcome.rows.iter().filter_map(|r| r.b).max().unwrap_or(0),
            max_ratio: render_ratio(max_ratio),
            min_ratio: render_ratio(ratios.iter().copied().min().unwrap_or_default()),
            max_ratio_exact: max_ratio,
            all_ok: outcome.passed(),
        });
        failures.extend(outcome.failures);
    }
    Ok(Trend { rows, failures })
}

pub const TREND_HEADER: &str = "nbar,l,b_min,max_b,max_ratio,min_ratio,all_ok";

pub fn emit_trend(trend: &Trend, format: OutputFormat) -> Result<String, HarnessError> {
    if trend.rows.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    Ok(match format {
        OutputFormat::Csv => {
            let mut out = String::from(TREND_HEADER);
            out.push('\n');
            for r in &trend.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.nbar, r.l, r.b_min, r.max_b, r.max_ratio, r.min_ratio, r.all_ok
                ));
            }
            out.push_str(&format!(
                "\n# summary\n# max_ratio_non_increasing={}\n",
                trend.non_increasing()
            ));
            out
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                rows: &'a [TrendRow],
                max_ratio_non_increasing: bool,
            }
            let mut s = serde_json::to_string_pretty(&Doc {
                rows: &trend.rows,
                max_ratio_non_increasing: trend.non_increasing(),
            })
            .expect("trend serializes");
            s.push('\n');
            s
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig::new(SchemeParams::c1(3, 2, 3, 2)).with_trials(3).with_seed(9)
    }

    #[test]
    fn ratio_rendering() {
        assert_eq!(render_ratio(Ratio::new(5, 4)), "1.250000");
        assert_eq!(render_ratio(Ratio::new(2, 3)), "0.666667");
        assert_eq!(render_ratio(Ratio::new(1, 3)), "0.333333");
        assert_eq!(render_ratio(Ratio::from_integer(16)), "16.000000");
    }

    #[test]
    fn small_sweep_all_ok() {
        let out = run_sweep(&small()).unwrap();
        assert_eq!(out.rows.len(), 6);
        assert!(out.passed());
        assert!(out.rows.iter().all(|r| r.rank_ok && r.repair_ok == RepairStatus::Ok));
        let nodes: Vec<usize> = out.rows.iter().map(|r| r.node).collect();
        assert_eq!(nodes, (1..=6).collect::<Vec<_>>());
    }

    #[test]
    fn zero_trials_skip_repair() {
        let out = run_sweep(&small().with_trials(0)).unwrap();
        assert!(out.rows.iter().all(|r| r.repair_ok == RepairStatus::Skipped && r.b.is_some()));
    }

    #[test]
    fn deterministic_output() {
        let a = emit_report(&run_sweep(&small()).unwrap().rows, OutputFormat::Csv).unwrap();
        let b = emit_report(&run_sweep(&small()).unwrap().rows, OutputFormat::Csv).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn report_shapes() {
        assert!(matches!(emit_report(&[], OutputFormat::Csv), Err(HarnessError::EmptyReport)));
        let rows = run_sweep(&small()).unwrap().rows;
        let csv = emit_report(&rows[..1], OutputFormat::Csv).unwrap();
        let data: Vec<&str> =
            csv.lines().filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
        assert_eq!(data.len(), 2);
        assert_eq!(data[0], CSV_HEADER);
        assert!(csv.contains("# bound_violations=0"));
        let json: serde_json::Value =
            serde_json::from_str(&emit_report(&rows, OutputFormat::Json).unwrap()).unwrap();
        assert_eq!(json["rows"].as_array().unwrap().len(), 6);
        assert_eq!(json["summary"]["bound_violations"], 0);
    }

    #[test]
    fn invalid_config_rejected_early() {
        let bad = ExperimentConfig::new(SchemeParams::c1(3, 4, 3, 2));
        assert!(matches!(run_sweep(&bad), Err(HarnessError::Construction(_))));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
