//! Machine-readable run reports and the orchestration entry points behind
//! the command-line interface.
//!
//! Every run emits one [`RunReport`]: a JSON document with the tool version,
//! the command, a full echo of the effective configuration (enough to
//! reproduce the run bit-identically), typed result records, a summary, and
//! per-phase timings. Timings are informational; everything else is
//! deterministic for a fixed seed. Complex numbers serialize as [re, im]
//! pairs.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::Statistics;
use crate::nogo;
use crate::orbits::{classify_tictactoe, enumerate_sets, BellSet, TicTacToeClass};
use crate::povm;
use crate::search::{batch_classify, FeasibilityReport, SearchConfig, SearchStatus};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A Bell set as plain data: dimension plus (c, p) pairs in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetRecord {
    pub d: usize,
    pub labels: Vec<[usize; 2]>,
}

impl From<&BellSet> for SetRecord {
    fn from(set: &BellSet) -> Self {
        Self {
            d: set.d(),
            labels: set.pairs().into_iter().map(|(c, p)| [c, p]).collect(),
        }
    }
}

fn complex_pairs(v: &nalgebra::DVector<num_complex::Complex64>) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// One typed result row of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ResultRecord {
    Classification {
        set: SetRecord,
        class: TicTacToeClass,
    },
    Feasibility {
        set: SetRecord,
        status: SearchStatus,
        best_residual: f64,
        witness_mode: Option<Vec<[f64; 2]>>,
        restarts_used: usize,
    },
    Elimination {
        name: String,
        target_set: SetRecord,
        verdict: nogo::Verdict,
        evidence: Vec<String>,
        samples_checked: usize,
    },
    Certificate {
        certificate: povm::Certificate,
    },
    Coverage {
        set: SetRecord,
        witness: Option<String>,
    },
    IdentityDemo {
        d: usize,
        chosen: Vec<[usize; 2]>,
        signature_sets: Vec<Vec<[usize; 2]>>,
        disjoint: bool,
    },
    Bound {
        distinguishable: usize,
        total: usize,
        statement: String,
    },
}

impl From<&FeasibilityReport> for ResultRecord {
    fn from(r: &FeasibilityReport) -> Self {
        ResultRecord::Feasibility {
            set: SetRecord::from(&r.set),
            status: r.status,
            best_residual: r.best_residual,
            witness_mode: r.witness_mode.as_ref().map(|m| complex_pairs(m.nu())),
            restarts_used: r.restarts_used,
        }
    }
}

impl From<&nogo::EliminationStep> for ResultRecord {
    fn from(s: &nogo::EliminationStep) -> Self {
        ResultRecord::Elimination {
            name: s.name.clone(),
            target_set: SetRecord::from(&s.target_set),
            verdict: s.verdict,
            evidence: s.evidence.clone(),
            samples_checked: s.samples_checked,
        }
    }
}

/// A complete run: configuration echo, typed results, summary, timings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub command: String,
    pub config: Value,
    pub results: Vec<ResultRecord>,
    pub summary: BTreeMap<String, Value>,
    /// Wall-clock milliseconds per phase; excluded from reproducibility
    /// comparisons.
    pub timings: BTreeMap<String, u64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The deterministic portion of the report (everything but timings).
    pub fn reproducible_json(&self) -> String {
        serde_json::to_string(&json!({
            "version": self.version,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "summary": self.summary,
        }))
        .expect("report serializes")
    }

    /// Flat CSV table with one row per result record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("type,subject,outcome,value,detail\n");
        let fmt_set = |s: &SetRecord| {
            s.labels
                .iter()
                .map(|[c, p]| format!("({c} {p})"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        for r in &self.results {
            let row = match r {
                ResultRecord::Classification { set, class } => {
                    format!("classification,\"{}\",{class},,", fmt_set(set))
                }
                ResultRecord::Feasibility {
                    set,
                    status,
                    best_residual,
                    restarts_used,
                    ..
                } => format!(
                    "feasibility,\"{}\",{status},{best_residual:e},restarts={restarts_used}",
                    fmt_set(set)
                ),
                ResultRecord::Elimination {
                    name,
                    verdict,
                    samples_checked,
                    ..
                } => {
                    let v = match verdict {
                        nogo::Verdict::Eliminated => "eliminated",
                        nogo::Verdict::Survived => "survived",
                    };
                    format!("elimination,{name},{v},,samples={samples_checked}")
                }
                ResultRecord::Certificate { certificate } => format!(
                    "certificate,{} ({}),{},{:e},restarts={}",
                    certificate.name,
                    certificate.statistics,
                    if certificate.exact_infeasible {
                        "exact-infeasible"
                    } else {
                        "unverified"
                    },
                    certificate.numeric_floor,
                    certificate.restarts,
                ),
                ResultRecord::Coverage { set, witness } => format!(
                    "coverage,\"{}\",{},,",
                    fmt_set(set),
                    witness.as_deref().unwrap_or("uncovered")
                ),
                ResultRecord::IdentityDemo { d, disjoint, .. } => format!(
                    "identity-demo,d={d},{},,",
                    if *disjoint { "disjoint" } else { "overlapping" }
                ),
                ResultRecord::Bound {
                    distinguishable,
                    total,
                    statement,
                } => format!("bound,,{distinguishable} of {total},,\"{statement}\""),
            };
            out.push_str(&row);
            out.push('\n');
        }
        out
    }

    /// One-paragraph human summary for standard error.
    pub fn human_summary(&self) -> String {
        let mut parts = vec![format!("{} v{}:", self.command, self.version)];
        for (k, v) in &self.summary {
            parts.push(format!("{k}={v}"));
        }
        parts.join(" ")
    }
}

/// Classifies all size-k qutrit Bell sets by tic-tac-toe class.
pub fn run_classify(k: usize, d: usize) -> Result<RunReport> {
    if d != 3 {
        return Err(Error::RequiresQutrit(d));
    }
    if k != 4 && k != 6 {
        return Err(Error::UnsupportedSetSize(k));
    }
    let start = Instant::now();
    let mut results = Vec::new();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for set in enumerate_sets(k, d)? {
        let class = classify_tictactoe(&set)?;
        *counts.entry(class.to_string()).or_insert(0) += 1;
        results.push(ResultRecord::Classification {
            set: SetRecord::from(&set),
            class,
        });
    }
    let mut summary = BTreeMap::new();
    for (k, v) in counts {
        summary.insert(k, json!(v));
    }
    summary.insert("sets".into(), json!(results.len()));
    let mut timings = BTreeMap::new();
    timings.insert("classify_ms".into(), start.elapsed().as_millis() as u64);
    Ok(RunReport {
        version: TOOL_VERSION.into(),
        command: "classify".into(),
        config: json!({ "k": k, "d": d }),
        results,
        summary,
        timings,
    })
}

/// Runs the feasibility-search campaign over all size-k sets.
pub fn run_search(k: usize, d: usize, cfg: &SearchConfig) -> Result<RunReport> {
    cfg.validate()?;
    let start = Instant::now();
    let reports = batch_classify(k, d, cfg)?;
    let mut summary_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut results = Vec::new();
    let mut worst_no_instance: f64 = 0.0;
    for r in &reports {
        *summary_counts.entry(r.status.to_string()).or_insert(0) += 1;
        if r.status == SearchStatus::NoInstanceFound {
            worst_no_instance = worst_no_instance.max(r.best_residual);
        }
        results.push(ResultRecord::from(r));
    }
    let mut summary = BTreeMap::new();
    for (key, v) in summary_counts {
        summary.insert(key, json!(v));
    }
    summary.insert("sets".into(), json!(reports.len()));
    let min_no_instance = reports
        .iter()
        .filter(|r| r.status == SearchStatus::NoInstanceFound)
        .map(|r| r.best_residual)
        .fold(f64::INFINITY, f64::min);
    if min_no_instance.is_finite() {
        summary.insert("min_residual_no_instance".into(), json!(min_no_instance));
    }
    let mut timings = BTreeMap::new();
    timings.insert("search_ms".into(), start.elapsed().as_millis() as u64);
    Ok(RunReport {
        version: TOOL_VERSION.into(),
        command: "search".into(),
        config: json!({
            "k": k,
            "d": d,
            "statistics": cfg.statistics,
            "restarts": cfg.restarts,
            "max_iterations": cfg.max_iterations,
            "accept_tolerance": cfg.accept_tolerance,
            "no_instance_threshold": cfg.no_instance_threshold,
            "seed": cfg.seed,
        }),
        results,
        summary,
        timings,
    })
}

/// The verification chains exposed by the CLI.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum NogoChain {
    ProjectiveQutrit,
    PovmQubit,
    PovmQutrit,
    SixSetCoverage,
}

impl NogoChain {
    pub fn name(&self) -> &'static str {
        match self {
            NogoChain::ProjectiveQutrit => "projective-qutrit",
            NogoChain::PovmQubit => "povm-qubit",
            NogoChain::PovmQutrit => "povm-qutrit",
            NogoChain::SixSetCoverage => "six-set-coverage",
        }
    }
}

/// Report plus the overall verification verdict (drives the exit status).
pub struct NogoOutcome {
    pub report: RunReport,
    pub all_verified: bool,
}

/// Runs one verification chain.
pub fn run_nogo(
    chain: NogoChain,
    samples: usize,
    seed: u64,
    restarts: usize,
) -> Result<NogoOutcome> {
    let start = Instant::now();
    let mut results = Vec::new();
    let mut summary = BTreeMap::new();
    let all_verified;
    match chain {
        NogoChain::ProjectiveQutrit => {
            let chain_report = nogo::projective_qutrit_chain(samples, seed)?;
            let demo = nogo::identity_apparatus_demo(3)?;
            all_verified = chain_report.all_eliminated() && demo.disjoint;
            for s in &chain_report.steps {
                results.push(ResultRecord::from(s));
            }
            results.push(ResultRecord::IdentityDemo {
                d: demo.d,
                chosen: demo.chosen.iter().map(|l| [l.c(), l.p()]).collect(),
                signature_sets: demo
                    .signature_sets
                    .iter()
                    .map(|s| s.iter().map(|&(i, j)| [i, j]).collect())
                    .collect(),
                disjoint: demo.disjoint,
            });
            results.push(ResultRecord::Bound {
                distinguishable: chain_report.distinguishable_bound,
                total: chain_report.total_states,
                statement: "projective apparatuses distinguish at most 3 of the 9 bosonic \
                            qutrit Bell states; the standard-basis apparatus achieves 3"
                    .into(),
            });
            summary.insert(
                "steps_eliminated".into(),
                json!(chain_report.steps.iter().filter(|s| s.eliminated()).count()),
            );
            summary.insert("steps_total".into(), json!(chain_report.steps.len()));
            summary.insert("bound".into(), json!("3 of 9"));
        }
        NogoChain::PovmQubit => {
            let mut verified = true;
            for statistics in [Statistics::Boson, Statistics::Fermion] {
                let cert = povm::qubit_povm_nogo_with(statistics, restarts, seed)?;
                verified &= cert.verified();
                results.push(ResultRecord::Certificate { certificate: cert });
            }
            results.push(ResultRecord::Bound {
                distinguishable: 3,
                total: 4,
                statement: "no LELM apparatus, projective or not, distinguishes all four qubit \
                            Bell states; three are achievable"
                    .into(),
            });
            summary.insert("bound".into(), json!("3 of 4"));
            all_verified = verified;
        }
        NogoChain::PovmQutrit => {
            let mut verified = true;
            for statistics in [Statistics::Boson, Statistics::Fermion] {
                let cert = povm::qutrit_subset_nogo_with(statistics, restarts, seed)?;
                verified &= cert.verified();
                results.push(ResultRecord::Certificate { certificate: cert });
            }
            let coverage = povm::six_set_coverage()?;
            verified &= coverage.all_covered();
            summary.insert("six_sets_covered".into(), json!(coverage.entries.len()));
            for e in &coverage.entries {
                results.push(ResultRecord::Coverage {
                    set: SetRecord::from(&e.set),
                    witness: e.witness.as_ref().map(|t| t.name()),
                });
            }
            results.push(ResultRecord::Bound {
                distinguishable: 5,
                total: 9,
                statement: "every set of six qutrit Bell states maps onto a superset of the \
                            infeasible five-state subset, so a general LELM POVM distinguishes \
                            at most 5 of 9"
                    .into(),
            });
            summary.insert("bound".into(), json!("at most 5 of 9"));
            all_verified = verified;
        }
        NogoChain::SixSetCoverage => {
            let coverage = povm::six_set_coverage()?;
            all_verified = coverage.all_covered();
            for e in &coverage.entries {
                results.push(ResultRecord::Coverage {
                    set: SetRecord::from(&e.set),
                    witness: e.witness.as_ref().map(|t| t.name()),
                });
            }
            summary.insert("six_sets_covered".into(), json!(coverage.entries.len()));
        }
    }
    summary.insert("all_verified".into(), json!(all_verified));
    let mut timings = BTreeMap::new();
    timings.insert("nogo_ms".into(), start.elapsed().as_millis() as u64);
    let report = RunReport {
        version: TOOL_VERSION.into(),
        command: format!("nogo {}", chain.name()),
        config: json!({
            "chain": chain.name(),
            "samples": samples,
            "seed": seed,
            "restarts": restarts,
        }),
        results,
        summary,
        timings,
    };
    Ok(NogoOutcome {
        report,
        all_verified,
    })
}
