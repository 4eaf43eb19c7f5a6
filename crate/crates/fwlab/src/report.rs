use std::fmt::Write;
use std::str::FromStr;

use fwlab_core::histories::{ConsistencyCondition, ConsistencyConfig, ConsistencyReport};
use fwlab_core::scenarios::{Certification, FlipReport, TeleportReport, Verdict};
use fwlab_core::{ComplexMatrix, Tolerances, C64};
use serde_json::{json, Map, Number, Value};

pub const REPORT_VERSION: &str = "1";

/// Settings for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub consistency: ConsistencyConfig,
    /// Threshold for `channelcheck`.
    pub tol_cert: f64,
    pub seed: u64,
    /// Shots per input state for the sampled flip estimate in `channelcheck`.
    pub shots: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            consistency: ConsistencyConfig::default(),
            tol_cert: 1e-9,
            seed: 0,
            shots: 4096,
        }
    }
}

/// A physics error reported as a query result.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicsError {
    /// Error variant, e.g. `MeaninglessCombination`.
    pub kind: String,
    pub message: String,
}

impl PhysicsError {
    /// Short verdict for the text report.
    pub fn verdict(&self) -> &'static str {
        match self.kind.as_str() {
            "IncompatibleProjectors" | "MeaninglessCombination" => {
                "meaningless (single framework rule)"
            }
            "IncompatibleFrameworks" => "incompatible frameworks",
            "InconsistentFamily" => "inconsistent family",
            _ => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSummary {
    pub label: Option<String>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryResult {
    Distribution {
        framework: String,
        blocks: Vec<BlockSummary>,
        probs: Vec<f64>,
    },
    EventProbability {
        indices: Vec<usize>,
        probability: f64,
    },
    Compatibility {
        compatible: bool,
        max_commutator_norm: f64,
    },
    Refinement {
        framework: String,
        blocks: Vec<BlockSummary>,
    },
    /// A rank-zero conjunction is the always-false property.
    Conjunction {
        rank: usize,
        matrix: ComplexMatrix,
    },
    Consistency(ConsistencyReport),
    Histories {
        probabilities: Vec<(Vec<usize>, f64)>,
        total: f64,
    },
    ChannelCheck {
        certification: Certification,
        choi_distance: f64,
        sampled: Vec<FlipReport>,
        shots: usize,
    },
    Teleport(TeleportReport),
    /// A combined description that turned out to be a valid family.
    CombinedFamily {
        history_count: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryReport {
    pub kind: &'static str,
    pub line: usize,
    pub inputs: Vec<String>,
    pub outcome: Result<QueryResult, PhysicsError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: RunConfig,
    pub queries: Vec<QueryReport>,
}

/// JSON number with 17 significant digits; non-finite values become null.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(
            Number::from_str(&format!("{x:.16e}")).expect("formatted float is valid JSON"),
        )
    } else {
        Value::Null
    }
}

fn complex(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| complex(m[(r, c)])).collect()))
            .collect(),
    )
}

fn condition_name(c: ConsistencyCondition) -> &'static str {
    match c {
        ConsistencyCondition::Strong => "strong",
        ConsistencyCondition::Weak => "weak",
    }
}

fn blocks_json(blocks: &[BlockSummary]) -> Value {
    Value::Array(
        blocks
            .iter()
            .map(|b| json!({"label": b.label, "rank": b.rank}))
            .collect(),
    )
}

fn flips_json(f: &FlipReport) -> Value {
    json!({
        "basis": f.basis.name(),
        "p_plus_to_minus": num(f.p_plus_to_minus),
        "p_minus_to_plus": num(f.p_minus_to_plus),
    })
}

fn consistency_json(r: &ConsistencyReport) -> Value {
    let pairs: Vec<Value> = r
        .offending_pairs
        .iter()
        .map(|p| json!({"alpha": p.alpha, "beta": p.beta, "value": complex(p.value)}))
        .collect();
    json!({
        "condition": condition_name(r.condition),
        "tolerance": num(r.tolerance),
        "history_count": r.history_count,
        "max_offdiag": num(r.max_offdiag),
        "diagonal_sum": num(r.diagonal_sum),
        "consistent": r.consistent,
        "offending_total": r.offending_total,
        "offending_pairs": pairs,
    })
}

impl QueryResult {
    pub fn to_json(&self) -> Value {
        match self {
            QueryResult::Distribution {
                framework,
                blocks,
                probs,
            } => json!({
                "framework": framework,
                "blocks": blocks_json(blocks),
                "probabilities": probs.iter().map(|p| num(*p)).collect::<Vec<_>>(),
            }),
            QueryResult::EventProbability {
                indices,
                probability,
            } => json!({"indices": indices, "probability": num(*probability)}),
            QueryResult::Compatibility {
                compatible,
                max_commutator_norm,
            } => json!({
                "compatible": compatible,
                "max_commutator_norm": num(*max_commutator_norm),
            }),
            QueryResult::Refinement { framework, blocks } => json!({
                "framework": framework,
                "blocks": blocks_json(blocks),
            }),
            QueryResult::Conjunction { rank, matrix: m } => json!({
                "rank": rank,
                "zero": *rank == 0,
                "matrix": matrix(m),
            }),
            QueryResult::Consistency(r) => consistency_json(r),
            QueryResult::Histories {
                probabilities,
                total,
            } => json!({
                "histories": probabilities
                    .iter()
                    .map(|(h, p)| json!({"history": h, "probability": num(*p)}))
                    .collect::<Vec<_>>(),
                "total": num(*total),
            }),
            QueryResult::ChannelCheck {
                certification,
                choi_distance,
                sampled,
                shots,
            } => {
                let (verdict, failed) = match &certification.verdict {
                    Verdict::Pass => ("pass", Value::Null),
                    Verdict::Fail { basis, flips } => (
                        "fail",
                        json!({"basis": basis.name(), "flips": flips_json(flips)}),
                    ),
                };
                let checks: Vec<Value> = certification
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "flips": flips_json(&c.flips),
                            "max_trace_distance": num(c.max_trace_distance),
                            "passed": c.passed,
                        })
                    })
                    .collect();
                json!({
                    "verdict": verdict,
                    "failure": failed,
                    "tol_cert": num(certification.tol_cert),
                    "checks": checks,
                    "choi_distance": num(*choi_distance),
                    "sampled": {
                        "shots": shots,
                        "flips": sampled.iter().map(flips_json).collect::<Vec<_>>(),
                    },
                })
            }
            QueryResult::Teleport(t) => json!({
                "framework": t.framework.name(),
                "outcome_probs": t.outcome_probs.iter().map(|p| num(*p)).collect::<Vec<_>>(),
                "conditional_match": t.conditional_match.iter().map(|p| num(*p)).collect::<Vec<_>>(),
                "consistency": consistency_json(&t.consistency),
            }),
            QueryResult::CombinedFamily { history_count } => {
                json!({"history_count": history_count})
            }
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            QueryResult::Distribution { blocks, probs, .. } => {
                let mut out = String::new();
                for (j, (b, p)) in blocks.iter().zip(probs).enumerate() {
                    let label = b.label.as_deref().unwrap_or("-");
                    let _ = writeln!(out, "  [{j}] {label} (rank {}): {}", b.rank, short(*p));
                }
                out
            }
            QueryResult::EventProbability {
                indices,
                probability,
            } => format!("  Pr({indices:?}) = {}\n", short(*probability)),
            QueryResult::Compatibility {
                compatible,
                max_commutator_norm,
            } => format!(
                "  {} (max commutator norm {})\n",
                if *compatible { "compatible" } else { "incompatible" },
                short(*max_commutator_norm)
            ),
            QueryResult::Refinement { blocks, .. } => {
                let mut out = format!("  {} blocks\n", blocks.len());
                for (j, b) in blocks.iter().enumerate() {
                    let label = b.label.as_deref().unwrap_or("-");
                    let _ = writeln!(out, "  [{j}] {label} (rank {})", b.rank);
                }
                out
            }
            QueryResult::Conjunction { rank, .. } => {
                if *rank == 0 {
                    "  zero projector (always false)\n".into()
                } else {
                    format!("  projector of rank {rank}\n")
                }
            }
            QueryResult::Consistency(r) => format!(
                "  {} under the {} condition: max off-diagonal {} over {} histories, diagonal sum {}\n",
                if r.consistent { "consistent" } else { "inconsistent" },
                condition_name(r.condition),
                short(r.max_offdiag),
                r.history_count,
                short(r.diagonal_sum)
            ),
            QueryResult::Histories { probabilities, .. } => {
                let mut out = String::new();
                for (h, p) in probabilities {
                    let _ = writeln!(out, "  {h:?}: {}", short(*p));
                }
                out
            }
            QueryResult::ChannelCheck {
                certification,
                choi_distance,
                ..
            } => {
                let mut out = match &certification.verdict {
                    Verdict::Pass => "  pass\n".to_string(),
                    Verdict::Fail { basis, flips } => format!(
                        "  fail in basis {}: flips ({}, {})\n",
                        basis.name(),
                        short(flips.p_plus_to_minus),
                        short(flips.p_minus_to_plus)
                    ),
                };
                for c in &certification.checks {
                    let _ = writeln!(
                        out,
                        "  {}: flips ({}, {}), trace distance {}",
                        c.flips.basis.name(),
                        short(c.flips.p_plus_to_minus),
                        short(c.flips.p_minus_to_plus),
                        short(c.max_trace_distance)
                    );
                }
                let _ = writeln!(out, "  Choi distance from identity {}", short(*choi_distance));
                out
            }
            QueryResult::Teleport(t) => {
                let mut out = String::new();
                for m in 0..4 {
                    let _ = writeln!(
                        out,
                        "  outcome {}{}: probability {}, {} match {}",
                        m >> 1,
                        m & 1,
                        short(t.outcome_probs[m]),
                        t.framework.name(),
                        short(t.conditional_match[m])
                    );
                }
                let _ = writeln!(out, "  max off-diagonal {}", short(t.consistency.max_offdiag));
                out
            }
            QueryResult::CombinedFamily { history_count } => {
                format!("  combined family with {history_count} histories\n")
            }
        }
    }
}

/// Compact human-readable number.
fn short(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        return format!("{x:.3e}");
    }
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

impl Report {
    pub fn to_json(&self) -> Value {
        let t = &self.config.tolerances;
        let queries: Vec<Value> = self
            .queries
            .iter()
            .map(|q| {
                let mut entry = Map::new();
                entry.insert("kind".into(), json!(q.kind));
                entry.insert("line".into(), json!(q.line));
                entry.insert("inputs".into(), json!(q.inputs));
                match &q.outcome {
                    Ok(r) => {
                        entry.insert("status".into(), json!("ok"));
                        entry.insert("result".into(), r.to_json());
                        entry.insert("error".into(), Value::Null);
                    }
                    Err(e) => {
                        entry.insert("status".into(), json!("error"));
                        entry.insert("result".into(), Value::Null);
                        entry.insert(
                            "error".into(),
                            json!({"kind": e.kind, "message": e.message, "verdict": e.verdict()}),
                        );
                    }
                }
                Value::Object(entry)
            })
            .collect();
        json!({
            "version": REPORT_VERSION,
            "tolerances": {
                "algebraic": num(t.algebraic),
                "degeneracy": num(t.degeneracy),
                "probability": num(t.probability),
                "consistency": num(self.config.consistency.tolerance),
                "consistency_condition": condition_name(self.config.consistency.condition),
                "certification": num(self.config.tol_cert),
            },
            "seed": self.config.seed,
            "queries": queries,
        })
    }

    /// Pretty-printed JSON with sorted keys and a trailing newline.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for q in &self.queries {
            let _ = write!(out, "line {}: {} {}", q.line, q.kind, q.inputs.join(" "));
            match &q.outcome {
                Ok(r) => {
                    out.push('\n');
                    out.push_str(&r.to_text());
                }
                Err(e) => {
                    let _ = writeln!(out, " -> {}", e.verdict());
                    let _ = writeln!(out, "  {}: {}", e.kind, e.message);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(0.5).to_string(), "5.0000000000000000e-1");
        assert_eq!(num(f64::NAN), Value::Null);
        let back: f64 = num(0.1).to_string().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn short_numbers() {
        assert_eq!(short(0.5), "0.5");
        assert_eq!(short(1.0), "1");
        assert_eq!(short(0.0), "0");
        assert_eq!(short(2.5e-17), "2.500e-17");
    }
}
