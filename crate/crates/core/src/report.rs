//! Serializable decision reports.
//!
//! The JSON layout is documented in `docs/report.schema.json`. Content is a
//! deterministic function of the decision: no timestamps, no environment
//! data. Positions are rendered 1-based.

use serde::Serialize;

use crate::decision::{ConflictWitness, Decision};
use crate::trees::Tree;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub answer: bool,
    pub notes: Vec<String>,
    pub stats: StatsReport,
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub states: usize,
    pub transitions: usize,
    pub seeds: usize,
    pub triples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub triple: [String; 3],
    pub symbol: String,
    /// 1-based exchange position.
    pub position: usize,
    pub context: String,
    pub left_trees: Vec<String>,
    pub right_trees: Vec<String>,
    pub accepted: [String; 2],
    pub violating: String,
    pub trail: Vec<TrailReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrailReport {
    pub triple: [String; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via_symbol: Option<String>,
    /// 1-based context position.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via_position: Option<usize>,
}

/// Results of the optional oracle cross-checks (`--verify`).
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_confirmed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounded_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset_holds: Option<bool>,
}

fn witness_report(witness: &ConflictWitness) -> WitnessReport {
    let trees = |ts: &[Tree]| ts.iter().map(Tree::to_string).collect();
    WitnessReport {
        triple: witness.triple.clone(),
        symbol: witness.symbol.clone(),
        position: witness.position + 1,
        context: witness.context.to_string(),
        left_trees: trees(&witness.left_trees),
        right_trees: trees(&witness.right_trees),
        accepted: [witness.accepted.0.to_string(), witness.accepted.1.to_string()],
        violating: witness.violating.to_string(),
        trail: witness
            .trail
            .iter()
            .map(|step| TrailReport {
                triple: step.triple.clone(),
                via_symbol: step.via.as_ref().map(|(s, _)| s.clone()),
                via_position: step.via.as_ref().map(|&(_, p)| p + 1),
            })
            .collect(),
    }
}

/// Renders a decision into its report form.
pub fn explain(decision: &Decision) -> Report {
    Report {
        answer: decision.answer,
        notes: decision.notes.clone(),
        stats: StatsReport {
            states: decision.stats.states,
            transitions: decision.stats.transitions,
            seeds: decision.stats.seeds,
            triples: decision.stats.triples,
        },
        witness: decision.witness.as_ref().map(witness_report),
        verification: None,
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "top-down deterministic: {}\n",
            if self.answer { "yes" } else { "no" }
        ));
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out.push_str(&format!(
            "stats: states={} transitions={} seeds={} triples={}\n",
            self.stats.states, self.stats.transitions, self.stats.seeds, self.stats.triples
        ));
        if let Some(w) = &self.witness {
            out.push_str("witness:\n");
            out.push_str(&format!(
                "  triple: ({}, {}, {})\n",
                w.triple[0], w.triple[1], w.triple[2]
            ));
            out.push_str(&format!("  symbol: {}  position: {}\n", w.symbol, w.position));
            out.push_str(&format!("  context: {}\n", w.context));
            out.push_str(&format!("  left: ({})\n", w.left_trees.join(", ")));
            out.push_str(&format!("  right: ({})\n", w.right_trees.join(", ")));
            out.push_str(&format!("  accepted: {}\n", w.accepted[0]));
            out.push_str(&format!("  accepted: {}\n", w.accepted[1]));
            out.push_str(&format!("  rejected: {}\n", w.violating));
            let trail: Vec<String> = w
                .trail
                .iter()
                .map(|s| {
                    let triple = format!("({},{},{})", s.triple[0], s.triple[1], s.triple[2]);
                    match (&s.via_symbol, s.via_position) {
                        (Some(sym), Some(pos)) => format!("{triple} via {sym}@{pos}"),
                        _ => triple,
                    }
                })
                .collect();
            out.push_str(&format!("  trail: {}\n", trail.join(" -> ")));
        }
        if let Some(v) = &self.verification {
            let mut parts = vec![format!("bound {}", v.bound)];
            if let Some(ok) = v.witness_confirmed {
                parts.push(format!("witness {}", if ok { "confirmed" } else { "REFUTED" }));
            }
            if let Some(ok) = v.bounded_equal {
                parts.push(format!(
                    "bounded equality {}",
                    if ok { "holds" } else { "FAILS" }
                ));
            }
            if let Some(ok) = v.subset_holds {
                parts.push(format!("inclusion {}", if ok { "holds" } else { "FAILS" }));
            }
            out.push_str(&format!("verification: {}\n", parts.join(", ")));
        }
        out
    }
}
