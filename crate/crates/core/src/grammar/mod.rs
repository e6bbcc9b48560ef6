//! Graph grammars that assemble the maximal designs by local rewriting.
//!
//! Every node carries a [`Label`]. A rule binds one or two nodes by label,
//! checks index constraints, then adds an edge and/or relabels the bound
//! nodes. Rules never remove edges. Starting from one seed node `S_1` and
//! `α` everywhere else, any interleaving of applicable rules reaches the same
//! graph up to the label-to-role correspondence.

mod engine;
mod rules;

use std::fmt;

pub use engine::{
    applicable_matches, label_isomorphic, run_to_fixpoint, run_to_fixpoint_observed, step,
    LabeledGraph, Match, Schedule, SchedulePolicy,
};
pub use rules::{
    grammar_r1, grammar_r2, Axis, CmpOp, Grammar, GrammarKind, Guard, IndexExpr, IndexRef, Phase,
    R6Reading, Rewrite, Rule, RuleId, Slot,
};

use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("invalid grammar parameters: {0}")]
    InvalidParameters(String),
    #[error("grammar has no rule {0}")]
    UnknownRule(RuleId),
    #[error("rule {rule} is not applicable to nodes {nodes:?}")]
    StaleMatch { rule: RuleId, nodes: Vec<NodeId> },
    #[error("no fixpoint within {0} steps")]
    StepBudgetExceeded(usize),
    #[error("node {node} still carries label {label}")]
    NotConverged { node: NodeId, label: Label },
    #[error("state has {got} nodes, grammar expects {expected}")]
    NodeCountMismatch { got: usize, expected: usize },
    #[error("trace line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelKind {
    Alpha,
    Seed,
    Leader,
    Beta,
    Gamma,
}

/// Node label: a kind plus up to two indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub kind: LabelKind,
    pub i: Option<usize>,
    pub j: Option<usize>,
}

impl Label {
    pub const ALPHA: Label = Label {
        kind: LabelKind::Alpha,
        i: None,
        j: None,
    };

    pub fn seed(i: usize) -> Self {
        Self::indexed(LabelKind::Seed, i, None)
    }

    pub fn leader(i: usize) -> Self {
        Self::indexed(LabelKind::Leader, i, None)
    }

    pub fn beta(i: usize, j: Option<usize>) -> Self {
        Self::indexed(LabelKind::Beta, i, j)
    }

    pub fn gamma(i: usize, j: Option<usize>) -> Self {
        Self::indexed(LabelKind::Gamma, i, j)
    }

    fn indexed(kind: LabelKind, i: usize, j: Option<usize>) -> Self {
        Self {
            kind,
            i: Some(i),
            j,
        }
    }

    pub fn index(&self, axis: Axis) -> Option<usize> {
        match axis {
            Axis::I => self.i,
            Axis::J => self.j,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbol = match self.kind {
            LabelKind::Alpha => return f.write_str("α"),
            LabelKind::Seed => "S",
            LabelKind::Leader => "L",
            LabelKind::Beta => "β",
            LabelKind::Gamma => "γ",
        };
        match (self.i, self.j) {
            (Some(i), Some(j)) => write!(f, "{symbol}{i},{j}"),
            (Some(i), None) => write!(f, "{symbol}{i}"),
            _ => f.write_str(symbol),
        }
    }
}
