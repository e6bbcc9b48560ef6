//! Zero forcing: the color-change rule, derived sets, zero forcing set tests
//! and maximal-edge certification.
//!
//! A black node with exactly one white neighbor forces that neighbor black.
//! Repeating the rule until no force is available yields the derived set,
//! which does not depend on the order in which forces are applied. A leader
//! set is a zero forcing set (ZFS) when its derived set is every node, which
//! is equivalent to strong structural controllability of the leader-follower
//! system on the graph.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, LeaderSet, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroForcingError {
    #[error("node {node} is out of range for a graph with {n} nodes")]
    OutOfRange { node: NodeId, n: usize },
    #[error("leader set is not a zero forcing set ({derived} of {n} nodes forced)")]
    NotZfs { derived: usize, n: usize },
    #[error("trace step {step}: {reason}")]
    InvalidStep { step: usize, reason: String },
    #[error("trace line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One application of the color-change rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Force {
    pub forcer: NodeId,
    pub forced: NodeId,
}

/// Record of a complete forcing run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingTrace {
    pub initial_black: BTreeSet<NodeId>,
    pub steps: Vec<Force>,
    pub derived: BTreeSet<NodeId>,
}

impl ForcingTrace {
    pub fn is_complete(&self, g: &Graph) -> bool {
        self.derived.len() == g.node_count()
    }

    /// Forced nodes in the order they turned black.
    pub fn forced_sequence(&self) -> Vec<NodeId> {
        self.steps.iter().map(|f| f.forced).collect()
    }

    /// Re-runs the steps against `g`, checking each one is a legal force and
    /// that the recorded derived set is exactly what the steps produce.
    pub fn replay(&self, g: &Graph) -> Result<(), ZeroForcingError> {
        let mut state = ColorState::new(g, self.initial_black.iter().copied())?;
        for (step, f) in self.steps.iter().enumerate() {
            let invalid = |reason: String| ZeroForcingError::InvalidStep { step, reason };
            if f.forcer >= g.node_count() || f.forced >= g.node_count() {
                return Err(invalid("node out of range".into()));
            }
            if !state.black[f.forcer] {
                return Err(invalid(format!("forcer {} is white", f.forcer)));
            }
            if state.black[f.forced] {
                return Err(invalid(format!("node {} is already black", f.forced)));
            }
            if !g.has_edge(f.forcer, f.forced) {
                return Err(invalid(format!(
                    "{} -- {} is not an edge",
                    f.forcer, f.forced
                )));
            }
            if state.white_count[f.forcer] != 1 {
                return Err(invalid(format!(
                    "forcer {} has {} white neighbors",
                    f.forcer, state.white_count[f.forcer]
                )));
            }
            state.paint(g, f.forced);
        }
        let derived: BTreeSet<NodeId> = state.black_nodes().collect();
        if derived != self.derived {
            return Err(ZeroForcingError::InvalidStep {
                step: self.steps.len(),
                reason: "recorded derived set does not match replay".into(),
            });
        }
        if !forcing_candidates_in(g, &state).is_empty() {
            return Err(ZeroForcingError::InvalidStep {
                step: self.steps.len(),
                reason: "trace stops before the fixpoint".into(),
            });
        }
        Ok(())
    }

    /// Line format: `FORCE forcer forced`, one step per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.steps {
            let _ = writeln!(out, "FORCE {} {}", f.forcer, f.forced);
        }
        out
    }

    pub fn parse_steps(text: &str) -> Result<Vec<Force>, ZeroForcingError> {
        let mut steps = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| ZeroForcingError::Parse {
                line: idx + 1,
                msg: msg.to_string(),
            };
            let words: Vec<&str> = line.split_whitespace().collect();
            let ["FORCE", a, b] = words.as_slice() else {
                return Err(err("expected `FORCE forcer forced`"));
            };
            steps.push(Force {
                forcer: a.parse().map_err(|_| err("invalid forcer id"))?,
                forced: b.parse().map_err(|_| err("invalid forced id"))?,
            });
        }
        Ok(steps)
    }
}

struct ColorState {
    black: Vec<bool>,
    white_count: Vec<usize>,
}

impl ColorState {
    fn new(g: &Graph, black: impl IntoIterator<Item = NodeId>) -> Result<Self, ZeroForcingError> {
        let n = g.node_count();
        let mut colors = vec![false; n];
        for b in black {
            if b >= n {
                return Err(ZeroForcingError::OutOfRange { node: b, n });
            }
            colors[b] = true;
        }
        let white_count = (0..n)
            .map(|u| g.neighbors(u).filter(|&v| !colors[v]).count())
            .collect();
        Ok(Self {
            black: colors,
            white_count,
        })
    }

    fn paint(&mut self, g: &Graph, u: NodeId) {
        self.black[u] = true;
        for v in g.neighbors(u) {
            self.white_count[v] -= 1;
        }
    }

    fn black_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.black
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(u, _)| u)
    }

    fn sole_white_neighbor(&self, g: &Graph, v: NodeId) -> NodeId {
        g.neighbors(v)
            .find(|&u| !self.black[u])
            .expect("white_count is 1")
    }
}

fn forcing_candidates_in(g: &Graph, state: &ColorState) -> Vec<Force> {
    (0..g.node_count())
        .filter(|&v| state.black[v] && state.white_count[v] == 1)
        .map(|v| Force {
            forcer: v,
            forced: state.sole_white_neighbor(g, v),
        })
        .collect()
}

/// Every force available from the coloring `black`, by ascending forcer id.
pub fn forcing_candidates(
    g: &Graph,
    black: &BTreeSet<NodeId>,
) -> Result<Vec<Force>, ZeroForcingError> {
    let state = ColorState::new(g, black.iter().copied())?;
    Ok(forcing_candidates_in(g, &state))
}

/// Runs forcing to the fixpoint, applying one force per step. `choose` picks
/// the index of the force to apply from the current candidate list.
pub fn derived_set_by(
    g: &Graph,
    black: &BTreeSet<NodeId>,
    mut choose: impl FnMut(&[Force]) -> usize,
) -> Result<ForcingTrace, ZeroForcingError> {
    let mut state = ColorState::new(g, black.iter().copied())?;
    let mut steps = Vec::new();
    loop {
        let candidates = forcing_candidates_in(g, &state);
        if candidates.is_empty() {
            break;
        }
        let f = candidates[choose(&candidates)];
        state.paint(g, f.forced);
        steps.push(f);
    }
    Ok(ForcingTrace {
        initial_black: black.clone(),
        steps,
        derived: state.black_nodes().collect(),
    })
}

/// Canonical forcing run: the first candidate (lowest forcer id) fires at
/// every step.
pub fn derived_set(g: &Graph, black: &BTreeSet<NodeId>) -> Result<ForcingTrace, ZeroForcingError> {
    let mut state = ColorState::new(g, black.iter().copied())?;
    let mut steps = Vec::new();
    loop {
        let next = (0..g.node_count()).find(|&v| state.black[v] && state.white_count[v] == 1);
        let Some(forcer) = next else { break };
        let forced = state.sole_white_neighbor(g, forcer);
        state.paint(g, forced);
        steps.push(Force { forcer, forced });
    }
    Ok(ForcingTrace {
        initial_black: black.clone(),
        steps,
        derived: state.black_nodes().collect(),
    })
}

fn leader_colors(leaders: &LeaderSet) -> BTreeSet<NodeId> {
    leaders.iter().collect()
}

pub fn is_zfs(g: &Graph, leaders: &LeaderSet) -> bool {
    derived_set(g, &leader_colors(leaders)).is_ok_and(|t| t.is_complete(g))
}

/// ZFS status together with process uniqueness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProcessReport {
    pub zfs: bool,
    /// At every step exactly one node could turn black. Several forcers
    /// competing for the same node still count as one way to proceed.
    pub unique: bool,
}

pub fn analyze_process(g: &Graph, leaders: &LeaderSet) -> ProcessReport {
    let mut unique = true;
    let trace = derived_set_by(g, &leader_colors(leaders), |candidates| {
        let distinct: BTreeSet<NodeId> = candidates.iter().map(|f| f.forced).collect();
        if distinct.len() > 1 {
            unique = false;
        }
        0
    });
    match trace {
        Ok(t) => ProcessReport {
            zfs: t.is_complete(g),
            unique,
        },
        Err(_) => ProcessReport {
            zfs: false,
            unique: false,
        },
    }
}

pub fn is_unique_process(g: &Graph, leaders: &LeaderSet) -> bool {
    analyze_process(g, leaders).unique
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalityReport {
    /// Non-edges whose addition keeps the leaders a ZFS. Empty iff maximal.
    pub violations: Vec<(NodeId, NodeId)>,
}

impl MaximalityReport {
    pub fn is_maximal(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every non-edge: the edge set is maximal when adding any one of
/// them breaks the zero forcing property of `leaders`.
pub fn is_maximal_for_zfs(
    g: &Graph,
    leaders: &LeaderSet,
) -> Result<MaximalityReport, ZeroForcingError> {
    let colors = leader_colors(leaders);
    let base = derived_set(g, &colors)?;
    if !base.is_complete(g) {
        return Err(ZeroForcingError::NotZfs {
            derived: base.derived.len(),
            n: g.node_count(),
        });
    }
    let violations = g
        .non_edges()
        .into_par_iter()
        .filter(|&(u, v)| {
            let mut augmented = g.clone();
            augmented
                .add_edge(u, v)
                .expect("non-edge endpoints are valid");
            derived_set(&augmented, &colors).is_ok_and(|t| t.is_complete(&augmented))
        })
        .collect();
    Ok(MaximalityReport { violations })
}
