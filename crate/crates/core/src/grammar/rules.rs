//! Rule tables for the layered grammar (R1) and the diameter-two grammar (R2).

use std::fmt;

use super::{GrammarError, Label, LabelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(pub u8);

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// Π1 rules lay down the forcing paths and the leader clique; Π2 rules add
/// the extra edges that keep the leaders a zero forcing set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Pi1,
    Pi2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    I,
    J,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexRef {
    pub slot: Slot,
    pub axis: Axis,
}

impl IndexRef {
    pub const LEFT_I: IndexRef = IndexRef {
        slot: Slot::Left,
        axis: Axis::I,
    };
    pub const LEFT_J: IndexRef = IndexRef {
        slot: Slot::Left,
        axis: Axis::J,
    };
    pub const RIGHT_I: IndexRef = IndexRef {
        slot: Slot::Right,
        axis: Axis::I,
    };
    pub const RIGHT_J: IndexRef = IndexRef {
        slot: Slot::Right,
        axis: Axis::J,
    };

    pub(super) fn resolve(self, bound: &[Label]) -> Option<usize> {
        let label = match self.slot {
            Slot::Left => bound.first(),
            Slot::Right => bound.get(1),
        }?;
        label.index(self.axis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexExpr {
    Const(usize),
    /// Bound index plus an offset.
    Ref(IndexRef, usize),
}

impl IndexExpr {
    pub(super) fn eval(self, bound: &[Label]) -> Option<usize> {
        match self {
            IndexExpr::Const(c) => Some(c),
            IndexExpr::Ref(r, offset) => r.resolve(bound).map(|v| v + offset),
        }
    }
}

fn at(r: IndexRef) -> IndexExpr {
    IndexExpr::Ref(r, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Guard {
    /// Compares a bound index against an expression. Fails when either side
    /// refers to a missing index.
    Index {
        lhs: IndexRef,
        op: CmpOp,
        rhs: IndexExpr,
    },
    /// The bound node has no β/γ neighbor; with `same_chain`, only β/γ
    /// neighbors sharing its first index count. Lets a leader start exactly
    /// one chain.
    NoFollowerNeighbor { slot: Slot, same_chain: bool },
}

fn cmp(lhs: IndexRef, op: CmpOp, rhs: IndexExpr) -> Guard {
    Guard::Index { lhs, op, rhs }
}

/// New label for a bound node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rewrite {
    Keep,
    To {
        kind: LabelKind,
        i: IndexExpr,
        j: Option<IndexExpr>,
    },
}

impl Rewrite {
    fn to(kind: LabelKind, i: IndexExpr, j: Option<IndexExpr>) -> Self {
        Rewrite::To { kind, i, j }
    }

    pub(super) fn apply(self, current: Label, bound: &[Label]) -> Option<Label> {
        match self {
            Rewrite::Keep => Some(current),
            Rewrite::To { kind, i, j } => Some(Label {
                kind,
                i: Some(i.eval(bound)?),
                j: match j {
                    Some(e) => Some(e.eval(bound)?),
                    None => None,
                },
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: RuleId,
    pub phase: Phase,
    /// Human-readable form, e.g. `S_i α ⇀ L_i — S_{i+1}`.
    pub notation: &'static str,
    /// Label kinds of the bound nodes: one (unary) or two (binary).
    pub lhs: Vec<LabelKind>,
    pub guards: Vec<Guard>,
    /// Binary rules add the edge between their two nodes; such a rule only
    /// matches while that edge is absent.
    pub connect: bool,
    pub rewrite: Vec<Rewrite>,
}

impl Rule {
    pub fn arity(&self) -> usize {
        self.lhs.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrammarKind {
    R1,
    R2,
}

impl fmt::Display for GrammarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrammarKind::R1 => "R1",
            GrammarKind::R2 => "R2",
        })
    }
}

/// How rule r6 of R2 pairs leaders with followers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum R6Reading {
    /// `L_i` with every `γ_j`, `i ≠ 1`. Reaches the diameter-two design.
    #[default]
    AllFollowers,
    /// `L_i` with `γ_i` only (matching subscripts), `i ≠ 1`. Adds just
    /// `N_L − 1` edges; kept for comparison.
    MatchingIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub kind: GrammarKind,
    pub node_count: usize,
    pub n_leaders: usize,
    /// Layer count `D` for R1; 2 for R2.
    pub diameter: usize,
    pub rules: Vec<Rule>,
}

impl Grammar {
    pub fn rule(&self, id: RuleId) -> Result<&Rule, GrammarError> {
        self.rules
            .iter()
            .find(|r| r.id == id)
            .ok_or(GrammarError::UnknownRule(id))
    }
}

use IndexRef as R;
use LabelKind::{Alpha, Beta, Gamma, Leader, Seed};

fn seed_rules(n_leaders: usize) -> [Rule; 2] {
    [
        Rule {
            id: RuleId(0),
            phase: Phase::Pi1,
            notation: "S_i α ⇀ L_i — S_{i+1}, 1 ≤ i < N_L",
            lhs: vec![Seed, Alpha],
            guards: vec![cmp(R::LEFT_I, CmpOp::Lt, IndexExpr::Const(n_leaders))],
            connect: true,
            rewrite: vec![
                Rewrite::to(Leader, at(R::LEFT_I), None),
                Rewrite::to(Seed, IndexExpr::Ref(R::LEFT_I, 1), None),
            ],
        },
        Rule {
            id: RuleId(1),
            phase: Phase::Pi1,
            notation: "S_i ⇀ L_i, i = N_L",
            lhs: vec![Seed],
            guards: vec![cmp(R::LEFT_I, CmpOp::Eq, IndexExpr::Const(n_leaders))],
            connect: false,
            rewrite: vec![Rewrite::to(Leader, at(R::LEFT_I), None)],
        },
    ]
}

fn leader_clique_rule() -> Rule {
    Rule {
        id: RuleId(5),
        phase: Phase::Pi1,
        notation: "L_i L_j ⇀ L_i — L_j",
        lhs: vec![Leader, Leader],
        guards: vec![cmp(R::LEFT_I, CmpOp::Lt, at(R::RIGHT_I))],
        connect: true,
        rewrite: vec![Rewrite::Keep, Rewrite::Keep],
    }
}

/// Layered grammar for `N = n_leaders × d` nodes.
pub fn grammar_r1(n_leaders: usize, d: usize) -> Result<Grammar, GrammarError> {
    if n_leaders == 0 || d < 2 {
        return Err(GrammarError::InvalidParameters(format!(
            "R1 needs N_L ≥ 1 and D ≥ 2, got N_L = {n_leaders}, D = {d}"
        )));
    }
    let [r0, r1] = seed_rules(n_leaders);
    let rules = vec![
        r0,
        r1,
        Rule {
            id: RuleId(2),
            phase: Phase::Pi1,
            notation: "L_i α ⇀ L_i — γ_{i,1}",
            lhs: vec![Leader, Alpha],
            guards: vec![Guard::NoFollowerNeighbor {
                slot: Slot::Left,
                same_chain: true,
            }],
            connect: true,
            rewrite: vec![
                Rewrite::Keep,
                Rewrite::to(Gamma, at(R::LEFT_I), Some(IndexExpr::Const(1))),
            ],
        },
        Rule {
            id: RuleId(3),
            phase: Phase::Pi1,
            notation: "γ_{i,j} α ⇀ β_{i,j} — γ_{i,j+1}, 1 ≤ j < D−1",
            lhs: vec![Gamma, Alpha],
            guards: vec![cmp(R::LEFT_J, CmpOp::Lt, IndexExpr::Const(d - 1))],
            connect: true,
            rewrite: vec![
                Rewrite::to(Beta, at(R::LEFT_I), Some(at(R::LEFT_J))),
                Rewrite::to(Gamma, at(R::LEFT_I), Some(IndexExpr::Ref(R::LEFT_J, 1))),
            ],
        },
        Rule {
            id: RuleId(4),
            phase: Phase::Pi1,
            notation: "γ_{i,j} ⇀ β_{i,j}, j = D−1",
            lhs: vec![Gamma],
            guards: vec![cmp(R::LEFT_J, CmpOp::Eq, IndexExpr::Const(d - 1))],
            connect: false,
            rewrite: vec![Rewrite::to(Beta, at(R::LEFT_I), Some(at(R::LEFT_J)))],
        },
        leader_clique_rule(),
        Rule {
            id: RuleId(6),
            phase: Phase::Pi2,
            notation: "L_i β_{j,1} ⇀ L_i — β_{j,1}, j ≤ i",
            lhs: vec![Leader, Beta],
            guards: vec![
                cmp(R::RIGHT_J, CmpOp::Eq, IndexExpr::Const(1)),
                cmp(R::RIGHT_I, CmpOp::Le, at(R::LEFT_I)),
            ],
            connect: true,
            rewrite: vec![Rewrite::Keep, Rewrite::Keep],
        },
        Rule {
            id: RuleId(7),
            phase: Phase::Pi2,
            notation: "β_{i,j} β_{k,j+1} ⇀ β_{i,j} — β_{k,j+1}, k < i",
            lhs: vec![Beta, Beta],
            guards: vec![
                cmp(R::RIGHT_J, CmpOp::Eq, IndexExpr::Ref(R::LEFT_J, 1)),
                cmp(R::RIGHT_I, CmpOp::Lt, at(R::LEFT_I)),
            ],
            connect: true,
            rewrite: vec![Rewrite::Keep, Rewrite::Keep],
        },
        Rule {
            id: RuleId(8),
            phase: Phase::Pi2,
            notation: "β_{i,j} β_{k,j} ⇀ β_{i,j} — β_{k,j}, i ≠ k",
            lhs: vec![Beta, Beta],
            guards: vec![
                cmp(R::RIGHT_J, CmpOp::Eq, at(R::LEFT_J)),
                cmp(R::LEFT_I, CmpOp::Lt, at(R::RIGHT_I)),
            ],
            connect: true,
            rewrite: vec![Rewrite::Keep, Rewrite::Keep],
        },
    ];
    Ok(Grammar {
        kind: GrammarKind::R1,
        node_count: n_leaders * d,
        n_leaders,
        diameter: d,
        rules,
    })
}

/// Diameter-two grammar for `n` nodes and `n_leaders ≥ 2` leaders.
pub fn grammar_r2(n: usize, n_leaders: usize, r6: R6Reading) -> Result<Grammar, GrammarError> {
    if n_leaders < 2 || n <= n_leaders {
        return Err(GrammarError::InvalidParameters(format!(
            "R2 needs N > N_L ≥ 2, got N = {n}, N_L = {n_leaders}"
        )));
    }
    let followers = n - n_leaders;
    let [r0, r1] = seed_rules(n_leaders);
    let mut r6_guards = vec![cmp(R::LEFT_I, CmpOp::Ne, IndexExpr::Const(1))];
    let mut r6_notation = "L_i γ_j ⇀ L_i — γ_j, i ≠ 1";
    if r6 == R6Reading::MatchingIndex {
        r6_guards.push(cmp(R::RIGHT_I, CmpOp::Eq, at(R::LEFT_I)));
        r6_notation = "L_i γ_i ⇀ L_i — γ_i, i ≠ 1";
    }
    let rules = vec![
        r0,
        r1,
        Rule {
            id: RuleId(2),
            phase: Phase::Pi1,
            notation: "L_1 α ⇀ L_1 — β_1",
            lhs: vec![Leader, Alpha],
            guards: vec![
                cmp(R::LEFT_I, CmpOp::Eq, IndexExpr::Const(1)),
                Guard::NoFollowerNeighbor {
                    slot: Slot::Left,
                    same_chain: false,
                },
            ],
            connect: true,
            rewrite: vec![Rewrite::Keep, Rewrite::to(Beta, IndexExpr::Const(1), None)],
        },
        Rule {
            id: RuleId(3),
            phase: Phase::Pi1,
            notation: "β_i α ⇀ γ_i — β_{i+1}, 1 ≤ i < N−N_L",
            lhs: vec![Beta, Alpha],
            guards: vec![cmp(R::LEFT_I, CmpOp::Lt, IndexExpr::Const(followers))],
            connect: true,
            rewrite: vec![
                Rewrite::to(Gamma, at(R::LEFT_I), None),
                Rewrite::to(Beta, IndexExpr::Ref(R::LEFT_I, 1), None),
            ],
        },
        Rule {
            id: RuleId(4),
            phase: Phase::Pi1,
            notation: "β_i ⇀ γ_i, i = N−N_L",
            lhs: vec![Beta],
            guards: vec![cmp(R::LEFT_I, CmpOp::Eq, IndexExpr::Const(followers))],
            connect: false,
            rewrite: vec![Rewrite::to(Gamma, at(R::LEFT_I), None)],
        },
        leader_clique_rule(),
        Rule {
            id: RuleId(6),
            phase: Phase::Pi2,
            notation: r6_notation,
            lhs: vec![Leader, Gamma],
            guards: r6_guards,
            connect: true,
            rewrite: vec![Rewrite::Keep, Rewrite::Keep],
        },
    ];
    Ok(Grammar {
        kind: GrammarKind::R2,
        node_count: n,
        n_leaders,
        diameter: 2,
        rules,
    })
}
