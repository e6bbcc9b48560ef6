use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rules::{CmpOp, Grammar, Guard, Phase, Rule, RuleId, Slot};
use super::{GrammarError, Label, LabelKind};
use crate::constructions::{ConstructedNetwork, Role};
use crate::graph::{Graph, LeaderSet, NodeId};

/// Graph plus one label per node: the rewriting state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<Label>,
}

impl LabeledGraph {
    /// Node 0 is the seed `S_1`; every other node is `α`. No edges.
    pub fn initial(n: usize) -> Result<Self, GrammarError> {
        let graph = Graph::new(n).map_err(|e| GrammarError::InvalidParameters(e.to_string()))?;
        let mut labels = vec![Label::ALPHA; n];
        labels[0] = Label::seed(1);
        Ok(Self { graph, labels })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Nodes labeled `L_i`, ordered by `i`.
    pub fn leaders(&self) -> Vec<NodeId> {
        let mut leaders: Vec<(usize, NodeId)> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.kind == LabelKind::Leader)
            .map(|(u, l)| (l.i.unwrap_or_default(), u))
            .collect();
        leaders.sort_unstable();
        leaders.into_iter().map(|(_, u)| u).collect()
    }

    pub fn leader_set(&self) -> Option<LeaderSet> {
        LeaderSet::new(self.leaders(), self.node_count()).ok()
    }

    /// Checks that at most one seed exists and leader indices are distinct.
    pub fn validate(&self) -> Result<(), String> {
        let seeds = self
            .labels
            .iter()
            .filter(|l| l.kind == LabelKind::Seed)
            .count();
        if seeds > 1 {
            return Err(format!("{seeds} seed nodes"));
        }
        let mut seen = BTreeMap::new();
        for (u, l) in self.labels.iter().enumerate() {
            if l.kind == LabelKind::Leader {
                if let Some(prev) = seen.insert(l.i, u) {
                    return Err(format!("nodes {prev} and {u} share label {l}"));
                }
            }
        }
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self.labels.iter().map(Label::to_string).collect();
        self.graph.to_dot(Some(&labels), self.leader_set().as_ref())
    }

    fn bound(&self, nodes: &[NodeId]) -> Vec<Label> {
        nodes.iter().map(|&u| self.labels[u]).collect()
    }

    fn guard_holds(&self, guard: &Guard, nodes: &[NodeId], bound: &[Label]) -> bool {
        match *guard {
            Guard::Index { lhs, op, rhs } => {
                let (Some(a), Some(b)) = (lhs.resolve(bound), rhs.eval(bound)) else {
                    return false;
                };
                match op {
                    CmpOp::Lt => a < b,
                    CmpOp::Le => a <= b,
                    CmpOp::Eq => a == b,
                    CmpOp::Ne => a != b,
                }
            }
            Guard::NoFollowerNeighbor { slot, same_chain } => {
                let idx = match slot {
                    Slot::Left => 0,
                    Slot::Right => 1,
                };
                let Some(&u) = nodes.get(idx) else {
                    return false;
                };
                let own = self.labels[u].i;
                !self.graph.neighbors(u).any(|v| {
                    let l = self.labels[v];
                    matches!(l.kind, LabelKind::Beta | LabelKind::Gamma)
                        && (!same_chain || l.i == own)
                })
            }
        }
    }

    /// Whether `rule` applies to `nodes` and would change the state.
    pub fn is_applicable(&self, rule: &Rule, nodes: &[NodeId]) -> bool {
        if nodes.len() != rule.arity() || nodes.iter().any(|&u| u >= self.node_count()) {
            return false;
        }
        if nodes.len() == 2 && nodes[0] == nodes[1] {
            return false;
        }
        let bound = self.bound(nodes);
        if bound.iter().zip(&rule.lhs).any(|(l, k)| l.kind != *k) {
            return false;
        }
        if !rule
            .guards
            .iter()
            .all(|g| self.guard_holds(g, nodes, &bound))
        {
            return false;
        }
        if rule.connect && (nodes.len() != 2 || self.graph.has_edge(nodes[0], nodes[1])) {
            return false;
        }
        let relabeled: Option<Vec<Label>> = rule
            .rewrite
            .iter()
            .zip(&bound)
            .map(|(rw, &cur)| rw.apply(cur, &bound))
            .collect();
        match relabeled {
            Some(new) => rule.connect || new != bound,
            None => false,
        }
    }

    /// Applies one match in place.
    pub fn apply(&mut self, grammar: &Grammar, m: &Match) -> Result<(), GrammarError> {
        let rule = grammar.rule(m.rule)?;
        if !self.is_applicable(rule, &m.nodes) {
            return Err(GrammarError::StaleMatch {
                rule: m.rule,
                nodes: m.nodes.clone(),
            });
        }
        let bound = self.bound(&m.nodes);
        for (&u, rw) in m.nodes.iter().zip(&rule.rewrite) {
            self.labels[u] = rw
                .apply(self.labels[u], &bound)
                .expect("checked applicable");
        }
        if rule.connect {
            self.graph
                .add_edge(m.nodes[0], m.nodes[1])
                .expect("checked applicable");
        }
        Ok(())
    }
}

/// A rule together with the nodes it binds, left slot first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Match {
    pub rule: RuleId,
    pub nodes: Vec<NodeId>,
}

/// Every effective `(rule, binding)` in rule order, then by node ids.
pub fn applicable_matches(state: &LabeledGraph, grammar: &Grammar) -> Vec<Match> {
    let mut by_kind: BTreeMap<LabelKind, Vec<NodeId>> = BTreeMap::new();
    for (u, l) in state.labels.iter().enumerate() {
        by_kind.entry(l.kind).or_default().push(u);
    }
    let nodes_of = |k: LabelKind| by_kind.get(&k).map_or(&[][..], Vec::as_slice);
    let mut out = Vec::new();
    for rule in &grammar.rules {
        match rule.lhs.as_slice() {
            [a] => {
                for &u in nodes_of(*a) {
                    if state.is_applicable(rule, &[u]) {
                        out.push(Match {
                            rule: rule.id,
                            nodes: vec![u],
                        });
                    }
                }
            }
            [a, b] => {
                for &u in nodes_of(*a) {
                    for &v in nodes_of(*b) {
                        if state.is_applicable(rule, &[u, v]) {
                            out.push(Match {
                                rule: rule.id,
                                nodes: vec![u, v],
                            });
                        }
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// Functional form of [`LabeledGraph::apply`].
pub fn step(
    state: &LabeledGraph,
    grammar: &Grammar,
    m: &Match,
) -> Result<LabeledGraph, GrammarError> {
    let mut next = state.clone();
    next.apply(grammar, m)?;
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SchedulePolicy {
    /// Uniform choice among all applicable matches.
    #[default]
    Uniform,
    /// Uniform among Π2 matches whenever any exist, otherwise among all.
    Pi2Priority,
}

/// Reproducible record of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub seed: u64,
    pub policy: SchedulePolicy,
    pub steps: Vec<Match>,
}

impl Schedule {
    /// `STEP k RULE r NODES a[,b]` per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, m) in self.steps.iter().enumerate() {
            let nodes: Vec<String> = m.nodes.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "STEP {k} RULE {} NODES {}", m.rule, nodes.join(","));
        }
        out
    }

    pub fn parse_steps(text: &str) -> Result<Vec<Match>, GrammarError> {
        let mut steps = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| GrammarError::Parse {
                line: idx + 1,
                msg: msg.to_string(),
            };
            let words: Vec<&str> = line.split_whitespace().collect();
            let ["STEP", k, "RULE", rule, "NODES", nodes] = words.as_slice() else {
                return Err(err("expected `STEP k RULE r NODES a[,b]`"));
            };
            if k.parse::<usize>().ok() != Some(steps.len()) {
                return Err(err("step numbers must count up from 0"));
            }
            let rule = rule
                .strip_prefix('r')
                .and_then(|r| r.parse::<u8>().ok())
                .ok_or_else(|| err("invalid rule id"))?;
            let nodes = nodes
                .split(',')
                .map(|w| w.parse::<NodeId>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| err("invalid node list"))?;
            steps.push(Match {
                rule: RuleId(rule),
                nodes,
            });
        }
        Ok(steps)
    }

    pub fn replay(
        &self,
        initial: &LabeledGraph,
        grammar: &Grammar,
    ) -> Result<LabeledGraph, GrammarError> {
        let mut state = initial.clone();
        for m in &self.steps {
            state.apply(grammar, m)?;
        }
        Ok(state)
    }
}

/// Step limit: one step per edge plus a label advance per node, with slack.
fn step_budget(n: usize) -> usize {
    n * n + 4 * n + 8
}

/// Like [`run_to_fixpoint`], calling `observe(k, state)` on the initial state
/// (`k = 0`) and after each step.
pub fn run_to_fixpoint_observed(
    initial: &LabeledGraph,
    grammar: &Grammar,
    seed: u64,
    policy: SchedulePolicy,
    mut observe: impl FnMut(usize, &LabeledGraph),
) -> Result<(LabeledGraph, Schedule), GrammarError> {
    if initial.node_count() != grammar.node_count {
        return Err(GrammarError::NodeCountMismatch {
            got: initial.node_count(),
            expected: grammar.node_count,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = initial.clone();
    let mut steps = Vec::new();
    let budget = step_budget(state.node_count());
    observe(0, &state);
    loop {
        let matches = applicable_matches(&state, grammar);
        if matches.is_empty() {
            break;
        }
        if steps.len() == budget {
            return Err(GrammarError::StepBudgetExceeded(budget));
        }
        let pool: Vec<&Match> = match policy {
            SchedulePolicy::Uniform => matches.iter().collect(),
            SchedulePolicy::Pi2Priority => {
                let pi2: Vec<&Match> = matches
                    .iter()
                    .filter(|m| grammar.rule(m.rule).is_ok_and(|r| r.phase == Phase::Pi2))
                    .collect();
                if pi2.is_empty() {
                    matches.iter().collect()
                } else {
                    pi2
                }
            }
        };
        let chosen = pool[rng.gen_range(0..pool.len())].clone();
        state.apply(grammar, &chosen)?;
        steps.push(chosen);
        observe(steps.len(), &state);
    }
    Ok((
        state,
        Schedule {
            seed,
            policy,
            steps,
        },
    ))
}

/// Applies randomly chosen applicable matches until none remain.
pub fn run_to_fixpoint(
    initial: &LabeledGraph,
    grammar: &Grammar,
    seed: u64,
    policy: SchedulePolicy,
) -> Result<(LabeledGraph, Schedule), GrammarError> {
    run_to_fixpoint_observed(initial, grammar, seed, policy, |_, _| {})
}

fn role_of(label: Label) -> Option<Role> {
    match (label.kind, label.i, label.j) {
        (LabelKind::Leader, Some(i), None) => Some(Role::Leader(i)),
        (LabelKind::Beta, Some(chain), Some(layer)) => Some(Role::Layered { chain, layer }),
        (LabelKind::Gamma, Some(j), None) => Some(Role::Path(j)),
        _ => None,
    }
}

/// True when the final labels map bijectively onto `target`'s roles and that
/// map carries the edge set of `state` exactly onto `target`'s.
pub fn label_isomorphic(
    state: &LabeledGraph,
    target: &ConstructedNetwork,
) -> Result<bool, GrammarError> {
    if let Some((node, &label)) = state
        .labels
        .iter()
        .enumerate()
        .find(|(_, l)| matches!(l.kind, LabelKind::Alpha | LabelKind::Seed))
    {
        return Err(GrammarError::NotConverged { node, label });
    }
    if state.node_count() != target.graph.node_count() {
        return Ok(false);
    }
    let roles = target.role_index();
    let mut image = Vec::with_capacity(state.node_count());
    for &label in &state.labels {
        match role_of(label).and_then(|r| roles.get(&r)) {
            Some(&id) => image.push(id),
            None => return Ok(false),
        }
    }
    let mut hit = vec![false; image.len()];
    for &id in &image {
        if std::mem::replace(&mut hit[id], true) {
            return Ok(false);
        }
    }
    Ok(state.graph.edge_count() == target.graph.edge_count()
        && state
            .graph
            .edges()
            .all(|(u, v)| target.graph.has_edge(image[u], image[v])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_g1_bar, build_g2_bar};
    use crate::grammar::{grammar_r1, grammar_r2, R6Reading};

    fn m(rule: u8, nodes: &[NodeId]) -> Match {
        Match {
            rule: RuleId(rule),
            nodes: nodes.to_vec(),
        }
    }

    #[test]
    fn initial_matches_are_seed_expansions() {
        let g = grammar_r1(3, 4).unwrap();
        let s = LabeledGraph::initial(12).unwrap();
        assert_eq!(s.labels.iter().filter(|l| **l == Label::ALPHA).count(), 11);
        let matches = applicable_matches(&s, &g);
        assert_eq!(matches.len(), 11);
        assert!(matches
            .iter()
            .all(|x| x.rule == RuleId(0) && x.nodes[0] == 0));
    }

    #[test]
    fn r1_single_steps() {
        let g = grammar_r1(3, 4).unwrap();
        let mut s = LabeledGraph::initial(12).unwrap();
        s.apply(&g, &m(0, &[0, 5])).unwrap();
        assert_eq!(s.labels[0], Label::leader(1));
        assert_eq!(s.labels[5], Label::seed(2));
        assert!(s.graph.has_edge(0, 5));
        // the stale binding is rejected
        assert!(matches!(
            s.apply(&g, &m(0, &[0, 5])),
            Err(GrammarError::StaleMatch { .. })
        ));

        s.apply(&g, &m(0, &[5, 6])).unwrap();
        let edges = s.graph.edge_count();
        s.apply(&g, &m(1, &[6])).unwrap();
        assert_eq!(s.labels[6], Label::leader(3));
        assert_eq!(s.graph.edge_count(), edges);
        // consecutive leaders are already joined by r0
        let r5: Vec<Match> = applicable_matches(&s, &g)
            .into_iter()
            .filter(|x| x.rule == RuleId(5))
            .collect();
        assert_eq!(r5, vec![m(5, &[0, 6])]);

        // L_2 with β_{1,1}
        s.labels[7] = Label::beta(1, Some(1));
        s.apply(&g, &m(6, &[5, 7])).unwrap();
        assert!(s.graph.has_edge(5, 7));
        // a leader starts only one chain
        s.apply(&g, &m(2, &[0, 8])).unwrap();
        assert_eq!(s.labels[8], Label::gamma(1, Some(1)));
        assert!(!s.is_applicable(g.rule(RuleId(2)).unwrap(), &[0, 9]));
    }

    #[test]
    fn r8_adds_edge_only() {
        let g = grammar_r1(3, 4).unwrap();
        let mut s = LabeledGraph::initial(12).unwrap();
        s.labels[3] = Label::beta(1, Some(2));
        s.labels[4] = Label::beta(3, Some(2));
        let before = s.labels.clone();
        s.apply(&g, &m(8, &[3, 4])).unwrap();
        assert!(s.graph.has_edge(3, 4));
        assert_eq!(s.labels, before);
        assert!(!s.is_applicable(g.rule(RuleId(8)).unwrap(), &[4, 3]));
    }

    #[test]
    fn r2_grammar_steps() {
        let g = grammar_r2(12, 3, R6Reading::default()).unwrap();
        let mut s = LabeledGraph::initial(12).unwrap();
        s.labels[0] = Label::leader(1);
        s.labels[1] = Label::leader(3);
        s.apply(&g, &m(2, &[0, 4])).unwrap();
        assert_eq!(s.labels[4], Label::beta(1, None));
        s.apply(&g, &m(5, &[0, 1])).unwrap();
        assert!(s.graph.has_edge(0, 1));

        let mut t = LabeledGraph::initial(12).unwrap();
        t.labels[0] = Label::leader(1);
        t.labels[2] = Label::beta(9, None);
        t.apply(&g, &m(4, &[2])).unwrap();
        assert_eq!(t.labels[2], Label::gamma(9, None));
    }

    #[test]
    fn runs_converge_and_replay() {
        let g = grammar_r1(3, 4).unwrap();
        let init = LabeledGraph::initial(12).unwrap();
        let (fin, sched) = run_to_fixpoint(&init, &g, 7, SchedulePolicy::Uniform).unwrap();
        assert!(applicable_matches(&fin, &g).is_empty());
        assert_eq!(
            label_isomorphic(&fin, &build_g1_bar(12, 3, 4).unwrap()),
            Ok(true)
        );
        assert_eq!(sched.replay(&init, &g).unwrap(), fin);
        let parsed = Schedule::parse_steps(&sched.to_text()).unwrap();
        assert_eq!(parsed, sched.steps);
        assert!(sched.to_text().starts_with("STEP 0 RULE r0 NODES 0,"));
    }

    #[test]
    fn isomorphism_rejections() {
        let g = grammar_r2(12, 3, R6Reading::default()).unwrap();
        let init = LabeledGraph::initial(12).unwrap();
        let (fin, _) = run_to_fixpoint(&init, &g, 1, SchedulePolicy::Uniform).unwrap();
        assert_eq!(
            label_isomorphic(&fin, &build_g2_bar(12, 3).unwrap()),
            Ok(true)
        );
        assert_eq!(
            label_isomorphic(&fin, &build_g1_bar(12, 3, 4).unwrap()),
            Ok(false)
        );
        assert!(matches!(
            label_isomorphic(&init, &build_g2_bar(12, 3).unwrap()),
            Err(GrammarError::NotConverged { node: 0, .. })
        ));
    }

    #[test]
    fn node_count_is_checked() {
        let g = grammar_r1(2, 3).unwrap();
        let init = LabeledGraph::initial(7).unwrap();
        assert_eq!(
            run_to_fixpoint(&init, &g, 0, SchedulePolicy::Uniform).unwrap_err(),
            GrammarError::NodeCountMismatch {
                got: 7,
                expected: 6
            }
        );
    }
}
