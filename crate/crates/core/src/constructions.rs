//! Builders for the three maximally robust, zero-forcing-controllable designs
//! and their closed-form edge counts.
//!
//! Node ids are laid out deterministically:
//!
//! * leaders `ℓ_1..ℓ_k` are ids `0..k`;
//! * layered followers `u_{i,j}` (chain `i`, layer `j ≥ 1`) sit at
//!   `k + (j - 1)·k + (i - 1)`;
//! * path followers `u_j` of the diameter-two design and tail followers
//!   `v_j` of the mixed design follow the last layered id, in order.
//!
//! The layered designs have diameter `D = N / N_L` as measured by BFS.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, LeaderSet, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("family {family} needs at least {min} leaders, got {got}")]
    TooFewLeaders {
        family: Family,
        min: usize,
        got: usize,
    },
    #[error("N = {n} must exceed N_L = {n_leaders}")]
    TooFewNodes { n: usize, n_leaders: usize },
    #[error("N = {n} is not N_L × D = {n_leaders} × {d}")]
    NotLayered {
        n: usize,
        n_leaders: usize,
        d: usize,
    },
    #[error("N = {n} is not divisible by N_L = {n_leaders}")]
    NotDivisible { n: usize, n_leaders: usize },
    #[error("family {0} needs a diameter D")]
    DiameterRequired(Family),
    #[error("diameter D = {d} outside the feasible range [{min}, N/N_L = {max}]")]
    DiameterOutOfRange { d: usize, min: usize, max: usize },
    #[error("tail of {tail} node(s) is too short for diameter {d}; need at least 2")]
    TailTooShort { tail: usize, d: usize },
    #[error("built graph has diameter {measured}, requested {requested}")]
    DiameterMismatch { requested: usize, measured: usize },
    #[error("unknown family {0:?} (expected G1, G1_BAR, G2_BAR or G3_BAR)")]
    UnknownFamily(String),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Leader clique plus one path per leader.
    G1,
    /// `G1` with every edge that keeps the leaders a ZFS.
    G1Bar,
    /// Diameter-two design: a single forcing path from `ℓ_1` with every
    /// other leader joined to all followers.
    G2Bar,
    /// Layered prefix feeding a diameter-two tail; diameter is a parameter.
    G3Bar,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::G1, Family::G1Bar, Family::G2Bar, Family::G3Bar];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::G1 => "G1",
            Family::G1Bar => "G1_BAR",
            Family::G2Bar => "G2_BAR",
            Family::G3Bar => "G3_BAR",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == norm || f.as_str().replace('_', "") == norm)
            .ok_or_else(|| ConstructionError::UnknownFamily(s.to_string()))
    }
}

/// Requested design: family, total nodes `N`, leaders `N_L`, diameter `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub family: Family,
    pub n: usize,
    pub n_leaders: usize,
    /// Ignored for [`Family::G2Bar`], whose diameter is always 2. When absent
    /// for the layered families it is taken as `N / N_L`.
    pub diameter: Option<usize>,
}

impl ConstructionSpec {
    /// Reads `key=value` lines (`family`, `N`, `NL`, `D`); `#` starts a comment.
    pub fn parse_config(text: &str) -> Result<Self, ConstructionError> {
        let mut family = None;
        let mut n = None;
        let mut n_leaders = None;
        let mut diameter = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ConstructionError::Config { line: idx + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {line:?}")))?;
            let value = value.trim();
            let number = || {
                value
                    .parse::<usize>()
                    .map_err(|_| err(format!("invalid number {value:?}")))
            };
            match key.trim().to_ascii_uppercase().as_str() {
                "FAMILY" => family = Some(value.parse::<Family>()?),
                "N" => n = Some(number()?),
                "NL" | "N_L" => n_leaders = Some(number()?),
                "D" => diameter = Some(number()?),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        let missing = |k: &str| ConstructionError::Config {
            line: 0,
            msg: format!("missing key {k}"),
        };
        Ok(Self {
            family: family.ok_or_else(|| missing("family"))?,
            n: n.ok_or_else(|| missing("N"))?,
            n_leaders: n_leaders.ok_or_else(|| missing("NL"))?,
            diameter,
        })
    }
}

/// What a node stands for in a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// `ℓ_i`
    Leader(usize),
    /// `u_{i,j}`: chain `i`, layer `j`.
    Layered { chain: usize, layer: usize },
    /// `u_j` on the forcing path of the diameter-two design.
    Path(usize),
    /// `v_j` in the tail of the mixed design.
    Tail(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Leader(i) => write!(f, "L{i}"),
            Role::Layered { chain, layer } => write!(f, "u_{chain},{layer}"),
            Role::Path(j) => write!(f, "u_{j}"),
            Role::Tail(j) => write!(f, "v_{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructedNetwork {
    pub family: Family,
    pub graph: Graph,
    pub leaders: LeaderSet,
    /// Role of each node, indexed by id.
    pub layout: Vec<Role>,
}

impl ConstructedNetwork {
    pub fn role_index(&self) -> BTreeMap<Role, NodeId> {
        self.layout
            .iter()
            .enumerate()
            .map(|(id, &r)| (r, id))
            .collect()
    }

    pub fn role_labels(&self) -> Vec<String> {
        self.layout.iter().map(Role::to_string).collect()
    }

    /// Sidecar text: `id role` per line.
    pub fn layout_text(&self) -> String {
        self.layout
            .iter()
            .enumerate()
            .map(|(id, r)| format!("{id} {r}\n"))
            .collect()
    }

    pub fn to_dot(&self) -> String {
        self.graph
            .to_dot(Some(&self.role_labels()), Some(&self.leaders))
    }
}

fn layered_id(k: usize, chain: usize, layer: usize) -> NodeId {
    if layer == 0 {
        chain - 1
    } else {
        k + (layer - 1) * k + (chain - 1)
    }
}

struct Builder {
    graph: Graph,
    layout: Vec<Option<Role>>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Self {
            graph: Graph::new(n).expect("n ≥ 1 checked by caller"),
            layout: vec![None; n],
        }
    }

    fn role(&mut self, id: NodeId, role: Role) {
        debug_assert!(self.layout[id].is_none(), "id {id} assigned twice");
        self.layout[id] = Some(role);
    }

    fn edge(&mut self, u: NodeId, v: NodeId) {
        self.graph.add_edge(u, v).expect("layout ids are in range");
    }

    fn clique(&mut self, ids: &[NodeId]) {
        for (a, &u) in ids.iter().enumerate() {
            for &v in &ids[a + 1..] {
                self.edge(u, v);
            }
        }
    }

    /// Leaders plus `layers - 1` follower layers. Layer 0 is the leaders.
    fn layered(&mut self, k: usize, layers: usize, maximal: bool) {
        for i in 1..=k {
            self.role(layered_id(k, i, 0), Role::Leader(i));
            for j in 1..layers {
                self.role(layered_id(k, i, j), Role::Layered { chain: i, layer: j });
            }
        }
        let leaders: Vec<NodeId> = (1..=k).map(|i| layered_id(k, i, 0)).collect();
        self.clique(&leaders);
        for j in 0..layers.saturating_sub(1) {
            for i in 1..=k {
                // consecutive nodes of each chain; the maximal variant also
                // reaches every earlier chain one layer down
                let reach = if maximal { 1..=i } else { i..=i };
                for q in reach {
                    self.edge(layered_id(k, i, j), layered_id(k, q, j + 1));
                }
            }
            if maximal {
                let layer: Vec<NodeId> = (1..=k).map(|i| layered_id(k, i, j + 1)).collect();
                self.clique(&layer);
            }
        }
    }

    /// Forcing path `anchors[0] - first - first+1 - ...` with every other
    /// anchor joined to the whole path.
    fn star_path(
        &mut self,
        anchors: &[NodeId],
        first: NodeId,
        len: usize,
        role: fn(usize) -> Role,
    ) {
        let mut prev = anchors[0];
        for j in 1..=len {
            let id = first + j - 1;
            self.role(id, role(j));
            self.edge(prev, id);
            for &a in &anchors[1..] {
                self.edge(a, id);
            }
            prev = id;
        }
    }

    fn finish(self, family: Family, k: usize) -> ConstructedNetwork {
        let n = self.graph.node_count();
        let layout = self
            .layout
            .into_iter()
            .map(|r| r.expect("every id receives a role"))
            .collect();
        ConstructedNetwork {
            family,
            leaders: LeaderSet::new((0..k).collect(), n).expect("leader ids 0..k are valid"),
            graph: self.graph,
            layout,
        }
    }
}

fn check_layered(family: Family, n: usize, k: usize, d: usize) -> Result<(), ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::TooFewLeaders {
            family,
            min: 1,
            got: 0,
        });
    }
    if d < 2 {
        return Err(ConstructionError::DiameterOutOfRange {
            d,
            min: 2,
            max: n / k,
        });
    }
    if k * d != n {
        return Err(ConstructionError::NotLayered { n, n_leaders: k, d });
    }
    Ok(())
}

/// `N_L` disjoint paths of `D` nodes, each starting at its leader, plus the
/// leader clique. `n` must equal `n_leaders × d`.
pub fn build_g1(
    n: usize,
    n_leaders: usize,
    d: usize,
) -> Result<ConstructedNetwork, ConstructionError> {
    check_layered(Family::G1, n, n_leaders, d)?;
    let mut b = Builder::new(n);
    b.layered(n_leaders, d, false);
    Ok(b.finish(Family::G1, n_leaders))
}

/// [`build_g1`] augmented with leader-to-earlier-chain edges, layer-to-layer
/// edges toward earlier chains, and a clique on every follower layer.
pub fn build_g1_bar(
    n: usize,
    n_leaders: usize,
    d: usize,
) -> Result<ConstructedNetwork, ConstructionError> {
    check_layered(Family::G1Bar, n, n_leaders, d)?;
    let mut b = Builder::new(n);
    b.layered(n_leaders, d, true);
    Ok(b.finish(Family::G1Bar, n_leaders))
}

/// Leader clique, path `ℓ_1 - u_1 - ... - u_m` and every other leader joined
/// to all `u_j`. Diameter 2.
pub fn build_g2_bar(n: usize, n_leaders: usize) -> Result<ConstructedNetwork, ConstructionError> {
    if n_leaders < 2 {
        return Err(ConstructionError::TooFewLeaders {
            family: Family::G2Bar,
            min: 2,
            got: n_leaders,
        });
    }
    if n <= n_leaders {
        return Err(ConstructionError::TooFewNodes { n, n_leaders });
    }
    let mut b = Builder::new(n);
    b.layered(n_leaders, 1, true);
    let leaders: Vec<NodeId> = (0..n_leaders).collect();
    b.star_path(&leaders, n_leaders, n - n_leaders, Role::Path);
    Ok(b.finish(Family::G2Bar, n_leaders))
}

/// Mixed design of diameter `d`: a maximal layered prefix of `d - 1` layers
/// whose last layer acts as the leader set of a diameter-two tail of
/// `n - n_leaders·(d - 1)` nodes. The tail hangs off the first chain so the
/// first pseudo-leader continues `ℓ_1`'s forcing chain.
///
/// `d = 2` gives the edge set of [`build_g2_bar`]. When `n_leaders` divides
/// `n` and `d = n / n_leaders ≥ 3` the result is [`build_g1_bar`]; at
/// `n = 2·n_leaders` both boundaries fall on `d = 2` and the first one holds.
pub fn build_g3_bar(
    n: usize,
    n_leaders: usize,
    d: usize,
) -> Result<ConstructedNetwork, ConstructionError> {
    let k = n_leaders;
    if k < 2 {
        return Err(ConstructionError::TooFewLeaders {
            family: Family::G3Bar,
            min: 2,
            got: k,
        });
    }
    if n <= k {
        return Err(ConstructionError::TooFewNodes { n, n_leaders: k });
    }
    let max = n / k;
    if d < 2 || d > max {
        return Err(ConstructionError::DiameterOutOfRange { d, min: 2, max });
    }
    let net = if n.is_multiple_of(k) && d == max && d > 2 {
        let mut b = Builder::new(n);
        b.layered(k, d, true);
        b.finish(Family::G3Bar, k)
    } else {
        let prefix_layers = d - 1;
        let tail = n - k * prefix_layers;
        if d >= 3 && tail < 2 {
            return Err(ConstructionError::TailTooShort { tail, d });
        }
        let mut b = Builder::new(n);
        b.layered(k, prefix_layers, true);
        let pseudo: Vec<NodeId> = (1..=k)
            .map(|i| layered_id(k, i, prefix_layers - 1))
            .collect();
        b.star_path(&pseudo, k * prefix_layers, tail, Role::Tail);
        b.finish(Family::G3Bar, k)
    };
    let measured = net
        .graph
        .diameter()
        .map_err(|_| ConstructionError::DiameterMismatch {
            requested: d,
            measured: 0,
        })?;
    if measured != d {
        return Err(ConstructionError::DiameterMismatch {
            requested: d,
            measured,
        });
    }
    Ok(net)
}

pub fn build(spec: &ConstructionSpec) -> Result<ConstructedNetwork, ConstructionError> {
    let layered_d = || -> Result<usize, ConstructionError> {
        match spec.diameter {
            Some(d) => Ok(d),
            None if spec.n_leaders > 0 && spec.n.is_multiple_of(spec.n_leaders) => {
                Ok(spec.n / spec.n_leaders)
            }
            None if spec.n_leaders > 0 => Err(ConstructionError::NotDivisible {
                n: spec.n,
                n_leaders: spec.n_leaders,
            }),
            None => Err(ConstructionError::TooFewLeaders {
                family: spec.family,
                min: 1,
                got: 0,
            }),
        }
    };
    match spec.family {
        Family::G1 => build_g1(spec.n, spec.n_leaders, layered_d()?),
        Family::G1Bar => build_g1_bar(spec.n, spec.n_leaders, layered_d()?),
        Family::G2Bar => build_g2_bar(spec.n, spec.n_leaders),
        Family::G3Bar => {
            let d = spec
                .diameter
                .ok_or(ConstructionError::DiameterRequired(Family::G3Bar))?;
            build_g3_bar(spec.n, spec.n_leaders, d)
        }
    }
}

/// Closed-form edge count `N_L·(N − (N_L + 1)/2)` shared by the maximal designs.
pub fn expected_edges(n: usize, n_leaders: usize) -> Result<usize, ConstructionError> {
    if n_leaders == 0 {
        return Err(ConstructionError::TooFewLeaders {
            family: Family::G1Bar,
            min: 1,
            got: 0,
        });
    }
    if n <= n_leaders {
        return Err(ConstructionError::TooFewNodes { n, n_leaders });
    }
    let twice = n_leaders * (2 * n - n_leaders - 1);
    assert_eq!(twice % 2, 0, "N_L·(2N − N_L − 1) is always even");
    Ok(twice / 2)
}

/// Layered-design split: `(E1, E2)` = (edges inside the `D` layer cliques,
/// all remaining edges).
pub fn edge_terms_g1(n_leaders: usize, d: usize) -> (usize, usize) {
    let k = n_leaders;
    (d * k * (k - 1) / 2, d.saturating_sub(1) * k * (k + 1) / 2)
}

/// Diameter-two split: `(E3, E4, E5)` = (other leaders to followers,
/// forcing path, leader clique).
pub fn edge_terms_g2(n: usize, n_leaders: usize) -> (usize, usize, usize) {
    let k = n_leaders;
    let m = n - k;
    (m * (k - 1), m, k * (k - 1) / 2)
}
