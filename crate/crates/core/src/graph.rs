//! Labeled graph data model: simple undirected graphs with interned node and
//! edge labels, neighborhoods, branch structures, and the arc orientations
//! used by the ILP formulation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Interned label token. Compared by id; the payload (string form) lives in
/// the owning [`Alphabets`] table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

/// Structured payload for protein-style node labels: structural type plus an
/// amino acid sequence.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct NodePayload {
    pub struct_type: String,
    pub sequence: String,
}

/// Structured payload for protein-style edge labels: one or two connection
/// types.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EdgePayload {
    pub t1: String,
    pub t2: Option<String>,
}

/// Node and edge label alphabets (Σ_V, Σ_E). Shared across all graphs of a
/// dataset so that label ids are comparable between graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabets {
    node_tokens: Vec<String>,
    edge_tokens: Vec<String>,
    node_index: HashMap<String, u32>,
    edge_index: HashMap<String, u32>,
}

impl Alphabets {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds alphabets from fixed token lists.
    pub fn from_tokens<S: AsRef<str>>(node_tokens: &[S], edge_tokens: &[S]) -> Self {
        let mut a = Self::new();
        for t in node_tokens {
            a.intern_node(t.as_ref());
        }
        for t in edge_tokens {
            a.intern_edge(t.as_ref());
        }
        a
    }

    pub fn intern_node(&mut self, token: &str) -> Label {
        if let Some(&id) = self.node_index.get(token) {
            return Label(id);
        }
        let id = self.node_tokens.len() as u32;
        self.node_tokens.push(token.to_string());
        self.node_index.insert(token.to_string(), id);
        Label(id)
    }

    pub fn intern_edge(&mut self, token: &str) -> Label {
        if let Some(&id) = self.edge_index.get(token) {
            return Label(id);
        }
        let id = self.edge_tokens.len() as u32;
        self.edge_tokens.push(token.to_string());
        self.edge_index.insert(token.to_string(), id);
        Label(id)
    }

    pub fn node_label(&self, token: &str) -> Option<Label> {
        self.node_index.get(token).map(|&id| Label(id))
    }

    pub fn edge_label(&self, token: &str) -> Option<Label> {
        self.edge_index.get(token).map(|&id| Label(id))
    }

    pub fn node_token(&self, l: Label) -> &str {
        &self.node_tokens[l.0 as usize]
    }

    pub fn edge_token(&self, l: Label) -> &str {
        &self.edge_tokens[l.0 as usize]
    }

    pub fn node_count(&self) -> usize {
        self.node_tokens.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_tokens.len()
    }

    pub fn node_tokens(&self) -> &[String] {
        &self.node_tokens
    }

    pub fn edge_tokens(&self) -> &[String] {
        &self.edge_tokens
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self loop at node {0}")]
    SelfLoop(u32),
    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(u32, u32),
    #[error("unknown label token `{0}`")]
    UnknownLabel(String),
    #[error("edge endpoint {0} out of range (n = {1})")]
    DanglingEndpoint(u32, usize),
    #[error("unknown node {0}")]
    UnknownNode(u32),
    #[error("star/cycle instance requires n >= 3, got {0}")]
    InvalidSize(usize),
}

/// An edge to be inserted during construction.
#[derive(Debug, Clone)]
pub struct EdgeSpec {
    pub u: u32,
    pub v: u32,
    pub label: Label,
    pub payload: Option<EdgePayload>,
}

impl EdgeSpec {
    pub fn new(u: u32, v: u32, label: Label) -> Self {
        Self { u, v, label, payload: None }
    }
}

/// Simple undirected labeled graph. Node ids are dense `0..n`. Edges are
/// stored canonically with `u < v`, sorted lexicographically. Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraph {
    alphabets: Arc<Alphabets>,
    node_labels: Vec<Label>,
    edges: Vec<(u32, u32)>,
    edge_labels: Vec<Label>,
    node_payloads: Vec<Option<NodePayload>>,
    edge_payloads: Vec<Option<EdgePayload>>,
    /// Original dataset node identifiers, for reporting.
    orig_node_ids: Vec<String>,
    /// Edge indices incident to each node (Γ).
    incident: Vec<Vec<u32>>,
}

impl LabeledGraph {
    pub fn build(
        alphabets: Arc<Alphabets>,
        node_labels: Vec<Label>,
        edges: Vec<EdgeSpec>,
    ) -> Result<Self, GraphError> {
        let n = node_labels.len();
        for &l in &node_labels {
            if l.0 as usize >= alphabets.node_count() {
                return Err(GraphError::UnknownLabel(format!("node label #{}", l.0)));
            }
        }
        let mut canon: Vec<(u32, u32, Label, Option<EdgePayload>)> = Vec::with_capacity(edges.len());
        for e in edges {
            if e.u == e.v {
                return Err(GraphError::SelfLoop(e.u));
            }
            if e.u as usize >= n {
                return Err(GraphError::DanglingEndpoint(e.u, n));
            }
            if e.v as usize >= n {
                return Err(GraphError::DanglingEndpoint(e.v, n));
            }
            if e.label.0 as usize >= alphabets.edge_count() {
                return Err(GraphError::UnknownLabel(format!("edge label #{}", e.label.0)));
            }
            let (u, v) = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
            canon.push((u, v, e.label, e.payload));
        }
        canon.sort_by_key(|&(u, v, _, _)| (u, v));
        for w in canon.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut incident = vec![Vec::new(); n];
        let mut edge_pairs = Vec::with_capacity(canon.len());
        let mut edge_labels = Vec::with_capacity(canon.len());
        let mut edge_payloads = Vec::with_capacity(canon.len());
        for (idx, (u, v, l, p)) in canon.into_iter().enumerate() {
            incident[u as usize].push(idx as u32);
            incident[v as usize].push(idx as u32);
            edge_pairs.push((u, v));
            edge_labels.push(l);
            edge_payloads.push(p);
        }
        let orig_node_ids = (0..n).map(|i| i.to_string()).collect();
        Ok(Self {
            alphabets,
            node_labels,
            edges: edge_pairs,
            edge_labels,
            node_payloads: vec![None; n],
            edge_payloads,
            orig_node_ids,
            incident,
        })
    }

    /// Convenience constructor resolving label tokens through a mutable
    /// alphabet interner.
    pub fn from_tokens(
        alphabets: &mut Alphabets,
        node_labels: &[&str],
        edges: &[(u32, u32, &str)],
    ) -> Result<(Self, Arc<Alphabets>), GraphError> {
        let labels: Vec<Label> = node_labels.iter().map(|t| alphabets.intern_node(t)).collect();
        let especs: Vec<EdgeSpec> = edges
            .iter()
            .map(|&(u, v, t)| EdgeSpec::new(u, v, alphabets.intern_edge(t)))
            .collect();
        let arc = Arc::new(std::mem::take(alphabets));
        let g = Self::build(Arc::clone(&arc), labels, especs)?;
        Ok((g, arc))
    }

    pub fn with_node_payloads(mut self, payloads: Vec<Option<NodePayload>>) -> Self {
        assert_eq!(payloads.len(), self.n());
        self.node_payloads = payloads;
        self
    }

    pub fn with_orig_node_ids(mut self, ids: Vec<String>) -> Self {
        assert_eq!(ids.len(), self.n());
        self.orig_node_ids = ids;
        self
    }

    pub fn n(&self) -> usize {
        self.node_labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn alphabets(&self) -> &Arc<Alphabets> {
        &self.alphabets
    }

    pub fn node_label(&self, v: u32) -> Label {
        self.node_labels[v as usize]
    }

    pub fn node_labels(&self) -> &[Label] {
        &self.node_labels
    }

    /// Edge endpoints `(u, v)` with `u < v`.
    pub fn edge(&self, e: u32) -> (u32, u32) {
        self.edges[e as usize]
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_label(&self, e: u32) -> Label {
        self.edge_labels[e as usize]
    }

    pub fn edge_labels(&self) -> &[Label] {
        &self.edge_labels
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn find_edge(&self, u: u32, v: u32) -> Option<u32> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok().map(|i| i as u32)
    }

    pub fn degree(&self, v: u32) -> usize {
        self.incident[v as usize].len()
    }

    /// Edge indices incident to `v` (Γ(v)).
    pub fn incident_edges(&self, v: u32) -> &[u32] {
        &self.incident[v as usize]
    }

    /// Neighboring node ids of `v` (δ(v)).
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.incident[v as usize].iter().map(move |&e| {
            let (a, b) = self.edges[e as usize];
            if a == v {
                b
            } else {
                a
            }
        })
    }

    pub fn node_payload(&self, v: u32) -> Option<&NodePayload> {
        self.node_payloads[v as usize].as_ref()
    }

    pub fn edge_payload(&self, e: u32) -> Option<&EdgePayload> {
        self.edge_payloads[e as usize].as_ref()
    }

    pub fn orig_node_id(&self, v: u32) -> &str {
        &self.orig_node_ids[v as usize]
    }

    /// Branch structure B(v): the node label together with the multiset of
    /// labels of incident edges.
    pub fn branch_structure(&self, v: u32) -> Result<BranchStructure, GraphError> {
        if v as usize >= self.n() {
            return Err(GraphError::UnknownNode(v));
        }
        let mut incident_edge_labels: Vec<Label> = self.incident[v as usize]
            .iter()
            .map(|&e| self.edge_labels[e as usize])
            .collect();
        incident_edge_labels.sort();
        Ok(BranchStructure { center_label: self.node_labels[v as usize], incident_edge_labels })
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, m={})", self.n(), self.m())
    }
}

/// Branch structure of a vertex: its label plus the multiset of incident edge
/// labels, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchStructure {
    pub center_label: Label,
    pub incident_edge_labels: Vec<Label>,
}

/// Arc orientation for the ILP formulation: each edge `{i,j}` of G becomes the
/// single arc `(i,j)` with `i < j`; each edge `{k,l}` of H becomes the two
/// arcs `(k,l)` and `(l,k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedArcSet {
    pub g_arcs: Vec<(u32, u32)>,
    pub h_arcs: Vec<(u32, u32)>,
}

/// Orients the edges of `g` and `h` as required by the ILP formulation.
/// Deterministic: arcs are listed in lexicographic order of the underlying
/// canonical edge list, with the forward copy before the reverse one for H.
pub fn orient(g: &LabeledGraph, h: &LabeledGraph) -> OrientedArcSet {
    let g_arcs = g.edges().to_vec();
    let mut h_arcs = Vec::with_capacity(2 * h.m());
    for &(k, l) in h.edges() {
        h_arcs.push((k, l));
        h_arcs.push((l, k));
    }
    OrientedArcSet { g_arcs, h_arcs }
}

/// Builds the unlabeled star S_n (center node 0) and cycle C_n pair over a
/// fresh shared single-token alphabet.
pub fn star_cycle_instance(n: usize) -> Result<(LabeledGraph, LabeledGraph), GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidSize(n));
    }
    let mut alph = Alphabets::new();
    let nl = alph.intern_node("*");
    let el = alph.intern_edge("-");
    let alph = Arc::new(alph);
    let star_edges: Vec<EdgeSpec> =
        (1..n as u32).map(|v| EdgeSpec::new(0, v, el)).collect();
    let star = LabeledGraph::build(Arc::clone(&alph), vec![nl; n], star_edges)?;
    let cycle_edges: Vec<EdgeSpec> = (0..n as u32)
        .map(|v| EdgeSpec::new(v, (v + 1) % n as u32, el))
        .collect();
    let cycle = LabeledGraph::build(Arc::clone(&alph), vec![nl; n], cycle_edges)?;
    Ok((star, cycle))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2_pair() -> (LabeledGraph, LabeledGraph) {
        crate::testutil::fig2_pair()
    }

    #[test]
    fn smallest_valid_graph() {
        let mut a = Alphabets::new();
        let (g, _) = LabeledGraph::from_tokens(&mut a, &["C"], &[]).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn fig2_graph_shape() {
        let (g, h) = fig2_pair();
        assert_eq!(g.n(), 5);
        assert_eq!(g.m(), 4);
        assert_eq!(h.n(), 4);
        assert_eq!(h.m(), 5);
    }

    #[test]
    fn self_loop_rejected() {
        let mut a = Alphabets::new();
        let err = LabeledGraph::from_tokens(&mut a, &["A", "A", "A", "A"], &[(3, 3, "e")])
            .unwrap_err();
        assert_eq!(err, GraphError::SelfLoop(3));
    }

    #[test]
    fn duplicate_edge_rejected() {
        let mut a = Alphabets::new();
        let err =
            LabeledGraph::from_tokens(&mut a, &["A", "B"], &[(0, 1, "e"), (1, 0, "e")]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge(0, 1));
    }

    #[test]
    fn dangling_endpoint_rejected() {
        let mut a = Alphabets::new();
        let err = LabeledGraph::from_tokens(&mut a, &["A"], &[(0, 5, "e")]).unwrap_err();
        assert_eq!(err, GraphError::DanglingEndpoint(5, 1));
    }

    #[test]
    fn branch_structure_isolated_node() {
        let mut a = Alphabets::new();
        let (g, _) = LabeledGraph::from_tokens(&mut a, &["A"], &[]).unwrap();
        let b = g.branch_structure(0).unwrap();
        assert!(b.incident_edge_labels.is_empty());
        assert_eq!(g.alphabets().node_token(b.center_label), "A");
    }

    #[test]
    fn branch_structure_star_center() {
        let (star, _) = star_cycle_instance(5).unwrap();
        let b = star.branch_structure(0).unwrap();
        assert_eq!(b.incident_edge_labels.len(), 4);
        assert!(b.incident_edge_labels.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn branch_structure_fig2_center() {
        let (g, _) = fig2_pair();
        // center of the star-like G is node 0 with degree 4 and label A
        let b = g.branch_structure(0).unwrap();
        assert_eq!(g.alphabets().node_token(b.center_label), "A");
        assert_eq!(b.incident_edge_labels.len(), 4);
    }

    #[test]
    fn branch_structure_unknown_node() {
        let (star, _) = star_cycle_instance(3).unwrap();
        assert_eq!(star.branch_structure(99).unwrap_err(), GraphError::UnknownNode(99));
    }

    #[test]
    fn orient_basic() {
        let mut a = Alphabets::new();
        let (g, _) =
            LabeledGraph::from_tokens(&mut a, &["A", "A", "A"], &[(0, 1, "e"), (0, 2, "e")])
                .unwrap();
        let mut a2 = Alphabets::new();
        let (h, _) = LabeledGraph::from_tokens(&mut a2, &["A", "A"], &[(0, 1, "e")]).unwrap();
        let arcs = orient(&g, &h);
        assert_eq!(arcs.g_arcs, vec![(0, 1), (0, 2)]);
        assert_eq!(arcs.h_arcs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn orient_empty_h() {
        let mut a = Alphabets::new();
        let (g, _) = LabeledGraph::from_tokens(&mut a, &["A", "B"], &[(0, 1, "e")]).unwrap();
        let mut a2 = Alphabets::new();
        let (h, _) = LabeledGraph::from_tokens(&mut a2, &["A"], &[]).unwrap();
        assert!(orient(&g, &h).h_arcs.is_empty());
    }

    #[test]
    fn orient_star_cycle_counts() {
        let (s, c) = star_cycle_instance(5).unwrap();
        let arcs = orient(&s, &c);
        assert_eq!(arcs.g_arcs.len(), 4);
        assert_eq!(arcs.h_arcs.len(), 10);
    }

    #[test]
    fn orient_deterministic() {
        let (s, c) = star_cycle_instance(6).unwrap();
        assert_eq!(orient(&s, &c), orient(&s, &c));
    }

    #[test]
    fn star_cycle_sizes() {
        for (n, es, ec) in [(3usize, 2usize, 3usize), (5, 4, 5), (8, 7, 8)] {
            let (s, c) = star_cycle_instance(n).unwrap();
            assert_eq!(s.n(), n);
            assert_eq!(c.n(), n);
            assert_eq!(s.m(), es);
            assert_eq!(c.m(), ec);
        }
        assert!(matches!(star_cycle_instance(2), Err(GraphError::InvalidSize(2))));
    }

    #[test]
    fn degree_sum_is_twice_edge_count() {
        for n in 3..9 {
            let (s, c) = star_cycle_instance(n).unwrap();
            for g in [&s, &c] {
                let deg_sum: usize = (0..g.n() as u32).map(|v| g.degree(v)).sum();
                assert_eq!(deg_sum, 2 * g.m());
            }
        }
    }
}
