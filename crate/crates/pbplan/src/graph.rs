//! Task graphs and cost configurations.
//!
//! A task graph is a DAG with terminal nodes `s` and `t` and non-negative
//! rational edge costs. Nodes carry stable integer ids (iteration order is id
//! order, the universal tie-breaker downstream); edges are identified by
//! their index in document order and parallel edges are permitted.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::num::{format_rational, parse_rational, Rational};
use crate::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub cost: Rational,
}

/// Immutable planning instance. All accessors are read-only; operations that
/// "modify" a graph return a new value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    source: NodeId,
    target: NodeId,
    // derived, fixed at construction
    positions: BTreeMap<NodeId, usize>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    topo: Vec<NodeId>,
}

impl TaskGraph {
    /// Validates and indexes a graph: unique ascending node ids, existing
    /// endpoints, non-negative costs, acyclicity, `s != t`, at least one edge.
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>, source: NodeId, target: NodeId) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidGraph("need at least two nodes".into()));
        }
        if edges.is_empty() {
            return Err(Error::InvalidGraph("need at least one edge".into()));
        }
        if source == target {
            return Err(Error::InvalidGraph("source equals target".into()));
        }
        let mut positions = BTreeMap::new();
        for (pos, node) in nodes.iter().enumerate() {
            if positions.insert(node.id, pos).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate node id {}", node.id)));
            }
        }
        let sorted = nodes.windows(2).all(|w| w[0].id < w[1].id);
        if !sorted {
            return Err(Error::InvalidGraph("node ids must be ascending".into()));
        }
        if !positions.contains_key(&source) {
            return Err(Error::InvalidGraph(format!("source node {source} missing")));
        }
        if !positions.contains_key(&target) {
            return Err(Error::InvalidGraph(format!("target node {target} missing")));
        }
        let mut out_edges = vec![Vec::new(); nodes.len()];
        let mut in_edges = vec![Vec::new(); nodes.len()];
        for (idx, edge) in edges.iter().enumerate() {
            if edge.cost.is_negative() {
                return Err(Error::NegativeCost(idx));
            }
            let tail = *positions
                .get(&edge.tail)
                .ok_or_else(|| Error::InvalidGraph(format!("edge {idx} tail {} missing", edge.tail)))?;
            let head = *positions
                .get(&edge.head)
                .ok_or_else(|| Error::InvalidGraph(format!("edge {idx} head {} missing", edge.head)))?;
            if edge.tail == edge.head {
                return Err(Error::Cycle);
            }
            out_edges[tail].push(idx);
            in_edges[head].push(idx);
        }
        let graph = TaskGraph {
            topo: Vec::new(),
            positions,
            out_edges,
            in_edges,
            nodes,
            edges,
            source,
            target,
        };
        let topo = graph.compute_topo()?;
        Ok(TaskGraph { topo, ..graph })
    }

    /// Kahn's algorithm; ties resolved toward smaller node ids. Errors on
    /// cycles.
    fn compute_topo(&self) -> Result<Vec<NodeId>> {
        let n = self.nodes.len();
        let mut indegree: Vec<usize> = (0..n).map(|pos| self.in_edges[pos].len()).collect();
        let mut ready: std::collections::BTreeSet<NodeId> = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(pos, _)| indegree[*pos] == 0)
            .map(|(_, node)| node.id)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&id) = ready.iter().next() {
            ready.remove(&id);
            order.push(id);
            let pos = self.positions[&id];
            for &e in &self.out_edges[pos] {
                let head_pos = self.positions[&self.edges[e].head];
                indegree[head_pos] -= 1;
                if indegree[head_pos] == 0 {
                    ready.insert(self.edges[e].head);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Cycle);
        }
        Ok(order)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_node(&self, id: NodeId) -> bool {
        self.positions.contains_key(&id)
    }

    /// Position of a node id in the node array.
    pub fn position(&self, id: NodeId) -> usize {
        self.positions[&id]
    }

    /// Out-edges of a node, in edge-index order.
    pub fn out_edges(&self, id: NodeId) -> &[EdgeId] {
        &self.out_edges[self.positions[&id]]
    }

    pub fn in_edges(&self, id: NodeId) -> &[EdgeId] {
        &self.in_edges[self.positions[&id]]
    }

    /// Topological order of node ids.
    pub fn topo_order(&self) -> &[NodeId] {
        &self.topo
    }

    /// Display name of a node: its label when present, `#id` otherwise.
    pub fn node_name(&self, id: NodeId) -> String {
        match &self.nodes[self.positions[&id]].label {
            Some(label) if !label.is_empty() => label.clone(),
            _ => format!("#{id}"),
        }
    }

    /// Resolves a unique label to a node id.
    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        let mut found = None;
        for node in &self.nodes {
            if node.label.as_deref() == Some(label) {
                if found.is_some() {
                    return None;
                }
                found = Some(node.id);
            }
        }
        found
    }

    /// The unique edge `(tail, head)` if exactly one exists; a convenience
    /// valid only when there are no parallel edges between the pair.
    pub fn edge_between(&self, tail: NodeId, head: NodeId) -> Option<EdgeId> {
        let mut found = None;
        for &e in self.out_edges(tail) {
            if self.edges[e].head == head {
                if found.is_some() {
                    return None;
                }
                found = Some(e);
            }
        }
        found
    }

    fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.source];
        seen[self.positions[&self.source]] = true;
        while let Some(v) = stack.pop() {
            for &e in self.out_edges(v) {
                let head = self.edges[e].head;
                let pos = self.positions[&head];
                if !seen[pos] {
                    seen[pos] = true;
                    stack.push(head);
                }
            }
        }
        seen
    }

    fn coreachable_to_target(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.target];
        seen[self.positions[&self.target]] = true;
        while let Some(v) = stack.pop() {
            for &e in self.in_edges(v) {
                let tail = self.edges[e].tail;
                let pos = self.positions[&tail];
                if !seen[pos] {
                    seen[pos] = true;
                    stack.push(tail);
                }
            }
        }
        seen
    }

    /// A graph is normalized when every node lies on some `s`-`t` path.
    pub fn is_normalized(&self) -> bool {
        let fwd = self.reachable_from_source();
        let bwd = self.coreachable_to_target();
        fwd.iter().zip(bwd.iter()).all(|(f, b)| *f && *b)
    }

    /// Restricts the graph to nodes on some `s`-`t` path. Ids and relative
    /// orders of surviving nodes and edges are preserved; idempotent.
    pub fn normalize(&self) -> Result<TaskGraph> {
        Ok(self.normalize_mapped()?.0)
    }

    /// [`TaskGraph::normalize`] plus the edge index mapping (old -> new).
    pub fn normalize_mapped(&self) -> Result<(TaskGraph, Vec<Option<EdgeId>>)> {
        let fwd = self.reachable_from_source();
        if !fwd[self.positions[&self.target]] {
            return Err(Error::NoPath);
        }
        let bwd = self.coreachable_to_target();
        let keep: Vec<bool> = fwd.iter().zip(bwd.iter()).map(|(f, b)| *f && *b).collect();
        let nodes: Vec<Node> = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(pos, _)| keep[*pos])
            .map(|(_, n)| n.clone())
            .collect();
        let mut mapping = vec![None; self.edges.len()];
        let mut edges = Vec::new();
        for (idx, edge) in self.edges.iter().enumerate() {
            if keep[self.positions[&edge.tail]] && keep[self.positions[&edge.head]] {
                mapping[idx] = Some(edges.len());
                edges.push(edge.clone());
            }
        }
        let graph = TaskGraph::new(nodes, edges, self.source, self.target)?;
        Ok((graph, mapping))
    }

    /// The graph `G_c` with per-edge cost `c(e) + extra(e)`. Structure is
    /// unchanged.
    pub fn apply(&self, configuration: &CostConfiguration) -> Result<TaskGraph> {
        configuration.validate(self)?;
        let mut edges = self.edges.clone();
        for (&e, extra) in configuration.iter() {
            edges[e].cost += extra;
        }
        TaskGraph::new(self.nodes.clone(), edges, self.source, self.target)
    }
}

/// Penalty fees: a sparse map from edge index to non-negative extra cost.
/// Absent edges carry no extra cost.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CostConfiguration {
    extras: BTreeMap<EdgeId, Rational>,
}

impl CostConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, edge: EdgeId, extra: Rational) -> Result<()> {
        if extra.is_negative() {
            return Err(Error::Precondition(format!(
                "extra cost on edge {edge} must be non-negative"
            )));
        }
        if extra.is_zero() {
            self.extras.remove(&edge);
        } else {
            self.extras.insert(edge, extra);
        }
        Ok(())
    }

    pub fn get(&self, edge: EdgeId) -> Rational {
        self.extras.get(&edge).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EdgeId, &Rational)> {
        self.extras.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.extras.is_empty()
    }

    pub fn len(&self) -> usize {
        self.extras.len()
    }

    pub fn validate(&self, graph: &TaskGraph) -> Result<()> {
        for &e in self.extras.keys() {
            if e >= graph.edge_count() {
                return Err(Error::UnknownEdge(e));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Document formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NodeDoc {
    Label(Option<String>),
    Full { id: NodeId, label: Option<String> },
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
enum NodeRef {
    Id(NodeId),
    Label(String),
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
enum CostDoc {
    Int(i64),
    Str(String),
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    tail: NodeRef,
    head: NodeRef,
    cost: CostDoc,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    nodes: Vec<NodeDoc>,
    source: NodeRef,
    target: NodeRef,
    edges: Vec<EdgeDoc>,
}

fn parse_cost(doc: &CostDoc) -> Result<Rational> {
    match doc {
        CostDoc::Int(i) => Ok(Rational::from_integer((*i).into())),
        CostDoc::Str(s) => parse_rational(s),
    }
}

fn cost_doc(value: &Rational) -> CostDoc {
    use num_traits::ToPrimitive;
    if value.is_integer() {
        if let Some(i) = value.numer().to_i64() {
            return CostDoc::Int(i);
        }
    }
    CostDoc::Str(format_rational(value))
}

fn resolve_ref(
    node_ref: &NodeRef,
    by_label: &BTreeMap<&str, Vec<NodeId>>,
    ids: &std::collections::BTreeSet<NodeId>,
    what: &str,
) -> Result<NodeId> {
    match node_ref {
        NodeRef::Id(id) => {
            if ids.contains(id) {
                Ok(*id)
            } else {
                Err(Error::Parse(format!("{what}: unknown node id {id}")))
            }
        }
        NodeRef::Label(label) => match by_label.get(label.as_str()).map(Vec::as_slice) {
            Some([id]) => Ok(*id),
            Some(_) => Err(Error::Parse(format!("{what}: label {label:?} is ambiguous"))),
            None => Err(Error::Parse(format!("{what}: unknown node label {label:?}"))),
        },
    }
}

/// Parses the structured graph document. Costs are read exactly from integer
/// or `"p/q"` literals; the document is rejected on negative costs, cycles,
/// or missing terminals.
pub fn parse_graph(text: &str) -> Result<TaskGraph> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph document: {e}")))?;
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for (pos, node_doc) in doc.nodes.iter().enumerate() {
        let node = match node_doc {
            NodeDoc::Label(label) => Node {
                id: pos,
                label: label.clone().filter(|l| !l.is_empty()),
            },
            NodeDoc::Full { id, label } => Node {
                id: *id,
                label: label.clone().filter(|l| !l.is_empty()),
            },
        };
        nodes.push(node);
    }
    let ids: std::collections::BTreeSet<NodeId> = nodes.iter().map(|n| n.id).collect();
    let mut by_label: BTreeMap<&str, Vec<NodeId>> = BTreeMap::new();
    for node in &nodes {
        if let Some(label) = &node.label {
            by_label.entry(label.as_str()).or_default().push(node.id);
        }
    }
    let source = resolve_ref(&doc.source, &by_label, &ids, "source")?;
    let target = resolve_ref(&doc.target, &by_label, &ids, "target")?;
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (idx, edge_doc) in doc.edges.iter().enumerate() {
        let tail = resolve_ref(&edge_doc.tail, &by_label, &ids, &format!("edge {idx} tail"))?;
        let head = resolve_ref(&edge_doc.head, &by_label, &ids, &format!("edge {idx} head"))?;
        let cost = parse_cost(&edge_doc.cost)?;
        if cost.is_negative() {
            return Err(Error::Parse(format!("edge {idx}: negative cost")));
        }
        edges.push(Edge { tail, head, cost });
    }
    TaskGraph::new(nodes, edges, source, target)
}

/// Serializes a graph so that [`parse_graph`] reproduces it exactly,
/// including ids, orders and parallel edges. Rationals are written in lowest
/// terms.
pub fn serialize_graph(graph: &TaskGraph) -> String {
    let contiguous = graph.nodes().iter().enumerate().all(|(pos, n)| n.id == pos);
    let nodes: Vec<NodeDoc> = graph
        .nodes()
        .iter()
        .map(|n| {
            if contiguous {
                NodeDoc::Label(n.label.clone())
            } else {
                NodeDoc::Full {
                    id: n.id,
                    label: n.label.clone(),
                }
            }
        })
        .collect();
    let node_ref = |id: NodeId| -> NodeRef {
        match &graph.nodes()[graph.position(id)].label {
            Some(label) if graph.node_by_label(label) == Some(id) => NodeRef::Label(label.clone()),
            _ => NodeRef::Id(id),
        }
    };
    let edges: Vec<EdgeDoc> = graph
        .edges()
        .iter()
        .map(|e| EdgeDoc {
            tail: node_ref(e.tail),
            head: node_ref(e.head),
            cost: cost_doc(&e.cost),
        })
        .collect();
    let doc = GraphDoc {
        nodes,
        source: node_ref(graph.source()),
        target: node_ref(graph.target()),
        edges,
    };
    serde_json::to_string_pretty(&doc).expect("graph document serialization")
}

#[derive(Serialize, Deserialize)]
struct ConfigEntryDoc {
    edge: EdgeId,
    extra: CostDoc,
}

/// Parses a cost configuration document: a list of `{edge, extra}` records.
pub fn parse_configuration(text: &str) -> Result<CostConfiguration> {
    let entries: Vec<ConfigEntryDoc> = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("configuration document: {e}")))?;
    let mut configuration = CostConfiguration::new();
    for entry in entries {
        let extra = parse_cost(&entry.extra)?;
        if extra.is_negative() {
            return Err(Error::Parse(format!("edge {}: negative extra", entry.edge)));
        }
        configuration.set(entry.edge, extra)?;
    }
    Ok(configuration)
}

pub fn serialize_configuration(configuration: &CostConfiguration) -> String {
    let entries: Vec<ConfigEntryDoc> = configuration
        .iter()
        .map(|(&edge, extra)| ConfigEntryDoc {
            edge,
            extra: cost_doc(extra),
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("configuration document serialization")
}
