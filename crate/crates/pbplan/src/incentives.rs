//! Constructive incentive algorithms.
//!
//! The approximation algorithms keep the agent on two kinds of edges: a
//! bottleneck-optimal ("minmax") path `P` evaluated at `b = min B`, and a
//! cheapest-path successor tree `T`. Every other edge is blocked outright;
//! tree edges leaving `P` are surcharged with the most expensive original
//! edge cost of the tree segment they open. The uncertain variant certifies
//! reward `2*alpha/b`, the variable variant `(1+tau)*alpha/b`, both against
//! the lower bound `alpha/b`.
//!
//! For occasionally unbiased agents (`1 in B`) the critical-node-set
//! recursion decides exactly whether a motivating configuration exists at a
//! given reward, and a binary search with candidate snapping recovers the
//! optimal reward.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::agent::{
    cheapest_costs, is_motivating_uncertain, is_motivating_variable, perceived_edge_cost, Verdict,
};
use crate::bias::BiasSet;
use crate::graph::{CostConfiguration, EdgeId, NodeId, TaskGraph};
use crate::num::{format_rational, rat_int, Rational};
use crate::{Error, Result};

/// Bottleneck-optimal `s`-`t` path under perceived edge costs at a fixed
/// bias.
#[derive(Clone, Debug)]
pub struct MinmaxResult {
    pub path_nodes: Vec<NodeId>,
    pub path_edges: Vec<EdgeId>,
    /// Maximum perceived edge cost along the path; `alpha / b` lower-bounds
    /// the reward any configuration needs at bias `b`.
    pub alpha: Rational,
}

/// One cheapest-path successor per node `v != t`; the edge set `T`.
#[derive(Clone, Debug)]
pub struct SuccessorTree {
    chosen: BTreeMap<NodeId, EdgeId>,
}

impl SuccessorTree {
    pub fn edge(&self, node: NodeId) -> Option<EdgeId> {
        self.chosen.get(&node).copied()
    }

    pub fn successor(&self, graph: &TaskGraph, node: NodeId) -> Option<NodeId> {
        self.edge(node).map(|e| graph.edge(e).head)
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.chosen.values().copied().collect()
    }
}

/// Minmax path w.r.t. `d_b(e)`: minimizes the maximum perceived edge cost of
/// an `s`-`t` path. Ties resolved toward the smallest successor id, then the
/// smallest edge index.
pub fn minmax_path(graph: &TaskGraph, b: &Rational) -> Result<MinmaxResult> {
    if !b.is_positive() || b > &Rational::one() {
        return Err(Error::Precondition(format!(
            "bias {} outside (0, 1]",
            format_rational(b)
        )));
    }
    let distances = cheapest_costs(graph)?;
    // bottleneck[v] = smallest achievable max perceived edge cost from v to t
    let mut bottleneck: BTreeMap<NodeId, Rational> = BTreeMap::new();
    let mut choice: BTreeMap<NodeId, EdgeId> = BTreeMap::new();
    for &v in graph.topo_order().iter().rev() {
        if v == graph.target() {
            continue;
        }
        let mut best: Option<(Rational, NodeId, EdgeId)> = None;
        for &e in graph.out_edges(v) {
            let head = graph.edge(e).head;
            let weight = perceived_edge_cost(graph, &distances, b, e);
            let value = match bottleneck.get(&head) {
                Some(rest) if *rest > weight => rest.clone(),
                _ => weight,
            };
            let candidate = (value, head, e);
            if best.as_ref().is_none_or(|current| candidate < *current) {
                best = Some(candidate);
            }
        }
        let (value, _, edge) = best.expect("normalized graph: every v != t has an out-edge");
        bottleneck.insert(v, value);
        choice.insert(v, edge);
    }
    let mut path_nodes = vec![graph.source()];
    let mut path_edges = Vec::new();
    let mut v = graph.source();
    while v != graph.target() {
        let e = choice[&v];
        path_edges.push(e);
        v = graph.edge(e).head;
        path_nodes.push(v);
    }
    Ok(MinmaxResult {
        path_nodes,
        path_edges,
        alpha: bottleneck[&graph.source()].clone(),
    })
}

/// One successor per node starting a cheapest path to `t`:
/// `c(v, sigma(v)) + d(sigma(v)) = d(v)`. Ties resolved toward the smallest
/// successor id, then the smallest edge index.
pub fn cheapest_successor_tree(graph: &TaskGraph) -> Result<SuccessorTree> {
    let distances = cheapest_costs(graph)?;
    let mut chosen = BTreeMap::new();
    for node in graph.nodes() {
        if node.id == graph.target() {
            continue;
        }
        let mut best: Option<(Rational, NodeId, EdgeId)> = None;
        for &e in graph.out_edges(node.id) {
            let edge = graph.edge(e);
            let value = &edge.cost + distances.get(graph, edge.head);
            let candidate = (value, edge.head, e);
            if best.as_ref().is_none_or(|current| candidate < *current) {
                best = Some(candidate);
            }
        }
        let (value, _, edge) = best.expect("normalized graph: every v != t has an out-edge");
        debug_assert_eq!(&value, distances.get(graph, node.id));
        chosen.insert(node.id, edge);
    }
    Ok(SuccessorTree { chosen })
}

/// Output of the approximation algorithms: the configuration plus its
/// certified reward and the matching lower bound `alpha / b`.
#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub configuration: CostConfiguration,
    pub reward: Rational,
    pub lower: Rational,
    pub alpha: Rational,
    pub minmax: MinmaxResult,
}

fn approx_with(
    graph: &TaskGraph,
    set: &BiasSet,
    blocking: impl Fn(&Rational, &Rational) -> Rational,
    surcharge_factor: &Rational,
    reward: impl Fn(&Rational, &Rational) -> Rational,
) -> Result<ApproxResult> {
    let b = set.min();
    let minmax = minmax_path(graph, b)?;
    let alpha = minmax.alpha.clone();
    let tree = cheapest_successor_tree(graph)?;
    let path_edge_set: BTreeSet<EdgeId> = minmax.path_edges.iter().copied().collect();
    let path_node_set: BTreeSet<NodeId> = minmax.path_nodes.iter().copied().collect();
    let tree_edge_set = tree.edge_set();

    let mut configuration = CostConfiguration::new();
    let block = blocking(&alpha, b);
    for e in 0..graph.edge_count() {
        if !path_edge_set.contains(&e) && !tree_edge_set.contains(&e) {
            configuration.set(e, block.clone())?;
        }
    }
    for &v in &minmax.path_nodes {
        if v == graph.target() {
            continue;
        }
        let tree_edge = tree.edge(v).expect("tree covers every v != t");
        let first_head = graph.edge(tree_edge).head;
        if path_node_set.contains(&first_head) {
            continue;
        }
        // walk the sigma-path from v to its first reintersection u with P,
        // tracking the most expensive original edge of the segment
        let mut most_expensive = graph.edge(tree_edge).cost.clone();
        let mut current = first_head;
        while !path_node_set.contains(&current) {
            let e = tree.edge(current).expect("sigma-path reaches t inside the tree");
            if graph.edge(e).cost > most_expensive {
                most_expensive = graph.edge(e).cost.clone();
            }
            current = graph.edge(e).head;
        }
        configuration.set(tree_edge, surcharge_factor * most_expensive)?;
    }
    Ok(ApproxResult {
        configuration,
        reward: reward(&alpha, b),
        lower: &alpha / b,
        alpha,
        minmax,
    })
}

/// 2-approximation for an uncertain fixed bias: blocks non-`P`/`T` edges at
/// `2*alpha/b + 1`, surcharges tree edges leaving `P` with the segment's most
/// expensive original edge cost, and certifies reward `2*alpha/b`.
pub fn uncertain_approx(graph: &TaskGraph, set: &BiasSet) -> Result<ApproxResult> {
    approx_with(
        graph,
        set,
        |alpha, b| rat_int(2) * alpha / b + Rational::one(),
        &Rational::one(),
        |alpha, b| rat_int(2) * alpha / b,
    )
}

/// `(1 + tau)`-approximation for a variable bias: blocking cost
/// `(1+tau)*alpha/b + 1` and surcharges scaled by `tau`, certifying reward
/// `(1+tau)*alpha/b`.
pub fn variable_approx(graph: &TaskGraph, set: &BiasSet) -> Result<ApproxResult> {
    let tau = set.tau();
    let factor = Rational::one() + &tau;
    approx_with(
        graph,
        set,
        |alpha, b| &factor * alpha / b + Rational::one(),
        &tau,
        |alpha, b| &factor * alpha / b,
    )
}

/// Result of the critical-node-set recursion. `delta(v)` is the cheapest
/// cost of a `v`-`t` path whose every prefix edge stays affordable at
/// `b = min B`; infeasible nodes carry no entry.
#[derive(Clone, Debug)]
pub struct CnsTable {
    delta: BTreeMap<NodeId, Rational>,
    pub feasible: bool,
}

impl CnsTable {
    pub fn delta(&self, node: NodeId) -> Option<&Rational> {
        self.delta.get(&node)
    }

    /// Witness set `W`: the nodes with finite delta.
    pub fn witness(&self) -> BTreeSet<NodeId> {
        self.delta.keys().copied().collect()
    }
}

/// Decides whether a critical node set exists at reward `r` for an
/// occasionally unbiased agent (`1 in B`). In reverse topological order,
/// admits the out-edges `(v, w)` with `c(v,w) + b*delta(w) <= b*r` and sets
/// `delta(v)` to the cheapest admitted continuation. Feasible iff
/// `delta(s)` is finite, which happens iff a configuration motivating for
/// all bias configurations over `B` exists at reward `r`.
pub fn decide_cns(graph: &TaskGraph, set: &BiasSet, reward: &Rational) -> Result<CnsTable> {
    if !set.contains_one() {
        return Err(Error::Precondition(
            "critical node sets need an occasionally unbiased agent (1 in B)".into(),
        ));
    }
    if reward.is_negative() {
        return Err(Error::Precondition("reward must be non-negative".into()));
    }
    if !graph.is_normalized() {
        return Err(Error::Precondition("graph is not normalized".into()));
    }
    let b = set.min();
    let bound = b * reward;
    let mut delta: BTreeMap<NodeId, Rational> = BTreeMap::new();
    delta.insert(graph.target(), Rational::zero());
    for &v in graph.topo_order().iter().rev() {
        if v == graph.target() {
            continue;
        }
        let mut best: Option<Rational> = None;
        for &e in graph.out_edges(v) {
            let edge = graph.edge(e);
            let Some(dw) = delta.get(&edge.head) else {
                continue;
            };
            if &edge.cost + b * dw <= bound {
                let candidate = &edge.cost + dw;
                if best.as_ref().is_none_or(|current| candidate < *current) {
                    best = Some(candidate);
                }
            }
        }
        if let Some(value) = best {
            delta.insert(v, value);
        }
    }
    let feasible = delta.contains_key(&graph.source());
    Ok(CnsTable { delta, feasible })
}

/// Fences the witness set of a feasible [`decide_cns`] run: every edge
/// leaving `W` gets extra cost `r + 1`, everything else stays free. The
/// result is motivating for all bias configurations over `B` at reward `r`.
pub fn cns_configuration(
    graph: &TaskGraph,
    witness: &BTreeSet<NodeId>,
    reward: &Rational,
) -> Result<CostConfiguration> {
    if !witness.contains(&graph.source()) {
        return Err(Error::Precondition(
            "witness set is infeasible: source not contained".into(),
        ));
    }
    if !witness.contains(&graph.target()) {
        return Err(Error::Precondition(
            "witness set is infeasible: target not contained".into(),
        ));
    }
    let fee = reward + Rational::one();
    let mut configuration = CostConfiguration::new();
    for e in 0..graph.edge_count() {
        let edge = graph.edge(e);
        if witness.contains(&edge.tail) && !witness.contains(&edge.head) {
            configuration.set(e, fee.clone())?;
        }
    }
    Ok(configuration)
}

/// Bracket for the optimal occasionally-unbiased reward, with the exact
/// threshold when the search snapped to a candidate value.
#[derive(Clone, Debug)]
pub struct CnsThreshold {
    /// Infeasible at `lo` (unless the threshold is 0), feasible at `hi`.
    pub lo: Rational,
    pub hi: Rational,
    /// Exact minimal feasible reward, when identified.
    pub exact: Option<Rational>,
}

/// Binary search over the monotone feasibility of [`decide_cns`], narrowing
/// to `tol` and then snapping to the finite candidate set
/// `(c(v,w) + b*delta(w)) / b`.
pub fn cns_threshold(graph: &TaskGraph, set: &BiasSet, tol: &Rational) -> Result<CnsThreshold> {
    if !tol.is_positive() {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let feasible = |r: &Rational| -> Result<bool> { Ok(decide_cns(graph, set, r)?.feasible) };
    if feasible(&Rational::zero())? {
        return Ok(CnsThreshold {
            lo: Rational::zero(),
            hi: Rational::zero(),
            exact: Some(Rational::zero()),
        });
    }
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    while !feasible(&hi)? {
        lo = hi.clone();
        hi = &hi * rat_int(2);
    }
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / rat_int(2);
        if feasible(&mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // snap: candidate rewards arising from the feasible-side recursion
    let table = decide_cns(graph, set, &hi)?;
    let b = set.min();
    let mut candidates: BTreeSet<Rational> = BTreeSet::new();
    for e in 0..graph.edge_count() {
        let edge = graph.edge(e);
        if let Some(dw) = table.delta(edge.head) {
            candidates.insert((&edge.cost + b * dw) / b);
        }
    }
    for candidate in candidates {
        if candidate <= lo || candidate > hi {
            continue;
        }
        if feasible(&candidate)? {
            return Ok(CnsThreshold {
                lo,
                hi: candidate.clone(),
                exact: Some(candidate),
            });
        }
        lo = candidate;
    }
    Ok(CnsThreshold { lo, hi, exact: None })
}

/// Which verifier a sweep certifies against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Uncertain,
    Variable,
}

/// Exhaustive grid sweep over configurations supported on at most three
/// edges: returns whether some grid point passes the selected verifier at
/// reward `r`. A nonexistence answer is exhaustive over the grid but proves
/// nothing off the listed edges or between grid points.
#[allow(clippy::too_many_arguments)]
pub fn sweep_configurations(
    graph: &TaskGraph,
    edges: &[EdgeId],
    grid: &Rational,
    cap: &Rational,
    set: &BiasSet,
    reward: &Rational,
    mode: SweepMode,
    budget: u128,
) -> Result<bool> {
    if edges.len() > 3 {
        return Err(Error::Precondition(
            "sweep supports at most three edges".into(),
        ));
    }
    for &e in edges {
        if e >= graph.edge_count() {
            return Err(Error::UnknownEdge(e));
        }
    }
    if !grid.is_positive() {
        return Err(Error::Precondition("grid step must be positive".into()));
    }
    if cap.is_negative() {
        return Err(Error::Precondition("cap must be non-negative".into()));
    }
    let steps = (cap / grid).floor();
    let per_edge: u128 = crate::num::integer_value(&steps)? as u128 + 1;
    let needed = per_edge.pow(edges.len() as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut counters = vec![0u128; edges.len()];
    loop {
        let mut configuration = CostConfiguration::new();
        for (slot, &e) in edges.iter().enumerate() {
            let extra = grid * rat_int(counters[slot] as i64);
            configuration.set(e, extra)?;
        }
        let configured = graph.apply(&configuration)?;
        let verdict: Verdict = match mode {
            SweepMode::Uncertain => is_motivating_uncertain(&configured, set, reward)?,
            SweepMode::Variable => is_motivating_variable(&configured, set, reward)?,
        };
        if verdict.motivating {
            return Ok(true);
        }
        // odometer increment
        let mut slot = 0;
        loop {
            if slot == counters.len() {
                return Ok(false);
            }
            counters[slot] += 1;
            if counters[slot] < per_edge {
                break;
            }
            counters[slot] = 0;
            slot += 1;
        }
    }
}
