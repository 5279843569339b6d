//! Agent semantics and motivation verification.
//!
//! At a node `v` the agent perceives an out-edge `(v, w)` to cost
//! `c(v,w) + beta * d(w)` and is willing to traverse exactly the edges
//! achieving the minimum. She proceeds only while that minimum is covered by
//! her perceived reward `beta * r`; the graph is motivating when no
//! constructible walk ever leaves her unmotivated, under any tie-breaking.
//!
//! Three verifiers are provided: a fixed bias, an uncertain-but-fixed bias in
//! a set `B` (checked on the finite critical subset `B'`), and a bias varying
//! per node within `B` (checked at `min B` on the variable reach).

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bias::{BiasInterval, BiasSet};
use crate::graph::{EdgeId, NodeId, TaskGraph};
use crate::num::{decimal_string, format_rational, Rational};
use crate::{Error, Result};

/// Cost of a cheapest path from each node to `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    dist: Vec<Rational>,
}

impl DistanceTable {
    pub fn get(&self, graph: &TaskGraph, node: NodeId) -> &Rational {
        &self.dist[graph.position(node)]
    }
}

/// Out-edges minimizing the perceived cost at each node, ties preserved.
#[derive(Clone, Debug)]
pub struct PreferenceProfile {
    pub beta: Rational,
    entries: BTreeMap<NodeId, ProfileEntry>,
}

#[derive(Clone, Debug)]
pub struct ProfileEntry {
    /// Minimizing out-edges in edge-index order; non-empty for every `v != t`.
    pub edges: Vec<EdgeId>,
    /// The minimum perceived cost `d_beta(v)`.
    pub perceived: Rational,
}

impl PreferenceProfile {
    pub fn entry(&self, node: NodeId) -> Option<&ProfileEntry> {
        self.entries.get(&node)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, &ProfileEntry)> {
        self.entries.iter()
    }
}

/// A node where motivation fails, with the bias it fails at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub node: NodeId,
    pub beta: Rational,
    /// Minimum perceived cost `d_beta(node)`.
    pub perceived: Rational,
    /// Perceived reward `beta * r` it exceeds.
    pub bound: Rational,
}

/// Outcome of a motivation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub motivating: bool,
    /// Violating nodes in (node id, beta) order; empty iff motivating.
    pub witnesses: Vec<Witness>,
    /// Exact minimal motivating reward for the queried model, when defined.
    pub required_reward: Option<Rational>,
}

fn check_normalized(graph: &TaskGraph) -> Result<()> {
    if !graph.is_normalized() {
        return Err(Error::Precondition("graph is not normalized".into()));
    }
    Ok(())
}

fn check_beta(beta: &Rational) -> Result<()> {
    if !beta.is_positive() || beta > &Rational::one() {
        return Err(Error::Precondition(format!(
            "bias {} outside (0, 1]",
            format_rational(beta)
        )));
    }
    Ok(())
}

fn check_reward(reward: &Rational) -> Result<()> {
    if reward.is_negative() {
        return Err(Error::Precondition("reward must be non-negative".into()));
    }
    Ok(())
}

/// Exact cheapest-path costs to `t`, by backward dynamic programming over
/// reverse topological order. The graph must be normalized, which guarantees
/// finiteness at every node.
pub fn cheapest_costs(graph: &TaskGraph) -> Result<DistanceTable> {
    check_normalized(graph)?;
    let mut dist: Vec<Option<Rational>> = vec![None; graph.node_count()];
    dist[graph.position(graph.target())] = Some(Rational::zero());
    for &v in graph.topo_order().iter().rev() {
        if v == graph.target() {
            continue;
        }
        let mut best: Option<Rational> = None;
        for &e in graph.out_edges(v) {
            let edge = graph.edge(e);
            let head = dist[graph.position(edge.head)]
                .as_ref()
                .expect("normalized graph: head is processed before tail");
            let candidate = &edge.cost + head;
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        dist[graph.position(v)] = Some(best.expect("normalized graph: every v != t has an out-edge"));
    }
    Ok(DistanceTable {
        dist: dist.into_iter().map(Option::unwrap).collect(),
    })
}

/// Perceived cost `d_beta(e) = c(e) + beta * d(head(e))`.
pub fn perceived_edge_cost(
    graph: &TaskGraph,
    distances: &DistanceTable,
    beta: &Rational,
    edge: EdgeId,
) -> Rational {
    let e = graph.edge(edge);
    &e.cost + beta * distances.get(graph, e.head)
}

/// The exact set of minimizing out-edges at each node `v != t`, ties
/// preserved.
pub fn preference_profile(
    graph: &TaskGraph,
    distances: &DistanceTable,
    beta: &Rational,
) -> PreferenceProfile {
    let mut entries = BTreeMap::new();
    for node in graph.nodes() {
        if node.id == graph.target() {
            continue;
        }
        let mut best: Option<Rational> = None;
        let mut edges: Vec<EdgeId> = Vec::new();
        for &e in graph.out_edges(node.id) {
            let value = perceived_edge_cost(graph, distances, beta, e);
            match &best {
                Some(current) if value > *current => {}
                Some(current) if value == *current => edges.push(e),
                _ => {
                    best = Some(value);
                    edges = vec![e];
                }
            }
        }
        entries.insert(
            node.id,
            ProfileEntry {
                edges,
                perceived: best.expect("normalized graph: every v != t has an out-edge"),
            },
        );
    }
    PreferenceProfile {
        beta: beta.clone(),
        entries,
    }
}

/// Closure of `{s}` under preference-profile edges: exactly the nodes the
/// agent may occupy under some tie-breaking, independent of the reward.
pub fn reachable_nodes_fixed(graph: &TaskGraph, beta: &Rational) -> Result<BTreeSet<NodeId>> {
    check_beta(beta)?;
    let distances = cheapest_costs(graph)?;
    let profile = preference_profile(graph, &distances, beta);
    Ok(profile_closure(graph, &profile))
}

fn profile_closure(graph: &TaskGraph, profile: &PreferenceProfile) -> BTreeSet<NodeId> {
    let mut reached = BTreeSet::new();
    reached.insert(graph.source());
    let mut stack = vec![graph.source()];
    while let Some(v) = stack.pop() {
        if v == graph.target() {
            continue;
        }
        if let Some(entry) = profile.entry(v) {
            for &e in &entry.edges {
                let head = graph.edge(e).head;
                if reached.insert(head) {
                    stack.push(head);
                }
            }
        }
    }
    reached
}

/// Exact minimal reward motivating an agent with fixed bias `beta`:
/// the maximum of `d_beta(v) / beta` over her reachable nodes.
pub fn required_reward_fixed(graph: &TaskGraph, beta: &Rational) -> Result<Rational> {
    check_beta(beta)?;
    let distances = cheapest_costs(graph)?;
    let profile = preference_profile(graph, &distances, beta);
    let reached = profile_closure(graph, &profile);
    Ok(required_from_profile(graph, &profile, &reached))
}

fn required_from_profile(
    graph: &TaskGraph,
    profile: &PreferenceProfile,
    reached: &BTreeSet<NodeId>,
) -> Rational {
    let mut required = Rational::zero();
    for &v in reached {
        if v == graph.target() {
            continue;
        }
        let needed = &profile.entry(v).expect("reached node has profile").perceived / &profile.beta;
        if needed > required {
            required = needed;
        }
    }
    required
}

/// Fixed-bias verdict: motivating iff `r >= required_reward_fixed`, with one
/// witness per reachable node violating `d_beta(v) <= beta * r`.
pub fn is_motivating_fixed(graph: &TaskGraph, beta: &Rational, reward: &Rational) -> Result<Verdict> {
    check_beta(beta)?;
    check_reward(reward)?;
    let distances = cheapest_costs(graph)?;
    let profile = preference_profile(graph, &distances, beta);
    let reached = profile_closure(graph, &profile);
    let bound = beta * reward;
    let mut witnesses = Vec::new();
    for &v in &reached {
        if v == graph.target() {
            continue;
        }
        let perceived = &profile.entry(v).expect("reached node has profile").perceived;
        if *perceived > bound {
            witnesses.push(Witness {
                node: v,
                beta: beta.clone(),
                perceived: perceived.clone(),
                bound: bound.clone(),
            });
        }
    }
    let required = required_from_profile(graph, &profile, &reached);
    Ok(Verdict {
        motivating: witnesses.is_empty(),
        witnesses,
        required_reward: Some(required),
    })
}

/// The closed interval of biases for which `edge` is among the preferred
/// out-edges of its tail: the betas where its perceived-cost line lies on
/// the lower envelope of the sibling line arrangement. Possibly empty.
pub fn preference_interval(
    graph: &TaskGraph,
    distances: &DistanceTable,
    edge: EdgeId,
) -> BiasInterval {
    let e = graph.edge(edge);
    let cost = &e.cost;
    let head_dist = distances.get(graph, e.head);
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    for &other in graph.out_edges(e.tail) {
        if other == edge {
            continue;
        }
        let o = graph.edge(other);
        // c + beta*d <= c' + beta*d'  <=>  (c - c') + beta*(d - d') <= 0
        let offset = cost - &o.cost;
        let slope = head_dist - distances.get(graph, o.head);
        if slope.is_zero() {
            if offset.is_positive() {
                return BiasInterval::empty();
            }
        } else {
            let crossing = -offset / &slope;
            if slope.is_positive() {
                if crossing < hi {
                    hi = crossing;
                }
            } else if crossing > lo {
                lo = crossing;
            }
        }
        if lo > hi {
            return BiasInterval::empty();
        }
    }
    BiasInterval::clamped(lo, hi)
}

/// The finite critical subset `B'`: for every edge whose preference interval
/// meets `B`, the minimum of the intersection. Checking motivation on `B'`
/// certifies all of `B`; at most one value per edge.
pub fn critical_bias_subset(graph: &TaskGraph, set: &BiasSet) -> Result<Vec<Rational>> {
    check_normalized(graph)?;
    let distances = cheapest_costs(graph)?;
    let mut out = BTreeSet::new();
    for e in 0..graph.edge_count() {
        let interval = preference_interval(graph, &distances, e);
        if let Some(min) = set.intersection_min(&interval) {
            out.insert(min);
        }
    }
    Ok(out.into_iter().collect())
}

/// Uncertain-bias verdict: motivating for every fixed `beta` in `B` iff
/// motivating for every `beta` in the critical subset `B'`.
pub fn is_motivating_uncertain(
    graph: &TaskGraph,
    set: &BiasSet,
    reward: &Rational,
) -> Result<Verdict> {
    check_reward(reward)?;
    let critical = critical_bias_subset(graph, set)?;
    let mut witnesses = Vec::new();
    let mut required = Rational::zero();
    for beta in &critical {
        let verdict = is_motivating_fixed(graph, beta, reward)?;
        witnesses.extend(verdict.witnesses);
        if let Some(req) = verdict.required_reward {
            if req > required {
                required = req;
            }
        }
    }
    witnesses.sort_by(|a, b| (a.node, &a.beta).cmp(&(b.node, &b.beta)));
    Ok(Verdict {
        motivating: witnesses.is_empty(),
        witnesses,
        required_reward: Some(required),
    })
}

/// The edges a variable-bias agent might prefer somewhere in `B`, and the
/// nodes she can reach through them.
pub fn variable_reach(
    graph: &TaskGraph,
    set: &BiasSet,
) -> Result<(BTreeSet<EdgeId>, BTreeSet<NodeId>)> {
    check_normalized(graph)?;
    let distances = cheapest_costs(graph)?;
    let mut edges = BTreeSet::new();
    for e in 0..graph.edge_count() {
        let interval = preference_interval(graph, &distances, e);
        if set.intersection_min(&interval).is_some() {
            edges.insert(e);
        }
    }
    let mut nodes = BTreeSet::new();
    nodes.insert(graph.source());
    let mut stack = vec![graph.source()];
    while let Some(v) = stack.pop() {
        for &e in graph.out_edges(v) {
            if !edges.contains(&e) {
                continue;
            }
            let head = graph.edge(e).head;
            if nodes.insert(head) {
                stack.push(head);
            }
        }
    }
    Ok((edges, nodes))
}

/// Variable-bias verdict: motivating for every present bias configuration in
/// `B^V` iff every node of the variable reach satisfies `d_b(v) <= b * r`
/// with `b = min B`, which dominates the requirement at every other bias.
pub fn is_motivating_variable(
    graph: &TaskGraph,
    set: &BiasSet,
    reward: &Rational,
) -> Result<Verdict> {
    check_reward(reward)?;
    let (_, nodes) = variable_reach(graph, set)?;
    let b = set.min();
    let distances = cheapest_costs(graph)?;
    let profile = preference_profile(graph, &distances, b);
    let bound = b * reward;
    let mut witnesses = Vec::new();
    let mut required = Rational::zero();
    for &v in &nodes {
        if v == graph.target() {
            continue;
        }
        let perceived = &profile.entry(v).expect("normalized graph").perceived;
        let needed = perceived / b;
        if needed > required {
            required = needed;
        }
        if *perceived > bound {
            witnesses.push(Witness {
                node: v,
                beta: b.clone(),
                perceived: perceived.clone(),
                bound: bound.clone(),
            });
        }
    }
    Ok(Verdict {
        motivating: witnesses.is_empty(),
        witnesses,
        required_reward: Some(required),
    })
}

#[derive(Serialize)]
struct WitnessDoc {
    node: NodeId,
    name: String,
    beta: String,
    beta_decimal: String,
    perceived: String,
    perceived_decimal: String,
    bound: String,
    bound_decimal: String,
}

#[derive(Serialize)]
struct VerdictDoc {
    motivating: bool,
    witnesses: Vec<WitnessDoc>,
    required_reward: Option<String>,
    required_reward_decimal: Option<String>,
}

/// Structured report for a verdict, rationals as `"p/q"` plus a decimal
/// rendering.
pub fn verdict_report(graph: &TaskGraph, verdict: &Verdict) -> String {
    let doc = VerdictDoc {
        motivating: verdict.motivating,
        witnesses: verdict
            .witnesses
            .iter()
            .map(|w| WitnessDoc {
                node: w.node,
                name: graph.node_name(w.node),
                beta: format_rational(&w.beta),
                beta_decimal: decimal_string(&w.beta),
                perceived: format_rational(&w.perceived),
                perceived_decimal: decimal_string(&w.perceived),
                bound: format_rational(&w.bound),
                bound_decimal: decimal_string(&w.bound),
            })
            .collect(),
        required_reward: verdict.required_reward.as_ref().map(format_rational),
        required_reward_decimal: verdict.required_reward.as_ref().map(decimal_string),
    };
    serde_json::to_string_pretty(&doc).expect("verdict serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{alice_bob_biases, gen_alice_bob, gen_pov_family};
    use crate::graph::parse_graph;
    use crate::num::{rat, rat_int};

    const EPS_DEN: i64 = 54;

    fn alice_bob() -> TaskGraph {
        gen_alice_bob(&rat(1, EPS_DEN)).unwrap()
    }

    fn biases() -> (Rational, Rational) {
        alice_bob_biases(&rat(1, EPS_DEN))
    }

    fn single_edge(cost: i64) -> TaskGraph {
        parse_graph(&format!(
            r#"{{"nodes": ["s", "t"], "source": "s", "target": "t",
                 "edges": [{{"tail": "s", "head": "t", "cost": {cost}}}]}}"#
        ))
        .unwrap()
    }

    // node ids in the running scenario
    const S: NodeId = 0;
    const V_A: NodeId = 1;
    const V_B: NodeId = 2;
    const V_AA: NodeId = 3;
    const V_AB: NodeId = 4;
    const T: NodeId = 6;

    #[test]
    fn cheapest_costs_single_edge() {
        let g = single_edge(5);
        let dt = cheapest_costs(&g).unwrap();
        assert_eq!(dt.get(&g, 0), &rat_int(5));
        assert_eq!(dt.get(&g, 1), &rat_int(0));
    }

    #[test]
    fn cheapest_costs_running_scenario() {
        let g = alice_bob();
        let dt = cheapest_costs(&g).unwrap();
        assert_eq!(dt.get(&g, V_A), &rat_int(14));
        assert_eq!(dt.get(&g, V_B), &rat_int(10));
        assert_eq!(dt.get(&g, S), &rat_int(13));
    }

    #[test]
    fn cheapest_costs_pov_family() {
        // first shortcut beats the long main path: 2 + 1/a
        let g = gen_pov_family(&rat(1, 4)).unwrap();
        let dt = cheapest_costs(&g).unwrap();
        assert_eq!(dt.get(&g, 0), &rat_int(6));
    }

    #[test]
    fn perceived_costs_running_scenario() {
        let g = alice_bob();
        let dt = cheapest_costs(&g).unwrap();
        let (a, _) = biases();
        // 1 + a(1 + 13) = 8 - 14eps
        assert_eq!(
            perceived_edge_cost(&g, &dt, &a, 0),
            rat_int(8) - rat(14, EPS_DEN)
        );
        // unbiased perception is plain cost-to-go
        assert_eq!(
            perceived_edge_cost(&g, &dt, &rat_int(1), 0),
            rat_int(1) + dt.get(&g, V_A)
        );
        // edges into t cost their own cost at any bias
        assert_eq!(perceived_edge_cost(&g, &dt, &rat(1, 7), 6), rat_int(13));
    }

    #[test]
    fn preference_profiles_running_scenario() {
        let g = alice_bob();
        let dt = cheapest_costs(&g).unwrap();
        let (a, b) = biases();
        // Bob switches to the mixed routine at v_B
        let bob = preference_profile(&g, &dt, &b);
        assert_eq!(bob.entry(V_B).unwrap().edges, vec![5]);
        // Alice commits to routine A at s
        let alice = preference_profile(&g, &dt, &a);
        assert_eq!(alice.entry(S).unwrap().edges, vec![0]);
    }

    #[test]
    fn exact_ties_keep_both_edges() {
        let g = parse_graph(
            r#"{"nodes": ["s", "t"], "source": "s", "target": "t",
                "edges": [{"tail": "s", "head": "t", "cost": 2},
                          {"tail": "s", "head": "t", "cost": 2}]}"#,
        )
        .unwrap();
        let dt = cheapest_costs(&g).unwrap();
        let profile = preference_profile(&g, &dt, &rat(1, 2));
        assert_eq!(profile.entry(0).unwrap().edges, vec![0, 1]);
    }

    #[test]
    fn reachable_sets_running_scenario() {
        let g = alice_bob();
        let (a, b) = biases();
        let bob: Vec<NodeId> = reachable_nodes_fixed(&g, &b).unwrap().into_iter().collect();
        assert_eq!(bob, vec![S, V_B, V_AB, T]);
        let alice: Vec<NodeId> = reachable_nodes_fixed(&g, &a).unwrap().into_iter().collect();
        assert_eq!(alice, vec![S, V_A, V_AA, T]);
        let single = single_edge(5);
        assert_eq!(reachable_nodes_fixed(&single, &rat(1, 2)).unwrap().len(), 2);
    }

    #[test]
    fn required_rewards_running_scenario() {
        let g = alice_bob();
        let (a, b) = biases();
        // Alice's bottleneck is the final stretch: 13 / a = 27
        assert_eq!(required_reward_fixed(&g, &a).unwrap(), rat_int(27));
        // Bob's is the mixed-routine race: 16 / b = 216/7
        assert_eq!(required_reward_fixed(&g, &b).unwrap(), rat(216, 7));
        let single = single_edge(5);
        assert_eq!(required_reward_fixed(&single, &rat(1, 3)).unwrap(), rat_int(15));
    }

    #[test]
    fn fixed_verdicts_running_scenario() {
        let g = alice_bob();
        let (a, b) = biases();
        let alice = is_motivating_fixed(&g, &a, &rat_int(27)).unwrap();
        assert!(alice.motivating);
        assert!(alice.witnesses.is_empty());
        assert_eq!(alice.required_reward, Some(rat_int(27)));
        let bob = is_motivating_fixed(&g, &b, &rat_int(27)).unwrap();
        assert!(!bob.motivating);
        assert_eq!(bob.witnesses.len(), 1);
        assert_eq!(bob.witnesses[0].node, V_AB);
        assert_eq!(bob.witnesses[0].perceived, rat_int(16));
    }

    #[test]
    fn zero_cost_graph_needs_no_reward() {
        let g = parse_graph(
            r#"{"nodes": ["s", "a", "t"], "source": "s", "target": "t",
                "edges": [{"tail": "s", "head": "a", "cost": 0},
                          {"tail": "a", "head": "t", "cost": 0}]}"#,
        )
        .unwrap();
        let verdict = is_motivating_fixed(&g, &rat(1, 2), &rat_int(0)).unwrap();
        assert!(verdict.motivating);
        assert_eq!(verdict.required_reward, Some(rat_int(0)));
    }

    #[test]
    fn preference_intervals_running_scenario() {
        let g = alice_bob();
        let dt = cheapest_costs(&g).unwrap();
        // (s, v_A): lines 1 + 14b vs 3 + 10b cross at 1/2
        let iv = preference_interval(&g, &dt, 0);
        assert_eq!(iv.lo(), Some(&rat_int(0)));
        assert_eq!(iv.hi(), Some(&rat(1, 2)));
        // single out-edge: the whole unit interval
        let iv = preference_interval(&g, &dt, 6);
        assert_eq!(iv, BiasInterval::full());
        // (v_A, v_AB) is dominated at every bias
        let iv = preference_interval(&g, &dt, 3);
        assert!(iv.is_empty());
    }

    #[test]
    fn critical_subset_running_scenario() {
        let g = alice_bob();
        let set = BiasSet::new(vec![(rat(2, 5), rat(3, 5))]).unwrap();
        let critical = critical_bias_subset(&g, &set).unwrap();
        assert_eq!(critical, vec![rat(2, 5), rat(1, 2), rat(8, 15)]);
        assert!(critical.len() <= g.edge_count());

        let singleton = BiasSet::singleton(rat(13, 27)).unwrap();
        assert_eq!(critical_bias_subset(&g, &singleton).unwrap(), vec![rat(13, 27)]);

        let path = parse_graph(
            r#"{"nodes": ["s", "a", "t"], "source": "s", "target": "t",
                "edges": [{"tail": "s", "head": "a", "cost": 1},
                          {"tail": "a", "head": "t", "cost": 2}]}"#,
        )
        .unwrap();
        assert_eq!(critical_bias_subset(&path, &set).unwrap(), vec![rat(2, 5)]);
    }

    fn uncertainty_fix(eps_den: i64) -> crate::graph::CostConfiguration {
        // extras 5*eps on (s, v_A) and 1/2 + 16*eps on (v_B, v_AB)
        let mut cc = crate::graph::CostConfiguration::new();
        cc.set(0, rat(5, eps_den)).unwrap();
        cc.set(5, rat(1, 2) + rat(16, eps_den)).unwrap();
        cc
    }

    #[test]
    fn uncertain_verdicts_running_scenario() {
        let g = alice_bob();
        let (a, b) = biases();
        let set = BiasSet::from_points(&[a, b]).unwrap();
        let configured = g.apply(&uncertainty_fix(EPS_DEN)).unwrap();
        let reward = rat(256, 13);
        let verdict = is_motivating_uncertain(&configured, &set, &reward).unwrap();
        assert!(verdict.motivating, "{verdict:?}");
        assert_eq!(verdict.required_reward, Some(rat(256, 13)));

        let shy = reward - rat(1, 1000);
        let verdict = is_motivating_uncertain(&configured, &set, &shy).unwrap();
        assert!(!verdict.motivating);
        // binding witness is v_B at the low bias
        assert_eq!(verdict.witnesses[0].node, V_B);
        assert_eq!(verdict.witnesses[0].beta, rat(13, 27));

        // singleton set agrees with the fixed verifier
        let singleton = BiasSet::singleton(rat(13, 27)).unwrap();
        let fixed = is_motivating_fixed(&g, &rat(13, 27), &rat_int(27)).unwrap();
        let uncertain = is_motivating_uncertain(&g, &singleton, &rat_int(27)).unwrap();
        assert_eq!(fixed.motivating, uncertain.motivating);
        assert_eq!(fixed.required_reward, uncertain.required_reward);
    }

    #[test]
    fn variable_reach_running_scenario() {
        let g = alice_bob();
        let (a, b) = biases();
        let set = BiasSet::from_points(&[a.clone(), b]).unwrap();
        let (_, nodes) = variable_reach(&g, &set).unwrap();
        let nodes: Vec<NodeId> = nodes.into_iter().collect();
        // v_BB is entered by neither endpoint bias
        assert_eq!(nodes, vec![S, V_A, V_B, V_AA, V_AB, T]);

        // singleton reach coincides with fixed reachability
        let singleton = BiasSet::singleton(a.clone()).unwrap();
        let (_, nodes) = variable_reach(&g, &singleton).unwrap();
        assert_eq!(nodes, reachable_nodes_fixed(&g, &a).unwrap());

        let path = parse_graph(
            r#"{"nodes": ["s", "a", "t"], "source": "s", "target": "t",
                "edges": [{"tail": "s", "head": "a", "cost": 1},
                          {"tail": "a", "head": "t", "cost": 2}]}"#,
        )
        .unwrap();
        let (edges, _) = variable_reach(&path, &set).unwrap();
        assert_eq!(edges.len(), path.edge_count());
    }

    #[test]
    fn variable_verdicts_running_scenario() {
        let g = alice_bob();
        let (a, b) = biases();
        let set = BiasSet::from_points(&[a, b]).unwrap();
        // the single-edge fee that fixes both fixed-bias agents is not
        // enough once the bias may drift back down at v_AB
        let mut cc = crate::graph::CostConfiguration::new();
        cc.set(5, rat(1, 2)).unwrap();
        let configured = g.apply(&cc).unwrap();
        let verdict = is_motivating_variable(&configured, &set, &rat_int(27)).unwrap();
        assert!(!verdict.motivating);
        assert_eq!(verdict.witnesses.len(), 1);
        assert_eq!(verdict.witnesses[0].node, V_AB);
        assert_eq!(verdict.witnesses[0].perceived, rat_int(16));
        assert_eq!(verdict.witnesses[0].beta, rat(13, 27));

        // occasionally unbiased walk through the variability family
        let pov = gen_pov_family(&rat(1, 4)).unwrap();
        let pov_set = BiasSet::from_points(&[rat(1, 4), rat_int(1)]).unwrap();
        let verdict = is_motivating_variable(&pov, &pov_set, &rat_int(16)).unwrap();
        assert!(verdict.motivating);
        assert_eq!(verdict.required_reward, Some(rat_int(16)));

        // singleton agrees with the fixed verifier
        let singleton = BiasSet::singleton(rat(13, 27)).unwrap();
        let fixed = is_motivating_fixed(&g, &rat(13, 27), &rat_int(27)).unwrap();
        let variable = is_motivating_variable(&g, &singleton, &rat_int(27)).unwrap();
        assert_eq!(fixed.motivating, variable.motivating);
    }

    #[test]
    fn verdict_report_shape() {
        let g = alice_bob();
        let (_, b) = biases();
        let verdict = is_motivating_fixed(&g, &b, &rat_int(27)).unwrap();
        let report = verdict_report(&g, &verdict);
        assert!(report.contains("\"motivating\": false"));
        assert!(report.contains("v_AB"));
        assert!(report.contains("216/7"));
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = alice_bob();
        assert!(is_motivating_fixed(&g, &rat_int(0), &rat_int(1)).is_err());
        assert!(is_motivating_fixed(&g, &rat(3, 2), &rat_int(1)).is_err());
        assert!(is_motivating_fixed(&g, &rat(1, 2), &rat_int(-1)).is_err());
        let disconnected = parse_graph(
            r#"{"nodes": ["s", "x", "t"], "source": "s", "target": "t",
                "edges": [{"tail": "s", "head": "t", "cost": 1},
                          {"tail": "s", "head": "x", "cost": 1}]}"#,
        )
        .unwrap();
        assert!(cheapest_costs(&disconnected).is_err());
    }
}
