#![allow(dead_code)] // each test target uses its own subset

//! Shared test oracles, all independent of the library's dynamic programs:
//! distances by path enumeration, motivation by recursive walk simulation,
//! thresholds by candidate scanning.

use std::collections::BTreeMap;

use pbplan::graph::{EdgeId, NodeId, TaskGraph};
use pbplan::num::{rat, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every `from`-to-target path as an edge sequence, by depth-first search.
pub fn all_paths_from(graph: &TaskGraph, from: NodeId) -> Vec<Vec<EdgeId>> {
    fn walk(graph: &TaskGraph, v: NodeId, prefix: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>) {
        if v == graph.target() {
            out.push(prefix.clone());
            return;
        }
        for &e in graph.out_edges(v) {
            prefix.push(e);
            walk(graph, graph.edge(e).head, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(graph, from, &mut Vec::new(), &mut out);
    out
}

pub fn path_cost(graph: &TaskGraph, path: &[EdgeId]) -> Rational {
    path.iter()
        .map(|&e| graph.edge(e).cost.clone())
        .fold(rat(0, 1), |acc, c| acc + c)
}

/// Cheapest-path cost from `v` to `t` by exhaustive path enumeration.
pub fn oracle_distance(graph: &TaskGraph, v: NodeId) -> Rational {
    all_paths_from(graph, v)
        .iter()
        .map(|p| path_cost(graph, p))
        .min()
        .expect("normalized graph has a path from every node")
}

pub fn oracle_distance_table(graph: &TaskGraph) -> BTreeMap<NodeId, Rational> {
    graph
        .nodes()
        .iter()
        .map(|n| (n.id, oracle_distance(graph, n.id)))
        .collect()
}

/// Simulates every tie-breaking of the fixed-bias agent: true iff no
/// constructible walk reaches a node whose minimum perceived cost exceeds
/// the perceived reward.
pub fn oracle_motivating_fixed(graph: &TaskGraph, beta: &Rational, reward: &Rational) -> bool {
    let distances = oracle_distance_table(graph);
    let bound = beta * reward;
    let mut visited: BTreeMap<NodeId, bool> = BTreeMap::new();
    fn visit(
        graph: &TaskGraph,
        distances: &BTreeMap<NodeId, Rational>,
        beta: &Rational,
        bound: &Rational,
        v: NodeId,
        visited: &mut BTreeMap<NodeId, bool>,
    ) -> bool {
        if v == graph.target() {
            return true;
        }
        if let Some(&ok) = visited.get(&v) {
            return ok;
        }
        let perceived: Vec<Rational> = graph
            .out_edges(v)
            .iter()
            .map(|&e| &graph.edge(e).cost + beta * &distances[&graph.edge(e).head])
            .collect();
        let min = perceived.iter().min().expect("out-edges exist").clone();
        let ok = if min > *bound {
            false
        } else {
            graph
                .out_edges(v)
                .iter()
                .zip(perceived.iter())
                .filter(|(_, p)| **p == min)
                .all(|(&e, _)| visit(graph, distances, beta, bound, graph.edge(e).head, visited))
        };
        visited.insert(v, ok);
        ok
    }
    visit(graph, &distances, beta, &bound, graph.source(), &mut visited)
}

/// Minimal motivating reward by scanning the finite candidate set
/// `d_beta(v) / beta` with the simulation oracle.
pub fn oracle_required_fixed(graph: &TaskGraph, beta: &Rational) -> Rational {
    let distances = oracle_distance_table(graph);
    let mut candidates: Vec<Rational> = graph
        .nodes()
        .iter()
        .filter(|n| n.id != graph.target())
        .map(|n| {
            let min = graph
                .out_edges(n.id)
                .iter()
                .map(|&e| &graph.edge(e).cost + beta * &distances[&graph.edge(e).head])
                .min()
                .expect("out-edges exist");
            min / beta
        })
        .collect();
    candidates.sort();
    candidates.dedup();
    for candidate in &candidates {
        if oracle_motivating_fixed(graph, beta, candidate) {
            return candidate.clone();
        }
    }
    unreachable!("the largest candidate is always motivating");
}

/// Bottleneck optimum by path enumeration: the smallest over all `s`-`t`
/// paths of the maximum perceived edge cost.
pub fn oracle_minmax_alpha(graph: &TaskGraph, b: &Rational) -> Rational {
    let distances = oracle_distance_table(graph);
    all_paths_from(graph, graph.source())
        .iter()
        .map(|path| {
            path.iter()
                .map(|&e| &graph.edge(e).cost + b * &distances[&graph.edge(e).head])
                .max()
                .expect("paths are non-empty")
        })
        .min()
        .expect("normalized graph has an s-t path")
}

/// Random rational in `(0, 1]` with a small denominator.
pub fn random_bias(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.gen_range(2..=24) as i64;
    let num = rng.gen_range(1..=den);
    rat(num, den)
}

/// Random closed interval inside `(0, 1]`.
pub fn random_bias_interval(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    let a = random_bias(rng);
    let b = random_bias(rng);
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `count` evenly spaced rationals covering `[lo, hi]`, endpoints included.
pub fn spaced_samples(lo: &Rational, hi: &Rational, count: usize) -> Vec<Rational> {
    if lo == hi {
        return vec![lo.clone()];
    }
    let span = hi - lo;
    (0..count)
        .map(|k| lo + &span * rat(k as i64, (count - 1) as i64))
        .collect()
}
