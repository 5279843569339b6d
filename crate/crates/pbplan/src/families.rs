//! Instance generators: the running two-runner scenario, the two
//! lower-bound families with known thresholds, seeded random DAGs for
//! property harnesses, and the vector-scheduling reduction together with its
//! schedule/configuration translations.

use std::collections::BTreeMap;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agent::{cheapest_costs, preference_profile};
use crate::bias::BiasSet;
use crate::graph::{CostConfiguration, Edge, EdgeId, Node, NodeId, TaskGraph};
use crate::num::{format_rational, rat, rat_int, Rational};
use crate::{Error, Result};

fn node(id: NodeId, label: impl Into<String>) -> Node {
    Node {
        id,
        label: Some(label.into()),
    }
}

fn edge(tail: NodeId, head: NodeId, cost: Rational) -> Edge {
    Edge { tail, head, cost }
}

/// The running two-runner scenario: seven nodes, nine edges, two workout
/// routines that interact badly when mixed. `eps` parameterizes the two
/// biases `1/2 - eps` and `1/2 + eps`; the graph itself is fixed.
pub fn gen_alice_bob(eps: &Rational) -> Result<TaskGraph> {
    if !eps.is_positive() || eps > &rat(1, 54) {
        return Err(Error::Precondition(format!(
            "eps {} outside (0, 1/54]",
            format_rational(eps)
        )));
    }
    let (s, v_a, v_b, v_aa, v_ab, v_bb, t) = (0, 1, 2, 3, 4, 5, 6);
    TaskGraph::new(
        vec![
            node(s, "s"),
            node(v_a, "v_A"),
            node(v_b, "v_B"),
            node(v_aa, "v_AA"),
            node(v_ab, "v_AB"),
            node(v_bb, "v_BB"),
            node(t, "t"),
        ],
        vec![
            edge(s, v_a, rat_int(1)),
            edge(s, v_b, rat_int(3)),
            edge(v_a, v_aa, rat_int(1)),
            edge(v_a, v_ab, rat_int(9)),
            edge(v_b, v_bb, rat_int(9)),
            edge(v_b, v_ab, rat_int(1)),
            edge(v_aa, t, rat_int(13)),
            edge(v_ab, t, rat_int(16)),
            edge(v_bb, t, rat_int(1)),
        ],
        s,
        t,
    )
}

/// The two biases of the running scenario, `1/2 - eps` and `1/2 + eps`.
pub fn alice_bob_biases(eps: &Rational) -> (Rational, Rational) {
    (rat(1, 2) - eps, rat(1, 2) + eps)
}

pub fn alice_bob_bias_set(eps: &Rational) -> Result<BiasSet> {
    let (a, b) = alice_bob_biases(eps);
    BiasSet::from_points(&[a, b])
}

/// Price-of-uncertainty family: a main path `v_0 .. v_{12+4/a}` (first edge
/// cost 2, the rest cost 1) and a shortcut `v_1 -> w -> t` of costs 4 and
/// `6 + 3/a`. Requires `0 < a <= 3/8` with `4/a` integral.
pub fn gen_pou_family(a: &Rational) -> Result<TaskGraph> {
    if !a.is_positive() || a > &rat(3, 8) || !(rat_int(4) / a).is_integer() {
        return Err(Error::Precondition(format!(
            "parameter {} must satisfy 0 < a <= 3/8 with 4/a integral",
            format_rational(a)
        )));
    }
    let main_edges = 12 + crate::num::integer_value(&(rat_int(4) / a))? as usize;
    let w = main_edges + 1;
    let t = main_edges;
    let mut nodes: Vec<Node> = (0..=main_edges).map(|i| node(i, format!("v{i}"))).collect();
    nodes.push(node(w, "w"));
    let mut edges = vec![edge(0, 1, rat_int(2))];
    for i in 1..main_edges {
        edges.push(edge(i, i + 1, rat_int(1)));
    }
    edges.push(edge(1, w, rat_int(4)));
    edges.push(edge(w, t, rat_int(6) + rat_int(3) / a));
    TaskGraph::new(nodes, edges, 0, t)
}

/// Bias set `{a, 1/2}` used with the price-of-uncertainty family.
pub fn pou_bias_set(a: &Rational) -> Result<BiasSet> {
    BiasSet::from_points(&[a.clone(), rat(1, 2)])
}

/// Price-of-variability family: a unit-cost main path of `1/a^2 + 1/a + 2`
/// edges, shortcut entries `v_i -> w` (cost 2) for `0 <= i <= 1/a^2`, and a
/// shared exit `w -> t` of cost `1/a`. Requires `0 < a < 1/2` with `1/a`
/// integral.
pub fn gen_pov_family(a: &Rational) -> Result<TaskGraph> {
    if !a.is_positive() || a >= &rat(1, 2) || !(Rational::one() / a).is_integer() {
        return Err(Error::Precondition(format!(
            "parameter {} must satisfy 0 < a < 1/2 with 1/a integral",
            format_rational(a)
        )));
    }
    let inv = crate::num::integer_value(&(Rational::one() / a))? as usize;
    let main_edges = inv * inv + inv + 2;
    let t = main_edges;
    let w = main_edges + 1;
    let mut nodes: Vec<Node> = (0..=main_edges).map(|i| node(i, format!("v{i}"))).collect();
    nodes.push(node(w, "w"));
    let mut edges = Vec::new();
    for i in 0..main_edges {
        edges.push(edge(i, i + 1, rat_int(1)));
    }
    for i in 0..=inv * inv {
        edges.push(edge(i, w, rat_int(2)));
    }
    edges.push(edge(w, t, Rational::one() / a));
    TaskGraph::new(nodes, edges, 0, t)
}

/// Bias set `{a, 1}` used with the price-of-variability family; the agent is
/// occasionally unbiased.
pub fn pov_bias_set(a: &Rational) -> Result<BiasSet> {
    BiasSet::from_points(&[a.clone(), Rational::one()])
}

/// Seeded random normalized DAG on at most `n` nodes with costs of
/// denominator at most `cost_den`. Layered with single-node terminal layers,
/// every interior node wired to an earlier and a later layer, so every node
/// lies on an `s`-`t` path by construction. Identical inputs give identical
/// graphs.
pub fn gen_random_dag(seed: u64, n: usize, cost_den: u32) -> Result<TaskGraph> {
    if n < 2 {
        return Err(Error::Precondition("need n >= 2".into()));
    }
    if cost_den < 1 {
        return Err(Error::Precondition("need cost_den >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(2..=n);
    let interior = count - 2;
    // layer 0 = {s}, last layer = {t}, interior spread over 1..=layers
    let mut layer_of = vec![0usize; count];
    let interior_layers = if interior == 0 { 0 } else { rng.gen_range(1..=interior.min(6)) };
    for slot in layer_of.iter_mut().take(interior + 1).skip(1) {
        *slot = rng.gen_range(1..=interior_layers);
    }
    layer_of[count - 1] = interior_layers + 1;
    // ids in layer order keeps node iteration aligned with the layering
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by_key(|&v| (layer_of[v], v));
    let mut layer = vec![0usize; count];
    for (id, &slot) in order.iter().enumerate() {
        layer[id] = layer_of[slot];
    }
    let nodes: Vec<Node> = (0..count)
        .map(|id| {
            if id == 0 {
                node(id, "s")
            } else if id == count - 1 {
                node(id, "t")
            } else {
                node(id, format!("n{id}"))
            }
        })
        .collect();
    let cost = |rng: &mut ChaCha8Rng| -> Rational {
        let den = rng.gen_range(1..=cost_den) as i64;
        let num = rng.gen_range(0..=4 * den);
        rat(num, den)
    };
    let pick = |rng: &mut ChaCha8Rng, choices: &[usize]| -> usize {
        choices[rng.gen_range(0..choices.len())]
    };
    let mut edges: Vec<Edge> = Vec::new();
    let mut has_out = vec![false; count];
    for v in 1..count {
        let earlier: Vec<usize> = (0..count).filter(|&u| layer[u] < layer[v]).collect();
        let u = pick(&mut rng, &earlier);
        let c = cost(&mut rng);
        has_out[u] = true;
        edges.push(edge(u, v, c));
    }
    for v in 0..count - 1 {
        if !has_out[v] {
            let later: Vec<usize> = (0..count).filter(|&u| layer[u] > layer[v]).collect();
            let u = pick(&mut rng, &later);
            let c = cost(&mut rng);
            edges.push(edge(v, u, c));
        }
    }
    let extra = rng.gen_range(0..=count);
    for _ in 0..extra {
        let u = rng.gen_range(0..count - 1);
        let later: Vec<usize> = (0..count).filter(|&x| layer[x] > layer[u]).collect();
        let v = pick(&mut rng, &later);
        let c = cost(&mut rng);
        edges.push(edge(u, v, c));
    }
    TaskGraph::new(nodes, edges, 0, count - 1)
}

// ---------------------------------------------------------------------------
// Vector scheduling and the hardness reduction
// ---------------------------------------------------------------------------

/// Vector-scheduling instance: `machines` machines and 0-1 vector jobs of a
/// common dimension. All-zero jobs are dropped at construction; they could
/// be assigned to any machine without affecting the makespan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VSInstance {
    machines: usize,
    jobs: Vec<Vec<u8>>,
    dim: usize,
}

impl VSInstance {
    pub fn new(machines: usize, jobs: Vec<Vec<u8>>) -> Result<Self> {
        if machines < 1 {
            return Err(Error::Precondition("need at least one machine".into()));
        }
        let dim = jobs.first().map(Vec::len).unwrap_or(0);
        if dim < 1 {
            return Err(Error::Precondition("jobs must have dimension >= 1".into()));
        }
        let mut kept = Vec::with_capacity(jobs.len());
        for job in jobs {
            if job.len() != dim {
                return Err(Error::Precondition("jobs must share one dimension".into()));
            }
            if job.iter().any(|&x| x > 1) {
                return Err(Error::Precondition("job entries must be 0 or 1".into()));
            }
            if job.contains(&1) {
                kept.push(job);
            }
        }
        if kept.is_empty() {
            return Err(Error::Precondition("all jobs were zero vectors".into()));
        }
        Ok(VSInstance {
            machines,
            jobs: kept,
            dim,
        })
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> &[Vec<u8>] {
        &self.jobs
    }

    pub fn job_count(&self) -> usize {
        self.jobs.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Machine loads summed per dimension; the makespan of an assignment is
    /// the largest entry.
    pub fn makespan(&self, assignment: &[usize]) -> Result<u64> {
        if assignment.len() != self.jobs.len() {
            return Err(Error::Precondition("assignment length mismatch".into()));
        }
        let mut loads = vec![vec![0u64; self.dim]; self.machines];
        for (k, &machine) in assignment.iter().enumerate() {
            if machine >= self.machines {
                return Err(Error::Precondition(format!("machine {machine} out of range")));
            }
            for (j, &bit) in self.jobs[k].iter().enumerate() {
                loads[machine][j] += bit as u64;
            }
        }
        Ok(loads
            .iter()
            .flat_map(|row| row.iter())
            .copied()
            .max()
            .unwrap_or(0))
    }
}

/// An assignment of every job to one machine, with its makespan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub assignment: Vec<usize>,
    pub makespan: u64,
}

impl Schedule {
    pub fn new(instance: &VSInstance, assignment: Vec<usize>) -> Result<Self> {
        let makespan = instance.makespan(&assignment)?;
        Ok(Schedule {
            assignment,
            makespan,
        })
    }
}

/// Exhaustive optimal schedule over all `m^l` assignments; the first optimum
/// in lexicographic order is returned. Errors when the enumeration exceeds
/// `budget`.
pub fn brute_force_schedule(instance: &VSInstance, budget: u128) -> Result<Schedule> {
    let m = instance.machines() as u128;
    let mut needed: u128 = 1;
    for _ in 0..instance.job_count() {
        needed = needed
            .checked_mul(m)
            .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
    }
    let mut assignment = vec![0usize; instance.job_count()];
    let mut best: Option<Schedule> = None;
    loop {
        let makespan = instance.makespan(&assignment)?;
        if best.as_ref().is_none_or(|b| makespan < b.makespan) {
            best = Some(Schedule {
                assignment: assignment.clone(),
                makespan,
            });
        }
        let mut slot = assignment.len();
        loop {
            if slot == 0 {
                return Ok(best.expect("at least one assignment enumerated"));
            }
            slot -= 1;
            assignment[slot] += 1;
            if assignment[slot] < instance.machines() {
                break;
            }
            assignment[slot] = 0;
        }
    }
}

/// Role of a node in the reduction graph. Machines `i`, dimensions `j` and
/// jobs/levels `k` are 0-based; junction `k` sits between level `k-1` and
/// level `k`, with `s` = junction 0 and `t` = junction `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeRole {
    Junction { index: usize },
    JunctionMid { machine: usize, dim: usize, job: usize },
    LevelNode { machine: usize, dim: usize, job: usize, pos: usize },
    ShortcutMid { machine: usize, dim: usize, job: usize },
}

/// Role of an edge in the reduction graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeRole {
    /// One of the `l^4` level-path edges of cost `1/l^2`.
    LevelPath { machine: usize, dim: usize, job: usize, pos: usize },
    /// Cost-0 initial edge of the two-edge shortcut at a level start.
    ShortcutFirstStart { machine: usize, dim: usize, job: usize },
    /// Cost-1 closing edge of the two-edge shortcut.
    ShortcutFirstEnd { machine: usize, dim: usize, job: usize },
    /// Single cost-`l` shortcut from every other level node.
    ShortcutSecond { machine: usize, dim: usize, job: usize, pos: usize },
    /// Initial edge of the connector path of machine `i` and job `k`.
    ConnectorEntry { machine: usize, job: usize },
    /// Interior connector edges, in path order.
    ConnectorInner { machine: usize, job: usize, seq: usize },
    /// Single cost-`l` escape to `t` from junctions and junction mids.
    ShortcutThird { from: NodeId },
}

impl EdgeRole {
    /// All shortcut kinds; a motivated low-bias agent never walks these.
    pub fn is_shortcut(&self) -> bool {
        matches!(
            self,
            EdgeRole::ShortcutFirstStart { .. }
                | EdgeRole::ShortcutFirstEnd { .. }
                | EdgeRole::ShortcutSecond { .. }
                | EdgeRole::ShortcutThird { .. }
        )
    }
}

/// Node and edge roles of a generated reduction graph, recorded against the
/// normalized graph so translations can run in later invocations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionMeta {
    pub ell: usize,
    pub machines: usize,
    pub dim: usize,
    pub jobs: Vec<Vec<u8>>,
    node_roles: Vec<(NodeId, NodeRole)>,
    edge_roles: Vec<(EdgeId, EdgeRole)>,
}

impl ReductionMeta {
    pub fn instance(&self) -> Result<VSInstance> {
        VSInstance::new(self.machines, self.jobs.clone())
    }

    pub fn node_roles(&self) -> &[(NodeId, NodeRole)] {
        &self.node_roles
    }

    pub fn edge_roles(&self) -> &[(EdgeId, EdgeRole)] {
        &self.edge_roles
    }

    pub fn edge_role_map(&self) -> BTreeMap<EdgeId, &EdgeRole> {
        self.edge_roles.iter().map(|(e, role)| (*e, role)).collect()
    }

    /// The cost-0 initial shortcut edge at level start `(machine, dim, job)`.
    pub fn shortcut_first_start(&self, machine: usize, dim: usize, job: usize) -> Option<EdgeId> {
        self.edge_roles.iter().find_map(|(e, role)| match role {
            EdgeRole::ShortcutFirstStart {
                machine: i,
                dim: j,
                job: k,
            } if *i == machine && *j == dim && *k == job => Some(*e),
            _ => None,
        })
    }

    /// The initial edge of the connector path of `(machine, job)`.
    pub fn connector_entry(&self, machine: usize, job: usize) -> Option<EdgeId> {
        self.edge_roles.iter().find_map(|(e, role)| match role {
            EdgeRole::ConnectorEntry { machine: i, job: k } if *i == machine && *k == job => {
                Some(*e)
            }
            _ => None,
        })
    }
}

/// Bias set `{1/l^2, 1/2}` that the reduction is built against.
pub fn reduction_bias_set(ell: usize) -> Result<BiasSet> {
    BiasSet::from_points(&[rat(1, (ell * ell) as i64), rat(1, 2)])
}

struct ReductionBuilder {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    node_roles: Vec<(NodeId, NodeRole)>,
    edge_roles: Vec<(EdgeId, EdgeRole)>,
}

impl ReductionBuilder {
    fn add_node(&mut self, label: String, role: NodeRole) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(node(id, label));
        self.node_roles.push((id, role));
        id
    }

    fn add_edge(&mut self, tail: NodeId, head: NodeId, cost: Rational, role: EdgeRole) -> EdgeId {
        let id = self.edges.len();
        self.edges.push(edge(tail, head, cost));
        self.edge_roles.push((id, role));
        id
    }
}

/// Builds the reduction graph for a vector-scheduling instance: per machine
/// and dimension a column of `l` levels (each a path of `l^4` edges of cost
/// `1/l^2` plus shortcuts to the next level), connector paths crossing the
/// columns a job loads, and escape shortcuts to `t`. Returns the normalized
/// graph, the bias set `{1/l^2, 1/2}` and the role metadata.
pub fn gen_vs_reduction(instance: &VSInstance) -> Result<(TaskGraph, BiasSet, ReductionMeta)> {
    let ell = instance.job_count();
    if ell < 2 {
        return Err(Error::Precondition("reduction needs at least two jobs".into()));
    }
    let m = instance.machines();
    let d = instance.dim();
    let path_len = ell * ell * ell * ell;
    let unit = rat(1, (ell * ell) as i64);
    let ell_cost = rat_int(ell as i64);

    let mut b = ReductionBuilder {
        nodes: Vec::new(),
        edges: Vec::new(),
        node_roles: Vec::new(),
        edge_roles: Vec::new(),
    };

    let junctions: Vec<NodeId> = (0..=ell)
        .map(|k| b.add_node(format!("u{k}"), NodeRole::Junction { index: k }))
        .collect();
    let source = junctions[0];
    let target = junctions[ell];

    // level paths and their interior nodes
    let mut level_nodes: BTreeMap<(usize, usize, usize), Vec<NodeId>> = BTreeMap::new();
    for i in 0..m {
        for j in 0..d {
            for k in 0..ell {
                let mut path = Vec::with_capacity(path_len + 1);
                for pos in 0..=path_len {
                    let label = match pos {
                        0 => format!("v[{i},{j},{k}]"),
                        p if p == path_len => format!("w[{i},{j},{k}]"),
                        p => format!("p[{i},{j},{k},{p}]"),
                    };
                    path.push(b.add_node(
                        label,
                        NodeRole::LevelNode {
                            machine: i,
                            dim: j,
                            job: k,
                            pos,
                        },
                    ));
                }
                level_nodes.insert((i, j, k), path);
            }
        }
    }

    for i in 0..m {
        for j in 0..d {
            for k in 0..ell {
                let path = level_nodes[&(i, j, k)].clone();
                for pos in 0..path_len {
                    b.add_edge(
                        path[pos],
                        path[pos + 1],
                        unit.clone(),
                        EdgeRole::LevelPath {
                            machine: i,
                            dim: j,
                            job: k,
                            pos,
                        },
                    );
                }
                let next_start = if k + 1 < ell {
                    level_nodes[&(i, j, k + 1)][0]
                } else {
                    target
                };
                let mid = b.add_node(
                    format!("z[{i},{j},{k}]"),
                    NodeRole::ShortcutMid {
                        machine: i,
                        dim: j,
                        job: k,
                    },
                );
                b.add_edge(
                    path[0],
                    mid,
                    rat_int(0),
                    EdgeRole::ShortcutFirstStart {
                        machine: i,
                        dim: j,
                        job: k,
                    },
                );
                b.add_edge(
                    mid,
                    next_start,
                    rat_int(1),
                    EdgeRole::ShortcutFirstEnd {
                        machine: i,
                        dim: j,
                        job: k,
                    },
                );
                for (pos, &from) in path.iter().enumerate().skip(1) {
                    b.add_edge(
                        from,
                        next_start,
                        ell_cost.clone(),
                        EdgeRole::ShortcutSecond {
                            machine: i,
                            dim: j,
                            job: k,
                            pos,
                        },
                    );
                }
            }
        }
    }

    // connector paths P_{i,k} through the dimensions job k loads
    let mut junction_mids: Vec<NodeId> = Vec::new();
    for i in 0..m {
        for (k, job) in instance.jobs().iter().enumerate() {
            let dims: Vec<usize> = (0..d).filter(|&j| job[j] == 1).collect();
            let first = dims[0];
            let last = dims[dims.len() - 1];
            b.add_edge(
                junctions[k],
                level_nodes[&(i, first, k)][0],
                unit.clone(),
                EdgeRole::ConnectorEntry { machine: i, job: k },
            );
            let mut seq = 0;
            for pair in dims.windows(2) {
                let (j, j_next) = (pair[0], pair[1]);
                let mid = b.add_node(
                    format!("m[{i},{j},{k}]"),
                    NodeRole::JunctionMid {
                        machine: i,
                        dim: j,
                        job: k,
                    },
                );
                junction_mids.push(mid);
                b.add_edge(
                    level_nodes[&(i, j, k)][path_len],
                    mid,
                    unit.clone(),
                    EdgeRole::ConnectorInner { machine: i, job: k, seq },
                );
                seq += 1;
                b.add_edge(
                    mid,
                    level_nodes[&(i, j_next, k)][0],
                    unit.clone(),
                    EdgeRole::ConnectorInner { machine: i, job: k, seq },
                );
                seq += 1;
            }
            b.add_edge(
                level_nodes[&(i, last, k)][path_len],
                junctions[k + 1],
                unit.clone(),
                EdgeRole::ConnectorInner { machine: i, job: k, seq },
            );
        }
    }

    // escapes to t from every junction before t and every junction mid
    for &u in junctions[..ell].iter().chain(junction_mids.iter()) {
        b.add_edge(u, target, ell_cost.clone(), EdgeRole::ShortcutThird { from: u });
    }

    let raw = TaskGraph::new(b.nodes, b.edges, source, target)?;
    let (graph, edge_map) = raw.normalize_mapped()?;
    let node_roles = b
        .node_roles
        .into_iter()
        .filter(|(id, _)| graph.contains_node(*id))
        .collect();
    let edge_roles = b
        .edge_roles
        .into_iter()
        .filter_map(|(old, role)| edge_map[old].map(|new| (new, role)))
        .collect();
    let meta = ReductionMeta {
        ell,
        machines: m,
        dim: d,
        jobs: instance.jobs().to_vec(),
        node_roles,
        edge_roles,
    };
    let bias = reduction_bias_set(ell)?;
    Ok((graph, bias, meta))
}

/// Translates a schedule into a motivating configuration: extra cost `l` on
/// the initial shortcut edge of every level the schedule loads, and a
/// prohibitive `kappa*l + l + 2` on the entry of every foreign connector
/// path. Returns the configuration and its reward `kappa*l + l + 1`.
pub fn schedule_configuration(
    graph: &TaskGraph,
    meta: &ReductionMeta,
    schedule: &Schedule,
) -> Result<(CostConfiguration, Rational)> {
    let instance = meta.instance()?;
    if schedule.assignment.len() != instance.job_count() {
        return Err(Error::Precondition(
            "schedule does not cover the instance's jobs".into(),
        ));
    }
    let kappa = instance.makespan(&schedule.assignment)?;
    let ell = meta.ell as i64;
    let reward = rat_int(kappa as i64 * ell + ell + 1);
    let foreign_fee = &reward + Rational::one();
    let mut configuration = CostConfiguration::new();
    for (k, &machine) in schedule.assignment.iter().enumerate() {
        for j in 0..meta.dim {
            if instance.jobs()[k][j] == 1 {
                let e = meta.shortcut_first_start(machine, j, k).ok_or_else(|| {
                    Error::Precondition(format!(
                        "missing shortcut edge for machine {machine}, dim {j}, job {k}"
                    ))
                })?;
                configuration.set(e, rat_int(ell))?;
            }
        }
        for other in 0..meta.machines {
            if other == machine {
                continue;
            }
            let e = meta.connector_entry(other, k).ok_or_else(|| {
                Error::Precondition(format!(
                    "missing connector entry for machine {other}, job {k}"
                ))
            })?;
            configuration.set(e, foreign_fee.clone())?;
        }
    }
    configuration.validate(graph)?;
    Ok((configuration, reward))
}

/// Recovers a schedule from a motivating configuration by walking the agent
/// at constant bias `1/l^2` (deterministic tie-breaking) and reading off the
/// connector paths she crosses. Requires `r < l^2/2`; the walk never touches
/// a shortcut when the configuration is motivating for all bias
/// configurations, and errors with a witness otherwise.
pub fn extract_schedule(
    graph: &TaskGraph,
    meta: &ReductionMeta,
    configuration: &CostConfiguration,
    reward: &Rational,
) -> Result<Schedule> {
    let instance = meta.instance()?;
    let ell = meta.ell;
    let beta = rat(1, (ell * ell) as i64);
    // for r < l^2 the perceived reward r/l^2 stays below every shortcut's
    // cost, so a motivated walk can never leave the connector paths
    if *reward >= rat_int((ell * ell) as i64) {
        return Err(Error::Precondition(format!(
            "extraction needs r < l^2, got {}",
            format_rational(reward)
        )));
    }
    let configured = graph.apply(configuration)?;
    let distances = cheapest_costs(&configured)?;
    let profile = preference_profile(&configured, &distances, &beta);
    let roles = meta.edge_role_map();
    let bound = &beta * reward;

    let mut assignment: Vec<Option<usize>> = vec![None; instance.job_count()];
    let mut current = configured.source();
    let mut steps = 0usize;
    while current != configured.target() {
        steps += 1;
        if steps > configured.node_count() {
            return Err(Error::Walk("walk exceeded the node count".into()));
        }
        let entry = profile
            .entry(current)
            .ok_or_else(|| Error::Walk(format!("no profile at {}", configured.node_name(current))))?;
        if entry.perceived > bound {
            return Err(Error::Walk(format!(
                "agent quits at {}: perceived {} exceeds reward bound {}",
                configured.node_name(current),
                format_rational(&entry.perceived),
                format_rational(&bound)
            )));
        }
        let &chosen = entry
            .edges
            .iter()
            .min_by_key(|&&e| (configured.edge(e).head, e))
            .expect("profile entries are non-empty");
        match roles.get(&chosen) {
            Some(role) if role.is_shortcut() => {
                return Err(Error::Walk(format!(
                    "agent took a shortcut at {} (edge {})",
                    configured.node_name(current),
                    chosen
                )));
            }
            Some(EdgeRole::ConnectorEntry { machine, job }) => {
                if assignment[*job].is_some() {
                    return Err(Error::Walk(format!("job {job} entered twice")));
                }
                assignment[*job] = Some(*machine);
            }
            Some(_) => {}
            None => {
                return Err(Error::Walk(format!("walked edge {chosen} has no role")));
            }
        }
        current = configured.edge(chosen).head;
    }
    let assignment: Vec<usize> = assignment
        .into_iter()
        .enumerate()
        .map(|(job, machine)| {
            machine.ok_or_else(|| Error::Walk(format!("job {job} was never assigned")))
        })
        .collect::<Result<_>>()?;
    Schedule::new(&instance, assignment)
}

/// Parses a reduction metadata document.
pub fn parse_reduction_meta(text: &str) -> Result<ReductionMeta> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("reduction metadata: {e}")))
}

pub fn serialize_reduction_meta(meta: &ReductionMeta) -> String {
    serde_json::to_string(meta).expect("reduction metadata serialization")
}


#[cfg(test)]
mod reduction_tests {
    use super::*;
    use crate::agent::is_motivating_variable;

    #[test]
    fn single_machine_reduction_assigns_everything() {
        let inst =
            VSInstance::new(1, vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]]).unwrap();
        let (g, bias, meta) = gen_vs_reduction(&inst).unwrap();
        let best = brute_force_schedule(&inst, 1 << 20).unwrap();
        assert_eq!(best.makespan, 2);
        let (cc, reward) = schedule_configuration(&g, &meta, &best).unwrap();
        assert_eq!(reward, rat_int(13)); // kappa*l + l + 1 = 2*4 + 4 + 1
        let configured = g.apply(&cc).unwrap();
        assert!(is_motivating_variable(&configured, &bias, &reward).unwrap().motivating);
        let recovered = extract_schedule(&g, &meta, &cc, &reward).unwrap();
        assert_eq!(recovered.assignment, vec![0; 4]);
        assert_eq!(recovered.makespan, 2);
    }

    #[test]
    fn extraction_rejects_oversized_rewards() {
        let inst = VSInstance::new(2, vec![vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let (g, _, meta) = gen_vs_reduction(&inst).unwrap();
        let err = extract_schedule(&g, &meta, &CostConfiguration::new(), &rat_int(9));
        assert!(err.is_err());
    }
}
