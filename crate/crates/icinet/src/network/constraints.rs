//! The nine structural constraints a plausible topology must satisfy, plus
//! the O(1) incremental validity check used by the constrained sampler.
//!
//! [`check_constraints_full`] evaluates every constraint by explicit graph
//! search and never short-circuits, so it doubles as the brute-force oracle
//! the fast path is tested against.

use std::fmt;

use super::{Level, NetworkMeta, NodeId, Topology};

/// Human-readable statement of each constraint, indexed 0..9 for
/// constraints 1..9.
pub const CONSTRAINT_DESCRIPTIONS: [&str; 9] = [
    "every supply node reaches some demand node within its block",
    "every demand node is reached from some supply node within its block",
    "every transmission node is reached from some supply node within its block",
    "every transmission node reaches some demand node within its block",
    "every interdependency source node has an edge to some node of the target class",
    "every interdependency target node has an edge from some node of the source class",
    "every intra-block edge points strictly down the supply/transmission/demand hierarchy",
    "every cross-block edge belongs to a declared interdependency class",
    "every block subgraph and every interdependency subgraph is acyclic",
];

/// A single offending node or edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    Node(NodeId),
    Edge(NodeId, NodeId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Node(i) => write!(f, "node {i}"),
            Violation::Edge(i, j) => write!(f, "edge ({i}, {j})"),
        }
    }
}

/// Outcome for one constraint.
#[derive(Clone, Debug, Default)]
pub struct ConstraintResult {
    pub violations: Vec<Violation>,
}

impl ConstraintResult {
    pub fn satisfied(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of a full structural check; one result per constraint, all nine
/// always evaluated.
#[derive(Clone, Debug)]
pub struct ConstraintReport {
    results: [ConstraintResult; 9],
}

impl ConstraintReport {
    pub fn all_satisfied(&self) -> bool {
        self.results.iter().all(ConstraintResult::satisfied)
    }

    /// Result for constraint `k` (1-based, matching the descriptions).
    pub fn constraint(&self, k: usize) -> &ConstraintResult {
        &self.results[k - 1]
    }

    pub fn results(&self) -> &[ConstraintResult; 9] {
        &self.results
    }
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.all_satisfied() {
            return write!(f, "all constraints satisfied");
        }
        for (k, result) in self.results.iter().enumerate() {
            if !result.satisfied() {
                write!(f, "constraint {}: {} — ", k + 1, CONSTRAINT_DESCRIPTIONS[k])?;
                for (n, v) in result.violations.iter().enumerate() {
                    if n > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Reusable scratch buffers for [`check_constraints_full_with`].
///
/// The full check runs once per proposal under full validation; callers on
/// that path hold one workspace so repeated checks allocate nothing.
#[derive(Debug, Clone)]
pub struct ConstraintWorkspace {
    from_supply: Vec<bool>,
    to_demand: Vec<bool>,
    color: Vec<CycleColor>,
    queue: Vec<NodeId>,
    stack: Vec<(NodeId, usize)>,
}

impl ConstraintWorkspace {
    pub fn new(n_nodes: usize) -> Self {
        ConstraintWorkspace {
            from_supply: vec![false; n_nodes],
            to_demand: vec![false; n_nodes],
            color: vec![CycleColor::White; n_nodes],
            queue: Vec::new(),
            stack: Vec::new(),
        }
    }
}

/// Evaluate all nine structural constraints by graph search.
///
/// Reachability for constraints 1-4 is computed within each block's induced
/// subgraph; constraints 5-6 are single-hop by definition (an
/// interdependency's support is one edge class deep); 7-8 classify every
/// stored edge; 9 runs cycle detection per block subgraph and per
/// interdependency subgraph. The report never throws: impossible structures
/// come back as violations, not errors.
pub fn check_constraints_full(topo: &Topology, meta: &NetworkMeta) -> ConstraintReport {
    check_constraints_full_with(&mut ConstraintWorkspace::new(meta.n_nodes()), topo, meta)
}

/// [`check_constraints_full`] against caller-owned scratch buffers; identical
/// report, no internal allocation.
pub fn check_constraints_full_with(
    workspace: &mut ConstraintWorkspace,
    topo: &Topology,
    meta: &NetworkMeta,
) -> ConstraintReport {
    let mut results: [ConstraintResult; 9] = Default::default();
    let ConstraintWorkspace {
        from_supply,
        to_demand,
        color,
        queue,
        stack,
    } = workspace;
    debug_assert_eq!(from_supply.len(), meta.n_nodes());
    // class[id] / 3 is the block, % 3 the level rank; dense so the traversal
    // inner loops stay in cache.
    let class = meta.class_ids();

    for block in 0..meta.n_blocks() {
        let supplies = meta.members(block, Level::Supply);
        let transmissions = meta.members(block, Level::Transmission);
        let demands = meta.members(block, Level::Demand);

        // One backward search from all demands answers constraints 1 and 4:
        // a node reaches some demand within the block exactly when a
        // block-internal path into the demand set starts at it.
        reach_backward(topo, class, block, demands, to_demand, queue);
        for &s in supplies {
            if !to_demand[s] {
                results[0].violations.push(Violation::Node(s));
            }
        }

        // Constraints 2-3: one forward search from all supplies covers both.
        reach_forward(topo, class, block, supplies, from_supply, queue);
        for &d in demands {
            if !from_supply[d] {
                results[1].violations.push(Violation::Node(d));
            }
        }
        for &t in transmissions {
            if !from_supply[t] {
                results[2].violations.push(Violation::Node(t));
            }
        }

        // Constraint 4: the same backward search, read at the transmissions.
        for &t in transmissions {
            if !to_demand[t] {
                results[3].violations.push(Violation::Node(t));
            }
        }

        // Constraint 9 (block half): cycle detection on the block subgraph.
        // Every edge of the subgraph leaves a block member, so block members
        // are the only roots that matter.
        let b = block as u32;
        let roots = supplies.iter().chain(transmissions).chain(demands).copied();
        if let Some((i, j)) = find_cycle_edge(topo, roots, color, stack, |i, j| {
            class[i] / 3 == b && class[j] / 3 == b
        }) {
            results[8].violations.push(Violation::Edge(i, j));
        }
    }

    for spec in meta.interdeps() {
        let src_class = (spec.source_block * 3 + spec.source_level.rank()) as u32;
        let tgt_class = (spec.target_block * 3 + spec.target_level.rank()) as u32;

        // Constraint 5: each source node feeds at least one target-class node.
        for &u in meta.members(spec.source_block, spec.source_level) {
            let feeds = topo.successors(u).iter().any(|&v| class[v] == tgt_class);
            if !feeds {
                results[4].violations.push(Violation::Node(u));
            }
        }

        // Constraint 6: each target node is fed by at least one source-class node.
        for &v in meta.members(spec.target_block, spec.target_level) {
            let fed = topo.predecessors(v).iter().any(|&u| class[u] == src_class);
            if !fed {
                results[5].violations.push(Violation::Node(v));
            }
        }

        // Constraint 9 (interdependency half). Edges of one class can never
        // cycle on their own, but the checker must not assume its input is
        // feasible, so detect rather than deduce. Kept edges all leave
        // source-class nodes, so those are the only roots that matter.
        let roots = meta
            .members(spec.source_block, spec.source_level)
            .iter()
            .copied();
        if let Some((i, j)) = find_cycle_edge(topo, roots, color, stack, |i, j| {
            class[i] == src_class && class[j] == tgt_class
        }) {
            results[8].violations.push(Violation::Edge(i, j));
        }
    }

    // Constraints 7-8: classify every stored edge.
    for (i, j) in topo.edges() {
        let (ci, cj) = (class[i] as usize, class[j] as usize);
        if ci / 3 == cj / 3 {
            // Same block: levels must step strictly down the hierarchy.
            if ci % 3 >= cj % 3 {
                results[6].violations.push(Violation::Edge(i, j));
            }
        } else if !meta.interdep_declared(ci, cj) {
            results[7].violations.push(Violation::Edge(i, j));
        }
    }

    ConstraintReport { results }
}

/// Verdict-only counterpart of [`check_constraints_full_with`]: evaluates
/// the same nine constraints but returns at the first violation and never
/// materializes a report. This is the per-proposal full-validation path in
/// the sampler, where only the verdict matters; use the report-building
/// variant when the caller needs to know what broke.
pub fn check_constraints_ok(
    workspace: &mut ConstraintWorkspace,
    topo: &Topology,
    meta: &NetworkMeta,
) -> bool {
    let ConstraintWorkspace {
        from_supply,
        to_demand,
        color,
        queue,
        stack,
    } = workspace;
    debug_assert_eq!(from_supply.len(), meta.n_nodes());
    let class = meta.class_ids();

    for block in 0..meta.n_blocks() {
        let supplies = meta.members(block, Level::Supply);
        let transmissions = meta.members(block, Level::Transmission);
        let demands = meta.members(block, Level::Demand);

        reach_backward(topo, class, block, demands, to_demand, queue);
        if supplies.iter().chain(transmissions).any(|&v| !to_demand[v]) {
            return false; // constraints 1 / 4
        }
        reach_forward(topo, class, block, supplies, from_supply, queue);
        if demands.iter().chain(transmissions).any(|&v| !from_supply[v]) {
            return false; // constraints 2 / 3
        }

        let b = block as u32;
        let roots = supplies.iter().chain(transmissions).chain(demands).copied();
        if find_cycle_edge(topo, roots, color, stack, |i, j| {
            class[i] / 3 == b && class[j] / 3 == b
        })
        .is_some()
        {
            return false; // constraint 9, block half
        }
    }

    for spec in meta.interdeps() {
        let src_class = (spec.source_block * 3 + spec.source_level.rank()) as u32;
        let tgt_class = (spec.target_block * 3 + spec.target_level.rank()) as u32;
        let sources = meta.members(spec.source_block, spec.source_level);
        let targets = meta.members(spec.target_block, spec.target_level);
        if sources
            .iter()
            .any(|&u| !topo.successors(u).iter().any(|&v| class[v] == tgt_class))
        {
            return false; // constraint 5
        }
        if targets
            .iter()
            .any(|&v| !topo.predecessors(v).iter().any(|&u| class[u] == src_class))
        {
            return false; // constraint 6
        }
        if find_cycle_edge(topo, sources.iter().copied(), color, stack, |i, j| {
            class[i] == src_class && class[j] == tgt_class
        })
        .is_some()
        {
            return false; // constraint 9, interdependency half
        }
    }

    for (i, j) in topo.edges() {
        let (ci, cj) = (class[i] as usize, class[j] as usize);
        if ci / 3 == cj / 3 {
            if ci % 3 >= cj % 3 {
                return false; // constraint 7
            }
        } else if !meta.interdep_declared(ci, cj) {
            return false; // constraint 8
        }
    }

    true
}

/// O(1) validity check for a toggled pair, given that the pre-toggle
/// topology satisfied every constraint and `(i, j)` is feasible.
///
/// After removing a feasible edge, the only constraints that can have broken
/// are the degree-like ones at its endpoints; both survive exactly when `i`
/// kept a successor and `j` kept a predecessor. An addition trivially
/// satisfies the same test via the new edge itself, so one expression covers
/// both toggle directions.
pub fn validate_incremental(topo_after: &Topology, i: NodeId, j: NodeId) -> bool {
    topo_after.out_degree(i) > 0 && topo_after.in_degree(j) > 0
}

/// Forward reachability from `starts`, following only edges whose endpoints
/// both lie in `block` (per the dense `class` indices). Writes into
/// `reached`, clearing it first.
fn reach_forward(
    topo: &Topology,
    class: &[u32],
    block: usize,
    starts: &[NodeId],
    reached: &mut [bool],
    queue: &mut Vec<NodeId>,
) {
    let b = block as u32;
    reached.fill(false);
    queue.clear();
    for &s in starts {
        if !reached[s] {
            reached[s] = true;
            queue.push(s);
        }
    }
    while let Some(u) = queue.pop() {
        for &v in topo.successors(u) {
            if !reached[v] && class[v] / 3 == b {
                reached[v] = true;
                queue.push(v);
            }
        }
    }
}

/// Backward reachability: nodes with a block-internal path into `targets`.
/// Writes into `reached`, clearing it first.
fn reach_backward(
    topo: &Topology,
    class: &[u32],
    block: usize,
    targets: &[NodeId],
    reached: &mut [bool],
    queue: &mut Vec<NodeId>,
) {
    let b = block as u32;
    reached.fill(false);
    queue.clear();
    for &d in targets {
        if !reached[d] {
            reached[d] = true;
            queue.push(d);
        }
    }
    while let Some(u) = queue.pop() {
        for &v in topo.predecessors(u) {
            if !reached[v] && class[v] / 3 == b {
                reached[v] = true;
                queue.push(v);
            }
        }
    }
}

/// DFS traversal colors for cycle detection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CycleColor {
    White,
    Gray,
    Black,
}

/// Depth-first cycle detection on the subgraph of edges selected by `keep`,
/// started from `roots` (which must cover every node with a kept out-edge);
/// returns one back edge if a cycle exists. Clears `color` before use.
fn find_cycle_edge(
    topo: &Topology,
    roots: impl Iterator<Item = NodeId>,
    color: &mut [CycleColor],
    stack: &mut Vec<(NodeId, usize)>,
    keep: impl Fn(NodeId, NodeId) -> bool,
) -> Option<(NodeId, NodeId)> {
    use CycleColor::{Black, Gray, White};
    color.fill(White);

    for root in roots {
        if color[root] != White {
            continue;
        }
        // Iterative DFS; the stack holds (node, next successor index).
        stack.clear();
        stack.push((root, 0));
        color[root] = Gray;
        while let Some(top) = stack.len().checked_sub(1) {
            let (u, next) = stack[top];
            let succ = topo.successors(u);
            if next >= succ.len() {
                color[u] = Black;
                stack.pop();
                continue;
            }
            stack[top].1 += 1;
            let v = succ[next];
            if !keep(u, v) {
                continue;
            }
            match color[v] {
                Gray => return Some((u, v)),
                White => {
                    color[v] = Gray;
                    stack.push((v, 0));
                }
                Black => {}
            }
        }
    }
    None
}
