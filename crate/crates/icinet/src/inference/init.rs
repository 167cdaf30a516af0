//! Deterministic starting topology for the sampler.
//!
//! The chain may start from any graph that satisfies the structural
//! constraints and explains the observations (finite likelihood). This
//! initializer gets there in three deterministic passes:
//!
//! 1. **Co-failure wiring** — for every consecutive step pair of every
//!    scenario, add every feasible (newly failed at `t`) → (newly failed at
//!    `t+1`) edge. This over-connects, but over-connection only costs prior
//!    mass, never validity.
//! 2. **Connectivity repair** — give every node the minimum intra-block and
//!    interdependency edges its structural constraints demand, always picking
//!    the lowest-id partner.
//! 3. **Explaining edges** — any observed failure still without an active
//!    feasible predecessor gets one from the lowest-id candidate; if none
//!    exists the data contradicts the constraint system and we abort.

use crate::cascade::CascadeDataset;
use crate::network::{check_constraints_full, FeasibleSet, Level, NetworkMeta, NodeId, Topology};
use crate::{Error, Result};

/// Build a constraint-valid, observation-compatible starting topology.
///
/// Deterministic: depends only on the dataset and the metadata, so a chain
/// run is reproducible from its seed alone.
pub fn init_topology(dataset: &CascadeDataset, meta: &NetworkMeta) -> Result<Topology> {
    if dataset.n_nodes() != meta.n_nodes() {
        return Err(Error::data(format!(
            "dataset was recorded on {} nodes but the network has {}",
            dataset.n_nodes(),
            meta.n_nodes()
        )));
    }
    if dataset.n_scenarios() == 0 {
        return Err(Error::data("cannot initialize from an empty dataset"));
    }
    let feasible = FeasibleSet::build(meta);
    let mut topo = Topology::empty(meta.n_nodes());

    // Pass 1: every feasible front-to-front pair.
    for s in dataset.scenarios() {
        for t in 1..s.t_max() {
            for &u in s.newly_failed(t) {
                for &v in s.newly_failed(t + 1) {
                    if feasible.contains(u, v) && !topo.has_edge(u, v) {
                        topo.toggle_unchecked(u, v);
                    }
                }
            }
        }
    }

    repair_connectivity(&mut topo, meta);
    add_explaining_edges(&mut topo, meta, &feasible, dataset)?;

    debug_assert!(
        check_constraints_full(&topo, meta).all_satisfied(),
        "initializer produced a constraint-violating topology"
    );
    Ok(topo)
}

/// Add the cheapest edges that make constraints (1)-(6) hold.
///
/// Within a block only intra-block edges count toward supply-demand
/// connectivity, so cross-block edges are ignored when testing degrees.
/// Because intra-block edges strictly descend levels, connectivity reduces
/// to local degree conditions once transmissions are wired on both sides.
fn repair_connectivity(topo: &mut Topology, meta: &NetworkMeta) {
    for block in 0..meta.n_blocks() {
        let supplies = meta.members(block, Level::Supply);
        let demands = meta.members(block, Level::Demand);
        let s0 = supplies[0];
        let d0 = demands[0];
        let in_block = |id: NodeId| meta.block_of(id) == block;
        // Transmissions first: feeding them feeds the demands they serve.
        for &t in meta.members(block, Level::Transmission) {
            if !topo.predecessors(t).iter().any(|&u| in_block(u)) {
                topo.toggle_unchecked(s0, t);
            }
            if !topo.successors(t).iter().any(|&v| in_block(v)) {
                topo.toggle_unchecked(t, d0);
            }
        }
        // Every demand needs an intra-block feed; anything feeding it is by
        // now itself supply-connected.
        for &d in demands {
            if !topo.predecessors(d).iter().any(|&u| in_block(u)) {
                topo.toggle_unchecked(s0, d);
            }
        }
        // Every supply must serve something; transmissions already drain.
        for &s in supplies {
            if !topo.successors(s).iter().any(|&v| in_block(v)) {
                topo.toggle_unchecked(s, d0);
            }
        }
    }
    // Interdependency coverage: each dependent node needs a supplier, each
    // supplier a dependent, along the declared class pair.
    for spec in meta.interdeps() {
        let sources = meta.members(spec.source_block, spec.source_level);
        let targets = meta.members(spec.target_block, spec.target_level);
        let is_source = |id: NodeId| meta.class_of(id) == (spec.source_block, spec.source_level);
        let is_target = |id: NodeId| meta.class_of(id) == (spec.target_block, spec.target_level);
        for &v in targets {
            if !topo.predecessors(v).iter().any(|&u| is_source(u)) {
                topo.toggle_unchecked(sources[0], v);
            }
        }
        for &u in sources {
            if !topo.successors(u).iter().any(|&v| is_target(v)) {
                topo.toggle_unchecked(u, targets[0]);
            }
        }
    }
}

/// Ensure every observed failure has at least one active feasible
/// predecessor, adding lowest-id edges where needed.
fn add_explaining_edges(
    topo: &mut Topology,
    meta: &NetworkMeta,
    feasible: &FeasibleSet,
    dataset: &CascadeDataset,
) -> Result<()> {
    for (index, s) in dataset.scenarios().iter().enumerate() {
        let mut failed_so_far: Vec<NodeId> = Vec::new();
        for t in 1..s.t_max() {
            if !dataset.markovian {
                failed_so_far.extend_from_slice(s.newly_failed(t));
            }
            let active: &[NodeId] = if dataset.markovian {
                s.newly_failed(t)
            } else {
                &failed_so_far
            };
            for &v in s.newly_failed(t + 1) {
                if active.iter().any(|&u| topo.has_edge(u, v)) {
                    continue;
                }
                match active.iter().copied().filter(|&u| feasible.contains(u, v)).min() {
                    Some(u) => {
                        topo.toggle_unchecked(u, v);
                    }
                    None => {
                        let name = &meta.node(v).name;
                        return Err(Error::data(format!(
                            "scenario {index}: the failure of node {v} ({name}) at step {} \
                             cannot be explained by any feasible edge from the step-{t} \
                             active set; the data is inconsistent with the constraint system",
                            t + 1
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}
