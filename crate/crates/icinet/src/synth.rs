//! Synthetic ground-truth generation.
//!
//! Builds a network in two passes: a *backbone* that satisfies every
//! structural constraint with as few edges as possible (each backbone edge is
//! individually load-bearing), then a *densification* pass that adds each
//! remaining feasible pair independently with a configured probability.
//! Additions can never break the constraints — feasible edges only relax
//! reachability — so the result is always a valid topology.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::network::{
    FeasibleSet, InterdepSpec, Level, NetworkMeta, NodeId, NodeRecord, PairClass, Topology,
};
use crate::seed::rng_for;
use crate::{Error, Result};

/// Node counts for one block.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockSpec {
    pub name: String,
    pub n_supply: usize,
    pub n_transmission: usize,
    pub n_demand: usize,
}

/// Interdependency declaration by block name, as written in config files.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterdepConfig {
    pub source_block: String,
    pub source_level: Level,
    pub target_block: String,
    pub target_level: Level,
}

/// Generator configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenConfig {
    pub blocks: Vec<BlockSpec>,
    #[serde(default)]
    pub interdeps: Vec<InterdepConfig>,
    /// Probability of each extra feasible intra-block pair beyond the backbone.
    #[serde(default)]
    pub intra_density: f64,
    /// Probability of each extra feasible cross-block pair beyond the backbone.
    #[serde(default)]
    pub interdep_density: f64,
    pub seed: u64,
}

/// Generate a constraint-valid ground-truth network.
///
/// Deterministic in the seed: the same config serializes byte-identically
/// every time. Densities outside [0, 1] and interdependencies over empty
/// level sets are rejected.
pub fn generate_icin(config: &GenConfig) -> Result<(NetworkMeta, Topology)> {
    for (label, d) in [
        ("intra_density", config.intra_density),
        ("interdep_density", config.interdep_density),
    ] {
        if !(0.0..=1.0).contains(&d) {
            return Err(Error::config(format!("{label} must lie in [0, 1], got {d}")));
        }
    }

    let meta = build_meta(config)?;
    let feasible = FeasibleSet::build(&meta);
    let mut rng = rng_for(config.seed);
    let mut topo = Topology::empty(meta.n_nodes());

    build_backbone(&mut topo, &meta, &mut rng);

    // Densification: every still-absent feasible pair joins independently
    // with its class probability, in lexicographic pair order.
    for pair_id in 0..feasible.len() {
        let (i, j) = feasible.pair(pair_id);
        if topo.has_edge(i, j) {
            continue;
        }
        let density = match feasible.class(pair_id) {
            PairClass::IntraBlock { .. } => config.intra_density,
            PairClass::Interdep { .. } => config.interdep_density,
        };
        if density > 0.0 && rng.random::<f64>() < density {
            topo.toggle_edge(i, j, &feasible)
                .expect("feasible pair listed by the feasible set");
        }
    }

    debug_assert!(
        crate::network::check_constraints_full(&topo, &meta).all_satisfied(),
        "generator produced an invalid topology"
    );
    Ok((meta, topo))
}

fn build_meta(config: &GenConfig) -> Result<NetworkMeta> {
    let mut nodes = Vec::new();
    let block_names: Vec<String> = config.blocks.iter().map(|b| b.name.clone()).collect();
    for (block, spec) in config.blocks.iter().enumerate() {
        for (level, count, tag) in [
            (Level::Supply, spec.n_supply, "s"),
            (Level::Transmission, spec.n_transmission, "t"),
            (Level::Demand, spec.n_demand, "d"),
        ] {
            for k in 0..count {
                nodes.push(NodeRecord {
                    name: format!("{}_{tag}{k}", spec.name),
                    block,
                    level,
                });
            }
        }
    }

    let mut interdeps = Vec::with_capacity(config.interdeps.len());
    for entry in &config.interdeps {
        let lookup = |name: &str| {
            block_names
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| Error::config(format!("interdependency references unknown block {name:?}")))
        };
        interdeps.push(InterdepSpec {
            source_block: lookup(&entry.source_block)?,
            source_level: entry.source_level,
            target_block: lookup(&entry.target_block)?,
            target_level: entry.target_level,
        });
    }

    NetworkMeta::new(block_names, nodes, interdeps)
}

/// Minimal valid skeleton. Every edge added here is critical: its removal
/// breaks one of the reachability or coverage constraints, which is what
/// makes backbone networks good worst cases for the sampler.
fn build_backbone(topo: &mut Topology, meta: &NetworkMeta, rng: &mut impl Rng) {
    for block in 0..meta.n_blocks() {
        let supplies = meta.members(block, Level::Supply);
        let transmissions = meta.members(block, Level::Transmission);
        let demands = meta.members(block, Level::Demand);

        // Each transmission node: exactly one supply feed, one demand drain.
        // Nothing later touches transmission degrees, so both edges stay
        // critical (constraints 3 and 4 break on their removal).
        for &t in transmissions {
            let &s = supplies.choose(rng).expect("blocks always have supply");
            topo.toggle_unchecked(s, t);
            let &d = demands.choose(rng).expect("blocks always have demand");
            topo.toggle_unchecked(t, d);
        }

        // Supplies that do not drain yet and demands that are not fed yet are
        // joined by a star-shaped matching: match as many one-to-one as
        // possible, then attach the excess side to random partners. Every
        // direct supply→demand edge ends with out-degree-one source or
        // in-degree-one target, so each is critical for constraint 1 or 2.
        let mut idle_supplies: Vec<NodeId> = supplies
            .iter()
            .copied()
            .filter(|&s| topo.out_degree(s) == 0)
            .collect();
        let mut unfed_demands: Vec<NodeId> = demands
            .iter()
            .copied()
            .filter(|&d| topo.in_degree(d) == 0)
            .collect();
        idle_supplies.shuffle(rng);
        unfed_demands.shuffle(rng);
        let matched = idle_supplies.len().min(unfed_demands.len());
        for k in 0..matched {
            topo.toggle_unchecked(idle_supplies[k], unfed_demands[k]);
        }
        for &s in &idle_supplies[matched..] {
            let &d = demands.choose(rng).expect("blocks always have demand");
            topo.toggle_unchecked(s, d);
        }
        for &d in &unfed_demands[matched..] {
            let &s = supplies.choose(rng).expect("blocks always have supply");
            topo.toggle_unchecked(s, d);
        }
    }

    // Each interdependency: cover both sides with star-shaped matchings so
    // every source feeds and every target is fed, while each edge stays
    // critical (one endpoint has class-degree exactly one).
    for spec in meta.interdeps() {
        let mut sources = meta
            .members(spec.source_block, spec.source_level)
            .to_vec();
        let mut targets = meta
            .members(spec.target_block, spec.target_level)
            .to_vec();
        sources.shuffle(rng);
        targets.shuffle(rng);

        let matched = sources.len().min(targets.len());
        for k in 0..matched {
            topo.toggle_unchecked(sources[k], targets[k]);
        }
        if sources.len() > targets.len() {
            for &u in &sources[matched..] {
                let &v = targets.choose(rng).expect("interdependency sides are non-empty");
                topo.toggle_unchecked(u, v);
            }
        } else {
            for &v in &targets[matched..] {
                let &u = sources.choose(rng).expect("interdependency sides are non-empty");
                topo.toggle_unchecked(u, v);
            }
        }
    }
}

/// Convenience: a NodeId-level description of where each node landed, used by
/// tests and the CLI to report generated structure.
pub fn describe_nodes(meta: &NetworkMeta) -> Vec<(NodeId, String)> {
    meta.nodes()
        .iter()
        .enumerate()
        .map(|(id, n)| {
            (
                id,
                format!("{} ({}.{})", n.name, meta.block_name(n.block), n.level),
            )
        })
        .collect()
}
