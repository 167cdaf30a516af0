//! Structural model of an interdependent critical infrastructure network.
//!
//! A network consists of *blocks* (one per infrastructure system: water,
//! power, ...), each of whose nodes sits at one of three *levels* — supply,
//! transmission, demand — plus a set of declared *interdependencies*: ordered
//! (block, level) → (block, level) class pairs along which one system's nodes
//! may depend on another's.
//!
//! Block membership and levels are observable metadata; the directed edges
//! are the unknown to be reconstructed. The metadata induces a [`FeasibleSet`]
//! of physically plausible directed pairs (within a block: supply→transmission,
//! transmission→demand, supply→demand; across blocks: exactly the declared
//! interdependency classes) and nine structural constraints that any plausible
//! topology must satisfy, checked by [`check_constraints_full`].

mod constraints;
mod counting;
mod feasible;
mod file;
mod topology;

pub use constraints::{
    check_constraints_full, check_constraints_full_with, check_constraints_ok,
    validate_incremental, ConstraintReport, ConstraintResult, ConstraintWorkspace, Violation,
    CONSTRAINT_DESCRIPTIONS,
};
pub use counting::{count_candidate_topologies, count_unconstrained};
pub use feasible::{FeasibleSet, PairClass};
pub use file::{load_network, save_network};
pub use topology::{Topology, ToggleKind};

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// Dense node index, `0..N-1`.
pub type NodeId = usize;

/// Hierarchy level of a node within its block.
///
/// Levels are ordered supply → transmission → demand; feasible intra-block
/// edges always point from a strictly higher level to a strictly lower one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Supply,
    Transmission,
    Demand,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Supply, Level::Transmission, Level::Demand];

    /// Position in the hierarchy: 0 = supply, 1 = transmission, 2 = demand.
    pub fn rank(self) -> usize {
        match self {
            Level::Supply => 0,
            Level::Transmission => 1,
            Level::Demand => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Supply => "supply",
            Level::Transmission => "transmission",
            Level::Demand => "demand",
        }
    }

    pub fn parse(s: &str) -> Result<Level> {
        match s {
            "supply" => Ok(Level::Supply),
            "transmission" => Ok(Level::Transmission),
            "demand" => Ok(Level::Demand),
            other => Err(Error::data(format!(
                "unknown level {other:?} (expected supply, transmission, or demand)"
            ))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One node: an external name plus its observable (block, level) class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeRecord {
    pub name: String,
    pub block: usize,
    pub level: Level,
}

/// A declared interdependency: nodes of the source (block, level) class may
/// supply nodes of the target class. Each declaration opens exactly the
/// ordered cross-block pairs source-class × target-class to the sampler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InterdepSpec {
    pub source_block: usize,
    pub source_level: Level,
    pub target_block: usize,
    pub target_level: Level,
}

/// Observable network metadata: nodes with their classes, block names, and
/// declared interdependencies. Everything except the edges themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkMeta {
    nodes: Vec<NodeRecord>,
    block_names: Vec<String>,
    interdeps: Vec<InterdepSpec>,
    /// members[block][level.rank()] = node ids of that class, ascending.
    members: Vec<[Vec<NodeId>; 3]>,
    /// node_class[id] = class_id(block, level); dense copy of the per-node
    /// class so hot loops avoid striding through `nodes`.
    node_class: Vec<u32>,
    /// declared[src * n_classes + dst] = the (src, dst) class pair is a
    /// declared interdependency.
    declared: Vec<bool>,
}

impl NetworkMeta {
    /// Validate and assemble metadata.
    ///
    /// Rejected as invalid: empty node sets, out-of-range block indices,
    /// duplicate block names, blocks without at least one supply and one
    /// demand node (their connectivity constraints would be unsatisfiable),
    /// self-referential or duplicate interdependency declarations, and
    /// interdependencies whose endpoint classes contain no nodes.
    pub fn new(
        block_names: Vec<String>,
        nodes: Vec<NodeRecord>,
        interdeps: Vec<InterdepSpec>,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::config("network has no nodes"));
        }
        if block_names.is_empty() {
            return Err(Error::config("network has no blocks"));
        }
        let mut seen = HashSet::new();
        for name in &block_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::config(format!("duplicate block name {name:?}")));
            }
        }

        let n_blocks = block_names.len();
        let mut members = vec![[const { Vec::new() }; 3]; n_blocks];
        for (id, node) in nodes.iter().enumerate() {
            if node.block >= n_blocks {
                return Err(Error::config(format!(
                    "node {:?} references block index {} but only {} blocks are declared",
                    node.name, node.block, n_blocks
                )));
            }
            members[node.block][node.level.rank()].push(id);
        }
        for (b, by_level) in members.iter().enumerate() {
            let occupied = by_level.iter().any(|m| !m.is_empty());
            if !occupied {
                return Err(Error::config(format!(
                    "block {:?} has no nodes",
                    block_names[b]
                )));
            }
            // A block without supply or without demand can never satisfy the
            // reachability constraints, so reject it up front.
            if by_level[Level::Supply.rank()].is_empty() {
                return Err(Error::config(format!(
                    "block {:?} has no supply nodes",
                    block_names[b]
                )));
            }
            if by_level[Level::Demand.rank()].is_empty() {
                return Err(Error::config(format!(
                    "block {:?} has no demand nodes",
                    block_names[b]
                )));
            }
        }

        let mut seen_specs = HashSet::new();
        for spec in &interdeps {
            if spec.source_block >= n_blocks || spec.target_block >= n_blocks {
                return Err(Error::config(
                    "interdependency references an undeclared block".to_string(),
                ));
            }
            if spec.source_block == spec.target_block {
                return Err(Error::config(format!(
                    "interdependency within block {:?} is not allowed",
                    block_names[spec.source_block]
                )));
            }
            if !seen_specs.insert(*spec) {
                return Err(Error::config(format!(
                    "duplicate interdependency {}.{} -> {}.{}",
                    block_names[spec.source_block],
                    spec.source_level,
                    block_names[spec.target_block],
                    spec.target_level
                )));
            }
            if members[spec.source_block][spec.source_level.rank()].is_empty()
                || members[spec.target_block][spec.target_level.rank()].is_empty()
            {
                return Err(Error::config(format!(
                    "interdependency {}.{} -> {}.{} references an empty level set",
                    block_names[spec.source_block],
                    spec.source_level,
                    block_names[spec.target_block],
                    spec.target_level
                )));
            }
        }

        let node_class: Vec<u32> = nodes
            .iter()
            .map(|n| (n.block * 3 + n.level.rank()) as u32)
            .collect();
        let n_classes = n_blocks * 3;
        let mut declared = vec![false; n_classes * n_classes];
        for spec in &interdeps {
            let src = spec.source_block * 3 + spec.source_level.rank();
            let dst = spec.target_block * 3 + spec.target_level.rank();
            declared[src * n_classes + dst] = true;
        }

        Ok(NetworkMeta {
            nodes,
            block_names,
            interdeps,
            members,
            node_class,
            declared,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_blocks(&self) -> usize {
        self.block_names.len()
    }

    pub fn node(&self, id: NodeId) -> &NodeRecord {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }

    pub fn block_name(&self, block: usize) -> &str {
        &self.block_names[block]
    }

    pub fn block_names(&self) -> &[String] {
        &self.block_names
    }

    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.block_names.iter().position(|b| b == name)
    }

    pub fn block_of(&self, id: NodeId) -> usize {
        self.nodes[id].block
    }

    pub fn level_of(&self, id: NodeId) -> Level {
        self.nodes[id].level
    }

    /// The (block, level) class of a node.
    pub fn class_of(&self, id: NodeId) -> (usize, Level) {
        (self.nodes[id].block, self.nodes[id].level)
    }

    /// Dense class index of a node: `block * 3 + level.rank()`.
    pub fn class_id(&self, id: NodeId) -> usize {
        self.node_class[id] as usize
    }

    /// Per-node dense class indices; `class_ids()[id] / 3` is the block,
    /// `% 3` the level rank. Compact enough to stay cache-resident in the
    /// traversal inner loops.
    pub fn class_ids(&self) -> &[u32] {
        &self.node_class
    }

    /// Number of (block, level) classes, occupied or not.
    pub fn n_classes(&self) -> usize {
        self.block_names.len() * 3
    }

    /// O(1): is the (source class, target class) pair a declared
    /// interdependency? Arguments are dense class indices.
    pub fn interdep_declared(&self, src_class: usize, dst_class: usize) -> bool {
        self.declared[src_class * self.n_classes() + dst_class]
    }

    /// Node ids of one (block, level) class, ascending.
    pub fn members(&self, block: usize, level: Level) -> &[NodeId] {
        &self.members[block][level.rank()]
    }

    pub fn interdeps(&self) -> &[InterdepSpec] {
        &self.interdeps
    }

    /// Content digest tying datasets to the metadata they were simulated on.
    ///
    /// Hashes names, classes, and interdependency declarations in order, so
    /// any change to the observable structure changes the digest.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for name in &self.block_names {
            h.update((name.len() as u64).to_le_bytes());
            h.update(name.as_bytes());
        }
        for node in &self.nodes {
            h.update((node.name.len() as u64).to_le_bytes());
            h.update(node.name.as_bytes());
            h.update((node.block as u64).to_le_bytes());
            h.update([node.level.rank() as u8]);
        }
        for spec in &self.interdeps {
            h.update((spec.source_block as u64).to_le_bytes());
            h.update([spec.source_level.rank() as u8]);
            h.update((spec.target_block as u64).to_le_bytes());
            h.update([spec.target_level.rank() as u8]);
        }
        let digest = h.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
