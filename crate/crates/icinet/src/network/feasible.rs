//! The feasible pair set: every ordered node pair a plausible topology may
//! contain, derived purely from observable metadata.

use serde::{Deserialize, Serialize};

use super::{NetworkMeta, NodeId};

/// Why a pair is feasible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    /// Within one block, pointing down the supply → transmission → demand
    /// hierarchy.
    IntraBlock { block: usize },
    /// Across blocks, opened by the declared interdependency with this index.
    Interdep { spec: usize },
}

/// All feasible ordered pairs, in lexicographic order, with O(1) membership
/// and pair-id lookup.
///
/// Intra-block pairs are the strictly level-decreasing ones (supply →
/// transmission, transmission → demand, supply → demand); cross-block pairs
/// are exactly the declared interdependency classes. Everything else is
/// structurally impossible and never touched by the constrained sampler.
#[derive(Clone, Debug)]
pub struct FeasibleSet {
    n_nodes: usize,
    pairs: Vec<(NodeId, NodeId)>,
    classes: Vec<PairClass>,
    /// Dense (i * n + j) → pair id, `NONE` where infeasible.
    id_of: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl FeasibleSet {
    pub fn build(meta: &NetworkMeta) -> Self {
        let n = meta.n_nodes();
        let mut pairs = Vec::new();
        let mut classes = Vec::new();
        let mut id_of = vec![NONE; n * n];

        for i in 0..n {
            let (bi, li) = meta.class_of(i);
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (bj, lj) = meta.class_of(j);
                let class = if bi == bj {
                    (li.rank() < lj.rank()).then_some(PairClass::IntraBlock { block: bi })
                } else {
                    meta.interdeps()
                        .iter()
                        .position(|s| {
                            (s.source_block, s.source_level) == (bi, li)
                                && (s.target_block, s.target_level) == (bj, lj)
                        })
                        .map(|spec| PairClass::Interdep { spec })
                };
                if let Some(class) = class {
                    id_of[i * n + j] = pairs.len() as u32;
                    pairs.push((i, j));
                    classes.push(class);
                }
            }
        }

        FeasibleSet {
            n_nodes: n,
            pairs,
            classes,
            id_of,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn contains(&self, i: NodeId, j: NodeId) -> bool {
        self.pair_id(i, j).is_some()
    }

    /// Position of `(i, j)` in the lexicographic pair list.
    pub fn pair_id(&self, i: NodeId, j: NodeId) -> Option<usize> {
        let id = self.id_of[i * self.n_nodes + j];
        (id != NONE).then_some(id as usize)
    }

    /// All feasible pairs, lexicographic.
    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn pair(&self, pair_id: usize) -> (NodeId, NodeId) {
        self.pairs[pair_id]
    }

    pub fn class(&self, pair_id: usize) -> PairClass {
        self.classes[pair_id]
    }
}
