//! Directed topology over dense node ids, stored as paired adjacency lists.

use serde::{Deserialize, Serialize};

use super::{FeasibleSet, NodeId};
use crate::{Error, Result};

/// What a toggle did to the pair it touched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ToggleKind {
    Added,
    Removed,
}

/// A simple directed graph: no self-loops, at most one edge per ordered pair.
///
/// Forward and reverse adjacency lists are kept sorted and mutually
/// consistent, so successor/predecessor queries and degree lookups are cheap
/// in both directions — the sampler's validity check is just two degree
/// reads.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    forward: Vec<Vec<NodeId>>,
    reverse: Vec<Vec<NodeId>>,
    n_edges: usize,
}

impl Topology {
    /// Edge-free graph on `n` nodes.
    pub fn empty(n: usize) -> Self {
        Topology {
            forward: vec![Vec::new(); n],
            reverse: vec![Vec::new(); n],
            n_edges: 0,
        }
    }

    /// Build from an explicit edge list, rejecting out-of-range endpoints,
    /// self-loops, and duplicate pairs.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut topo = Topology::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::data(format!(
                    "edge ({i}, {j}) references a node outside 0..{n}"
                )));
            }
            if i == j {
                return Err(Error::data(format!("self-loop on node {i}")));
            }
            if !topo.insert(i, j) {
                return Err(Error::data(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(topo)
    }

    pub fn n_nodes(&self) -> usize {
        self.forward.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.forward[i].binary_search(&j).is_ok()
    }

    /// Successors of `i`, ascending.
    pub fn successors(&self, i: NodeId) -> &[NodeId] {
        &self.forward[i]
    }

    /// Predecessors of `j`, ascending.
    pub fn predecessors(&self, j: NodeId) -> &[NodeId] {
        &self.reverse[j]
    }

    pub fn out_degree(&self, i: NodeId) -> usize {
        self.forward[i].len()
    }

    pub fn in_degree(&self, j: NodeId) -> usize {
        self.reverse[j].len()
    }

    /// All edges in lexicographic (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.forward
            .iter()
            .enumerate()
            .flat_map(|(i, succ)| succ.iter().map(move |&j| (i, j)))
    }

    /// Flip the presence of `(i, j)`, restricted to the feasible pair set.
    ///
    /// The sampler only ever proposes feasible pairs, so an infeasible pair
    /// here is a proposal bug and is rejected as an error rather than
    /// silently applied.
    pub fn toggle_edge(
        &mut self,
        i: NodeId,
        j: NodeId,
        feasible: &FeasibleSet,
    ) -> Result<ToggleKind> {
        if !feasible.contains(i, j) {
            return Err(Error::internal(format!(
                "toggle of infeasible pair ({i}, {j})"
            )));
        }
        Ok(self.toggle_unchecked(i, j))
    }

    /// Flip the presence of `(i, j)` without consulting a feasible set.
    ///
    /// Used by the unconstrained sampler, whose pair universe is all ordered
    /// pairs. Panics on self-loops: no caller has a use for them.
    pub fn toggle_unchecked(&mut self, i: NodeId, j: NodeId) -> ToggleKind {
        assert_ne!(i, j, "self-loops are never part of the model");
        if self.remove(i, j) {
            ToggleKind::Removed
        } else {
            self.insert(i, j);
            ToggleKind::Added
        }
    }

    /// Insert `(i, j)`; returns false if it was already present.
    fn insert(&mut self, i: NodeId, j: NodeId) -> bool {
        match self.forward[i].binary_search(&j) {
            Ok(_) => false,
            Err(pos) => {
                self.forward[i].insert(pos, j);
                let rpos = self.reverse[j]
                    .binary_search(&i)
                    .expect_err("forward and reverse lists out of sync");
                self.reverse[j].insert(rpos, i);
                self.n_edges += 1;
                true
            }
        }
    }

    /// Remove `(i, j)`; returns false if it was absent.
    fn remove(&mut self, i: NodeId, j: NodeId) -> bool {
        match self.forward[i].binary_search(&j) {
            Err(_) => false,
            Ok(pos) => {
                self.forward[i].remove(pos);
                let rpos = self.reverse[j]
                    .binary_search(&i)
                    .expect("forward and reverse lists out of sync");
                self.reverse[j].remove(rpos);
                self.n_edges -= 1;
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toggle_twice_restores_exactly() {
        let mut topo = Topology::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        let before = topo.clone();
        assert_eq!(topo.toggle_unchecked(0, 3), ToggleKind::Added);
        assert_eq!(topo.toggle_unchecked(0, 3), ToggleKind::Removed);
        assert_eq!(topo, before);
        assert_eq!(topo.toggle_unchecked(0, 1), ToggleKind::Removed);
        assert_eq!(topo.toggle_unchecked(0, 1), ToggleKind::Added);
        assert_eq!(topo, before);
    }

    #[test]
    fn from_edges_rejects_malformed_input() {
        assert!(Topology::from_edges(2, &[(0, 2)]).is_err());
        assert!(Topology::from_edges(2, &[(1, 1)]).is_err());
        assert!(Topology::from_edges(2, &[(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn edges_iterate_lexicographically() {
        let topo = Topology::from_edges(4, &[(2, 0), (0, 3), (0, 1), (2, 3)]).unwrap();
        let edges: Vec<_> = topo.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 3), (2, 0), (2, 3)]);
    }
}
