//! Pair proposal kernels for the Metropolis-Hastings chain.
//!
//! A proposal names one toggleable ordered pair plus the log-probabilities of
//! proposing that move and of proposing its reverse from the toggled state —
//! everything the acceptance ratio needs from the kernel.
//!
//! Two kernels are provided. The *random* kernel draws uniformly over the
//! whole support and is symmetric. The *tie / no-tie* kernel first picks the
//! edge set or the non-edge set with equal probability, then a uniform member
//! of it; its asymmetry is what the backward term corrects for. When one side
//! is empty the other is chosen with probability 1.

use crate::network::{FeasibleSet, NodeId, Topology};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Which proposal kernel the sampler uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    /// Tie / no-tie: pick edge set or non-edge set at ½, then uniform within.
    Tnt,
    /// Uniform over the whole support; symmetric.
    Random,
}

/// O(1) bookkeeping of which support pairs are currently edges.
///
/// Keeps the support partitioned into a `present` and an `absent` list with a
/// slot map back from pair id, so toggling and uniform sampling on either
/// side are constant-time. The chain must call [`PairSupport::toggle`] on
/// every toggle it commits so the partition tracks the topology.
#[derive(Debug, Clone)]
pub struct PairSupport {
    pairs: Vec<(NodeId, NodeId)>,
    present: Vec<u32>,
    absent: Vec<u32>,
    /// pair id → index within whichever of the two lists holds it.
    slot: Vec<u32>,
    is_present: Vec<bool>,
}

impl PairSupport {
    /// Support = the feasible set (infrastructure-dependent proposal).
    pub fn over_feasible(feasible: &FeasibleSet, topo: &Topology) -> Self {
        Self::from_pairs(feasible.pairs().to_vec(), topo)
    }

    /// Support = every ordered pair `i != j` (unconstrained proposal).
    pub fn all_ordered_pairs(n: usize, topo: &Topology) -> Self {
        let mut pairs = Vec::with_capacity(n * (n - 1));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    pairs.push((i, j));
                }
            }
        }
        Self::from_pairs(pairs, topo)
    }

    fn from_pairs(pairs: Vec<(NodeId, NodeId)>, topo: &Topology) -> Self {
        let mut present = Vec::new();
        let mut absent = Vec::new();
        let mut slot = vec![0u32; pairs.len()];
        let mut is_present = vec![false; pairs.len()];
        for (id, &(i, j)) in pairs.iter().enumerate() {
            if topo.has_edge(i, j) {
                slot[id] = present.len() as u32;
                is_present[id] = true;
                present.push(id as u32);
            } else {
                slot[id] = absent.len() as u32;
                absent.push(id as u32);
            }
        }
        debug_assert_eq!(
            present.len(),
            topo.n_edges(),
            "every edge of the topology must lie inside the support"
        );
        PairSupport {
            pairs,
            present,
            absent,
            slot,
            is_present,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn n_present(&self) -> usize {
        self.present.len()
    }

    pub fn n_absent(&self) -> usize {
        self.absent.len()
    }

    pub fn pair(&self, id: u32) -> (NodeId, NodeId) {
        self.pairs[id as usize]
    }

    pub fn contains_edge(&self, id: u32) -> bool {
        self.is_present[id as usize]
    }

    /// Move a pair to the other side of the partition (after the topology
    /// itself toggled it).
    pub fn toggle(&mut self, id: u32) {
        let (from, to): (&mut Vec<u32>, &mut Vec<u32>) = if self.is_present[id as usize] {
            (&mut self.present, &mut self.absent)
        } else {
            (&mut self.absent, &mut self.present)
        };
        let at = self.slot[id as usize] as usize;
        let moved = *from.last().expect("list holding the pair cannot be empty");
        from.swap_remove(at);
        if at < from.len() {
            self.slot[moved as usize] = at as u32;
        }
        self.slot[id as usize] = to.len() as u32;
        to.push(id);
        self.is_present[id as usize] = !self.is_present[id as usize];
    }

    fn sample_present(&self, rng: &mut impl Rng) -> u32 {
        self.present[rng.random_range(0..self.present.len())]
    }

    fn sample_absent(&self, rng: &mut impl Rng) -> u32 {
        self.absent[rng.random_range(0..self.absent.len())]
    }

    fn sample_any(&self, rng: &mut impl Rng) -> u32 {
        rng.random_range(0..self.pairs.len()) as u32
    }
}

/// One proposed move: the pair to toggle and the kernel log-probabilities.
#[derive(Debug, Clone, Copy)]
pub struct Proposal {
    pub pair_id: u32,
    pub i: NodeId,
    pub j: NodeId,
    /// log q(candidate | current)
    pub log_q_forward: f64,
    /// log q(current | candidate), evaluated against the post-toggle counts
    pub log_q_backward: f64,
}

/// Draw one move from the configured kernel.
///
/// The support must be nonempty (enforced at configuration time).
pub fn propose(support: &PairSupport, sampler: SamplerKind, rng: &mut impl Rng) -> Proposal {
    debug_assert!(!support.is_empty());
    match sampler {
        SamplerKind::Random => {
            let pair_id = support.sample_any(rng);
            let (i, j) = support.pair(pair_id);
            let log_q = -(support.len() as f64).ln();
            Proposal {
                pair_id,
                i,
                j,
                log_q_forward: log_q,
                log_q_backward: log_q,
            }
        }
        SamplerKind::Tnt => propose_tnt(support, rng),
    }
}

fn propose_tnt(support: &PairSupport, rng: &mut impl Rng) -> Proposal {
    let e = support.n_present();
    let a = support.n_absent();
    // Probability of picking a side: ½ normally, 1 when the other is empty.
    let side_log = |forced: bool| if forced { 0.0 } else { 0.5f64.ln() };
    let removal = if e == 0 {
        false // no edges: addition with probability 1
    } else if a == 0 {
        true // complete support: removal with probability 1
    } else {
        rng.random::<f64>() < 0.5
    };
    if removal {
        let pair_id = support.sample_present(rng);
        let (i, j) = support.pair(pair_id);
        // Reverse move: add this pair back from the (e-1, a+1) state.
        Proposal {
            pair_id,
            i,
            j,
            log_q_forward: side_log(a == 0) - (e as f64).ln(),
            log_q_backward: side_log(e - 1 == 0) - ((a + 1) as f64).ln(),
        }
    } else {
        let pair_id = support.sample_absent(rng);
        let (i, j) = support.pair(pair_id);
        // Reverse move: remove this pair from the (e+1, a-1) state.
        Proposal {
            pair_id,
            i,
            j,
            log_q_forward: side_log(e == 0) - (a as f64).ln(),
            log_q_backward: side_log(a - 1 == 0) - ((e + 1) as f64).ln(),
        }
    }
}
