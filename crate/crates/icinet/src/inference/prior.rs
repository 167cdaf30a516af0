//! Hierarchical stochastic-block-model edge prior.
//!
//! Every ordered node pair carries a prior edge probability determined by the
//! endpoints' (block, level) labels through a lookup table `g`. The prior of a
//! whole topology is the product of independent Bernoulli terms over the pair
//! support, evaluated in log domain.

use crate::network::{FeasibleSet, Level, NetworkMeta, NodeId, ToggleKind, Topology};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which set of ordered pairs the prior (and the proposal) ranges over.
///
/// Under the infrastructure-dependent proposal the support is the feasible
/// set; structurally impossible pairs contribute nothing to the prior.
/// Under the unconstrained proposal every ordered pair `i != j` is toggleable
/// and pairs without a matching class entry fall back to `off_class`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProposalKind {
    /// Restrict edges to the feasible set and validate connectivity
    /// constraints after every toggle.
    Ip,
    /// Allow any ordered pair; no structural validation.
    Unconstrained,
}

/// One entry of the class-probability table `g`.
///
/// Blocks are referenced by index into `NetworkMeta::block_names`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassProbability {
    pub source_block: usize,
    pub source_level: Level,
    pub target_block: usize,
    pub target_level: Level,
    pub probability: f64,
}

/// Edge-probability lookup over (block, block, level, level) class pairs.
///
/// Classes absent from the table use `default_feasible` when the pair is in
/// the feasible set and `off_class` otherwise (the latter only matters under
/// the unconstrained proposal). Both default to a flat 0.5, which makes the
/// prior uniform over the support.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HsbmPrior {
    /// Explicit class entries; later duplicates override earlier ones.
    #[serde(default)]
    pub table: Vec<ClassProbability>,
    /// Probability for feasible pair classes not listed in `table`.
    #[serde(default = "default_half")]
    pub default_feasible: f64,
    /// Probability for pairs outside the feasible set (unconstrained only).
    #[serde(default = "default_half")]
    pub off_class: f64,
}

fn default_half() -> f64 {
    0.5
}

impl Default for HsbmPrior {
    fn default() -> Self {
        HsbmPrior {
            table: Vec::new(),
            default_feasible: 0.5,
            off_class: 0.5,
        }
    }
}

impl HsbmPrior {
    /// Flat prior: every pair in the support has probability 0.5.
    pub fn flat() -> Self {
        HsbmPrior::default()
    }

    /// Prior probability for the ordered pair `(i, j)`.
    pub fn probability(&self, meta: &NetworkMeta, feasible: &FeasibleSet, i: NodeId, j: NodeId) -> f64 {
        let (bi, li) = meta.class_of(i);
        let (bj, lj) = meta.class_of(j);
        for entry in self.table.iter().rev() {
            if entry.source_block == bi
                && entry.source_level == li
                && entry.target_block == bj
                && entry.target_level == lj
            {
                return entry.probability;
            }
        }
        if feasible.contains(i, j) {
            self.default_feasible
        } else {
            self.off_class
        }
    }
}

/// Precomputed log-probabilities for every pair in a chain's support.
///
/// Caches `log p` / `log(1-p)` per pair plus the empty-graph log prior so a
/// topology's log prior is a constant plus a sum over its edges, and a single
/// toggle is an O(1) delta.
#[derive(Debug, Clone)]
pub struct PriorTable {
    n_nodes: usize,
    /// `log p_ij` indexed by `i * n + j`; NaN outside the support.
    log_p: Vec<f64>,
    /// `log (1 - p_ij)`, same layout.
    log_1mp: Vec<f64>,
    /// Log prior of the empty graph: sum of `log(1-p)` over the support.
    empty_log_prior: f64,
}

impl PriorTable {
    /// Build the table over the support implied by `proposal`.
    ///
    /// Rejects any toggleable pair whose probability is not strictly inside
    /// (0, 1): a degenerate probability would pin the pair forever and make
    /// log-ratios infinite.
    pub fn new(
        meta: &NetworkMeta,
        feasible: &FeasibleSet,
        prior: &HsbmPrior,
        proposal: ProposalKind,
    ) -> Result<Self> {
        let n = meta.n_nodes();
        let mut log_p = vec![f64::NAN; n * n];
        let mut log_1mp = vec![f64::NAN; n * n];
        let mut empty_log_prior = 0.0;
        let mut fill = |i: NodeId, j: NodeId| -> Result<()> {
            let p = prior.probability(meta, feasible, i, j);
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::config(format!(
                    "prior probability for pair ({i}, {j}) must lie strictly in (0, 1), got {p}"
                )));
            }
            log_p[i * n + j] = p.ln();
            log_1mp[i * n + j] = (1.0 - p).ln();
            empty_log_prior += log_1mp[i * n + j];
            Ok(())
        };
        match proposal {
            ProposalKind::Ip => {
                for &(i, j) in feasible.pairs() {
                    fill(i, j)?;
                }
            }
            ProposalKind::Unconstrained => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            fill(i, j)?;
                        }
                    }
                }
            }
        }
        Ok(PriorTable {
            n_nodes: n,
            log_p,
            log_1mp,
            empty_log_prior,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// True if `(i, j)` belongs to the support this table was built over.
    pub fn in_support(&self, i: NodeId, j: NodeId) -> bool {
        !self.log_p[i * self.n_nodes + j].is_nan()
    }

    /// Log prior of a topology: empty-graph constant plus per-edge deltas.
    ///
    /// Every edge of `topo` must lie inside the support.
    pub fn log_prior(&self, topo: &Topology) -> f64 {
        let mut value = self.empty_log_prior;
        for (i, j) in topo.edges() {
            let idx = i * self.n_nodes + j;
            debug_assert!(
                !self.log_p[idx].is_nan(),
                "edge ({i}, {j}) lies outside the prior support"
            );
            value += self.log_p[idx] - self.log_1mp[idx];
        }
        value
    }

    /// Change in log prior caused by one toggle of the pair `(i, j)`.
    pub fn toggle_delta(&self, i: NodeId, j: NodeId, kind: ToggleKind) -> f64 {
        let idx = i * self.n_nodes + j;
        debug_assert!(!self.log_p[idx].is_nan());
        match kind {
            ToggleKind::Added => self.log_p[idx] - self.log_1mp[idx],
            ToggleKind::Removed => self.log_1mp[idx] - self.log_p[idx],
        }
    }
}

/// Log prior of `topo` under the block-model prior, over the feasible set.
///
/// Pairs outside the feasible set are structurally impossible and contribute
/// nothing. For the unconstrained variant (product over all ordered pairs
/// with `off_class` filling the gaps) see [`hsbm_log_prior_unconstrained`].
pub fn hsbm_log_prior(topo: &Topology, meta: &NetworkMeta, prior: &HsbmPrior) -> Result<f64> {
    let feasible = FeasibleSet::build(meta);
    let table = PriorTable::new(meta, &feasible, prior, ProposalKind::Ip)?;
    Ok(table.log_prior(topo))
}

/// Log prior over every ordered pair `i != j`, as used by the unconstrained
/// proposal.
pub fn hsbm_log_prior_unconstrained(
    topo: &Topology,
    meta: &NetworkMeta,
    prior: &HsbmPrior,
) -> Result<f64> {
    let feasible = FeasibleSet::build(meta);
    let table = PriorTable::new(meta, &feasible, prior, ProposalKind::Unconstrained)?;
    Ok(table.log_prior(topo))
}

/// Convenience: class table mapping pairs by block names instead of indices.
///
/// Used by configuration files, where blocks are naturally named.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedClassProbability {
    pub source_block: String,
    pub source_level: Level,
    pub target_block: String,
    pub target_level: Level,
    pub probability: f64,
}

/// Resolve named class entries against `meta`, producing an [`HsbmPrior`].
pub fn resolve_prior(
    meta: &NetworkMeta,
    entries: &[NamedClassProbability],
    default_feasible: f64,
    off_class: f64,
) -> Result<HsbmPrior> {
    let mut table = Vec::with_capacity(entries.len());
    for e in entries {
        let lookup = |name: &str| {
            meta.block_index(name).ok_or_else(|| {
                Error::config(format!("prior table references unknown block {name:?}"))
            })
        };
        table.push(ClassProbability {
            source_block: lookup(&e.source_block)?,
            source_level: e.source_level,
            target_block: lookup(&e.target_block)?,
            target_level: e.target_level,
            probability: e.probability,
        });
    }
    Ok(HsbmPrior {
        table,
        default_feasible,
        off_class,
    })
}
