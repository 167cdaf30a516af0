//! Cascade likelihood under the susceptible-infected failure model.
//!
//! Given a candidate topology, a recorded cascade is scored transition by
//! transition: a functional node with `k` *active* failed in-neighbors fails
//! at the next step with probability `1 - (1-q)^k` and survives otherwise.
//! Under the Markovian convention only nodes that failed in the immediately
//! preceding step are active; otherwise every previously failed node keeps
//! pressing on its neighbors. Failure is absorbing, so already-failed nodes
//! contribute nothing.
//!
//! Two implementations are provided: a literal double loop over node pairs
//! per step (the reference semantics) and an edge-list traversal that only
//! touches the active front and its out-neighbors. They agree to floating
//! tolerance; the traversal is what the sampler runs per proposal.
//!
//! All scores are natural-log values; an observed failure that no active
//! neighbor can explain yields the explicit `-inf` sentinel, never a NaN.

use crate::cascade::{CascadeDataset, CascadeScenario};
use crate::network::{NodeId, Topology};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which likelihood implementation a sampler run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LikelihoodKind {
    /// Double loop over all node pairs per step; reference implementation.
    Naive,
    /// Active-front edge-list traversal; same value, lower complexity.
    #[default]
    Edgelist,
}

/// Dispatch on [`LikelihoodKind`].
pub fn log_likelihood(
    kind: LikelihoodKind,
    topo: &Topology,
    dataset: &CascadeDataset,
    q: f64,
) -> Result<f64> {
    match kind {
        LikelihoodKind::Naive => log_likelihood_naive(topo, dataset, q),
        LikelihoodKind::Edgelist => log_likelihood_edgelist(topo, dataset, q),
    }
}

fn check_inputs(topo: &Topology, dataset: &CascadeDataset, q: f64) -> Result<()> {
    if topo.n_nodes() != dataset.n_nodes() {
        return Err(Error::data(format!(
            "topology has {} nodes but the dataset was recorded on {}",
            topo.n_nodes(),
            dataset.n_nodes()
        )));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::config(format!(
            "propagation probability must lie in [0, 1], got {q}"
        )));
    }
    Ok(())
}

/// Reference log-likelihood: per step, a full double loop over node pairs.
///
/// Already-failed nodes contribute 0. Returns `-inf` if any observed failure
/// has probability zero under `topo` (no active failed in-neighbor).
pub fn log_likelihood_naive(topo: &Topology, dataset: &CascadeDataset, q: f64) -> Result<f64> {
    check_inputs(topo, dataset, q)?;
    let mut total = 0.0;
    for scenario in dataset.scenarios() {
        total += scenario_naive(topo, scenario, q, dataset.markovian);
        if total == f64::NEG_INFINITY {
            break;
        }
    }
    Ok(total)
}

fn scenario_naive(topo: &Topology, s: &CascadeScenario, q: f64, markovian: bool) -> f64 {
    let n = s.n_nodes();
    let mut ll = 0.0;
    for t in 1..s.t_max() {
        for j in 0..n {
            // Failure is absorbing: nodes already failed at t have no term.
            if matches!(s.first_failure(j), Some(ft) if ft <= t) {
                continue;
            }
            // Count active failed in-neighbors by scanning every other node.
            let mut k = 0usize;
            for i in 0..n {
                if i == j || !topo.has_edge(i, j) {
                    continue;
                }
                let active = match s.first_failure(i) {
                    Some(ft) if markovian => ft == t,
                    Some(ft) => ft <= t,
                    None => false,
                };
                if active {
                    k += 1;
                }
            }
            if s.first_failure(j) == Some(t + 1) {
                if k == 0 {
                    // Observed failure with no possible cause.
                    return f64::NEG_INFINITY;
                }
                ll += (1.0 - (1.0 - q).powi(k as i32)).ln();
            } else if k > 0 {
                // Survived all k active neighbors independently.
                ll += k as f64 * (1.0 - q).ln();
            }
        }
    }
    ll
}

/// Edge-list log-likelihood: identical value to [`log_likelihood_naive`],
/// computed by walking only the active front's out-edges per step.
///
/// Per target the per-source survival log-probabilities are accumulated and
/// then converted into a failure term `log(1 - e^acc)` or kept as the
/// survival term `acc`, so each step costs O(|front| + touched edges).
pub fn log_likelihood_edgelist(topo: &Topology, dataset: &CascadeDataset, q: f64) -> Result<f64> {
    check_inputs(topo, dataset, q)?;
    let n = topo.n_nodes();
    let ln_survive = (1.0 - q).ln();
    let mut acc = vec![0.0f64; n];
    let mut exposure = vec![0u32; n];
    let mut touched: Vec<NodeId> = Vec::with_capacity(n);
    let mut total = 0.0;
    for scenario in dataset.scenarios() {
        total += scenario_edgelist(
            topo,
            scenario,
            ln_survive,
            dataset.markovian,
            &mut acc,
            &mut exposure,
            &mut touched,
        );
        if total == f64::NEG_INFINITY {
            break;
        }
    }
    Ok(total)
}

fn scenario_edgelist(
    topo: &Topology,
    s: &CascadeScenario,
    ln_survive: f64,
    markovian: bool,
    acc: &mut [f64],
    exposure: &mut [u32],
    touched: &mut Vec<NodeId>,
) -> f64 {
    let mut ll = 0.0;
    // Only the non-Markovian convention needs the cumulative failed set.
    let mut failed_so_far: Vec<NodeId> = Vec::new();
    for t in 1..s.t_max() {
        if !markovian {
            failed_so_far.extend_from_slice(s.newly_failed(t));
        }
        let active: &[NodeId] = if markovian {
            s.newly_failed(t)
        } else {
            &failed_so_far
        };
        debug_assert!(touched.is_empty());
        for &u in active {
            for &v in topo.successors(u) {
                let functional = match s.first_failure(v) {
                    Some(ft) => ft > t,
                    None => true,
                };
                if !functional {
                    continue;
                }
                if exposure[v] == 0 {
                    touched.push(v);
                }
                exposure[v] += 1;
                acc[v] += ln_survive;
            }
        }
        // Failure terms: every node newly failed at t+1 must have been
        // exposed this step, else the transition is impossible.
        for &v in s.newly_failed(t + 1) {
            if exposure[v] == 0 {
                ll = f64::NEG_INFINITY;
            } else {
                // log(1 - (1-q)^k) computed from the accumulated exponent.
                ll += (-acc[v].exp_m1()).ln();
            }
        }
        if ll == f64::NEG_INFINITY {
            for &v in touched.iter() {
                exposure[v] = 0;
                acc[v] = 0.0;
            }
            touched.clear();
            return ll;
        }
        // Survival terms: exposed nodes that did not fail keep their
        // accumulated log survival product.
        for &v in touched.iter() {
            if s.first_failure(v) != Some(t + 1) {
                ll += acc[v];
            }
            exposure[v] = 0;
            acc[v] = 0.0;
        }
        touched.clear();
    }
    ll
}
