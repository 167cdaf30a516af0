//! Posterior summarization, link-prediction metrics, and exact oracles.
//!
//! Recorded samples condense into per-edge posterior marginals; thresholding
//! the marginals against a known ground truth yields precision/recall/F1
//! curves. For systems small enough to enumerate, the exact posterior over
//! all constraint-valid topologies serves as a correctness oracle for the
//! sampler. CSV and SVG exporters live here too, since every artifact a run
//! writes is a view of these summaries.

use crate::cascade::CascadeDataset;
use crate::inference::{
    log_likelihood_naive, HsbmPrior, PosteriorSamples, PriorTable, ProposalKind,
};
use crate::network::{check_constraints_full, FeasibleSet, NetworkMeta, NodeId, Topology};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Posterior edge probabilities, row-major `n x n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMarginals {
    n_nodes: usize,
    values: Vec<f64>,
}

impl EdgeMarginals {
    pub fn from_values(n_nodes: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n_nodes * n_nodes);
        EdgeMarginals { n_nodes, values }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> f64 {
        self.values[i * self.n_nodes + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Per-edge posterior probability: occurrence count over recorded samples.
pub fn edge_marginals(samples: &PosteriorSamples) -> Result<EdgeMarginals> {
    if samples.n_recorded() == 0 {
        return Err(Error::data(
            "cannot form marginals from zero recorded samples",
        ));
    }
    let n = samples.n_nodes();
    let denom = samples.n_recorded() as f64;
    let values = samples
        .edge_counts()
        .iter()
        .map(|&c| c as f64 / denom)
        .collect();
    Ok(EdgeMarginals { n_nodes: n, values })
}

/// The recorded per-sample average degree (|E| / N), in recording order.
pub fn average_degree_trace(samples: &PosteriorSamples) -> Vec<f64> {
    samples.trace().iter().map(|p| p.average_degree).collect()
}

/// One point of a precision-recall sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrPoint {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Outcome of a full threshold sweep against a ground truth.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub pr_curve: Vec<PrPoint>,
    pub best_f1: f64,
    pub best_threshold: f64,
    pub marginals: EdgeMarginals,
}

/// The default sweep: thresholds 0.00, 0.01, ..., 1.00.
pub fn default_thresholds() -> Vec<f64> {
    (0..=100).map(|k| k as f64 / 100.0).collect()
}

/// Sweep thresholds over the marginals and score edge predictions against
/// `truth`.
///
/// A pair is predicted positive when its marginal is `>=` the threshold
/// (ties predict positive). With `mask` given, only feasible pairs enter the
/// sweep — structurally impossible pairs are guaranteed negatives and would
/// inflate precision; pass `None` for runs made with the unconstrained
/// proposal, where every ordered pair is in play.
///
/// Degenerate conventions: an empty prediction set has precision 1 (no false
/// positives), an empty truth set recall 1; F1 is 0 whenever P + R = 0.
pub fn precision_recall_curve(
    marginals: &EdgeMarginals,
    truth: &Topology,
    thresholds: &[f64],
    mask: Option<&FeasibleSet>,
) -> EvalReport {
    let n = marginals.n_nodes();
    let pairs: Vec<(NodeId, NodeId)> = match mask {
        Some(feasible) => feasible.pairs().to_vec(),
        None => (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .collect(),
    };
    let truth_in_scope = pairs.iter().filter(|&&(i, j)| truth.has_edge(i, j)).count();

    let mut pr_curve = Vec::with_capacity(thresholds.len());
    for &threshold in thresholds {
        let mut predicted = 0usize;
        let mut true_positive = 0usize;
        for &(i, j) in &pairs {
            if marginals.get(i, j) >= threshold {
                predicted += 1;
                if truth.has_edge(i, j) {
                    true_positive += 1;
                }
            }
        }
        let precision = if predicted == 0 {
            1.0
        } else {
            true_positive as f64 / predicted as f64
        };
        let recall = if truth_in_scope == 0 {
            1.0
        } else {
            true_positive as f64 / truth_in_scope as f64
        };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        pr_curve.push(PrPoint {
            threshold,
            precision,
            recall,
            f1,
        });
    }

    let best = pr_curve
        .iter()
        .copied()
        .max_by(|a, b| a.f1.partial_cmp(&b.f1).expect("F1 is never NaN"))
        .expect("threshold sweep cannot be empty");
    EvalReport {
        pr_curve,
        best_f1: best.f1,
        best_threshold: best.threshold,
        marginals: marginals.clone(),
    }
}

/// Exactly enumerated posterior over all constraint-valid topologies.
#[derive(Debug, Clone)]
pub struct ExactPosterior {
    n_nodes: usize,
    marginals: Vec<f64>,
    /// Number of constraint-valid topologies in the feasible power set.
    n_valid: u64,
    /// Posterior probability per valid graph, keyed by the feasible-pair
    /// bitmask (bit k = feasible pair k present).
    graph_probabilities: Vec<(u64, f64)>,
}

impl ExactPosterior {
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_valid(&self) -> u64 {
        self.n_valid
    }

    pub fn marginal(&self, i: NodeId, j: NodeId) -> f64 {
        self.marginals[i * self.n_nodes + j]
    }

    pub fn marginals(&self) -> EdgeMarginals {
        EdgeMarginals {
            n_nodes: self.n_nodes,
            values: self.marginals.clone(),
        }
    }

    pub fn graph_probabilities(&self) -> &[(u64, f64)] {
        &self.graph_probabilities
    }
}

/// Hard cap on the feasible-set size the exact oracle will enumerate.
const ENUMERATION_GUARD: usize = 20;

/// Enumerate all `2^|S|` feasible edge subsets, keep the constraint-valid
/// ones, and compute the exact normalized posterior.
///
/// Small systems only (`|S| <= 20`); this is the sampler's ground truth in
/// tests, so it deliberately reuses nothing from the chain: full constraint
/// checks, the naive likelihood, and log-sum-exp normalization.
pub fn enumerate_exact_posterior(
    meta: &NetworkMeta,
    feasible: &FeasibleSet,
    dataset: &CascadeDataset,
    prior: &HsbmPrior,
    q: f64,
) -> Result<ExactPosterior> {
    let s = feasible.len();
    if s > ENUMERATION_GUARD {
        return Err(Error::config(format!(
            "exact enumeration is limited to {ENUMERATION_GUARD} feasible pairs, got {s}"
        )));
    }
    if dataset.n_nodes() != meta.n_nodes() {
        return Err(Error::data(
            "dataset node count does not match the network".to_string(),
        ));
    }
    let n = meta.n_nodes();
    let prior_table = PriorTable::new(meta, feasible, prior, ProposalKind::Ip)?;

    // Score every valid subset.
    let mut scored: Vec<(u64, f64)> = Vec::new();
    for mask in 0u64..(1u64 << s) {
        let mut topo = Topology::empty(n);
        for k in 0..s {
            if mask & (1 << k) != 0 {
                let (i, j) = feasible.pair(k);
                topo.toggle_unchecked(i, j);
            }
        }
        if !check_constraints_full(&topo, meta).all_satisfied() {
            continue;
        }
        let weight = prior_table.log_prior(&topo) + log_likelihood_naive(&topo, dataset, q)?;
        scored.push((mask, weight));
    }
    if scored.is_empty() {
        return Err(Error::data(
            "no constraint-valid topology exists for this system",
        ));
    }
    let n_valid = scored.len() as u64;

    // Normalize in log domain.
    let max_weight = scored
        .iter()
        .map(|&(_, w)| w)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_weight == f64::NEG_INFINITY {
        return Err(Error::data(
            "every constraint-valid topology has zero likelihood; the data is inconsistent",
        ));
    }
    let total: f64 = scored.iter().map(|&(_, w)| (w - max_weight).exp()).sum();
    let mut marginals = vec![0.0f64; n * n];
    let mut graph_probabilities = Vec::with_capacity(scored.len());
    for &(mask, w) in &scored {
        let p = (w - max_weight).exp() / total;
        graph_probabilities.push((mask, p));
        for k in 0..s {
            if mask & (1 << k) != 0 {
                let (i, j) = feasible.pair(k);
                marginals[i * n + j] += p;
            }
        }
    }
    debug_assert!(
        (graph_probabilities.iter().map(|&(_, p)| p).sum::<f64>() - 1.0).abs() < 1e-12,
        "normalized posterior must sum to 1"
    );
    Ok(ExactPosterior {
        n_nodes: n,
        marginals,
        n_valid,
        graph_probabilities,
    })
}

/// Largest absolute difference between two marginal matrices.
pub fn max_marginal_difference(a: &EdgeMarginals, b: &EdgeMarginals) -> f64 {
    assert_eq!(a.n_nodes, b.n_nodes);
    a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Total-variation-style distance: half the L1 difference entrywise.
pub fn total_variation_distance(a: &EdgeMarginals, b: &EdgeMarginals) -> f64 {
    assert_eq!(a.n_nodes, b.n_nodes);
    0.5 * a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
}

/// Write `i,j,p_ij` rows for every pair in scope (feasible pairs when a mask
/// is given, every ordered pair otherwise).
pub fn write_marginals_csv(
    path: impl AsRef<Path>,
    marginals: &EdgeMarginals,
    mask: Option<&FeasibleSet>,
) -> Result<()> {
    let n = marginals.n_nodes();
    let mut text = String::from("i,j,p_ij\n");
    let mut push = |i: NodeId, j: NodeId| {
        let _ = writeln!(text, "{i},{j},{}", marginals.get(i, j));
    };
    match mask {
        Some(feasible) => {
            for &(i, j) in feasible.pairs() {
                push(i, j);
            }
        }
        None => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        push(i, j);
                    }
                }
            }
        }
    }
    fs::write(path, text)?;
    Ok(())
}

/// Write the dense marginal matrix: one row per line, comma-separated, no
/// trailing newline.
pub fn export_heatmap_csv(marginals: &EdgeMarginals, path: impl AsRef<Path>) -> Result<()> {
    let n = marginals.n_nodes();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| marginals.get(i, j).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    fs::write(path, rows.join("\n"))?;
    Ok(())
}

/// Render the marginals as a self-contained grayscale SVG heatmap, with rules
/// where consecutive node ids cross a block boundary.
pub fn export_heatmap_svg(
    marginals: &EdgeMarginals,
    meta: &NetworkMeta,
    path: impl AsRef<Path>,
) -> Result<()> {
    const CELL: usize = 12;
    const PAD: usize = 2;
    let n = marginals.n_nodes();
    let side = n * CELL + 2 * PAD;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" \
         viewBox=\"0 0 {side} {side}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{side}\" height=\"{side}\" fill=\"white\"/>");
    for i in 0..n {
        for j in 0..n {
            let p = marginals.get(i, j).clamp(0.0, 1.0);
            // Darker cell = higher probability.
            let shade = (255.0 * (1.0 - p)).round() as u8;
            if shade == 255 {
                continue; // white on white
            }
            let _ = writeln!(
                svg,
                "<rect x=\"{}\" y=\"{}\" width=\"{CELL}\" height=\"{CELL}\" \
                 fill=\"rgb({shade},{shade},{shade})\"/>",
                PAD + j * CELL,
                PAD + i * CELL,
            );
        }
    }
    // Block boundaries (meaningful when node ids group blocks contiguously).
    for id in 1..n {
        if meta.block_of(id) != meta.block_of(id - 1) {
            let at = PAD + id * CELL;
            let _ = writeln!(
                svg,
                "<line x1=\"{at}\" y1=\"{PAD}\" x2=\"{at}\" y2=\"{}\" \
                 stroke=\"#cc3333\" stroke-width=\"1\"/>",
                PAD + n * CELL
            );
            let _ = writeln!(
                svg,
                "<line x1=\"{PAD}\" y1=\"{at}\" x2=\"{}\" y2=\"{at}\" \
                 stroke=\"#cc3333\" stroke-width=\"1\"/>",
                PAD + n * CELL
            );
        }
    }
    svg.push_str("</svg>\n");
    fs::write(path, svg)?;
    Ok(())
}

/// Write the per-sample trace: `sample_index,avg_degree,log_likelihood,log_prior`.
pub fn write_trace_csv(path: impl AsRef<Path>, samples: &PosteriorSamples) -> Result<()> {
    let mut text = String::from("sample_index,avg_degree,log_likelihood,log_prior\n");
    for (index, point) in samples.trace().iter().enumerate() {
        let _ = writeln!(
            text,
            "{index},{},{},{}",
            point.average_degree, point.log_likelihood, point.log_prior
        );
    }
    fs::write(path, text)?;
    Ok(())
}

/// Write the threshold sweep: `threshold,precision,recall,f1`.
pub fn write_pr_curve_csv(path: impl AsRef<Path>, curve: &[PrPoint]) -> Result<()> {
    let mut text = String::from("threshold,precision,recall,f1\n");
    for point in curve {
        let _ = writeln!(
            text,
            "{},{},{},{}",
            point.threshold, point.precision, point.recall, point.f1
        );
    }
    fs::write(path, text)?;
    Ok(())
}
