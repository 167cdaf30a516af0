//! Discrete-time stochastic failure propagation and cascade datasets.
//!
//! Failure is absorbing and spreads along directed edges: a functional node
//! with `k` *active* failed in-neighbors fails in the next step with
//! probability `1 − (1−q)^k`. Under the Markovian variant (the default),
//! only neighbors that failed in the immediately preceding step are active;
//! otherwise every failed neighbor keeps pushing.
//!
//! A scenario records first-failure times only — the full monotone state
//! matrix is implied. A dataset bundles scenarios with the propagation
//! probability they were simulated under and a digest of the network
//! metadata, so mismatched network/dataset pairs are caught at load time.

use std::path::Path;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::network::{NetworkMeta, NodeId, Topology};
use crate::seed::{rng_for, substream_indexed};
use crate::{Error, Result};

/// Probability that a functional node with `k` active failed in-neighbors
/// fails in the next step.
pub fn node_failure_probability(q: f64, k: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&q));
    1.0 - (1.0 - q).powi(k as i32)
}

/// One observed cascade: first-failure times over a fixed node set.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeScenario {
    n_nodes: usize,
    t_max: u32,
    /// Per node: the 1-based step at which it failed, if it ever did.
    first_failure: Vec<Option<u32>>,
    /// failed_at[t-1] = nodes that newly failed at step t, ascending.
    failed_at: Vec<Vec<NodeId>>,
}

impl CascadeScenario {
    /// Build from (step, node) first-failure pairs, validating that steps lie
    /// in `1..=t_max`, nodes are in range and fail at most once, and the
    /// cascade actually starts (at least one failure at step 1).
    pub fn new(n_nodes: usize, t_max: u32, failures: &[(u32, NodeId)]) -> Result<Self> {
        if t_max == 0 {
            return Err(Error::data("scenario duration must be at least 1"));
        }
        let mut first_failure = vec![None; n_nodes];
        let mut failed_at = vec![Vec::new(); t_max as usize];
        for &(t, node) in failures {
            if node >= n_nodes {
                return Err(Error::data(format!(
                    "failure references node {node}, but the network has {n_nodes} nodes"
                )));
            }
            if t == 0 || t > t_max {
                return Err(Error::data(format!(
                    "failure time {t} outside 1..={t_max} for node {node}"
                )));
            }
            if first_failure[node].is_some() {
                return Err(Error::data(format!(
                    "node {node} fails more than once; failures must be monotone"
                )));
            }
            first_failure[node] = Some(t);
            failed_at[(t - 1) as usize].push(node);
        }
        if failed_at[0].is_empty() {
            return Err(Error::data("scenario has no failure at step 1"));
        }
        for bucket in &mut failed_at {
            bucket.sort_unstable();
        }
        Ok(CascadeScenario {
            n_nodes,
            t_max,
            first_failure,
            failed_at,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Number of steps the scenario lasted.
    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    /// Nodes that newly failed at step `t` (1-based).
    pub fn newly_failed(&self, t: u32) -> &[NodeId] {
        &self.failed_at[(t - 1) as usize]
    }

    pub fn first_failure(&self, node: NodeId) -> Option<u32> {
        self.first_failure[node]
    }

    /// Monotone state: has `node` failed at or before step `t`?
    pub fn is_failed(&self, node: NodeId, t: u32) -> bool {
        self.first_failure[node].is_some_and(|ft| ft <= t)
    }

    pub fn n_failed(&self) -> usize {
        self.first_failure.iter().filter(|f| f.is_some()).count()
    }

    /// All (step, node) pairs, lexicographic — the serialized form.
    pub fn failures(&self) -> Vec<(u32, NodeId)> {
        let mut out = Vec::new();
        for (idx, bucket) in self.failed_at.iter().enumerate() {
            for &node in bucket {
                out.push((idx as u32 + 1, node));
            }
        }
        out
    }
}

/// One step of propagation: which functional nodes fail at step `t + 1`.
///
/// Draws one uniform variate per functional node with at least one active
/// in-neighbor, in ascending node order — nodes without active pressure
/// consume no randomness, so the draw sequence depends only on the active
/// front. Exposed at crate level so tests can pin per-step behavior.
pub(crate) fn step_failures(
    topo: &Topology,
    first_failure: &[Option<u32>],
    t: u32,
    q: f64,
    markovian: bool,
    rng: &mut impl Rng,
) -> Vec<NodeId> {
    let mut newly = Vec::new();
    for j in 0..topo.n_nodes() {
        if first_failure[j].is_some() {
            continue;
        }
        let active = topo
            .predecessors(j)
            .iter()
            .filter(|&&p| match first_failure[p] {
                Some(ft) => {
                    if markovian {
                        ft == t
                    } else {
                        ft <= t
                    }
                }
                None => false,
            })
            .count();
        if active > 0 && rng.random::<f64>() < node_failure_probability(q, active) {
            newly.push(j);
        }
    }
    newly
}

/// Simulate one cascade from an explicit set of initially failed nodes.
///
/// Runs until the first step with no new failures; the returned scenario's
/// duration is the last step that saw one.
pub fn simulate_cascade_from(
    topo: &Topology,
    initial: &[NodeId],
    q: f64,
    markovian: bool,
    rng: &mut impl Rng,
) -> Result<CascadeScenario> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::config(format!("q must lie in [0, 1], got {q}")));
    }
    if initial.is_empty() {
        return Err(Error::config("cascade needs at least one initial failure"));
    }
    let n = topo.n_nodes();
    let mut first_failure: Vec<Option<u32>> = vec![None; n];
    let mut failed_at: Vec<Vec<NodeId>> = Vec::new();
    let mut seeds: Vec<NodeId> = initial.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    if seeds.len() != initial.len() {
        return Err(Error::config("initial failure set contains duplicates"));
    }
    for &s in &seeds {
        if s >= n {
            return Err(Error::config(format!(
                "initial failure {s} outside the {n}-node network"
            )));
        }
        first_failure[s] = Some(1);
    }
    failed_at.push(seeds);

    let mut t = 1u32;
    loop {
        let newly = step_failures(topo, &first_failure, t, q, markovian, rng);
        if newly.is_empty() {
            break;
        }
        t += 1;
        for &j in &newly {
            first_failure[j] = Some(t);
        }
        failed_at.push(newly);
    }

    Ok(CascadeScenario {
        n_nodes: n,
        t_max: t,
        first_failure,
        failed_at,
    })
}

/// Simulate one cascade with `ceil(initial_ratio · N)` uniformly chosen
/// initial failures.
pub fn simulate_cascade(
    topo: &Topology,
    q: f64,
    initial_ratio: f64,
    markovian: bool,
    rng: &mut impl Rng,
) -> Result<CascadeScenario> {
    let n = topo.n_nodes();
    if !(initial_ratio > 0.0 && initial_ratio <= 1.0) {
        return Err(Error::config(format!(
            "initial failure ratio must lie in (0, 1], got {initial_ratio}"
        )));
    }
    let k = ((initial_ratio * n as f64).ceil() as usize).clamp(1, n);
    let seeds: Vec<NodeId> = sample(rng, n, k).into_iter().collect();
    simulate_cascade_from(topo, &seeds, q, markovian, rng)
}

/// A bundle of scenarios observed on one network.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeDataset {
    pub q: f64,
    pub markovian: bool,
    pub meta_digest: String,
    scenarios: Vec<CascadeScenario>,
    n_nodes: usize,
    /// Reserved: per-edge propagation probabilities overriding `q`. Carried
    /// through serialization for forward compatibility; current operations
    /// use the uniform `q` throughout.
    pub q_overrides: Option<Vec<(NodeId, NodeId, f64)>>,
}

impl CascadeDataset {
    pub fn new(
        q: f64,
        markovian: bool,
        meta_digest: String,
        n_nodes: usize,
        scenarios: Vec<CascadeScenario>,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::data(format!("dataset q must lie in [0, 1], got {q}")));
        }
        for s in &scenarios {
            if s.n_nodes() != n_nodes {
                return Err(Error::data(
                    "scenarios disagree on the network's node count".to_string(),
                ));
            }
        }
        Ok(CascadeDataset {
            q,
            markovian,
            meta_digest,
            scenarios,
            n_nodes,
            q_overrides: None,
        })
    }

    pub fn scenarios(&self) -> &[CascadeScenario] {
        &self.scenarios
    }

    pub fn n_scenarios(&self) -> usize {
        self.scenarios.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }
}

/// How many consecutive too-short cascades to tolerate per scenario before
/// concluding the requested minimum duration is unreachable.
const MAX_REJECTIONS: usize = 10_000;

/// Simulation parameters for dataset generation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SimParams {
    pub n_scenarios: usize,
    /// Scenarios shorter than this are rejected and re-simulated with fresh
    /// initial failures.
    pub min_steps: u32,
    pub q: f64,
    pub initial_ratio: f64,
    pub markovian: bool,
    pub seed: u64,
}

/// Simulate a dataset of `n_scenarios` cascades, each at least `min_steps`
/// long.
///
/// Each scenario draws from its own seed sub-stream, so scenario `i` is the
/// same regardless of how many rejections earlier scenarios burned. Aborts
/// with a diagnostic after 10^4 consecutive rejections of one scenario —
/// the configured (q, min_steps) combination cannot produce long enough
/// cascades on this topology.
pub fn generate_dataset(
    topo: &Topology,
    meta: &NetworkMeta,
    params: &SimParams,
) -> Result<CascadeDataset> {
    if params.n_scenarios == 0 {
        return Err(Error::config("dataset needs at least one scenario"));
    }
    if params.min_steps == 0 {
        return Err(Error::config("minimum duration must be at least 1"));
    }
    let mut scenarios = Vec::with_capacity(params.n_scenarios);
    for i in 0..params.n_scenarios {
        let mut rng = rng_for(substream_indexed(params.seed, "scenario", i as u64));
        let mut rejections = 0usize;
        loop {
            let scenario =
                simulate_cascade(topo, params.q, params.initial_ratio, params.markovian, &mut rng)?;
            if scenario.t_max() >= params.min_steps {
                scenarios.push(scenario);
                break;
            }
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(Error::data(format!(
                    "scenario {i}: {MAX_REJECTIONS} consecutive cascades ended before \
                     {} steps (q = {}, initial ratio = {}); this configuration cannot \
                     reach the requested duration",
                    params.min_steps, params.q, params.initial_ratio
                )));
            }
        }
    }
    CascadeDataset::new(
        params.q,
        params.markovian,
        meta.digest(),
        topo.n_nodes(),
        scenarios,
    )
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ScenarioEntry {
    #[serde(rename = "T")]
    t: u32,
    failures: Vec<(u32, u64)>,
}

#[derive(Serialize, Deserialize)]
struct CascadeFile {
    q: f64,
    #[serde(default = "default_markovian")]
    markovian: bool,
    meta_digest: String,
    scenarios: Vec<ScenarioEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q_overrides: Option<Vec<(u64, u64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Value>,
}

fn default_markovian() -> bool {
    true
}

/// Write a dataset as a cascade JSON file.
pub fn save_cascades(
    path: impl AsRef<Path>,
    dataset: &CascadeDataset,
    provenance: Option<Value>,
) -> Result<()> {
    let file = CascadeFile {
        q: dataset.q,
        markovian: dataset.markovian,
        meta_digest: dataset.meta_digest.clone(),
        scenarios: dataset
            .scenarios
            .iter()
            .map(|s| ScenarioEntry {
                t: s.t_max(),
                failures: s
                    .failures()
                    .into_iter()
                    .map(|(t, node)| (t, node as u64))
                    .collect(),
            })
            .collect(),
        q_overrides: dataset
            .q_overrides
            .as_ref()
            .map(|o| o.iter().map(|&(i, j, q)| (i as u64, j as u64, q)).collect()),
        provenance,
    };
    let mut body = serde_json::to_string_pretty(&file)?;
    body.push('\n');
    std::fs::write(path, body)?;
    Ok(())
}

/// Load a cascade JSON file against the metadata it claims to describe.
///
/// Rejects digest mismatches (the dataset was simulated on different
/// metadata), out-of-range node ids, non-monotone failures, and out-of-range
/// q.
pub fn load_cascades(path: impl AsRef<Path>, meta: &NetworkMeta) -> Result<CascadeDataset> {
    let path = path.as_ref();
    let body = std::fs::read_to_string(path)
        .map_err(|e| Error::data(format!("cannot read {}: {e}", path.display())))?;
    let file: CascadeFile = serde_json::from_str(&body)
        .map_err(|e| Error::data(format!("malformed cascade file {}: {e}", path.display())))?;

    let expected = meta.digest();
    if file.meta_digest != expected {
        return Err(Error::data(format!(
            "cascade file {} was simulated on different network metadata \
             (digest {} != {})",
            path.display(),
            file.meta_digest,
            expected
        )));
    }

    let n = meta.n_nodes();
    let mut scenarios = Vec::with_capacity(file.scenarios.len());
    for entry in &file.scenarios {
        let failures: Vec<(u32, NodeId)> = entry
            .failures
            .iter()
            .map(|&(t, node)| (t, node as NodeId))
            .collect();
        scenarios.push(CascadeScenario::new(n, entry.t, &failures)?);
    }
    let mut dataset = CascadeDataset::new(file.q, file.markovian, file.meta_digest, n, scenarios)?;
    if let Some(overrides) = file.q_overrides {
        let mut mapped = Vec::with_capacity(overrides.len());
        for (i, j, q) in overrides {
            let (i, j) = (i as NodeId, j as NodeId);
            if i >= n || j >= n || !(0.0..=1.0).contains(&q) {
                return Err(Error::data(format!(
                    "invalid q override ({i}, {j}, {q})"
                )));
            }
            mapped.push((i, j, q));
        }
        dataset.q_overrides = Some(mapped);
    }
    Ok(dataset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_for;

    /// s → t → d chain.
    fn chain() -> Topology {
        Topology::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn failure_probability_matches_closed_form() {
        assert!((node_failure_probability(0.4, 2) - 0.64).abs() < 1e-12);
        assert_eq!(node_failure_probability(0.4, 0), 0.0);
        assert_eq!(node_failure_probability(1.0, 3), 1.0);
    }

    #[test]
    fn deterministic_chain_fails_step_by_step() {
        let mut rng = rng_for(1);
        let scenario = simulate_cascade_from(&chain(), &[0], 1.0, true, &mut rng).unwrap();
        assert_eq!(scenario.t_max(), 3);
        assert_eq!(scenario.first_failure(0), Some(1));
        assert_eq!(scenario.first_failure(1), Some(2));
        assert_eq!(scenario.first_failure(2), Some(3));
    }

    #[test]
    fn zero_q_and_isolated_seeds_stop_immediately() {
        let mut rng = rng_for(2);
        let scenario = simulate_cascade_from(&chain(), &[0], 0.0, true, &mut rng).unwrap();
        assert_eq!(scenario.t_max(), 1);
        // Seed with no out-edges: nothing to infect.
        let scenario = simulate_cascade_from(&chain(), &[2], 0.9, true, &mut rng).unwrap();
        assert_eq!(scenario.t_max(), 1);
        assert_eq!(scenario.n_failed(), 1);
    }

    #[test]
    fn monotonicity_holds_by_construction_and_on_load() {
        let mut rng = rng_for(3);
        let topo = Topology::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        for _ in 0..50 {
            let s = simulate_cascade(&topo, 0.7, 0.25, true, &mut rng).unwrap();
            for node in 0..4 {
                if let Some(ft) = s.first_failure(node) {
                    for t in ft..=s.t_max() {
                        assert!(s.is_failed(node, t));
                    }
                    assert!(!s.is_failed(node, ft - 1));
                }
            }
        }
        // A node failing twice is rejected at construction.
        assert!(CascadeScenario::new(3, 3, &[(1, 0), (2, 0)]).is_err());
        // No failure at step 1 is rejected.
        assert!(CascadeScenario::new(3, 3, &[(2, 0)]).is_err());
    }

    #[test]
    fn markovian_step_ignores_stale_failures() {
        // Node 2 fed by node 0 (failed at step 1, stale) and node 1 (failed
        // at step 2, active). Scrubbing the stale failure must not change
        // the draw sequence or the outcome under the Markovian model.
        let topo = Topology::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let with_stale = [Some(1), Some(2), None];
        let scrubbed = [None, Some(2), None];
        for seed in 0..200 {
            let mut rng_a = rng_for(seed);
            let mut rng_b = rng_for(seed);
            let a = step_failures(&topo, &with_stale, 2, 0.4, true, &mut rng_a);
            let b = step_failures(&topo, &scrubbed, 2, 0.4, true, &mut rng_b);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn non_markovian_step_counts_stale_failures() {
        // Same layout, but without the Markovian restriction node 2 sees two
        // active parents; over many seeds the hit rate must approach
        // 1 − 0.6² = 0.64 rather than 0.4.
        let topo = Topology::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let state = [Some(1), Some(2), None];
        let trials = 100_000;
        let mut rng = rng_for(99);
        let hits = (0..trials)
            .filter(|_| !step_failures(&topo, &state, 2, 0.4, false, &mut rng).is_empty())
            .count();
        let freq = hits as f64 / trials as f64;
        let sigma = (0.64f64 * 0.36 / trials as f64).sqrt();
        assert!(
            (freq - 0.64).abs() < 3.0 * sigma,
            "frequency {freq} too far from 0.64"
        );
    }

    #[test]
    fn single_step_failure_rate_matches_closed_form() {
        // Two simultaneously failed parents: rate must match 1 − (1−q)².
        let topo = Topology::from_edges(3, &[(0, 2), (1, 2)]).unwrap();
        let state = [Some(1), Some(1), None];
        let trials = 100_000;
        let mut rng = rng_for(7);
        let hits = (0..trials)
            .filter(|_| !step_failures(&topo, &state, 1, 0.4, true, &mut rng).is_empty())
            .count();
        let freq = hits as f64 / trials as f64;
        let sigma = (0.64f64 * 0.36 / trials as f64).sqrt();
        assert!(
            (freq - 0.64).abs() < 3.0 * sigma,
            "frequency {freq} too far from 0.64"
        );
    }

    #[test]
    fn dataset_generation_is_deterministic_and_respects_min_steps() {
        let config = crate::testutil::three_block_config(11);
        let (meta, topo) = crate::synth::generate_icin(&config).unwrap();
        let params = SimParams {
            n_scenarios: 8,
            min_steps: 3,
            q: 0.4,
            initial_ratio: 0.2,
            markovian: true,
            seed: 5,
        };
        let a = generate_dataset(&topo, &meta, &params).unwrap();
        let b = generate_dataset(&topo, &meta, &params).unwrap();
        assert_eq!(a, b);
        assert!(a.scenarios().iter().all(|s| s.t_max() >= 3));
        assert_eq!(a.n_scenarios(), 8);
    }

    #[test]
    fn impossible_min_steps_aborts_with_diagnostic() {
        let topo = chain();
        let meta = {
            use crate::network::{NetworkMeta, NodeRecord};
            use crate::network::Level;
            NetworkMeta::new(
                vec!["b".into()],
                vec![
                    NodeRecord { name: "s".into(), block: 0, level: Level::Supply },
                    NodeRecord { name: "t".into(), block: 0, level: Level::Transmission },
                    NodeRecord { name: "d".into(), block: 0, level: Level::Demand },
                ],
                vec![],
            )
            .unwrap()
        };
        // q = 0 never propagates, so a 5-step cascade is unreachable.
        let params = SimParams {
            n_scenarios: 1,
            min_steps: 5,
            q: 0.0,
            initial_ratio: 0.4,
            markovian: true,
            seed: 1,
        };
        let err = generate_dataset(&topo, &meta, &params).unwrap_err();
        assert!(err.to_string().contains("consecutive cascades"));
    }

    #[test]
    fn cascade_files_round_trip_and_check_digest() {
        let config = crate::testutil::three_block_config(13);
        let (meta, topo) = crate::synth::generate_icin(&config).unwrap();
        let params = SimParams {
            n_scenarios: 3,
            min_steps: 2,
            q: 0.5,
            initial_ratio: 0.2,
            markovian: true,
            seed: 2,
        };
        let dataset = generate_dataset(&topo, &meta, &params).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cascades.json");
        save_cascades(&path, &dataset, None).unwrap();
        let loaded = load_cascades(&path, &meta).unwrap();
        assert_eq!(dataset, loaded);

        // A different network (extra node) must be rejected by digest.
        let mut other = config.clone();
        other.blocks[0].n_demand += 1;
        let (other_meta, _) = crate::synth::generate_icin(&other).unwrap();
        assert!(load_cascades(&path, &other_meta).is_err());
    }
}
