//! The Metropolis-Hastings chain over topologies.
//!
//! Each step proposes one pair toggle, validates the toggled graph against
//! the structural constraints (infrastructure-dependent proposal only),
//! scores it, and accepts with the usual Hastings-corrected log ratio. A
//! constraint-violating toggle is undone and counted as a rejection; the
//! chain never leaves the valid set.
//!
//! Recording has two modes. *Standard* records the current state on every
//! post-warmup iteration (rejections included, respecting thinning), which is
//! the statistically correct estimator. *Accepted-only* reproduces the
//! reference algorithm literally: only accepted proposals advance the sample
//! counter. Both are deterministic for a fixed seed.

use crate::cascade::CascadeDataset;
use crate::inference::init::init_topology;
use crate::inference::likelihood::{log_likelihood, LikelihoodKind};
use crate::inference::prior::{HsbmPrior, PriorTable, ProposalKind};
use crate::inference::proposal::{propose, PairSupport, SamplerKind};
use crate::network::{
    check_constraints_full, check_constraints_ok, validate_incremental, ConstraintWorkspace,
    FeasibleSet, NetworkMeta, Topology,
};
use crate::seed::rng_for;
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// How post-warmup samples are recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordMode {
    /// Record every post-warmup iteration (rejections repeat the state).
    #[default]
    Standard,
    /// Record only accepted proposals, reproducing the reference algorithm
    /// literally. Warmup likewise counts accepted proposals.
    AcceptedOnly,
}

/// Which structural check runs after each toggle (infrastructure-dependent
/// proposal only; the unconstrained proposal never validates).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationKind {
    /// Post-toggle degree test on the two endpoints; equivalent to the full
    /// check when starting from a valid graph.
    #[default]
    Incremental,
    /// Re-run all nine constraints from scratch.
    Full,
}

fn default_true() -> bool {
    true
}

fn default_thinning() -> usize {
    1
}

/// Complete, serializable description of one sampler run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Number of recorded (post-warmup) samples.
    #[serde(rename = "samples")]
    pub n_samples: usize,
    /// Warmup length: iterations under `Standard`, acceptances under
    /// `AcceptedOnly`.
    #[serde(rename = "warmup")]
    pub n_warmup: usize,
    pub sampler: SamplerKind,
    pub proposal: ProposalKind,
    #[serde(default)]
    pub record_mode: RecordMode,
    /// Propagation probability the likelihood assumes (not inferred; may
    /// deliberately differ from the value that generated the data).
    pub q: f64,
    #[serde(default = "default_true")]
    pub markovian: bool,
    pub seed: u64,
    /// Record every `thinning`-th sample (1 = no thinning).
    #[serde(default = "default_thinning")]
    pub thinning: usize,
    #[serde(default)]
    pub likelihood: LikelihoodKind,
    #[serde(default)]
    pub validation: ValidationKind,
}

impl SamplerConfig {
    /// A conventional default: TNT + infrastructure-dependent proposal,
    /// 3000 samples after 2000 warmup.
    pub fn standard(q: f64, seed: u64) -> Self {
        SamplerConfig {
            n_samples: 3000,
            n_warmup: 2000,
            sampler: SamplerKind::Tnt,
            proposal: ProposalKind::Ip,
            record_mode: RecordMode::Standard,
            q,
            markovian: true,
            seed,
            thinning: 1,
            likelihood: LikelihoodKind::Edgelist,
            validation: ValidationKind::Incremental,
        }
    }

    /// The five canonical method presets, `m1` .. `m5`, differing in
    /// proposal, kernel, likelihood implementation, and validation depth.
    pub fn preset(method: &str, q: f64, seed: u64) -> Result<Self> {
        let mut config = SamplerConfig::standard(q, seed);
        match method {
            "m1" => {}
            "m2" => config.validation = ValidationKind::Full,
            "m3" => {
                config.likelihood = LikelihoodKind::Naive;
                config.validation = ValidationKind::Full;
            }
            "m4" => {
                config.sampler = SamplerKind::Random;
                config.likelihood = LikelihoodKind::Naive;
                config.validation = ValidationKind::Full;
            }
            "m5" => {
                config.proposal = ProposalKind::Unconstrained;
                config.sampler = SamplerKind::Random;
                config.likelihood = LikelihoodKind::Naive;
            }
            other => {
                return Err(Error::config(format!(
                    "unknown method {other:?}; expected one of m1..m5"
                )))
            }
        }
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::config("sampler needs at least one recorded sample"));
        }
        if !(self.q > 0.0 && self.q <= 1.0) {
            return Err(Error::config(format!(
                "sampler q must lie in (0, 1], got {}",
                self.q
            )));
        }
        if self.thinning == 0 {
            return Err(Error::config("thinning must be at least 1"));
        }
        Ok(())
    }
}

/// Current position of the chain with its cached log scores.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub topology: Topology,
    pub log_prior: f64,
    pub log_likelihood: f64,
}

/// One recorded sample's summary statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// |E| / N: directed edges per node.
    pub average_degree: f64,
    pub log_likelihood: f64,
    pub log_prior: f64,
}

/// Proposal bookkeeping over a whole run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStats {
    pub proposed: u64,
    pub accepted: u64,
    /// Toggles undone because the toggled graph violated the constraints.
    pub rejected_constraint: u64,
    /// Proposals turned down by the Metropolis-Hastings coin.
    pub rejected_mh: u64,
}

/// Accumulated posterior sample: per-edge occurrence counts plus the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSamples {
    n_nodes: usize,
    edge_counts: Vec<u64>,
    n_recorded: u64,
    trace: Vec<TracePoint>,
    stats: ChainStats,
}

impl PosteriorSamples {
    fn new(n_nodes: usize) -> Self {
        PosteriorSamples {
            n_nodes,
            edge_counts: vec![0; n_nodes * n_nodes],
            n_recorded: 0,
            trace: Vec::new(),
            stats: ChainStats::default(),
        }
    }

    fn record(&mut self, state: &ChainState) {
        for (i, j) in state.topology.edges() {
            self.edge_counts[i * self.n_nodes + j] += 1;
        }
        self.n_recorded += 1;
        self.trace.push(TracePoint {
            average_degree: state.topology.n_edges() as f64 / self.n_nodes as f64,
            log_likelihood: state.log_likelihood,
            log_prior: state.log_prior,
        });
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_recorded(&self) -> u64 {
        self.n_recorded
    }

    /// In how many recorded samples the edge `(i, j)` was present.
    pub fn edge_count(&self, i: usize, j: usize) -> u64 {
        self.edge_counts[i * self.n_nodes + j]
    }

    /// Row-major `n_nodes x n_nodes` counts.
    pub fn edge_counts(&self) -> &[u64] {
        &self.edge_counts
    }

    pub fn trace(&self) -> &[TracePoint] {
        &self.trace
    }

    pub fn stats(&self) -> &ChainStats {
        &self.stats
    }
}

/// Hastings log acceptance ratio `min(0, Δlog-posterior + log q_bwd - log q_fwd)`.
///
/// A `-inf` candidate likelihood short-circuits to certain rejection before
/// any arithmetic, so the current state's scores never meet an infinity. NaN
/// can then only arise from corrupted caches and is reported as an internal
/// invariant breach.
pub fn acceptance_log_ratio(
    current: &ChainState,
    candidate: &ChainState,
    log_q_forward: f64,
    log_q_backward: f64,
) -> Result<f64> {
    if candidate.log_likelihood == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let delta = candidate.log_likelihood + candidate.log_prior
        - current.log_likelihood
        - current.log_prior
        + log_q_backward
        - log_q_forward;
    if delta.is_nan() {
        return Err(Error::internal(format!(
            "acceptance ratio is NaN (candidate ll {} lp {}, current ll {} lp {})",
            candidate.log_likelihood, candidate.log_prior,
            current.log_likelihood, current.log_prior
        )));
    }
    Ok(delta.min(0.0))
}

/// Every `SPOT_CHECK_INTERVAL`-th recorded sample is re-validated against the
/// full constraint checker (infrastructure-dependent proposal only).
const SPOT_CHECK_INTERVAL: u64 = 1000;

/// Accepted-only recording can stall when the acceptance rate collapses;
/// give up after this many proposals per requested sample.
const ACCEPTED_ONLY_PATIENCE: u64 = 10_000;

/// A stepable Metropolis-Hastings chain; [`run_chain`] wraps the full loop.
pub struct Chain<'a> {
    meta: &'a NetworkMeta,
    dataset: &'a CascadeDataset,
    config: SamplerConfig,
    prior_table: PriorTable,
    support: PairSupport,
    state: ChainState,
    rng: ChaCha12Rng,
    stats: ChainStats,
    /// Scratch for full constraint checks, so per-proposal validation under
    /// `ValidationKind::Full` allocates nothing.
    workspace: ConstraintWorkspace,
}

impl<'a> Chain<'a> {
    pub fn new(
        meta: &'a NetworkMeta,
        feasible: &FeasibleSet,
        dataset: &'a CascadeDataset,
        prior: &HsbmPrior,
        config: SamplerConfig,
    ) -> Result<Self> {
        config.validate()?;
        if dataset.n_nodes() != meta.n_nodes() {
            return Err(Error::data(format!(
                "dataset was recorded on {} nodes but the network has {}",
                dataset.n_nodes(),
                meta.n_nodes()
            )));
        }
        if config.markovian != dataset.markovian {
            return Err(Error::config(format!(
                "sampler assumes markovian={} but the dataset was generated with markovian={}",
                config.markovian, dataset.markovian
            )));
        }
        if feasible.is_empty() {
            return Err(Error::config(
                "the feasible set is empty; nothing can be proposed",
            ));
        }
        let prior_table = PriorTable::new(meta, feasible, prior, config.proposal)?;
        let topology = init_topology(dataset, meta)?;
        if config.proposal == ProposalKind::Ip
            && !check_constraints_full(&topology, meta).all_satisfied()
        {
            return Err(Error::internal(
                "initial topology violates the structural constraints",
            ));
        }
        let log_likelihood = log_likelihood(config.likelihood, &topology, dataset, config.q)?;
        if log_likelihood == f64::NEG_INFINITY {
            return Err(Error::data(
                "initial topology cannot explain the observations under the configured q; \
                 the chain has nowhere to start",
            ));
        }
        let support = match config.proposal {
            ProposalKind::Ip => PairSupport::over_feasible(feasible, &topology),
            ProposalKind::Unconstrained => {
                PairSupport::all_ordered_pairs(meta.n_nodes(), &topology)
            }
        };
        let log_prior = prior_table.log_prior(&topology);
        let rng = rng_for(config.seed);
        Ok(Chain {
            meta,
            dataset,
            config,
            prior_table,
            support,
            state: ChainState {
                topology,
                log_prior,
                log_likelihood,
            },
            rng,
            stats: ChainStats::default(),
            workspace: ConstraintWorkspace::new(meta.n_nodes()),
        })
    }

    pub fn state(&self) -> &ChainState {
        &self.state
    }

    pub fn stats(&self) -> &ChainStats {
        &self.stats
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    /// One propose → toggle → validate → accept/reject step.
    ///
    /// Returns whether the proposal was accepted.
    pub fn step(&mut self) -> Result<bool> {
        self.stats.proposed += 1;
        let prop = propose(&self.support, self.config.sampler, &mut self.rng);
        let (i, j) = (prop.i, prop.j);
        let kind = self.state.topology.toggle_unchecked(i, j);

        if self.config.proposal == ProposalKind::Ip {
            let valid = match self.config.validation {
                ValidationKind::Incremental => validate_incremental(&self.state.topology, i, j),
                ValidationKind::Full => {
                    check_constraints_ok(&mut self.workspace, &self.state.topology, self.meta)
                }
            };
            if !valid {
                self.state.topology.toggle_unchecked(i, j);
                self.stats.rejected_constraint += 1;
                return Ok(false);
            }
        }

        let candidate_lp = self.state.log_prior + self.prior_table.toggle_delta(i, j, kind);
        let candidate_ll = log_likelihood(
            self.config.likelihood,
            &self.state.topology,
            self.dataset,
            self.config.q,
        )?;
        let candidate = ChainState {
            // The ratio only needs the scores; reuse the toggled topology in
            // place rather than cloning it.
            topology: Topology::empty(0),
            log_prior: candidate_lp,
            log_likelihood: candidate_ll,
        };
        let log_ratio = match acceptance_log_ratio(
            &self.state,
            &candidate,
            prop.log_q_forward,
            prop.log_q_backward,
        ) {
            Ok(r) => r,
            Err(e) => {
                self.state.topology.toggle_unchecked(i, j);
                return Err(e);
            }
        };

        if self.rng.random::<f64>().ln() < log_ratio {
            self.support.toggle(prop.pair_id);
            self.state.log_prior = candidate_lp;
            self.state.log_likelihood = candidate_ll;
            self.stats.accepted += 1;
            debug_assert!(
                (self.state.log_prior - self.prior_table.log_prior(&self.state.topology)).abs()
                    <= 1e-9 * self.state.log_prior.abs().max(1.0),
                "incremental log prior drifted from full recomputation"
            );
            Ok(true)
        } else {
            self.state.topology.toggle_unchecked(i, j);
            self.stats.rejected_mh += 1;
            Ok(false)
        }
    }

    /// Run warmup plus recording per the configured mode.
    pub fn run(&mut self) -> Result<PosteriorSamples> {
        let mut out = PosteriorSamples::new(self.meta.n_nodes());
        match self.config.record_mode {
            RecordMode::Standard => {
                for _ in 0..self.config.n_warmup {
                    self.step()?;
                }
                let total = self
                    .config
                    .n_samples
                    .checked_mul(self.config.thinning)
                    .ok_or_else(|| Error::config("samples x thinning overflows"))?;
                for iteration in 1..=total {
                    self.step()?;
                    if iteration % self.config.thinning == 0 {
                        self.record_into(&mut out)?;
                    }
                }
            }
            RecordMode::AcceptedOnly => {
                let goal = self.config.n_warmup as u64
                    + (self.config.n_samples * self.config.thinning) as u64;
                let patience = goal.saturating_mul(ACCEPTED_ONLY_PATIENCE);
                let mut accepted: u64 = 0;
                let mut steps: u64 = 0;
                while accepted < goal {
                    if steps >= patience {
                        return Err(Error::config(format!(
                            "accepted-only recording stalled: {accepted} acceptances in \
                             {steps} proposals; the chain mixes too slowly for this mode"
                        )));
                    }
                    steps += 1;
                    if self.step()? {
                        accepted += 1;
                        if accepted > self.config.n_warmup as u64 {
                            let since = accepted - self.config.n_warmup as u64;
                            if since % self.config.thinning as u64 == 0 {
                                self.record_into(&mut out)?;
                            }
                        }
                    }
                }
            }
        }
        out.stats = self.stats;
        Ok(out)
    }

    fn record_into(&self, out: &mut PosteriorSamples) -> Result<()> {
        out.record(&self.state);
        if self.config.proposal == ProposalKind::Ip
            && out.n_recorded % SPOT_CHECK_INTERVAL == 1
            && !check_constraints_full(&self.state.topology, self.meta).all_satisfied()
        {
            return Err(Error::internal(
                "a recorded topology violates the structural constraints",
            ));
        }
        Ok(())
    }
}

/// Convenience wrapper: build a [`Chain`] and run it to completion.
pub fn run_chain(
    meta: &NetworkMeta,
    feasible: &FeasibleSet,
    dataset: &CascadeDataset,
    prior: &HsbmPrior,
    config: SamplerConfig,
) -> Result<PosteriorSamples> {
    Chain::new(meta, feasible, dataset, prior, config)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{generate_dataset, CascadeScenario, SimParams};
    use crate::synth::generate_icin;
    use crate::testutil::{three_block_config, tiny_meta};

    fn tiny_fixture() -> (NetworkMeta, FeasibleSet, CascadeDataset) {
        let meta = tiny_meta();
        let feasible = FeasibleSet::build(&meta);
        // A short real cascade on the tiny system's full feasible graph.
        let scenario = CascadeScenario::new(4, 2, &[(1, 0), (2, 1), (2, 3)]).unwrap();
        let dataset =
            CascadeDataset::new(0.4, true, meta.digest(), 4, vec![scenario]).unwrap();
        (meta, feasible, dataset)
    }

    #[test]
    fn acceptance_ratio_edge_cases() {
        let topo = Topology::empty(2);
        let current = ChainState {
            topology: topo.clone(),
            log_prior: -1.0,
            log_likelihood: -2.0,
        };
        // Identical scores and a symmetric kernel: ratio 0 (gamma = 1).
        let same = ChainState {
            topology: topo.clone(),
            log_prior: -1.0,
            log_likelihood: -2.0,
        };
        assert_eq!(acceptance_log_ratio(&current, &same, -0.5, -0.5).unwrap(), 0.0);
        // -inf candidate: certain rejection.
        let dead = ChainState {
            topology: topo.clone(),
            log_prior: -1.0,
            log_likelihood: f64::NEG_INFINITY,
        };
        assert_eq!(
            acceptance_log_ratio(&current, &dead, -0.5, -0.5).unwrap(),
            f64::NEG_INFINITY
        );
        // Hand-computed case: deltas sum to ln(0.5) + Hastings ln(2) = 0.
        let cand = ChainState {
            topology: topo.clone(),
            log_prior: -1.0 + 0.5f64.ln(),
            log_likelihood: -2.0,
        };
        let r = acceptance_log_ratio(&current, &cand, 2.0f64.ln(), 2.0f64.ln() + 2.0f64.ln())
            .unwrap();
        assert!((r - 0.0).abs() < 1e-12);
        // And one strictly negative: ratio = ln(0.5).
        let r = acceptance_log_ratio(&current, &cand, -0.5, -0.5).unwrap();
        assert!((r - 0.5f64.ln()).abs() < 1e-12);
        // NaN (corrupted cache) is an internal error.
        let broken = ChainState {
            topology: topo,
            log_prior: f64::NAN,
            log_likelihood: -2.0,
        };
        assert!(acceptance_log_ratio(&current, &broken, -0.5, -0.5).is_err());
    }

    #[test]
    fn config_validation_rejects_bad_values() {
        let mut config = SamplerConfig::standard(0.4, 1);
        config.n_samples = 0;
        assert!(config.validate().is_err());
        let mut config = SamplerConfig::standard(0.0, 1);
        assert!(config.validate().is_err());
        config.q = 1.5;
        assert!(config.validate().is_err());
        let mut config = SamplerConfig::standard(0.4, 1);
        config.thinning = 0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn presets_match_the_method_grid() {
        let m1 = SamplerConfig::preset("m1", 0.4, 7).unwrap();
        assert_eq!(m1.proposal, ProposalKind::Ip);
        assert_eq!(m1.sampler, SamplerKind::Tnt);
        assert_eq!(m1.likelihood, LikelihoodKind::Edgelist);
        assert_eq!(m1.validation, ValidationKind::Incremental);
        let m2 = SamplerConfig::preset("m2", 0.4, 7).unwrap();
        assert_eq!(m2.validation, ValidationKind::Full);
        assert_eq!(m2.likelihood, LikelihoodKind::Edgelist);
        let m3 = SamplerConfig::preset("m3", 0.4, 7).unwrap();
        assert_eq!(m3.likelihood, LikelihoodKind::Naive);
        assert_eq!(m3.sampler, SamplerKind::Tnt);
        let m4 = SamplerConfig::preset("m4", 0.4, 7).unwrap();
        assert_eq!(m4.sampler, SamplerKind::Random);
        assert_eq!(m4.proposal, ProposalKind::Ip);
        let m5 = SamplerConfig::preset("m5", 0.4, 7).unwrap();
        assert_eq!(m5.proposal, ProposalKind::Unconstrained);
        assert!(SamplerConfig::preset("m6", 0.4, 7).is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let config = SamplerConfig::standard(0.4, 42);
        let json = serde_json::to_string(&config).unwrap();
        assert!(json.contains("\"samples\":3000"), "{json}");
        assert!(json.contains("\"record_mode\":\"standard\""), "{json}");
        let back: SamplerConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.n_samples, 3000);
        assert_eq!(back.sampler, SamplerKind::Tnt);
        // The pinned nine-key shape loads with the optional keys defaulted.
        let pinned = r#"{
            "samples": 10, "warmup": 5, "sampler": "tnt", "proposal": "ip",
            "record_mode": "accepted_only", "q": 0.4, "markovian": true,
            "seed": 3, "thinning": 2
        }"#;
        let parsed: SamplerConfig = serde_json::from_str(pinned).unwrap();
        assert_eq!(parsed.record_mode, RecordMode::AcceptedOnly);
        assert_eq!(parsed.thinning, 2);
        assert_eq!(parsed.likelihood, LikelihoodKind::Edgelist);
        assert_eq!(parsed.validation, ValidationKind::Incremental);
    }

    #[test]
    fn chain_stays_valid_and_deterministic() {
        let (meta, feasible, dataset) = tiny_fixture();
        let prior = HsbmPrior::flat();
        let mut config = SamplerConfig::standard(0.4, 99);
        config.n_samples = 500;
        config.n_warmup = 200;

        let mut chain = Chain::new(&meta, &feasible, &dataset, &prior, config.clone()).unwrap();
        for _ in 0..2000 {
            chain.step().unwrap();
            assert!(
                check_constraints_full(&chain.state().topology, &meta).all_satisfied(),
                "chain left the valid set"
            );
            assert!(chain.state().log_likelihood.is_finite());
        }
        let stats = *chain.stats();
        assert_eq!(stats.proposed, 2000);
        assert_eq!(
            stats.proposed,
            stats.accepted + stats.rejected_constraint + stats.rejected_mh
        );
        assert!(stats.accepted > 0);
        assert!(stats.rejected_constraint + stats.rejected_mh > 0);

        let a = run_chain(&meta, &feasible, &dataset, &prior, config.clone()).unwrap();
        let b = run_chain(&meta, &feasible, &dataset, &prior, config).unwrap();
        assert_eq!(a, b, "same seed must reproduce the run exactly");
        assert_eq!(a.n_recorded(), 500);
        assert_eq!(a.trace().len(), 500);
        for count in a.edge_counts() {
            assert!(*count <= a.n_recorded());
        }
    }

    #[test]
    fn marginals_outside_feasible_set_stay_zero_under_ip() {
        let (meta, feasible, dataset) = tiny_fixture();
        let prior = HsbmPrior::flat();
        let mut config = SamplerConfig::standard(0.4, 5);
        config.n_samples = 300;
        config.n_warmup = 100;
        let samples = run_chain(&meta, &feasible, &dataset, &prior, config).unwrap();
        for i in 0..meta.n_nodes() {
            for j in 0..meta.n_nodes() {
                if i != j && !feasible.contains(i, j) {
                    assert_eq!(samples.edge_count(i, j), 0);
                }
            }
        }
    }

    #[test]
    fn thinning_spreads_the_recorded_samples() {
        let (meta, feasible, dataset) = tiny_fixture();
        let prior = HsbmPrior::flat();
        let mut config = SamplerConfig::standard(0.4, 17);
        config.n_samples = 100;
        config.n_warmup = 50;
        config.thinning = 5;
        let samples = run_chain(&meta, &feasible, &dataset, &prior, config).unwrap();
        assert_eq!(samples.n_recorded(), 100);
        // 50 warmup + 100 x 5 recording iterations.
        assert_eq!(samples.stats().proposed, 550);
    }

    #[test]
    fn accepted_only_counts_only_acceptances() {
        let (meta, feasible, dataset) = tiny_fixture();
        let prior = HsbmPrior::flat();
        let mut config = SamplerConfig::standard(0.4, 23);
        config.n_samples = 50;
        config.n_warmup = 20;
        config.record_mode = RecordMode::AcceptedOnly;
        let samples = run_chain(&meta, &feasible, &dataset, &prior, config).unwrap();
        assert_eq!(samples.n_recorded(), 50);
        assert_eq!(samples.stats().accepted, 70);
        assert!(samples.stats().proposed >= 70);
    }

    #[test]
    fn unconstrained_proposal_roams_outside_the_feasible_set() {
        let (meta, feasible, dataset) = tiny_fixture();
        let prior = HsbmPrior::flat();
        let mut config = SamplerConfig::standard(0.4, 31);
        config.n_samples = 2000;
        config.n_warmup = 200;
        config.proposal = ProposalKind::Unconstrained;
        config.sampler = SamplerKind::Random;
        config.likelihood = LikelihoodKind::Naive;
        let samples = run_chain(&meta, &feasible, &dataset, &prior, config).unwrap();
        assert_eq!(samples.stats().rejected_constraint, 0);
        // With a flat prior over all 12 ordered pairs, some recorded mass
        // lands outside the feasible set.
        let outside: u64 = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && !feasible.contains(i, j))
            .map(|(i, j)| samples.edge_count(i, j))
            .sum();
        assert!(outside > 0, "unconstrained chain never left the feasible set");
    }

    #[test]
    fn markovian_mismatch_is_rejected() {
        let (meta, feasible, dataset) = tiny_fixture();
        let prior = HsbmPrior::flat();
        let mut config = SamplerConfig::standard(0.4, 1);
        config.markovian = false;
        assert!(Chain::new(&meta, &feasible, &dataset, &prior, config).is_err());
    }

    #[test]
    fn prior_only_sampling_from_empty_transitions() {
        // A dataset whose scenarios all end at T=1 has likelihood 0 for every
        // topology: the chain samples the prior restricted to valid graphs.
        let meta = tiny_meta();
        let feasible = FeasibleSet::build(&meta);
        let scenario = CascadeScenario::new(4, 1, &[(1, 0)]).unwrap();
        let dataset =
            CascadeDataset::new(0.4, true, meta.digest(), 4, vec![scenario]).unwrap();
        let prior = HsbmPrior::flat();
        let mut config = SamplerConfig::standard(0.4, 77);
        config.n_samples = 4000;
        config.n_warmup = 500;
        let samples = run_chain(&meta, &feasible, &dataset, &prior, config).unwrap();
        for point in samples.trace() {
            assert_eq!(point.log_likelihood, 0.0);
        }
        // Under the flat prior every valid graph is equally likely; edge
        // (0, 1) is in all of them (supply 0 must feed transmission 1 for it
        // to reach anything) -- its marginal must dominate.
        let m01 = samples.edge_count(0, 1) as f64 / samples.n_recorded() as f64;
        assert!(m01 > 0.9, "mandatory edge sampled at {m01}");
    }

    #[test]
    fn scaled_run_on_generated_network() {
        // A smoke-scale end-to-end run on the three-block system.
        let (meta, truth) = generate_icin(&three_block_config(2)).unwrap();
        let feasible = FeasibleSet::build(&meta);
        let params = SimParams {
            n_scenarios: 10,
            min_steps: 2,
            q: 0.4,
            initial_ratio: 0.2,
            markovian: true,
            seed: 2,
        };
        let dataset = generate_dataset(&truth, &meta, &params).unwrap();
        let prior = HsbmPrior::flat();
        let mut config = SamplerConfig::standard(0.4, 11);
        config.n_samples = 400;
        config.n_warmup = 300;
        let samples = run_chain(&meta, &feasible, &dataset, &prior, config).unwrap();
        assert_eq!(samples.n_recorded(), 400);
        assert!(samples.stats().accepted > 0);
        // The trace should hover at a plausible average degree, not explode.
        let last = samples.trace().last().unwrap();
        assert!(last.average_degree > 0.5 && last.average_degree < 5.0);
    }
}
