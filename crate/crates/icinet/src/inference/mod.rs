//! Bayesian reconstruction: posterior sampling over topologies.
//!
//! The posterior combines the block-model edge prior ([`HsbmPrior`]) with the
//! cascade likelihood ([`log_likelihood_naive`], [`log_likelihood_edgelist`])
//! and is explored by a Metropolis-Hastings [`Chain`] whose proposals toggle
//! one feasible pair at a time. The infrastructure-dependent proposal keeps
//! the chain inside the structurally valid set by re-validating after every
//! toggle; the recorded samples summarize into per-edge posterior marginals.

mod chain;
mod init;
mod likelihood;
mod prior;
mod proposal;

pub use chain::{
    acceptance_log_ratio, run_chain, Chain, ChainState, ChainStats, PosteriorSamples, RecordMode,
    SamplerConfig, TracePoint, ValidationKind,
};
pub use init::init_topology;
pub use likelihood::{log_likelihood, log_likelihood_edgelist, log_likelihood_naive, LikelihoodKind};
pub use prior::{
    hsbm_log_prior, hsbm_log_prior_unconstrained, resolve_prior, ClassProbability, HsbmPrior,
    NamedClassProbability, PriorTable, ProposalKind,
};
pub use proposal::{propose, PairSupport, Proposal, SamplerKind};
