//! `reconstruct`: posterior topology inference from cascade observations.

use clap::Args;
use icinet::cascade::load_cascades;
use icinet::evaluation::{
    default_thresholds, edge_marginals, export_heatmap_csv, export_heatmap_svg,
    precision_recall_curve, write_marginals_csv, write_pr_curve_csv, write_trace_csv, EvalReport,
};
use icinet::inference::{
    resolve_prior, run_chain, HsbmPrior, LikelihoodKind, NamedClassProbability, ProposalKind,
    RecordMode, SamplerConfig, SamplerKind, ValidationKind,
};
use icinet::network::{load_network, FeasibleSet};
use icinet::seed::substream;
use icinet::{Error, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Args)]
pub struct ReconstructArgs {
    /// Network file; node metadata drives the inference, and any edges it
    /// carries serve as ground truth for evaluation
    #[arg(long, default_value = "network.json")]
    network: PathBuf,

    /// Cascade observations to reconstruct from
    #[arg(long, default_value = "cascades.json")]
    cascades: PathBuf,

    /// Method preset: m1 (structured proposal, TNT kernel, edge-list
    /// likelihood, incremental validation) through m5 (unconstrained
    /// proposal, uniform kernel, naive likelihood)
    #[arg(long, value_parser = ["m1", "m2", "m3", "m4", "m5"])]
    method: Option<String>,

    /// Override the preset's proposal support
    #[arg(long, value_parser = parse_proposal)]
    proposal: Option<ProposalKind>,

    /// Override the preset's pair-selection kernel
    #[arg(long, value_parser = parse_sampler)]
    sampler: Option<SamplerKind>,

    /// Override the preset's likelihood implementation
    #[arg(long, value_parser = parse_likelihood)]
    likelihood: Option<LikelihoodKind>,

    /// Override the preset's constraint-validation depth
    #[arg(long, value_parser = parse_validation)]
    validation: Option<ValidationKind>,

    /// Recorded (post-warmup) samples
    #[arg(long, default_value_t = 3000)]
    samples: usize,

    /// Warmup iterations discarded before recording
    #[arg(long, default_value_t = 2000)]
    warmup: usize,

    /// What counts toward the sample budget
    #[arg(long, value_parser = parse_record_mode, default_value = "standard")]
    record_mode: RecordMode,

    /// Record every Nth sample
    #[arg(long, default_value_t = 1)]
    thinning: usize,

    /// Propagation probability assumed by the likelihood (defaults to the
    /// value recorded in the cascade file)
    #[arg(long)]
    q: Option<f64>,

    /// Edge-probability prior as a JSON file; defaults to a flat 0.5
    #[arg(long)]
    prior: Option<PathBuf>,

    /// Skip evaluation even when the network file carries ground-truth edges
    #[arg(long)]
    no_eval: bool,

    /// Also render the posterior marginals as an SVG heatmap
    #[arg(long)]
    heatmap: bool,

    /// Master seed (falls back to ICINET_SEED, then to OS entropy)
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory (created if missing)
    #[arg(long, default_value = "reconstruction")]
    out_dir: PathBuf,
}

fn parse_proposal(s: &str) -> Result<ProposalKind> {
    match s {
        "ip" => Ok(ProposalKind::Ip),
        "unconstrained" => Ok(ProposalKind::Unconstrained),
        other => Err(Error::Config(format!(
            "unknown proposal {other:?}; expected ip or unconstrained"
        ))),
    }
}

fn parse_sampler(s: &str) -> Result<SamplerKind> {
    match s {
        "tnt" => Ok(SamplerKind::Tnt),
        "random" => Ok(SamplerKind::Random),
        other => Err(Error::Config(format!(
            "unknown sampler {other:?}; expected tnt or random"
        ))),
    }
}

fn parse_likelihood(s: &str) -> Result<LikelihoodKind> {
    match s {
        "naive" => Ok(LikelihoodKind::Naive),
        "edgelist" => Ok(LikelihoodKind::Edgelist),
        other => Err(Error::Config(format!(
            "unknown likelihood {other:?}; expected naive or edgelist"
        ))),
    }
}

fn parse_validation(s: &str) -> Result<ValidationKind> {
    match s {
        "incremental" => Ok(ValidationKind::Incremental),
        "full" => Ok(ValidationKind::Full),
        other => Err(Error::Config(format!(
            "unknown validation {other:?}; expected incremental or full"
        ))),
    }
}

fn parse_record_mode(s: &str) -> Result<RecordMode> {
    match s {
        "standard" => Ok(RecordMode::Standard),
        "accepted-only" | "accepted_only" => Ok(RecordMode::AcceptedOnly),
        other => Err(Error::Config(format!(
            "unknown record mode {other:?}; expected standard or accepted-only"
        ))),
    }
}

/// On-disk prior description: class table plus fallbacks.
#[derive(Deserialize)]
struct PriorFile {
    #[serde(default)]
    table: Vec<NamedClassProbability>,
    #[serde(default = "half")]
    default_feasible: f64,
    #[serde(default = "half")]
    off_class: f64,
}

fn half() -> f64 {
    0.5
}

fn load_prior(path: &Path, meta: &icinet::network::NetworkMeta) -> Result<HsbmPrior> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let file: PriorFile = serde_json::from_str(&body)
        .map_err(|e| Error::Config(format!("malformed prior {}: {e}", path.display())))?;
    resolve_prior(meta, &file.table, file.default_feasible, file.off_class)
}

/// Assemble the chain configuration from preset + overrides.
fn build_config(args: &ReconstructArgs, q: f64, chain_seed: u64) -> Result<SamplerConfig> {
    let mut config = match &args.method {
        Some(name) => SamplerConfig::preset(name, q, chain_seed)?,
        None => SamplerConfig::standard(q, chain_seed),
    };
    if let Some(v) = args.proposal {
        config.proposal = v;
    }
    if let Some(v) = args.sampler {
        config.sampler = v;
    }
    if let Some(v) = args.likelihood {
        config.likelihood = v;
    }
    if let Some(v) = args.validation {
        config.validation = v;
    }
    config.n_samples = args.samples;
    config.n_warmup = args.warmup;
    config.record_mode = args.record_mode;
    config.thinning = args.thinning;
    Ok(config)
}

pub fn run(args: ReconstructArgs) -> Result<()> {
    let (master, fresh) = crate::resolve_master_seed(args.seed)?;
    let (meta, truth) = load_network(&args.network)?;
    let dataset = load_cascades(&args.cascades, &meta)?;
    let feasible = FeasibleSet::build(&meta);

    let q = args.q.unwrap_or(dataset.q);
    let mut config = build_config(&args, q, substream(master, "chain"))?;
    // The observation model is a property of the data, not a tuning knob.
    config.markovian = dataset.markovian;
    let prior = match &args.prior {
        Some(path) => load_prior(path, &meta)?,
        None => HsbmPrior::flat(),
    };

    let started = Instant::now();
    let samples = run_chain(&meta, &feasible, &dataset, &prior, config.clone())?;
    let runtime = started.elapsed().as_secs_f64();
    let marginals = edge_marginals(&samples)?;

    std::fs::create_dir_all(&args.out_dir)?;
    let out = |name: &str| args.out_dir.join(name);
    let mut outputs = vec![
        "report.json".to_string(),
        "marginals.csv".to_string(),
        "heatmap.csv".to_string(),
        "trace.csv".to_string(),
    ];

    // Marginal listings: restrict to the structured support when the chain
    // itself was restricted to it.
    let mask = match config.proposal {
        ProposalKind::Ip => Some(&feasible),
        ProposalKind::Unconstrained => None,
    };
    write_marginals_csv(out("marginals.csv"), &marginals, mask)?;
    export_heatmap_csv(&marginals, out("heatmap.csv"))?;
    write_trace_csv(out("trace.csv"), &samples)?;
    if args.heatmap {
        export_heatmap_svg(&marginals, &meta, out("heatmap.svg"))?;
        outputs.push("heatmap.svg".to_string());
    }

    // Evaluate against the file's edges when present: once over the feasible
    // pairs only, once over all ordered pairs.
    let evaluation = if truth.n_edges() > 0 && !args.no_eval {
        let thresholds = default_thresholds();
        let masked = precision_recall_curve(&marginals, &truth, &thresholds, Some(&feasible));
        let all = precision_recall_curve(&marginals, &truth, &thresholds, None);
        write_pr_curve_csv(out("pr_curve_feasible.csv"), &masked.pr_curve)?;
        write_pr_curve_csv(out("pr_curve_all.csv"), &all.pr_curve)?;
        outputs.push("pr_curve_feasible.csv".to_string());
        outputs.push("pr_curve_all.csv".to_string());
        Some((masked, all))
    } else {
        None
    };

    let stats = samples.stats();
    let report = serde_json::json!({
        "command": "reconstruct",
        "master_seed": master,
        "seed_source": if fresh { "entropy" } else { "explicit" },
        "network_file": args.network.display().to_string(),
        "cascade_file": args.cascades.display().to_string(),
        "method": args.method.clone().unwrap_or_else(|| "custom".to_string()),
        "sampler_config": config,
        "runtime_seconds": runtime,
        "stats": {
            "proposed": stats.proposed,
            "accepted": stats.accepted,
            "rejected_constraint": stats.rejected_constraint,
            "rejected_mh": stats.rejected_mh,
            "recorded": samples.n_recorded(),
        },
        "evaluation": evaluation.as_ref().map(|(masked, all)| serde_json::json!({
            "feasible_pairs": summary(masked),
            "all_pairs": summary(all),
        })),
        "outputs": outputs,
    });
    let mut body = serde_json::to_string_pretty(&report)?;
    body.push('\n');
    std::fs::write(out("report.json"), body)?;

    let acceptance = stats.accepted as f64 / stats.proposed.max(1) as f64;
    println!(
        "recorded {} samples in {runtime:.2}s (acceptance {:.1}%), outputs in {}",
        samples.n_recorded(),
        100.0 * acceptance,
        args.out_dir.display(),
    );
    if let Some((masked, all)) = &evaluation {
        println!(
            "best F1 {:.3} at threshold {:.2} over feasible pairs \
             ({:.3} at {:.2} over all pairs)",
            masked.best_f1, masked.best_threshold, all.best_f1, all.best_threshold,
        );
    }
    Ok(())
}

fn summary(report: &EvalReport) -> serde_json::Value {
    serde_json::json!({
        "best_f1": report.best_f1,
        "best_threshold": report.best_threshold,
    })
}
