//! `gen-network`: build a synthetic ground-truth network file.

use clap::Args;
use icinet::network::save_network;
use icinet::seed::substream;
use icinet::synth::{generate_icin, BlockSpec, GenConfig, InterdepConfig};
use icinet::{Error, Result};
use icinet::network::Level;
use std::path::PathBuf;

#[derive(Args)]
pub struct GenArgs {
    /// Block sizes as SUPPLY,TRANSMISSION,DEMAND; prefix with COUNTx for
    /// repeated blocks and separate differing blocks with ';'
    /// (e.g. "3x2,3,5" or "2,3,5;1,2,4")
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    blocks: Option<String>,

    /// Comma-separated block names; defaults to water,power,gas for three
    /// blocks and block0,block1,... otherwise
    #[arg(long, conflicts_with = "config")]
    block_names: Option<String>,

    /// Cross-block dependency as SRC_BLOCK.LEVEL:DST_BLOCK.LEVEL
    /// (e.g. "water.demand:power.supply"); repeatable. Defaults to a
    /// demand->supply ring over the blocks.
    #[arg(long = "interdep", conflicts_with = "config")]
    interdeps: Vec<String>,

    /// Generate fully independent blocks (suppress the default ring)
    #[arg(long, conflicts_with = "config")]
    no_interdeps: bool,

    /// Probability of each feasible intra-block pair beyond the backbone
    #[arg(long, default_value_t = 0.15, conflicts_with = "config")]
    intra_density: f64,

    /// Probability of each feasible cross-block pair beyond the backbone
    #[arg(long, default_value_t = 0.1, conflicts_with = "config")]
    interdep_density: f64,

    /// Full generator configuration as a JSON file (replaces the flags above)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed (falls back to ICINET_SEED, then to OS entropy)
    #[arg(long)]
    seed: Option<u64>,

    /// Output network file
    #[arg(long, default_value = "network.json")]
    out: PathBuf,
}

/// Parse "3x2,3,5" / "2,3,5" / "2,3,5;1,2,4" into unnamed block specs.
fn parse_blocks(text: &str) -> Result<Vec<(usize, usize, usize)>> {
    let mut out = Vec::new();
    for group in text.split(';') {
        let (count, counts) = match group.split_once('x') {
            Some((n, rest)) => {
                let n = n.trim().parse::<usize>().map_err(|_| {
                    Error::Config(format!("bad block repeat count in {group:?}"))
                })?;
                (n, rest)
            }
            None => (1, group),
        };
        let parts: Vec<&str> = counts.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!(
                "block spec {group:?} must have exactly three counts \
                 (supply,transmission,demand)"
            )));
        }
        let mut nums = [0usize; 3];
        for (slot, part) in nums.iter_mut().zip(&parts) {
            *slot = part.trim().parse::<usize>().map_err(|_| {
                Error::Config(format!("bad node count {part:?} in block spec {group:?}"))
            })?;
        }
        for _ in 0..count {
            out.push((nums[0], nums[1], nums[2]));
        }
    }
    if out.is_empty() {
        return Err(Error::Config("no blocks specified".to_string()));
    }
    Ok(out)
}

/// Parse "SRC_BLOCK.LEVEL:DST_BLOCK.LEVEL".
fn parse_interdep(text: &str) -> Result<InterdepConfig> {
    let bad = || {
        Error::Config(format!(
            "interdependency {text:?} must look like SRC_BLOCK.LEVEL:DST_BLOCK.LEVEL, \
             e.g. water.demand:power.supply"
        ))
    };
    let (src, dst) = text.split_once(':').ok_or_else(bad)?;
    let (src_block, src_level) = src.rsplit_once('.').ok_or_else(bad)?;
    let (dst_block, dst_level) = dst.rsplit_once('.').ok_or_else(bad)?;
    Ok(InterdepConfig {
        source_block: src_block.trim().to_string(),
        source_level: Level::parse(src_level.trim())?,
        target_block: dst_block.trim().to_string(),
        target_level: Level::parse(dst_level.trim())?,
    })
}

fn default_names(n: usize) -> Vec<String> {
    if n == 3 {
        vec!["water".into(), "power".into(), "gas".into()]
    } else {
        (0..n).map(|i| format!("block{i}")).collect()
    }
}

/// Resolve flags (or a config file) into a complete generator configuration.
fn resolve_config(args: &GenArgs, gen_seed: u64) -> Result<GenConfig> {
    if let Some(path) = &args.config {
        let body = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config: GenConfig = serde_json::from_str(&body)
            .map_err(|e| Error::Config(format!("malformed config {}: {e}", path.display())))?;
        // An explicit --seed / ICINET_SEED overrides the file's seed.
        if args.seed.is_some() || std::env::var("ICINET_SEED").is_ok() {
            config.seed = gen_seed;
        }
        return Ok(config);
    }

    let sizes = parse_blocks(args.blocks.as_deref().expect("clap requires --blocks"))?;
    let names = match &args.block_names {
        Some(text) => {
            let names: Vec<String> = text.split(',').map(|s| s.trim().to_string()).collect();
            if names.len() != sizes.len() {
                return Err(Error::Config(format!(
                    "{} block names given for {} blocks",
                    names.len(),
                    sizes.len()
                )));
            }
            names
        }
        None => default_names(sizes.len()),
    };
    let blocks = names
        .iter()
        .zip(&sizes)
        .map(|(name, &(s, t, d))| BlockSpec {
            name: name.clone(),
            n_supply: s,
            n_transmission: t,
            n_demand: d,
        })
        .collect();

    let interdeps = if args.no_interdeps {
        if !args.interdeps.is_empty() {
            return Err(Error::Config(
                "--no-interdeps conflicts with --interdep".to_string(),
            ));
        }
        Vec::new()
    } else if !args.interdeps.is_empty() {
        args.interdeps
            .iter()
            .map(|text| parse_interdep(text))
            .collect::<Result<Vec<_>>>()?
    } else if names.len() >= 2 {
        // Default coupling: each block's demand layer feeds the next block's
        // supply layer, closing a ring.
        (0..names.len())
            .map(|i| InterdepConfig {
                source_block: names[i].clone(),
                source_level: Level::Demand,
                target_block: names[(i + 1) % names.len()].clone(),
                target_level: Level::Supply,
            })
            .collect()
    } else {
        Vec::new()
    };

    Ok(GenConfig {
        blocks,
        interdeps,
        intra_density: args.intra_density,
        interdep_density: args.interdep_density,
        seed: gen_seed,
    })
}

pub fn run(args: GenArgs) -> Result<()> {
    let (master, fresh) = crate::resolve_master_seed(args.seed)?;
    let config = resolve_config(&args, substream(master, "generation"))?;
    let (meta, topo) = generate_icin(&config)?;

    let provenance = serde_json::json!({
        "command": "gen-network",
        "master_seed": master,
        "seed_source": if fresh { "entropy" } else { "explicit" },
        "generator": config,
    });
    save_network(&args.out, &meta, &topo, Some(provenance))?;

    println!(
        "wrote {} ({} nodes in {} blocks, {} edges, seed {})",
        args.out.display(),
        meta.n_nodes(),
        meta.n_blocks(),
        topo.n_edges(),
        master,
    );
    Ok(())
}
