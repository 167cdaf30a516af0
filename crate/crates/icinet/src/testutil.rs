//! Shared fixtures for unit tests.

use crate::network::{Level, NetworkMeta, NodeRecord};
use crate::synth::{BlockSpec, GenConfig, InterdepConfig};

/// Reference three-system config: water/power/gas, each 2 supply /
/// 3 transmission / 5 demand, with a demand → supply dependency ring.
pub(crate) fn three_block_config(seed: u64) -> GenConfig {
    let names = ["water", "power", "gas"];
    GenConfig {
        blocks: names
            .iter()
            .map(|&name| BlockSpec {
                name: name.into(),
                n_supply: 2,
                n_transmission: 3,
                n_demand: 5,
            })
            .collect(),
        interdeps: (0..3)
            .map(|k| InterdepConfig {
                source_block: names[k].into(),
                source_level: Level::Demand,
                target_block: names[(k + 1) % 3].into(),
                target_level: Level::Supply,
            })
            .collect(),
        intra_density: 0.15,
        interdep_density: 0.1,
        seed,
    }
}

/// One block, 1 supply / 1 transmission / 2 demand: node ids 0..4, feasible
/// pairs (0,1), (0,2), (0,3), (1,2), (1,3).
pub(crate) fn tiny_meta() -> NetworkMeta {
    NetworkMeta::new(
        vec!["b".into()],
        vec![
            NodeRecord { name: "s0".into(), block: 0, level: Level::Supply },
            NodeRecord { name: "t0".into(), block: 0, level: Level::Transmission },
            NodeRecord { name: "d0".into(), block: 0, level: Level::Demand },
            NodeRecord { name: "d1".into(), block: 0, level: Level::Demand },
        ],
        vec![],
    )
    .unwrap()
}
