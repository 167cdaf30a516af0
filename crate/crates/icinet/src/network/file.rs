//! Network files: one JSON document holding nodes, edges, and declared
//! interdependencies.
//!
//! Node ids in the file may be any distinct integers; they are re-indexed to
//! dense `0..N-1` (in ascending file-id order) at load time, with external
//! names preserved. Edges are written in lexicographic order so identical
//! networks serialize byte-identically.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{InterdepSpec, Level, NetworkMeta, NodeId, NodeRecord, Topology};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct NodeEntry {
    id: u64,
    name: String,
    block: String,
    level: Level,
}

#[derive(Serialize, Deserialize)]
struct InterdepEntry {
    source_block: String,
    source_level: Level,
    target_block: String,
    target_level: Level,
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    nodes: Vec<NodeEntry>,
    edges: Vec<(u64, u64)>,
    interdeps: Vec<InterdepEntry>,
    /// Free-form generation record (config echo, seed). Optional; ignored by
    /// the loader.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Value>,
}

/// Write `(meta, topo)` as a network JSON file. `provenance`, if given, is
/// embedded verbatim for reproducibility bookkeeping.
pub fn save_network(
    path: impl AsRef<Path>,
    meta: &NetworkMeta,
    topo: &Topology,
    provenance: Option<Value>,
) -> Result<()> {
    let nodes = meta
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| NodeEntry {
            id: id as u64,
            name: node.name.clone(),
            block: meta.block_name(node.block).to_string(),
            level: node.level,
        })
        .collect();
    let edges = topo.edges().map(|(i, j)| (i as u64, j as u64)).collect();
    let interdeps = meta
        .interdeps()
        .iter()
        .map(|spec| InterdepEntry {
            source_block: meta.block_name(spec.source_block).to_string(),
            source_level: spec.source_level,
            target_block: meta.block_name(spec.target_block).to_string(),
            target_level: spec.target_level,
        })
        .collect();
    let file = NetworkFile {
        nodes,
        edges,
        interdeps,
        provenance,
    };
    let mut body = serde_json::to_string_pretty(&file)?;
    body.push('\n');
    fs::write(path, body)?;
    Ok(())
}

/// Load a network JSON file, re-indexing nodes to dense ids.
pub fn load_network(path: impl AsRef<Path>) -> Result<(NetworkMeta, Topology)> {
    let path = path.as_ref();
    let body = fs::read_to_string(path)
        .map_err(|e| Error::data(format!("cannot read {}: {e}", path.display())))?;
    let file: NetworkFile = serde_json::from_str(&body)
        .map_err(|e| Error::data(format!("malformed network file {}: {e}", path.display())))?;

    // Dense ids follow ascending file-id order.
    let mut order: Vec<usize> = (0..file.nodes.len()).collect();
    order.sort_by_key(|&k| file.nodes[k].id);
    for pair in order.windows(2) {
        if file.nodes[pair[0]].id == file.nodes[pair[1]].id {
            return Err(Error::data(format!(
                "duplicate node id {}",
                file.nodes[pair[0]].id
            )));
        }
    }
    let mut dense_of = std::collections::HashMap::new();
    for (dense, &k) in order.iter().enumerate() {
        dense_of.insert(file.nodes[k].id, dense);
    }

    // Blocks are indexed in order of first appearance.
    let mut block_names: Vec<String> = Vec::new();
    let block_index = |name: &str, block_names: &mut Vec<String>| -> usize {
        match block_names.iter().position(|b| b == name) {
            Some(idx) => idx,
            None => {
                block_names.push(name.to_string());
                block_names.len() - 1
            }
        }
    };

    let mut nodes = Vec::with_capacity(file.nodes.len());
    for &k in &order {
        let entry = &file.nodes[k];
        let block = block_index(&entry.block, &mut block_names);
        nodes.push(NodeRecord {
            name: entry.name.clone(),
            block,
            level: entry.level,
        });
    }

    let mut interdeps = Vec::with_capacity(file.interdeps.len());
    for entry in &file.interdeps {
        let source_block = block_names
            .iter()
            .position(|b| b == &entry.source_block)
            .ok_or_else(|| {
                Error::data(format!(
                    "interdependency references unknown block {:?}",
                    entry.source_block
                ))
            })?;
        let target_block = block_names
            .iter()
            .position(|b| b == &entry.target_block)
            .ok_or_else(|| {
                Error::data(format!(
                    "interdependency references unknown block {:?}",
                    entry.target_block
                ))
            })?;
        interdeps.push(InterdepSpec {
            source_block,
            source_level: entry.source_level,
            target_block,
            target_level: entry.target_level,
        });
    }

    let meta = NetworkMeta::new(block_names, nodes, interdeps)?;

    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(file.edges.len());
    for &(i, j) in &file.edges {
        let di = *dense_of
            .get(&i)
            .ok_or_else(|| Error::data(format!("edge references unknown node id {i}")))?;
        let dj = *dense_of
            .get(&j)
            .ok_or_else(|| Error::data(format!("edge references unknown node id {j}")))?;
        edges.push((di, dj));
    }
    let topo = Topology::from_edges(meta.n_nodes(), &edges)?;

    Ok((meta, topo))
}
