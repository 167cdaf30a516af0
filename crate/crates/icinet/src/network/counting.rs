//! Candidate-space sizes: how many topologies the samplers have to search.
//!
//! The constrained count quantifies what the feasibility structure buys; the
//! unconstrained count is the baseline search space over unlabeled node
//! pairs. Both are exact big-integer values — these grow far past u64 for
//! realistic systems, and the whole point of reporting them is that they are
//! not approximations.

use num_bigint::BigUint;

use crate::{Error, Result};

/// Number of ways to wire a two-level block with `n_supply` supply and
/// `n_demand` demand nodes so that every node participates in the
/// supply→demand relation.
///
/// With m1 = max(n_supply, n_demand), m2 = min(n_supply, n_demand), and
/// m3 = m1·m2 − m1, the count is
///
/// ```text
/// (m1 − m2) · m2 · P(m1, m2) · Σ_{i=0}^{m3} P(m3, i)
/// ```
///
/// where P(n, k) = n!/(n−k)! counts ordered selections. The symmetric case
/// m1 = m2 makes the leading factor zero, so the formula yields 0 there;
/// that is the formula's own behavior, preserved as-is. Note this counts
/// ordered wiring constructions, not labeled valid graphs — an exhaustive
/// filter over all graphs gives a different (smaller) number.
pub fn count_candidate_topologies(n_supply: usize, n_demand: usize) -> Result<BigUint> {
    if n_supply == 0 || n_demand == 0 {
        return Err(Error::config(
            "candidate count requires at least one supply and one demand node".to_string(),
        ));
    }
    let m1 = n_supply.max(n_demand) as u64;
    let m2 = n_supply.min(n_demand) as u64;
    let m3 = m1 * m2 - m1;

    let mut sum = BigUint::from(0u32);
    for i in 0..=m3 {
        sum += permutations(m3, i);
    }
    Ok(BigUint::from(m1 - m2) * BigUint::from(m2) * permutations(m1, m2) * sum)
}

/// Baseline search-space size without any structure: all graphs over the
/// C(n, 2) node pairs, i.e. 2^(n(n−1)/2).
pub fn count_unconstrained(n_nodes: usize) -> Result<BigUint> {
    if n_nodes < 2 {
        return Err(Error::config(format!(
            "unconstrained count requires at least 2 nodes, got {n_nodes}"
        )));
    }
    let n = n_nodes as u64;
    let pairs = n * (n - 1) / 2;
    Ok(BigUint::from(2u32).pow(
        u32::try_from(pairs).map_err(|_| Error::config("node count too large".to_string()))?,
    ))
}

/// P(n, k) = n · (n−1) · … · (n−k+1).
fn permutations(n: u64, k: u64) -> BigUint {
    debug_assert!(k <= n);
    let mut acc = BigUint::from(1u32);
    for f in (n - k + 1)..=n {
        acc *= BigUint::from(f);
    }
    acc
}
