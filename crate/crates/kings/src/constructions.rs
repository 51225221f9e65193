//! Generators for the weak-selection families the experiments are built on.
//!
//! Each construction validates its parameters and materializes a plain
//! [`WeakSelection`]; none of them keep state. [`SelectionSpec`] is the
//! declarative JSON-facing recipe the CLI consumes.

use serde::{Deserialize, Serialize};

use crate::rng::{derive_seed, stream};
use crate::tournament::pair_count;
use crate::{Error, WeakSelection};

/// Which end of an order a selection picks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    Min,
    Max,
}

fn check_distinct_keys(field: &str, keys: &[f64]) -> Result<(), Error> {
    if keys.is_empty() {
        return Err(Error::field(field, "must contain at least one key"));
    }
    for (i, k) in keys.iter().enumerate() {
        if k.is_nan() {
            return Err(Error::field(field, format!("entry {i} is NaN")));
        }
        for (j, l) in keys.iter().enumerate().skip(i + 1) {
            if k == l {
                return Err(Error::field(
                    field,
                    format!("duplicate key {k} at positions {i} and {j}"),
                ));
            }
        }
    }
    Ok(())
}

/// Selection induced by a total order on keys: every pair picks its smaller
/// (`Min`) or larger (`Max`) key.
///
/// Under `Min` the picked element loses, so the maximum-key player beats
/// everyone and is the unique king; `Max` is the mirror image.
pub fn order_selection(keys: &[f64], mode: SelectionMode) -> Result<WeakSelection, Error> {
    check_distinct_keys("keys", keys)?;
    WeakSelection::from_choices(keys.len(), |i, j| {
        let smaller = if keys[i] < keys[j] { i } else { j };
        match mode {
            SelectionMode::Min => smaller,
            SelectionMode::Max => i + j - smaller,
        }
    })
}

fn check_blocks(field: &str, blocks: &[Vec<usize>]) -> Result<usize, Error> {
    if blocks.is_empty() {
        return Err(Error::field(field, "must contain at least one block"));
    }
    let total: usize = blocks.iter().map(Vec::len).sum();
    let mut owner: Vec<Option<usize>> = vec![None; total];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::field(format!("{field}[{b}]"), "block is empty"));
        }
        for &p in block {
            if p >= total {
                return Err(Error::field(
                    format!("{field}[{b}]"),
                    format!("player {p} out of range for {total} players"),
                ));
            }
            match owner[p] {
                Some(other) => {
                    return Err(Error::field(
                        format!("{field}[{b}]"),
                        format!("player {p} already belongs to block {other}"),
                    ))
                }
                None => owner[p] = Some(b),
            }
        }
    }
    // disjoint blocks whose sizes sum to `total` with all members in range
    // necessarily cover 0..total
    Ok(total)
}

/// Clopen sum: `xi` on the players listed in `u`, `psi` on those in `v`,
/// with every cross pair picking its `v` member — so `u` players dominate.
///
/// `u` and `v` must be disjoint and together cover `0..(|u| + |v|)`; `u`
/// must be non-empty (`v` may be empty, in which case the composite is `xi`
/// relabeled onto `u`). `xi` and `psi` are indexed by position within `u`
/// and `v`.
pub fn clopen_sum(
    u: &[usize],
    v: &[usize],
    xi: &WeakSelection,
    psi: &WeakSelection,
) -> Result<WeakSelection, Error> {
    if u.is_empty() {
        return Err(Error::field("u", "must not be empty"));
    }
    let blocks = if v.is_empty() {
        vec![u.to_vec()]
    } else {
        vec![u.to_vec(), v.to_vec()]
    };
    let total = check_blocks("u/v", &blocks)?;
    if xi.len() != u.len() {
        return Err(Error::field(
            "xi",
            format!("has {} players but u lists {}", xi.len(), u.len()),
        ));
    }
    if psi.len() != v.len() {
        return Err(Error::field(
            "psi",
            format!("has {} players but v lists {}", psi.len(), v.len()),
        ));
    }
    let mut side = vec![(false, 0usize); total]; // (in_u, position within its side)
    for (pos, &p) in u.iter().enumerate() {
        side[p] = (true, pos);
    }
    for (pos, &p) in v.iter().enumerate() {
        side[p] = (false, pos);
    }
    WeakSelection::from_choices(total, |a, b| {
        let (a_in_u, a_pos) = side[a];
        let (b_in_u, b_pos) = side[b];
        match (a_in_u, b_in_u) {
            (true, true) => {
                if xi.choice(a_pos, b_pos) == a_pos {
                    a
                } else {
                    b
                }
            }
            (false, false) => {
                if psi.choice(a_pos, b_pos) == a_pos {
                    a
                } else {
                    b
                }
            }
            // cross pair: pick the v member, so the u member wins
            (true, false) => b,
            (false, true) => a,
        }
    })
}

/// Graded partition selection: within a block defer to that block's inner
/// selection; across blocks pick the lower-block member, so higher blocks
/// dominate lower ones and every king lives in the top block.
pub fn graded_partition(
    blocks: &[Vec<usize>],
    within: &[WeakSelection],
) -> Result<WeakSelection, Error> {
    let total = check_blocks("blocks", blocks)?;
    if within.len() != blocks.len() {
        return Err(Error::field(
            "within",
            format!(
                "{} inner selections for {} blocks",
                within.len(),
                blocks.len()
            ),
        ));
    }
    for (b, (block, inner)) in blocks.iter().zip(within).enumerate() {
        if inner.len() != block.len() {
            return Err(Error::field(
                format!("within[{b}]"),
                format!(
                    "has {} players but block lists {}",
                    inner.len(),
                    block.len()
                ),
            ));
        }
    }
    let mut position = vec![(0usize, 0usize); total]; // (block, position within it)
    for (b, block) in blocks.iter().enumerate() {
        for (pos, &p) in block.iter().enumerate() {
            position[p] = (b, pos);
        }
    }
    WeakSelection::from_choices(total, |a, b| {
        let (a_block, a_pos) = position[a];
        let (b_block, b_pos) = position[b];
        match a_block.cmp(&b_block) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => {
                if within[a_block].choice(a_pos, b_pos) == a_pos {
                    a
                } else {
                    b
                }
            }
        }
    })
}

/// The sigma-min / sigma-max selection on sampled graph points, keyed by the
/// curve parameter: every pair picks the point with the smaller (`Min`) or
/// larger (`Max`) parameter.
///
/// Same dominance relation as [`order_selection`] on the parameters, but
/// validates that they are curve parameters (within `[0, 1]`).
pub fn graph_selection(s_values: &[f64], mode: SelectionMode) -> Result<WeakSelection, Error> {
    check_distinct_keys("s_values", s_values)?;
    for (i, s) in s_values.iter().enumerate() {
        if !(0.0..=1.0).contains(s) {
            return Err(Error::field(
                "s_values",
                format!("entry {i} = {s} is outside [0, 1]"),
            ));
        }
    }
    WeakSelection::from_choices(s_values.len(), |i, j| {
        let smaller = if s_values[i] < s_values[j] { i } else { j };
        match mode {
            SelectionMode::Min => smaller,
            SelectionMode::Max => i + j - smaller,
        }
    })
}

/// Uniformly random tournament. Pair orientations come from splitmix64 keyed
/// by `(seed, pair rank)`, so the same `(n, seed)` is bit-identical on every
/// platform and orientations do not depend on evaluation order.
pub fn random_tournament(n: usize, seed: u64) -> Result<WeakSelection, Error> {
    if n == 0 {
        return Err(Error::field("n", "must be at least 1"));
    }
    pair_count(n)?;
    let mut rank = 0u64;
    WeakSelection::from_choices(n, |i, j| {
        let bit = stream(seed, rank) >> 63;
        rank += 1;
        if bit == 1 {
            j
        } else {
            i
        }
    })
}

/// Declarative recipe for a tournament; the JSON encoding of this enum is
/// the CLI's generation input format.
///
/// `clopen_sum` and `graded_partition` may nest recipes for their inner
/// selections; when omitted, inner selections default to random tournaments
/// seeded from `seed` via [`derive_seed`](crate::rng::derive_seed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SelectionSpec {
    OrderMin {
        keys: Vec<f64>,
    },
    OrderMax {
        keys: Vec<f64>,
    },
    ClopenSum {
        u: Vec<usize>,
        v: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        xi: Option<Box<SelectionSpec>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        psi: Option<Box<SelectionSpec>>,
        #[serde(default)]
        seed: u64,
    },
    GradedPartition {
        blocks: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        within: Option<Vec<SelectionSpec>>,
        #[serde(default)]
        seed: u64,
    },
    GraphMin {
        s_values: Vec<f64>,
    },
    GraphMax {
        s_values: Vec<f64>,
    },
    Random {
        n: usize,
        seed: u64,
    },
}

impl SelectionSpec {
    /// Parses a recipe from JSON bytes.
    pub fn from_json(bytes: &[u8]) -> Result<Self, Error> {
        Ok(serde_json::from_slice(bytes)?)
    }

    /// Validates the recipe and builds the tournament. Deterministic: equal
    /// specs produce equal selections.
    pub fn materialize(&self) -> Result<WeakSelection, Error> {
        match self {
            SelectionSpec::OrderMin { keys } => order_selection(keys, SelectionMode::Min),
            SelectionSpec::OrderMax { keys } => order_selection(keys, SelectionMode::Max),
            SelectionSpec::ClopenSum {
                u,
                v,
                xi,
                psi,
                seed,
            } => {
                let xi = materialize_inner("xi", xi.as_deref(), u.len(), *seed, 0)?;
                let psi = materialize_inner("psi", psi.as_deref(), v.len(), *seed, 1)?;
                clopen_sum(u, v, &xi, &psi)
            }
            SelectionSpec::GradedPartition {
                blocks,
                within,
                seed,
            } => {
                if let Some(within) = within {
                    if within.len() != blocks.len() {
                        return Err(Error::field(
                            "within",
                            format!("{} recipes for {} blocks", within.len(), blocks.len()),
                        ));
                    }
                }
                let inner = blocks
                    .iter()
                    .enumerate()
                    .map(|(b, block)| {
                        let spec = within.as_ref().map(|w| &w[b]);
                        materialize_inner(
                            &format!("within[{b}]"),
                            spec,
                            block.len(),
                            *seed,
                            b as u64,
                        )
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                graded_partition(blocks, &inner)
            }
            SelectionSpec::GraphMin { s_values } => graph_selection(s_values, SelectionMode::Min),
            SelectionSpec::GraphMax { s_values } => graph_selection(s_values, SelectionMode::Max),
            SelectionSpec::Random { n, seed } => random_tournament(*n, *seed),
        }
    }

    /// Total number of players the materialized tournament will have.
    pub fn player_count(&self) -> usize {
        match self {
            SelectionSpec::OrderMin { keys } | SelectionSpec::OrderMax { keys } => keys.len(),
            SelectionSpec::ClopenSum { u, v, .. } => u.len() + v.len(),
            SelectionSpec::GradedPartition { blocks, .. } => blocks.iter().map(Vec::len).sum(),
            SelectionSpec::GraphMin { s_values } | SelectionSpec::GraphMax { s_values } => {
                s_values.len()
            }
            SelectionSpec::Random { n, .. } => *n,
        }
    }
}

fn materialize_inner(
    field: &str,
    spec: Option<&SelectionSpec>,
    expected: usize,
    seed: u64,
    index: u64,
) -> Result<WeakSelection, Error> {
    match spec {
        Some(spec) => {
            if spec.player_count() != expected {
                return Err(Error::field(
                    field,
                    format!(
                        "inner recipe yields {} players, block needs {expected}",
                        spec.player_count()
                    ),
                ));
            }
            spec.materialize()
        }
        None if expected == 0 => WeakSelection::from_choices(0, |_, _| unreachable!()),
        None => random_tournament(expected, derive_seed(seed, 0, index)),
    }
}
