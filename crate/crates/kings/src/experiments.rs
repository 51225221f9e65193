//! Finite-scale king stability and escape experiments.
//!
//! A finite tournament always has a king, so non-existence in a limit space
//! shows up at desk scale as a trend: on samples of `[0, 1)` the min-order
//! king marches toward the missing endpoint, and in graded partitions the
//! king's block index grows without bound. Compact control arms (endpoint
//! included, sine-curve samples) keep their kings pinned in place.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constructions::{graded_partition, graph_selection, random_tournament, SelectionMode};
use crate::rng::derive_seed;
use crate::sample::{continuity_falsify, sample_graph, sine_curve_f, uniform_grid};
use crate::{order_selection, ContinuityCertificate, Error};

/// Which escape mechanism a trace records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EscapeMode {
    Gap,
    Graded,
}

/// One refinement level of an escape trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeLevel {
    pub level: usize,
    /// Grid spacing for gap traces, block count for graded traces.
    pub resolution: f64,
    pub sample_size: usize,
    pub kings: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub king_coordinates: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub king_blocks: Option<Vec<usize>>,
    /// Distance to the missing endpoint (gap) or the top king block index
    /// (graded).
    pub king_metric: f64,
}

/// Per-level king locations across nested refinements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeTrace {
    pub mode: EscapeMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub include_right_endpoint: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_sizes: Option<Vec<usize>>,
    pub levels: Vec<EscapeLevel>,
}

/// Kings of min-order selections on dyadic grids of `[0, 1)` (or of `[0, 1]`
/// when the right endpoint is included — the compact control arm).
///
/// Level `k` samples `{0, 1/2^k, ..., (2^k - 1)/2^k}`; its king is the
/// maximum sample point, at distance exactly `2^-k` from the missing
/// endpoint. With the endpoint included the king sits at `1` and the
/// distance is identically zero. All grid points are dyadic, so the
/// distances are exact in double precision.
pub fn gap_escape_experiment(
    n_levels: usize,
    include_right_endpoint: bool,
) -> Result<EscapeTrace, Error> {
    if !(1..=20).contains(&n_levels) {
        return Err(Error::field(
            "n_levels",
            format!("must be in 1..=20, got {n_levels}"),
        ));
    }
    let mut levels = Vec::with_capacity(n_levels);
    for k in 1..=n_levels {
        let grid = uniform_grid(1 << k, include_right_endpoint)?;
        let sel = order_selection(&grid, SelectionMode::Min)?;
        let kings = sel.kings()?;
        let king_metric = kings
            .iter()
            .map(|&z| 1.0 - grid[z])
            .fold(f64::INFINITY, f64::min);
        levels.push(EscapeLevel {
            level: k,
            resolution: 1.0 / (1u64 << k) as f64,
            sample_size: grid.len(),
            king_coordinates: Some(kings.iter().map(|&z| [grid[z], 0.0]).collect()),
            kings,
            king_blocks: None,
            king_metric,
        });
    }
    Ok(EscapeTrace {
        mode: EscapeMode::Gap,
        seed: None,
        include_right_endpoint: Some(include_right_endpoint),
        block_sizes: None,
        levels,
    })
}

/// Kings of graded partition selections as the number of blocks grows.
///
/// Level `N` builds blocks `U_0..U_{N-1}` of consecutive players (block `k`
/// sized `block_sizes[k % len]`) with random inner tournaments seeded from
/// `(seed, N, k)`; every king lies in the top block, so the king block index
/// is `N - 1` at every level and diverges with `N`.
pub fn graded_escape_experiment(
    block_sizes: &[usize],
    n_levels: usize,
    seed: u64,
) -> Result<EscapeTrace, Error> {
    if !(1..=64).contains(&n_levels) {
        return Err(Error::field(
            "n_levels",
            format!("must be in 1..=64, got {n_levels}"),
        ));
    }
    if block_sizes.is_empty() {
        return Err(Error::field("block_sizes", "must not be empty"));
    }
    if let Some(i) = block_sizes.iter().position(|&s| s == 0) {
        return Err(Error::field(
            format!("block_sizes[{i}]"),
            "blocks must have at least one player",
        ));
    }
    let mut levels = Vec::with_capacity(n_levels);
    for n in 1..=n_levels {
        let mut blocks = Vec::with_capacity(n);
        let mut within = Vec::with_capacity(n);
        let mut offset = 0usize;
        for k in 0..n {
            let size = block_sizes[k % block_sizes.len()];
            blocks.push((offset..offset + size).collect::<Vec<_>>());
            within.push(random_tournament(
                size,
                derive_seed(seed, n as u64, k as u64),
            )?);
            offset += size;
        }
        let sel = graded_partition(&blocks, &within)?;
        let kings = sel.kings()?;
        let block_of = |z: usize| blocks.iter().position(|b| b.contains(&z)).unwrap();
        let king_blocks: Vec<usize> = kings.iter().map(|&z| block_of(z)).collect();
        let king_metric = king_blocks.iter().copied().max().unwrap_or(0) as f64;
        levels.push(EscapeLevel {
            level: n,
            resolution: n as f64,
            sample_size: offset,
            kings,
            king_coordinates: None,
            king_blocks: Some(king_blocks),
            king_metric,
        });
    }
    Ok(EscapeTrace {
        mode: EscapeMode::Graded,
        seed: Some(seed),
        include_right_endpoint: None,
        block_sizes: Some(block_sizes.to_vec()),
        levels,
    })
}

/// Kings and continuity checks for both selections on a sine-curve sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SineKingReport {
    pub n_points: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub min_kings: Vec<usize>,
    pub max_kings: Vec<usize>,
    pub min_king_params: Vec<f64>,
    pub max_king_params: Vec<f64>,
    /// Whether the sigma-min king set is exactly the `s = 1` point.
    pub min_unique_at_s1: bool,
    /// Whether the sigma-max king set is exactly the `s = 0` point.
    pub max_unique_at_s0: bool,
    pub min_certificate: ContinuityCertificate,
    pub max_certificate: ContinuityCertificate,
}

/// Samples the `|sin(1/t)|` graph on a uniform parameter grid (endpoints
/// included), finds the sigma-min and sigma-max kings, and runs the
/// continuity falsifier on both at `delta` = half the parameter gap,
/// `epsilon = 4 * delta`.
///
/// The sample is not compact in the limit, yet both selections keep their
/// unique kings pinned at `s = 1` and `s = 0` at every resolution.
pub fn sine_king_experiment(n_points: usize) -> Result<SineKingReport, Error> {
    if n_points < 2 {
        return Err(Error::field(
            "n_points",
            format!("need at least 2 sample points, got {n_points}"),
        ));
    }
    let s_values = uniform_grid(n_points - 1, true)?;
    let space = sample_graph(sine_curve_f, &s_values)?;
    let min_sel = graph_selection(&s_values, SelectionMode::Min)?;
    let max_sel = graph_selection(&s_values, SelectionMode::Max)?;
    let min_kings = min_sel.kings()?;
    let max_kings = max_sel.kings()?;

    let delta = 0.5 / (n_points - 1) as f64;
    let epsilon = 4.0 * delta;
    let min_certificate = continuity_falsify(&space, &min_sel, delta, epsilon)?;
    let max_certificate = continuity_falsify(&space, &max_sel, delta, epsilon)?;

    Ok(SineKingReport {
        n_points,
        delta,
        epsilon,
        min_king_params: min_kings.iter().map(|&z| s_values[z]).collect(),
        max_king_params: max_kings.iter().map(|&z| s_values[z]).collect(),
        min_unique_at_s1: min_kings == [n_points - 1],
        max_unique_at_s0: max_kings == [0],
        min_kings,
        max_kings,
        min_certificate,
        max_certificate,
    })
}

/// Outcome of the exhaustive sweep over all small labeled tournaments.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n_max: usize,
    /// Tournaments checked per player count, indexed by `n - 1`.
    pub per_n: Vec<u64>,
    pub tournaments: u64,
    pub failures: u64,
    pub failure_samples: Vec<String>,
    pub elapsed_ms: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks every labeled tournament on up to `n_max` players (`n_max <= 6`):
/// the king set is non-empty, the maximum-out-degree vertex is a king, and
/// the two k-set routes agree on every target.
pub fn exhaustive_verify(n_max: usize) -> Result<VerifyReport, Error> {
    if !(1..=6).contains(&n_max) {
        return Err(Error::field(
            "n_max",
            format!("exhaustive verification supports 1..=6, got {n_max}"),
        ));
    }
    let start = Instant::now();
    let mut per_n = Vec::with_capacity(n_max);
    let mut tournaments = 0u64;
    let mut failures = 0u64;
    let mut failure_samples = Vec::new();
    let record = |what: String, samples: &mut Vec<String>, failures: &mut u64| {
        *failures += 1;
        if samples.len() < 8 {
            samples.push(what);
        }
    };
    for n in 1..=n_max {
        let mut count = 0u64;
        for sel in crate::enumerate_tournaments(n)? {
            count += 1;
            tournaments += 1;
            let report = sel.king_report()?;
            if report.kings.is_empty() {
                record(
                    format!("empty king set: {sel:?}"),
                    &mut failure_samples,
                    &mut failures,
                );
            }
            let landau = sel.landau_king()?;
            if !report.kings.contains(&landau) {
                record(
                    format!("landau vertex {landau} not a king: {sel:?}"),
                    &mut failure_samples,
                    &mut failures,
                );
            }
            for x in 0..n {
                if sel.k_set(x) != sel.k_set_via_composition(x) {
                    record(
                        format!("k-set routes disagree at target {x}: {sel:?}"),
                        &mut failure_samples,
                        &mut failures,
                    );
                }
            }
        }
        per_n.push(count);
    }
    Ok(VerifyReport {
        n_max,
        per_n,
        tournaments,
        failures,
        failure_samples,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::WeakSelection;

    fn brute_kings(sel: &WeakSelection) -> Vec<usize> {
        (0..sel.len())
            .filter(|&z| {
                (0..sel.len()).all(|x| (0..sel.len()).any(|y| sel.arrow(z, y) && sel.arrow(y, x)))
            })
            .collect()
    }

    #[test]
    fn gap_escape_distances_halve() {
        let trace = gap_escape_experiment(4, false).unwrap();
        let metrics: Vec<f64> = trace.levels.iter().map(|l| l.king_metric).collect();
        assert_eq!(metrics, vec![0.5, 0.25, 0.125, 0.0625]);
        assert_eq!(trace.levels[1].kings, vec![3]); // 0.75 on {0, .25, .5, .75}
        assert_eq!(
            trace.levels[1].king_coordinates.as_deref().unwrap(),
            &[[0.75, 0.0]]
        );
        for level in &trace.levels {
            assert_eq!(level.kings.len(), 1);
        }
        // sample sizes strictly increase
        for pair in trace.levels.windows(2) {
            assert!(pair[0].sample_size < pair[1].sample_size);
        }
    }

    #[test]
    fn gap_escape_control_arm_stays_at_one() {
        let trace = gap_escape_experiment(5, true).unwrap();
        for level in &trace.levels {
            assert_eq!(level.king_metric, 0.0);
            assert_eq!(level.king_coordinates.as_deref().unwrap(), &[[1.0, 0.0]]);
        }
    }

    #[test]
    fn gap_escape_guards_levels() {
        assert!(gap_escape_experiment(0, false).is_err());
        assert!(gap_escape_experiment(21, false).is_err());
    }

    #[test]
    fn graded_escape_kings_sit_in_top_block() {
        let trace = graded_escape_experiment(&[3], 5, 99).unwrap();
        for level in &trace.levels {
            assert_eq!(level.king_metric, (level.level - 1) as f64);
            for &b in level.king_blocks.as_deref().unwrap() {
                assert_eq!(b, level.level - 1);
            }
        }
        assert_eq!(trace.levels[4].sample_size, 15);

        // oracle check on the 15-player level
        let blocks: Vec<Vec<usize>> = (0..5).map(|k| (3 * k..3 * k + 3).collect()).collect();
        let within: Vec<WeakSelection> = (0..5)
            .map(|k| random_tournament(3, derive_seed(99, 5, k as u64)).unwrap())
            .collect();
        let sel = graded_partition(&blocks, &within).unwrap();
        assert_eq!(brute_kings(&sel), trace.levels[4].kings);
        assert!(trace.levels[4].kings.iter().all(|&z| z >= 12));
    }

    #[test]
    fn graded_escape_single_level_is_inner_tournament() {
        let trace = graded_escape_experiment(&[4], 1, 7).unwrap();
        let inner = random_tournament(4, derive_seed(7, 1, 0)).unwrap();
        assert_eq!(trace.levels[0].kings, brute_kings(&inner));
        assert_eq!(trace.levels[0].king_metric, 0.0);
    }

    #[test]
    fn graded_escape_two_singleton_blocks() {
        let trace = graded_escape_experiment(&[1], 2, 0).unwrap();
        assert_eq!(trace.levels[1].kings, vec![1]);
        assert_eq!(trace.levels[1].king_blocks.as_deref().unwrap(), &[1]);
    }

    #[test]
    fn graded_escape_guards() {
        assert!(graded_escape_experiment(&[], 3, 0).is_err());
        assert!(graded_escape_experiment(&[1, 0], 3, 0).is_err());
        assert!(graded_escape_experiment(&[1], 0, 0).is_err());
    }

    #[test]
    fn sine_kings_pin_to_the_endpoints() {
        let report = sine_king_experiment(16).unwrap();
        assert_eq!(report.min_kings, vec![15]);
        assert_eq!(report.max_kings, vec![0]);
        assert_eq!(report.min_king_params, vec![1.0]);
        assert_eq!(report.max_king_params, vec![0.0]);
        assert!(report.min_unique_at_s1 && report.max_unique_at_s0);
        assert!(report.min_certificate.passed());
        assert!(report.max_certificate.passed());
    }

    #[test]
    fn sine_two_points() {
        let report = sine_king_experiment(2).unwrap();
        assert_eq!(report.min_kings, vec![1]);
        assert_eq!(report.max_kings, vec![0]);
        assert!(sine_king_experiment(1).is_err());
    }

    #[test]
    fn exhaustive_verify_counts() {
        let report = exhaustive_verify(3).unwrap();
        assert_eq!(report.per_n, vec![1, 2, 8]);
        assert_eq!(report.tournaments, 11);
        assert_eq!(report.failures, 0);

        let report = exhaustive_verify(5).unwrap();
        assert_eq!(report.per_n, vec![1, 2, 8, 64, 1024]);
        assert_eq!(report.tournaments, 1099);
        assert!(report.passed());

        assert!(exhaustive_verify(0).is_err());
        assert!(exhaustive_verify(9).is_err());
    }
}
