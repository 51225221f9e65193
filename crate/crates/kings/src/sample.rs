//! Finite metric samples of the unit square and a resolution-bounded
//! continuity falsifier for selections on them.
//!
//! The falsifier can only refute: a `pass` verdict says no side-inconsistent
//! perturbed pair exists *at the given resolution*, never that the selection
//! extends to a continuous one.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::{Error, WeakSelection};

/// A finite labeled point set in the unit square with the Euclidean metric.
/// One-dimensional samples embed on the x-axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpace {
    points: Vec<[f64; 2]>,
    labels: Option<Vec<String>>,
}

impl SampledSpace {
    /// Validates coordinates (finite, within `[0, 1]` per axis, pairwise
    /// distinct) and optional per-point labels.
    pub fn new(points: Vec<[f64; 2]>, labels: Option<Vec<String>>) -> Result<Self, Error> {
        for (i, p) in points.iter().enumerate() {
            for (axis, c) in p.iter().enumerate() {
                if !c.is_finite() || !(0.0..=1.0).contains(c) {
                    return Err(Error::field(
                        format!("points[{i}]"),
                        format!("coordinate {c} on axis {axis} is outside [0, 1]"),
                    ));
                }
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(Error::field(
                        format!("points[{j}]"),
                        format!("duplicates points[{i}]"),
                    ));
                }
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != points.len() {
                return Err(Error::field(
                    "labels",
                    format!("{} labels for {} points", labels.len(), points.len()),
                ));
            }
        }
        Ok(SampledSpace { points, labels })
    }

    /// Points of `[0, 1]` embedded on the x-axis.
    pub fn from_interval(xs: &[f64]) -> Result<Self, Error> {
        Self::new(xs.iter().map(|&x| [x, 0.0]).collect(), None)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn point(&self, i: usize) -> [f64; 2] {
        self.points[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Euclidean distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let [x1, y1] = self.points[i];
        let [x2, y2] = self.points[j];
        ((x1 - x2).powi(2) + (y1 - y2).powi(2)).sqrt()
    }
}

/// The sine-curve height function: `0` at `t = 0`, `|sin(1/t)|` elsewhere.
pub fn sine_curve_f(t: f64) -> Result<f64, Error> {
    if !t.is_finite() || !(0.0..=1.0).contains(&t) {
        return Err(Error::field("t", format!("{t} is outside [0, 1]")));
    }
    if t == 0.0 {
        Ok(0.0)
    } else {
        Ok((1.0 / t).sin().abs())
    }
}

/// Samples the graph of `f` at the given parameters: point `i` is
/// `(s_values[i], f(s_values[i]))`, labeled with its parameter.
///
/// Parameters must be distinct and inside `[0, 1]`, and `f` must map into
/// `[0, 1]`. An empty parameter list yields an empty space.
pub fn sample_graph(
    f: impl Fn(f64) -> Result<f64, Error>,
    s_values: &[f64],
) -> Result<SampledSpace, Error> {
    let mut points = Vec::with_capacity(s_values.len());
    let mut labels = Vec::with_capacity(s_values.len());
    for (i, &s) in s_values.iter().enumerate() {
        if !s.is_finite() || !(0.0..=1.0).contains(&s) {
            return Err(Error::field(
                format!("s_values[{i}]"),
                format!("{s} is outside [0, 1]"),
            ));
        }
        if s_values[..i].contains(&s) {
            return Err(Error::field(
                format!("s_values[{i}]"),
                format!("duplicate parameter {s}"),
            ));
        }
        let y = f(s)?;
        if !y.is_finite() || !(0.0..=1.0).contains(&y) {
            return Err(Error::field(
                format!("s_values[{i}]"),
                format!("f({s}) = {y} is outside [0, 1]"),
            ));
        }
        points.push([s, y]);
        labels.push(format!("s={s}"));
    }
    SampledSpace::new(points, Some(labels))
}

/// Grid `{k/n}` over `[0, 1]`, with `k` ranging to `n` inclusive or `n - 1`;
/// the right-open form samples `[0, 1)`, the space with the missing
/// endpoint. Exact for power-of-two `n`.
pub fn uniform_grid(n: usize, include_right_endpoint: bool) -> Result<Vec<f64>, Error> {
    if n == 0 {
        return Err(Error::field("n", "must be at least 1"));
    }
    let top = if include_right_endpoint { n } else { n - 1 };
    Ok((0..=top).map(|k| k as f64 / n as f64).collect())
}

/// How a falsifier run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuityVerdict {
    Pass,
    Violation,
}

/// A side-inconsistent perturbed pair: `{a, b}` selects its `a` member while
/// the nearby pair `{a', b'}` selects its `b'` member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub a: usize,
    pub b: usize,
    pub a_prime: usize,
    pub b_prime: usize,
    pub detail: String,
}

/// Result of a falsifier run at resolution `(delta, epsilon)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityCertificate {
    pub delta: f64,
    pub epsilon: f64,
    pub verdict: ContinuityVerdict,
    pub violations: Vec<Violation>,
}

impl ContinuityCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == ContinuityVerdict::Pass
    }
}

/// Scans every pair of epsilon-separated point pairs whose members moved by
/// less than `delta` and flags the quadruples where the selected side flips.
///
/// Perturbation is within the sample itself: `(a', b')` ranges over pairs
/// with `d(a, a') < delta` and `d(b, b') < delta` (the unperturbed case
/// `a' = a`, `b' = b` included), subject to `d(a, b) > epsilon` and
/// `d(a', b') > epsilon`. Requires `0 < delta < epsilon` so that separated
/// pairs stay separated and cannot swap members under perturbation. A `pass`
/// refutes nothing and certifies nothing beyond this resolution.
pub fn continuity_falsify(
    space: &SampledSpace,
    sel: &WeakSelection,
    delta: f64,
    epsilon: f64,
) -> Result<ContinuityCertificate, Error> {
    if sel.len() != space.len() {
        return Err(Error::field(
            "tournament",
            format!("{} players for {} points", sel.len(), space.len()),
        ));
    }
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::field("delta", "must be finite and positive"));
    }
    if !epsilon.is_finite() || delta >= epsilon {
        return Err(Error::field(
            "delta",
            format!("delta {delta} must be strictly less than epsilon {epsilon}"),
        ));
    }

    let moved = proximal_pairs(space, delta);
    let mut violations = Vec::new();
    for &(a, a_prime) in &moved {
        for &(b, b_prime) in &moved {
            if a == b || a_prime == b_prime {
                continue;
            }
            if space.distance(a, b) <= epsilon || space.distance(a_prime, b_prime) <= epsilon {
                continue;
            }
            if sel.choice(a, b) == a && sel.choice(a_prime, b_prime) == b_prime {
                violations.push(Violation {
                    a,
                    b,
                    a_prime,
                    b_prime,
                    detail: format!(
                        "pair ({a}, {b}) selects {a}; perturbed pair ({a_prime}, {b_prime}) \
                         selects {b_prime}"
                    ),
                });
            }
        }
    }
    let verdict = if violations.is_empty() {
        ContinuityVerdict::Pass
    } else {
        ContinuityVerdict::Violation
    };
    Ok(ContinuityCertificate {
        delta,
        epsilon,
        verdict,
        violations,
    })
}

/// All ordered point pairs `(p, q)` with `d(p, q) < delta`, including
/// `(p, p)`, found by hashing points into delta-sized cells and probing the
/// 3x3 neighborhood. Sorted, so downstream scans are deterministic.
fn proximal_pairs(space: &SampledSpace, delta: f64) -> Vec<(usize, usize)> {
    let cell_of = |p: [f64; 2]| ((p[0] / delta).floor() as i64, (p[1] / delta).floor() as i64);
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &p) in space.points().iter().enumerate() {
        cells.entry(cell_of(p)).or_default().push(i);
    }
    let mut pairs = Vec::new();
    for (i, &p) in space.points().iter().enumerate() {
        let (cx, cy) = cell_of(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = cells.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &j in bucket {
                    if i == j || space.distance(i, j) < delta {
                        pairs.push((i, j));
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs
}
