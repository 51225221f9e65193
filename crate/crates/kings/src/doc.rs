//! On-disk formats: tournament documents, king reports, sampled spaces,
//! escape-trace CSV, and DOT export.
//!
//! JSON is the source format; CSV and DOT are derived views. Players are
//! strings in documents and indices in memory — the document's player order
//! fixes the index mapping. Serialization is canonical (pretty JSON, struct
//! field order, trailing newline), so equal values produce identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constructions::SelectionSpec;
use crate::experiments::EscapeTrace;
use crate::tournament::{pair_count, pair_rank, KingReport};
use crate::{Error, WeakSelection};

/// Version stamp carried by every document this crate writes.
pub const FORMAT_VERSION: u32 = 1;

/// One pair orientation: `pick` is the element the selection chooses from
/// `{i, j}` (so the other one wins the pair).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceRecord {
    pub i: usize,
    pub j: usize,
    pub pick: usize,
}

/// Interchange form of a tournament: named players plus one choice record
/// per unordered pair, `i < j`, in lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TournamentDocument {
    pub format_version: u32,
    pub players: Vec<String>,
    pub choices: Vec<ChoiceRecord>,
}

impl TournamentDocument {
    /// Wraps a selection with the default player names `"0".."n-1"`.
    pub fn from_selection(sel: &WeakSelection) -> Self {
        let players = (0..sel.len()).map(|i| i.to_string()).collect();
        Self::from_selection_with_players(sel, players).expect("default names are valid")
    }

    /// Wraps a selection with caller-supplied player names (one per player,
    /// no duplicates).
    pub fn from_selection_with_players(
        sel: &WeakSelection,
        players: Vec<String>,
    ) -> Result<Self, Error> {
        if players.len() != sel.len() {
            return Err(Error::field(
                "players",
                format!("{} names for {} players", players.len(), sel.len()),
            ));
        }
        check_unique_players(&players)?;
        let n = sel.len();
        let mut choices = Vec::with_capacity(pair_count(n)?);
        for i in 0..n {
            for j in (i + 1)..n {
                choices.push(ChoiceRecord {
                    i,
                    j,
                    pick: sel.choice(i, j),
                });
            }
        }
        Ok(TournamentDocument {
            format_version: FORMAT_VERSION,
            players,
            choices,
        })
    }

    /// Parses a document from JSON bytes without validating semantics; pair
    /// [`to_selection`](Self::to_selection) to get a usable tournament.
    pub fn from_json(bytes: &[u8]) -> Result<Self, Error> {
        Ok(serde_json::from_slice(bytes)?)
    }

    /// Canonical serialization; equal documents yield identical bytes.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }

    /// Validates the document and converts it to the in-memory form.
    ///
    /// Checks the version stamp, player-name uniqueness, index ranges,
    /// `i < j`, `pick ∈ {i, j}`, and exactly one record per pair.
    pub fn to_selection(&self) -> Result<WeakSelection, Error> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::field(
                "format_version",
                format!("expected {FORMAT_VERSION}, got {}", self.format_version),
            ));
        }
        if self.players.is_empty() {
            return Err(Error::EmptyTournament);
        }
        check_unique_players(&self.players)?;
        let n = self.players.len();
        let m = pair_count(n)?;
        if self.choices.len() != m {
            return Err(Error::field(
                "choices",
                format!("{} records for {} pairs", self.choices.len(), m),
            ));
        }
        let mut picks: Vec<Option<usize>> = vec![None; m];
        for (k, rec) in self.choices.iter().enumerate() {
            let field = format!("choices[{k}]");
            if rec.i >= n || rec.j >= n {
                return Err(Error::field(
                    field,
                    format!("pair ({}, {}) out of range for {n} players", rec.i, rec.j),
                ));
            }
            if rec.i >= rec.j {
                return Err(Error::field(
                    field,
                    format!("pair ({}, {}) must have i < j", rec.i, rec.j),
                ));
            }
            if rec.pick != rec.i && rec.pick != rec.j {
                return Err(Error::field(
                    format!("{field}.pick"),
                    format!(
                        "pair ({}, {}): pick {} is not a member of the pair",
                        rec.i, rec.j, rec.pick
                    ),
                ));
            }
            let rank = pair_rank(n, rec.i, rec.j);
            if picks[rank].is_some() {
                return Err(Error::field(
                    field,
                    format!("duplicate record for pair ({}, {})", rec.i, rec.j),
                ));
            }
            picks[rank] = Some(rec.pick);
        }
        // counting ensures every pair is covered once duplicates are ruled out
        WeakSelection::from_choices(n, |i, j| picks[pair_rank(n, i, j)].expect("covered"))
    }
}

fn check_unique_players(players: &[String]) -> Result<(), Error> {
    for (i, p) in players.iter().enumerate() {
        if players[..i].contains(p) {
            return Err(Error::field(
                format!("players[{i}]"),
                format!("duplicate player name {p:?}"),
            ));
        }
    }
    Ok(())
}

/// Timing and provenance attached to a report; excluded from determinism
/// guarantees.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SelectionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub elapsed_ms: f64,
}

/// King analysis in document form, with players referred to by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub format_version: u32,
    pub kings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_sets: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<WitnessRecord>>,
    pub metadata: ReportMetadata,
}

/// A two-step chain `king -> via -> target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub king: String,
    pub via: String,
    pub target: String,
}

impl ReportDocument {
    /// Renders a king report against the document's player names. K-sets and
    /// witnesses are included only when `details` is set.
    pub fn from_report(
        report: &KingReport,
        players: &[String],
        details: bool,
        metadata: ReportMetadata,
    ) -> Self {
        let name = |i: usize| players[i].clone();
        ReportDocument {
            format_version: FORMAT_VERSION,
            kings: report.kings.iter().copied().map(name).collect(),
            k_sets: details.then(|| {
                report
                    .k_sets
                    .iter()
                    .enumerate()
                    .map(|(x, ks)| (name(x), ks.iter().copied().map(name).collect()))
                    .collect()
            }),
            witnesses: details.then(|| {
                report
                    .witnesses
                    .iter()
                    .map(|(&(z, x), &y)| WitnessRecord {
                        king: name(z),
                        via: name(y),
                        target: name(x),
                    })
                    .collect()
            }),
            metadata,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// Sampled-space document: points in the unit square plus optional labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampledSpaceDocument {
    pub format_version: u32,
    pub points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl SampledSpaceDocument {
    pub fn from_space(space: &crate::SampledSpace) -> Self {
        SampledSpaceDocument {
            format_version: FORMAT_VERSION,
            points: space.points().to_vec(),
            labels: space.labels().map(<[String]>::to_vec),
        }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, Error> {
        Ok(serde_json::from_slice(bytes)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("space serializes");
        out.push('\n');
        out
    }

    /// Validates coordinates and labels and builds the metric space.
    pub fn to_space(&self) -> Result<crate::SampledSpace, Error> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::field(
                "format_version",
                format!("expected {FORMAT_VERSION}, got {}", self.format_version),
            ));
        }
        crate::SampledSpace::new(self.points.clone(), self.labels.clone())
    }
}

/// CSV view of an escape trace: one row per level, kings joined by `;`.
pub fn escape_trace_csv(trace: &EscapeTrace) -> String {
    let mut out = String::from("level,sample_size,king_ids,king_metric\n");
    for level in &trace.levels {
        let kings = level
            .kings
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{}\n",
            level.level, level.sample_size, kings, level.king_metric
        ));
    }
    out
}

/// Renders the tournament as a DOT digraph: one edge per pair, oriented from
/// winner to loser, kings drawn with a double circle. Output is
/// deterministic (nodes by index, edges in lexicographic pair order).
pub fn export_dot(doc: &TournamentDocument) -> Result<String, Error> {
    let sel = doc.to_selection()?;
    let kings = sel.king_report()?.kings;
    let mut out = String::from("digraph tournament {\n");
    for (i, p) in doc.players.iter().enumerate() {
        if kings.binary_search(&i).is_ok() {
            out.push_str(&format!("    {} [shape=doublecircle];\n", dot_quote(p)));
        } else {
            out.push_str(&format!("    {};\n", dot_quote(p)));
        }
    }
    for i in 0..sel.len() {
        for j in (i + 1)..sel.len() {
            let loser = sel.choice(i, j);
            let winner = i + j - loser;
            out.push_str(&format!(
                "    {} -> {};\n",
                dot_quote(&doc.players[winner]),
                dot_quote(&doc.players[loser])
            ));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
