//! Finite tournaments represented as weak selections, and the machinery to
//! find their kings.
//!
//! A *weak selection* on a finite set picks one element out of every unordered
//! pair; equivalently it orients the complete graph, i.e. it is a tournament.
//! The convention throughout this crate is that `a` *beats* `b` exactly when
//! the selection picks `b` from `{a, b}`, and the dominance relation
//! `arrow(a, b)` holds when `a = b` or `a` beats `b`. A *king* is a player
//! that reaches every other player in at most two dominance steps.
//!
//! The crate has four layers:
//!
//! - [`tournament`]: the core [`WeakSelection`] type, dominance relations,
//!   k-sets (computed two independent ways), king reports, restriction, and
//!   exhaustive enumeration of small tournaments.
//! - [`constructions`]: generators for the selection families used in the
//!   escape experiments — order selections, clopen sums, graded partitions,
//!   sampled function graphs, and seeded random tournaments — plus the
//!   declarative [`SelectionSpec`] recipe format.
//! - [`sample`]: finite metric samples of the unit interval/square, the
//!   `|sin(1/t)|` curve, and a resolution-bounded continuity falsifier.
//! - [`experiments`]: king stability vs. king escape under refinement, and
//!   exhaustive verification over all small tournaments.
//!
//! File formats (tournament documents, sampled spaces, escape traces, DOT
//! export) live in [`doc`]; the `kings` CLI is a thin wrapper over them.

pub mod constructions;
pub mod doc;
pub mod experiments;
pub mod rng;
pub mod sample;
pub mod tournament;

pub use constructions::{
    clopen_sum, graded_partition, graph_selection, order_selection, random_tournament,
    SelectionMode, SelectionSpec,
};
pub use doc::{ChoiceRecord, ReportDocument, SampledSpaceDocument, TournamentDocument};
pub use experiments::{
    exhaustive_verify, gap_escape_experiment, graded_escape_experiment, sine_king_experiment,
    EscapeLevel, EscapeMode, EscapeTrace, SineKingReport, VerifyReport,
};
pub use sample::{
    continuity_falsify, sample_graph, sine_curve_f, uniform_grid, ContinuityCertificate,
    ContinuityVerdict, SampledSpace, Violation,
};
pub use tournament::{enumerate_tournaments, DominanceRelation, KingReport, WeakSelection};

use thiserror::Error;

/// Errors for everything that validates input: constructions, documents,
/// samples, and king queries on degenerate tournaments.
///
/// Index preconditions of the cheap accessors (`arrow`, `choice`,
/// `out_degree`, ...) are asserted, not returned; only data that can come
/// from outside the process is funneled through this type.
#[derive(Debug, Error)]
pub enum Error {
    /// King queries require at least one player.
    #[error("tournament must have at least one player")]
    EmptyTournament,

    /// A player index fell outside `0..n`.
    #[error("player index {index} out of range for {n} players")]
    PlayerOutOfRange { index: usize, n: usize },

    /// A named input field failed validation. The field path is precise
    /// enough for a CLI diagnostic (`choices[3].pick`, `keys`, ...).
    #[error("invalid {field}: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidField {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
