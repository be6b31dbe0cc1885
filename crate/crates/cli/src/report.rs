//! JSON report shapes. Filters are keyed by state name; every number is an
//! exact rational string.

use std::collections::BTreeMap;

use serde::Serialize;
use talkfilter::equilibrium::ICReport;
use talkfilter::{Action, BinaryFilter, EquilibriumOutcome, Game, GameKind, Rational, Utilities};

#[derive(Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub command: Vec<String>,
    pub game: GameDigest,
    pub result: T,
    pub diagnostics: BTreeMap<String, ICReport>,
    pub timing: Timing,
}

#[derive(Debug, Serialize)]
pub struct GameDigest {
    #[serde(rename = "type")]
    pub kind: GameKind,
    pub states: usize,
    pub senders: usize,
}

impl GameDigest {
    pub fn of(game: &Game) -> GameDigest {
        GameDigest {
            kind: game.kind(),
            states: game.num_states(),
            senders: game.num_senders(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

pub type NamedFilter = BTreeMap<String, Rational>;

pub fn named(game: &Game, filter: &BinaryFilter) -> NamedFilter {
    filter.to_file(game).signal0_prob
}

#[derive(Debug, Serialize)]
pub struct OutcomeView {
    pub kind: talkfilter::EquilibriumKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub babbling_action: Option<Action>,
    pub utilities: Utilities,
    /// The binary filter the informative profile is played on.
    pub played_filter: NamedFilter,
}

impl OutcomeView {
    pub fn of(game: &Game, outcome: &EquilibriumOutcome) -> OutcomeView {
        OutcomeView {
            kind: outcome.kind,
            babbling_action: outcome.babbling_action,
            utilities: outcome.utilities.clone(),
            played_filter: named(game, &outcome.effective_filter),
        }
    }
}

pub fn utilities_line(u: &Utilities) -> String {
    let senders: Vec<String> = u.senders.iter().map(ToString::to_string).collect();
    if senders.len() == 1 {
        format!("sender {}, receiver {}", senders[0], u.receiver)
    } else {
        format!("senders [{}], receiver {}", senders.join(", "), u.receiver)
    }
}

pub fn filter_lines(game: &Game, filter: &BinaryFilter) -> String {
    let width = game.names().map(str::len).max().unwrap_or(0);
    game.names()
        .zip(filter.values())
        .map(|(n, x)| format!("  {n:<width$}  {x}\n"))
        .collect()
}

pub fn ic_line(name: &str, ic: &ICReport) -> String {
    format!(
        "{name} IC: {} (signal 0 slack {}, signal 1 slack {})",
        if ic.holds { "holds" } else { "fails" },
        ic.signal0_slack,
        ic.signal1_slack
    )
}
