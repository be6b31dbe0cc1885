//! Information filters: binary filters (probability of signal 0 per state) and
//! general filters (a finite distribution over signal strings per state).

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::rational::Rational;

/// Probability that the filter emits signal `0`, one entry per state in game order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryFilter {
    signal0: Vec<Rational>,
}

impl BinaryFilter {
    pub fn new(signal0: Vec<Rational>) -> Result<BinaryFilter> {
        if let Some((i, x)) = signal0
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_probability())
        {
            return Err(Error::InvalidFilter(format!(
                "state #{i} has signal-0 probability {x} outside [0, 1]"
            )));
        }
        Ok(BinaryFilter { signal0 })
    }

    pub(crate) fn new_unchecked(signal0: Vec<Rational>) -> BinaryFilter {
        debug_assert!(signal0.iter().all(Rational::is_probability));
        BinaryFilter { signal0 }
    }

    pub fn constant(num_states: usize, x: Rational) -> Result<BinaryFilter> {
        BinaryFilter::new(vec![x; num_states])
    }

    pub fn from_ints(bits: &[i64]) -> Result<BinaryFilter> {
        BinaryFilter::new(bits.iter().map(|&b| Rational::from_int(b)).collect())
    }

    /// Builds a filter from a name-keyed map; the map must cover exactly the game's states.
    pub fn from_named(game: &Game, named: &BTreeMap<String, Rational>) -> Result<BinaryFilter> {
        if let Some(extra) = named.keys().find(|k| game.state_index(k).is_none()) {
            return Err(Error::FilterDomainMismatch(format!(
                "filter names unknown state {extra:?}"
            )));
        }
        let xs = game
            .names()
            .map(|n| {
                named.get(n).cloned().ok_or_else(|| {
                    Error::FilterDomainMismatch(format!("filter is missing state {n:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BinaryFilter::new(xs)
    }

    pub fn len(&self) -> usize {
        self.signal0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signal0.is_empty()
    }

    pub fn get(&self, state: usize) -> &Rational {
        &self.signal0[state]
    }

    pub fn values(&self) -> &[Rational] {
        &self.signal0
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.signal0
    }

    /// Swaps the roles of signals 0 and 1.
    pub fn relabeled(&self) -> BinaryFilter {
        BinaryFilter::new_unchecked(self.signal0.iter().map(Rational::complement).collect())
    }

    pub fn check_domain(&self, game: &Game) -> Result<()> {
        if self.len() == game.num_states() {
            Ok(())
        } else {
            Err(Error::FilterDomainMismatch(format!(
                "filter covers {} states, game has {}",
                self.len(),
                game.num_states()
            )))
        }
    }

    /// Number of coordinates strictly inside (0, 1).
    pub fn fractional_count(&self) -> usize {
        self.signal0
            .iter()
            .filter(|x| x.is_positive() && **x < Rational::one())
            .count()
    }

    pub fn to_file(&self, game: &Game) -> FilterFile {
        FilterFile {
            signal0_prob: game
                .names()
                .zip(&self.signal0)
                .map(|(n, x)| (n.to_string(), x.clone()))
                .collect(),
        }
    }
}

/// Serializes as the list of signal-0 probabilities in state order.
impl Serialize for BinaryFilter {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.values().serialize(serializer)
    }
}

/// On-disk binary filter: `{"signal0_prob": {state-name: rational-string}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterFile {
    pub signal0_prob: BTreeMap<String, Rational>,
}

impl FilterFile {
    pub fn to_filter(&self, game: &Game) -> Result<BinaryFilter> {
        BinaryFilter::from_named(game, &self.signal0_prob)
    }
}

/// A finite distribution over signal strings for every state, in game order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralFilter {
    table: Vec<Vec<(String, Rational)>>,
}

impl GeneralFilter {
    /// Validates nonnegativity and that every row sums to exactly 1. Repeated
    /// signals within a row are combined.
    pub fn new(table: Vec<Vec<(String, Rational)>>) -> Result<GeneralFilter> {
        let mut merged = Vec::with_capacity(table.len());
        for (i, row) in table.into_iter().enumerate() {
            let mut out: Vec<(String, Rational)> = Vec::with_capacity(row.len());
            let mut total = Rational::zero();
            for (sig, p) in row {
                if p.is_negative() {
                    return Err(Error::InvalidFilter(format!(
                        "state #{i} gives signal {sig:?} negative probability {p}"
                    )));
                }
                total += &p;
                match out.iter_mut().find(|(s, _)| *s == sig) {
                    Some((_, q)) => *q += p,
                    None => out.push((sig, p)),
                }
            }
            if total != Rational::one() {
                return Err(Error::InvalidFilter(format!(
                    "state #{i} signal distribution sums to {total}"
                )));
            }
            merged.push(out);
        }
        Ok(GeneralFilter { table: merged })
    }

    /// Deterministic filter emitting `signal_of[state]`.
    pub fn deterministic<S: Into<String>>(signal_of: impl IntoIterator<Item = S>) -> GeneralFilter {
        GeneralFilter {
            table: signal_of
                .into_iter()
                .map(|s| vec![(s.into(), Rational::one())])
                .collect(),
        }
    }

    /// Full information: the signal is the state name.
    pub fn identity(game: &Game) -> GeneralFilter {
        GeneralFilter::deterministic(game.names())
    }

    /// The same signal in every state.
    pub fn uninformative(game: &Game) -> GeneralFilter {
        GeneralFilter::deterministic(game.names().map(|_| "_"))
    }

    pub fn from_binary(filter: &BinaryFilter) -> GeneralFilter {
        let table = filter
            .values()
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(2);
                if !x.is_zero() {
                    row.push(("0".to_string(), x.clone()));
                }
                let y = x.complement();
                if !y.is_zero() {
                    row.push(("1".to_string(), y));
                }
                row
            })
            .collect();
        GeneralFilter { table }
    }

    pub fn num_states(&self) -> usize {
        self.table.len()
    }

    pub fn row(&self, state: usize) -> &[(String, Rational)] {
        &self.table[state]
    }

    /// `X(ω)(signal)`.
    pub fn prob(&self, state: usize, signal: &str) -> Rational {
        self.table[state]
            .iter()
            .find(|(s, _)| s == signal)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Distinct signals with positive probability in some state, in order of first appearance.
    pub fn signals(&self) -> Vec<String> {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for row in &self.table {
            for (s, p) in row {
                if p.is_positive() && seen.insert(s.clone(), ()).is_none() {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn check_domain(&self, game: &Game) -> Result<()> {
        if self.num_states() == game.num_states() {
            Ok(())
        } else {
            Err(Error::FilterDomainMismatch(format!(
                "filter covers {} states, game has {}",
                self.num_states(),
                game.num_states()
            )))
        }
    }

    pub fn to_file(&self, game: &Game) -> GeneralFilterFile {
        GeneralFilterFile {
            signals: game
                .names()
                .zip(&self.table)
                .map(|(n, row)| (n.to_string(), row.iter().cloned().collect()))
                .collect(),
        }
    }
}

/// On-disk general filter: `{"signals": {state-name: {signal: rational-string}}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralFilterFile {
    pub signals: BTreeMap<String, BTreeMap<String, Rational>>,
}

impl GeneralFilterFile {
    pub fn to_filter(&self, game: &Game) -> Result<GeneralFilter> {
        if let Some(extra) = self.signals.keys().find(|k| game.state_index(k).is_none()) {
            return Err(Error::FilterDomainMismatch(format!(
                "filter names unknown state {extra:?}"
            )));
        }
        let table = game
            .names()
            .map(|n| {
                self.signals
                    .get(n)
                    .map(|row| row.iter().map(|(s, p)| (s.clone(), p.clone())).collect())
                    .ok_or_else(|| {
                        Error::FilterDomainMismatch(format!("filter is missing state {n:?}"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        GeneralFilter::new(table)
    }
}
