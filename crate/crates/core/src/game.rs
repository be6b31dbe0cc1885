//! Games, state records and the per-state preference classification.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One of the two receiver actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

impl Action {
    pub fn index(self) -> usize {
        match self {
            Action::Zero => 0,
            Action::One => 1,
        }
    }

    pub fn other(self) -> Action {
        match self {
            Action::Zero => Action::One,
            Action::One => Action::Zero,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Sender(usize),
    Receiver,
}

/// Utilities `(u(·, ω, 0), u(·, ω, 1))` of one player in one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityPair {
    pub action0: Rational,
    pub action1: Rational,
}

impl UtilityPair {
    pub fn new(action0: Rational, action1: Rational) -> Self {
        UtilityPair { action0, action1 }
    }

    pub fn ints(a0: i64, a1: i64) -> Self {
        UtilityPair::new(a0.into(), a1.into())
    }

    pub fn get(&self, a: Action) -> &Rational {
        match a {
            Action::Zero => &self.action0,
            Action::One => &self.action1,
        }
    }

    /// `u(0) - u(1)`.
    pub fn delta(&self) -> Rational {
        &self.action0 - &self.action1
    }

    /// Preferred action, ties to 0.
    pub fn best(&self) -> Action {
        if self.action0 >= self.action1 {
            Action::Zero
        } else {
            Action::One
        }
    }

    pub fn max(&self) -> &Rational {
        self.get(self.best())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateRecord {
    pub name: String,
    pub prior: Rational,
    pub sender_utils: Vec<UtilityPair>,
    pub receiver_utils: UtilityPair,
}

impl StateRecord {
    pub fn utils(&self, player: Player) -> &UtilityPair {
        match player {
            Player::Sender(i) => &self.sender_utils[i],
            Player::Receiver => &self.receiver_utils,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    /// One sender.
    Transmission,
    /// One or more equally informed senders.
    Aggregation,
}

/// A validated game. Construct through [`Game::new`] or [`validate_game`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    kind: GameKind,
    states: Vec<StateRecord>,
    num_senders: usize,
}

impl Game {
    pub fn new(kind: GameKind, states: Vec<StateRecord>) -> Result<Game> {
        let first = states.first().ok_or(Error::EmptyStateList)?;
        let num_senders = match kind {
            GameKind::Transmission => 1,
            GameKind::Aggregation => first.sender_utils.len(),
        };
        if num_senders == 0 {
            return Err(Error::SenderCountMismatch {
                state: first.name.clone(),
                expected: 1,
                found: 0,
            });
        }
        let mut seen = HashSet::with_capacity(states.len());
        let mut total = Rational::zero();
        for s in &states {
            if !seen.insert(s.name.as_str()) {
                return Err(Error::DuplicateStateName(s.name.clone()));
            }
            if s.sender_utils.len() != num_senders {
                return Err(Error::SenderCountMismatch {
                    state: s.name.clone(),
                    expected: num_senders,
                    found: s.sender_utils.len(),
                });
            }
            if !s.prior.is_positive() {
                return Err(Error::NonPositivePrior {
                    state: s.name.clone(),
                    prior: s.prior.clone(),
                });
            }
            total += &s.prior;
        }
        if total != Rational::one() {
            return Err(Error::PriorNotNormalized { sum: total });
        }
        Ok(Game {
            kind,
            states,
            num_senders,
        })
    }

    /// Single-sender game from `(name, prior, sender (u0,u1), receiver (u0,u1))` tuples.
    pub fn transmission<S: Into<String>>(
        rows: impl IntoIterator<Item = (S, Rational, UtilityPair, UtilityPair)>,
    ) -> Result<Game> {
        let states = rows
            .into_iter()
            .map(|(name, prior, s, r)| StateRecord {
                name: name.into(),
                prior,
                sender_utils: vec![s],
                receiver_utils: r,
            })
            .collect();
        Game::new(GameKind::Transmission, states)
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn states(&self) -> &[StateRecord] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_senders(&self) -> usize {
        self.num_senders
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.states.iter().map(|s| s.name.as_str())
    }

    pub fn players(&self) -> impl Iterator<Item = Player> {
        (0..self.num_senders)
            .map(Player::Sender)
            .chain(std::iter::once(Player::Receiver))
    }

    pub fn check_sender(&self, sender: usize) -> Result<()> {
        if sender < self.num_senders {
            Ok(())
        } else {
            Err(Error::SenderIndexOutOfRange {
                index: sender,
                count: self.num_senders,
            })
        }
    }

    /// The single-sender game seen by `sender` alone; the other senders are dropped.
    pub fn project_sender(&self, sender: usize) -> Result<Game> {
        self.check_sender(sender)?;
        let states = self
            .states
            .iter()
            .map(|s| StateRecord {
                name: s.name.clone(),
                prior: s.prior.clone(),
                sender_utils: vec![s.sender_utils[sender].clone()],
                receiver_utils: s.receiver_utils.clone(),
            })
            .collect();
        Ok(Game {
            kind: GameKind::Transmission,
            states,
            num_senders: 1,
        })
    }

    /// Keeps only the first `count` senders.
    pub fn truncate_senders(&self, count: usize) -> Result<Game> {
        if count == 0 || count > self.num_senders {
            return Err(Error::WrongSenderCount {
                expected: format!("between 1 and {}", self.num_senders),
                found: count,
            });
        }
        let states = self
            .states
            .iter()
            .map(|s| StateRecord {
                sender_utils: s.sender_utils[..count].to_vec(),
                ..s.clone()
            })
            .collect();
        let kind = if count == 1 {
            GameKind::Transmission
        } else {
            GameKind::Aggregation
        };
        Ok(Game {
            kind,
            states,
            num_senders: count,
        })
    }
}

// ---------------------------------------------------------------------------
// Raw (file-level) description

/// Game file contents before validation. Rationals are kept as strings so
/// errors can name the offending field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGame {
    #[serde(rename = "type")]
    pub kind: GameKind,
    pub states: Vec<RawState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawState {
    pub name: String,
    pub prior: String,
    pub sender_utilities: Vec<[String; 2]>,
    pub receiver_utility: [String; 2],
}

fn parse_field(field: String, value: &str) -> Result<Rational> {
    value.parse().map_err(|_| Error::InvalidRational {
        field,
        value: value.to_string(),
    })
}

/// Parses every rational field and checks all game invariants.
pub fn validate_game(raw: &RawGame) -> Result<Game> {
    if raw.states.is_empty() {
        return Err(Error::EmptyStateList);
    }
    if raw.kind == GameKind::Transmission {
        if let Some(bad) = raw.states.iter().find(|s| s.sender_utilities.len() != 1) {
            return Err(Error::SenderCountMismatch {
                state: bad.name.clone(),
                expected: 1,
                found: bad.sender_utilities.len(),
            });
        }
    }
    let mut states = Vec::with_capacity(raw.states.len());
    for (i, s) in raw.states.iter().enumerate() {
        let at = |f: &str| format!("states[{i}].{f}");
        let prior = parse_field(at("prior"), &s.prior)?;
        let sender_utils = s
            .sender_utilities
            .iter()
            .enumerate()
            .map(|(j, [u0, u1])| {
                Ok(UtilityPair::new(
                    parse_field(at(&format!("sender_utilities[{j}][0]")), u0)?,
                    parse_field(at(&format!("sender_utilities[{j}][1]")), u1)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let receiver_utils = UtilityPair::new(
            parse_field(at("receiver_utility[0]"), &s.receiver_utility[0])?,
            parse_field(at("receiver_utility[1]"), &s.receiver_utility[1])?,
        );
        states.push(StateRecord {
            name: s.name.clone(),
            prior,
            sender_utils,
            receiver_utils,
        });
    }
    Game::new(raw.kind, states)
}

impl From<&Game> for RawGame {
    fn from(game: &Game) -> RawGame {
        let pair = |u: &UtilityPair| [u.action0.to_string(), u.action1.to_string()];
        RawGame {
            kind: game.kind,
            states: game
                .states
                .iter()
                .map(|s| RawState {
                    name: s.name.clone(),
                    prior: s.prior.to_string(),
                    sender_utilities: s.sender_utils.iter().map(pair).collect(),
                    receiver_utility: pair(&s.receiver_utils),
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Deltas and classification

/// Utility differences `u(·, ω, 0) - u(·, ω, 1)` for one sender and the receiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateDelta {
    pub d_s: Rational,
    pub d_r: Rational,
}

pub fn state_deltas(game: &Game, sender: usize) -> Result<Vec<StateDelta>> {
    game.check_sender(sender)?;
    Ok(game
        .states
        .iter()
        .map(|s| StateDelta {
            d_s: s.sender_utils[sender].delta(),
            d_r: s.receiver_utils.delta(),
        })
        .collect())
}

/// Which agreement or disagreement set a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    /// Both weakly prefer 0 (sender indifferent counts when the receiver weakly prefers 0).
    Agree0,
    /// Both weakly prefer 1.
    Agree1,
    /// Sender strictly prefers 0, receiver strictly prefers 1.
    Sender0Receiver1,
    /// Sender strictly prefers 1, receiver strictly prefers 0.
    Sender1Receiver0,
}

impl Region {
    pub fn of(delta: &StateDelta) -> Region {
        match (delta.d_s.signum(), delta.d_r.signum()) {
            (1, -1) => Region::Sender0Receiver1,
            (-1, 1) => Region::Sender1Receiver0,
            (1, _) => Region::Agree0,
            (-1, _) => Region::Agree1,
            (_, r) if r >= 0 => Region::Agree0,
            _ => Region::Agree1,
        }
    }

    pub fn is_disagreement(self) -> bool {
        matches!(self, Region::Sender0Receiver1 | Region::Sender1Receiver0)
    }

    /// Probability of signal 0 the sender would pick for this state.
    pub fn sender_preferred_x(self) -> Rational {
        match self {
            Region::Agree0 | Region::Sender0Receiver1 => Rational::one(),
            Region::Agree1 | Region::Sender1Receiver0 => Rational::zero(),
        }
    }

    /// Probability of signal 0 the receiver would pick for this state.
    pub fn receiver_preferred_x(self) -> Rational {
        match self {
            Region::Agree0 | Region::Sender1Receiver0 => Rational::one(),
            Region::Agree1 | Region::Sender0Receiver1 => Rational::zero(),
        }
    }
}

/// Partition of state indices into the four preference sets.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct StateClassification {
    pub omega_00: Vec<usize>,
    pub omega_11: Vec<usize>,
    pub omega_01: Vec<usize>,
    pub omega_10: Vec<usize>,
    #[serde(skip)]
    pub regions: Vec<Option<Region>>,
}

impl StateClassification {
    pub fn region(&self, state: usize) -> Region {
        self.regions[state].expect("every state is classified")
    }
}

pub fn classify_states(game: &Game, sender: usize) -> Result<StateClassification> {
    let deltas = state_deltas(game, sender)?;
    Ok(classify_deltas(&deltas))
}

pub fn classify_deltas(deltas: &[StateDelta]) -> StateClassification {
    let mut c = StateClassification {
        regions: Vec::with_capacity(deltas.len()),
        ..Default::default()
    };
    for (i, d) in deltas.iter().enumerate() {
        let region = Region::of(d);
        match region {
            Region::Agree0 => c.omega_00.push(i),
            Region::Agree1 => c.omega_11.push(i),
            Region::Sender0Receiver1 => c.omega_01.push(i),
            Region::Sender1Receiver0 => c.omega_10.push(i),
        }
        c.regions.push(Some(region));
    }
    c
}
