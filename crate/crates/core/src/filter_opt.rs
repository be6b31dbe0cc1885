//! Receiver- and sender-optimal binary filters in `O(k log k)`.
//!
//! Agreement states get the signal both players want. Disagreement states start
//! at the extreme the *objective* player prefers; if that breaks the *constrained*
//! player's incentive constraints, states are conceded to the constrained
//! player in ascending order of
//!
//! ```text
//!   objective loss per unit of constrained slack = |d_obj(ω)| / |d_con(ω)|
//! ```
//!
//! until the constraints hold. The last conceded state (the pivot) is then
//! pulled back to the point where a constraint binds exactly. Prefix sums make
//! every step of the walk `O(1)`, so sorting dominates.

use std::cmp::Ordering;

use serde::Serialize;

use crate::equilibrium::{
    canonical_equilibrium, receiver_ic, sender_ic, EquilibriumOutcome, ICReport,
};
use crate::filter::BinaryFilter;
use crate::game::{classify_deltas, state_deltas, Game, Player, Region, StateDelta};
use crate::rational::{cmp_ratios, Rational};

/// Whose utility the filter maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Receiver,
    Sender,
}

impl Objective {
    pub fn player(self) -> Player {
        match self {
            Objective::Receiver => Player::Receiver,
            Objective::Sender => Player::Sender(0),
        }
    }

    /// The player whose incentive constraints limit the walk.
    pub fn constrained(self) -> Party {
        match self {
            Objective::Receiver => Party::Sender,
            Objective::Sender => Party::Receiver,
        }
    }

    fn optimizing(self) -> Party {
        match self {
            Objective::Receiver => Party::Receiver,
            Objective::Sender => Party::Sender,
        }
    }

    fn preferred_x(self, region: Region) -> Rational {
        match self {
            Objective::Receiver => region.receiver_preferred_x(),
            Objective::Sender => region.sender_preferred_x(),
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "receiver" => Ok(Objective::Receiver),
            "sender" => Ok(Objective::Sender),
            other => Err(format!("unknown objective {other:?}")),
        }
    }
}

/// The designated sender or the receiver, as an array index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Sender = 0,
    Receiver = 1,
}

impl Party {
    fn delta(self, d: &StateDelta) -> &Rational {
        match self {
            Party::Sender => &d.d_s,
            Party::Receiver => &d.d_r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SortedEntry {
    pub state: usize,
    pub region: Region,
    /// `|d_obj| / |d_con|`, strictly positive.
    pub ratio: Rational,
    /// Value while the state is at the objective player's extreme.
    pub initial_x: Rational,
    /// Value once the state is conceded to the constrained player.
    pub conceded_x: Rational,
    pub prior: Rational,
    pub delta: StateDelta,
}

/// Disagreement states in nondecreasing ratio order; equal ratios keep input order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SortedDisagreement {
    pub objective: Objective,
    pub entries: Vec<SortedEntry>,
}

impl SortedDisagreement {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn sort_disagreement(game: &Game, objective: Objective) -> SortedDisagreement {
    let deltas = state_deltas(game, 0).expect("games have at least one sender");
    sort_from_deltas(game, &deltas, objective)
}

fn sort_from_deltas(
    game: &Game,
    deltas: &[StateDelta],
    objective: Objective,
) -> SortedDisagreement {
    let classes = classify_deltas(deltas);
    let (obj, con) = (objective.optimizing(), objective.constrained());
    let mut keyed: Vec<(Rational, Rational, SortedEntry)> = Vec::new();
    for (i, d) in deltas.iter().enumerate() {
        let region = classes.region(i);
        if !region.is_disagreement() {
            continue;
        }
        let num = obj.delta(d).abs();
        let den = con.delta(d).abs();
        let initial_x = objective.preferred_x(region);
        keyed.push((
            num.clone(),
            den.clone(),
            SortedEntry {
                state: i,
                region,
                ratio: Rational::zero(),
                conceded_x: initial_x.complement(),
                initial_x,
                prior: game.states()[i].prior.clone(),
                delta: d.clone(),
            },
        ));
    }
    keyed.sort_by(|a, b| cmp_ratios(&a.0, &a.1, &b.0, &b.1));
    let entries = keyed
        .into_iter()
        .map(|(num, den, mut e)| {
            e.ratio = num / den;
            e
        })
        .collect();
    SortedDisagreement { objective, entries }
}

/// Precomputed partial sums of `p·d_t` for both parties `t` and both signals `b`.
///
/// For pivot position `i` (1-based in the sorted list) the signal-`b` slack of
/// party `t` equals `y[t][b] + w(t,b,i) + pivot term + s(t,b,i)`, where states
/// before the pivot sit at their conceded value and states after it at their
/// initial value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixSums {
    /// Agreement-state contributions: `b = 0` from states pinned to signal 0,
    /// `b = 1` from states pinned to signal 1.
    pub y: [[Rational; 2]; 2],
    /// `before[t][b][i]` = Σ over sorted positions `< i` (0-based) of the conceded contribution.
    before: [[Vec<Rational>; 2]; 2],
    /// `from[t][b][i]` = Σ over sorted positions `≥ i` (0-based) of the initial contribution.
    from: [[Vec<Rational>; 2]; 2],
    priors: Vec<Rational>,
    deltas: [Vec<Rational>; 2],
}

impl PrefixSums {
    /// Contribution of sorted states `j < i` (1-based pivot `i`), at their conceded values.
    pub fn w(&self, t: Party, b: usize, i: usize) -> &Rational {
        &self.before[t as usize][b][i - 1]
    }

    /// Contribution of sorted states `j > i` (1-based pivot `i`), at their initial values.
    pub fn s(&self, t: Party, b: usize, i: usize) -> &Rational {
        &self.from[t as usize][b][i]
    }

    /// Slack with no state conceded (every disagreement state at its initial value).
    pub fn initial_slack(&self, t: Party, b: usize) -> Rational {
        &self.y[t as usize][b] + &self.from[t as usize][b][0]
    }

    /// Slack of signal `b` for party `t` with the pivot at value `x`.
    pub fn slack_at(&self, t: Party, b: usize, i: usize, x: &Rational) -> Rational {
        let pd = &self.priors[i - 1] * &self.deltas[t as usize][i - 1];
        let mass = if b == 0 { x.clone() } else { x.complement() };
        &self.y[t as usize][b] + self.w(t, b, i) + pd * mass + self.s(t, b, i)
    }

    /// Both constraints of party `t` with the pivot at `x`.
    pub fn ic_at(&self, t: Party, i: usize, x: &Rational) -> ICReport {
        ICReport::from_slacks(self.slack_at(t, 0, i, x), self.slack_at(t, 1, i, x))
    }
}

/// Builds all partial sums in one forward and one backward pass.
pub fn precompute_sums(game: &Game, sorted: &SortedDisagreement) -> PrefixSums {
    let deltas = state_deltas(game, 0).expect("games have at least one sender");
    let classes = classify_deltas(&deltas);
    let zero = || [Rational::zero(), Rational::zero()];
    let mut y = [zero(), zero()];
    for (i, (s, d)) in game.states().iter().zip(&deltas).enumerate() {
        let b = match classes.region(i) {
            Region::Agree0 => 0,
            Region::Agree1 => 1,
            _ => continue,
        };
        y[0][b] += &s.prior * &d.d_s;
        y[1][b] += &s.prior * &d.d_r;
    }

    let k = sorted.len();
    let mut before: [[Vec<Rational>; 2]; 2] = Default::default();
    let mut from: [[Vec<Rational>; 2]; 2] = Default::default();
    for t in 0..2 {
        for b in 0..2 {
            before[t][b] = Vec::with_capacity(k + 1);
            before[t][b].push(Rational::zero());
            from[t][b] = vec![Rational::zero(); k + 1];
        }
    }
    // on signal 0 a state contributes when its value is 1, on signal 1 when it is 0
    let on = |b: usize, x: &Rational| if b == 0 { !x.is_zero() } else { x.is_zero() };
    for e in &sorted.entries {
        for (t, d) in [&e.delta.d_s, &e.delta.d_r].into_iter().enumerate() {
            let pd = &e.prior * d;
            for b in 0..2 {
                let last = before[t][b].last().expect("seeded").clone();
                let next = if on(b, &e.conceded_x) {
                    last + &pd
                } else {
                    last
                };
                before[t][b].push(next);
            }
        }
    }
    for (j, e) in sorted.entries.iter().enumerate().rev() {
        for (t, d) in [&e.delta.d_s, &e.delta.d_r].into_iter().enumerate() {
            let pd = &e.prior * d;
            for b in 0..2 {
                let tail = from[t][b][j + 1].clone();
                from[t][b][j] = if on(b, &e.initial_x) {
                    tail + &pd
                } else {
                    tail
                };
            }
        }
    }
    PrefixSums {
        y,
        before,
        from,
        priors: sorted.entries.iter().map(|e| e.prior.clone()).collect(),
        deltas: [
            sorted.entries.iter().map(|e| e.delta.d_s.clone()).collect(),
            sorted.entries.iter().map(|e| e.delta.d_r.clone()).collect(),
        ],
    }
}

/// Pivot value at 1-based position `i` that makes one of the constrained
/// party's constraints bind exactly while both still hold, choosing the
/// solution closest to the objective player's extreme. `None` when no such
/// value exists in `[0, 1]` (including a zero pivot coefficient).
pub fn pivot_q(sorted: &SortedDisagreement, sums: &PrefixSums, i: usize) -> Option<Rational> {
    let t = sorted.objective.constrained();
    let e = &sorted.entries[i - 1];
    let coef = &e.prior * t.delta(&e.delta);
    if coef.is_zero() {
        return None;
    }
    let base0 = &sums.y[t as usize][0] + sums.w(t, 0, i) + sums.s(t, 0, i);
    let base1 = &sums.y[t as usize][1] + sums.w(t, 1, i) + sums.s(t, 1, i);
    // base0 + coef·q = 0  and  base1 + coef·(1 - q) = 0
    let candidates = [-&base0 / &coef, Rational::one() + &base1 / &coef];
    let wants_high = !e.initial_x.is_zero();
    candidates
        .into_iter()
        .filter(|q| q.is_probability() && sums.ic_at(t, i, q).holds)
        .reduce(|a, b| match (a.cmp(&b), wants_high) {
            (Ordering::Less, true) | (Ordering::Greater, false) => b,
            _ => a,
        })
}

/// Constrained-party slacks after conceding the first `i` sorted states, for
/// `i = 0..=k'`. Useful for inspecting the walk; the optimizer itself only
/// evaluates the prefix it needs.
pub fn walk_slacks(game: &Game, objective: Objective) -> Vec<(Rational, Rational)> {
    let sorted = sort_disagreement(game, objective);
    let sums = precompute_sums(game, &sorted);
    let t = objective.constrained();
    let mut out = vec![(sums.initial_slack(t, 0), sums.initial_slack(t, 1))];
    for i in 1..=sorted.len() {
        let x = &sorted.entries[i - 1].conceded_x;
        out.push((sums.slack_at(t, 0, i, x), sums.slack_at(t, 1, i, x)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptimizerResult {
    pub objective: Objective,
    pub filter: BinaryFilter,
    /// 1-based position of the pivot in the sorted disagreement list.
    pub pivot_index: Option<usize>,
    /// Game index of the pivot state.
    pub pivot_state: Option<usize>,
    pub pivot_q: Option<Rational>,
    pub outcome: EquilibriumOutcome,
    pub fell_back_to_constant: bool,
}

fn ic(game: &Game, filter: &BinaryFilter, party: Party) -> ICReport {
    match party {
        Party::Sender => sender_ic(game, filter),
        Party::Receiver => receiver_ic(game, filter),
    }
}

fn optimize(game: &Game, objective: Objective) -> OptimizerResult {
    let deltas = state_deltas(game, 0).expect("games have at least one sender");
    let classes = classify_deltas(&deltas);
    let sorted = sort_from_deltas(game, &deltas, objective);
    let sums = precompute_sums(game, &sorted);
    let con = objective.constrained();
    let obj = objective.optimizing();

    // agreement states at their extremes, disagreement at the objective's end
    let mut xs: Vec<Rational> = (0..game.num_states())
        .map(|i| match classes.region(i) {
            Region::Agree0 => Rational::one(),
            Region::Agree1 => Rational::zero(),
            r => objective.preferred_x(r),
        })
        .collect();
    let done = |filter: BinaryFilter, pivot: Option<(usize, Option<Rational>)>| {
        let outcome = canonical_equilibrium(game, &filter);
        OptimizerResult {
            objective,
            pivot_index: pivot.as_ref().map(|p| p.0),
            pivot_state: pivot.as_ref().map(|p| sorted.entries[p.0 - 1].state),
            pivot_q: pivot.and_then(|p| p.1),
            filter,
            outcome,
            fell_back_to_constant: false,
        }
    };

    let initial = ICReport::from_slacks(sums.initial_slack(con, 0), sums.initial_slack(con, 1));
    if initial.holds {
        let filter = BinaryFilter::new_unchecked(xs);
        debug_assert!(ic(game, &filter, con).holds && ic(game, &filter, obj).holds);
        return done(filter, None);
    }

    // concede in sorted order until the constrained party is satisfied
    let mut prev = (initial.signal0_slack, initial.signal1_slack);
    for i in 1..=sorted.len() {
        let entry = &sorted.entries[i - 1];
        let rep = sums.ic_at(con, i, &entry.conceded_x);
        debug_assert!(
            rep.signal0_slack >= prev.0 && rep.signal1_slack <= prev.1,
            "concession walk must be monotone"
        );
        if !rep.holds {
            prev = (rep.signal0_slack, rep.signal1_slack);
            continue;
        }
        let q = pivot_q(&sorted, &sums, i);
        for e in &sorted.entries[..i - 1] {
            xs[e.state] = e.conceded_x.clone();
        }
        xs[entry.state] = q.clone().unwrap_or_else(|| entry.conceded_x.clone());
        let filter = BinaryFilter::new_unchecked(xs);
        debug_assert!(ic(game, &filter, con).holds);
        if ic(game, &filter, obj).holds {
            return done(filter, Some((i, q)));
        }
        break;
    }
    let filter = BinaryFilter::new_unchecked(vec![Rational::zero(); game.num_states()]);
    let outcome = canonical_equilibrium(game, &filter);
    OptimizerResult {
        objective,
        filter,
        pivot_index: None,
        pivot_state: None,
        pivot_q: None,
        outcome,
        fell_back_to_constant: true,
    }
}

/// Filter maximizing the receiver's utility in the best equilibrium (sender 0 is the sender).
pub fn receiver_optimal_filter(game: &Game) -> OptimizerResult {
    optimize(game, Objective::Receiver)
}

/// Filter maximizing the sender's utility in the best equilibrium.
pub fn sender_optimal_filter(game: &Game) -> OptimizerResult {
    optimize(game, Objective::Sender)
}

pub fn optimal_filter(game: &Game, objective: Objective) -> OptimizerResult {
    optimize(game, objective)
}
