//! Incentive compatibility, canonical equilibrium selection and a general Nash
//! verifier for filtered single-sender games.
//!
//! For a binary filter `x` (probability of signal 0 per state) the profile in
//! which the sender names her preferred action and the receiver obeys is a best
//! response for player `t` iff
//!
//! ```text
//!   Σ p(ω)·d_t(ω)·x(ω)     ≥ 0      (prefers 0 on signal 0)
//!   Σ p(ω)·d_t(ω)·(1-x(ω)) ≤ 0      (prefers 1 on signal 1)
//! ```
//!
//! with `d_t(ω) = u_t(ω,0) - u_t(ω,1)`. Weak inequalities count as compatible.
//! Among the Pareto-optimal equilibria of a filtered game it suffices to look at
//! that informative profile and the babbling profile.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{evaluate_babbling, evaluate_sigma_s, Utilities};
use crate::filter::{BinaryFilter, GeneralFilter};
use crate::game::{Action, Game, Player, StateRecord};
use crate::rational::Rational;

/// Both slack values of the two linear incentive constraints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ICReport {
    pub holds: bool,
    /// `Σ p·d·x`, must be `≥ 0`.
    pub signal0_slack: Rational,
    /// `Σ p·d·(1-x)`, must be `≤ 0`.
    pub signal1_slack: Rational,
}

impl ICReport {
    pub fn from_slacks(signal0_slack: Rational, signal1_slack: Rational) -> ICReport {
        ICReport {
            holds: !signal0_slack.is_negative() && !signal1_slack.is_positive(),
            signal0_slack,
            signal1_slack,
        }
    }
}

fn ic_report<'a>(
    game: &'a Game,
    filter: &BinaryFilter,
    delta: impl Fn(&'a StateRecord) -> Rational,
) -> ICReport {
    debug_assert_eq!(filter.len(), game.num_states());
    let mut s0 = Rational::zero();
    let mut s1 = Rational::zero();
    for (s, x) in game.states().iter().zip(filter.values()) {
        let w = &s.prior * delta(s);
        let on0 = &w * x;
        s1 += &w - &on0;
        s0 += on0;
    }
    ICReport::from_slacks(s0, s1)
}

/// Incentive constraints of the designated sender (sender 0).
pub fn sender_ic(game: &Game, filter: &BinaryFilter) -> ICReport {
    sender_ic_for(game, filter, 0)
}

pub fn sender_ic_for(game: &Game, filter: &BinaryFilter, sender: usize) -> ICReport {
    ic_report(game, filter, |s| s.sender_utils[sender].delta())
}

pub fn receiver_ic(game: &Game, filter: &BinaryFilter) -> ICReport {
    ic_report(game, filter, |s| s.receiver_utils.delta())
}

/// Which message the informative profile sends on a signal whose unnormalized
/// posterior deltas are `sender_delta` and `receiver_delta`: the sender's strict
/// preference, else the receiver's strict preference, else 0.
pub fn preferred_report(sender_delta: &Rational, receiver_delta: &Rational) -> Action {
    match sender_delta.signum() {
        1 => Action::Zero,
        -1 => Action::One,
        _ if receiver_delta.is_negative() => Action::One,
        _ => Action::Zero,
    }
}

/// Relabels a binary filter so that, on each signal with positive probability,
/// the sender weakly prefers the action the signal names. Signals mapped to the
/// same report are merged.
pub fn merge_binary(game: &Game, filter: &BinaryFilter) -> BinaryFilter {
    let s = sender_ic(game, filter);
    let r = receiver_ic(game, filter);
    let on0 = preferred_report(&s.signal0_slack, &r.signal0_slack);
    let on1 = preferred_report(&s.signal1_slack, &r.signal1_slack);
    match (on0, on1) {
        (Action::Zero, Action::One) => filter.clone(),
        (Action::One, Action::Zero) => filter.relabeled(),
        (Action::Zero, Action::Zero) => {
            BinaryFilter::new_unchecked(vec![Rational::one(); filter.len()])
        }
        (Action::One, Action::One) => {
            BinaryFilter::new_unchecked(vec![Rational::zero(); filter.len()])
        }
    }
}

/// Per-signal report of the informative profile on a general filter.
pub fn signal_reports(game: &Game, filter: &GeneralFilter) -> Result<Vec<(String, Action)>> {
    filter.check_domain(game)?;
    let mut acc: Vec<(String, Rational, Rational)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for (i, s) in game.states().iter().enumerate() {
        let ds = s.sender_utils[0].delta();
        let dr = s.receiver_utils.delta();
        for (sig, q) in filter.row(i) {
            if !q.is_positive() {
                continue;
            }
            let w = &s.prior * q;
            let slot = *index.entry(sig.clone()).or_insert_with(|| {
                acc.push((sig.clone(), Rational::zero(), Rational::zero()));
                acc.len() - 1
            });
            acc[slot].1 += &w * &ds;
            acc[slot].2 += &w * &dr;
        }
    }
    Ok(acc
        .into_iter()
        .map(|(sig, ds, dr)| {
            let a = preferred_report(&ds, &dr);
            (sig, a)
        })
        .collect())
}

/// Collapses a general filter to the binary filter that emits 0 exactly when the
/// original signal would make the sender report 0.
pub fn merge_to_binary(game: &Game, filter: &GeneralFilter) -> Result<BinaryFilter> {
    let reports: HashMap<String, Action> = signal_reports(game, filter)?.into_iter().collect();
    let xs = (0..game.num_states())
        .map(|i| {
            filter
                .row(i)
                .iter()
                .filter(|(sig, _)| reports.get(sig) == Some(&Action::Zero))
                .map(|(_, q)| q)
                .sum()
        })
        .collect();
    Ok(BinaryFilter::new_unchecked(xs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquilibriumKind {
    /// Sender names her preferred action, receiver obeys.
    InformativeSigmaS,
    /// Messages are ignored; receiver plays her best uninformed action.
    BabblingSigmaR,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumOutcome {
    pub kind: EquilibriumKind,
    pub utilities: Utilities,
    /// Present for the babbling profile.
    pub babbling_action: Option<Action>,
    /// The sender-compatible binary filter the informative profile is played on.
    #[serde(skip)]
    pub effective_filter: BinaryFilter,
}

impl EquilibriumOutcome {
    pub fn is_informative(&self) -> bool {
        self.kind == EquilibriumKind::InformativeSigmaS
    }

    pub fn utility(&self, player: Player) -> &Rational {
        self.utilities.get(player)
    }
}

fn select(game: &Game, merged: BinaryFilter) -> EquilibriumOutcome {
    if receiver_ic(game, &merged).holds {
        EquilibriumOutcome {
            kind: EquilibriumKind::InformativeSigmaS,
            utilities: evaluate_sigma_s(game, &merged),
            babbling_action: None,
            effective_filter: merged,
        }
    } else {
        let (action, utilities) = evaluate_babbling(game);
        EquilibriumOutcome {
            kind: EquilibriumKind::BabblingSigmaR,
            utilities,
            babbling_action: Some(action),
            effective_filter: merged,
        }
    }
}

/// Pareto-optimal equilibrium of the game filtered by `filter`: the informative
/// profile when the receiver is willing to obey, otherwise babbling.
pub fn canonical_equilibrium(game: &Game, filter: &BinaryFilter) -> EquilibriumOutcome {
    select(game, merge_binary(game, filter))
}

pub fn canonical_equilibrium_general(
    game: &Game,
    filter: &GeneralFilter,
) -> Result<EquilibriumOutcome> {
    Ok(select(game, merge_to_binary(game, filter)?))
}

// ---------------------------------------------------------------------------
// General profiles

/// A profile of the filtered game with arbitrary finite message sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralProfile {
    /// signal -> distribution over messages
    pub sender_strategy: BTreeMap<String, Vec<(String, Rational)>>,
    /// message -> probability the receiver plays action 0; the keys are the message set
    pub receiver_strategy: BTreeMap<String, Rational>,
}

impl GeneralProfile {
    /// The informative profile: report the preferred action, receiver obeys.
    pub fn sigma_s(game: &Game, filter: &GeneralFilter) -> Result<GeneralProfile> {
        let sender_strategy = signal_reports(game, filter)?
            .into_iter()
            .map(|(sig, a)| (sig, vec![(a.to_string(), Rational::one())]))
            .collect();
        Ok(GeneralProfile {
            sender_strategy,
            receiver_strategy: obey(),
        })
    }

    /// Single message everywhere; the receiver plays her uninformed best action.
    pub fn babbling(game: &Game, filter: &GeneralFilter) -> GeneralProfile {
        let (a, _) = evaluate_babbling(game);
        let silent = "_".to_string();
        GeneralProfile {
            sender_strategy: filter
                .signals()
                .into_iter()
                .map(|sig| (sig, vec![(silent.clone(), Rational::one())]))
                .collect(),
            receiver_strategy: [(silent, action_as_prob0(a))].into_iter().collect(),
        }
    }

    /// Sender reports the action she prefers given the signal (ties to 0), receiver obeys.
    pub fn report_sender_preference(game: &Game, filter: &GeneralFilter) -> Result<GeneralProfile> {
        let sender_strategy = signal_reports(game, filter)?
            .into_iter()
            .map(|(sig, _)| {
                let ds = sender_signal_delta(game, filter, &sig);
                let a = if ds.is_negative() {
                    Action::One
                } else {
                    Action::Zero
                };
                (sig, vec![(a.to_string(), Rational::one())])
            })
            .collect();
        Ok(GeneralProfile {
            sender_strategy,
            receiver_strategy: obey(),
        })
    }
}

fn obey() -> BTreeMap<String, Rational> {
    [
        ("0".to_string(), Rational::one()),
        ("1".to_string(), Rational::zero()),
    ]
    .into_iter()
    .collect()
}

fn action_as_prob0(a: Action) -> Rational {
    match a {
        Action::Zero => Rational::one(),
        Action::One => Rational::zero(),
    }
}

fn sender_signal_delta(game: &Game, filter: &GeneralFilter, signal: &str) -> Rational {
    game.states()
        .iter()
        .enumerate()
        .map(|(i, s)| &s.prior * filter.prob(i, signal) * s.sender_utils[0].delta())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum MessageClass {
    /// Sent on some signal where the sender strictly prefers 0.
    M0,
    /// Sent on some signal where the sender strictly prefers 1.
    M1,
    /// Sent on some signal where the sender is indifferent.
    Meq,
}

/// Thresholds showing the sender side of a profile is a best response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SenderICWitness {
    pub l_min: Rational,
    pub l_max: Rational,
    pub message_classes: BTreeMap<String, BTreeSet<MessageClass>>,
}

/// A profitable unilateral deviation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Deviation {
    Sender {
        signal: String,
        message: String,
        better_message: String,
    },
    Receiver {
        message: String,
        better_action: Action,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum NashVerdict {
    Equilibrium(SenderICWitness),
    NotEquilibrium(Deviation),
}

impl NashVerdict {
    pub fn is_nash(&self) -> bool {
        matches!(self, NashVerdict::Equilibrium(_))
    }
}

fn validate_profile(filter: &GeneralFilter, profile: &GeneralProfile) -> Result<Vec<String>> {
    let signals = filter.signals();
    for sig in profile.sender_strategy.keys() {
        if !signals.contains(sig) {
            return Err(Error::ZeroProbabilitySignal(sig.clone()));
        }
    }
    for sig in &signals {
        let dist = profile.sender_strategy.get(sig).ok_or_else(|| {
            Error::InvalidProfile(format!("sender strategy missing signal {sig:?}"))
        })?;
        let mut total = Rational::zero();
        for (m, q) in dist {
            if q.is_negative() {
                return Err(Error::InvalidProfile(format!(
                    "negative probability for message {m:?} on signal {sig:?}"
                )));
            }
            if !profile.receiver_strategy.contains_key(m) {
                return Err(Error::InvalidProfile(format!(
                    "message {m:?} has no receiver response"
                )));
            }
            total += q;
        }
        if total != Rational::one() {
            return Err(Error::InvalidProfile(format!(
                "message distribution on signal {sig:?} sums to {total}"
            )));
        }
    }
    if let Some((m, _)) = profile
        .receiver_strategy
        .iter()
        .find(|(_, q)| !q.is_probability())
    {
        return Err(Error::InvalidProfile(format!(
            "receiver response to {m:?} is not a probability"
        )));
    }
    Ok(signals)
}

/// Checks whether `profile` is a Nash equilibrium of the game filtered by
/// `filter`. The sender side uses the message-class characterization (messages
/// sent on a 0-preferring signal must maximize the receiver's probability of 0,
/// messages sent on a 1-preferring signal must minimize it); the receiver side
/// checks a posterior best response on every message sent with positive
/// probability.
pub fn check_nash_general(
    game: &Game,
    filter: &GeneralFilter,
    profile: &GeneralProfile,
) -> Result<NashVerdict> {
    filter.check_domain(game)?;
    let signals = validate_profile(filter, profile)?;
    let response = &profile.receiver_strategy;

    let (l_max_msg, l_max) = response
        .iter()
        .max_by(|a, b| a.1.cmp(b.1))
        .map(|(m, q)| (m.clone(), q.clone()))
        .ok_or_else(|| Error::InvalidProfile("empty message set".into()))?;
    let (l_min_msg, l_min) = response
        .iter()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(m, q)| (m.clone(), q.clone()))
        .expect("nonempty");

    let mut classes: BTreeMap<String, BTreeSet<MessageClass>> = BTreeMap::new();
    for sig in &signals {
        let ds = sender_signal_delta(game, filter, sig);
        let class = match ds.signum() {
            1 => MessageClass::M0,
            -1 => MessageClass::M1,
            _ => MessageClass::Meq,
        };
        for (m, q) in &profile.sender_strategy[sig] {
            if !q.is_positive() {
                continue;
            }
            classes.entry(m.clone()).or_default().insert(class);
            let r0 = &response[m];
            let deviation = match class {
                MessageClass::M0 if *r0 != l_max => Some(l_max_msg.clone()),
                MessageClass::M1 if *r0 != l_min => Some(l_min_msg.clone()),
                _ => None,
            };
            if let Some(better_message) = deviation {
                return Ok(NashVerdict::NotEquilibrium(Deviation::Sender {
                    signal: sig.clone(),
                    message: m.clone(),
                    better_message,
                }));
            }
        }
    }

    // Receiver: unnormalized posterior delta per message.
    let mut receiver_delta: BTreeMap<&str, Rational> = BTreeMap::new();
    let mut mass: BTreeMap<&str, Rational> = BTreeMap::new();
    for (i, s) in game.states().iter().enumerate() {
        let dr = s.receiver_utils.delta();
        for (sig, qx) in filter.row(i) {
            let Some(dist) = profile.sender_strategy.get(sig) else {
                continue;
            };
            for (m, qm) in dist {
                let w = &s.prior * qx * qm;
                *receiver_delta.entry(m).or_default() += &w * &dr;
                *mass.entry(m).or_default() += w;
            }
        }
    }
    for (m, w) in &mass {
        if !w.is_positive() {
            continue;
        }
        let d = &receiver_delta[m];
        let r0 = &response[*m];
        if r0.is_positive() && d.is_negative() {
            return Ok(NashVerdict::NotEquilibrium(Deviation::Receiver {
                message: m.to_string(),
                better_action: Action::One,
            }));
        }
        if *r0 < Rational::one() && d.is_positive() {
            return Ok(NashVerdict::NotEquilibrium(Deviation::Receiver {
                message: m.to_string(),
                better_action: Action::Zero,
            }));
        }
    }

    Ok(NashVerdict::Equilibrium(SenderICWitness {
        l_min,
        l_max,
        message_classes: classes,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::evaluate_constant;
    use crate::fixtures::{art_game, g3_game};
    use crate::test_support::small_game;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn bits(b: &[i64]) -> BinaryFilter {
        BinaryFilter::from_ints(b).unwrap()
    }

    #[test]
    fn sender_ic_examples() {
        let rep = sender_ic(&art_game(), &bits(&[0, 1, 1]));
        assert!(rep.holds);
        assert_eq!((rep.signal0_slack, rep.signal1_slack), (r(4, 3), r(-1, 3)));

        let g3 = g3_game();
        let rep = sender_ic(&g3, &bits(&[0, 0, 0]));
        assert_eq!(rep.signal0_slack, Rational::zero());
        assert_eq!(rep.signal1_slack, r(-1, 1));
        assert!(rep.holds);

        let rep = sender_ic(&g3, &bits(&[1, 0, 1]));
        assert!(!rep.holds);
        assert_eq!(rep.signal0_slack, r(-2, 3));
    }

    #[test]
    fn receiver_ic_examples() {
        let rep = receiver_ic(&art_game(), &bits(&[0, 1, 1]));
        assert!(rep.holds);
        assert_eq!((rep.signal0_slack, rep.signal1_slack), (r(10, 3), r(-1, 3)));

        let x = BinaryFilter::new(vec![r(1, 1), r(0, 1), r(1, 3)]).unwrap();
        let rep = receiver_ic(&g3_game(), &x);
        assert!(rep.holds);
        assert_eq!((rep.signal0_slack, rep.signal1_slack), (r(4, 9), r(-1, 9)));
    }

    #[test]
    fn canonical_examples() {
        let g = art_game();
        let out = canonical_equilibrium_general(&g, &GeneralFilter::identity(&g)).unwrap();
        assert_eq!(out.kind, EquilibriumKind::BabblingSigmaR);
        assert_eq!(out.babbling_action, Some(Action::Zero));
        assert_eq!(out.utilities, Utilities::zero(1));

        let garbled = GeneralFilter::deterministic(["orig", "fake", "fake"]);
        let out = canonical_equilibrium_general(&g, &garbled).unwrap();
        assert_eq!(out.kind, EquilibriumKind::InformativeSigmaS);
        assert_eq!(
            (out.utilities.sender(), &out.utilities.receiver),
            (&r(1, 3), &r(1, 3))
        );
    }

    #[test]
    fn uninformative_filter_matches_babbling_value() {
        for g in [art_game(), g3_game()] {
            let out = canonical_equilibrium_general(&g, &GeneralFilter::uninformative(&g)).unwrap();
            let (_, babble) = evaluate_babbling(&g);
            assert_eq!(out.utilities.receiver, babble.receiver);
            // informative exactly when the receiver weakly likes the pooled report
            let report = if out.effective_filter.get(0).is_zero() {
                Action::One
            } else {
                Action::Zero
            };
            let likes = evaluate_constant(&g, report).receiver
                >= evaluate_constant(&g, report.other()).receiver;
            assert_eq!(out.is_informative(), likes);
        }
    }

    #[test]
    fn merge_examples() {
        let g = art_game();
        assert_eq!(
            merge_to_binary(&g, &GeneralFilter::identity(&g)).unwrap(),
            bits(&[0, 0, 1])
        );
        // already binary and sender-compatible: unchanged
        let x = bits(&[0, 1, 1]);
        assert_eq!(
            merge_to_binary(&g, &GeneralFilter::from_binary(&x)).unwrap(),
            x
        );
        assert_eq!(merge_binary(&g, &x), x);
        // both signals favour 0 for the sender
        let f = GeneralFilter::deterministic(["a", "b", "c"]);
        let g0 = Game::transmission(g.states().iter().map(|s| {
            (
                s.name.clone(),
                s.prior.clone(),
                crate::game::UtilityPair::ints(2, 0),
                s.receiver_utils.clone(),
            )
        }))
        .unwrap();
        assert_eq!(merge_to_binary(&g0, &f).unwrap(), bits(&[1, 1, 1]));
    }

    #[test]
    fn merge_fixes_swapped_labels() {
        let g = art_game();
        let swapped = bits(&[1, 0, 0]);
        assert_eq!(merge_binary(&g, &swapped), bits(&[0, 1, 1]));
        let out = canonical_equilibrium(&g, &swapped);
        assert!(out.is_informative());
        assert_eq!(out.utilities.receiver, r(1, 3));
    }

    #[test]
    fn nash_checker_examples() {
        let g = art_game();
        let garbled = GeneralFilter::deterministic(["orig", "fake", "fake"]);
        let prof = GeneralProfile::sigma_s(&g, &garbled).unwrap();
        let verdict = check_nash_general(&g, &garbled, &prof).unwrap();
        assert!(verdict.is_nash());
        if let NashVerdict::Equilibrium(w) = verdict {
            assert_eq!((w.l_min, w.l_max), (r(0, 1), r(1, 1)));
        }

        let id = GeneralFilter::identity(&g);
        let prof = GeneralProfile::report_sender_preference(&g, &id).unwrap();
        let verdict = check_nash_general(&g, &id, &prof).unwrap();
        assert_eq!(
            verdict,
            NashVerdict::NotEquilibrium(Deviation::Receiver {
                message: "1".into(),
                better_action: Action::Zero
            })
        );

        for f in [id, garbled] {
            let babble = GeneralProfile::babbling(&g, &f);
            assert!(check_nash_general(&g, &f, &babble).unwrap().is_nash());
        }
    }

    #[test]
    fn nash_checker_flags_sender_deviation() {
        let g = art_game();
        let id = GeneralFilter::identity(&g);
        // receiver obeys, but the sender reports the opposite of her preference on OG
        let mut prof = GeneralProfile::report_sender_preference(&g, &id).unwrap();
        prof.sender_strategy
            .insert("OG".into(), vec![("0".into(), Rational::one())]);
        let v = check_nash_general(&g, &id, &prof).unwrap();
        assert!(
            matches!(v, NashVerdict::NotEquilibrium(Deviation::Sender { ref signal, .. }) if signal == "OG")
        );
    }

    #[test]
    fn nash_checker_profile_errors() {
        let g = art_game();
        let garbled = GeneralFilter::deterministic(["orig", "fake", "fake"]);
        let mut prof = GeneralProfile::sigma_s(&g, &garbled).unwrap();
        prof.sender_strategy
            .insert("ghost".into(), vec![("0".into(), Rational::one())]);
        assert_eq!(
            check_nash_general(&g, &garbled, &prof),
            Err(Error::ZeroProbabilitySignal("ghost".into()))
        );
        let mut prof = GeneralProfile::sigma_s(&g, &garbled).unwrap();
        prof.sender_strategy.remove("orig");
        assert!(matches!(
            check_nash_general(&g, &garbled, &prof),
            Err(Error::InvalidProfile(_))
        ));
    }

    proptest! {
        #[test]
        fn informative_dominates_babbling(game in small_game(1, 5), xs in prop::collection::vec(0i64..=4, 5)) {
            let x = BinaryFilter::new((0..game.num_states()).map(|i| r(xs[i], 4)).collect()).unwrap();
            let out = canonical_equilibrium(&game, &x);
            let (_, babble) = evaluate_babbling(&game);
            prop_assert!(out.utilities.receiver >= babble.receiver);
            // sender side of the played filter is always compatible
            prop_assert!(sender_ic(&game, &out.effective_filter).holds);
        }

        #[test]
        fn receiver_preferred_indicator_is_receiver_ic(game in small_game(1, 5)) {
            let x = BinaryFilter::new(game.states().iter().map(|s| {
                if s.receiver_utils.delta().is_negative() { Rational::zero() } else { Rational::one() }
            }).collect()).unwrap();
            prop_assert!(receiver_ic(&game, &x).holds);
        }

        #[test]
        fn binary_merge_agrees_with_general_merge(game in small_game(1, 5), xs in prop::collection::vec(0i64..=4, 5)) {
            let x = BinaryFilter::new((0..game.num_states()).map(|i| r(xs[i], 4)).collect()).unwrap();
            let via_general = merge_to_binary(&game, &GeneralFilter::from_binary(&x)).unwrap();
            prop_assert_eq!(merge_binary(&game, &x), via_general);
        }

        #[test]
        fn babbling_ignores_filter(game in small_game(1, 4), xs in prop::collection::vec(0i64..=2, 4)) {
            let x = BinaryFilter::new((0..game.num_states()).map(|i| r(xs[i], 2)).collect()).unwrap();
            let out = canonical_equilibrium(&game, &x);
            if !out.is_informative() {
                let a = out.babbling_action.unwrap();
                prop_assert_eq!(out.utilities, evaluate_constant(&game, a));
            }
        }
    }
}
