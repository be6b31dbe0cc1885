//! Bayes posteriors and expected utilities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filter::{BinaryFilter, GeneralFilter};
use crate::game::{Action, Game, Player};
use crate::rational::Rational;

/// Expected utility of every player.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Utilities {
    pub senders: Vec<Rational>,
    pub receiver: Rational,
}

impl Utilities {
    pub fn zero(num_senders: usize) -> Utilities {
        Utilities {
            senders: vec![Rational::zero(); num_senders],
            receiver: Rational::zero(),
        }
    }

    pub fn get(&self, player: Player) -> &Rational {
        match player {
            Player::Sender(i) => &self.senders[i],
            Player::Receiver => &self.receiver,
        }
    }

    /// Utility of the first (or only) sender.
    pub fn sender(&self) -> &Rational {
        &self.senders[0]
    }
}

/// Unnormalized joint mass `p(ω)·X(ω)(signal)` per state.
fn joint_mass(game: &Game, filter: &GeneralFilter, signal: &str) -> Result<Vec<Rational>> {
    filter.check_domain(game)?;
    Ok(game
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| &s.prior * filter.prob(i, signal))
        .collect())
}

/// `Pr[ω | signal]` for every state, in game order.
pub fn posterior(game: &Game, filter: &GeneralFilter, signal: &str) -> Result<Vec<Rational>> {
    let joint = joint_mass(game, filter, signal)?;
    let total: Rational = joint.iter().sum();
    if !total.is_positive() {
        return Err(Error::ZeroProbabilitySignal(signal.to_string()));
    }
    Ok(joint.into_iter().map(|m| m / &total).collect())
}

/// Posterior expected utility `Σ_ω Pr[ω | signal]·u(player, ω, action)`.
pub fn signal_utility(
    game: &Game,
    filter: &GeneralFilter,
    signal: &str,
    player: Player,
    action: Action,
) -> Result<Rational> {
    if let Player::Sender(i) = player {
        game.check_sender(i)?;
    }
    let post = posterior(game, filter, signal)?;
    Ok(game
        .states()
        .iter()
        .zip(&post)
        .map(|(s, q)| q * s.utils(player).get(action))
        .sum())
}

/// Utilities of the profile where the receiver plays 0 on signal 0 and 1 on signal 1.
/// Pure evaluation; incentive compatibility is not checked.
pub fn evaluate_sigma_s(game: &Game, filter: &BinaryFilter) -> Utilities {
    debug_assert_eq!(filter.len(), game.num_states());
    let mut out = Utilities::zero(game.num_senders());
    for (s, x) in game.states().iter().zip(filter.values()) {
        let w0 = &s.prior * x;
        let w1 = &s.prior - &w0;
        for (acc, u) in out.senders.iter_mut().zip(&s.sender_utils) {
            *acc += &w0 * &u.action0 + &w1 * &u.action1;
        }
        out.receiver += &w0 * &s.receiver_utils.action0 + &w1 * &s.receiver_utils.action1;
    }
    out
}

/// Utilities when the receiver plays `action` in every state.
pub fn evaluate_constant(game: &Game, action: Action) -> Utilities {
    let mut out = Utilities::zero(game.num_senders());
    for s in game.states() {
        for (acc, u) in out.senders.iter_mut().zip(&s.sender_utils) {
            *acc += &s.prior * u.get(action);
        }
        out.receiver += &s.prior * s.receiver_utils.get(action);
    }
    out
}

/// The receiver's best uninformed action (ties to 0) and the resulting utilities.
pub fn evaluate_babbling(game: &Game) -> (Action, Utilities) {
    let u0 = evaluate_constant(game, Action::Zero);
    let u1 = evaluate_constant(game, Action::One);
    if u0.receiver >= u1.receiver {
        (Action::Zero, u0)
    } else {
        (Action::One, u1)
    }
}
