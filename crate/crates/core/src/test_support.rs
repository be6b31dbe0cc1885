//! Proptest strategies shared by unit tests.

use proptest::prelude::*;

use crate::game::{Game, GameKind, StateRecord, UtilityPair};
use crate::rational::Rational;

fn pair() -> impl Strategy<Value = UtilityPair> {
    (-5i64..=5, -5i64..=5).prop_map(|(a, b)| UtilityPair::ints(a, b))
}

/// Games with `senders` senders, 1..=`max_states` states, integer utilities in
/// [-5, 5] and random positive integer prior weights.
pub fn small_game(senders: usize, max_states: usize) -> impl Strategy<Value = Game> {
    (1..=max_states)
        .prop_flat_map(move |k| {
            prop::collection::vec(
                (1i64..=4, prop::collection::vec(pair(), senders), pair()),
                k,
            )
        })
        .prop_map(move |rows| {
            let total: i64 = rows.iter().map(|r| r.0).sum();
            let states = rows
                .into_iter()
                .enumerate()
                .map(|(i, (w, su, ru))| StateRecord {
                    name: format!("s{i}"),
                    prior: Rational::new(w, total),
                    sender_utils: su,
                    receiver_utils: ru,
                })
                .collect();
            let kind = if senders == 1 {
                GameKind::Transmission
            } else {
                GameKind::Aggregation
            };
            Game::new(kind, states).expect("generated game is valid")
        })
}
