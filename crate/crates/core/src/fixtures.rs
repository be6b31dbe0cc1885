//! Small reference games with hand-checked optima, shared by tests, docs and
//! the CLI's `example` files.

use crate::game::{Game, GameKind, StateRecord, UtilityPair};
use crate::rational::Rational;

fn third() -> Rational {
    Rational::new(1, 3)
}

/// Art dealer: action 1 = "sell/buy", action 0 = no sale (0 for both).
/// States OG (original), IF (indistinguishable fake), DF (distinguishable fake),
/// uniform prior.
pub fn art_game() -> Game {
    Game::transmission([
        (
            "OG",
            third(),
            UtilityPair::ints(0, 1),
            UtilityPair::ints(0, 1),
        ),
        (
            "IF",
            third(),
            UtilityPair::ints(0, 1),
            UtilityPair::ints(0, -5),
        ),
        (
            "DF",
            third(),
            UtilityPair::ints(0, -5),
            UtilityPair::ints(0, -5),
        ),
    ])
    .expect("art game is valid")
}

/// Art dealer with `senders` identical copies of the seller.
pub fn art_game_with_senders(senders: usize) -> Game {
    let states = art_game()
        .states()
        .iter()
        .map(|s| StateRecord {
            sender_utils: vec![s.sender_utils[0].clone(); senders],
            ..s.clone()
        })
        .collect();
    Game::new(GameKind::Aggregation, states).expect("valid")
}

/// Three-state game whose receiver-optimal filter has an interior pivot.
pub fn g3_game() -> Game {
    Game::transmission([
        (
            "w1",
            third(),
            UtilityPair::ints(1, 0),
            UtilityPair::ints(1, 0),
        ),
        (
            "w2",
            third(),
            UtilityPair::ints(0, 1),
            UtilityPair::ints(0, 1),
        ),
        (
            "w3",
            third(),
            UtilityPair::ints(0, 3),
            UtilityPair::ints(1, 0),
        ),
    ])
    .expect("g3 is valid")
}

/// Two-sender game whose best filter comes from the "both report 0" LP.
pub fn l2_game() -> Game {
    let half = Rational::new(1, 2);
    let states = vec![
        StateRecord {
            name: "w1".into(),
            prior: half.clone(),
            sender_utils: vec![UtilityPair::ints(0, 1), UtilityPair::ints(2, 0)],
            receiver_utils: UtilityPair::ints(1, 0),
        },
        StateRecord {
            name: "w2".into(),
            prior: half,
            sender_utils: vec![UtilityPair::ints(2, 0), UtilityPair::ints(0, 1)],
            receiver_utils: UtilityPair::ints(0, 1),
        },
    ];
    Game::new(GameKind::Aggregation, states).expect("l2 is valid")
}
