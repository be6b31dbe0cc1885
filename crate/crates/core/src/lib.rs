//! Optimal information filters for cheap-talk games with two actions.
//!
//! A filter garbles what the sender learns about the state before she talks to
//! the receiver. This crate computes receiver- and sender-optimal filters for
//! one sender, receiver-optimal filters for two senders through a small exact
//! linear program, and the full-information majority outcome for three or more
//! senders. Every quantity is an exact [`Rational`].
//!
//! # Modules
//!
//! - `game`, `filter`, `eval` - data model, validation, posteriors, utilities
//! - `equilibrium` - incentive-compatibility checks and equilibrium selection
//! - `filter_opt` - the sort-and-pivot optimizers
//! - `lp`, `multi_sender` - exact simplex and the multi-sender solvers
//! - `oracle` - brute-force grid search and deviation checks

pub mod equilibrium;
pub mod error;
pub mod eval;
pub mod filter;
pub mod filter_opt;
pub mod fixtures;
pub mod game;
pub mod lp;
pub mod multi_sender;
pub mod oracle;
pub mod rational;

#[cfg(test)]
mod test_support;

pub use equilibrium::{
    canonical_equilibrium, canonical_equilibrium_general, check_nash_general, merge_to_binary,
    receiver_ic, sender_ic, EquilibriumKind, EquilibriumOutcome, GeneralProfile, ICReport,
};
pub use error::{Error, Result};
pub use eval::{
    evaluate_babbling, evaluate_constant, evaluate_sigma_s, posterior, signal_utility, Utilities,
};
pub use filter::{BinaryFilter, FilterFile, GeneralFilter, GeneralFilterFile};
pub use filter_opt::{
    optimal_filter, receiver_optimal_filter, sender_optimal_filter, Objective, OptimizerResult,
};
pub use game::{
    classify_states, state_deltas, validate_game, Action, Game, GameKind, Player, RawGame, Region,
    StateClassification, StateDelta, StateRecord, UtilityPair,
};
pub use lp::{lp_solve, LPInstance, LPSolution};
pub use multi_sender::{
    majority_outcome, two_sender_optimal, CandidateOutcome, MajorityOutcome, Profile,
};
pub use rational::Rational;
