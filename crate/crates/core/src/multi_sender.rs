//! Several senders who all see the same filtered signal.
//!
//! With two senders the receiver-optimal outcome is the best of six candidate
//! profiles. Two of them ("both must report 0" and "both must report 1") need a
//! filter found by a two-row linear program; two follow a single sender and
//! ignore the other; two ignore everyone. With three or more senders truthful
//! reporting plus majority vote gives the receiver her full-information payoff.

use serde::Serialize;

use crate::equilibrium::receiver_ic;
use crate::error::{Error, Result};
use crate::eval::{evaluate_babbling, evaluate_constant, evaluate_sigma_s, Utilities};
use crate::filter::BinaryFilter;
use crate::filter_opt::receiver_optimal_filter;
use crate::game::{Action, Game};
use crate::lp::{lp_solve, LPInstance};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Profile {
    /// Receiver plays 0 only if both senders report 0.
    Sigma00,
    /// Receiver plays 1 only if both senders report 1.
    Sigma11,
    /// Receiver follows sender 1.
    SigmaS1,
    /// Receiver follows sender 2.
    SigmaS2,
    Const0,
    Const1,
}

impl Profile {
    /// Candidate order, which is also the tie-break order.
    pub const ALL: [Profile; 6] = [
        Profile::Sigma00,
        Profile::Sigma11,
        Profile::SigmaS1,
        Profile::SigmaS2,
        Profile::Const0,
        Profile::Const1,
    ];
}

/// The two profiles solved through the linear program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpTarget {
    Sigma00,
    Sigma11,
}

impl LpTarget {
    pub fn profile(self) -> Profile {
        match self {
            LpTarget::Sigma00 => Profile::Sigma00,
            LpTarget::Sigma11 => Profile::Sigma11,
        }
    }
}

/// Per-state utility differences `u(·,0) - u(·,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoSenderDeltas {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

fn require_senders(game: &Game, ok: bool, expected: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::WrongSenderCount {
            expected: expected.to_string(),
            found: game.num_senders(),
        })
    }
}

pub fn two_sender_deltas(game: &Game) -> Result<TwoSenderDeltas> {
    require_senders(game, game.num_senders() == 2, "exactly 2")?;
    let col = |f: &dyn Fn(&crate::game::StateRecord) -> Rational| {
        game.states().iter().map(f).collect::<Vec<_>>()
    };
    Ok(TwoSenderDeltas {
        a: col(&|s| s.sender_utils[0].delta()),
        b: col(&|s| s.sender_utils[1].delta()),
        c: col(&|s| s.receiver_utils.delta()),
    })
}

/// Prior-weighted LP for `target`. For `Sigma00` the variables are the
/// probabilities of signal 0; for `Sigma11` those of signal 1 with all deltas negated.
pub fn build_lp(game: &Game, target: LpTarget) -> Result<LPInstance> {
    let d = two_sender_deltas(game)?;
    let sign = match target {
        LpTarget::Sigma00 => Rational::one(),
        LpTarget::Sigma11 => -Rational::one(),
    };
    let weigh = |v: &[Rational]| -> Vec<Rational> {
        game.states()
            .iter()
            .zip(v)
            .map(|(s, x)| &s.prior * x * &sign)
            .collect()
    };
    Ok(LPInstance {
        objective: weigh(&d.c),
        rows: vec![weigh(&d.a), weigh(&d.b)],
    })
}

/// Signal-0 filter played by `target` given the LP variables.
fn lp_filter(target: LpTarget, x: &[Rational]) -> BinaryFilter {
    let xs = match target {
        LpTarget::Sigma00 => x.to_vec(),
        LpTarget::Sigma11 => x.iter().map(Rational::complement).collect(),
    };
    BinaryFilter::new_unchecked(xs)
}

/// Whether the receiver is willing to play the target profile's action rule
/// on the filter given by the LP variables `x`.
pub fn receiver_posthoc_ic(game: &Game, target: LpTarget, x: &[Rational]) -> bool {
    receiver_ic(game, &lp_filter(target, x)).holds
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateOutcome {
    pub profile: Profile,
    /// Signal-0 probabilities; absent when infeasible.
    pub filter: Option<BinaryFilter>,
    pub receiver_utility: Rational,
    pub utilities: Utilities,
    pub feasible: bool,
}

impl CandidateOutcome {
    fn new(profile: Profile, filter: BinaryFilter, utilities: Utilities, feasible: bool) -> Self {
        CandidateOutcome {
            profile,
            filter: feasible.then_some(filter),
            receiver_utility: utilities.receiver.clone(),
            utilities,
            feasible,
        }
    }
}

fn lp_candidate(game: &Game, target: LpTarget) -> Result<CandidateOutcome> {
    let sol = lp_solve(&build_lp(game, target)?);
    debug_assert!(
        sol.x
            .iter()
            .filter(|v| v.is_positive() && **v < Rational::one())
            .count()
            <= 2
    );
    let filter = lp_filter(target, &sol.x);
    let feasible = receiver_posthoc_ic(game, target, &sol.x);
    let utilities = evaluate_sigma_s(game, &filter);
    Ok(CandidateOutcome::new(
        target.profile(),
        filter,
        utilities,
        feasible,
    ))
}

fn follow_candidate(game: &Game, sender: usize) -> Result<CandidateOutcome> {
    let single = game.project_sender(sender)?;
    let res = receiver_optimal_filter(&single);
    let filter = res.outcome.effective_filter.clone();
    let utilities = evaluate_sigma_s(game, &filter);
    let profile = if sender == 0 {
        Profile::SigmaS1
    } else {
        Profile::SigmaS2
    };
    Ok(CandidateOutcome::new(
        profile,
        filter,
        utilities,
        res.outcome.is_informative(),
    ))
}

fn constant_candidate(game: &Game, action: Action) -> CandidateOutcome {
    let (best, best_u) = evaluate_babbling(game);
    let utilities = evaluate_constant(game, action);
    let feasible = action == best || utilities.receiver == best_u.receiver;
    let x = match action {
        Action::Zero => Rational::one(),
        Action::One => Rational::zero(),
    };
    let filter = BinaryFilter::new_unchecked(vec![x; game.num_states()]);
    let profile = match action {
        Action::Zero => Profile::Const0,
        Action::One => Profile::Const1,
    };
    CandidateOutcome::new(profile, filter, utilities, feasible)
}

pub fn candidate(game: &Game, profile: Profile) -> Result<CandidateOutcome> {
    require_senders(game, game.num_senders() == 2, "exactly 2")?;
    match profile {
        Profile::Sigma00 => lp_candidate(game, LpTarget::Sigma00),
        Profile::Sigma11 => lp_candidate(game, LpTarget::Sigma11),
        Profile::SigmaS1 => follow_candidate(game, 0),
        Profile::SigmaS2 => follow_candidate(game, 1),
        Profile::Const0 => Ok(constant_candidate(game, Action::Zero)),
        Profile::Const1 => Ok(constant_candidate(game, Action::One)),
    }
}

/// Receiver-optimal outcome over the six candidates, plus every candidate in order.
pub fn two_sender_optimal(game: &Game) -> Result<(CandidateOutcome, Vec<CandidateOutcome>)> {
    let all = Profile::ALL
        .iter()
        .map(|&p| candidate(game, p))
        .collect::<Result<Vec<_>>>()?;
    let best = best_feasible(&all)
        .expect("the receiver's uninformed best action is always feasible")
        .clone();
    Ok((best, all))
}

/// First feasible candidate with maximal receiver utility.
pub fn best_feasible(all: &[CandidateOutcome]) -> Option<&CandidateOutcome> {
    let mut best: Option<&CandidateOutcome> = None;
    for c in all.iter().filter(|c| c.feasible) {
        if best.is_none_or(|b| c.receiver_utility > b.receiver_utility) {
            best = Some(c);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MajorityOutcome {
    /// The receiver's full-information best action per state, ties to 0.
    pub actions: Vec<Action>,
    pub utilities: Utilities,
}

/// Truthful reporting with majority vote; needs at least three senders.
pub fn majority_outcome(game: &Game) -> Result<MajorityOutcome> {
    require_senders(game, game.num_senders() >= 3, "at least 3")?;
    let actions: Vec<Action> = game
        .states()
        .iter()
        .map(|s| s.receiver_utils.best())
        .collect();
    let mut utilities = Utilities::zero(game.num_senders());
    for (s, &a) in game.states().iter().zip(&actions) {
        for (acc, u) in utilities.senders.iter_mut().zip(&s.sender_utils) {
            *acc += &s.prior * u.get(a);
        }
        utilities.receiver += &s.prior * s.receiver_utils.get(a);
    }
    Ok(MajorityOutcome { actions, utilities })
}

/// `Σ p·max_a u_r`, the most the receiver can get in any outcome.
pub fn full_information_value(game: &Game) -> Rational {
    game.states()
        .iter()
        .map(|s| &s.prior * s.receiver_utils.max())
        .sum()
}
