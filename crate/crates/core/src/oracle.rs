//! Brute-force checks for the optimizers: grid search over binary filters,
//! exhaustive deviation search and a reproducible random game generator.
//!
//! Grid enumeration runs on a rayon pool whose size is read once from
//! `TALKFILTER_THREADS` (default: all cores). Ties between grid points go to the
//! lowest grid index so results do not depend on the schedule.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::equilibrium::{canonical_equilibrium, receiver_ic, sender_ic, GeneralProfile};
use crate::error::{Error, Result};
use crate::filter::{BinaryFilter, GeneralFilter};
use crate::filter_opt::Objective;
use crate::game::{Action, Game, GameKind, StateRecord, UtilityPair};
use crate::multi_sender::{CandidateOutcome, Profile};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    /// Grid `{0, 1/R, ..., 1}` per state.
    pub resolution: u32,
    pub max_states: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            resolution: 8,
            max_states: 8,
        }
    }
}

impl GridSpec {
    pub fn new(resolution: u32) -> GridSpec {
        GridSpec {
            resolution,
            ..GridSpec::default()
        }
    }

    /// Number of grid points for `k` states, or `GridTooLarge`.
    pub fn size(&self, k: usize) -> Result<u64> {
        if self.resolution == 0 {
            return Err(Error::GridTooLarge("resolution must be at least 1".into()));
        }
        if k > self.max_states {
            return Err(Error::GridTooLarge(format!(
                "{k} states exceeds the cap of {}",
                self.max_states
            )));
        }
        (self.resolution as u64 + 1)
            .checked_pow(k as u32)
            .ok_or_else(|| Error::GridTooLarge(format!("({}+1)^{k} overflows", self.resolution)))
    }

    /// The filter at grid index `idx` (base R+1 digits, state 0 least significant).
    pub fn point(&self, k: usize, mut idx: u64) -> BinaryFilter {
        let base = self.resolution as u64 + 1;
        let xs = (0..k)
            .map(|_| {
                let d = idx % base;
                idx /= base;
                Rational::new(d as i64, self.resolution as i64)
            })
            .collect();
        BinaryFilter::new_unchecked(xs)
    }
}

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var("TALKFILTER_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool")
    })
}

/// Threads used by grid searches.
pub fn oracle_threads() -> usize {
    pool().current_num_threads()
}

/// Index and score of the best point; `None` scores are skipped.
fn argmax_grid<F>(size: u64, score: F) -> Option<(u64, Rational)>
where
    F: Fn(u64) -> Option<Rational> + Sync,
{
    let better = |a: Option<(u64, Rational)>, b: Option<(u64, Rational)>| match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                Some(b)
            } else {
                Some(a)
            }
        }
    };
    pool().install(|| {
        (0..size)
            .into_par_iter()
            .map(|i| score(i).map(|s| (i, s)))
            .reduce(|| None, better)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridResult {
    pub filter: BinaryFilter,
    pub utility: Rational,
    pub points: u64,
}

/// Best grid filter for the objective player, every point scored by its
/// canonical equilibrium.
pub fn grid_search(game: &Game, spec: &GridSpec, objective: Objective) -> Result<GridResult> {
    let k = game.num_states();
    let size = spec.size(k)?;
    let player = objective.player();
    let (idx, utility) = argmax_grid(size, |i| {
        Some(
            canonical_equilibrium(game, &spec.point(k, i))
                .utility(player)
                .clone(),
        )
    })
    .expect("grid is nonempty");
    Ok(GridResult {
        filter: spec.point(k, idx),
        utility,
        points: size,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub utility: Rational,
    pub grid_best: Rational,
    pub grid_filter: BinaryFilter,
    /// The filter as given satisfies both incentive constraints.
    pub filter_ic: bool,
    pub informative: bool,
}

/// Passes when the filter's canonical equilibrium is a genuine equilibrium
/// (the informative profile on a filter that is IC for both players, or
/// babbling) and its value for the objective player is at least the grid best.
pub fn verify_filter_optimality(
    game: &Game,
    filter: &BinaryFilter,
    spec: &GridSpec,
    objective: Objective,
) -> Result<VerifyReport> {
    filter.check_domain(game)?;
    let grid = grid_search(game, spec, objective)?;
    let outcome = canonical_equilibrium(game, filter);
    let filter_ic = sender_ic(game, filter).holds && receiver_ic(game, filter).holds;
    let informative = outcome.is_informative();
    let utility = outcome.utility(objective.player()).clone();
    Ok(VerifyReport {
        passed: utility >= grid.utility && (filter_ic || !informative),
        utility,
        grid_best: grid.utility,
        grid_filter: grid.filter,
        filter_ic,
        informative,
    })
}

// ---------------------------------------------------------------------------
// Two senders

/// Two-sender profile played on a binary filter. Both senders see the signal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSenderProfile {
    /// `reports[sender][signal]`
    pub reports: [[Action; 2]; 2],
    /// `rule[m1][m2]`
    pub rule: [[Action; 2]; 2],
}

impl TwoSenderProfile {
    pub fn of(profile: Profile) -> TwoSenderProfile {
        use Action::{One, Zero};
        let truthful = [Zero, One];
        let silent = [Zero, Zero];
        let (reports, rule) = match profile {
            Profile::Sigma00 => ([truthful, truthful], [[Zero, One], [One, One]]),
            Profile::Sigma11 => ([truthful, truthful], [[Zero, Zero], [Zero, One]]),
            Profile::SigmaS1 => ([truthful, silent], [[Zero, Zero], [One, One]]),
            Profile::SigmaS2 => ([silent, truthful], [[Zero, One], [Zero, One]]),
            Profile::Const0 => ([silent, silent], [[Zero; 2]; 2]),
            Profile::Const1 => ([silent, silent], [[One; 2]; 2]),
        };
        TwoSenderProfile { reports, rule }
    }

    fn action(&self, m1: Action, m2: Action) -> Action {
        self.rule[m1.index()][m2.index()]
    }
}

fn signal_mass(x: &Rational, signal: usize) -> Rational {
    if signal == 0 {
        x.clone()
    } else {
        x.complement()
    }
}

/// Exhaustive unilateral deviation check of a two-sender profile: every
/// sender's alternative report on every emitted signal, and every receiver
/// action on every message pair sent with positive probability.
pub fn two_sender_is_nash(game: &Game, filter: &BinaryFilter, profile: &TwoSenderProfile) -> bool {
    debug_assert_eq!(game.num_senders(), 2);
    let states = game.states();
    for signal in 0..2 {
        let w: Vec<Rational> = states
            .iter()
            .zip(filter.values())
            .map(|(s, x)| &s.prior * signal_mass(x, signal))
            .collect();
        if w.iter().all(Rational::is_zero) {
            continue;
        }
        let m = [profile.reports[0][signal], profile.reports[1][signal]];
        let value = |sender: usize, a: Action| -> Rational {
            states
                .iter()
                .zip(&w)
                .map(|(s, wi)| wi * s.sender_utils[sender].get(a))
                .sum()
        };
        for sender in 0..2 {
            let now = value(sender, profile.action(m[0], m[1]));
            let mut dev = m;
            dev[sender] = m[sender].other();
            if value(sender, profile.action(dev[0], dev[1])) > now {
                return false;
            }
        }
        let a = profile.action(m[0], m[1]);
        let r = |a: Action| -> Rational {
            states
                .iter()
                .zip(&w)
                .map(|(s, wi)| wi * s.receiver_utils.get(a))
                .sum()
        };
        // signals sharing a message pair are pooled by the receiver
        let other = 1 - signal;
        let pooled = [profile.reports[0][other], profile.reports[1][other]] == m;
        let (mut u_now, mut u_dev) = (r(a), r(a.other()));
        if pooled {
            for (s, x) in states.iter().zip(filter.values()) {
                let wi = &s.prior * signal_mass(x, other);
                u_now += &wi * s.receiver_utils.get(a);
                u_dev += &wi * s.receiver_utils.get(a.other());
            }
        }
        if u_dev > u_now {
            return false;
        }
    }
    true
}

/// Checks a candidate from the six-profile search; infeasible candidates pass vacuously.
pub fn candidate_is_nash(game: &Game, candidate: &CandidateOutcome) -> bool {
    match &candidate.filter {
        Some(f) => two_sender_is_nash(game, f, &TwoSenderProfile::of(candidate.profile)),
        None => true,
    }
}

/// Receiver value of a grid filter for a profile, if the profile is an
/// equilibrium there.
fn two_sender_score(game: &Game, filter: &BinaryFilter, profile: Profile) -> Option<Rational> {
    let prof = TwoSenderProfile::of(profile);
    if !two_sender_is_nash(game, filter, &prof) {
        return None;
    }
    let r = game
        .states()
        .iter()
        .zip(filter.values())
        .map(|(s, x)| {
            let u = &s.receiver_utils;
            let a0 = prof.action(prof.reports[0][0], prof.reports[1][0]);
            let a1 = prof.action(prof.reports[0][1], prof.reports[1][1]);
            &s.prior * (x * u.get(a0) + x.complement() * u.get(a1))
        })
        .sum();
    Some(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoSenderGridResult {
    pub profile: Profile,
    pub filter: BinaryFilter,
    pub utility: Rational,
    pub points: u64,
}

/// Best receiver value over grid filters and the given profiles, each pair
/// kept only when the profile is an equilibrium on that filter. `None` when no
/// pair qualifies.
pub fn two_sender_grid_search(
    game: &Game,
    spec: &GridSpec,
    profiles: &[Profile],
) -> Result<Option<TwoSenderGridResult>> {
    if game.num_senders() != 2 {
        return Err(Error::WrongSenderCount {
            expected: "exactly 2".into(),
            found: game.num_senders(),
        });
    }
    if profiles.is_empty() {
        return Err(Error::InvalidProfile("no profiles to search".into()));
    }
    let k = game.num_states();
    let size = spec.size(k)?;
    let n = profiles.len() as u64;
    let found = argmax_grid(size * n, |i| {
        two_sender_score(game, &spec.point(k, i / n), profiles[(i % n) as usize])
    });
    Ok(found.map(|(idx, utility)| TwoSenderGridResult {
        profile: profiles[(idx % n) as usize],
        filter: spec.point(k, idx / n),
        utility,
        points: size,
    }))
}

// ---------------------------------------------------------------------------
// Single-sender general profiles

/// Pure-deviation Nash check of a general profile against sender 0: every
/// message on every emitted signal, every action on every sent message.
pub fn exhaustive_is_nash(
    game: &Game,
    filter: &GeneralFilter,
    profile: &GeneralProfile,
) -> Result<bool> {
    filter.check_domain(game)?;
    let rho = &profile.receiver_strategy;
    let states = game.states();
    let mixed = |u: &UtilityPair, q0: &Rational| q0 * &u.action0 + q0.complement() * &u.action1;

    for sig in filter.signals() {
        let dist = profile
            .sender_strategy
            .get(&sig)
            .ok_or_else(|| Error::InvalidProfile(format!("missing signal {sig:?}")))?;
        let w: Vec<Rational> = (0..states.len())
            .map(|i| &states[i].prior * filter.prob(i, &sig))
            .collect();
        let value = |m: &str| -> Rational {
            states
                .iter()
                .zip(&w)
                .map(|(s, wi)| wi * mixed(&s.sender_utils[0], &rho[m]))
                .sum()
        };
        let now: Rational = dist.iter().map(|(m, q)| q * value(m)).sum();
        if rho.keys().any(|m| value(m) > now) {
            return Ok(false);
        }
    }

    let mut mass: BTreeMap<&str, Vec<Rational>> = BTreeMap::new();
    for (i, s) in states.iter().enumerate() {
        for (sig, qx) in filter.row(i) {
            for (m, qm) in profile.sender_strategy.get(sig).into_iter().flatten() {
                let v = mass
                    .entry(m.as_str())
                    .or_insert_with(|| vec![Rational::zero(); states.len()]);
                v[i] += &s.prior * qx * qm;
            }
        }
    }
    for (m, w) in &mass {
        if w.iter().all(Rational::is_zero) {
            continue;
        }
        let payoff = |q0: &Rational| -> Rational {
            states
                .iter()
                .zip(w)
                .map(|(s, wi)| wi * mixed(&s.receiver_utils, q0))
                .sum()
        };
        let now = payoff(&rho[*m]);
        if payoff(&Rational::one()) > now || payoff(&Rational::zero()) > now {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Random games

/// SplitMix64. Each call advances the state by `0x9E3779B97F4A7C15` and
/// returns the state mixed through
///
/// ```text
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// z ^ (z >> 31)
/// ```
///
/// with wrapping multiplication.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// `next % (hi - lo + 1) + lo`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PriorKind {
    Uniform,
    /// Integer weights in 1..=10, normalized.
    RandomRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RandomGameSpec {
    pub seed: u64,
    pub num_states: usize,
    pub num_senders: usize,
    /// Utilities are integers in `[-U, U]`.
    pub utility_range: i64,
    pub prior: PriorKind,
}

impl RandomGameSpec {
    pub fn new(seed: u64, num_states: usize, num_senders: usize) -> RandomGameSpec {
        RandomGameSpec {
            seed,
            num_states,
            num_senders,
            utility_range: 5,
            prior: PriorKind::Uniform,
        }
    }
}

/// Deterministic game from `spec`. Per state, in order: the prior weight (random
/// priors only), then `(u0, u1)` for each sender, then the receiver's `(u0, u1)`.
/// States are named `w0`, `w1`, ...
pub fn random_game(spec: &RandomGameSpec) -> Game {
    assert!(spec.num_states > 0 && spec.num_senders > 0 && spec.utility_range >= 0);
    let mut rng = SplitMix64::new(spec.seed);
    let u = spec.utility_range;
    let mut rows = Vec::with_capacity(spec.num_states);
    for i in 0..spec.num_states {
        let weight = match spec.prior {
            PriorKind::Uniform => 1,
            PriorKind::RandomRational => rng.range(1, 10),
        };
        let mut draw = || UtilityPair::ints(rng.range(-u, u), rng.range(-u, u));
        let senders: Vec<UtilityPair> = (0..spec.num_senders).map(|_| draw()).collect();
        let receiver = draw();
        rows.push((format!("w{i}"), weight, senders, receiver));
    }
    let total: i64 = rows.iter().map(|r| r.1).sum();
    let states = rows
        .into_iter()
        .map(|(name, w, sender_utils, receiver_utils)| StateRecord {
            name,
            prior: Rational::new(w, total),
            sender_utils,
            receiver_utils,
        })
        .collect();
    let kind = if spec.num_senders == 1 {
        GameKind::Transmission
    } else {
        GameKind::Aggregation
    };
    Game::new(kind, states).expect("generated games are valid")
}
