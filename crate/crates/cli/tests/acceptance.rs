//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Tolerances are exact rational equality throughout; the only inexact checks
//! are the wall-clock budgets, which are listed next to each criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use talkfilter::fixtures::{art_game, g3_game, l2_game};
use talkfilter::multi_sender::{build_lp, candidate, LpTarget};
use talkfilter::oracle::{
    grid_search, random_game, two_sender_grid_search, verify_filter_optimality, GridSpec,
    PriorKind, RandomGameSpec, SplitMix64,
};
use talkfilter::{
    canonical_equilibrium_general, evaluate_babbling, evaluate_sigma_s, lp_solve, majority_outcome,
    merge_to_binary, receiver_ic, receiver_optimal_filter, sender_ic, sender_optimal_filter,
    two_sender_optimal, Action, BinaryFilter, EquilibriumKind, Game, GeneralFilter, GeneralProfile,
    Objective, Profile, Rational, Utilities,
};

type Outcome = Result<String, String>;

const ORACLE_GAMES: u64 = 200;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || {
        format!("took {elapsed:.2?}, budget {budget:.0?}")
    })
}

fn show(xs: &[Rational]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Seeded single-sender corpus: k cycles through 2..=5, priors alternate
/// between uniform and random integer weights.
fn corpus() -> Vec<Game> {
    (0..ORACLE_GAMES)
        .map(|seed| {
            let mut spec = RandomGameSpec::new(seed, 2 + (seed % 4) as usize, 1);
            if seed % 2 == 1 {
                spec.prior = PriorKind::RandomRational;
            }
            random_game(&spec)
        })
        .collect()
}

fn c1_art_dealer() -> Outcome {
    let t = Instant::now();
    let game = art_game();
    let res = receiver_optimal_filter(&game);
    let expected = BinaryFilter::from_ints(&[0, 1, 1]).unwrap();
    let eff = &res.outcome.effective_filter;
    ensure(eff == &expected, || {
        format!("effective filter {}", show(eff.values()))
    })?;
    let u = &res.outcome.utilities;
    ensure(u.senders[0] == r(1, 3) && u.receiver == r(1, 3), || {
        format!("utilities ({}, {})", u.senders[0], u.receiver)
    })?;
    within(t.elapsed(), Duration::from_secs(1))?;

    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/art.json");
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_talkfilter"))
        .args(["--json", "optimize", "--objective", "receiver"])
        .arg(&data)
        .output()
        .map_err(|e| e.to_string())?;
    let cli_time = t.elapsed();
    ensure(out.status.success(), || {
        format!("cli exit {:?}", out.status.code())
    })?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let f = &v["result"]["filter"];
    let u = &v["result"]["outcome"]["utilities"];
    ensure(f["OG"] == "0" && f["IF"] == "1" && f["DF"] == "1", || {
        format!("cli filter {f}")
    })?;
    ensure(u["senders"][0] == "1/3" && u["receiver"] == "1/3", || {
        format!("cli utilities {u}")
    })?;
    within(cli_time, Duration::from_secs(1))?;
    Ok(format!(
        "OG->1, IF->0, DF->0; sender 1/3, receiver 1/3; cli {cli_time:.0?}"
    ))
}

fn c2_unfiltered_art() -> Outcome {
    let t = Instant::now();
    let game = art_game();
    let out = canonical_equilibrium_general(&game, &GeneralFilter::identity(&game))
        .map_err(|e| e.to_string())?;
    ensure(out.kind == EquilibriumKind::BabblingSigmaR, || {
        format!("kind {:?}", out.kind)
    })?;
    ensure(out.babbling_action == Some(Action::Zero), || {
        format!("babbling action {:?}", out.babbling_action)
    })?;
    ensure(
        out.utilities.senders[0].is_zero() && out.utilities.receiver.is_zero(),
        || format!("utilities {:?}", out.utilities),
    )?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok("babbling with no sale, utilities (0, 0)".into())
}

fn c3_interior_pivot() -> Outcome {
    let t = Instant::now();
    let game = g3_game();
    let res = receiver_optimal_filter(&game);
    let want = BinaryFilter::new(vec![r(1, 1), r(0, 1), r(1, 3)]).unwrap();
    ensure(res.filter == want, || {
        format!("filter {}", show(res.filter.values()))
    })?;
    let u = &res.outcome.utilities;
    ensure(u.senders[0] == r(4, 3) && u.receiver == r(7, 9), || {
        format!("utilities ({}, {})", u.senders[0], u.receiver)
    })?;

    let identity = merge_to_binary(&game, &GeneralFilter::identity(&game)).unwrap();
    let unfiltered = evaluate_sigma_s(&game, &identity).receiver;
    ensure(unfiltered == r(2, 3), || {
        format!("unfiltered receiver {unfiltered}")
    })?;
    let (_, babble) = evaluate_babbling(&game);
    ensure(
        babble.senders[0] == r(1, 3) && babble.receiver == r(2, 3),
        || format!("babbling ({}, {})", babble.senders[0], babble.receiver),
    )?;
    ensure(
        u.receiver > unfiltered && u.receiver > babble.receiver,
        || "not strictly better".into(),
    )?;

    let grid = grid_search(&game, &GridSpec::new(3), Objective::Receiver).unwrap();
    ensure(grid.utility == r(7, 9), || {
        format!("grid best {}", grid.utility)
    })?;
    within(t.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "x = (1, 0, 1/3), (4/3, 7/9) > 2/3 and (1/3, 2/3); grid R=3 best 7/9 over {} points",
        grid.points
    ))
}

fn c4_oracle_sweep(games: &[Game]) -> Outcome {
    let t = Instant::now();
    let spec = GridSpec::new(8);
    let mut fallbacks = 0;
    for (seed, game) in games.iter().enumerate() {
        let res = receiver_optimal_filter(game);
        let rep = verify_filter_optimality(game, &res.filter, &spec, Objective::Receiver)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(rep.passed, || {
            format!(
                "seed {seed}: utility {} below grid {} at {}",
                rep.utility,
                rep.grid_best,
                show(rep.grid_filter.values())
            )
        })?;
        if res.fell_back_to_constant {
            fallbacks += 1;
            ensure(!res.outcome.is_informative(), || {
                format!("seed {seed}: fallback is informative")
            })?;
        } else {
            let s = sender_ic(game, &res.filter);
            let rc = receiver_ic(game, &res.filter);
            ensure(s.holds && rc.holds, || {
                format!("seed {seed}: sender {s:?}, receiver {rc:?}")
            })?;
        }
    }
    within(t.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{} games pass at R=8 ({fallbacks} constant fallbacks), {:.1?}",
        games.len(),
        t.elapsed()
    ))
}

fn c5_pareto(games: &[Game]) -> Outcome {
    let t = Instant::now();
    let mut strict = 0;
    for (seed, game) in games.iter().enumerate() {
        let base = canonical_equilibrium_general(game, &GeneralFilter::identity(game))
            .map_err(|e| e.to_string())?;
        for res in [receiver_optimal_filter(game), sender_optimal_filter(game)] {
            let u = &res.outcome.utilities;
            if u.senders[0] > base.utilities.senders[0] {
                strict += 1;
                ensure(u.receiver >= base.utilities.receiver, || {
                    format!(
                        "seed {seed} {:?}: sender {} > {}, receiver {} < {}",
                        res.objective,
                        u.senders[0],
                        base.utilities.senders[0],
                        u.receiver,
                        base.utilities.receiver
                    )
                })?;
            }
        }
    }
    within(t.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{} runs, {strict} with a strict sender gain, no counterexample",
        2 * games.len()
    ))
}

fn random_general_filter(rng: &mut SplitMix64, k: usize) -> GeneralFilter {
    let m = rng.range(1, 5) as usize;
    let table = (0..k)
        .map(|_| {
            let mut w: Vec<i64> = (0..m).map(|_| rng.range(0, 4)).collect();
            if w.iter().all(|&x| x == 0) {
                let j = rng.range(0, m as i64 - 1) as usize;
                w[j] = 1;
            }
            let total: i64 = w.iter().sum();
            w.iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(j, &x)| (format!("m{j}"), r(x, total)))
                .collect()
        })
        .collect();
    GeneralFilter::new(table).expect("rows sum to one")
}

/// Utilities and per-message obedience of the informative profile, computed
/// straight from the general filter.
fn general_sigma_s(game: &Game, filter: &GeneralFilter) -> (Utilities, [bool; 2]) {
    let profile = GeneralProfile::sigma_s(game, filter).unwrap();
    let report = |sig: &str| -> Action {
        match profile.sender_strategy[sig][0].0.as_str() {
            "0" => Action::Zero,
            _ => Action::One,
        }
    };
    let mut u = Utilities::zero(game.num_senders());
    let mut pull = [Rational::zero(), Rational::zero()];
    for (i, s) in game.states().iter().enumerate() {
        for (sig, q) in filter.row(i) {
            let a = report(sig);
            let w = &s.prior * q;
            u.senders[0] += &w * s.sender_utils[0].get(a);
            u.receiver += &w * s.receiver_utils.get(a);
            pull[a.index()] += &w * s.receiver_utils.delta();
        }
    }
    (u, [!pull[0].is_negative(), !pull[1].is_positive()])
}

fn c6_binary_reduction() -> Outcome {
    let mut rng = SplitMix64::new(0x5eed);
    let mut babbling_flips = 0;
    for case in 0..100u64 {
        let k = rng.range(2, 5) as usize;
        let mut spec = RandomGameSpec::new(1000 + case, k, 1);
        spec.prior = PriorKind::RandomRational;
        let game = random_game(&spec);
        let filter = random_general_filter(&mut rng, k);
        let merged = merge_to_binary(&game, &filter).map_err(|e| e.to_string())?;
        let (direct, obeys) = general_sigma_s(&game, &filter);
        let via_merge = evaluate_sigma_s(&game, &merged);
        ensure(direct == via_merge, || {
            format!("case {case}: utilities {direct:?} vs merged {via_merge:?}")
        })?;
        let ic = receiver_ic(&game, &merged);
        let merged_obeys = [
            !ic.signal0_slack.is_negative(),
            !ic.signal1_slack.is_positive(),
        ];
        ensure(obeys == merged_obeys, || {
            format!("case {case}: receiver IC {obeys:?} vs merged {merged_obeys:?}")
        })?;
        if !(obeys[0] && obeys[1]) {
            babbling_flips += 1;
        }
    }
    Ok(format!(
        "100 filters, utilities and receiver IC preserved ({babbling_flips} not receiver-IC)"
    ))
}

fn c7_two_sender() -> Outcome {
    let t = Instant::now();
    let game = l2_game();
    let c = candidate(&game, Profile::Sigma00).map_err(|e| e.to_string())?;
    let want = BinaryFilter::new(vec![r(1, 1), r(1, 2)]).unwrap();
    ensure(c.feasible && c.filter.as_ref() == Some(&want), || {
        format!(
            "Sigma00 filter {:?}",
            c.filter.as_ref().map(|f| show(f.values()))
        )
    })?;
    ensure(c.receiver_utility == r(3, 4), || {
        format!("Sigma00 value {}", c.receiver_utility)
    })?;
    let spec = GridSpec::new(8);
    let grid = two_sender_grid_search(&game, &spec, &[Profile::Sigma00])
        .map_err(|e| e.to_string())?
        .ok_or("no Sigma00 equilibrium on the grid")?;
    ensure(grid.utility == r(3, 4), || {
        format!("Sigma00 grid best {}", grid.utility)
    })?;

    let mut max_fraction = 0;
    for seed in 0..100u64 {
        let k = 1 + (seed % 4) as usize;
        let mut gs = RandomGameSpec::new(5000 + seed, k, 2);
        if seed % 2 == 1 {
            gs.prior = PriorKind::RandomRational;
        }
        let game = random_game(&gs);
        for target in [LpTarget::Sigma00, LpTarget::Sigma11] {
            let lp = build_lp(&game, target).map_err(|e| e.to_string())?;
            let sol = lp_solve(&lp);
            let frac = sol.x.iter().filter(|x| !x.is_integer()).count();
            max_fraction = max_fraction.max(frac);
            ensure(frac <= 2, || {
                format!("seed {seed} {target:?}: {frac} fractional coordinates")
            })?;
        }
        let (best, _) = two_sender_optimal(&game).map_err(|e| e.to_string())?;
        let grid =
            two_sender_grid_search(&game, &spec, &Profile::ALL).map_err(|e| e.to_string())?;
        if let Some(g) = grid {
            ensure(best.receiver_utility >= g.utility, || {
                format!(
                    "seed {seed}: solver {} ({:?}) below grid {} ({:?} at {})",
                    best.receiver_utility,
                    best.profile,
                    g.utility,
                    g.profile,
                    show(g.filter.values())
                )
            })?;
        }
    }
    within(t.elapsed(), Duration::from_secs(600))?;
    Ok(format!(
        "L2 Sigma00 x = (1, 1/2), 3/4, grid agrees; 100 games beat the R=8 grid; \
         at most {max_fraction} fractional coordinates; {:.1?}",
        t.elapsed()
    ))
}

fn c8_majority() -> Outcome {
    for seed in 0..50u64 {
        let senders = 3 + (seed % 3) as usize;
        let k = 2 + (seed % 4) as usize;
        let mut gs = RandomGameSpec::new(9000 + seed, k, senders);
        if seed % 2 == 0 {
            gs.prior = PriorKind::RandomRational;
        }
        let game = random_game(&gs);
        let maj = majority_outcome(&game).map_err(|e| e.to_string())?;
        let full: Rational = game
            .states()
            .iter()
            .map(|s| {
                let u = &s.receiver_utils;
                &s.prior * u.action0.clone().max(u.action1.clone())
            })
            .sum();
        ensure(maj.utilities.receiver == full, || {
            format!("seed {seed}: majority {} vs {full}", maj.utilities.receiver)
        })?;
        for i in 0..senders {
            let single = game.project_sender(i).unwrap();
            for res in [
                receiver_optimal_filter(&single),
                sender_optimal_filter(&single),
            ] {
                ensure(res.outcome.utilities.receiver <= full, || {
                    format!("seed {seed}: sender {i} single value above majority")
                })?;
            }
        }
        let pair = game.truncate_senders(2).unwrap();
        let (_, all) = two_sender_optimal(&pair).map_err(|e| e.to_string())?;
        for c in all.iter().filter(|c| c.feasible) {
            ensure(c.receiver_utility <= full, || {
                format!("seed {seed}: {:?} above majority", c.profile)
            })?;
        }
    }
    Ok("50 games: majority = sum p*max, bounds every single- and two-sender value".into())
}

fn best_time(game: &Game, repeats: usize) -> Duration {
    (0..repeats)
        .map(|_| {
            let t = Instant::now();
            let res = receiver_optimal_filter(game);
            let d = t.elapsed();
            assert_eq!(res.filter.len(), game.num_states());
            d
        })
        .min()
        .unwrap()
}

fn c9_complexity() -> Outcome {
    let sizes = [1_000usize, 10_000, 100_000];
    let games: Vec<Game> = sizes
        .iter()
        .map(|&k| {
            let mut spec = RandomGameSpec::new(42, k, 1);
            spec.prior = PriorKind::RandomRational;
            random_game(&spec)
        })
        .collect();
    let times: Vec<Duration> = games
        .iter()
        .zip([20, 8, 3])
        .map(|(g, reps)| best_time(g, reps))
        .collect();
    let per: Vec<f64> = sizes
        .iter()
        .zip(&times)
        .map(|(&k, t)| t.as_secs_f64() / (k as f64 * (k as f64).ln()))
        .collect();
    let lo = per.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = per.iter().cloned().fold(0.0, f64::max);
    let summary = format!(
        "k=1e3 {:.2?}, 1e4 {:.2?}, 1e5 {:.2?}; time/(k ln k) spread {:.2}x",
        times[0],
        times[1],
        times[2],
        hi / lo
    );
    within(times[2], Duration::from_secs(1)).map_err(|e| format!("{e}; {summary}"))?;
    ensure(hi <= 2.0 * lo, || {
        format!("growth above 2x k log k; {summary}")
    })?;
    Ok(summary)
}

fn main() -> ExitCode {
    let games = corpus();
    let checks: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("art-dealer reproduction", Box::new(c1_art_dealer)),
        ("unfiltered art dealer babbles", Box::new(c2_unfiltered_art)),
        ("interior-pivot trace", Box::new(c3_interior_pivot)),
        (
            "oracle optimality sweep",
            Box::new(|| c4_oracle_sweep(&games)),
        ),
        ("pareto property", Box::new(|| c5_pareto(&games))),
        ("binary reduction", Box::new(c6_binary_reduction)),
        ("two-sender LP", Box::new(c7_two_sender)),
        ("majority baseline", Box::new(c8_majority)),
        ("complexity", Box::new(c9_complexity)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = t.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {}  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}  {name}: {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        checks.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
