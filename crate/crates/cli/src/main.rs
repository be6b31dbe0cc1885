//! `talkfilter`: optimal information filters for binary-action cheap-talk games.
//!
//! Exit codes: 0 success, 2 bad input, 3 verification failed.

mod report;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use talkfilter::equilibrium::{canonical_equilibrium, receiver_ic, sender_ic_for};
use talkfilter::multi_sender::{two_sender_optimal, CandidateOutcome, Profile};
use talkfilter::oracle::{verify_filter_optimality, GridSpec};
use talkfilter::{
    canonical_equilibrium_general, classify_states, majority_outcome, merge_to_binary,
    optimal_filter, state_deltas, validate_game, Action, BinaryFilter, FilterFile, Game,
    GeneralFilterFile, Objective, Rational, RawGame, Region, Utilities,
};

use report::{
    filter_lines, ic_line, named, utilities_line, GameDigest, NamedFilter, OutcomeView, RunReport,
    Timing,
};

#[derive(Parser)]
#[command(
    name = "talkfilter",
    version,
    about = "Optimal information filters for cheap-talk games"
)]
struct Cli {
    /// Print only the JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Receiver,
    Sender,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Objective {
        match o {
            ObjectiveArg::Receiver => Objective::Receiver,
            ObjectiveArg::Sender => Objective::Sender,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the receiver- or sender-optimal filter of a one-sender game.
    Optimize {
        game: PathBuf,
        #[arg(long, value_enum, default_value = "receiver")]
        objective: ObjectiveArg,
        /// Write the filter here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical equilibrium of a game under a binary or general filter.
    Evaluate {
        game: PathBuf,
        #[arg(long)]
        filter: PathBuf,
    },
    /// Best receiver outcome with two senders.
    TwoSender { game: PathBuf },
    /// Full-information majority outcome with three or more senders.
    Majority { game: PathBuf },
    /// Check a filter against a brute-force grid search.
    Verify {
        game: PathBuf,
        #[arg(long)]
        filter: PathBuf,
        #[arg(long, default_value_t = 8)]
        grid: u32,
        #[arg(long, default_value_t = 8)]
        max_states: usize,
        #[arg(long, value_enum, default_value = "receiver")]
        objective: ObjectiveArg,
    },
    /// Utility differences and preference regions of every state.
    Classify {
        game: PathBuf,
        #[arg(long, default_value_t = 0)]
        sender: usize,
    },
}

struct Output<T: Serialize> {
    human: String,
    result: T,
    diagnostics: BTreeMap<String, talkfilter::ICReport>,
    game: GameDigest,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let json = cli.json;
    let start = Instant::now();
    let run = match cli.command {
        Command::Optimize {
            game,
            objective,
            out,
        } => optimize(&game, objective.into(), out.as_deref())
            .map(|o| emit(o, json, &command, start)),
        Command::Evaluate { game, filter } => {
            evaluate(&game, &filter).map(|o| emit(o, json, &command, start))
        }
        Command::TwoSender { game } => two_sender(&game).map(|o| emit(o, json, &command, start)),
        Command::Majority { game } => majority(&game).map(|o| emit(o, json, &command, start)),
        Command::Verify {
            game,
            filter,
            grid,
            max_states,
            objective,
        } => {
            let spec = GridSpec {
                resolution: grid,
                max_states,
            };
            verify(&game, &filter, spec, objective.into()).map(|o| emit(o, json, &command, start))
        }
        Command::Classify { game, sender } => {
            classify(&game, sender).map(|o| emit(o, json, &command, start))
        }
    };
    match run {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(out: Output<T>, json: bool, command: &[String], start: Instant) -> u8 {
    let report = RunReport {
        command: command.to_vec(),
        game: out.game,
        result: out.result,
        diagnostics: out.diagnostics,
        timing: Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
        },
    };
    let text = if json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        // summary first, then the report on a single trailing line
        let line = serde_json::to_string(&report).expect("report serializes");
        format!("{}\n{line}\n", out.human)
    };
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    out.exit
}

fn load_game(path: &Path) -> Result<Game> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let raw: RawGame = serde_json::from_str(&text)
        .with_context(|| format!("parsing game file {}", path.display()))?;
    Ok(validate_game(&raw)?)
}

fn single_sender(game: &Game) -> Result<()> {
    if game.num_senders() != 1 {
        return Err(talkfilter::Error::WrongSenderCount {
            expected: "exactly 1".into(),
            found: game.num_senders(),
        }
        .into());
    }
    Ok(())
}

enum AnyFilter {
    Binary(BinaryFilter),
    General(talkfilter::GeneralFilter),
}

fn load_filter(path: &Path, game: &Game) -> Result<AnyFilter> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing filter file {}", path.display()))?;
    if value.get("signal0_prob").is_some() {
        let f: FilterFile = serde_json::from_value(value).context("reading signal0_prob")?;
        Ok(AnyFilter::Binary(f.to_filter(game)?))
    } else if value.get("signals").is_some() {
        let f: GeneralFilterFile = serde_json::from_value(value).context("reading signals")?;
        Ok(AnyFilter::General(f.to_filter(game)?))
    } else {
        bail!(
            "InvalidFilter: {} has neither a \"signal0_prob\" nor a \"signals\" object",
            path.display()
        )
    }
}

fn ic_diagnostics(game: &Game, filter: &BinaryFilter) -> BTreeMap<String, talkfilter::ICReport> {
    let mut d = BTreeMap::new();
    for i in 0..game.num_senders() {
        let key = if game.num_senders() == 1 {
            "sender_ic".to_string()
        } else {
            format!("sender{}_ic", i + 1)
        };
        d.insert(key, sender_ic_for(game, filter, i));
    }
    d.insert("receiver_ic".into(), receiver_ic(game, filter));
    d
}

fn ic_text(diag: &BTreeMap<String, talkfilter::ICReport>) -> String {
    diag.iter()
        .map(|(k, ic)| ic_line(k.trim_end_matches("_ic"), ic) + "\n")
        .collect()
}

#[derive(Serialize)]
struct OptimizeResult {
    objective: Objective,
    filter: NamedFilter,
    pivot_state: Option<String>,
    pivot_index: Option<usize>,
    pivot_q: Option<Rational>,
    fell_back_to_constant: bool,
    outcome: OutcomeView,
}

fn optimize(
    path: &Path,
    objective: Objective,
    out: Option<&Path>,
) -> Result<Output<OptimizeResult>> {
    let game = load_game(path)?;
    single_sender(&game)?;
    let res = optimal_filter(&game, objective);
    let names: Vec<&str> = game.names().collect();
    if let Some(out) = out {
        let file = serde_json::to_string_pretty(&res.filter.to_file(&game))?;
        fs::write(out, file + "\n").with_context(|| format!("writing {}", out.display()))?;
    }
    let diagnostics = ic_diagnostics(&game, &res.filter);
    let mut human = format!(
        "objective: {}\nfilter (probability of signal 0):\n{}",
        match objective {
            Objective::Receiver => "receiver",
            Objective::Sender => "sender",
        },
        filter_lines(&game, &res.filter)
    );
    match (&res.pivot_state, &res.pivot_q) {
        (Some(s), Some(q)) => human += &format!("pivot: {} q = {q}\n", names[*s]),
        (Some(s), None) => human += &format!("pivot: {} (at its conceded extreme)\n", names[*s]),
        _ => human += "pivot: none\n",
    }
    if res.fell_back_to_constant {
        human += "no informative filter is incentive compatible; fell back to x = 0\n";
    }
    human += &format!(
        "outcome: {:?}\nutilities: {}\n{}",
        res.outcome.kind,
        utilities_line(&res.outcome.utilities),
        ic_text(&diagnostics)
    );
    if let Some(out) = out {
        human += &format!("filter written to {}\n", out.display());
    }
    Ok(Output {
        human,
        result: OptimizeResult {
            objective,
            filter: named(&game, &res.filter),
            pivot_state: res.pivot_state.map(|s| names[s].to_string()),
            pivot_index: res.pivot_index,
            pivot_q: res.pivot_q.clone(),
            fell_back_to_constant: res.fell_back_to_constant,
            outcome: OutcomeView::of(&game, &res.outcome),
        },
        diagnostics,
        game: GameDigest::of(&game),
        exit: 0,
    })
}

fn evaluate(game_path: &Path, filter_path: &Path) -> Result<Output<OutcomeView>> {
    let game = load_game(game_path)?;
    single_sender(&game)?;
    let (outcome, binary) = match load_filter(filter_path, &game)? {
        AnyFilter::Binary(f) => (canonical_equilibrium(&game, &f), f),
        AnyFilter::General(f) => (
            canonical_equilibrium_general(&game, &f)?,
            merge_to_binary(&game, &f)?,
        ),
    };
    let diagnostics = ic_diagnostics(&game, &binary);
    let view = OutcomeView::of(&game, &outcome);
    let mut human = format!("equilibrium: {:?}\n", outcome.kind);
    if let Some(a) = outcome.babbling_action {
        human += &format!("receiver plays {a} regardless of the message\n");
    }
    human += &format!(
        "utilities: {}\nplayed filter (probability of signal 0):\n{}{}",
        utilities_line(&outcome.utilities),
        filter_lines(&game, &outcome.effective_filter),
        ic_text(&diagnostics)
    );
    Ok(Output {
        human,
        result: view,
        diagnostics,
        game: GameDigest::of(&game),
        exit: 0,
    })
}

#[derive(Serialize)]
struct CandidateView {
    profile: Profile,
    feasible: bool,
    filter: Option<NamedFilter>,
    receiver_utility: Rational,
    utilities: Utilities,
}

impl CandidateView {
    fn of(game: &Game, c: &CandidateOutcome) -> CandidateView {
        CandidateView {
            profile: c.profile,
            feasible: c.feasible,
            filter: c.filter.as_ref().map(|f| named(game, f)),
            receiver_utility: c.receiver_utility.clone(),
            utilities: c.utilities.clone(),
        }
    }
}

#[derive(Serialize)]
struct TwoSenderResult {
    best: CandidateView,
    candidates: Vec<CandidateView>,
}

fn two_sender(path: &Path) -> Result<Output<TwoSenderResult>> {
    let game = load_game(path)?;
    let (best, all) = two_sender_optimal(&game)?;
    let mut human = String::from("candidates:\n");
    for c in &all {
        human += &format!(
            "  {:<8} {}\n",
            format!("{:?}", c.profile),
            if c.feasible {
                format!("receiver {}", c.receiver_utility)
            } else {
                "infeasible".to_string()
            }
        );
    }
    human += &format!(
        "best: {:?}\nutilities: {}\n",
        best.profile,
        utilities_line(&best.utilities)
    );
    let diagnostics = match &best.filter {
        Some(f) => {
            human += &format!(
                "filter (probability of signal 0):\n{}",
                filter_lines(&game, f)
            );
            ic_diagnostics(&game, f)
        }
        None => BTreeMap::new(),
    };
    Ok(Output {
        human,
        result: TwoSenderResult {
            best: CandidateView::of(&game, &best),
            candidates: all.iter().map(|c| CandidateView::of(&game, c)).collect(),
        },
        diagnostics,
        game: GameDigest::of(&game),
        exit: 0,
    })
}

#[derive(Serialize)]
struct MajorityResult {
    actions: BTreeMap<String, Action>,
    utilities: Utilities,
}

fn majority(path: &Path) -> Result<Output<MajorityResult>> {
    let game = load_game(path)?;
    let m = majority_outcome(&game)?;
    let width = game.names().map(str::len).max().unwrap_or(0);
    let mut human = String::from("receiver action per reported state:\n");
    for (n, a) in game.names().zip(&m.actions) {
        human += &format!("  {n:<width$}  {a}\n");
    }
    human += &format!("utilities: {}\n", utilities_line(&m.utilities));
    Ok(Output {
        human,
        result: MajorityResult {
            actions: game
                .names()
                .map(String::from)
                .zip(m.actions.iter().copied())
                .collect(),
            utilities: m.utilities,
        },
        diagnostics: BTreeMap::new(),
        game: GameDigest::of(&game),
        exit: 0,
    })
}

#[derive(Serialize)]
struct VerifyResult {
    passed: bool,
    objective: Objective,
    resolution: u32,
    utility: Rational,
    grid_best: Rational,
    grid_filter: NamedFilter,
    filter_ic: bool,
    informative: bool,
}

fn verify(
    game_path: &Path,
    filter_path: &Path,
    spec: GridSpec,
    objective: Objective,
) -> Result<Output<VerifyResult>> {
    let game = load_game(game_path)?;
    single_sender(&game)?;
    let filter = match load_filter(filter_path, &game)? {
        AnyFilter::Binary(f) => f,
        AnyFilter::General(f) => merge_to_binary(&game, &f)?,
    };
    let rep = verify_filter_optimality(&game, &filter, &spec, objective)?;
    let diagnostics = ic_diagnostics(&game, &filter);
    let human = format!(
        "{}: filter value {} vs grid best {} at resolution {} ({} played, filter {} incentive compatible)\n",
        if rep.passed { "PASS" } else { "FAIL" },
        rep.utility,
        rep.grid_best,
        spec.resolution,
        if rep.informative { "informative profile" } else { "babbling" },
        if rep.filter_ic { "is" } else { "is not" },
    );
    Ok(Output {
        human,
        result: VerifyResult {
            passed: rep.passed,
            objective,
            resolution: spec.resolution,
            utility: rep.utility,
            grid_best: rep.grid_best,
            grid_filter: named(&game, &rep.grid_filter),
            filter_ic: rep.filter_ic,
            informative: rep.informative,
        },
        diagnostics,
        game: GameDigest::of(&game),
        exit: if rep.passed { 0 } else { 3 },
    })
}

#[derive(Serialize)]
struct DeltaView {
    state: String,
    d_s: Rational,
    d_r: Rational,
    region: Region,
}

#[derive(Serialize)]
struct ClassifyResult {
    sender: usize,
    omega_00: Vec<String>,
    omega_11: Vec<String>,
    omega_01: Vec<String>,
    omega_10: Vec<String>,
    deltas: Vec<DeltaView>,
}

fn classify(path: &Path, sender: usize) -> Result<Output<ClassifyResult>> {
    let game = load_game(path)?;
    let deltas = state_deltas(&game, sender)?;
    let classes = classify_states(&game, sender)?;
    let names: Vec<&str> = game.names().collect();
    let pick = |v: &[usize]| v.iter().map(|&i| names[i].to_string()).collect::<Vec<_>>();
    let width = names.iter().map(|n| n.len()).max().unwrap_or(0).max(5);
    let mut human = format!("{:<width$}  {:>8}  {:>8}  region\n", "state", "d_s", "d_r");
    let mut views = Vec::new();
    for (i, d) in deltas.iter().enumerate() {
        let region = classes.region(i);
        human += &format!(
            "{:<width$}  {:>8}  {:>8}  {region:?}\n",
            names[i], d.d_s, d.d_r
        );
        views.push(DeltaView {
            state: names[i].to_string(),
            d_s: d.d_s.clone(),
            d_r: d.d_r.clone(),
            region,
        });
    }
    Ok(Output {
        human,
        result: ClassifyResult {
            sender,
            omega_00: pick(&classes.omega_00),
            omega_11: pick(&classes.omega_11),
            omega_01: pick(&classes.omega_01),
            omega_10: pick(&classes.omega_10),
            deltas: views,
        },
        diagnostics: BTreeMap::new(),
        game: GameDigest::of(&game),
        exit: 0,
    })
}
