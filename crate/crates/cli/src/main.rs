use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use diamgame::degree::{mindeg_params, FloodingBreaker, MinDegMaker};
use diamgame::diameter2::{d2_breaker_params, d2_maker_params, d2_maker_threshold, D2TwoPhaseBreaker, PairingBreaker};
use diamgame::diameter_d::{claim2_check, dd_params_with, R1_CONSTANT};
use diamgame::expansion::exp_condition;
use diamgame::harness::{simulate, write_outputs, ExperimentConfig};
use diamgame::heuristics::{DegreeGreedy, GreedyPath, LowestEdge, TwoPathGreedy};
use diamgame::solver::{solve_with, verify_diameter, SolverConfig, VerifyConfig, VerifyResult};
use diamgame::{Error, Player, Result, Strategy, Transcript};
use serde_json::{json, Value};

/// Maker–Breaker diameter games: exact solver, simulations and parameter calculators.
#[derive(Debug, Parser)]
#[command(name = "diamgame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    Maker,
    Breaker,
}

impl From<Side> for Player {
    fn from(s: Side) -> Player {
        match s {
            Side::Maker => Player::Maker,
            Side::Breaker => Player::Breaker,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact value of D_d(a:b) on K_n.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        a: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Side::Maker)]
        first: Side,
        /// Largest C(n,2) accepted.
        #[arg(long, default_value_t = 15)]
        edge_cap: usize,
        #[arg(long)]
        no_canon: bool,
        #[arg(long)]
        no_memo: bool,
        #[arg(long)]
        no_cutoffs: bool,
    },
    /// Run the matches described by an experiment config.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        serial: bool,
        /// Overrides the config's CSV path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Overrides the config's transcript directory.
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
    /// Parameter calculators.
    Params {
        #[command(subcommand)]
        which: ParamsCommand,
    },
    /// Check a scripted strategy against every line of play of the other side.
    Verify {
        #[arg(long)]
        strategy: String,
        #[arg(long, value_enum, default_value_t = Side::Breaker)]
        side: Side,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        a: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Side::Maker)]
        first: Side,
    },
    /// Replay a transcript and re-derive its verdict.
    Replay { transcript: PathBuf },
}

#[derive(Debug, Subcommand)]
enum ParamsCommand {
    D2Maker {
        #[arg(long)]
        n: f64,
    },
    /// Smallest power of ten at which every D₂ Maker condition holds.
    D2Threshold,
    D2Breaker {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    Dd {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = R1_CONSTANT)]
        r1_constant: f64,
    },
    Mindeg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    Exp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    Claim2 {
        #[arg(long, default_value_t = 10)]
        delta_max: u64,
        #[arg(long, default_value_t = 20)]
        m_max: u64,
    },
}

const EXIT_BAD_ARGS: u8 = 1;
const EXIT_OVER_CAP: u8 = 2;
const EXIT_ASSERTION: u8 = 3;

fn print(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn verify_with<S: Strategy + Clone + Sync>(s: S, side: Player, n: usize, a: usize, b: usize, d: usize, first: Player) -> Result<VerifyResult> {
    verify_diameter(n, a, b, d, first, s, side, &VerifyConfig::default())
}

fn params(which: ParamsCommand) -> Result<Value> {
    Ok(match which {
        ParamsCommand::D2Maker { n } => {
            let p = d2_maker_params(n)?;
            let mut v = serde_json::to_value(p)?;
            v["all_conditions"] = json!(p.conds.all());
            v
        }
        ParamsCommand::D2Threshold => json!({ "threshold": d2_maker_threshold() }),
        ParamsCommand::D2Breaker { n, epsilon } => serde_json::to_value(d2_breaker_params(n, epsilon)?)?,
        ParamsCommand::Dd { n, d, r1_constant } => {
            let p = dd_params_with(n, d, r1_constant)?;
            let mut v = serde_json::to_value(&p)?;
            v["claim1_ok"] = json!(p.claim1_ok());
            v
        }
        ParamsCommand::Mindeg { n, a, b } => serde_json::to_value(mindeg_params(n, a, b)?)?,
        ParamsCommand::Exp { n, r, s, a, b } => serde_json::to_value(exp_condition(n, r, s, a, b)?)?,
        ParamsCommand::Claim2 { delta_max, m_max } => json!({ "holds": claim2_check(2..=delta_max, 2..=m_max)? }),
    })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve { n, a, b, d, first, edge_cap, no_canon, no_memo, no_cutoffs } => {
            let cfg = SolverConfig { edge_cap, canonicalize: !no_canon, memo: !no_memo, cutoffs: !no_cutoffs, ..SolverConfig::default() };
            print(&solve_with(n, a, b, d, first.into(), &cfg)?)?;
        }
        Command::Simulate { config, serial, csv, transcripts } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if csv.is_some() {
                cfg.csv = csv;
            }
            if transcripts.is_some() {
                cfg.transcripts = transcripts;
            }
            log::info!("running {} matches for `{}`", cfg.matches()?.len(), cfg.name);
            let report = simulate(&cfg, !serial)?;
            write_outputs(&cfg, &report)?;
            if cfg.csv.is_none() {
                print!("{}", report.to_csv()?);
            }
            let violations = report.total_violations();
            if violations > 0 {
                log::warn!("{violations} invariant violations recorded");
                if cfg.assert_invariants {
                    return Ok(EXIT_ASSERTION);
                }
            }
        }
        Command::Params { which } => print(&params(which)?)?,
        Command::Verify { strategy, side, n, a, b, d, first } => {
            let (side, first) = (side.into(), first.into());
            let r = match strategy.as_str() {
                "pairing" => verify_with(PairingBreaker::new(), side, n, a, b, d, first),
                "d2-two-phase" => verify_with(D2TwoPhaseBreaker::for_game(n, b), side, n, a, b, d, first),
                "flooding" => verify_with(FloodingBreaker::new(), side, n, a, b, d, first),
                "mindeg" => verify_with(MinDegMaker::for_game(n, a, b)?, side, n, a, b, d, first),
                "lowest" => verify_with(LowestEdge::new(), side, n, a, b, d, first),
                "degree-greedy" => verify_with(DegreeGreedy::new(), side, n, a, b, d, first),
                "two-path-greedy" => verify_with(TwoPathGreedy::new(), side, n, a, b, d, first),
                "greedy-path" => verify_with(GreedyPath::new(), side, n, a, b, d, first),
                other => return Err(Error::InvalidParameters(format!("strategy `{other}` cannot be verified"))),
            }?;
            print(&r)?;
        }
        Command::Replay { transcript } => {
            let t = Transcript::read_jsonl(BufReader::new(File::open(&transcript)?))?;
            let report = t.replay()?;
            print(&report)?;
            if !report.matches_footer {
                return Ok(EXIT_ASSERTION);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("LOG_LEVEL", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_ARGS } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::OverCap(_) | Error::FamilyTooLarge { .. } | Error::MemoOverflow { .. } => EXIT_OVER_CAP,
                _ => EXIT_BAD_ARGS,
            })
        }
    }
}
