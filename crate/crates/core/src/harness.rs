//! Batch simulation: experiment configs, the strategy registry, seeded
//! match scheduling and the CSV summary.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree::{mindeg_params, FloodingBreaker, MinDegMaker, PotentialGreedyBreaker};
use crate::diameter2::{d2_breaker_params, D2CompositeMaker, D2SimpleMaker, D2TwoPhaseBreaker, PairingBreaker};
use crate::diameter_d::{dd_breaker_a2_bias, dd_breaker_biases, dd_params_with, DdBreakerA1, DdBreakerA2, DdMaker, BREAKER_MULTIPLIER, R1_CONSTANT};
use crate::error::{Error, Result};
use crate::expansion::{ExpMaker, DEFAULT_FAMILY_CAP};
use crate::game::{GameState, Player};
use crate::heuristics::{DegreeGreedy, GreedyPath, LowestEdge, RandomPlayer, TwoPathGreedy};
use crate::play::{run_match, MatchOptions, Strategy, TargetProperty, Transcript};

/// Ids usable in either seat.
pub const HEURISTIC_IDS: &[&str] = &["random", "lowest", "degree-greedy", "two-path-greedy", "greedy-path"];
pub const MAKER_IDS: &[&str] = &["mindeg", "exp-maker", "d2-simple", "d2-composite", "dd-maker"];
pub const BREAKER_IDS: &[&str] = &["flooding", "potential-greedy", "pairing", "d2-two-phase", "dd-breaker-a1", "dd-breaker-a2"];

/// Frozen CSV header of the summary file.
pub const CSV_COLUMNS: [&str; 11] = ["match", "n", "a", "b", "seed", "maker", "breaker", "winner", "rounds", "flags", "violations"];

/// Breaker bias: a number, or the name of a formula evaluated per n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BiasSpec {
    Fixed(usize),
    /// "d2-breaker", "dd-breaker-a1" or "dd-breaker-a2".
    Derived(String),
}

/// Knobs consumed by individual strategies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StrategyKnobs {
    /// ε in the D₂ Breaker bias.
    pub epsilon: f64,
    /// Degree-capping share b₁ of the a=1 D_d Breaker; derived from n and d when absent.
    pub b1: Option<usize>,
    /// Multiplier m in b = m·b₁.
    pub multiplier: f64,
    /// Explicit r₁..r_{⌈d/2⌉−1} for the D_d Maker; analytic values when absent.
    pub dd_r: Option<Vec<usize>>,
    pub r1_constant: f64,
    /// Shape of the expansion game played by `exp-maker`.
    pub exp_r: usize,
    pub exp_s: usize,
    pub family_cap: u64,
}

impl Default for StrategyKnobs {
    fn default() -> Self {
        StrategyKnobs {
            epsilon: 0.1,
            b1: None,
            multiplier: BREAKER_MULTIPLIER,
            dd_r: None,
            r1_constant: R1_CONSTANT,
            exp_r: 1,
            exp_s: 1,
            family_cap: DEFAULT_FAMILY_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    /// "diameter<=d", "mindeg>=k" or "expansion(r,s)".
    pub property: String,
    pub n: Vec<usize>,
    pub a: usize,
    pub b: BiasSpec,
    #[serde(default = "maker_first")]
    pub first: Player,
    pub maker: Vec<String>,
    pub breaker: Vec<String>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default = "yes")]
    pub early_stop: bool,
    /// Non-zero exit when a match records an invariant violation.
    #[serde(default = "yes")]
    pub assert_invariants: bool,
    #[serde(default)]
    pub knobs: StrategyKnobs,
    /// Relative paths resolve against the config file's directory.
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub transcripts: Option<PathBuf>,
}

fn maker_first() -> Player {
    Player::Maker
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_json(&fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.csv, &mut cfg.transcripts].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn target(&self) -> Result<TargetProperty> {
        self.property.parse()
    }

    pub fn validate(&self) -> Result<()> {
        self.target()?;
        if self.n.is_empty() || self.maker.is_empty() || self.breaker.is_empty() || self.a == 0 || self.repetitions == 0 {
            return Err(Error::InvalidParameters("config needs n values, strategies on both sides, a ≥ 1 and repetitions ≥ 1".into()));
        }
        for id in &self.maker {
            if !is_known(id, Player::Maker) {
                return Err(Error::InvalidParameters(format!("unknown maker strategy id `{id}`")));
            }
        }
        for id in &self.breaker {
            if !is_known(id, Player::Breaker) {
                return Err(Error::InvalidParameters(format!("unknown breaker strategy id `{id}`")));
            }
        }
        if self.seeds.is_empty() && self.maker.iter().chain(&self.breaker).any(|s| s == "random") {
            return Err(Error::InvalidParameters("stochastic strategies need a non-empty seed list".into()));
        }
        if let BiasSpec::Derived(f) = &self.b {
            if !["d2-breaker", "dd-breaker-a1", "dd-breaker-a2"].contains(&f.as_str()) {
                return Err(Error::InvalidParameters(format!("unknown bias formula `{f}`")));
            }
        }
        Ok(())
    }

    /// Diameter target d, or 2 for non-diameter properties.
    pub fn d(&self) -> usize {
        match self.target() {
            Ok(TargetProperty::DiameterAtMost(d)) => d,
            _ => 2,
        }
    }

    pub fn bias(&self, n: usize) -> Result<usize> {
        match &self.b {
            BiasSpec::Fixed(b) => Ok(*b),
            BiasSpec::Derived(f) => match f.as_str() {
                "d2-breaker" => Ok(d2_breaker_params(n, self.knobs.epsilon)?.b),
                "dd-breaker-a1" => Ok(dd_breaker_biases(n, self.d(), self.knobs.multiplier)?.1),
                "dd-breaker-a2" => Ok(dd_breaker_a2_bias(n, self.d())),
                other => Err(Error::InvalidParameters(format!("unknown bias formula `{other}`"))),
            },
        }
    }

    /// All matches in scheduling order.
    pub fn matches(&self) -> Result<Vec<MatchSpec>> {
        let seeds = if self.seeds.is_empty() { vec![0] } else { self.seeds.clone() };
        let mut out = Vec::new();
        for &n in &self.n {
            let b = self.bias(n)?;
            for maker in &self.maker {
                for breaker in &self.breaker {
                    for &seed in &seeds {
                        for _ in 0..self.repetitions {
                            let index = out.len();
                            out.push(MatchSpec { index, n, a: self.a, b, seed, maker: maker.clone(), breaker: breaker.clone() });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn is_known(id: &str, side: Player) -> bool {
    HEURISTIC_IDS.contains(&id)
        || match side {
            Player::Maker => MAKER_IDS.contains(&id),
            Player::Breaker => BREAKER_IDS.contains(&id),
        }
}

/// All registry ids.
pub fn registry_ids() -> Vec<&'static str> {
    HEURISTIC_IDS.iter().chain(MAKER_IDS).chain(BREAKER_IDS).copied().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchSpec {
    pub index: usize,
    pub n: usize,
    pub a: usize,
    pub b: usize,
    /// Experiment seed from the config.
    pub seed: u64,
    pub maker: String,
    pub breaker: String,
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-match RNG seed from (experiment seed, match index).
pub fn match_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

/// Everything a registry constructor may need.
#[derive(Debug, Clone)]
pub struct StrategyContext<'a> {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub d: usize,
    pub seed: u64,
    pub knobs: &'a StrategyKnobs,
}

pub fn build_strategy(id: &str, side: Player, ctx: &StrategyContext) -> Result<Box<dyn Strategy>> {
    let StrategyContext { n, a, b, d, seed, knobs } = *ctx;
    if !is_known(id, side) {
        return Err(Error::InvalidParameters(format!("unknown {side:?} strategy id `{id}`")));
    }
    Ok(match id {
        "random" => Box::new(RandomPlayer::new(seed)),
        "lowest" => Box::new(LowestEdge::new()),
        "degree-greedy" => Box::new(DegreeGreedy::new()),
        "two-path-greedy" => Box::new(TwoPathGreedy::new()),
        "greedy-path" => Box::new(GreedyPath::new()),
        "mindeg" => Box::new(MinDegMaker::for_game(n, a, b)?),
        "exp-maker" => Box::new(ExpMaker::new(n, knobs.exp_r, knobs.exp_s, a, b as f64, knobs.family_cap)?),
        "d2-simple" => Box::new(D2SimpleMaker::for_game(n, a, b)?),
        "d2-composite" => Box::new(D2CompositeMaker::for_game(n, b)?),
        "dd-maker" => Box::new(match &knobs.dd_r {
            Some(r) => DdMaker::manual(n, d, b, r, knobs.family_cap)?,
            None => DdMaker::from_params(n, b, &dd_params_with(n as f64, d, knobs.r1_constant)?, knobs.family_cap)?,
        }),
        "flooding" => Box::new(FloodingBreaker::new()),
        "potential-greedy" => Box::new(PotentialGreedyBreaker::new(mindeg_params(n, a, b)?)),
        "pairing" => Box::new(PairingBreaker::new()),
        "d2-two-phase" => Box::new(D2TwoPhaseBreaker::for_game(n, b)),
        "dd-breaker-a1" => {
            let b1 = match knobs.b1 {
                Some(b1) => b1,
                None => dd_breaker_biases(n, d, knobs.multiplier)?.0,
            };
            Box::new(DdBreakerA1::for_game(n, d, b1, b)?)
        }
        "dd-breaker-a2" => Box::new(DdBreakerA2::for_game(n, a, b)?),
        _ => unreachable!("checked by is_known"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    #[serde(rename = "match")]
    pub index: usize,
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub seed: u64,
    pub maker: String,
    pub breaker: String,
    pub winner: Player,
    pub rounds: usize,
    /// `name=count` pairs joined by `;`.
    pub flags: String,
    pub violations: usize,
}

#[derive(Debug, Clone)]
pub struct MatchOutcome {
    pub row: SummaryRow,
    pub transcript: Transcript,
}

pub fn run_one(cfg: &ExperimentConfig, spec: &MatchSpec) -> Result<MatchOutcome> {
    let target = cfg.target()?;
    let ms = match_seed(spec.seed, spec.index);
    let ctx = |seed| StrategyContext { n: spec.n, a: spec.a, b: spec.b, d: cfg.d(), seed, knobs: &cfg.knobs };
    let mut maker = build_strategy(&spec.maker, Player::Maker, &ctx(ms))?;
    let mut breaker = build_strategy(&spec.breaker, Player::Breaker, &ctx(splitmix64(ms)))?;
    let game = GameState::new(spec.n, spec.a, spec.b, cfg.first)?;
    let (transcript, _) = run_match(game, maker.as_mut(), breaker.as_mut(), target, MatchOptions { early_stop: cfg.early_stop, seed: ms })?;
    let f = &transcript.footer;
    let mut flags: Vec<String> = f.flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
    if f.fault.is_some() {
        flags.push("fault=1".into());
    }
    let row = SummaryRow {
        index: spec.index,
        n: spec.n,
        a: spec.a,
        b: spec.b,
        seed: spec.seed,
        maker: spec.maker.clone(),
        breaker: spec.breaker.clone(),
        winner: f.verdict,
        rounds: f.rounds,
        flags: flags.join(";"),
        violations: f.violations.len(),
    };
    Ok(MatchOutcome { row, transcript })
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub outcomes: Vec<MatchOutcome>,
}

impl SimulationReport {
    pub fn rows(&self) -> impl Iterator<Item = &SummaryRow> {
        self.outcomes.iter().map(|o| &o.row)
    }

    pub fn total_violations(&self) -> usize {
        self.rows().map(|r| r.violations).sum()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in self.rows() {
            w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv emits UTF-8"))
    }
}

/// Runs every match, in parallel or serially; results come back in match order.
pub fn simulate(cfg: &ExperimentConfig, parallel: bool) -> Result<SimulationReport> {
    cfg.validate()?;
    let specs = cfg.matches()?;
    let outcomes: Result<Vec<MatchOutcome>> =
        if parallel { specs.par_iter().map(|s| run_one(cfg, s)).collect() } else { specs.iter().map(|s| run_one(cfg, s)).collect() };
    Ok(SimulationReport { outcomes: outcomes? })
}

/// Writes the CSV summary and per-match transcripts where the config asks for them.
pub fn write_outputs(cfg: &ExperimentConfig, report: &SimulationReport) -> Result<()> {
    if let Some(path) = &cfg.csv {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, report.to_csv()?)?;
    }
    if let Some(dir) = &cfg.transcripts {
        fs::create_dir_all(dir)?;
        for o in &report.outcomes {
            let file = fs::File::create(dir.join(format!("{}_{:04}.jsonl", cfg.name, o.row.index)))?;
            o.transcript.write_jsonl(BufWriter::new(file))?;
        }
    }
    Ok(())
}
