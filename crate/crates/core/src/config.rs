//! Experiment parameters and the flat `key = value` config format.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("invalid value {value:?} for {key}")]
    BadValue { key: String, value: String },
    #[error("{0}")]
    OutOfRange(String),
}

/// Which learner runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Memory list, memory classifiers and aliasing detection.
    Xcsmd,
    /// Plain XCS: no memory and no detection.
    Xcs,
}

impl FromStr for Mode {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "xcsmd" => Ok(Mode::Xcsmd),
            "xcs" => Ok(Mode::Xcs),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Xcsmd => "xcsmd",
            Mode::Xcs => "xcs",
        })
    }
}

/// How a state's aliasing verdict is drawn from the aliasing state list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AliasingDecision {
    /// Random draw with a probability that grows with the state's vote.
    Probabilistic,
    /// Aliasing iff the vote reaches the midpoint of the list's range.
    Deterministic,
}

impl FromStr for AliasingDecision {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "probabilistic" => Ok(Self::Probabilistic),
            "deterministic" => Ok(Self::Deterministic),
            _ => Err(()),
        }
    }
}

impl fmt::Display for AliasingDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Probabilistic => "probabilistic",
            Self::Deterministic => "deterministic",
        })
    }
}

/// Memory-covering choice when every remembered state looks aliased.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemoryFallback {
    /// Element with the smallest vote, lowest index on ties.
    MinNum,
    /// Roulette with weights inversely proportional to the vote.
    Roulette,
}

impl FromStr for MemoryFallback {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "min_num" => Ok(Self::MinNum),
            "roulette" => Ok(Self::Roulette),
            _ => Err(()),
        }
    }
}

impl fmt::Display for MemoryFallback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MinNum => "min_num",
            Self::Roulette => "roulette",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub mode: Mode,
    /// Population cap in microclassifiers.
    pub n: usize,
    pub learning_problems: usize,
    pub final_exploit_problems: usize,
    /// Step cap per problem.
    pub mes: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub epsilon0: f64,
    pub nu: f64,
    pub theta_ga: f64,
    pub chi: f64,
    pub mu: f64,
    pub delta: f64,
    pub theta_del: u32,
    pub theta_sub: u32,
    pub theta_mna: usize,
    pub p_init: f64,
    pub f_init: f64,
    pub eps_init: f64,
    /// Probability of a random action in explore problems.
    pub p_s: f64,
    pub p_hash: f64,
    pub theta_asr: u32,
    pub tau: f64,
    pub theta_ascover: u32,
    /// Memory list capacity.
    pub memory_size: usize,
    pub food_reward: f64,
    pub ga_subsumption: bool,
    pub as_subsumption: bool,
    /// Detection routines run for problems with index below this.
    pub detection_until_problem: usize,
    pub memory_includes_action: bool,
    /// Draw the explore/greedy choice once per problem instead of per step.
    pub ps_per_problem: bool,
    /// Also run the GA in learning-phase exploit problems.
    pub ga_in_exploit: bool,
    pub aliasing_decision: AliasingDecision,
    pub memory_fallback: MemoryFallback,
    pub seed: u64,
    pub runs: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            mode: Mode::Xcsmd,
            n: 800,
            learning_problems: 6500,
            final_exploit_problems: 2500,
            mes: 100,
            alpha: 0.1,
            beta: 0.2,
            gamma: 0.71,
            epsilon0: 5.0,
            nu: 5.0,
            theta_ga: 25.0,
            chi: 0.8,
            mu: 0.01,
            delta: 0.1,
            theta_del: 25,
            theta_sub: 35,
            theta_mna: 8,
            p_init: 10.0,
            f_init: 0.01,
            eps_init: 0.0,
            p_s: 0.5,
            p_hash: 0.3,
            theta_asr: 30,
            tau: 0.4,
            theta_ascover: 20,
            memory_size: 5,
            food_reward: 1000.0,
            ga_subsumption: true,
            as_subsumption: false,
            detection_until_problem: 6500,
            memory_includes_action: false,
            ps_per_problem: false,
            ga_in_exploit: false,
            aliasing_decision: AliasingDecision::Probabilistic,
            memory_fallback: MemoryFallback::MinNum,
            seed: 1,
            runs: 10,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl Config {
    /// Every recognized key, in manifest order.
    pub const KEYS: &'static [&'static str] = &[
        "mode",
        "n",
        "learning_problems",
        "final_exploit_problems",
        "mes",
        "alpha",
        "beta",
        "gamma",
        "epsilon0",
        "nu",
        "theta_ga",
        "chi",
        "mu",
        "delta",
        "theta_del",
        "theta_sub",
        "theta_mna",
        "p_init",
        "f_init",
        "eps_init",
        "p_s",
        "p_hash",
        "theta_asr",
        "tau",
        "theta_ascover",
        "memory_size",
        "food_reward",
        "ga_subsumption",
        "as_subsumption",
        "detection_until_problem",
        "memory_includes_action",
        "ps_per_problem",
        "ga_in_exploit",
        "aliasing_decision",
        "memory_fallback",
        "seed",
        "runs",
    ];

    /// Plain XCS with the given step cap.
    pub fn xcs_baseline(mes: usize) -> Self {
        Self {
            mode: Mode::Xcs,
            mes,
            ..Self::default()
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "mode" => self.mode = parse(key, v)?,
            "n" => self.n = parse(key, v)?,
            "learning_problems" => self.learning_problems = parse(key, v)?,
            "final_exploit_problems" => self.final_exploit_problems = parse(key, v)?,
            "mes" => self.mes = parse(key, v)?,
            "alpha" => self.alpha = parse(key, v)?,
            "beta" => self.beta = parse(key, v)?,
            "gamma" => self.gamma = parse(key, v)?,
            "epsilon0" => self.epsilon0 = parse(key, v)?,
            "nu" => self.nu = parse(key, v)?,
            "theta_ga" => self.theta_ga = parse(key, v)?,
            "chi" => self.chi = parse(key, v)?,
            "mu" => self.mu = parse(key, v)?,
            "delta" => self.delta = parse(key, v)?,
            "theta_del" => self.theta_del = parse(key, v)?,
            "theta_sub" => self.theta_sub = parse(key, v)?,
            "theta_mna" => self.theta_mna = parse(key, v)?,
            "p_init" => self.p_init = parse(key, v)?,
            "f_init" => self.f_init = parse(key, v)?,
            "eps_init" => self.eps_init = parse(key, v)?,
            "p_s" => self.p_s = parse(key, v)?,
            "p_hash" => self.p_hash = parse(key, v)?,
            "theta_asr" => self.theta_asr = parse(key, v)?,
            "tau" => self.tau = parse(key, v)?,
            "theta_ascover" => self.theta_ascover = parse(key, v)?,
            "memory_size" => self.memory_size = parse(key, v)?,
            "food_reward" => self.food_reward = parse(key, v)?,
            "ga_subsumption" => self.ga_subsumption = parse(key, v)?,
            "as_subsumption" => self.as_subsumption = parse(key, v)?,
            "detection_until_problem" => self.detection_until_problem = parse(key, v)?,
            "memory_includes_action" => self.memory_includes_action = parse(key, v)?,
            "ps_per_problem" => self.ps_per_problem = parse(key, v)?,
            "ga_in_exploit" => self.ga_in_exploit = parse(key, v)?,
            "aliasing_decision" => self.aliasing_decision = parse(key, v)?,
            "memory_fallback" => self.memory_fallback = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "runs" => self.runs = parse(key, v)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "mode" => self.mode.to_string(),
            "n" => self.n.to_string(),
            "learning_problems" => self.learning_problems.to_string(),
            "final_exploit_problems" => self.final_exploit_problems.to_string(),
            "mes" => self.mes.to_string(),
            "alpha" => self.alpha.to_string(),
            "beta" => self.beta.to_string(),
            "gamma" => self.gamma.to_string(),
            "epsilon0" => self.epsilon0.to_string(),
            "nu" => self.nu.to_string(),
            "theta_ga" => self.theta_ga.to_string(),
            "chi" => self.chi.to_string(),
            "mu" => self.mu.to_string(),
            "delta" => self.delta.to_string(),
            "theta_del" => self.theta_del.to_string(),
            "theta_sub" => self.theta_sub.to_string(),
            "theta_mna" => self.theta_mna.to_string(),
            "p_init" => self.p_init.to_string(),
            "f_init" => self.f_init.to_string(),
            "eps_init" => self.eps_init.to_string(),
            "p_s" => self.p_s.to_string(),
            "p_hash" => self.p_hash.to_string(),
            "theta_asr" => self.theta_asr.to_string(),
            "tau" => self.tau.to_string(),
            "theta_ascover" => self.theta_ascover.to_string(),
            "memory_size" => self.memory_size.to_string(),
            "food_reward" => self.food_reward.to_string(),
            "ga_subsumption" => self.ga_subsumption.to_string(),
            "as_subsumption" => self.as_subsumption.to_string(),
            "detection_until_problem" => self.detection_until_problem.to_string(),
            "memory_includes_action" => self.memory_includes_action.to_string(),
            "ps_per_problem" => self.ps_per_problem.to_string(),
            "ga_in_exploit" => self.ga_in_exploit.to_string(),
            "aliasing_decision" => self.aliasing_decision.to_string(),
            "memory_fallback" => self.memory_fallback.to_string(),
            "seed" => self.seed.to_string(),
            "runs" => self.runs.to_string(),
            _ => return None,
        })
    }

    /// Applies a config file body on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Flat `key = value` dump that [`Config::from_text`] reads back.
    pub fn to_text(&self) -> String {
        Self::KEYS
            .iter()
            .map(|k| format!("{k} = {}\n", self.get(k).unwrap_or_default()))
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let unit = [
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("chi", self.chi),
            ("mu", self.mu),
            ("delta", self.delta),
            ("p_s", self.p_s),
            ("p_hash", self.p_hash),
        ];
        for (name, v) in unit {
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::OutOfRange(format!(
                    "{name} must lie in [0, 1]"
                )));
            }
        }
        let nonneg = [
            ("alpha", self.alpha),
            ("epsilon0", self.epsilon0),
            ("nu", self.nu),
            ("theta_ga", self.theta_ga),
            ("p_init", self.p_init),
            ("f_init", self.f_init),
            ("eps_init", self.eps_init),
            ("tau", self.tau),
            ("food_reward", self.food_reward),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ConfigError::OutOfRange(format!(
                    "{name} must be finite and >= 0"
                )));
            }
        }
        if self.n == 0 {
            return Err(ConfigError::OutOfRange("n must be positive".into()));
        }
        if self.mes == 0 {
            return Err(ConfigError::OutOfRange("mes must be positive".into()));
        }
        if self.memory_size == 0 {
            return Err(ConfigError::OutOfRange(
                "memory_size must be positive".into(),
            ));
        }
        if self.theta_mna > 8 {
            return Err(ConfigError::OutOfRange(
                "theta_mna cannot exceed 8 actions".into(),
            ));
        }
        if self.f_init <= 0.0 || self.f_init > 1.0 {
            return Err(ConfigError::OutOfRange("f_init must lie in (0, 1]".into()));
        }
        if self.runs == 0 {
            return Err(ConfigError::OutOfRange("runs must be positive".into()));
        }
        Ok(())
    }

    pub fn uses_memory(&self) -> bool {
        self.mode == Mode::Xcsmd
    }

    /// Total problems in one run.
    pub fn total_problems(&self) -> usize {
        self.learning_problems + self.final_exploit_problems
    }
}
