//! Trials, experiments, aggregation over seeds, and CSV/manifest output.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::classifier::ClassifierId;
use crate::condition::Message;
use crate::config::{Config, ConfigError};
use crate::detector::{critical_error, detect_asr, update_feedback, VerdictCache};
use crate::engine::{select_action, Engine, EngineError, StepContext};
use crate::maze::{Maze, MazeError, Pos};
use crate::memory::{sensation_message, MemoryList};

/// Width of the performance moving average, in exploit problems.
pub const WINDOW: usize = 50;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Maze(#[from] MazeError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Seeded generator used for every run.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// What a single problem is allowed to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemMode {
    pub explore: bool,
    pub ga: bool,
    pub detect: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub steps: usize,
    pub reached_food: bool,
    pub ga_events: usize,
}

struct PrevStep {
    aset: Vec<ClassifierId>,
    reward: f64,
    max_pa: f64,
}

/// A learner plus its per-trial memory list.
#[derive(Debug, Clone)]
pub struct Agent {
    pub engine: Engine,
    pub memory: MemoryList,
    verdicts: VerdictCache,
}

impl Agent {
    pub fn new(cfg: Config) -> Self {
        let memory = MemoryList::with_actions(cfg.memory_size, cfg.memory_includes_action);
        Self {
            engine: Engine::new(cfg),
            memory,
            verdicts: VerdictCache::new(),
        }
    }

    pub fn cfg(&self) -> &Config {
        &self.engine.cfg
    }

    /// Runs one problem from `start` until food or the step cap.
    pub fn run_trial<R: Rng + ?Sized>(
        &mut self,
        maze: &Maze,
        start: Pos,
        mode: ProblemMode,
        rng: &mut R,
    ) -> Result<TrialOutcome, HarnessError> {
        let cfg = self.engine.cfg.clone();
        let memory_on = cfg.uses_memory();
        let detect = mode.detect && memory_on;
        let tail = self.engine.memory_tail_bits();
        self.memory.reset();
        let p_random = if !mode.explore {
            0.0
        } else if cfg.ps_per_problem {
            if rng.gen_bool(cfg.p_s) {
                1.0
            } else {
                0.0
            }
        } else {
            cfg.p_s
        };

        let mut pos = start;
        let mut sensation = sensation_message(maze.sense(pos)?);
        let mut prev: Option<PrevStep> = None;
        let mut ga_events = 0;
        for step in 1..=cfg.mes {
            self.engine.time += 1;
            self.verdicts.clear();
            let aliased = memory_on
                && self
                    .verdicts
                    .verdict(&self.engine.asl, sensation, cfg.aliasing_decision, rng);
            let ctx = StepContext {
                sensation,
                memory: &self.memory,
                use_memory: aliased && !self.memory.is_empty(),
            };
            let mset = self.engine.match_set(&ctx, &mut self.verdicts, rng);
            let pa = self.engine.prediction_array(&mset);
            let action = select_action(&pa, p_random, rng)?;
            let aset = self.engine.action_set(&mset, action);
            let max_now = pa.max().unwrap_or(0.0);
            let outcome = maze.step(pos, action, cfg.food_reward);

            if let Some(p) = prev.take() {
                let payoff = p.reward + cfg.gamma * max_now;
                self.engine.update_action_set(&p.aset, payoff, detect);
                if detect {
                    let delta = critical_error(p.reward, Some(max_now), p.max_pa, cfg.gamma);
                    update_feedback(&mut self.engine.pop, &p.aset, delta);
                    detect_asr(
                        &mut self.engine.pop,
                        &p.aset,
                        &mut self.engine.asl,
                        &cfg,
                        tail,
                    );
                }
                if mode.ga && self.engine.run_ga(&p.aset, rng) {
                    ga_events += 1;
                }
            }
            if detect {
                self.engine
                    .action_set_covering(&aset, action, &ctx, &mut self.verdicts, rng);
            }

            if outcome.at_food {
                self.engine.update_action_set(&aset, outcome.reward, detect);
                if detect {
                    let delta = critical_error(outcome.reward, None, max_now, cfg.gamma);
                    update_feedback(&mut self.engine.pop, &aset, delta);
                    detect_asr(
                        &mut self.engine.pop,
                        &aset,
                        &mut self.engine.asl,
                        &cfg,
                        tail,
                    );
                }
                if mode.ga && self.engine.run_ga(&aset, rng) {
                    ga_events += 1;
                }
                return Ok(TrialOutcome {
                    steps: step,
                    reached_food: true,
                    ga_events,
                });
            }

            prev = Some(PrevStep {
                aset,
                reward: outcome.reward,
                max_pa: max_now,
            });
            let next = sensation_message(maze.sense(outcome.pos)?);
            if memory_on {
                self.memory
                    .update_with_action(sensation, Some(action), next);
            }
            sensation = next;
            pos = outcome.pos;
        }
        Ok(TrialOutcome {
            steps: cfg.mes,
            reached_food: false,
            ga_events,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExploitRecord {
    /// Index among exploit problems, from 0.
    pub index: usize,
    /// Index among all problems, from 0.
    pub problem: usize,
    pub steps: usize,
    pub moving_avg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerfSeries {
    pub run: usize,
    pub seed: u64,
    pub records: Vec<ExploitRecord>,
    /// Mean steps over the final exploit-only phase.
    pub final_mean: f64,
    pub problems_run: usize,
    pub ga_events_learning: usize,
    pub ga_events_final: usize,
    pub asl: Vec<(Message, u32)>,
    pub population_dump: String,
    pub population_size: usize,
}

/// Runs the full explore/exploit protocol once.
pub fn run_experiment(maze: &Maze, cfg: &Config, run: usize) -> Result<PerfSeries, HarnessError> {
    cfg.validate()?;
    let seed = cfg.seed.wrapping_add(run as u64);
    let mut rng = seeded_rng(seed);
    let mut agent = Agent::new(cfg.clone());
    let mut window: VecDeque<usize> = VecDeque::with_capacity(WINDOW);
    let mut window_sum = 0usize;
    let mut records = Vec::new();
    let (mut final_sum, mut final_count) = (0usize, 0usize);
    let (mut ga_learning, mut ga_final) = (0, 0);

    for problem in 0..cfg.total_problems() {
        let learning = problem < cfg.learning_problems;
        let explore = learning && problem % 2 == 0;
        let mode = ProblemMode {
            explore,
            ga: learning && (explore || cfg.ga_in_exploit),
            detect: problem < cfg.detection_until_problem.min(cfg.learning_problems),
        };
        let start = maze.random_empty_cell(&mut rng);
        let out = agent.run_trial(maze, start, mode, &mut rng)?;
        if learning {
            ga_learning += out.ga_events;
        } else {
            ga_final += out.ga_events;
        }
        if explore {
            continue;
        }
        window.push_back(out.steps);
        window_sum += out.steps;
        if window.len() > WINDOW {
            window_sum -= window.pop_front().unwrap_or(0);
        }
        records.push(ExploitRecord {
            index: records.len(),
            problem,
            steps: out.steps,
            moving_avg: window_sum as f64 / window.len() as f64,
        });
        if !learning {
            final_sum += out.steps;
            final_count += 1;
        }
    }
    let final_mean = if final_count > 0 {
        final_sum as f64 / final_count as f64
    } else {
        records.last().map_or(f64::NAN, |r| r.moving_avg)
    };
    Ok(PerfSeries {
        run,
        seed,
        records,
        final_mean,
        problems_run: cfg.total_problems(),
        ga_events_learning: ga_learning,
        ga_events_final: ga_final,
        asl: agent.engine.asl.iter().collect(),
        population_dump: agent.engine.pop.dump(),
        population_size: agent.engine.pop.len(),
    })
}

/// Runs `cfg.runs` seeds in parallel on the current rayon pool.
pub fn run_many(maze: &Maze, cfg: &Config) -> Result<Vec<PerfSeries>, HarnessError> {
    (0..cfg.runs)
        .into_par_iter()
        .map(|r| run_experiment(maze, cfg, r))
        .collect()
}

/// Mean and standard error of the mean (sample standard deviation).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub index: usize,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateStat {
    pub state: Message,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub runs: usize,
    /// Pointwise moving-average curve across runs.
    pub curve: Vec<CurvePoint>,
    pub final_mean: f64,
    pub final_stderr: f64,
    /// Aliasing-list votes per state; a state missing from a run counts 0.
    pub asl: Vec<StateStat>,
}

impl Summary {
    pub fn asl_mean(&self, state: Message) -> f64 {
        self.asl
            .iter()
            .find(|s| s.state == state)
            .map_or(0.0, |s| s.mean)
    }
}

pub fn aggregate_runs(series: &[PerfSeries]) -> Summary {
    let len = series.iter().map(|s| s.records.len()).min().unwrap_or(0);
    let curve = (0..len)
        .map(|i| {
            let vals: Vec<f64> = series.iter().map(|s| s.records[i].moving_avg).collect();
            let (mean, stderr) = mean_stderr(&vals);
            CurvePoint {
                index: i,
                mean,
                stderr,
            }
        })
        .collect();
    let finals: Vec<f64> = series.iter().map(|s| s.final_mean).collect();
    let (final_mean, final_stderr) = mean_stderr(&finals);
    let mut states: BTreeMap<Message, Vec<f64>> = BTreeMap::new();
    for s in series {
        for &(state, _) in &s.asl {
            states.entry(state).or_default();
        }
    }
    for (state, vals) in states.iter_mut() {
        for s in series {
            let n = s
                .asl
                .iter()
                .find(|(m, _)| m == state)
                .map_or(0, |&(_, n)| n);
            vals.push(f64::from(n));
        }
    }
    let mut asl: Vec<StateStat> = states
        .into_iter()
        .map(|(state, vals)| {
            let (mean, stderr) = mean_stderr(&vals);
            StateStat {
                state,
                mean,
                stderr,
            }
        })
        .collect();
    asl.sort_by(|a, b| b.mean.total_cmp(&a.mean).then(a.state.cmp(&b.state)));
    Summary {
        runs: series.len(),
        curve,
        final_mean,
        final_stderr,
        asl,
    }
}

/// Per-run curve: `exploit_problem_index,raw_steps,moving_avg_50`.
pub fn curve_csv(series: &PerfSeries) -> String {
    let mut out = String::from("exploit_problem_index,raw_steps,moving_avg_50\n");
    for r in &series.records {
        let _ = writeln!(out, "{},{},{:.6}", r.index, r.steps, r.moving_avg);
    }
    out
}

/// Aggregated curve: `exploit_problem_index,mean,stderr`.
pub fn summary_curve_csv(summary: &Summary) -> String {
    let mut out = String::from("exploit_problem_index,mean,stderr\n");
    for p in &summary.curve {
        let _ = writeln!(out, "{},{:.6},{:.6}", p.index, p.mean, p.stderr);
    }
    out
}

/// Aliasing list of every run: `sensation,num,run`.
pub fn asl_csv(series: &[PerfSeries]) -> String {
    let mut out = String::from("sensation,num,run\n");
    for s in series {
        let mut rows = s.asl.clone();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for (state, num) in rows {
            let _ = writeln!(out, "{state},{num},{}", s.run);
        }
    }
    out
}

/// Aggregated aliasing list: `sensation,mean_num,stderr`.
pub fn summary_asl_csv(summary: &Summary) -> String {
    let mut out = String::from("sensation,mean_num,stderr\n");
    for s in &summary.asl {
        let _ = writeln!(out, "{},{:.6},{:.6}", s.state, s.mean, s.stderr);
    }
    out
}

/// Flat `key = value` record of a run batch.
pub fn manifest(cfg: &Config, maze_name: &str, wall_seconds: f64, summary: &Summary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "maze = {maze_name}");
    out.push_str(&cfg.to_text());
    let seeds: Vec<String> = (0..cfg.runs)
        .map(|r| cfg.seed.wrapping_add(r as u64).to_string())
        .collect();
    let _ = writeln!(out, "run_seeds = {}", seeds.join(","));
    let _ = writeln!(out, "rng = ChaCha8");
    let _ = writeln!(out, "final_mean = {:.6}", summary.final_mean);
    let _ = writeln!(out, "final_stderr = {:.6}", summary.final_stderr);
    let _ = writeln!(out, "wall_seconds = {wall_seconds:.3}");
    out
}
