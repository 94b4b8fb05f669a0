//! Aliasing-state detection: the aliasing state list, the per-step verdict,
//! feedback accumulation on fully specific classifiers, recognition of
//! aliasing-state-relevant (ASR) classifiers, and the fitness floor.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use thiserror::Error;

use crate::classifier::ClassifierId;
use crate::condition::Message;
use crate::config::{AliasingDecision, Config};
use crate::population::Population;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectorError {
    #[error("aliasing state list is empty")]
    EmptyList,
}

/// Sensations recognized as aliasing, each with a vote count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasingStateList {
    entries: BTreeMap<Message, u32>,
}

impl AliasingStateList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, state: Message) {
        *self.entries.entry(state).or_insert(0) += 1;
    }

    pub fn num(&self, state: Message) -> Option<u32> {
        self.entries.get(&state).copied()
    }

    pub fn contains(&self, state: Message) -> bool {
        self.entries.contains_key(&state)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Message, u32)> + '_ {
        self.entries.iter().map(|(&s, &n)| (s, n))
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    /// Midpoint of the largest and smallest vote.
    pub fn num_half(&self) -> Result<f64, DetectorError> {
        let max = self
            .entries
            .values()
            .max()
            .ok_or(DetectorError::EmptyList)?;
        let min = self
            .entries
            .values()
            .min()
            .ok_or(DetectorError::EmptyList)?;
        Ok(f64::from(max + min) / 2.0)
    }

    /// Probability that `state` is treated as aliasing.
    pub fn probability(&self, state: Message) -> f64 {
        let Some(num) = self.num(state) else {
            return 0.0;
        };
        let half = self.num_half().unwrap_or(f64::from(num));
        let num = f64::from(num);
        if num >= half {
            1.0
        } else {
            num / half
        }
    }

    pub fn is_aliasing<R: Rng + ?Sized>(
        &self,
        state: Message,
        decision: AliasingDecision,
        rng: &mut R,
    ) -> bool {
        let pr = self.probability(state);
        match decision {
            // threshold rule: strictly above the midpoint
            AliasingDecision::Deterministic => match (self.num(state), self.num_half()) {
                (Some(num), Ok(half)) => f64::from(num) > half,
                _ => false,
            },
            AliasingDecision::Probabilistic => {
                if pr <= 0.0 {
                    false
                } else if pr >= 1.0 {
                    true
                } else {
                    rng.gen::<f64>() < pr
                }
            }
        }
    }

    /// `sensation num` lines, largest vote first.
    pub fn dump(&self) -> String {
        let mut rows: Vec<(Message, u32)> = self.iter().collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        rows.iter().map(|(s, n)| format!("{s} {n}\n")).collect()
    }
}

/// Aliasing verdicts drawn at most once per state per time step.
#[derive(Debug, Clone, Default)]
pub struct VerdictCache {
    verdicts: HashMap<Message, bool>,
}

impl VerdictCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Forgets all verdicts; call at the start of every time step.
    pub fn clear(&mut self) {
        self.verdicts.clear();
    }

    pub fn verdict<R: Rng + ?Sized>(
        &mut self,
        asl: &AliasingStateList,
        state: Message,
        decision: AliasingDecision,
        rng: &mut R,
    ) -> bool {
        *self
            .verdicts
            .entry(state)
            .or_insert_with(|| asl.is_aliasing(state, decision, rng))
    }
}

/// Temporal-difference error between consecutive best predictions.
/// `max_now` is `None` on terminal steps.
pub fn critical_error(r_prev: f64, max_now: Option<f64>, max_prev: f64, gamma: f64) -> f64 {
    r_prev + gamma * max_now.unwrap_or(0.0) - max_prev
}

/// Adds `delta` to the feedback accumulators of the fully specific members.
pub fn update_feedback(pop: &mut Population, aset: &[ClassifierId], delta: f64) {
    for &id in aset {
        if let Some(cl) = pop.get_mut(id) {
            if cl.is_fully_specific() {
                cl.record_feedback(delta);
            }
        }
    }
}

/// Finds ASR classifiers in `aset`, records their states in `asl`, and
/// removes them from the population. Returns how many were removed.
pub fn detect_asr(
    pop: &mut Population,
    aset: &[ClassifierId],
    asl: &mut AliasingStateList,
    cfg: &Config,
    memory_tail: usize,
) -> usize {
    let mut removed = 0;
    for &id in aset {
        let Some(cl) = pop.get(id) else { continue };
        let is_asr = cl.is_fully_specific()
            && cl.experience > cfg.theta_asr
            && cl.stable_feedback() < cfg.tau;
        if !is_asr {
            continue;
        }
        let Some(state) = cl.condition.to_message() else {
            continue;
        };
        match cl.memory {
            None => asl.insert(state),
            Some(part) => {
                if asl.contains(state) {
                    if let Some(mem) = part.condition.to_message() {
                        asl.insert(mem.truncate_tail(memory_tail));
                    }
                }
            }
        }
        pop.remove(id);
        removed += 1;
    }
    removed
}

/// Raises fully specific members whose per-copy fitness is below the
/// population's mean per-copy fitness up to that mean.
pub fn apply_fitness_floor(pop: &mut Population, aset: &[ClassifierId]) {
    let mean = pop.mean_micro_fitness();
    for &id in aset {
        if let Some(cl) = pop.get_mut(id) {
            let n = f64::from(cl.numerosity);
            if cl.is_fully_specific() && cl.fitness / n < mean {
                cl.fitness = (mean * n).min(1.0);
            }
        }
    }
}
