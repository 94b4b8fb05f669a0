//! Classifiers of both kinds: memoryless (`mp = -1`) and memory-condition
//! classifiers whose extra condition reads one element of the memory list.

use std::fmt;

use crate::condition::{Condition, Message};
use crate::config::Config;
use crate::maze::Direction;
use crate::memory::MemoryList;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassifierId(pub u64);

/// Memory condition plus the memory-list index it reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MemoryPart {
    pub condition: Condition,
    pub pointer: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classifier {
    pub id: ClassifierId,
    pub memory: Option<MemoryPart>,
    pub condition: Condition,
    pub action: Direction,
    pub prediction: f64,
    pub error: f64,
    /// Macroclassifier fitness (sums over the `numerosity` copies).
    pub fitness: f64,
    pub experience: u32,
    pub timestamp: u64,
    pub as_est: f64,
    pub numerosity: u32,
    pub fb_pos: f64,
    pub fb_neg: f64,
}

impl Classifier {
    /// A fresh classifier with the configured initial parameters.
    pub fn new(
        id: ClassifierId,
        memory: Option<MemoryPart>,
        condition: Condition,
        action: Direction,
        time: u64,
        cfg: &Config,
    ) -> Self {
        Self {
            id,
            memory,
            condition,
            action,
            prediction: cfg.p_init,
            error: cfg.eps_init,
            fitness: cfg.f_init,
            experience: 0,
            timestamp: time,
            as_est: 1.0,
            numerosity: 1,
            fb_pos: 0.0,
            fb_neg: 0.0,
        }
    }

    /// Memory pointer, `-1` for memoryless classifiers.
    pub fn mp(&self) -> i32 {
        self.memory.map_or(-1, |m| m.pointer as i32)
    }

    pub fn is_memory(&self) -> bool {
        self.memory.is_some()
    }

    /// Matches the current sensation and, for memory classifiers, the
    /// memory element at the pointer.
    pub fn matches(&self, sensation: Message, ml: &MemoryList) -> bool {
        if !self.condition.matches_unchecked(sensation) {
            return false;
        }
        match self.memory {
            None => true,
            Some(part) => ml
                .get(part.pointer)
                .is_some_and(|elem| part.condition.matches_unchecked(elem)),
        }
    }

    /// Fraction of non-`#` symbols over all conditions.
    pub fn specificity(&self) -> f64 {
        let (spec, len) = self.spec_counts();
        spec as f64 / len as f64
    }

    pub fn is_fully_specific(&self) -> bool {
        let (spec, len) = self.spec_counts();
        spec == len
    }

    fn spec_counts(&self) -> (usize, usize) {
        let mut spec = self.condition.specified();
        let mut len = self.condition.len();
        if let Some(m) = self.memory {
            spec += m.condition.specified();
            len += m.condition.len();
        }
        (spec, len)
    }

    fn dont_cares(&self) -> usize {
        let (spec, len) = self.spec_counts();
        len - spec
    }

    /// Same rule: identical conditions, action and pointer.
    pub fn same_rule(&self, other: &Classifier) -> bool {
        self.condition == other.condition
            && self.action == other.action
            && self.memory == other.memory
    }

    /// Accuracy kappa.
    pub fn accuracy(&self, cfg: &Config) -> f64 {
        accuracy(self.error, cfg)
    }

    /// Stable feedback value; untouched accumulators read as fully stable.
    pub fn stable_feedback(&self) -> f64 {
        stable_feedback(self.fb_pos, self.fb_neg)
    }

    /// Accumulates one critical error.
    pub fn record_feedback(&mut self, delta: f64) {
        if delta > 0.0 {
            self.fb_pos += delta;
        } else if delta < 0.0 {
            self.fb_neg -= delta;
        }
    }

    pub fn could_subsume(&self, cfg: &Config) -> bool {
        self.experience > cfg.theta_sub && self.error < cfg.epsilon0
    }

    /// Every input matched by `other` is matched by `self`, within the same
    /// classifier kind and pointer.
    pub fn is_more_general_or_equal(&self, other: &Classifier) -> bool {
        let memory_ok = match (self.memory, other.memory) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                a.pointer == b.pointer && a.condition.is_more_general_or_equal(b.condition)
            }
            _ => false,
        };
        memory_ok && self.condition.is_more_general_or_equal(other.condition)
    }

    /// Strictly more general (more `#` symbols) and covering `other`.
    pub fn is_strictly_more_general(&self, other: &Classifier) -> bool {
        self.dont_cares() > other.dont_cares() && self.is_more_general_or_equal(other)
    }

    pub fn subsumes(&self, specific: &Classifier, cfg: &Config) -> bool {
        self.action == specific.action
            && self.could_subsume(cfg)
            && self.is_more_general_or_equal(specific)
    }

    /// Population dump line: `mp | m | c | a | p | eps | F | exp | num | as_est | v`.
    pub fn dump_line(&self) -> String {
        let m = self
            .memory
            .map_or_else(|| "-".to_string(), |m| m.condition.to_string());
        format!(
            "{} | {} | {} | {} | {:.4} | {:.4} | {:.6} | {} | {} | {:.3} | {:.4}",
            self.mp(),
            m,
            self.condition,
            self.action.index(),
            self.prediction,
            self.error,
            self.fitness,
            self.experience,
            self.numerosity,
            self.as_est,
            self.stable_feedback()
        )
    }
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump_line())
    }
}

/// Accuracy from prediction error.
pub fn accuracy(error: f64, cfg: &Config) -> f64 {
    if error < cfg.epsilon0 {
        1.0
    } else {
        cfg.alpha * (error / cfg.epsilon0).powf(-cfg.nu)
    }
}

/// Normalized imbalance of positive and negative feedback.
pub fn stable_feedback(fb_pos: f64, fb_neg: f64) -> f64 {
    let total = fb_pos + fb_neg;
    if total > 0.0 {
        (fb_pos - fb_neg).abs() / total
    } else {
        1.0
    }
}
