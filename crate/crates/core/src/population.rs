//! Macroclassifier storage with id lookup, merging insertion, and
//! roulette deletion.

use std::collections::HashMap;

use rand::Rng;

use crate::classifier::{Classifier, ClassifierId};
use crate::config::Config;

#[derive(Debug, Clone, Default)]
pub struct Population {
    classifiers: Vec<Classifier>,
    index: HashMap<ClassifierId, usize>,
    next_id: u64,
    micro: u64,
}

impl Population {
    pub fn new() -> Self {
        Self::default()
    }

    /// A fresh, never used id.
    pub fn next_id(&mut self) -> ClassifierId {
        self.next_id += 1;
        ClassifierId(self.next_id)
    }

    /// Number of macroclassifiers.
    pub fn len(&self) -> usize {
        self.classifiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classifiers.is_empty()
    }

    /// Sum of numerosities.
    pub fn micro_count(&self) -> u64 {
        self.micro
    }

    pub fn iter(&self) -> impl Iterator<Item = &Classifier> {
        self.classifiers.iter()
    }

    pub fn as_slice(&self) -> &[Classifier] {
        &self.classifiers
    }

    pub fn get(&self, id: ClassifierId) -> Option<&Classifier> {
        self.index.get(&id).map(|&i| &self.classifiers[i])
    }

    pub fn get_mut(&mut self, id: ClassifierId) -> Option<&mut Classifier> {
        self.index.get(&id).map(|&i| &mut self.classifiers[i])
    }

    /// Adds `cl`, merging into an identical rule if one exists. Returns the
    /// id of the macroclassifier that now holds it.
    pub fn insert(&mut self, cl: Classifier) -> ClassifierId {
        self.micro += u64::from(cl.numerosity);
        if let Some(existing) = self.classifiers.iter_mut().find(|c| c.same_rule(&cl)) {
            existing.numerosity += cl.numerosity;
            return existing.id;
        }
        let id = cl.id;
        self.index.insert(id, self.classifiers.len());
        self.classifiers.push(cl);
        id
    }

    /// Adds one copy to an existing macroclassifier.
    pub fn increment(&mut self, id: ClassifierId) -> bool {
        match self.get_mut(id) {
            Some(cl) => {
                cl.numerosity += 1;
                self.micro += 1;
                true
            }
            None => false,
        }
    }

    /// Moves all copies of `victim` into `keeper`.
    pub fn absorb(&mut self, keeper: ClassifierId, victim: ClassifierId) -> bool {
        if keeper == victim || self.get(keeper).is_none() {
            return false;
        }
        let Some(gone) = self.remove(victim) else {
            return false;
        };
        self.micro += u64::from(gone.numerosity);
        if let Some(k) = self.get_mut(keeper) {
            k.numerosity += gone.numerosity;
        }
        true
    }

    /// Removes the whole macroclassifier.
    pub fn remove(&mut self, id: ClassifierId) -> Option<Classifier> {
        let i = self.index.remove(&id)?;
        let cl = self.classifiers.swap_remove(i);
        if let Some(moved) = self.classifiers.get(i) {
            self.index.insert(moved.id, i);
        }
        self.micro -= u64::from(cl.numerosity);
        Some(cl)
    }

    /// Mean fitness per microclassifier.
    pub fn mean_micro_fitness(&self) -> f64 {
        if self.micro == 0 {
            return 0.0;
        }
        self.classifiers.iter().map(|c| c.fitness).sum::<f64>() / self.micro as f64
    }

    /// Deletion vote of one macroclassifier.
    pub fn deletion_vote(cl: &Classifier, mean_fitness: f64, cfg: &Config) -> f64 {
        let num = f64::from(cl.numerosity);
        let vote = cl.as_est * num;
        let micro_fitness = cl.fitness / num;
        if cl.experience > cfg.theta_del && micro_fitness < cfg.delta * mean_fitness {
            vote * mean_fitness / micro_fitness.max(f64::MIN_POSITIVE)
        } else {
            vote
        }
    }

    /// Removes one microclassifier chosen by roulette over deletion votes.
    /// Returns the id of the affected macroclassifier.
    pub fn delete_one<R: Rng + ?Sized>(
        &mut self,
        cfg: &Config,
        rng: &mut R,
    ) -> Option<ClassifierId> {
        if self.classifiers.is_empty() {
            return None;
        }
        let mean = self.mean_micro_fitness();
        let votes: Vec<f64> = self
            .classifiers
            .iter()
            .map(|c| Self::deletion_vote(c, mean, cfg))
            .collect();
        let total: f64 = votes.iter().sum();
        let mut i = votes.len() - 1;
        if total > 0.0 {
            let mut pick = rng.gen::<f64>() * total;
            for (k, v) in votes.iter().enumerate() {
                if pick < *v {
                    i = k;
                    break;
                }
                pick -= v;
            }
        } else {
            i = rng.gen_range(0..votes.len());
        }
        let id = self.classifiers[i].id;
        if self.classifiers[i].numerosity > 1 {
            self.classifiers[i].numerosity -= 1;
            self.micro -= 1;
        } else {
            self.remove(id);
        }
        Some(id)
    }

    /// Deletes until the micro count fits the cap.
    pub fn enforce_capacity<R: Rng + ?Sized>(&mut self, cfg: &Config, rng: &mut R) {
        while self.micro > cfg.n as u64 {
            if self.delete_one(cfg, rng).is_none() {
                break;
            }
        }
    }

    /// Keeps the cached micro count honest; used by tests.
    pub fn recount(&self) -> u64 {
        self.classifiers
            .iter()
            .map(|c| u64::from(c.numerosity))
            .sum()
    }

    /// One dump line per macroclassifier.
    pub fn dump(&self) -> String {
        let mut out = String::from("mp | m | c | a | p | eps | F | exp | num | as_est | v\n");
        for cl in &self.classifiers {
            out.push_str(&cl.dump_line());
            out.push('\n');
        }
        out
    }
}
