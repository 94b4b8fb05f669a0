//! The learning core: match sets with covering, the prediction array,
//! action selection, reinforcement updates, the niche GA, subsumption, and
//! the detector's action-set covering.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::classifier::{accuracy, Classifier, ClassifierId, MemoryPart};
use crate::condition::{Condition, Message};
use crate::config::Config;
use crate::detector::{apply_fitness_floor, AliasingStateList, VerdictCache};
use crate::maze::Direction;
use crate::memory::{choose_pointer, MemoryList, ACTION_BITS};
use crate::population::Population;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("prediction array has no defined entry")]
    EmptyPredictionArray,
}

/// Fitness-weighted mean prediction per action; `None` where no classifier
/// advocates the action.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PredictionArray([Option<f64>; Direction::COUNT]);

impl PredictionArray {
    pub fn from_entries(entries: [Option<f64>; Direction::COUNT]) -> Self {
        Self(entries)
    }

    /// Builds the array from (action, prediction, fitness) triples.
    pub fn from_advocates<'a>(advocates: impl IntoIterator<Item = &'a Classifier>) -> Self {
        let mut num = [0.0f64; Direction::COUNT];
        let mut den = [0.0f64; Direction::COUNT];
        let mut plain = [0.0f64; Direction::COUNT];
        let mut count = [0u32; Direction::COUNT];
        for cl in advocates {
            let a = cl.action.index();
            num[a] += cl.prediction * cl.fitness;
            den[a] += cl.fitness;
            plain[a] += cl.prediction;
            count[a] += 1;
        }
        let mut out = [None; Direction::COUNT];
        for a in 0..Direction::COUNT {
            if count[a] > 0 {
                out[a] = Some(if den[a] > 0.0 {
                    num[a] / den[a]
                } else {
                    plain[a] / f64::from(count[a])
                });
            }
        }
        Self(out)
    }

    pub fn get(&self, action: Direction) -> Option<f64> {
        self.0[action.index()]
    }

    pub fn actions(&self) -> impl Iterator<Item = Direction> + '_ {
        Direction::ALL
            .into_iter()
            .filter(|a| self.0[a.index()].is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(Option::is_none)
    }

    /// Best action, lowest index on ties.
    pub fn best_action(&self) -> Option<Direction> {
        let mut best: Option<(Direction, f64)> = None;
        for a in self.actions() {
            let v = self.0[a.index()].unwrap_or(f64::NEG_INFINITY);
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((a, v));
            }
        }
        best.map(|(a, _)| a)
    }

    pub fn max(&self) -> Option<f64> {
        self.best_action().and_then(|a| self.get(a))
    }
}

/// Greedy choice, or with probability `p_random` a uniform choice among the
/// advocated actions.
pub fn select_action<R: Rng + ?Sized>(
    pa: &PredictionArray,
    p_random: f64,
    rng: &mut R,
) -> Result<Direction, EngineError> {
    if pa.is_empty() {
        return Err(EngineError::EmptyPredictionArray);
    }
    if p_random > 0.0 && rng.gen_bool(p_random.min(1.0)) {
        let actions: Vec<Direction> = pa.actions().collect();
        return actions
            .choose(rng)
            .copied()
            .ok_or(EngineError::EmptyPredictionArray);
    }
    pa.best_action().ok_or(EngineError::EmptyPredictionArray)
}

/// Q-learning style payoff for the previous action set.
pub fn compute_payoff(r_prev: f64, pa_now: &PredictionArray, gamma: f64) -> f64 {
    r_prev + gamma * pa_now.max().unwrap_or(0.0)
}

/// What one step knows about the aliasing state of its input.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a> {
    pub sensation: Message,
    pub memory: &'a MemoryList,
    /// Match memory classifiers this step.
    pub use_memory: bool,
}

/// Population, aliasing state list and clock of one learner.
#[derive(Debug, Clone)]
pub struct Engine {
    pub cfg: Config,
    pub pop: Population,
    pub asl: AliasingStateList,
    pub time: u64,
}

impl Engine {
    pub fn new(cfg: Config) -> Self {
        Self {
            cfg,
            pop: Population::new(),
            asl: AliasingStateList::new(),
            time: 0,
        }
    }

    fn memory_tail(&self) -> usize {
        if self.cfg.memory_includes_action {
            ACTION_BITS
        } else {
            0
        }
    }

    /// Members of the population of the step's classifier kind matching it.
    pub fn matching(&self, ctx: &StepContext<'_>) -> Vec<ClassifierId> {
        self.pop
            .iter()
            .filter(|cl| cl.is_memory() == ctx.use_memory && cl.matches(ctx.sensation, ctx.memory))
            .map(|cl| cl.id)
            .collect()
    }

    /// Match set, covering missing actions until enough are represented.
    pub fn match_set<R: Rng + ?Sized>(
        &mut self,
        ctx: &StepContext<'_>,
        verdicts: &mut VerdictCache,
        rng: &mut R,
    ) -> Vec<ClassifierId> {
        for _ in 0..64 {
            let mset = self.matching(ctx);
            let mut present = [false; Direction::COUNT];
            for &id in &mset {
                if let Some(cl) = self.pop.get(id) {
                    present[cl.action.index()] = true;
                }
            }
            if present.iter().filter(|&&p| p).count() >= self.cfg.theta_mna {
                return mset;
            }
            for action in Direction::ALL {
                if !present[action.index()] {
                    let cl = self.cover(ctx, action, verdicts, rng);
                    self.pop.insert(cl);
                }
            }
            self.pop.enforce_capacity(&self.cfg, rng);
        }
        self.matching(ctx)
    }

    /// A covering classifier for `action` in the step's classifier kind.
    pub fn cover<R: Rng + ?Sized>(
        &mut self,
        ctx: &StepContext<'_>,
        action: Direction,
        verdicts: &mut VerdictCache,
        rng: &mut R,
    ) -> Classifier {
        let condition = Condition::cover(ctx.sensation, self.cfg.p_hash, rng);
        let memory = if ctx.use_memory && !ctx.memory.is_empty() {
            self.memory_part(ctx.memory, self.cfg.p_hash, verdicts, rng)
        } else {
            None
        };
        let id = self.pop.next_id();
        Classifier::new(id, memory, condition, action, self.time, &self.cfg)
    }

    fn memory_part<R: Rng + ?Sized>(
        &self,
        ml: &MemoryList,
        p_hash: f64,
        verdicts: &mut VerdictCache,
        rng: &mut R,
    ) -> Option<MemoryPart> {
        let decision = self.cfg.aliasing_decision;
        let asl = &self.asl;
        let mut first_clear = None;
        for i in 0..ml.len() {
            let state = ml.state(i)?;
            if !verdicts.verdict(asl, state, decision, rng) {
                first_clear = Some(i);
                break;
            }
        }
        let pointer = match first_clear {
            Some(i) => i,
            None => choose_pointer(
                ml,
                |_| true,
                |state| asl.num(state).unwrap_or(0),
                self.cfg.memory_fallback,
                rng,
            )
            .ok()?,
        };
        let elem = ml.get(pointer)?;
        Some(MemoryPart {
            condition: Condition::cover(elem, p_hash, rng),
            pointer,
        })
    }

    pub fn prediction_array(&self, mset: &[ClassifierId]) -> PredictionArray {
        PredictionArray::from_advocates(mset.iter().filter_map(|&id| self.pop.get(id)))
    }

    pub fn action_set(&self, mset: &[ClassifierId], action: Direction) -> Vec<ClassifierId> {
        mset.iter()
            .copied()
            .filter(|&id| self.pop.get(id).is_some_and(|cl| cl.action == action))
            .collect()
    }

    /// Reinforcement update of an action set toward `payoff`. `floor`
    /// additionally applies the detector's fitness floor.
    pub fn update_action_set(&mut self, aset: &[ClassifierId], payoff: f64, floor: bool) {
        let cfg = &self.cfg;
        let ids: Vec<ClassifierId> = aset
            .iter()
            .copied()
            .filter(|&id| self.pop.get(id).is_some())
            .collect();
        if ids.is_empty() {
            return;
        }
        let set_size: f64 = ids
            .iter()
            .filter_map(|&id| self.pop.get(id))
            .map(|c| f64::from(c.numerosity))
            .sum();
        let mut acc_sum = 0.0;
        for &id in &ids {
            let Some(cl) = self.pop.get_mut(id) else {
                continue;
            };
            cl.experience += 1;
            let exp = f64::from(cl.experience);
            let rate = if exp < 1.0 / cfg.beta {
                1.0 / exp
            } else {
                cfg.beta
            };
            let abs_err = (payoff - cl.prediction).abs();
            cl.error += rate * (abs_err - cl.error);
            cl.prediction += rate * (payoff - cl.prediction);
            cl.as_est += rate * (set_size - cl.as_est);
            acc_sum += accuracy(cl.error, cfg) * f64::from(cl.numerosity);
        }
        for &id in &ids {
            let Some(cl) = self.pop.get_mut(id) else {
                continue;
            };
            let k = accuracy(cl.error, cfg) * f64::from(cl.numerosity) / acc_sum;
            cl.fitness += cfg.beta * (k - cl.fitness);
        }
        if floor {
            apply_fitness_floor(&mut self.pop, &ids);
        }
        if cfg.as_subsumption {
            self.action_set_subsumption(&ids);
        }
    }

    /// Absorbs members of `aset` covered by its most general experienced,
    /// accurate member.
    pub fn action_set_subsumption(&mut self, aset: &[ClassifierId]) {
        let members: Vec<&Classifier> = aset.iter().filter_map(|&id| self.pop.get(id)).collect();
        let subsumer = members
            .iter()
            .filter(|c| c.could_subsume(&self.cfg))
            .min_by(|a, b| a.specificity().total_cmp(&b.specificity()))
            .map(|c| (*c).clone());
        let Some(sub) = subsumer else { return };
        let victims: Vec<(ClassifierId, u32)> = members
            .iter()
            .filter(|c| c.id != sub.id && sub.is_strictly_more_general(c))
            .map(|c| (c.id, c.numerosity))
            .collect();
        for (id, _) in victims {
            self.pop.absorb(sub.id, id);
        }
    }

    /// Niche GA on an action set. Returns whether it fired.
    pub fn run_ga<R: Rng + ?Sized>(&mut self, aset: &[ClassifierId], rng: &mut R) -> bool {
        let members: Vec<Classifier> = aset
            .iter()
            .filter_map(|&id| self.pop.get(id))
            .cloned()
            .collect();
        if members.is_empty() {
            return false;
        }
        let num_sum: f64 = members.iter().map(|c| f64::from(c.numerosity)).sum();
        let ts_mean: f64 = members
            .iter()
            .map(|c| c.timestamp as f64 * f64::from(c.numerosity))
            .sum::<f64>()
            / num_sum;
        if self.time as f64 - ts_mean <= self.cfg.theta_ga {
            return false;
        }
        for c in &members {
            if let Some(cl) = self.pop.get_mut(c.id) {
                cl.timestamp = self.time;
            }
        }
        let p1 = roulette(&members, rng).clone();
        let same_kind: Vec<Classifier> = members
            .iter()
            .filter(|c| c.is_memory() == p1.is_memory())
            .cloned()
            .collect();
        let p2 = roulette(&same_kind, rng).clone();

        let mut c1 = self.offspring(&p1, &p2);
        let mut c2 = self.offspring(&p2, &p1);
        if rng.gen_bool(self.cfg.chi) {
            two_point_crossover(&mut c1, &mut c2, rng);
        }
        for child in [&mut c1, &mut c2] {
            self.mutate(child, rng);
        }
        for child in [c1, c2] {
            if self.cfg.ga_subsumption {
                if p1.subsumes(&child, &self.cfg) && self.pop.increment(p1.id) {
                    continue;
                }
                if p2.subsumes(&child, &self.cfg) && self.pop.increment(p2.id) {
                    continue;
                }
            }
            self.pop.insert(child);
        }
        self.pop.enforce_capacity(&self.cfg, rng);
        true
    }

    fn offspring(&mut self, parent: &Classifier, other: &Classifier) -> Classifier {
        let id = self.pop.next_id();
        let micro = |c: &Classifier| c.fitness / f64::from(c.numerosity);
        Classifier {
            id,
            memory: parent.memory,
            condition: parent.condition,
            action: parent.action,
            prediction: (parent.prediction + other.prediction) / 2.0,
            error: (parent.error + other.error) / 2.0,
            fitness: 0.1 * (micro(parent) + micro(other)) / 2.0,
            experience: 0,
            timestamp: self.time,
            as_est: parent.as_est,
            numerosity: 1,
            fb_pos: 0.0,
            fb_neg: 0.0,
        }
    }

    fn mutate<R: Rng + ?Sized>(&self, child: &mut Classifier, rng: &mut R) {
        let mu = self.cfg.mu;
        if let Some(part) = child.memory.as_mut() {
            part.condition.mutate(mu, rng);
        }
        child.condition.mutate(mu, rng);
        if rng.gen_bool(mu) {
            let k = rng.gen_range(1..Direction::COUNT);
            child.action = Direction::from_index((child.action.index() + k) % Direction::COUNT)
                .unwrap_or(child.action);
        }
        if let Some(part) = child.memory.as_mut() {
            if rng.gen_bool(mu) {
                let max = self.cfg.memory_size.saturating_sub(1);
                part.pointer = if rng.gen_bool(0.5) {
                    (part.pointer + 1).min(max)
                } else {
                    part.pointer.saturating_sub(1)
                };
            }
        }
    }

    /// Adds a fully specific classifier for the step when the action set
    /// lacks an accurate, experienced member.
    pub fn action_set_covering<R: Rng + ?Sized>(
        &mut self,
        aset: &[ClassifierId],
        action: Direction,
        ctx: &StepContext<'_>,
        verdicts: &mut VerdictCache,
        rng: &mut R,
    ) -> bool {
        let satisfied = aset
            .iter()
            .filter_map(|&id| self.pop.get(id))
            .any(|c| accuracy(c.error, &self.cfg) >= 1.0 && c.experience > self.cfg.theta_ascover);
        if satisfied {
            return false;
        }
        let memory = if ctx.use_memory && !ctx.memory.is_empty() {
            self.memory_part(ctx.memory, 0.0, verdicts, rng)
        } else {
            None
        };
        let id = self.pop.next_id();
        let cl = Classifier::new(
            id,
            memory,
            Condition::specific(ctx.sensation),
            action,
            self.time,
            &self.cfg,
        );
        self.pop.insert(cl);
        self.pop.enforce_capacity(&self.cfg, rng);
        true
    }

    pub fn memory_tail_bits(&self) -> usize {
        self.memory_tail()
    }
}

fn roulette<'a, R: Rng + ?Sized>(pool: &'a [Classifier], rng: &mut R) -> &'a Classifier {
    let total: f64 = pool.iter().map(|c| c.fitness).sum();
    if total <= 0.0 {
        return &pool[rng.gen_range(0..pool.len())];
    }
    let mut pick = rng.gen::<f64>() * total;
    for c in pool {
        if pick < c.fitness {
            return c;
        }
        pick -= c.fitness;
    }
    &pool[pool.len() - 1]
}

/// Two-point crossover over the memory condition followed by the normal
/// condition. Children of different kinds are left unchanged.
pub fn two_point_crossover<R: Rng + ?Sized>(a: &mut Classifier, b: &mut Classifier, rng: &mut R) {
    let head_len = match (a.memory, b.memory) {
        (None, None) => 0,
        (Some(x), Some(y)) if x.condition.len() == y.condition.len() => x.condition.len(),
        _ => return,
    };
    let empty = Condition::all_dont_care(0);
    let head = |c: &Classifier| c.memory.map_or(empty, |m| m.condition);
    let tail_len = a.condition.len();
    let (ca, va, len) = head(a).concat(a.condition);
    let (cb, vb, _) = head(b).concat(b.condition);
    let mut x = rng.gen_range(0..=len);
    let mut y = rng.gen_range(0..=len);
    if x > y {
        std::mem::swap(&mut x, &mut y);
    }
    // positions [x, y) counted from the left
    let span: u64 = if y > x {
        (((1u128 << (y - x)) - 1) as u64) << (len - y)
    } else {
        0
    };
    let (na_c, nb_c) = ((ca & !span) | (cb & span), (cb & !span) | (ca & span));
    let (na_v, nb_v) = ((va & !span) | (vb & span), (vb & !span) | (va & span));
    let (ha, ta) = Condition::split(na_c, na_v, head_len, tail_len);
    let (hb, tb) = Condition::split(nb_c, nb_v, head_len, tail_len);
    a.condition = ta;
    b.condition = tb;
    if let Some(m) = a.memory.as_mut() {
        m.condition = ha;
    }
    if let Some(m) = b.memory.as_mut() {
        m.condition = hb;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cl(action: Direction, p: f64, f: f64) -> Classifier {
        let cfg = Config::default();
        let mut c = Classifier::new(
            ClassifierId(0),
            None,
            Condition::all_dont_care(16),
            action,
            0,
            &cfg,
        );
        c.prediction = p;
        c.fitness = f;
        c
    }

    #[test]
    fn prediction_array_table() {
        let one = PredictionArray::from_advocates(&[cl(Direction::N, 10.0, 0.3)]);
        assert_eq!(one.get(Direction::N), Some(10.0));
        assert_eq!(one.get(Direction::E), None);
        let sym = PredictionArray::from_advocates(&[
            cl(Direction::S, 0.0, 0.5),
            cl(Direction::S, 1000.0, 0.5),
        ]);
        assert_eq!(sym.get(Direction::S), Some(500.0));
        let w = PredictionArray::from_advocates(&[
            cl(Direction::W, 100.0, 0.9),
            cl(Direction::W, 200.0, 0.1),
        ]);
        assert!((w.get(Direction::W).unwrap() - 110.0).abs() < 1e-12);
    }

    #[test]
    fn selection_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut e = [None; 8];
        e[0] = Some(5.0);
        e[3] = Some(9.0);
        let pa = PredictionArray::from_entries(e);
        assert_eq!(select_action(&pa, 0.0, &mut rng), Ok(Direction::SE));
        assert_eq!(
            select_action(&PredictionArray::default(), 0.0, &mut rng),
            Err(EngineError::EmptyPredictionArray)
        );
        let mut tie = [None; 8];
        tie[2] = Some(1.0);
        tie[6] = Some(1.0);
        assert_eq!(
            select_action(&PredictionArray::from_entries(tie), 0.0, &mut rng),
            Ok(Direction::E)
        );
        let full = PredictionArray::from_entries([Some(1.0); 8]);
        let mut counts = [0u32; 8];
        for _ in 0..10_000 {
            counts[select_action(&full, 1.0, &mut rng).unwrap().index()] += 1;
        }
        for c in counts {
            assert!((1050..1450).contains(&c), "{counts:?}");
        }
    }

    #[test]
    fn payoff_table() {
        let pa = PredictionArray::from_entries([
            Some(100.0),
            Some(3.0),
            None,
            None,
            None,
            None,
            None,
            None,
        ]);
        assert!((compute_payoff(0.0, &pa, 0.71) - 71.0).abs() < 1e-12);
        assert_eq!(
            compute_payoff(1000.0, &PredictionArray::default(), 0.71),
            1000.0
        );
        assert_eq!(compute_payoff(5.0, &pa, 0.0), 5.0);
    }

    #[test]
    fn crossover_conserves_symbols() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut a = cl(Direction::N, 0.0, 0.1);
            let mut b = cl(Direction::N, 0.0, 0.1);
            a.condition = "0000000000000000".parse().unwrap();
            b.condition = "################".parse().unwrap();
            a.memory = Some(MemoryPart {
                condition: "1111111111111111".parse().unwrap(),
                pointer: 0,
            });
            b.memory = Some(MemoryPart {
                condition: "################".parse().unwrap(),
                pointer: 2,
            });
            two_point_crossover(&mut a, &mut b, &mut rng);
            for i in 0..16 {
                let (sa, sb) = (a.condition.symbol(i), b.condition.symbol(i));
                assert_ne!(sa, sb);
            }
            assert_eq!(a.memory.unwrap().pointer, 0);
            assert_eq!(b.memory.unwrap().pointer, 2);
            let total = a.condition.specified()
                + a.memory.unwrap().condition.specified()
                + b.condition.specified()
                + b.memory.unwrap().condition.specified();
            assert_eq!(total, 32);
        }
    }
}
