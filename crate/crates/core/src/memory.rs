//! The memory list: a bounded FIFO of recently left sensations, newest first,
//! and the construction of memory conditions from it.

use std::collections::VecDeque;

use rand::Rng;
use thiserror::Error;

use crate::classifier::MemoryPart;
use crate::condition::{Condition, Message};
use crate::config::MemoryFallback;
use crate::maze::{Direction, Sensation};

/// Bits used to store an action code in a memory element.
pub const ACTION_BITS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MemoryError {
    #[error("memory list is empty")]
    EmptyMemoryList,
}

pub fn sensation_message(s: Sensation) -> Message {
    Message::new(u32::from(s.bits()), Sensation::LEN)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryList {
    elems: VecDeque<Message>,
    capacity: usize,
    includes_action: bool,
}

impl MemoryList {
    pub fn new(capacity: usize) -> Self {
        Self::with_actions(capacity, false)
    }

    /// When `includes_action` is set, each element is the sensation followed
    /// by the 3-bit code of the action taken there.
    pub fn with_actions(capacity: usize, includes_action: bool) -> Self {
        Self {
            elems: VecDeque::with_capacity(capacity + 1),
            capacity,
            includes_action,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Symbol length of one element.
    pub fn element_len(&self) -> usize {
        Sensation::LEN + if self.includes_action { ACTION_BITS } else { 0 }
    }

    pub fn get(&self, index: usize) -> Option<Message> {
        self.elems.get(index).copied()
    }

    /// Sensation part of element `index`.
    pub fn state(&self, index: usize) -> Option<Message> {
        let tail = if self.includes_action { ACTION_BITS } else { 0 };
        self.get(index).map(|m| m.truncate_tail(tail))
    }

    pub fn iter(&self) -> impl Iterator<Item = Message> + '_ {
        self.elems.iter().copied()
    }

    pub fn reset(&mut self) {
        self.elems.clear();
    }

    /// Records the transition `s_prev -> s_now`; nothing happens when the
    /// sensation did not change.
    pub fn update(&mut self, s_prev: Message, s_now: Message) {
        self.update_with_action(s_prev, None, s_now);
    }

    /// Like [`MemoryList::update`], attaching the action taken at `s_prev`
    /// when the list stores actions.
    pub fn update_with_action(
        &mut self,
        s_prev: Message,
        action: Option<Direction>,
        s_now: Message,
    ) {
        if s_prev == s_now {
            return;
        }
        let elem = if self.includes_action {
            let code = action.map_or(0, |a| a.index() as u32);
            s_prev.concat(code, ACTION_BITS)
        } else {
            s_prev
        };
        self.elems.push_front(elem);
        self.elems.truncate(self.capacity);
    }
}

/// Builds a memory condition and pointer from the first remembered state
/// not judged aliasing. When every element looks aliased, `fallback`
/// chooses among them using their aliasing votes.
pub fn cover_memory_condition<R: Rng + ?Sized>(
    ml: &MemoryList,
    mut is_aliasing: impl FnMut(Message) -> bool,
    vote: impl Fn(Message) -> u32,
    fallback: MemoryFallback,
    p_hash: f64,
    rng: &mut R,
) -> Result<MemoryPart, MemoryError> {
    let pointer = choose_pointer(ml, &mut is_aliasing, &vote, fallback, rng)?;
    let elem = ml.get(pointer).ok_or(MemoryError::EmptyMemoryList)?;
    Ok(MemoryPart {
        condition: Condition::cover(elem, p_hash, rng),
        pointer,
    })
}

/// Index chosen by [`cover_memory_condition`].
pub fn choose_pointer<R: Rng + ?Sized>(
    ml: &MemoryList,
    mut is_aliasing: impl FnMut(Message) -> bool,
    vote: impl Fn(Message) -> u32,
    fallback: MemoryFallback,
    rng: &mut R,
) -> Result<usize, MemoryError> {
    if ml.is_empty() {
        return Err(MemoryError::EmptyMemoryList);
    }
    let states: Vec<Message> = (0..ml.len()).filter_map(|i| ml.state(i)).collect();
    if let Some(i) = states.iter().position(|&s| !is_aliasing(s)) {
        return Ok(i);
    }
    let votes: Vec<u32> = states.iter().map(|&s| vote(s)).collect();
    Ok(match fallback {
        MemoryFallback::MinNum => votes
            .iter()
            .enumerate()
            .min_by_key(|&(i, &v)| (v, i))
            .map_or(0, |(i, _)| i),
        MemoryFallback::Roulette => {
            let weights: Vec<f64> = votes.iter().map(|&v| 1.0 / f64::from(v.max(1))).collect();
            let total: f64 = weights.iter().sum();
            let mut pick = rng.gen::<f64>() * total;
            let mut chosen = weights.len() - 1;
            for (i, w) in weights.iter().enumerate() {
                if pick < *w {
                    chosen = i;
                    break;
                }
                pick -= w;
            }
            chosen
        }
    })
}
