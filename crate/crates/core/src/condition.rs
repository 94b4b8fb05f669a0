//! Ternary conditions over fixed-length binary messages.
//!
//! Position `i` of a string (left to right) is bit `len - 1 - i`, so the
//! printed form lines up with [`crate::maze::Sensation`]'s.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

/// Longest supported message: a sensation plus a 3-bit action code.
pub const MAX_LEN: usize = 19;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("length mismatch: condition has {condition} symbols, message has {message}")]
    LengthMismatch { condition: usize, message: usize },
    #[error("invalid ternary string {0:?}")]
    Invalid(String),
}

/// A binary input string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message {
    bits: u32,
    len: u8,
}

impl Message {
    pub fn new(bits: u32, len: usize) -> Self {
        assert!(len <= MAX_LEN, "message longer than {MAX_LEN}");
        Self {
            bits: bits & mask(len),
            len: len as u8,
        }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Appends `tail_len` low bits of `tail` after this message.
    pub fn concat(self, tail: u32, tail_len: usize) -> Message {
        Message::new(
            (self.bits << tail_len) | (tail & mask(tail_len)),
            self.len() + tail_len,
        )
    }

    /// Drops the last `n` symbols.
    pub fn truncate_tail(self, n: usize) -> Message {
        Message::new(self.bits >> n, self.len() - n)
    }

    pub fn bit_at(self, pos: usize) -> bool {
        (self.bits >> (self.len() - 1 - pos)) & 1 == 1
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit_at(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Message {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > MAX_LEN || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(ConditionError::Invalid(s.to_string()));
        }
        let bits = s
            .bytes()
            .fold(0u32, |acc, b| (acc << 1) | u32::from(b == b'1'));
        Ok(Message::new(bits, s.len()))
    }
}

fn mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

/// One ternary symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Zero,
    One,
    DontCare,
}

/// A string over `{0, 1, #}` stored as a care mask plus the cared-for values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition {
    care: u32,
    value: u32,
    len: u8,
}

impl Condition {
    pub fn all_dont_care(len: usize) -> Self {
        assert!(len <= MAX_LEN, "condition longer than {MAX_LEN}");
        Self {
            care: 0,
            value: 0,
            len: len as u8,
        }
    }

    /// The fully specific condition equal to `msg`.
    pub fn specific(msg: Message) -> Self {
        Self {
            care: mask(msg.len()),
            value: msg.bits(),
            len: msg.len,
        }
    }

    /// Covers `msg`, turning each symbol into `#` with probability `p_hash`.
    pub fn cover<R: Rng + ?Sized>(msg: Message, p_hash: f64, rng: &mut R) -> Self {
        let mut care = 0u32;
        for i in 0..msg.len() {
            if !rng.gen_bool(p_hash) {
                care |= 1 << i;
            }
        }
        Self {
            care,
            value: msg.bits() & care,
            len: msg.len,
        }
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn care_mask(self) -> u32 {
        self.care
    }

    pub fn value_bits(self) -> u32 {
        self.value
    }

    pub fn matches(self, msg: Message) -> Result<bool, ConditionError> {
        if msg.len != self.len {
            return Err(ConditionError::LengthMismatch {
                condition: self.len(),
                message: msg.len(),
            });
        }
        Ok(self.matches_unchecked(msg))
    }

    #[inline]
    pub fn matches_unchecked(self, msg: Message) -> bool {
        msg.bits & self.care == self.value
    }

    /// Number of `#` symbols.
    pub fn dont_cares(self) -> usize {
        self.len() - self.specified()
    }

    /// Number of `0`/`1` symbols.
    pub fn specified(self) -> usize {
        self.care.count_ones() as usize
    }

    /// The message this condition names when it has no `#`.
    pub fn to_message(self) -> Option<Message> {
        (self.care == mask(self.len())).then(|| Message::new(self.value, self.len()))
    }

    /// True when every input matched by `other` is matched by `self`.
    pub fn is_more_general_or_equal(self, other: Condition) -> bool {
        self.len == other.len
            && self.care & !other.care == 0
            && other.value & self.care == self.value
    }

    pub fn symbol(self, pos: usize) -> Symbol {
        let bit = 1u32 << (self.len() - 1 - pos);
        match (self.care & bit != 0, self.value & bit != 0) {
            (false, _) => Symbol::DontCare,
            (true, false) => Symbol::Zero,
            (true, true) => Symbol::One,
        }
    }

    pub fn set_symbol(&mut self, pos: usize, sym: Symbol) {
        let bit = 1u32 << (self.len() - 1 - pos);
        match sym {
            Symbol::DontCare => {
                self.care &= !bit;
                self.value &= !bit;
            }
            Symbol::Zero => {
                self.care |= bit;
                self.value &= !bit;
            }
            Symbol::One => {
                self.care |= bit;
                self.value |= bit;
            }
        }
    }

    /// Free mutation: each symbol becomes one of the two other symbols
    /// with probability `mu`. Returns whether anything changed.
    pub fn mutate<R: Rng + ?Sized>(&mut self, mu: f64, rng: &mut R) -> bool {
        let mut changed = false;
        for pos in 0..self.len() {
            if rng.gen_bool(mu) {
                let others = match self.symbol(pos) {
                    Symbol::Zero => [Symbol::One, Symbol::DontCare],
                    Symbol::One => [Symbol::Zero, Symbol::DontCare],
                    Symbol::DontCare => [Symbol::Zero, Symbol::One],
                };
                self.set_symbol(pos, others[rng.gen_range(0..2)]);
                changed = true;
            }
        }
        changed
    }

    /// Concatenates `self` followed by `tail`.
    pub fn concat(self, tail: Condition) -> (u64, u64, usize) {
        let n = tail.len();
        (
            (u64::from(self.care) << n) | u64::from(tail.care),
            (u64::from(self.value) << n) | u64::from(tail.value),
            self.len() + n,
        )
    }

    /// Inverse of [`Condition::concat`].
    pub fn split(
        care: u64,
        value: u64,
        head_len: usize,
        tail_len: usize,
    ) -> (Condition, Condition) {
        let tm = u64::from(mask(tail_len));
        let head = Condition {
            care: (care >> tail_len) as u32,
            value: (value >> tail_len) as u32,
            len: head_len as u8,
        };
        let tail = Condition {
            care: (care & tm) as u32,
            value: (value & tm) as u32,
            len: tail_len as u8,
        };
        (head, tail)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(match self.symbol(i) {
                Symbol::Zero => "0",
                Symbol::One => "1",
                Symbol::DontCare => "#",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Condition {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > MAX_LEN {
            return Err(ConditionError::Invalid(s.to_string()));
        }
        let mut cond = Condition::all_dont_care(s.len());
        for (pos, ch) in s.chars().enumerate() {
            let sym = match ch {
                '0' => Symbol::Zero,
                '1' => Symbol::One,
                '#' => Symbol::DontCare,
                _ => return Err(ConditionError::Invalid(s.to_string())),
            };
            cond.set_symbol(pos, sym);
        }
        Ok(cond)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(s: &str) -> Condition {
        s.parse().unwrap()
    }

    fn m(s: &str) -> Message {
        s.parse().unwrap()
    }

    #[test]
    fn matching_table() {
        assert!(c("################")
            .matches(m("0110100101101001"))
            .unwrap());
        assert!(c("0110100101101001")
            .matches(m("0110100101101001"))
            .unwrap());
        assert!(c("0#").matches(m("01")).unwrap());
        assert!(!c("0#").matches(m("11")).unwrap());
        assert_eq!(
            c("0#").matches(m("011")),
            Err(ConditionError::LengthMismatch {
                condition: 2,
                message: 3
            })
        );
    }

    #[test]
    fn round_trip_strings() {
        for s in ["01#", "################", "1", "0000000000000000111"] {
            assert_eq!(c(s).to_string(), s);
        }
        assert!("01x".parse::<Condition>().is_err());
        assert!("012".parse::<Message>().is_err());
    }

    #[test]
    fn cover_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let msg = m("0101110000010000");
        assert_eq!(
            Condition::cover(msg, 0.0, &mut rng),
            Condition::specific(msg)
        );
        assert_eq!(
            Condition::cover(msg, 1.0, &mut rng),
            Condition::all_dont_care(16)
        );
    }

    #[test]
    fn generality() {
        assert!(c("0#1#").is_more_general_or_equal(c("001#")));
        assert!(c("0#1#").is_more_general_or_equal(c("0#1#")));
        assert!(!c("001#").is_more_general_or_equal(c("0#1#")));
        assert!(!c("1###").is_more_general_or_equal(c("0###")));
    }

    #[test]
    fn concat_split_round_trip() {
        let (a, b) = (c("01#1"), c("#10"));
        let (care, value, len) = a.concat(b);
        assert_eq!(len, 7);
        assert_eq!(Condition::split(care, value, 4, 3), (a, b));
    }

    #[test]
    fn message_concat() {
        let msg = m("0101").concat(0b110, 3);
        assert_eq!(msg.to_string(), "0101110");
        assert_eq!(msg.truncate_tail(3), m("0101"));
    }
}
