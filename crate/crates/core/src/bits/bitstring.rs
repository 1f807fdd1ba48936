use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BitsError;

/// A finite sequence of bits, most significant (leftmost) bit first.
///
/// Ordering is length-lexicographic: shorter strings sort first, and strings
/// of equal length compare bitwise with `0 < 1`. This is the canonical
/// enumeration order for programs everywhere in the crate.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self {
            bits: bits.into_iter().collect(),
        }
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_uint(value: u128, width: usize) -> Self {
        debug_assert!(width <= 128);
        Self::from_bits((0..width).rev().map(|i| (value >> i) & 1 == 1))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.bits.get(index).copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    /// The first `len` bits (clamped to the string length).
    pub fn prefix(&self, len: usize) -> BitString {
        Self::from_bits(self.bits[..len.min(self.len())].iter().copied())
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.bits.starts_with(&prefix.bits)
    }

    /// `self` is a prefix of `other` and strictly shorter.
    pub fn is_proper_prefix_of(&self, other: &BitString) -> bool {
        self.len() < other.len() && other.starts_with(self)
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(BitsError::InvalidDigit { position, found }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|bits| Self { bits })
    }
}

impl TryFrom<String> for BitString {
    type Error = BitsError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bits(iter)
    }
}

/// Upper limit on program and output lengths for every enumeration.
///
/// Capped at 127 so that the length-lex rank of any admissible string fits
/// in a `u128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LengthBound(usize);

impl LengthBound {
    pub const DEFAULT: LengthBound = LengthBound(64);
    pub const MAX: usize = 127;

    pub fn new(max_len: usize) -> Result<Self, BitsError> {
        if max_len == 0 || max_len > Self::MAX {
            return Err(BitsError::BadBound {
                requested: max_len,
                max: Self::MAX,
            });
        }
        Ok(Self(max_len))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn admits(self, s: &BitString) -> bool {
        s.len() <= self.0
    }

    pub fn check(self, s: &BitString) -> Result<(), BitsError> {
        if self.admits(s) {
            Ok(())
        } else {
            Err(BitsError::TooLong {
                len: s.len(),
                max: self.0,
            })
        }
    }
}

impl Default for LengthBound {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Length-lex rank of `s`: empty→0, "0"→1, "1"→2, "00"→3, …
pub fn integer_of_bitstring(s: &BitString) -> Result<u128, BitsError> {
    if s.len() > LengthBound::MAX {
        return Err(BitsError::IndexOverflow { len: s.len() });
    }
    let value = s.iter().fold(0u128, |acc, b| (acc << 1) | b as u128);
    // 2^len - 1 strings precede every string of length len.
    Ok(((1u128 << s.len()) - 1) + value)
}

/// Inverse of [`integer_of_bitstring`], refusing strings longer than `bound`.
pub fn bitstring_of_integer(index: u128, bound: LengthBound) -> Result<BitString, BitsError> {
    let shifted = index.checked_add(1).ok_or(BitsError::IntegerTooLarge {
        index,
        max: bound.get(),
    })?;
    let len = (127 - shifted.leading_zeros()) as usize;
    if len > bound.get() {
        return Err(BitsError::IntegerTooLarge {
            index,
            max: bound.get(),
        });
    }
    Ok(BitString::from_uint(shifted - (1u128 << len), len))
}

/// Every string of exactly `len` bits in lexicographic order.
pub fn all_of_length(len: usize) -> impl Iterator<Item = BitString> {
    assert!(len < 64, "exhaustive enumeration limited to < 64 bits");
    (0..1u64 << len).map(move |v| BitString::from_uint(v as u128, len))
}

/// Every string of length `0..=max_len` in length-lex order.
pub fn all_up_to(max_len: usize) -> impl Iterator<Item = BitString> {
    (0..=max_len).flat_map(all_of_length)
}
