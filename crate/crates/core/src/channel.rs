//! Words over `[q]`, coloring channels and their deletion action.
//!
//! Letters are the integers `1..=q`. A coloring channel keeps the letters it
//! contains, in transmission order, and deletes every other symbol.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::ChannelSystem;

/// Largest supported alphabet; channels are stored as 32-bit letter masks.
pub const MAX_ALPHABET: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(q: usize) -> Result<Self> {
        if (2..=MAX_ALPHABET).contains(&q) {
            Ok(Self(q))
        } else {
            Err(Error::AlphabetSize(q))
        }
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        1..=self.0 as u8
    }

    /// Mask with one bit per letter of the alphabet.
    pub fn full_mask(self) -> u32 {
        if self.0 == 32 {
            u32::MAX
        } else {
            (1u32 << self.0) - 1
        }
    }

    pub fn check_letter(self, letter: usize) -> Result<u8> {
        if letter >= 1 && letter <= self.0 {
            Ok(letter as u8)
        } else {
            Err(Error::LetterOutOfRange { letter, q: self.0 })
        }
    }
}

/// A finite sequence of letters. The empty word plays the role of ε.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self> {
        for &s in &symbols {
            alphabet.check_letter(s as usize)?;
        }
        Ok(Self(symbols))
    }

    /// Parses a string of decimal digits, e.g. `"3122123"`. Only usable for `q <= 9`.
    pub fn from_digits(alphabet: Alphabet, digits: &str) -> Result<Self> {
        let symbols = digits
            .chars()
            .map(|c| {
                let d = c
                    .to_digit(10)
                    .ok_or_else(|| Error::InvalidParameter(format!("'{c}' is not a digit")))?;
                alphabet.check_letter(d as usize)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self(symbols))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub(crate) fn from_raw(symbols: Vec<u8>) -> Self {
        Self(symbols)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let wide = self.0.iter().any(|&s| s > 9);
        for (i, s) in self.0.iter().enumerate() {
            if wide && i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A coloring channel: the nonempty set of letters it lets through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoringChannel {
    mask: u32,
}

impl ColoringChannel {
    pub fn new<I>(alphabet: Alphabet, letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut mask = 0u32;
        for letter in letters {
            let l = alphabet.check_letter(letter)?;
            mask |= 1 << (l - 1);
        }
        Self::from_mask(mask)
    }

    /// Builds a channel from a letter mask (bit `i` is letter `i + 1`).
    pub fn from_mask(mask: u32) -> Result<Self> {
        if mask == 0 {
            return Err(Error::EmptyChannel);
        }
        Ok(Self { mask })
    }

    /// The channel passing every letter of the alphabet.
    pub fn full(alphabet: Alphabet) -> Self {
        Self {
            mask: alphabet.full_mask(),
        }
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn contains(self, letter: u8) -> bool {
        (1..=32).contains(&letter) && self.mask & (1 << (letter - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    /// Highest letter in the channel.
    pub fn max_letter(self) -> u8 {
        (32 - self.mask.leading_zeros()) as u8
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        (0..32u8).filter(move |i| self.mask & (1 << i) != 0).map(|i| i + 1)
    }

    pub fn is_subset_of(self, other: ColoringChannel) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn intersects(self, other: ColoringChannel) -> bool {
        self.mask & other.mask != 0
    }
}

impl fmt::Display for ColoringChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.letters().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// The tuple of views a word produces, one per channel, in channel order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutputTuple {
    pub views: Vec<Word>,
}

impl OutputTuple {
    /// Canonical byte form: every view as a little-endian `u32` length
    /// followed by its symbols.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.views.iter().map(|v| v.len() + 4).sum());
        for view in &self.views {
            out.extend_from_slice(&(view.len() as u32).to_le_bytes());
            out.extend_from_slice(view.symbols());
        }
        out
    }
}

pub(crate) fn project_into(symbols: &[u8], mask: u32, out: &mut Vec<u8>) {
    out.extend(symbols.iter().copied().filter(|&s| mask & (1 << (s - 1)) != 0));
}

/// The subsequence of `x` formed by the letters of `channel`.
pub fn apply_channel(x: &Word, channel: ColoringChannel) -> Word {
    let mut out = Vec::new();
    project_into(x.symbols(), channel.mask(), &mut out);
    Word(out)
}

/// Sends `x` through every channel of `system`.
pub fn apply_system(x: &Word, system: &ChannelSystem) -> OutputTuple {
    OutputTuple {
        views: system
            .channels()
            .iter()
            .map(|&ch| apply_channel(x, ch))
            .collect(),
    }
}

/// Whether two words of equal length produce the same output tuple.
pub fn confusable(x: &Word, y: &Word, system: &ChannelSystem) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(system
        .channels()
        .iter()
        .all(|&ch| apply_channel(x, ch) == apply_channel(y, ch)))
}
