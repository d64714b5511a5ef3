//! Alphabets, memory words, and the integer arithmetic on word indices.

use crate::{Error, Result};

/// An ordered finite alphabet of distinct symbol labels.
///
/// The position of a label is its index everywhere else in the crate; the
/// index ↔ label bijection is fixed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlphabet {
    symbols: Vec<String>,
}

impl FiniteAlphabet {
    /// Builds an alphabet from ordered labels.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidAlphabet`] if `symbols` is empty or contains a
    /// duplicate label.
    pub fn new<S: Into<String>>(symbols: Vec<S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::InvalidAlphabet);
            }
        }
        Ok(FiniteAlphabet { symbols })
    }

    /// The binary alphabet `{"0", "1"}`.
    pub fn binary() -> Self {
        FiniteAlphabet { symbols: vec!["0".into(), "1".into()] }
    }

    /// The binary-input/erasure-output alphabet `{"0", "e", "1"}`.
    pub fn binary_with_erasure() -> Self {
        FiniteAlphabet { symbols: vec!["0".into(), "e".into(), "1".into()] }
    }

    /// Number of symbols.
    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    /// Label of symbol `i`.
    pub fn label(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    /// Index of `label`, if present.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == label)
    }

    /// The ordered labels.
    pub fn labels(&self) -> &[String] {
        &self.symbols
    }
}

/// A fixed-length tuple of output-symbol indices — the last `M`, `N`, or `J`
/// outputs that a kernel conditions on. Entries are stored oldest first,
/// most recent last; the length-0 word is the unique empty word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryWord {
    entries: Vec<usize>,
}

impl MemoryWord {
    /// Builds a word from entries (oldest first), validating each against
    /// the alphabet size.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] if an entry is not a valid symbol index.
    pub fn new(entries: Vec<usize>, alphabet_size: usize) -> Result<Self> {
        if let Some(&e) = entries.iter().find(|&&e| e >= alphabet_size) {
            return Err(Error::Shape(format!(
                "memory-word entry {e} not in alphabet of size {alphabet_size}"
            )));
        }
        Ok(MemoryWord { entries })
    }

    /// The unique empty word (memory order 0).
    pub fn empty() -> Self {
        MemoryWord { entries: Vec::new() }
    }

    /// Word length (the memory order it belongs to).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `true` for the empty word.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries, oldest first.
    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Lexicographic index of this word (most recent symbol is the
    /// least-significant digit).
    pub fn index(&self, alphabet_size: usize) -> usize {
        self.entries.iter().fold(0, |acc, &e| acc * alphabet_size + e)
    }

    /// Inverse of [`MemoryWord::index`] for words of length `order`.
    pub fn from_index(mut index: usize, order: usize, alphabet_size: usize) -> Self {
        let mut entries = vec![0usize; order];
        for slot in entries.iter_mut().rev() {
            *slot = index % alphabet_size;
            index /= alphabet_size;
        }
        MemoryWord { entries }
    }
}

/// Integer arithmetic on the set of length-`order` memory words over an
/// alphabet of `base` symbols, identified with `{0, …, base^order − 1}`.
///
/// This is the DP state space: `count()` words, updated by [`WordSpace::shift`]
/// after each output, restricted by [`WordSpace::suffix`] when a kernel
/// conditions on fewer symbols than the policy does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordSpace {
    /// Word length (`M`, `N`, or `J`).
    pub order: usize,
    /// Output-alphabet size.
    pub base: usize,
}

impl WordSpace {
    /// Creates the space of length-`order` words over `base` symbols.
    pub fn new(order: usize, base: usize) -> Self {
        WordSpace { order, base }
    }

    /// Number of words, `base^order` (1 for the empty-word space).
    pub fn count(&self) -> usize {
        self.base.pow(self.order as u32)
    }

    /// Successor word after observing output `y`: drop the oldest symbol,
    /// append `y`. The empty-word space shifts to itself.
    pub fn shift(&self, w: usize, y: usize) -> usize {
        if self.order == 0 {
            0
        } else {
            (w % self.base.pow(self.order as u32 - 1)) * self.base + y
        }
    }

    /// The last `m` symbols of word `w` (`m ≤ order`), as an index into the
    /// length-`m` word space.
    pub fn suffix(&self, w: usize, m: usize) -> usize {
        debug_assert!(m <= self.order);
        w % self.base.pow(m as u32)
    }
}
