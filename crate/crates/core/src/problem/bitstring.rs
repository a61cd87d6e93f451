use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported number of binary variables. Dense tables over
/// `2^MAX_VARS` entries stay within a few hundred megabytes.
pub const MAX_VARS: usize = 24;

/// A fixed-length bit string `x = (x_1, ..., x_n)`.
///
/// Basis-index convention used everywhere in this crate: bit 1 is the most
/// significant bit of the index, so `x = 100` has index 4 and the textual
/// form reads left to right from bit 1 to bit n. Numeric order of the index
/// is therefore the lexicographic order of the strings.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    n: usize,
    index: usize,
}

impl BitString {
    pub fn new(n: usize, index: usize) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::Capacity { n, max: MAX_VARS });
        }
        if index >= 1usize << n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        Ok(BitString { n, index })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let n = bits.len();
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Self::new(n, index)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Basis-state index of this string.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Value of bit `i` (1-based).
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.n);
        self.index & bit_mask(self.n, i) != 0
    }

    pub fn bits(&self) -> Vec<bool> {
        (1..=self.n).map(|i| self.bit(i)).collect()
    }

    pub fn with_bit(self, i: usize, value: bool) -> Self {
        let m = bit_mask(self.n, i);
        let index = if value { self.index | m } else { self.index & !m };
        BitString { n: self.n, index }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.index.count_ones() as usize
    }

    /// `supp(x) = { j : x_j = 1 }`, 1-based and ascending.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.bit(i)).collect()
    }
}

/// Index mask of bit `i` (1-based) in an `n`-bit string.
#[inline]
pub fn bit_mask(n: usize, i: usize) -> usize {
    1usize << (n - i)
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
