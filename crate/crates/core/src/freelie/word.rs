//! Packed words over a two-letter ordered alphabet.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on word length (letters are packed into a u64).
pub const MAX_WORD_LEN: usize = 60;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word length {0} exceeds the supported maximum {MAX_WORD_LEN}")]
    TooLong(usize),
    #[error("unknown letter {0:?} for alphabet {1}")]
    BadLetter(char, &'static str),
}

/// The two concrete alphabets in use. Letters are ordered: index 0 is the
/// smaller letter.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Alphabet {
    /// Letters `A < T`.
    AT,
    /// Letters `X0 < X1` (rendered as `0` and `1` inside word strings).
    X01,
}

impl Alphabet {
    pub fn name(self) -> &'static str {
        match self {
            Alphabet::AT => "AT",
            Alphabet::X01 => "X01",
        }
    }

    pub fn parse_name(s: &str) -> Option<Alphabet> {
        match s {
            "AT" => Some(Alphabet::AT),
            "X01" => Some(Alphabet::X01),
            _ => None,
        }
    }

    pub fn letter_char(self, letter: u8) -> char {
        match (self, letter) {
            (Alphabet::AT, 0) => 'A',
            (Alphabet::AT, _) => 'T',
            (Alphabet::X01, 0) => '0',
            (Alphabet::X01, _) => '1',
        }
    }

    pub fn letter_index(self, c: char) -> Result<u8, WordError> {
        match (self, c) {
            (Alphabet::AT, 'A') => Ok(0),
            (Alphabet::AT, 'T') => Ok(1),
            (Alphabet::X01, '0') => Ok(0),
            (Alphabet::X01, '1') => Ok(1),
            _ => Err(WordError::BadLetter(c, self.name())),
        }
    }

    /// Human-readable name of a letter (used by expression parsing/printing).
    pub fn letter_name(self, letter: u8) -> &'static str {
        match (self, letter) {
            (Alphabet::AT, 0) => "A",
            (Alphabet::AT, _) => "T",
            (Alphabet::X01, 0) => "X0",
            (Alphabet::X01, _) => "X1",
        }
    }
}

/// Bidegree of a homogeneous piece: counts of the two letters, smaller
/// letter first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct MultiDegree(pub usize, pub usize);

impl MultiDegree {
    pub fn total(&self) -> usize {
        self.0 + self.1
    }

    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0 + other.0, self.1 + other.1)
    }

    pub fn checked_sub(&self, other: &MultiDegree) -> Option<MultiDegree> {
        Some(MultiDegree(
            self.0.checked_sub(other.0)?,
            self.1.checked_sub(other.1)?,
        ))
    }

    /// All splits `self = left + right` with both parts of positive total
    /// degree, in lexicographic order of the left part.
    pub fn proper_splits(&self) -> Vec<(MultiDegree, MultiDegree)> {
        let mut out = Vec::new();
        for i in 0..=self.0 {
            for j in 0..=self.1 {
                let left = MultiDegree(i, j);
                let right = MultiDegree(self.0 - i, self.1 - j);
                if left.total() > 0 && right.total() > 0 {
                    out.push((left, right));
                }
            }
        }
        out
    }

    /// Homological M-weight of this piece.
    pub fn m_weight(&self, alphabet: Alphabet) -> i64 {
        match alphabet {
            Alphabet::AT => -2 * self.0 as i64,
            Alphabet::X01 => -2 * (self.0 + self.1) as i64,
        }
    }

    /// Geometric W-weight of this piece.
    pub fn w_weight(&self, alphabet: Alphabet) -> i64 {
        match alphabet {
            Alphabet::AT => -((self.0 + self.1) as i64),
            Alphabet::X01 => -((self.0 + 2 * self.1) as i64),
        }
    }
}

/// A word of length at most [`MAX_WORD_LEN`] over letters `{0, 1}`, with
/// letter `i` stored at bit `63 - i` so that words of equal length compare
/// lexicographically as integers.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub fn empty() -> Word {
        Word { len: 0, bits: 0 }
    }

    pub fn letter(l: u8) -> Word {
        debug_assert!(l < 2);
        Word {
            len: 1,
            bits: (l as u64) << 63,
        }
    }

    pub fn from_letters<I: IntoIterator<Item = u8>>(letters: I) -> Result<Word, WordError> {
        let mut w = Word::empty();
        for l in letters {
            if w.len() == MAX_WORD_LEN {
                return Err(WordError::TooLong(MAX_WORD_LEN + 1));
            }
            w = w.push(l);
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.bits >> (63 - i)) & 1) as u8
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    #[must_use]
    pub fn push(&self, l: u8) -> Word {
        debug_assert!(self.len() < MAX_WORD_LEN, "word too long");
        debug_assert!(l < 2);
        Word {
            len: self.len + 1,
            bits: self.bits | ((l as u64) << (63 - self.len())),
        }
    }

    #[must_use]
    pub fn concat(&self, other: &Word) -> Word {
        assert!(
            self.len() + other.len() <= MAX_WORD_LEN,
            "concatenation exceeds the supported word length"
        );
        Word {
            len: self.len + other.len,
            bits: self.bits | (other.bits >> self.len),
        }
    }

    /// First `k` letters.
    #[must_use]
    pub fn prefix(&self, k: usize) -> Word {
        debug_assert!(k <= self.len());
        let bits = if k == 0 {
            0
        } else {
            self.bits & (!0u64 << (64 - k))
        };
        Word { len: k as u8, bits }
    }

    /// Letters from position `i` to the end.
    #[must_use]
    pub fn suffix_from(&self, i: usize) -> Word {
        debug_assert!(i <= self.len());
        Word {
            len: self.len - i as u8,
            bits: if i == 0 { self.bits } else { self.bits << i },
        }
    }

    pub fn split_last(&self) -> (Word, u8) {
        debug_assert!(!self.is_empty());
        (self.prefix(self.len() - 1), self.get(self.len() - 1))
    }

    #[must_use]
    pub fn rotate_left(&self, k: usize) -> Word {
        self.suffix_from(k).concat(&self.prefix(k))
    }

    /// Count of (letter 0, letter 1).
    pub fn multidegree(&self) -> MultiDegree {
        let ones = if self.len == 0 {
            0
        } else {
            (self.bits >> (64 - self.len())).count_ones() as usize
        };
        MultiDegree(self.len() - ones, ones)
    }

    /// True lexicographic comparison (a proper prefix precedes its
    /// extensions), unlike the derived order which sorts by length first.
    pub fn lex_cmp(&self, other: &Word) -> Ordering {
        let common = self.len().min(other.len());
        for i in 0..common {
            match self.get(i).cmp(&other.get(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.len().cmp(&other.len())
    }

    /// A nonempty word is Lyndon when it is strictly smaller than every
    /// proper rotation.
    pub fn is_lyndon(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        (1..self.len()).all(|k| {
            let r = self.rotate_left(k);
            self.bits < r.bits
        })
    }

    pub fn to_display(&self, alphabet: Alphabet) -> String {
        self.letters().map(|l| alphabet.letter_char(l)).collect()
    }

    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Word, WordError> {
        if s.len() > MAX_WORD_LEN {
            return Err(WordError::TooLong(s.len()));
        }
        let mut w = Word::empty();
        for c in s.chars() {
            w = w.push(alphabet.letter_index(c)?);
        }
        Ok(w)
    }
}

/// Length first, then lexicographic within a length.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.len, self.bits).cmp(&(other.len, other.bits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.to_display(Alphabet::AT))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_get_roundtrip() {
        let w = Word::from_letters([1, 1, 0]).unwrap(); // TTA
        assert_eq!(w.len(), 3);
        assert_eq!(w.get(0), 1);
        assert_eq!(w.get(2), 0);
        assert_eq!(w.to_display(Alphabet::AT), "TTA");
        assert_eq!(w.multidegree(), MultiDegree(1, 2));
        assert_eq!(Word::parse("TTA", Alphabet::AT).unwrap(), w);
        assert_eq!(w.to_display(Alphabet::X01), "110");
    }

    #[test]
    fn prefix_suffix_concat() {
        let w = Word::parse("ATTAT", Alphabet::AT).unwrap();
        assert_eq!(w.prefix(2).to_display(Alphabet::AT), "AT");
        assert_eq!(w.suffix_from(2).to_display(Alphabet::AT), "TAT");
        assert_eq!(w.prefix(2).concat(&w.suffix_from(2)), w);
        assert_eq!(w.rotate_left(1).to_display(Alphabet::AT), "TTATA");
        let (head, last) = w.split_last();
        assert_eq!(head.to_display(Alphabet::AT), "ATTA");
        assert_eq!(last, 1);
    }

    #[test]
    fn ordering_within_length_is_lex() {
        let a = Word::parse("AAT", Alphabet::AT).unwrap();
        let b = Word::parse("ATA", Alphabet::AT).unwrap();
        assert!(a < b);
        assert!(a.lex_cmp(&b) == Ordering::Less);
        // Prefix precedes extension in lex order.
        let p = Word::parse("AT", Alphabet::AT).unwrap();
        assert!(p.lex_cmp(&b) == Ordering::Less);
    }

    #[test]
    fn lyndon_recognition() {
        for (s, expect) in [
            ("A", true),
            ("T", true),
            ("AT", true),
            ("TA", false),
            ("AAT", true),
            ("ATA", false),
            ("ATT", true),
            ("ATAT", false),
            ("AATT", true),
            ("AABAB", true), // AABAB with B = T
        ] {
            let s = s.replace('B', "T");
            let w = Word::parse(&s, Alphabet::AT).unwrap();
            assert_eq!(w.is_lyndon(), expect, "{s}");
        }
    }
}
