//! Letters, words, and palindrome predicates.
//!
//! Words store letters as small integer indices into an [`Alphabet`];
//! printable symbols appear only at I/O boundaries. The quadratic-time
//! [`Word::palindromic_factors`] enumeration is the reference oracle that the
//! linear-time counting paths are tested against, so it deliberately stays
//! independent of the palindromic-tree machinery.

use std::collections::BTreeSet;
use std::fmt;

use crate::eertree::Eertree;
use crate::{Error, Result};

/// An ordered set of distinct printable symbols; letter `i` of a word is the
/// `i`th symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// The first `sigma` lowercase letters `a`, `b`, ...
    pub fn latin(sigma: usize) -> Result<Alphabet> {
        if sigma == 0 || sigma > 26 {
            return Err(Error::InvalidAlphabet(format!(
                "default alphabet supports 1..=26 symbols, got {sigma}"
            )));
        }
        Ok(Alphabet {
            symbols: (0..sigma).map(|i| (b'a' + i as u8) as char).collect(),
        })
    }

    pub fn from_symbols(symbols: Vec<char>) -> Result<Alphabet> {
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if symbols.len() > u8::MAX as usize {
            return Err(Error::InvalidAlphabet(format!(
                "alphabet of {} symbols exceeds the supported maximum of {}",
                symbols.len(),
                u8::MAX
            )));
        }
        for (i, &c) in symbols.iter().enumerate() {
            if !c.is_ascii_graphic() {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol {c:?} is not a printable ASCII character"
                )));
            }
            if symbols[..i].contains(&c) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, letter: u8) -> Option<char> {
        self.symbols.get(letter as usize).copied()
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match self.index_of(c) {
                Some(i) => letters.push(i),
                None => {
                    return Err(Error::Parse(format!(
                        "character {c:?} is not in the alphabet {:?}",
                        self.symbols
                    )))
                }
            }
        }
        Ok(Word::new(letters))
    }

    pub fn render(&self, w: &Word) -> String {
        w.letters()
            .iter()
            .map(|&c| self.symbol(c).unwrap_or('?'))
            .collect()
    }
}

/// A finite sequence of letter indices. Ordering is lexicographic with
/// shorter prefixes first, which is what every deterministic tie-break in the
/// crate relies on.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn new(letters: Vec<u8>) -> Word {
        Word { letters }
    }

    pub fn empty() -> Word {
        Word::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn max_letter(&self) -> Option<u8> {
        self.letters.iter().copied().max()
    }

    pub fn reversed(&self) -> Word {
        Word::new(self.letters.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word::new(letters)
    }

    /// True iff the word equals its reverse. The empty word is a palindrome
    /// but is excluded from every count in this crate.
    pub fn is_palindrome(&self) -> bool {
        slice_is_palindrome(&self.letters)
    }

    /// The distinct non-empty palindromic factors, by direct enumeration of
    /// all factors. Quadratic in the word length; this is the reference
    /// oracle and must not be routed through the palindromic tree.
    pub fn palindromic_factors(&self) -> BTreeSet<Word> {
        let mut set = BTreeSet::new();
        let n = self.letters.len();
        for i in 0..n {
            for j in i..n {
                let factor = &self.letters[i..=j];
                if slice_is_palindrome(factor) {
                    set.insert(Word::new(factor.to_vec()));
                }
            }
        }
        set
    }

    /// Number of distinct non-empty palindromic factors, in linear amortized
    /// time via the palindromic tree. Always at most `self.len()`.
    pub fn count_distinct_palindromes(&self) -> usize {
        let sigma = self.max_letter().map_or(1, |m| m as usize + 1);
        let mut tree = Eertree::new(sigma);
        tree.insert(&self.letters)
            .expect("letters are within the derived alphabet");
        tree.node_count()
    }

    /// The distinct palindromic suffixes (non-empty), i.e. the palindromes
    /// ending at the last position.
    pub fn palindromic_suffixes(&self) -> BTreeSet<Word> {
        let n = self.letters.len();
        (0..n)
            .filter(|&i| slice_is_palindrome(&self.letters[i..]))
            .map(|i| Word::new(self.letters[i..].to_vec()))
            .collect()
    }
}

fn slice_is_palindrome(s: &[u8]) -> bool {
    let n = s.len();
    (0..n / 2).all(|i| s[i] == s[n - 1 - i])
}

/// Convenience for literals over the default alphabet: `Word::from("aaba")`.
/// Panics on characters outside `a..=z`.
impl From<&str> for Word {
    fn from(s: &str) -> Word {
        Word::new(
            s.bytes()
                .map(|b| {
                    assert!(b.is_ascii_lowercase(), "expected a..=z, got {:?}", b as char);
                    b - b'a'
                })
                .collect(),
        )
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"")?;
        for &c in &self.letters {
            if c < 26 {
                write!(f, "{}", (b'a' + c) as char)?;
            } else {
                write!(f, "<{c}>")?;
            }
        }
        write!(f, "\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    #[test]
    fn reverse() {
        assert_eq!(w("ab").reversed(), w("ba"));
        assert_eq!(w("").reversed(), w(""));
        assert_eq!(w("baaa").reversed(), w("aaab"));
        assert_eq!(w("baaa").reversed().reversed(), w("baaa"));
    }

    #[test]
    fn palindrome_predicate() {
        assert!(w("aba").is_palindrome());
        assert!(!w("ab").is_palindrome());
        assert!(w("bb").is_palindrome());
        assert!(w("").is_palindrome());
    }

    #[test]
    fn factors_oracle() {
        let f = w("aba").palindromic_factors();
        assert_eq!(
            f,
            [w("a"), w("b"), w("aba")].into_iter().collect::<BTreeSet<_>>()
        );

        let f = w("aaaa").palindromic_factors();
        assert_eq!(f.len(), 4);
        assert!(f.contains(&w("aaa")));

        let f = w("ab").palindromic_factors();
        assert_eq!(
            f,
            [w("a"), w("b")].into_iter().collect::<BTreeSet<_>>()
        );
    }

    #[test]
    fn counts() {
        assert_eq!(w("aaaa").count_distinct_palindromes(), 4);
        assert_eq!(w("aaba").count_distinct_palindromes(), 4);
        assert_eq!(w("").count_distinct_palindromes(), 0);
    }

    #[test]
    fn count_of_uniform_word_is_length() {
        for n in 0..60 {
            let word = Word::new(vec![0; n]);
            assert_eq!(word.count_distinct_palindromes(), n);
        }
    }

    #[test]
    fn count_matches_oracle_exhaustive_binary() {
        for len in 0..=10 {
            for bits in 0u32..(1 << len) {
                let letters: Vec<u8> = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
                let word = Word::new(letters);
                assert_eq!(
                    word.count_distinct_palindromes(),
                    word.palindromic_factors().len(),
                    "word {word:?}"
                );
            }
        }
    }

    #[test]
    fn count_matches_oracle_exhaustive_ternary() {
        for len in 0..=7 {
            for mut code in 0u32..3u32.pow(len) {
                let letters: Vec<u8> = (0..len)
                    .map(|_| {
                        let c = (code % 3) as u8;
                        code /= 3;
                        c
                    })
                    .collect();
                let word = Word::new(letters);
                assert_eq!(
                    word.count_distinct_palindromes(),
                    word.palindromic_factors().len(),
                    "word {word:?}"
                );
            }
        }
    }

    #[test]
    fn palindromic_suffixes_of_word() {
        assert_eq!(
            w("aaba").palindromic_suffixes(),
            [w("a"), w("aba")].into_iter().collect::<BTreeSet<_>>()
        );
        assert!(w("").palindromic_suffixes().is_empty());
    }

    #[test]
    fn alphabet_construction() {
        let a = Alphabet::latin(3).unwrap();
        assert_eq!(a.size(), 3);
        assert_eq!(a.symbols(), &['a', 'b', 'c']);
        assert_eq!(a.index_of('c'), Some(2));
        assert_eq!(a.symbol(1), Some('b'));

        assert!(Alphabet::latin(0).is_err());
        assert!(Alphabet::latin(27).is_err());
        assert!(Alphabet::from_symbols(vec!['a', 'a']).is_err());
        assert!(Alphabet::from_symbols(vec![]).is_err());
        assert!(Alphabet::from_symbols(vec!['a', '\n']).is_err());
    }

    #[test]
    fn alphabet_parse_and_render() {
        let a = Alphabet::from_symbols(vec!['x', 'y']).unwrap();
        let word = a.parse_word("xyyx").unwrap();
        assert_eq!(word.letters(), &[0, 1, 1, 0]);
        assert_eq!(a.render(&word), "xyyx");
        assert!(a.parse_word("xz").is_err());
    }
}
