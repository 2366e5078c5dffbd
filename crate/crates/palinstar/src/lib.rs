//! Distinct palindromes in edge-labelled starlike trees.
//!
//! A starlike tree has a central vertex from which k >= 3 branches extend,
//! every edge carrying a single letter. Each leaf-to-leaf path through the
//! centre spells a word, and the interesting quantity is the number of
//! distinct non-empty palindromic factors appearing across all paths of the
//! tree. This crate counts that quantity (via a palindromic tree shared
//! across paths), evaluates upper bounds on it, and exhaustively searches
//! labelings up to symmetry for the maxima P(k, n) over fixed branch
//! lengths.

pub mod cli;
pub mod eertree;
pub mod search;
pub mod startree;
pub mod words;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("letter index {letter} out of range for alphabet of size {sigma}")]
    InvalidLetter { letter: u8, sigma: usize },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("{0}")]
    Domain(String),
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("search space of {labelings} labelings exceeds the cap of {cap}; raise the cap to override (PALINSTAR_CAP for the CLI)")]
    CapExceeded { labelings: u128, cap: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
