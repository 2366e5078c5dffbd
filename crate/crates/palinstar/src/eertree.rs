//! Palindromic tree (eertree) with multi-string insertion.
//!
//! The structure keeps one node per distinct non-empty palindrome seen so
//! far, plus two roots: an imaginary root of length -1 and the empty-word
//! root of length 0. A transition by letter `c` from the node of palindrome
//! `p` leads to the node of `c·p·c` (from the imaginary root, to the
//! single-letter palindrome `c`). Suffix links point to the longest proper
//! palindromic suffix.
//!
//! Feeding a letter extends the current word by one position; at most one
//! node is created per position, because two palindromes ending at the same
//! position are suffix/prefix of one another, so only the longest can be new.
//! [`Eertree::start_new_string`] resets the insertion point while keeping
//! all nodes, which makes the node count the size of the union of the
//! palindrome sets of every string fed in, each counted once.

use crate::words::Word;
use crate::{Error, Result};

/// Node id 0 is the imaginary root; it is never the target of a transition,
/// so it doubles as the "no transition" sentinel.
const NONE: u32 = 0;
const IMAGINARY: u32 = 0;
const EMPTY: u32 = 1;

#[derive(Clone, Copy)]
struct Node {
    len: i32,
    suffix: u32,
}

pub struct Eertree {
    sigma: usize,
    nodes: Vec<Node>,
    /// Transition table, `next[id * sigma + c]`; flat so the inner loop is a
    /// single indexed load regardless of alphabet size.
    next: Vec<u32>,
    /// Letters of the string currently being fed.
    history: Vec<u8>,
    /// Node of the longest palindromic suffix of the current string.
    active: u32,
}

impl Eertree {
    pub fn new(sigma: usize) -> Eertree {
        assert!(sigma >= 1, "alphabet must have at least one letter");
        let mut t = Eertree {
            sigma,
            nodes: Vec::new(),
            next: Vec::new(),
            history: Vec::new(),
            active: EMPTY,
        };
        t.reset();
        t
    }

    /// Drop all palindromes and start over, keeping allocations.
    pub fn reset(&mut self) {
        self.nodes.clear();
        self.nodes.push(Node { len: -1, suffix: IMAGINARY });
        self.nodes.push(Node { len: 0, suffix: IMAGINARY });
        self.next.clear();
        self.next.resize(2 * self.sigma, NONE);
        self.history.clear();
        self.active = EMPTY;
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Number of distinct non-empty palindromes over all strings fed so far.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 2
    }

    /// Begin a fresh string: the insertion point resets to the empty root,
    /// the node set persists.
    pub fn start_new_string(&mut self) {
        self.history.clear();
        self.active = EMPTY;
    }

    /// Feed one letter of the current string. Returns true iff a node was
    /// created, i.e. a palindrome made its first appearance ending here.
    pub fn add_letter(&mut self, c: u8) -> Result<bool> {
        if c as usize >= self.sigma {
            return Err(Error::InvalidLetter { letter: c, sigma: self.sigma });
        }
        self.history.push(c);
        let pos = self.history.len() - 1;

        let x = self.extendable(self.active, c, pos);
        let slot = x as usize * self.sigma + c as usize;
        if self.next[slot] != NONE {
            self.active = self.next[slot];
            return Ok(false);
        }

        let len = self.nodes[x as usize].len + 2;
        let suffix = if len == 1 {
            EMPTY
        } else {
            // The next extendable node in the suffix chain gives the longest
            // proper palindromic suffix c·q·c; it already exists because it
            // occurred earlier, and its creation installed this transition.
            let z = self.extendable(self.nodes[x as usize].suffix, c, pos);
            self.next[z as usize * self.sigma + c as usize]
        };
        debug_assert_ne!(suffix, NONE);

        let id = self.nodes.len() as u32;
        self.nodes.push(Node { len, suffix });
        self.next.extend(std::iter::repeat(NONE).take(self.sigma));
        self.next[slot] = id;
        self.active = id;
        Ok(true)
    }

    /// First node in the suffix chain from `v` whose palindrome, as a suffix
    /// of the current string ending at `pos - 1`, is preceded by `c`. The
    /// imaginary root (length -1) always qualifies: the "preceding" position
    /// is `pos` itself, which holds `c`.
    fn extendable(&self, mut v: u32, c: u8, pos: usize) -> u32 {
        loop {
            let len = self.nodes[v as usize].len;
            if len < pos as i32 {
                let before = (pos as i32 - len - 1) as usize;
                if self.history[before] == c {
                    return v;
                }
            }
            v = self.nodes[v as usize].suffix;
        }
    }

    /// Feed a whole string as a fresh word; returns how many new distinct
    /// palindromes it contributed.
    pub fn insert(&mut self, letters: &[u8]) -> Result<usize> {
        self.start_new_string();
        let mut created = 0;
        for &c in letters {
            created += self.add_letter(c)? as usize;
        }
        Ok(created)
    }

    pub fn insert_word(&mut self, w: &Word) -> Result<usize> {
        self.insert(w.letters())
    }

    /// Length of the longest palindromic suffix of the current string.
    pub fn longest_suffix_palindrome_len(&self) -> usize {
        self.nodes[self.active as usize].len.max(0) as usize
    }

    /// The palindrome of every non-root node, in creation order,
    /// reconstructed by walking transitions from the roots.
    pub fn palindromes(&self) -> Vec<Word> {
        self.reconstruct()[2..]
            .iter()
            .map(|l| Word::new(l.clone()))
            .collect()
    }

    /// Debug view: (palindrome, length, suffix-link target) per non-root
    /// node, where `None` marks a link to the empty root.
    pub fn debug_dump(&self) -> Vec<(Word, usize, Option<Word>)> {
        let letters = self.reconstruct();
        (2..self.nodes.len())
            .map(|id| {
                let suffix = self.nodes[id].suffix as usize;
                let target = if suffix >= 2 {
                    Some(Word::new(letters[suffix].clone()))
                } else {
                    None
                };
                (Word::new(letters[id].clone()), self.nodes[id].len as usize, target)
            })
            .collect()
    }

    fn reconstruct(&self) -> Vec<Vec<u8>> {
        let mut letters = vec![Vec::new(); self.nodes.len()];
        let mut stack = vec![IMAGINARY, EMPTY];
        while let Some(v) = stack.pop() {
            for c in 0..self.sigma {
                let t = self.next[v as usize * self.sigma + c];
                if t == NONE {
                    continue;
                }
                let mut pal = Vec::with_capacity(letters[v as usize].len() + 2);
                if v == IMAGINARY {
                    pal.push(c as u8);
                } else {
                    pal.push(c as u8);
                    pal.extend_from_slice(&letters[v as usize]);
                    pal.push(c as u8);
                }
                letters[t as usize] = pal;
                stack.push(t);
            }
        }
        letters
    }

    #[cfg(test)]
    fn suffix_chain_lens(&self, mut id: u32) -> Vec<i32> {
        let mut lens = Vec::new();
        while id != IMAGINARY {
            lens.push(self.nodes[id as usize].len);
            id = self.nodes[id as usize].suffix;
        }
        lens.push(-1);
        lens
    }
}
