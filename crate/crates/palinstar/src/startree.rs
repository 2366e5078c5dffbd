//! Starlike trees, cross-path decomposition, palindrome counting and bounds.
//!
//! A starlike tree is given by its k >= 3 branch words, each read from the
//! central vertex outward. The leaf-to-leaf path joining branches i and j
//! spells `R(b_i)·b_j`; since each branch is a suffix of every cross path
//! ending in it, the palindromic factors of the cross paths alone cover
//! every palindrome of the tree, and counting reduces to feeding the cross
//! paths into one shared palindromic tree.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::eertree::Eertree;
use crate::words::{Alphabet, Word};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarlikeTree {
    alphabet: Alphabet,
    branches: Vec<Word>,
}

impl StarlikeTree {
    pub fn new(alphabet: Alphabet, branches: Vec<Word>) -> Result<StarlikeTree> {
        if branches.len() < 3 {
            return Err(Error::InvalidTree(format!(
                "a starlike tree needs at least 3 branches, got {}",
                branches.len()
            )));
        }
        let sigma = alphabet.size();
        for (i, b) in branches.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::InvalidTree(format!("branch {} is empty", i + 1)));
            }
            if let Some(m) = b.max_letter() {
                if m as usize >= sigma {
                    return Err(Error::InvalidLetter { letter: m, sigma });
                }
            }
        }
        Ok(StarlikeTree { alphabet, branches })
    }

    /// Convenience over the default alphabet, sized by the letters present:
    /// `StarlikeTree::latin(&["aa", "ba", "bb"])`.
    pub fn latin(branches: &[&str]) -> Result<StarlikeTree> {
        let words: Vec<Word> = branches.iter().map(|s| Word::from(*s)).collect();
        let sigma = words
            .iter()
            .filter_map(Word::max_letter)
            .max()
            .map_or(1, |m| m as usize + 1);
        StarlikeTree::new(Alphabet::latin(sigma)?, words)
    }

    pub fn k(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Word] {
        &self.branches
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.size()
    }

    /// Common branch length, when all branches have one.
    pub fn uniform_branch_len(&self) -> Option<usize> {
        let n = self.branches[0].len();
        self.branches.iter().all(|b| b.len() == n).then_some(n)
    }

    pub fn decomposition(&self) -> PathDecomposition {
        PathDecomposition::new(self)
    }

    /// The cross-path words in decomposition order.
    pub fn cross_paths(&self) -> Vec<Word> {
        self.decomposition()
            .paths()
            .iter()
            .map(|p| p.word.clone())
            .collect()
    }

    /// Number of distinct non-empty palindromes over all simple paths of the
    /// tree: every cross path is fed into one shared palindromic tree and
    /// the node count read off.
    pub fn count_palindromes(&self) -> usize {
        let ordered = order_branches(&self.branches);
        let mut tree = Eertree::new(self.sigma());
        feed_cross_paths(&mut tree, &ordered)
    }

    /// Independent oracle: the union of the brute-force palindromic factor
    /// sets of the cross paths.
    pub fn oracle_palindromes(&self) -> BTreeSet<Word> {
        let mut set = BTreeSet::new();
        for path in self.cross_paths() {
            set.append(&mut path.palindromic_factors());
        }
        set
    }

    /// Upper bound from the sorted branch lengths:
    /// `|b_1| + sum_{i>=2} (i-1)·|b_i|` with lengths non-increasing.
    pub fn weighted_length_bound(&self) -> usize {
        let mut lens: Vec<usize> = self.branches.iter().map(Word::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens[0] + lens.iter().enumerate().skip(1).map(|(i, l)| i * l).sum::<usize>()
    }

    /// Per-path accounting: how many palindromes each cross path adds when
    /// the paths are processed in decomposition order, against the per-path
    /// bound (`|b_1|+|b_2|` for the first path, `|b_j|` afterwards).
    pub fn ledger(&self) -> PalindromeLedger {
        let ordered = order_branches(&self.branches);
        let mut tree = Eertree::new(self.sigma());
        let mut entries = Vec::new();
        let mut total = 0;
        let mut first = true;
        for i in 0..ordered.len() {
            for j in (i + 1)..ordered.len() {
                let new_count = feed_one_path(&mut tree, ordered[i], ordered[j]);
                let bound = if first {
                    ordered[i].len() + ordered[j].len()
                } else {
                    ordered[j].len()
                };
                first = false;
                total += new_count;
                entries.push(LedgerEntry { i, j, new_count, bound });
            }
        }
        PalindromeLedger { entries, total }
    }

    /// Probe of the final-position accounting for binary three-branch trees
    /// of equal length. Two branches y, z share their last letter; the paths
    /// are processed in the order R(x)y, R(y)z, R(x)z, and the result
    /// reports, for the final position of R(x)z:
    ///
    /// * which of its suffix palindromes do not end the path R(x)y
    ///   (`unmatched_suffix_palindromes`), and
    /// * which palindromes make their overall first appearance there
    ///   (`new_at_last_position`).
    pub fn last_position_check(&self) -> Result<LastPositionCheck> {
        if self.sigma() != 2 {
            return Err(Error::Inapplicable(format!(
                "last-position check requires a binary alphabet, got size {}",
                self.sigma()
            )));
        }
        if self.k() != 3 {
            return Err(Error::Inapplicable(format!(
                "last-position check requires exactly 3 branches, got {}",
                self.k()
            )));
        }
        let n = self.uniform_branch_len().ok_or_else(|| {
            Error::Inapplicable("last-position check requires equal branch lengths".into())
        })?;

        let ordered = order_branches(&self.branches);
        // Pick the lexicographically least index pair sharing the final
        // letter; over a binary alphabet one always exists.
        let (yi, zi) = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .find(|&(i, j)| ordered[i].letters()[n - 1] == ordered[j].letters()[n - 1])
            .expect("three branches over two letters share a final letter");
        let xi = 3 - yi - zi;
        let (x, y, z) = (ordered[xi].clone(), ordered[yi].clone(), ordered[zi].clone());

        let rxy = x.reversed().concat(&y);
        let ryz = y.reversed().concat(&z);
        let rxz = x.reversed().concat(&z);

        let unmatched: Vec<Word> = rxz
            .palindromic_suffixes()
            .difference(&rxy.palindromic_suffixes())
            .cloned()
            .collect();

        let mut tree = Eertree::new(2);
        tree.insert_word(&rxy).expect("validated letters");
        tree.insert_word(&ryz).expect("validated letters");
        tree.start_new_string();
        let mut created_last = false;
        for &c in rxz.letters() {
            created_last = tree.add_letter(c).expect("validated letters");
        }
        let new_at_last = if created_last {
            let l = tree.longest_suffix_palindrome_len();
            vec![Word::new(rxz.letters()[rxz.len() - l..].to_vec())]
        } else {
            Vec::new()
        };

        Ok(LastPositionCheck {
            x,
            y,
            z,
            unmatched_suffix_palindromes: unmatched,
            new_at_last_position: new_at_last,
        })
    }
}

/// Branches sorted by non-increasing length, ties broken lexicographically.
fn order_branches(branches: &[Word]) -> Vec<&Word> {
    let mut ordered: Vec<&Word> = branches.iter().collect();
    ordered.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    ordered
}

/// Feed the cross path R(left)·right as a fresh string; returns the number
/// of palindromes making their first appearance on it.
pub(crate) fn feed_one_path(tree: &mut Eertree, left: &Word, right: &Word) -> usize {
    tree.start_new_string();
    let mut created = 0;
    for &c in left.letters().iter().rev() {
        created += tree.add_letter(c).expect("validated letters") as usize;
    }
    for &c in right.letters() {
        created += tree.add_letter(c).expect("validated letters") as usize;
    }
    created
}

/// Feed every cross path of the ordered branches; returns the final node
/// count, i.e. the distinct palindromes of the whole tree.
pub(crate) fn feed_cross_paths(tree: &mut Eertree, ordered: &[&Word]) -> usize {
    for i in 0..ordered.len() {
        for j in (i + 1)..ordered.len() {
            feed_one_path(tree, ordered[i], ordered[j]);
        }
    }
    tree.node_count()
}

/// The cross paths of a tree, in deterministic processing order.
#[derive(Clone, Debug)]
pub struct PathDecomposition {
    ordered: Vec<Word>,
    paths: Vec<CrossPath>,
}

/// One leaf-to-leaf path: `word = R(ordered[i])·ordered[j]` with `i < j`.
#[derive(Clone, Debug)]
pub struct CrossPath {
    pub i: usize,
    pub j: usize,
    pub word: Word,
}

impl PathDecomposition {
    pub fn new(tree: &StarlikeTree) -> PathDecomposition {
        let ordered: Vec<Word> = order_branches(tree.branches())
            .into_iter()
            .cloned()
            .collect();
        let mut paths = Vec::with_capacity(ordered.len() * (ordered.len() - 1) / 2);
        for i in 0..ordered.len() {
            for j in (i + 1)..ordered.len() {
                paths.push(CrossPath {
                    i,
                    j,
                    word: ordered[i].reversed().concat(&ordered[j]),
                });
            }
        }
        PathDecomposition { ordered, paths }
    }

    pub fn ordered_branches(&self) -> &[Word] {
        &self.ordered
    }

    pub fn paths(&self) -> &[CrossPath] {
        &self.paths
    }
}

#[derive(Clone, Debug)]
pub struct PalindromeLedger {
    entries: Vec<LedgerEntry>,
    total: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    /// Indices into the decomposition's ordered branches, `i < j`.
    pub i: usize,
    pub j: usize,
    pub new_count: usize,
    pub bound: usize,
}

impl PalindromeLedger {
    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    /// Sum of the per-path new counts; equals the tree's palindrome count.
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn within_bounds(&self) -> bool {
        self.entries.iter().all(|e| e.new_count <= e.bound)
    }
}

#[derive(Clone, Debug)]
pub struct LastPositionCheck {
    pub x: Word,
    pub y: Word,
    pub z: Word,
    /// Suffix palindromes of R(x)z that do not end the path R(x)y.
    pub unmatched_suffix_palindromes: Vec<Word>,
    /// Palindromes first appearing at the very last position of R(x)z.
    pub new_at_last_position: Vec<Word>,
}

/// Upper bound for k branches of equal length n: `(1 + k(k-1)/2)·n`.
pub fn uniform_bound(k: usize, n: usize) -> Result<usize> {
    if k < 3 {
        return Err(Error::Domain(format!("need k >= 3 branches, got {k}")));
    }
    if n < 1 {
        return Err(Error::Domain("need branch length n >= 1".into()));
    }
    Ok((1 + k * (k - 1) / 2) * n)
}

/// Sharpened bound for three equal-length branches over a binary alphabet:
/// `4n - 1`.
pub fn binary_three_branch_bound(n: usize) -> Result<usize> {
    if n < 1 {
        return Err(Error::Domain("need branch length n >= 1".into()));
    }
    Ok(4 * n - 1)
}

/// On-disk tree description: branch words as symbol strings plus an optional
/// alphabet (single-character strings). When absent, the alphabet is the
/// sorted set of characters appearing in the branches.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    pub branches: Vec<String>,
}

impl TreeFile {
    pub fn parse(json: &str) -> Result<TreeFile> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_tree(&self) -> Result<StarlikeTree> {
        let alphabet = match &self.alphabet {
            Some(symbols) => {
                let mut chars = Vec::with_capacity(symbols.len());
                for s in symbols {
                    let mut it = s.chars();
                    match (it.next(), it.next()) {
                        (Some(c), None) => chars.push(c),
                        _ => {
                            return Err(Error::InvalidAlphabet(format!(
                                "alphabet entry {s:?} is not a single character"
                            )))
                        }
                    }
                }
                Alphabet::from_symbols(chars)?
            }
            None => {
                let chars: BTreeSet<char> = self.branches.iter().flat_map(|b| b.chars()).collect();
                Alphabet::from_symbols(chars.into_iter().collect())?
            }
        };
        let branches = self
            .branches
            .iter()
            .map(|b| alphabet.parse_word(b))
            .collect::<Result<Vec<_>>>()?;
        StarlikeTree::new(alphabet, branches)
    }
}

impl From<&StarlikeTree> for TreeFile {
    fn from(tree: &StarlikeTree) -> TreeFile {
        TreeFile {
            alphabet: Some(
                tree.alphabet()
                    .symbols()
                    .iter()
                    .map(|c| c.to_string())
                    .collect(),
            ),
            branches: tree
                .branches()
                .iter()
                .map(|b| tree.alphabet().render(b))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(branches: &[&str]) -> StarlikeTree {
        StarlikeTree::latin(branches).unwrap()
    }

    fn words(strings: &[&str]) -> Vec<Word> {
        strings.iter().map(|s| Word::from(*s)).collect()
    }

    #[test]
    fn validation() {
        assert!(matches!(
            StarlikeTree::latin(&["ab"]),
            Err(Error::InvalidTree(_))
        ));
        assert!(matches!(
            StarlikeTree::latin(&["a", "b", ""]),
            Err(Error::InvalidTree(_))
        ));
        let alpha = Alphabet::latin(2).unwrap();
        assert!(matches!(
            StarlikeTree::new(alpha, words(&["a", "b", "c"])),
            Err(Error::InvalidLetter { letter: 2, sigma: 2 })
        ));
    }

    #[test]
    fn cross_paths_examples() {
        assert_eq!(
            tree(&["aa", "ba", "bb"]).cross_paths(),
            words(&["aaba", "aabb", "abbb"])
        );
        assert_eq!(tree(&["a", "a", "b"]).cross_paths(), words(&["aa", "ab", "ab"]));
        assert_eq!(
            tree(&["aaaa", "baaa", "bbaa"]).cross_paths(),
            words(&["aaaabaaa", "aaaabbaa", "aaabbbaa"])
        );
    }

    #[test]
    fn decomposition_orders_by_length_then_lex() {
        let d = tree(&["b", "aaa", "ab"]).decomposition();
        assert_eq!(d.ordered_branches(), words(&["aaa", "ab", "b"]).as_slice());
        assert_eq!(d.paths().len(), 3);
        assert_eq!(d.paths()[0].word, Word::from("aaaab"));
        assert_eq!((d.paths()[2].i, d.paths()[2].j), (1, 2));
    }

    #[test]
    fn count_examples() {
        assert_eq!(tree(&["aa", "ba", "bb"]).count_palindromes(), 6);
        assert_eq!(tree(&["a", "a", "a", "b", "b"]).count_palindromes(), 4);
        assert_eq!(tree(&["a", "a", "b", "b", "c"]).count_palindromes(), 5);
    }

    #[test]
    fn oracle_examples() {
        let set = tree(&["aa", "ba", "bb"]).oracle_palindromes();
        let expected: BTreeSet<Word> = words(&["a", "aa", "b", "aba", "bb", "bbb"])
            .into_iter()
            .collect();
        assert_eq!(set, expected);

        let set = tree(&["a", "a", "a"]).oracle_palindromes();
        assert_eq!(set, words(&["a", "aa"]).into_iter().collect());

        let set = tree(&["a", "b", "c"]).oracle_palindromes();
        assert_eq!(set, words(&["a", "b", "c"]).into_iter().collect());
    }

    #[test]
    fn count_matches_oracle_small_exhaustive() {
        // all binary (3, n<=3) and (4, n<=2) labelings
        for (k, n_max) in [(3usize, 3usize), (4, 2)] {
            for n in 1..=n_max {
                let total = 1u32 << (k * n);
                for code in 0..total {
                    let branches: Vec<Word> = (0..k)
                        .map(|b| {
                            Word::new(
                                (0..n).map(|t| ((code >> (b * n + t)) & 1) as u8).collect(),
                            )
                        })
                        .collect();
                    let t = StarlikeTree::new(Alphabet::latin(2).unwrap(), branches).unwrap();
                    assert_eq!(t.count_palindromes(), t.oracle_palindromes().len());
                }
            }
        }
    }

    #[test]
    fn weighted_length_bound_examples() {
        assert_eq!(tree(&["aaaa", "abab", "bbbb"]).weighted_length_bound(), 16);
        assert_eq!(tree(&["a", "a", "a", "b", "b"]).weighted_length_bound(), 11);
        // lengths (5, 3, 1), given out of order
        assert_eq!(tree(&["abb", "a", "ababa"]).weighted_length_bound(), 10);
    }

    #[test]
    fn uniform_bound_examples() {
        assert_eq!(uniform_bound(3, 4).unwrap(), 16);
        assert_eq!(uniform_bound(4, 3).unwrap(), 21);
        assert_eq!(uniform_bound(5, 5).unwrap(), 55);
        assert!(uniform_bound(2, 4).is_err());
        assert!(uniform_bound(3, 0).is_err());
    }

    #[test]
    fn binary_three_branch_bound_examples() {
        assert_eq!(binary_three_branch_bound(1).unwrap(), 3);
        assert_eq!(binary_three_branch_bound(5).unwrap(), 19);
        assert_eq!(binary_three_branch_bound(2).unwrap(), 7);
        assert!(binary_three_branch_bound(0).is_err());
    }

    #[test]
    fn ledger_examples() {
        let ledger = tree(&["aa", "ba", "bb"]).ledger();
        let news: Vec<usize> = ledger.entries().iter().map(|e| e.new_count).collect();
        let bounds: Vec<usize> = ledger.entries().iter().map(|e| e.bound).collect();
        assert_eq!(news, vec![4, 1, 1]);
        assert_eq!(bounds, vec![4, 2, 2]);
        assert_eq!(ledger.total(), 6);
        assert!(ledger.within_bounds());

        let ledger = tree(&["a", "a", "a"]).ledger();
        let news: Vec<usize> = ledger.entries().iter().map(|e| e.new_count).collect();
        assert_eq!(news, vec![2, 0, 0]);
        assert_eq!(ledger.total(), 2);
    }

    #[test]
    fn ledger_total_equals_count() {
        for t in [
            tree(&["aa", "ba", "bb"]),
            tree(&["aaaa", "baaa", "bbaa"]),
            tree(&["abb", "a", "ababa"]),
            tree(&["a", "a", "b", "b", "c"]),
        ] {
            assert_eq!(t.ledger().total(), t.count_palindromes());
        }
    }

    #[test]
    fn last_position_check_examples() {
        let check = tree(&["aa", "ba", "bb"]).last_position_check().unwrap();
        assert_eq!(check.y, Word::from("aa"));
        assert_eq!(check.z, Word::from("ba"));
        assert_eq!(check.x, Word::from("bb"));
        assert!(check.new_at_last_position.is_empty());
        assert!(check.unmatched_suffix_palindromes.is_empty());

        let check = tree(&["aa", "aa", "aa"]).last_position_check().unwrap();
        assert!(check.unmatched_suffix_palindromes.is_empty());
        assert!(check.new_at_last_position.is_empty());
    }

    #[test]
    fn last_position_check_preconditions() {
        assert!(matches!(
            tree(&["a", "b", "c"]).last_position_check(),
            Err(Error::Inapplicable(_))
        ));
        assert!(matches!(
            tree(&["aa", "ba", "bb", "ab"]).last_position_check(),
            Err(Error::Inapplicable(_))
        ));
        assert!(matches!(
            tree(&["aa", "b", "ab"]).last_position_check(),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn count_invariant_under_branch_and_letter_permutation() {
        let base = tree(&["aa", "ba", "bb"]);
        let permuted = tree(&["bb", "aa", "ba"]);
        let relabeled = tree(&["bb", "ab", "aa"]); // a<->b
        assert_eq!(base.count_palindromes(), permuted.count_palindromes());
        assert_eq!(base.count_palindromes(), relabeled.count_palindromes());
    }

    #[test]
    fn tree_file_round_trip() {
        let json = r#"{"alphabet":["a","b"],"branches":["aaaa","baaa","bbaa"]}"#;
        let t = TreeFile::parse(json).unwrap().to_tree().unwrap();
        assert_eq!(t.count_palindromes(), 14);

        let back = TreeFile::from(&t);
        let again = back.to_tree().unwrap();
        assert_eq!(again, t);

        let serialized = serde_json::to_string(&back).unwrap();
        let reparsed = TreeFile::parse(&serialized).unwrap().to_tree().unwrap();
        assert_eq!(reparsed, t);
    }

    #[test]
    fn tree_file_alphabet_inference() {
        let json = r#"{"branches":["ca","ab","bc"]}"#;
        let t = TreeFile::parse(json).unwrap().to_tree().unwrap();
        assert_eq!(t.alphabet().symbols(), &['a', 'b', 'c']);
    }

    #[test]
    fn tree_file_errors() {
        assert!(TreeFile::parse("{").is_err());
        let bad = TreeFile {
            alphabet: Some(vec!["ab".into()]),
            branches: vec!["a".into(); 3],
        };
        assert!(matches!(bad.to_tree(), Err(Error::InvalidAlphabet(_))));
        let missing = TreeFile {
            alphabet: Some(vec!["a".into()]),
            branches: vec!["ab".into(); 3],
        };
        assert!(missing.to_tree().is_err());
    }
}
