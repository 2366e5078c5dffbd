//! Exhaustive search over labelings of (k, n)-starlike trees.
//!
//! The palindrome count is invariant under branch permutations and alphabet
//! relabelings, so the search enumerates one representative per equivalence
//! class: branch tuples sorted non-decreasingly whose concatenation uses
//! letters in first-occurrence order, filtered down to the class minimum by
//! brute-force minimization over all alphabet permutations. The labeling
//! space is split into independent chunks by fixed prefixes of the first
//! branch; per-chunk records merge in a fixed order, so results are
//! identical for any worker count.

use std::cmp::Ordering;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::eertree::Eertree;
use crate::startree::{
    binary_three_branch_bound, feed_one_path, uniform_bound, StarlikeTree,
};
use crate::words::{Alphabet, Word};
use crate::{Error, Result};

/// Default cap on the raw labeling space sigma^(k·n).
pub const DEFAULT_MAX_LABELINGS: u64 = 1 << 26;
/// Default cap on stored witnesses; the number of classes attaining the
/// maximum is always reported exactly.
pub const DEFAULT_WITNESS_CAP: usize = 1000;

/// Canonicalization is brute force over alphabet permutations, so alphabets
/// beyond this size are rejected up front.
const MAX_SEARCH_SIGMA: usize = 8;

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub k: usize,
    /// Common branch length.
    pub n: usize,
    pub sigma: usize,
    pub collect_witnesses: bool,
    pub worker_count: usize,
    /// Refuse to enumerate when sigma^(k·n) exceeds this.
    pub max_labelings: u64,
    pub witness_cap: usize,
}

impl SearchSpec {
    pub fn new(k: usize, n: usize, sigma: usize) -> SearchSpec {
        SearchSpec {
            k,
            n,
            sigma,
            collect_witnesses: false,
            worker_count: std::thread::available_parallelism().map_or(1, |p| p.get()),
            max_labelings: DEFAULT_MAX_LABELINGS,
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }

    /// Size of the raw labeling space, saturating at `u128::MAX`.
    pub fn labelings(&self) -> u128 {
        if self.sigma <= 1 {
            return 1;
        }
        match u32::try_from(self.k * self.n) {
            Ok(e) => (self.sigma as u128).checked_pow(e).unwrap_or(u128::MAX),
            Err(_) => u128::MAX,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 3 {
            return Err(Error::Domain(format!("need k >= 3 branches, got {}", self.k)));
        }
        if self.n < 1 {
            return Err(Error::Domain("need branch length n >= 1".into()));
        }
        if self.sigma < 1 || self.sigma > MAX_SEARCH_SIGMA {
            return Err(Error::Domain(format!(
                "alphabet size must be in 1..={MAX_SEARCH_SIGMA}, got {}",
                self.sigma
            )));
        }
        if self.worker_count < 1 {
            return Err(Error::Domain("need at least one worker".into()));
        }
        let labelings = self.labelings();
        if labelings > self.max_labelings as u128 {
            return Err(Error::CapExceeded { labelings, cap: self.max_labelings });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub k: usize,
    pub n: usize,
    pub sigma: usize,
    /// Empirical maximum palindrome count over all labelings.
    pub max_count: usize,
    /// Canonical witnesses attaining the maximum, lexicographically sorted,
    /// truncated to the witness cap.
    pub witnesses: Vec<StarlikeTree>,
    /// Exact number of canonical classes attaining the maximum.
    pub witnesses_total: u64,
    pub classes_examined: u64,
    pub labelings_total: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn to_json(&self) -> serde_json::Value {
        let witnesses: Vec<Vec<String>> = self
            .witnesses
            .iter()
            .map(|t| {
                t.branches()
                    .iter()
                    .map(|b| t.alphabet().render(b))
                    .collect()
            })
            .collect();
        serde_json::json!({
            "k": self.k,
            "n": self.n,
            "sigma": self.sigma,
            "max": self.max_count,
            "witnesses": witnesses,
            "witnesses_total": self.witnesses_total,
            "classes": self.classes_examined,
            "labelings": self.labelings_total,
            "elapsed_ms": self.elapsed.as_millis() as u64,
        })
    }
}

/// The representative of the tree's equivalence class under branch
/// permutation and alphabet relabeling: the lexicographically least sorted
/// branch tuple over all alphabet permutations. Idempotent and
/// count-preserving.
pub fn canonical_form(tree: &StarlikeTree) -> StarlikeTree {
    let sigma = tree.sigma();
    assert!(
        sigma <= MAX_SEARCH_SIGMA,
        "canonicalization is factorial in the alphabet size; {sigma} is too large"
    );
    let mut best: Option<Vec<Word>> = None;
    for perm in letter_permutations(sigma) {
        let mut branches: Vec<Word> = tree
            .branches()
            .iter()
            .map(|w| Word::new(w.letters().iter().map(|&c| perm[c as usize]).collect()))
            .collect();
        branches.sort();
        if best.as_ref().is_none_or(|b| branches < *b) {
            best = Some(branches);
        }
    }
    StarlikeTree::new(tree.alphabet().clone(), best.expect("at least one permutation"))
        .expect("relabeling preserves validity")
}

/// Number of labelings (ordered branch tuples) in the tree's equivalence
/// class, by orbit counting: `k!·sigma! / |stabilizer|`.
pub fn orbit_size(tree: &StarlikeTree) -> u64 {
    let k = tree.k();
    let sigma = tree.sigma();
    assert!(sigma <= MAX_SEARCH_SIGMA && k <= 20, "orbit counting overflows");

    let mut sorted: Vec<&Word> = tree.branches().iter().collect();
    sorted.sort();
    let multiset: Vec<Vec<u8>> = sorted.iter().map(|w| w.letters().to_vec()).collect();

    // permutations fixing the branch multiset
    let fixing = letter_permutations(sigma)
        .into_iter()
        .filter(|perm| {
            let mut relabeled: Vec<Vec<u8>> = multiset
                .iter()
                .map(|w| w.iter().map(|&c| perm[c as usize]).collect())
                .collect();
            relabeled.sort();
            relabeled == multiset
        })
        .count() as u128;

    // product of factorials of branch multiplicities
    let mut mult_product: u128 = 1;
    let mut run = 1u128;
    for i in 1..multiset.len() {
        if multiset[i] == multiset[i - 1] {
            run += 1;
            mult_product *= run;
        } else {
            run = 1;
        }
    }

    let group = factorial(k) * factorial(sigma);
    (group / (fixing * mult_product)) as u64
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn letter_permutations(sigma: usize) -> Vec<Vec<u8>> {
    fn rec(sigma: usize, current: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
        if current.len() == sigma {
            out.push(current.clone());
            return;
        }
        for c in 0..sigma {
            if !used[c] {
                used[c] = true;
                current.push(c as u8);
                rec(sigma, current, used, out);
                current.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(sigma, &mut Vec::new(), &mut vec![false; sigma], &mut out);
    out
}

/// Depth-first generator of candidate branch tuples: words of length n in
/// non-decreasing order whose concatenation uses letters in first-occurrence
/// order. Every canonical representative is of this shape, so a final
/// minimality filter over alphabet permutations yields exactly the classes.
struct CandidateGen<F: FnMut(&[u8])> {
    k: usize,
    n: usize,
    sigma: u8,
    letters: Vec<u8>,
    visit: F,
}

impl<F: FnMut(&[u8])> CandidateGen<F> {
    fn new(k: usize, n: usize, sigma: usize, visit: F) -> Self {
        CandidateGen { k, n, sigma: sigma as u8, letters: vec![0; k * n], visit }
    }

    /// Enumerate all candidates whose first branch starts with `prefix`.
    fn run(&mut self, prefix: &[u8]) {
        debug_assert!(prefix.len() <= self.n);
        self.letters[..prefix.len()].copy_from_slice(prefix);
        let used = prefix.iter().copied().max().map_or(0, |m| m + 1);
        self.step(prefix.len(), used, false);
    }

    fn step(&mut self, g: usize, used: u8, eq: bool) {
        if g == self.k * self.n {
            (self.visit)(&self.letters);
            return;
        }
        let t = g % self.n;
        let b = g / self.n;
        // at a branch boundary the new branch is (vacuously) equal to its
        // predecessor so far, which constrains it to stay >= it
        let eq = if t == 0 { b > 0 } else { eq };
        let lo = if eq { self.letters[g - self.n] } else { 0 };
        let hi = used.min(self.sigma - 1);
        for c in lo..=hi {
            self.letters[g] = c;
            let next_eq = eq && c == self.letters[g - self.n];
            self.step(g + 1, used + (c == used) as u8, next_eq);
        }
    }
}

/// Compare sorted(perm(tuple)) against the tuple itself.
fn relabeled_cmp(
    letters: &[u8],
    perm: &[u8],
    k: usize,
    n: usize,
    scratch: &mut Vec<u8>,
    order: &mut Vec<usize>,
) -> Ordering {
    scratch.clear();
    scratch.extend(letters.iter().map(|&c| perm[c as usize]));
    order.clear();
    order.extend(0..k);
    order.sort_by(|&a, &b| scratch[a * n..(a + 1) * n].cmp(&scratch[b * n..(b + 1) * n]));
    for (pos, &i) in order.iter().enumerate() {
        match scratch[i * n..(i + 1) * n].cmp(&letters[pos * n..(pos + 1) * n]) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

fn count_tuple(tree: &mut Eertree, letters: &[u8], k: usize, n: usize) -> usize {
    tree.reset();
    for i in 0..k {
        for j in (i + 1)..k {
            feed_one_path(tree, &letters[i * n..(i + 1) * n], &letters[j * n..(j + 1) * n]);
        }
    }
    tree.node_count()
}

fn tuple_to_tree(letters: &[u8], k: usize, n: usize, alphabet: &Alphabet) -> StarlikeTree {
    let branches = (0..k)
        .map(|b| Word::new(letters[b * n..(b + 1) * n].to_vec()))
        .collect();
    StarlikeTree::new(alphabet.clone(), branches).expect("generated tuples are valid trees")
}

/// Valid first-branch prefixes used to split the space into independent
/// chunks, in lexicographic order.
fn chunk_prefixes(n: usize, sigma: usize, workers: usize) -> Vec<Vec<u8>> {
    let target = 4 * workers.max(1);
    let mut prefixes: Vec<Vec<u8>> = vec![Vec::new()];
    let mut depth = 0;
    while depth < n && depth < 8 && prefixes.len() < target {
        let mut next = Vec::with_capacity(prefixes.len() * sigma);
        for p in &prefixes {
            let used = p.iter().copied().max().map_or(0, |m| m as usize + 1);
            for c in 0..=used.min(sigma - 1) {
                let mut q = p.clone();
                q.push(c as u8);
                next.push(q);
            }
        }
        prefixes = next;
        depth += 1;
    }
    prefixes
}

#[derive(Default)]
struct ChunkOutcome {
    max: usize,
    ties: u64,
    classes: u64,
    witnesses: Vec<StarlikeTree>,
}

fn run_chunk(spec: &SearchSpec, prefix: &[u8], perms: &[Vec<u8>]) -> ChunkOutcome {
    let alphabet = Alphabet::latin(spec.sigma).expect("validated sigma");
    let (k, n) = (spec.k, spec.n);
    let mut counter = Eertree::new(spec.sigma);
    let mut scratch = Vec::with_capacity(k * n);
    let mut order = Vec::with_capacity(k);
    let mut out = ChunkOutcome::default();

    let mut gen = CandidateGen::new(k, n, spec.sigma, |letters: &[u8]| {
        let canonical = perms.iter().all(|perm| {
            relabeled_cmp(letters, perm, k, n, &mut scratch, &mut order) != Ordering::Less
        });
        if !canonical {
            return;
        }
        out.classes += 1;
        let count = count_tuple(&mut counter, letters, k, n);
        if count > out.max {
            out.max = count;
            out.ties = 1;
            out.witnesses.clear();
            if spec.collect_witnesses && spec.witness_cap > 0 {
                out.witnesses.push(tuple_to_tree(letters, k, n, &alphabet));
            }
        } else if count == out.max {
            out.ties += 1;
            if spec.collect_witnesses && out.witnesses.len() < spec.witness_cap {
                out.witnesses.push(tuple_to_tree(letters, k, n, &alphabet));
            }
        }
    });
    gen.run(prefix);
    out
}

/// Empirical maximum palindrome count over all labelings of the (k, n) star,
/// by exhaustive enumeration of canonical classes. Deterministic for any
/// worker count.
pub fn max_palindromes(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    let start = Instant::now();
    // skip the identity, which never strictly improves
    let perms: Vec<Vec<u8>> = letter_permutations(spec.sigma)
        .into_iter()
        .filter(|p| p.iter().enumerate().any(|(i, &c)| i as u8 != c))
        .collect();
    let prefixes = chunk_prefixes(spec.n, spec.sigma, spec.worker_count);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.worker_count)
        .build()
        .map_err(|e| Error::Domain(format!("failed to build worker pool: {e}")))?;
    let chunks: Vec<ChunkOutcome> =
        pool.install(|| prefixes.par_iter().map(|p| run_chunk(spec, p, &perms)).collect());

    let mut result = SearchResult {
        k: spec.k,
        n: spec.n,
        sigma: spec.sigma,
        max_count: 0,
        witnesses: Vec::new(),
        witnesses_total: 0,
        classes_examined: 0,
        labelings_total: spec.labelings() as u64,
        elapsed: Duration::ZERO,
    };
    for chunk in chunks {
        result.classes_examined += chunk.classes;
        if chunk.ties == 0 {
            continue;
        }
        match chunk.max.cmp(&result.max_count) {
            Ordering::Greater => {
                result.max_count = chunk.max;
                result.witnesses_total = chunk.ties;
                result.witnesses = chunk.witnesses;
            }
            Ordering::Equal => {
                result.witnesses_total += chunk.ties;
                result.witnesses.extend(chunk.witnesses);
            }
            Ordering::Less => {}
        }
    }
    result.witnesses.sort_by(|a, b| a.branches().cmp(b.branches()));
    result.witnesses.truncate(spec.witness_cap);
    result.elapsed = start.elapsed();
    Ok(result)
}

/// One tree per equivalence class of labelings, in lexicographic order of
/// the canonical branch tuple.
pub fn enumerate_canonical(spec: &SearchSpec) -> Result<impl Iterator<Item = StarlikeTree>> {
    spec.validate()?;
    let alphabet = Alphabet::latin(spec.sigma)?;
    let perms: Vec<Vec<u8>> = letter_permutations(spec.sigma)
        .into_iter()
        .filter(|p| p.iter().enumerate().any(|(i, &c)| i as u8 != c))
        .collect();
    let (k, n) = (spec.k, spec.n);
    let mut scratch = Vec::new();
    let mut order = Vec::new();
    let mut trees = Vec::new();
    let mut gen = CandidateGen::new(k, n, spec.sigma, |letters: &[u8]| {
        let canonical = perms.iter().all(|perm| {
            relabeled_cmp(letters, perm, k, n, &mut scratch, &mut order) != Ordering::Less
        });
        if canonical {
            trees.push(tuple_to_tree(letters, k, n, &alphabet));
        }
    });
    gen.run(&[]);
    let trees = {
        drop(gen);
        trees
    };
    Ok(trees.into_iter())
}

/// Every labeling of the (k, n) star, with no symmetry reduction.
pub fn enumerate_labelings(spec: &SearchSpec) -> Result<impl Iterator<Item = StarlikeTree>> {
    spec.validate()?;
    let alphabet = Alphabet::latin(spec.sigma)?;
    Ok(LabelingIter {
        letters: vec![0; spec.k * spec.n],
        sigma: spec.sigma as u8,
        k: spec.k,
        n: spec.n,
        alphabet,
        done: false,
    })
}

struct LabelingIter {
    letters: Vec<u8>,
    sigma: u8,
    k: usize,
    n: usize,
    alphabet: Alphabet,
    done: bool,
}

impl Iterator for LabelingIter {
    type Item = StarlikeTree;

    fn next(&mut self) -> Option<StarlikeTree> {
        if self.done {
            return None;
        }
        let tree = tuple_to_tree(&self.letters, self.k, self.n, &self.alphabet);
        // odometer increment
        let mut i = self.letters.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.letters[i] + 1 < self.sigma {
                self.letters[i] += 1;
                self.letters[i + 1..].fill(0);
                break;
            }
        }
        Some(tree)
    }
}

#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub k: usize,
    pub n: usize,
    pub sigma: usize,
    pub trees_checked: u64,
    pub max_count: usize,
    pub violations: Vec<BoundViolation>,
}

#[derive(Clone, Debug)]
pub struct BoundViolation {
    pub tree: StarlikeTree,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug)]
pub enum ViolationKind {
    /// Count exceeded the weighted-length bound.
    WeightedLength { count: usize, bound: usize },
    /// Count exceeded 4n-1 on a binary three-branch tree.
    BinaryThreeBranch { count: usize, bound: usize },
    /// A ledger entry exceeded its per-path bound.
    LedgerEntry { i: usize, j: usize, new_count: usize, bound: usize },
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violations, max={}", self.violations.len(), self.max_count)
    }
}

/// Check every labeling of the (k, n) star against the bounds: the total
/// count against the weighted-length bound (and 4n-1 when binary with three
/// branches), and each ledger entry against its per-path bound. Violations
/// are report content, not errors. Runs over the raw space because ledger
/// entries are order-sensitive and not invariant under relabeling.
pub fn verify_bounds(spec: &SearchSpec) -> Result<BoundsReport> {
    spec.validate()?;
    let (k, n, sigma) = (spec.k, spec.n, spec.sigma);
    let total_bound = uniform_bound(k, n)?;
    let binary3 = (sigma == 2 && k == 3).then(|| binary_three_branch_bound(n).unwrap());
    let alphabet = Alphabet::latin(sigma)?;

    let mut report = BoundsReport {
        k,
        n,
        sigma,
        trees_checked: 0,
        max_count: 0,
        violations: Vec::new(),
    };

    let mut counter = Eertree::new(sigma);
    let mut letters = vec![0u8; k * n];
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut done = false;
    while !done {
        order.clear();
        order.extend(0..k);
        order.sort_by(|&a, &b| letters[a * n..(a + 1) * n].cmp(&letters[b * n..(b + 1) * n]));

        counter.reset();
        let mut count = 0;
        let mut first = true;
        for a in 0..k {
            for b in (a + 1)..k {
                let (i, j) = (order[a], order[b]);
                let new_count =
                    feed_one_path(&mut counter, &letters[i * n..(i + 1) * n], &letters[j * n..(j + 1) * n]);
                let bound = if first { 2 * n } else { n };
                first = false;
                count += new_count;
                if new_count > bound {
                    report.violations.push(BoundViolation {
                        tree: tuple_to_tree(&letters, k, n, &alphabet),
                        kind: ViolationKind::LedgerEntry { i: a, j: b, new_count, bound },
                    });
                }
            }
        }
        debug_assert_eq!(count, counter.node_count());

        if count > total_bound {
            report.violations.push(BoundViolation {
                tree: tuple_to_tree(&letters, k, n, &alphabet),
                kind: ViolationKind::WeightedLength { count, bound: total_bound },
            });
        }
        if let Some(b3) = binary3 {
            if count > b3 {
                report.violations.push(BoundViolation {
                    tree: tuple_to_tree(&letters, k, n, &alphabet),
                    kind: ViolationKind::BinaryThreeBranch { count, bound: b3 },
                });
            }
        }
        report.max_count = report.max_count.max(count);
        report.trees_checked += 1;

        // odometer increment
        let mut pos = letters.len();
        loop {
            if pos == 0 {
                done = true;
                break;
            }
            pos -= 1;
            if letters[pos] + 1 < sigma as u8 {
                letters[pos] += 1;
                letters[pos + 1..].fill(0);
                break;
            }
        }
    }
    Ok(report)
}

/// The binary three-branch family a^n, b·a^(n-1), b·b·a^(n-2), whose
/// palindrome count is 4n-2.
pub fn extremal_tree(n: usize) -> Result<StarlikeTree> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "the extremal family needs branch length n >= 2, got {n}"
        )));
    }
    let first = vec![0u8; n];
    let mut second = vec![0u8; n];
    second[0] = 1;
    let mut third = vec![0u8; n];
    third[0] = 1;
    third[1] = 1;
    StarlikeTree::new(
        Alphabet::latin(2)?,
        vec![Word::new(first), Word::new(second), Word::new(third)],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjectureRow {
    pub n: usize,
    /// Exhaustive maximum over three equal branches.
    pub empirical: usize,
    /// The conjectured value 4n-2.
    pub target: usize,
    pub matches: bool,
}

/// Compare the exhaustive maximum for three branches of length n against
/// 4n-2, for every n in 2..=n_max.
pub fn conjecture_check(
    n_max: usize,
    sigma: usize,
    workers: usize,
    max_labelings: u64,
) -> Result<Vec<ConjectureRow>> {
    if n_max < 2 {
        return Err(Error::Domain(format!(
            "the conjectured formula starts at n = 2, got n_max = {n_max}"
        )));
    }
    let mut rows = Vec::with_capacity(n_max - 1);
    for n in 2..=n_max {
        let mut spec = SearchSpec::new(3, n, sigma);
        spec.worker_count = workers;
        spec.max_labelings = max_labelings;
        let result = max_palindromes(&spec)?;
        let target = 4 * n - 2;
        rows.push(ConjectureRow {
            n,
            empirical: result.max_count,
            target,
            matches: result.max_count == target,
        });
    }
    Ok(rows)
}

/// How many palindromes appending letter `c` at the leaf of the given branch
/// adds to the tree. Never negative: every palindrome of the old tree
/// remains a factor of the extended one.
pub fn growth_delta(tree: &StarlikeTree, branch: usize, c: u8) -> Result<usize> {
    if branch >= tree.k() {
        return Err(Error::Domain(format!(
            "branch index {branch} out of range for {} branches",
            tree.k()
        )));
    }
    if c as usize >= tree.sigma() {
        return Err(Error::InvalidLetter { letter: c, sigma: tree.sigma() });
    }
    let before = tree.count_palindromes();
    let mut branches = tree.branches().to_vec();
    branches[branch] = branches[branch].concat(&Word::new(vec![c]));
    let extended = StarlikeTree::new(tree.alphabet().clone(), branches)?;
    Ok(extended.count_palindromes() - before)
}
