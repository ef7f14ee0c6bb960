//! Minimal prefixes with periodic complement, trapezoidal sequences, and the
//! bijections tying them to each other and to non-interval permutations.
//!
//! `D(i, n)` is the set of words `u` of `i` distinct letters from `[n]` such
//! that `[n] \ alph(u)` is periodic while no shorter prefix of `u` has that
//! property. Each such word records the first `i` walls removed from `n`
//! walls until the remaining chambers all have the same width; `phi` reads
//! off the resulting difference vectors and `psi` inverts it.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{reduced_form, Letter, Permutation};
use crate::pyramid::{delta_of_set, offset_set, validate_transition, DiffVector};

/// Largest ambient size handled by the bitmask routines below.
pub const MAX_PREFIX_N: usize = 63;

/// A word of distinct letters from `[n]` of length `1..=n-2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrefixWord {
    n: usize,
    letters: Vec<Letter>,
}

impl PrefixWord {
    pub fn new(letters: Vec<Letter>, n: usize) -> Result<Self> {
        check_ambient(n)?;
        if letters.is_empty() || letters.len() > n - 2 {
            return Err(Error::OutOfRange(format!(
                "prefix length {} outside [1, {}]",
                letters.len(),
                n - 2
            )));
        }
        let mut seen = 0u64;
        for &l in &letters {
            if l == 0 {
                return Err(Error::NonPositiveLetter);
            }
            if l as usize > n {
                return Err(Error::OutOfRange(format!("letter {l} exceeds n = {n}")));
            }
            if seen >> l & 1 == 1 {
                return Err(Error::DuplicateLetter(l));
            }
            seen |= 1 << l;
        }
        Ok(PrefixWord { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `[n] \ alph(u)`.
    pub fn complement(&self) -> BTreeSet<Letter> {
        let used: HashSet<Letter> = self.letters.iter().copied().collect();
        (1..=self.n as Letter).filter(|l| !used.contains(l)).collect()
    }

    /// Membership in `D(len, n)` straight from the definition.
    pub fn is_minimal_periodic_prefix(&self) -> bool {
        is_minimal_periodic_prefix(&self.letters, self.n)
    }
}

impl fmt::Display for PrefixWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n > 9 { " " } else { "" };
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn check_ambient(n: usize) -> Result<()> {
    if !(3..=MAX_PREFIX_N).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} outside [3, {MAX_PREFIX_N}]")));
    }
    Ok(())
}

fn full_mask(n: usize) -> u64 {
    // Bit l stands for letter l; bit 0 is unused.
    ((1u64 << n) - 1) << 1
}

/// Whether the letters in `mask` form an arithmetic progression of length >= 2.
fn mask_is_periodic(mask: u64) -> bool {
    if mask.count_ones() < 2 {
        return false;
    }
    let lo = mask.trailing_zeros();
    let rest = mask & (mask - 1);
    let d = rest.trailing_zeros() - lo;
    let mut expect = 0u64;
    let mut x = lo;
    while x < 64 && expect.count_ones() < mask.count_ones() {
        expect |= 1 << x;
        x += d;
    }
    expect == mask
}

fn is_minimal_periodic_prefix(letters: &[Letter], n: usize) -> bool {
    let mut remaining = full_mask(n);
    for (j, &l) in letters.iter().enumerate() {
        remaining &= !(1u64 << l);
        let periodic = mask_is_periodic(remaining);
        if j + 1 < letters.len() && periodic {
            return false;
        }
        if j + 1 == letters.len() {
            return periodic;
        }
    }
    false
}

pub fn is_periodic_vector(d: &DiffVector) -> bool {
    d.is_periodic()
}

/// Whether the consecutive differences of `set` are all equal.
pub fn is_periodic_set(set: &BTreeSet<u32>) -> Result<bool> {
    Ok(delta_of_set(set)?.is_periodic())
}

/// Memoized `D(j, n)` for one ambient `n`.
#[derive(Debug, Clone)]
pub struct PrefixTable {
    n: usize,
    levels: Vec<Option<Vec<Vec<Letter>>>>,
    members: Vec<HashSet<Vec<Letter>>>,
}

impl PrefixTable {
    pub fn new(n: usize) -> Result<Self> {
        check_ambient(n)?;
        Ok(PrefixTable {
            n,
            levels: vec![None; n - 1],
            members: vec![HashSet::new(); n - 1],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `D(i, n)` in lexicographic order.
    pub fn get(&mut self, i: usize) -> Result<&[Vec<Letter>]> {
        let n = self.n;
        if i == 0 || i > n - 2 {
            return Err(Error::OutOfRange(format!("i = {i} outside [1, {}]", n - 2)));
        }
        if self.levels[i].is_none() {
            for j in 1..i {
                self.get(j)?;
            }
            let words = self.build(i);
            self.members[i] = words.iter().cloned().collect();
            self.levels[i] = Some(words);
        }
        Ok(self.levels[i].as_deref().expect("filled above"))
    }

    pub fn contains(&mut self, word: &[Letter]) -> Result<bool> {
        let i = word.len();
        self.get(i)?;
        Ok(self.members[i].contains(word))
    }

    fn build(&self, i: usize) -> Vec<Vec<Letter>> {
        let n = self.n;
        if i == 1 {
            return if n == 3 {
                vec![vec![1], vec![2], vec![3]]
            } else {
                vec![vec![1], vec![n as Letter]]
            };
        }
        let tail = n - i;
        let mut out = Vec::new();
        // Periodic complements of size n - i are progressions a, a+d, ...
        for d in 1..=(n - 1) / (tail - 1) {
            let span = d * (tail - 1);
            for a in 1..=n - span {
                let complement: HashSet<usize> = (0..tail).map(|t| a + t * d).collect();
                let mut letters: Vec<Letter> = (1..=n)
                    .filter(|l| !complement.contains(l))
                    .map(|l| l as Letter)
                    .collect();
                loop {
                    let minimal = (1..i).all(|j| !self.members[j].contains(&letters[..j]));
                    if minimal {
                        out.push(letters.clone());
                    }
                    if !next_permutation(&mut letters) {
                        break;
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Advances `a` to its lexicographic successor, returning false at the last one.
pub(crate) fn next_permutation<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let Some(i) = (0..a.len() - 1).rfind(|&i| a[i] < a[i + 1]) else {
        return false;
    };
    let j = a.iter().rposition(|x| *x > a[i]).expect("a[i + 1] > a[i]");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

/// `D(i, n)` in lexicographic order.
#[allow(non_snake_case)]
pub fn prefixes_D(i: usize, n: usize) -> Result<Vec<PrefixWord>> {
    let mut table = PrefixTable::new(n)?;
    let words = table.get(i)?;
    Ok(words
        .iter()
        .map(|w| PrefixWord {
            n,
            letters: w.clone(),
        })
        .collect())
}

/// Initial levels `(Δ_1, ..., Δ_{i+1})` of a pyramid whose top level is its
/// first periodic one after `Δ_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrapezoidalSequence {
    n: usize,
    levels: Vec<DiffVector>,
}

impl TrapezoidalSequence {
    pub fn new(n: usize, levels: Vec<DiffVector>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidTrapezoid(msg));
        check_ambient(n)?;
        let height = match levels.len().checked_sub(1) {
            Some(h) if (1..=n - 2).contains(&h) => h,
            _ => return bad(format!("{} levels for n = {n}", levels.len())),
        };
        for (idx, level) in levels.iter().enumerate() {
            if level.len() != n - 1 - idx {
                return bad(format!("level {} has length {}", idx + 1, level.len()));
            }
        }
        if levels[0].entries().iter().any(|&d| d != 1) {
            return bad("level 1 must be all ones".into());
        }
        for pair in levels.windows(2) {
            if !validate_transition(&pair[0], &pair[1])? {
                return bad(format!("no rule turns {} into {}", pair[0], pair[1]));
            }
        }
        if !levels[height].is_periodic() {
            return bad("top level is not periodic".into());
        }
        if let Some(j) = (1..height).find(|&j| levels[j].is_periodic()) {
            return bad(format!("interior level {} is periodic", j + 1));
        }
        Ok(TrapezoidalSequence { n, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[DiffVector] {
        &self.levels
    }
}

/// Removes the letters of `u` one at a time from `[n]` and records the
/// difference vector after each removal.
pub fn phi(u: &PrefixWord) -> Result<TrapezoidalSequence> {
    if !u.is_minimal_periodic_prefix() {
        return Err(Error::NotAPrefix {
            word: u.to_string(),
            i: u.len(),
            n: u.n,
        });
    }
    let mut x: BTreeSet<u32> = (1..=u.n as u32).collect();
    let mut levels = vec![delta_of_set(&x)?];
    for &l in &u.letters {
        x.remove(&l);
        levels.push(delta_of_set(&x)?);
    }
    TrapezoidalSequence::new(u.n, levels)
}

/// Rebuilds the removal order from a trapezoid.
///
/// `Y_1 = [n]`; with `y = min Y_j`, `Y_{j+1}` is the offset set of
/// `Δ_{j+1}` anchored at `y`, or at `y + e_0` when `Δ_{j+1}` equals `Δ_j`
/// without its first entry `e_0`. The removed letter is `Y_j \ Y_{j+1}`.
///
/// At height 1 the trapezoid of `D(1, n)` is shared by the words `1` and
/// `n` (and `3` when `n = 3`); the rule then always yields `1`.
pub fn psi(p: &TrapezoidalSequence) -> Result<PrefixWord> {
    let n = p.n;
    let mut y: BTreeSet<u32> = (1..=n as u32).collect();
    let mut letters = Vec::with_capacity(p.height());
    for pair in p.levels.windows(2) {
        let (e, d) = (pair[0].entries(), &pair[1]);
        let anchor = *y.first().expect("Y_j is non-empty");
        let next = if &e[1..] == d.entries() {
            offset_set(anchor + e[0], d)
        } else {
            offset_set(anchor, d)
        };
        let removed: Vec<u32> = y.difference(&next).copied().collect();
        if removed.len() != 1 || !next.is_subset(&y) {
            return Err(Error::InvalidTrapezoid(format!(
                "level {} does not remove exactly one letter",
                d
            )));
        }
        letters.push(removed[0]);
        y = next;
    }
    PrefixWord::new(letters, n)
}

/// No prefix of length `2..n-1` has an interval as alphabet.
pub fn is_non_interval(b: &Permutation) -> Result<bool> {
    let n = b.len();
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    Ok(!has_interval_run(b.letters().iter().copied()))
}

/// Suffix version: no suffix of length `2..n-1` is an interval.
pub fn is_suffix_non_interval(b: &Permutation) -> Result<bool> {
    let n = b.len();
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    Ok(!has_interval_run(b.letters().iter().rev().copied()))
}

fn has_interval_run(letters: impl ExactSizeIterator<Item = Letter>) -> bool {
    let n = letters.len();
    let (mut lo, mut hi) = (Letter::MAX, 0);
    for (k, l) in letters.enumerate() {
        lo = lo.min(l);
        hi = hi.max(l);
        let len = k + 1;
        if (2..n).contains(&len) && (hi - lo) as usize + 1 == len {
            return true;
        }
    }
    false
}

fn check_rho_range(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n / 2 {
        return Err(Error::RangeViolation { k, n });
    }
    Ok(())
}

/// `red(u a)` with `a = min([n] \ alph(u))`; lands in the permutations of
/// length `k + 1` without interval suffixes.
pub fn rho(u: &PrefixWord) -> Result<Permutation> {
    check_rho_range(u.len(), u.n)?;
    if !u.is_minimal_periodic_prefix() {
        return Err(Error::NotAPrefix {
            word: u.to_string(),
            i: u.len(),
            n: u.n,
        });
    }
    let a = *u.complement().first().expect("complement has n - k >= 2 letters");
    let mut w = u.letters.clone();
    w.push(a);
    reduced_form(&w)
}

/// `rho` followed by reversal, landing among the non-interval permutations.
pub fn rho_non_interval(u: &PrefixWord) -> Result<Permutation> {
    Ok(rho(u)?.reversal())
}

/// Inverse of [`rho`]: letters below the last one stay, the others move up
/// by `n - k - 1`.
pub fn theta(b: &Permutation, n: usize) -> Result<PrefixWord> {
    let k = b.len().saturating_sub(1);
    check_rho_range(k, n)?;
    if !is_suffix_non_interval(b)? {
        return Err(Error::NotInB(b.to_string()));
    }
    let last = b.letters()[k];
    let shift = (n - k - 1) as Letter;
    let letters = b.letters()[..k]
        .iter()
        .map(|&x| if x < last { x } else { x + shift })
        .collect();
    PrefixWord::new(letters, n)
}
