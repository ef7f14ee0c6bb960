//! Pyramidal sequences of consecutive differences.
//!
//! For `u` in S_n, level `i` (1-based) lists the gaps between the positions
//! of the letters `>= i` in `u`, read left to right. Two permutations are
//! super-strongly Wilf equivalent exactly when their pyramids coincide, so the
//! pyramid is the class invariant used everywhere else in the crate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Letter, Permutation};

/// One level of a pyramid: a non-empty vector of positive gaps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct DiffVector(Vec<u32>);

impl DiffVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::TooSmall { need: 1, got: 0 });
        }
        if entries.contains(&0) {
            return Err(Error::OutOfRange("difference entries must be positive".into()));
        }
        Ok(DiffVector(entries))
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(!entries.is_empty() && entries.iter().all(|&d| d > 0));
        DiffVector(entries)
    }

    /// `(d, d, ..., d)` of the given length.
    pub fn constant(d: u32, len: usize) -> Self {
        DiffVector(vec![d; len])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&d| u64::from(d)).sum()
    }

    /// All entries equal.
    pub fn is_periodic(&self) -> bool {
        self.period().is_some()
    }

    /// The common entry when the vector is periodic.
    pub fn period(&self) -> Option<u32> {
        let first = *self.0.first()?;
        self.0.iter().all(|&d| d == first).then_some(first)
    }
}

impl TryFrom<Vec<u32>> for DiffVector {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        DiffVector::new(v)
    }
}

impl From<DiffVector> for Vec<u32> {
    fn from(d: DiffVector) -> Self {
        d.0
    }
}

impl std::fmt::Display for DiffVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("(")?;
        for (k, d) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

/// Consecutive differences of a set of at least two positive integers.
pub fn delta_of_set(set: &BTreeSet<u32>) -> Result<DiffVector> {
    if set.len() < 2 {
        return Err(Error::TooSmall { need: 2, got: set.len() });
    }
    let v: Vec<u32> = set.iter().zip(set.iter().skip(1)).map(|(a, b)| b - a).collect();
    Ok(DiffVector(v))
}

/// `{c, c + d_1, c + d_1 + d_2, ...}`.
pub fn offset_set(c: u32, delta: &DiffVector) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    let mut x = c;
    out.insert(x);
    for &d in &delta.0 {
        x += d;
        out.insert(x);
    }
    out
}

/// How a level turns into the next one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transition {
    /// Entries `k` and `k + 1` (0-based) were added together.
    Merge(usize),
    DropLeft,
    DropRight,
    /// The level is periodic, so dropping either end gives the same vector.
    DropEither,
}

/// Identifies which rule produces `next` from `prev`, if any.
///
/// Merges never coincide with drops (a merge keeps the entry sum, a drop
/// lowers it) and two different merges never agree, so the only ambiguous
/// case is a periodic `prev`, reported as [`Transition::DropEither`].
pub fn classify_transition(prev: &DiffVector, next: &DiffVector) -> Result<Option<Transition>> {
    let (a, b) = (prev.entries(), next.entries());
    if a.len() < 2 || b.len() + 1 != a.len() {
        return Err(Error::LengthMismatch {
            expected: a.len().saturating_sub(1).max(1),
            got: b.len(),
        });
    }
    let left = &a[1..] == b;
    let right = &a[..a.len() - 1] == b;
    match (left, right) {
        (true, true) => return Ok(Some(Transition::DropEither)),
        (true, false) => return Ok(Some(Transition::DropLeft)),
        (false, true) => return Ok(Some(Transition::DropRight)),
        _ => {}
    }
    // The merge point is the first index where the vectors disagree.
    let k = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    if k + 1 < a.len()
        && u64::from(a[k]) + u64::from(a[k + 1]) == u64::from(b[k])
        && a[k + 2..] == b[k + 1..]
    {
        return Ok(Some(Transition::Merge(k)));
    }
    Ok(None)
}

pub fn validate_transition(prev: &DiffVector, next: &DiffVector) -> Result<bool> {
    Ok(classify_transition(prev, next)?.is_some())
}

/// A validated pyramid `(Δ_1, ..., Δ_{n-1})` stored with `Δ_1` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct PyramidalSequence {
    n: usize,
    levels: Vec<DiffVector>,
}

impl PyramidalSequence {
    /// Builds a pyramid from raw levels, re-checking every invariant. An empty
    /// list is the pyramid of S_1.
    pub fn from_levels(levels: Vec<Vec<u32>>) -> Result<Self> {
        let n = levels.len() + 1;
        let mut out = Vec::with_capacity(levels.len());
        for (idx, level) in levels.into_iter().enumerate() {
            if level.len() != n - 1 - idx {
                return Err(Error::InvalidPyramid(format!(
                    "level {} has length {}, expected {}",
                    idx + 1,
                    level.len(),
                    n - 1 - idx
                )));
            }
            out.push(DiffVector::new(level).map_err(|e| Error::InvalidPyramid(e.to_string()))?);
        }
        if let Some(first) = out.first() {
            if first.entries().iter().any(|&d| d != 1) {
                return Err(Error::InvalidPyramid("level 1 must be all ones".into()));
            }
        }
        for (idx, pair) in out.windows(2).enumerate() {
            if !validate_transition(&pair[0], &pair[1])? {
                return Err(Error::InvalidPyramid(format!(
                    "no rule turns level {} {} into {}",
                    idx + 1,
                    pair[0],
                    pair[1]
                )));
            }
        }
        Ok(PyramidalSequence { n, levels: out })
    }

    pub(crate) fn from_levels_unchecked(levels: Vec<DiffVector>) -> Self {
        PyramidalSequence {
            n: levels.len() + 1,
            levels,
        }
    }

    /// The all-ones pyramid, i.e. the class of the identity.
    pub fn all_ones(n: usize) -> Self {
        let levels = (1..n).map(|i| DiffVector::constant(1, n - i)).collect();
        PyramidalSequence::from_levels_unchecked(levels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Levels with `Δ_1` at index 0.
    pub fn levels(&self) -> &[DiffVector] {
        &self.levels
    }

    /// `Δ_i` for `1 <= i <= n - 1`.
    pub fn level(&self, i: usize) -> Option<&DiffVector> {
        i.checked_sub(1).and_then(|k| self.levels.get(k))
    }
}

impl TryFrom<Vec<Vec<u32>>> for PyramidalSequence {
    type Error = Error;

    fn try_from(levels: Vec<Vec<u32>>) -> Result<Self> {
        PyramidalSequence::from_levels(levels)
    }
}

impl From<PyramidalSequence> for Vec<Vec<u32>> {
    fn from(p: PyramidalSequence) -> Self {
        p.levels.into_iter().map(Vec::from).collect()
    }
}

/// Levels `Δ_{n-1}, ..., Δ_1` (top first) from letter positions in `u`.
fn levels_top_down(u: &[Letter]) -> Vec<Vec<u32>> {
    let n = u.len();
    let mut pos = vec![0u32; n + 1];
    for (k, &l) in u.iter().enumerate() {
        pos[l as usize] = k as u32;
    }
    let mut placed: Vec<u32> = Vec::with_capacity(n);
    placed.push(pos[n]);
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for i in (1..n).rev() {
        let p = pos[i];
        let at = placed.partition_point(|&q| q < p);
        placed.insert(at, p);
        out.push(placed.windows(2).map(|w| w[1] - w[0]).collect());
    }
    out
}

/// The pyramid of `u`, read off the positions of its letters.
pub fn pyramidal_sequence(u: &Permutation) -> Result<PyramidalSequence> {
    if u.len() < 2 {
        return Err(Error::SizeTooSmall(u.len()));
    }
    let levels = levels_top_down(u.letters())
        .into_iter()
        .rev()
        .map(DiffVector::from_vec_unchecked)
        .collect();
    Ok(PyramidalSequence::from_levels_unchecked(levels))
}

/// The same pyramid computed from `s = u^{-1}`: level `i` is the difference
/// vector of the alphabet of the suffix `s_i ... s_n`.
pub fn pyramidal_sequence_of_inverse(s: &Permutation) -> Result<PyramidalSequence> {
    let n = s.len();
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    let letters = s.letters();
    let mut levels = Vec::with_capacity(n - 1);
    for i in 1..n {
        let suffix: BTreeSet<u32> = letters[i - 1..].iter().copied().collect();
        levels.push(delta_of_set(&suffix)?);
    }
    Ok(PyramidalSequence::from_levels_unchecked(levels))
}

/// Super-strong Wilf equivalence test by pyramid comparison.
pub fn is_ss_equivalent(u: &Permutation, v: &Permutation) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::SizeMismatch(u.len(), v.len()));
    }
    if u.len() == 1 {
        return Ok(true);
    }
    Ok(levels_top_down(u.letters()) == levels_top_down(v.letters()))
}

/// Exponent `j` with class size `2^j`: one for every step between two
/// periodic levels with the same period, plus the final step from
/// `Δ_{n-1}` to the empty level.
pub fn class_size_exponent(p: &PyramidalSequence) -> u32 {
    if p.n() < 2 {
        return 0;
    }
    let inner = p
        .levels()
        .windows(2)
        .filter(|w| matches!((w[0].period(), w[1].period()), (Some(a), Some(b)) if a == b))
        .count() as u32;
    inner + 1
}

/// Places letters `n, n-1, ..., 1` so that each new level matches the
/// pyramid, taking the left option whenever both ends work. Returns
/// positions indexed by letter (index 0 unused).
fn place_letters(p: &PyramidalSequence, mut choose_left: impl FnMut(usize) -> bool) -> Result<Vec<i64>> {
    let n = p.n();
    let mut pos = vec![0i64; n + 1];
    if n == 1 {
        return Ok(pos);
    }
    let top = p.levels()[n - 2].entries()[0];
    if choose_left(n - 1) {
        pos[n - 1] = 0;
        pos[n] = i64::from(top);
    } else {
        pos[n] = 0;
        pos[n - 1] = i64::from(top);
    }
    let mut placed = vec![pos[n - 1].min(pos[n]), pos[n - 1].max(pos[n])];
    for i in (1..n - 1).rev() {
        let below = &p.levels()[i - 1];
        let above = &p.levels()[i];
        let d = below.entries();
        let leftmost = placed[0];
        let rightmost = *placed.last().unwrap();
        let at = match classify_transition(below, above)? {
            Some(Transition::Merge(k)) => {
                leftmost + d[..=k].iter().map(|&x| i64::from(x)).sum::<i64>()
            }
            Some(Transition::DropLeft) => leftmost - i64::from(d[0]),
            Some(Transition::DropRight) => rightmost + i64::from(d[d.len() - 1]),
            Some(Transition::DropEither) => {
                if choose_left(i) {
                    leftmost - i64::from(d[0])
                } else {
                    rightmost + i64::from(d[d.len() - 1])
                }
            }
            None => {
                return Err(Error::InvalidPyramid(format!(
                    "no rule turns level {i} {below} into {above}"
                )))
            }
        };
        pos[i] = at;
        let k = placed.partition_point(|&q| q < at);
        placed.insert(k, at);
    }
    Ok(pos)
}

fn word_from_positions(pos: &[i64]) -> Result<Permutation> {
    let n = pos.len() - 1;
    let min = pos[1..].iter().copied().min().unwrap_or(0);
    let mut letters = vec![0 as Letter; n];
    for (letter, &at) in pos.iter().enumerate().skip(1) {
        let idx = usize::try_from(at - min)
            .ok()
            .filter(|&k| k < n)
            .ok_or_else(|| Error::Invariant("placement left the window [1, n]".into()))?;
        if letters[idx] != 0 {
            return Err(Error::Invariant("two letters placed on one position".into()));
        }
        letters[idx] = letter as Letter;
    }
    Ok(Permutation::from_vec_unchecked(letters))
}

/// A fixed member of the class described by `p`: `n - 1` starts left of
/// `n`, and every ambiguous periodic step places the new letter on the left.
pub fn canonical_member(p: &PyramidalSequence) -> Result<Permutation> {
    let pos = place_letters(p, |_| true)?;
    word_from_positions(&pos)
}

/// Every member of the class described by `p`, sorted. There are
/// `2^class_size_exponent(p)` of them.
pub fn class_members(p: &PyramidalSequence) -> Result<Vec<Permutation>> {
    let n = p.n();
    if n == 1 {
        return Ok(vec![Permutation::identity(1)]);
    }
    // Letters whose placement is a free left/right choice.
    let mut free = vec![n - 1];
    for i in 1..n - 1 {
        let (lo, hi) = (&p.levels()[i - 1], &p.levels()[i]);
        if classify_transition(lo, hi)? == Some(Transition::DropEither) {
            free.push(i);
        }
    }
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u64..(1u64 << free.len()) {
        let pos = place_letters(p, |letter| {
            let bit = free.iter().position(|&f| f == letter).expect("free letter");
            mask >> bit & 1 == 0
        })?;
        out.push(word_from_positions(&pos)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn push_varint(out: &mut Vec<u8>, mut v: u32) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

/// Separator between levels. LEB128 encodings of positive integers never
/// contain a zero byte.
const LEVEL_END: u8 = 0;

fn encode_levels<'a, I>(levels: I) -> Vec<u8>
where
    I: IntoIterator<Item = &'a [u32]>,
{
    let mut out = Vec::new();
    for level in levels {
        for &d in level {
            push_varint(&mut out, d);
        }
        out.push(LEVEL_END);
    }
    out
}

/// Injective byte serialization of a pyramid, top level first.
pub fn canonical_key(p: &PyramidalSequence) -> Vec<u8> {
    encode_levels(p.levels().iter().rev().map(|l| l.entries()))
}

/// `canonical_key(pyramidal_sequence(u))` without building the pyramid.
pub fn pyramid_key(u: &[Letter]) -> Vec<u8> {
    let levels = levels_top_down(u);
    encode_levels(levels.iter().map(Vec::as_slice))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn dv(v: &[u32]) -> DiffVector {
        DiffVector::new(v.to_vec()).unwrap()
    }

    fn example3() -> Vec<Vec<u32>> {
        vec![
            vec![1, 1, 1, 1, 1, 1, 1, 1],
            vec![1, 1, 1, 1, 1, 2, 1],
            vec![1, 2, 1, 1, 2, 1],
            vec![1, 2, 2, 2, 1],
            vec![1, 2, 2, 2],
            vec![2, 2, 2],
            vec![2, 2],
            vec![4],
        ]
    }

    #[test]
    fn delta_and_offset() {
        assert_eq!(delta_of_set(&BTreeSet::from([2, 4, 6, 8])).unwrap(), dv(&[2, 2, 2]));
        assert_eq!(delta_of_set(&(1..=6).collect()).unwrap(), DiffVector::constant(1, 5));
        assert_eq!(delta_of_set(&BTreeSet::from([1, 3, 5, 9])).unwrap(), dv(&[2, 2, 4]));
        assert_eq!(
            delta_of_set(&BTreeSet::from([4])),
            Err(Error::TooSmall { need: 2, got: 1 })
        );
        assert_eq!(offset_set(2, &dv(&[2, 2, 2])), BTreeSet::from([2, 4, 6, 8]));
        assert_eq!(offset_set(1, &dv(&[1])), BTreeSet::from([1, 2]));
        let x = BTreeSet::from([1, 3, 5, 9]);
        assert_eq!(offset_set(1, &delta_of_set(&x).unwrap()), x);
    }

    #[test]
    fn worked_example_pyramid() {
        let p = pyramidal_sequence(&perm("592738164")).unwrap();
        let got: Vec<Vec<u32>> = p.clone().into();
        assert_eq!(got, example3());
        assert_eq!(p, pyramidal_sequence_of_inverse(&perm("735918462")).unwrap());
    }

    #[test]
    fn identity_and_small_pyramids() {
        for n in 2..8 {
            let p = pyramidal_sequence(&Permutation::identity(n)).unwrap();
            assert_eq!(p, PyramidalSequence::all_ones(n));
        }
        let p: Vec<Vec<u32>> = pyramidal_sequence(&perm("1324")).unwrap().into();
        assert_eq!(p, vec![vec![1, 1, 1], vec![1, 1], vec![2]]);
        assert_eq!(pyramidal_sequence(&perm("1")), Err(Error::SizeTooSmall(1)));
    }

    #[test]
    fn transitions() {
        assert!(validate_transition(&dv(&[1, 2, 2, 2, 1]), &dv(&[1, 2, 2, 2])).unwrap());
        assert!(validate_transition(&dv(&[1, 2, 1, 1, 2, 1]), &dv(&[1, 2, 2, 2, 1])).unwrap());
        assert!(!validate_transition(&dv(&[1, 3]), &dv(&[5])).unwrap());
        assert_eq!(
            classify_transition(&dv(&[1, 2, 1, 1, 2, 1]), &dv(&[1, 2, 2, 2, 1])).unwrap(),
            Some(Transition::Merge(2))
        );
        assert_eq!(
            classify_transition(&dv(&[3, 3, 3]), &dv(&[3, 3])).unwrap(),
            Some(Transition::DropEither)
        );
        assert!(matches!(
            validate_transition(&dv(&[1, 1, 1]), &dv(&[2])),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            validate_transition(&dv(&[1]), &dv(&[1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn from_levels_rejects_invalid() {
        assert!(PyramidalSequence::from_levels(example3()).is_ok());
        assert!(PyramidalSequence::from_levels(vec![vec![1, 1], vec![3]]).is_err());
        assert!(PyramidalSequence::from_levels(vec![vec![1, 2], vec![3]]).is_err());
        assert!(PyramidalSequence::from_levels(vec![vec![1, 1], vec![1, 1]]).is_err());
        let empty = PyramidalSequence::from_levels(vec![]).unwrap();
        assert_eq!(empty.n(), 1);
    }

    #[test]
    fn ss_equivalence_small() {
        let yes = is_ss_equivalent(&perm("123"), &perm("321")).unwrap();
        let no = is_ss_equivalent(&perm("123"), &perm("213")).unwrap();
        assert!(yes && !no);
        assert!(is_ss_equivalent(&perm("1"), &perm("1")).unwrap());
        assert!(is_ss_equivalent(&perm("592738164"), &perm("562837194")).unwrap());
        assert_eq!(
            is_ss_equivalent(&perm("12"), &perm("123")),
            Err(Error::SizeMismatch(2, 3))
        );
    }

    #[test]
    fn exponents() {
        assert_eq!(class_size_exponent(&PyramidalSequence::all_ones(3)), 2);
        let p = PyramidalSequence::from_levels(vec![vec![1, 1], vec![2]]).unwrap();
        assert_eq!(class_size_exponent(&p), 1);
        assert_eq!(class_size_exponent(&PyramidalSequence::all_ones(2)), 1);
        let ex = PyramidalSequence::from_levels(example3()).unwrap();
        // (2,2,2) -> (2,2) is the only interior periodic step.
        assert_eq!(class_size_exponent(&ex), 2);
    }

    #[test]
    fn canonical_members() {
        let ex = PyramidalSequence::from_levels(example3()).unwrap();
        assert_eq!(canonical_member(&ex).unwrap(), perm("562837194"));
        let ones = canonical_member(&PyramidalSequence::all_ones(3)).unwrap();
        assert_eq!(pyramidal_sequence(&ones).unwrap(), PyramidalSequence::all_ones(3));
        assert_eq!(ones, perm("123"));
        assert_eq!(canonical_member(&PyramidalSequence::all_ones(2)).unwrap(), perm("12"));
        assert_eq!(
            canonical_member(&PyramidalSequence::all_ones(1)).unwrap(),
            perm("1")
        );
    }

    #[test]
    fn class_members_of_small_pyramids() {
        let got = class_members(&PyramidalSequence::all_ones(3)).unwrap();
        let want: Vec<Permutation> = ["123", "132", "231", "321"].iter().map(|s| perm(s)).collect();
        assert_eq!(got, want);
        let p = PyramidalSequence::from_levels(vec![vec![1, 1], vec![2]]).unwrap();
        assert_eq!(class_members(&p).unwrap(), vec![perm("213"), perm("312")]);
    }

    #[test]
    fn keys() {
        let a = canonical_key(&PyramidalSequence::all_ones(3));
        let b = canonical_key(&PyramidalSequence::all_ones(4));
        assert_ne!(a, b);
        assert_eq!(a, vec![1, 0, 1, 1, 0]);
        let u = perm("592738164");
        assert_eq!(pyramid_key(u.letters()), canonical_key(&pyramidal_sequence(&u).unwrap()));
        let mut v = Vec::new();
        push_varint(&mut v, 300);
        assert_eq!(v, vec![0xac, 0x02]);
    }

    #[test]
    fn json_shape() {
        let p = pyramidal_sequence(&perm("1324")).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[[1,1,1],[1,1],[2]]");
        assert_eq!(serde_json::from_str::<PyramidalSequence>(&json).unwrap(), p);
        assert!(serde_json::from_str::<PyramidalSequence>("[[1,1],[3]]").is_err());
    }
}
