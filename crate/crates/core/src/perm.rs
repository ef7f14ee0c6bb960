//! Words over the positive integers and permutations in one-line notation.
//!
//! Text grammar: a permutation with every letter at most 9 may be written in
//! compact form (`592738164`); anything else is a list of integers separated
//! by whitespace and/or commas (`3, 12, 1, 2`). JSON renders both words and
//! permutations as plain integer arrays.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = u32;

/// A finite word over the positive integers, possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Letter>", into = "Vec<Letter>")]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::NonPositiveLetter);
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the letters.
    pub fn norm(&self) -> u64 {
        self.0.iter().map(|&l| u64::from(l)).sum()
    }

    pub fn alphabet(&self) -> BTreeSet<Letter> {
        self.0.iter().copied().collect()
    }

    pub fn reversal(&self) -> Word {
        Word(reversal(&self.0))
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

impl TryFrom<Vec<Letter>> for Word {
    type Error = Error;

    fn try_from(letters: Vec<Letter>) -> Result<Self> {
        Word::new(letters)
    }
}

impl From<Word> for Vec<Letter> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl AsRef<[Letter]> for Word {
    fn as_ref(&self) -> &[Letter] {
        &self.0
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::new(tokenize(s)?)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

/// A permutation of `[n]` in one-line notation, `n >= 1`.
///
/// Ordering is lexicographic on the letter sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Letter>", into = "Vec<Letter>")]
pub struct Permutation(Vec<Letter>);

impl Permutation {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        validate_permutation(&letters)?;
        Ok(Permutation(letters))
    }

    /// Caller guarantees `letters` is a permutation of `[len]`.
    pub(crate) fn from_vec_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(validate_permutation(&letters).is_ok());
        Permutation(letters)
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as Letter).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }

    pub fn inverse(&self) -> Permutation {
        inverse(self)
    }

    pub fn reversal(&self) -> Permutation {
        Permutation(reversal(&self.0))
    }
}

impl TryFrom<Vec<Letter>> for Permutation {
    type Error = Error;

    fn try_from(letters: Vec<Letter>) -> Result<Self> {
        Permutation::new(letters)
    }
}

impl From<Permutation> for Vec<Letter> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl AsRef<[Letter]> for Permutation {
    fn as_ref(&self) -> &[Letter] {
        &self.0
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_permutation(s, None)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

/// Compact when every letter is a single digit, space separated otherwise.
fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    if letters.iter().all(|&l| l <= 9) {
        for l in letters {
            write!(f, "{l}")?;
        }
    } else {
        for (k, l) in letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
    }
    Ok(())
}

fn tokenize(text: &str) -> Result<Vec<Letter>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let separated = text.contains(|c: char| c == ',' || c.is_whitespace());
    if !separated {
        if !text.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::MalformedToken(text.to_string()));
        }
        // Compact form only covers the alphabet [9]: a 0 digit or a word
        // longer than nine letters cannot be a permutation written this way.
        if text.len() > 9 || text.contains('0') {
            return Err(Error::MalformedToken(text.to_string()));
        }
        return Ok(text.bytes().map(|b| Letter::from(b - b'0')).collect());
    }
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            if let Some(rest) = t.strip_prefix('-') {
                if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                    return Err(Error::NonPositiveLetter);
                }
            }
            match t.parse::<Letter>() {
                Ok(0) => Err(Error::NonPositiveLetter),
                Ok(v) => Ok(v),
                Err(_) => Err(Error::MalformedToken(t.to_string())),
            }
        })
        .collect()
}

fn validate_permutation(letters: &[Letter]) -> Result<()> {
    if letters.is_empty() {
        return Err(Error::SizeTooSmall(0));
    }
    if letters.contains(&0) {
        return Err(Error::NonPositiveLetter);
    }
    let n = letters.len();
    let mut seen = vec![false; n + 1];
    for &l in letters {
        let idx = l as usize;
        if idx <= n {
            if seen[idx] {
                return Err(Error::DuplicateLetter(l));
            }
            seen[idx] = true;
        }
    }
    // A letter above n forces some letter of [n] to be absent.
    match (1..=n).find(|&k| !seen[k]) {
        Some(missing) => {
            let mut sorted = letters.to_vec();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateLetter(w[0]));
            }
            Err(Error::MissingLetter(missing as Letter))
        }
        None => Ok(()),
    }
}

/// Parses a permutation in compact or separated form.
///
/// When `n_hint` is given the parsed size must equal it; a hint above 9 also
/// rules out the compact form.
pub fn parse_permutation(text: &str, n_hint: Option<usize>) -> Result<Permutation> {
    let trimmed = text.trim();
    let compact = !trimmed.contains(|c: char| c == ',' || c.is_whitespace());
    if compact && n_hint.is_some_and(|n| n > 9) {
        return Err(Error::MalformedToken(trimmed.to_string()));
    }
    let letters = tokenize(trimmed)?;
    if let Some(n) = n_hint {
        if letters.len() != n {
            return Err(Error::SizeMismatch(n, letters.len()));
        }
    }
    Permutation::new(letters)
}

pub fn inverse(u: &Permutation) -> Permutation {
    let mut inv = vec![0; u.len()];
    for (i, &l) in u.0.iter().enumerate() {
        inv[l as usize - 1] = i as Letter + 1;
    }
    Permutation(inv)
}

pub fn reversal(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().copied().collect()
}

/// Order-isomorphic relabelling of a word with distinct letters onto `[|w|]`.
pub fn reduced_form(w: &[Letter]) -> Result<Permutation> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_unstable_by_key(|&k| w[k]);
    if let Some(pair) = order.windows(2).find(|p| w[p[0]] == w[p[1]]) {
        return Err(Error::DuplicateLetter(w[pair[0]]));
    }
    if w.is_empty() {
        return Err(Error::SizeTooSmall(0));
    }
    let mut out = vec![0; w.len()];
    for (rank, &k) in order.iter().enumerate() {
        out[k] = rank as Letter + 1;
    }
    Ok(Permutation(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub length: usize,
    pub norm: u64,
}

pub fn weight(w: &[Letter]) -> Weight {
    Weight {
        length: w.len(),
        norm: w.iter().map(|&l| u64::from(l)).sum(),
    }
}

/// Start indices (1-based) of the factors of a host word that dominate a
/// pattern letterwise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSet {
    pub indices: BTreeSet<usize>,
    pub pattern_length: usize,
}

impl EmbeddingSet {
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub fn embedding_set(u: &[Letter], w: &[Letter]) -> Result<EmbeddingSet> {
    if u.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let indices = if u.len() > w.len() {
        BTreeSet::new()
    } else {
        (0..=w.len() - u.len())
            .filter(|&j| u.iter().zip(&w[j..]).all(|(a, b)| a <= b))
            .map(|j| j + 1)
            .collect()
    };
    Ok(EmbeddingSet {
        indices,
        pattern_length: u.len(),
    })
}
