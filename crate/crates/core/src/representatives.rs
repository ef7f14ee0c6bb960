//! One representative per class, built from minimal periodic prefixes.
//!
//! A word of `R(n)` is a prefix `u` from `E(i, n)` followed by a word on the
//! remaining (periodic) alphabet whose reduced form is again in
//! `R(n - i)`. Taking inverses gives `C(n)`, whose members have pairwise
//! different pyramids and meet every class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Letter, Permutation};
use crate::trapezoid::PrefixTable;

/// A member of `R(n)` split as `prefix | un_reduce(tau)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representative {
    pub height: usize,
    pub prefix: Vec<Letter>,
    pub tau: Permutation,
    pub word: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentativeSet {
    pub n: usize,
    pub members: Vec<Permutation>,
}

impl RepresentativeSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Relabels `tau` onto `alphabet`: letter `k` becomes the `k`-th smallest
/// element of `alphabet`.
pub fn un_reduce(tau: &Permutation, alphabet: &[Letter]) -> Result<Vec<Letter>> {
    if tau.len() != alphabet.len() {
        return Err(Error::SizeMismatch(tau.len(), alphabet.len()));
    }
    let mut sorted = alphabet.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        let dup = sorted.windows(2).find(|w| w[0] == w[1]).expect("checked")[0];
        return Err(Error::DuplicateLetter(dup));
    }
    Ok(tau.letters().iter().map(|&k| sorted[k as usize - 1]).collect())
}

fn perm(s: &[Letter]) -> Permutation {
    Permutation::from_vec_unchecked(s.to_vec())
}

fn base_cases(n: usize) -> Vec<Representative> {
    let rep = |prefix: &[Letter], word: &[Letter]| Representative {
        height: prefix.len(),
        prefix: prefix.to_vec(),
        tau: Permutation::identity(word.len() - prefix.len()),
        word: perm(word),
    };
    match n {
        1 => vec![Representative {
            height: 0,
            prefix: vec![],
            tau: Permutation::identity(1),
            word: perm(&[1]),
        }],
        2 => vec![rep(&[1], &[1, 2])],
        // The recursion alone only yields 123.
        3 => vec![rep(&[1], &[1, 2, 3]), rep(&[2], &[2, 1, 3])],
        _ => unreachable!("base cases stop at 3"),
    }
}

/// `R(1), ..., R(n)` in emission order, decomposed.
fn build_all(n: usize) -> Result<Vec<Vec<Representative>>> {
    if n == 0 {
        return Err(Error::SizeTooSmall(0));
    }
    let mut all: Vec<Vec<Representative>> = Vec::with_capacity(n);
    for m in 1..=n.min(3) {
        all.push(base_cases(m));
    }
    for m in 4..=n {
        let mut table = PrefixTable::new(m)?;
        let mut level = Vec::new();
        for i in 1..=m - 2 {
            let prefixes: Vec<Vec<Letter>> = if i == 1 {
                vec![vec![1]]
            } else {
                table.get(i)?.to_vec()
            };
            let tails = &all[m - i - 1];
            for u in prefixes {
                let mut rest: Vec<Letter> = (1..=m as Letter).filter(|l| !u.contains(l)).collect();
                rest.sort_unstable();
                for t in tails {
                    let mut word = u.clone();
                    word.extend(un_reduce(&t.word, &rest)?);
                    level.push(Representative {
                        height: i,
                        prefix: u.clone(),
                        tau: t.word.clone(),
                        word: perm(&word),
                    });
                }
            }
        }
        all.push(level);
    }
    Ok(all)
}

/// `R(n)` with each member split into prefix and tail.
pub fn representatives_decomposed(n: usize) -> Result<Vec<Representative>> {
    Ok(build_all(n)?.pop().expect("n >= 1"))
}

#[allow(non_snake_case)]
pub fn representatives_R(n: usize) -> Result<RepresentativeSet> {
    let members = representatives_decomposed(n)?
        .into_iter()
        .map(|r| r.word)
        .collect();
    Ok(RepresentativeSet { n, members })
}

/// Inverses of `R(n)`, in the same order.
#[allow(non_snake_case)]
pub fn representatives_C(n: usize) -> Result<RepresentativeSet> {
    let r = representatives_R(n)?;
    Ok(RepresentativeSet {
        n,
        members: r.members.iter().map(Permutation::inverse).collect(),
    })
}
