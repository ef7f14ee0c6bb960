//! Rigid shifts of skyline diagrams and the equivalences they generate.
//!
//! Cutting the skyline of `u` at height `h` leaves every column of height
//! `>= h` truncated to exactly `h`. A rigid shift translates all the cut-off
//! pieces by one offset `δ`; each must come to rest on a truncated column.
//! On permutations this is purely positional: the letters above `h` move by
//! `δ`, and the one truncated column that receives nothing keeps height `h`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Letter, Permutation};
use crate::pyramid::{class_members, is_ss_equivalent, pyramidal_sequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(u32, i64)", into = "(u32, i64)")]
pub struct RigidShiftMove {
    cut_height: u32,
    offset: i64,
}

impl RigidShiftMove {
    pub fn new(cut_height: u32, offset: i64) -> Result<Self> {
        if cut_height == 0 {
            return Err(Error::InvalidMove("cut height must be positive".into()));
        }
        if offset == 0 {
            return Err(Error::InvalidMove("offset must be non-zero".into()));
        }
        Ok(RigidShiftMove { cut_height, offset })
    }

    pub fn cut_height(&self) -> u32 {
        self.cut_height
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }
}

impl TryFrom<(u32, i64)> for RigidShiftMove {
    type Error = Error;

    fn try_from((h, d): (u32, i64)) -> Result<Self> {
        RigidShiftMove::new(h, d)
    }
}

impl From<RigidShiftMove> for (u32, i64) {
    fn from(m: RigidShiftMove) -> Self {
        (m.cut_height, m.offset)
    }
}

impl fmt::Display for RigidShiftMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={} δ={:+}", self.cut_height, self.offset)
    }
}

/// Applies a rigid shift, or reports why the pieces cannot land.
pub fn apply_rigid_shift(u: &Permutation, m: RigidShiftMove) -> Result<Permutation> {
    let n = u.len() as i64;
    let h = m.cut_height;
    let letters = u.letters();
    if h as i64 > n {
        return Err(Error::InvalidMove(format!("cut height {h} exceeds n = {n}")));
    }
    let mut out = letters.to_vec();
    let mut received = vec![false; letters.len()];
    let mut moved = 0;
    for (i, &x) in letters.iter().enumerate() {
        if x <= h {
            continue;
        }
        moved += 1;
        let target = i as i64 + m.offset;
        if !(0..n).contains(&target) {
            return Err(Error::InvalidMove(format!(
                "column {} would leave [1, {n}]",
                i + 1
            )));
        }
        let t = target as usize;
        if letters[t] < h {
            return Err(Error::InvalidMove(format!(
                "column {} would land on height {} < {h}",
                i + 1,
                letters[t]
            )));
        }
        received[t] = true;
    }
    if moved == 0 {
        return Err(Error::InvalidMove(format!("nothing lies above height {h}")));
    }
    for (i, &x) in letters.iter().enumerate() {
        if x > h {
            out[(i as i64 + m.offset) as usize] = x;
        }
    }
    for (i, &x) in letters.iter().enumerate() {
        if x >= h && !received[i] {
            out[i] = h;
        }
    }
    debug_assert!(Permutation::new(out.clone()).is_ok());
    Ok(Permutation::from_vec_unchecked(out))
}

/// Every valid move with a non-empty moved set, with its result, ordered by
/// `(h, δ)`.
pub fn enumerate_rigid_shifts(u: &Permutation) -> Vec<(RigidShiftMove, Permutation)> {
    let n = u.len() as i64;
    let mut out = Vec::new();
    for h in 1..u.len() as u32 {
        for offset in (1 - n)..n {
            if offset == 0 {
                continue;
            }
            let m = RigidShiftMove { cut_height: h, offset };
            if let Ok(r) = apply_rigid_shift(u, m) {
                out.push((m, r));
            }
        }
    }
    out
}

/// One step of a shift-equivalence witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftStep {
    Rigid(RigidShiftMove),
    Reversal,
}

impl fmt::Display for ShiftStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftStep::Rigid(m) => write!(f, "shift {m}"),
            ShiftStep::Reversal => f.write_str("reverse"),
        }
    }
}

fn neighbours(u: &Permutation, with_reversals: bool) -> Vec<(ShiftStep, Permutation)> {
    let mut out: Vec<_> = enumerate_rigid_shifts(u)
        .into_iter()
        .map(|(m, r)| (ShiftStep::Rigid(m), r))
        .collect();
    if with_reversals {
        out.push((ShiftStep::Reversal, u.reversal()));
    }
    out
}

/// Breadth-first closure of `{u}` under rigid shifts, and reversals if asked.
pub fn shift_orbit(u: &Permutation, with_reversals: bool) -> BTreeSet<Permutation> {
    let mut seen = BTreeSet::from([u.clone()]);
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(x) = queue.pop_front() {
        for (_, y) in neighbours(&x, with_reversals) {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Closure under rigid shifts only.
pub fn strong_shift_class(u: &Permutation) -> BTreeSet<Permutation> {
    shift_orbit(u, false)
}

/// The shift class of `u` from the pyramid: the ss-class of `u` together
/// with the ss-class of its reversal.
pub fn shift_class(u: &Permutation) -> Result<BTreeSet<Permutation>> {
    if u.len() <= 2 {
        return Ok(shift_orbit(u, true));
    }
    let mut out: BTreeSet<Permutation> = class_members(&pyramidal_sequence(u)?)?.into_iter().collect();
    out.extend(class_members(&pyramidal_sequence(&u.reversal())?)?);
    Ok(out)
}

pub fn is_strongly_shift_equivalent(u: &Permutation, v: &Permutation) -> Result<bool> {
    is_ss_equivalent(u, v)
}

pub fn is_shift_equivalent(u: &Permutation, v: &Permutation) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::SizeMismatch(u.len(), v.len()));
    }
    Ok(is_ss_equivalent(u, v)? || is_ss_equivalent(&u.reversal(), v)?)
}

/// A sequence of steps turning `u` into `v`, found by breadth-first search.
/// Returns `None` when `v` is outside the orbit.
pub fn shift_witness(
    u: &Permutation,
    v: &Permutation,
    with_reversals: bool,
) -> Result<Option<Vec<ShiftStep>>> {
    if u.len() != v.len() {
        return Err(Error::SizeMismatch(u.len(), v.len()));
    }
    let mut parent: HashMap<Permutation, (Permutation, ShiftStep)> = HashMap::new();
    let mut queue = VecDeque::from([u.clone()]);
    let mut found = u == v;
    while let Some(x) = queue.pop_front() {
        if found {
            break;
        }
        for (step, y) in neighbours(&x, with_reversals) {
            if &y == u || parent.contains_key(&y) {
                continue;
            }
            parent.insert(y.clone(), (x.clone(), step));
            if &y == v {
                found = true;
                break;
            }
            queue.push_back(y);
        }
    }
    if !found {
        return Ok(None);
    }
    let mut steps = Vec::new();
    let mut at = v.clone();
    while &at != u {
        let (prev, step) = parent.remove(&at).expect("path recorded during search");
        steps.push(step);
        at = prev;
    }
    steps.reverse();
    Ok(Some(steps))
}

/// Replays a witness from `u`.
pub fn apply_steps(u: &Permutation, steps: &[ShiftStep]) -> Result<Permutation> {
    steps.iter().try_fold(u.clone(), |x, step| match step {
        ShiftStep::Rigid(m) => apply_rigid_shift(&x, *m),
        ShiftStep::Reversal => Ok(x.reversal()),
    })
}

/// `1 2 ... (n-3) (n-1) (n-2) n`, whose ss-class is closed under reversal.
pub fn reversal_invariant_partner(n: usize) -> Result<Permutation> {
    if n < 3 {
        return Err(Error::SizeTooSmall(n));
    }
    let mut v: Vec<Letter> = (1..=n as Letter).collect();
    v.swap(n - 3, n - 2);
    Ok(Permutation::from_vec_unchecked(v))
}
