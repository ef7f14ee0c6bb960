//! Closed forms and recurrences for the prefix, non-interval and class counts.
//!
//! Everything is generic over the scalar so the same recurrences run on
//! `u64` (fast, may overflow) and on `BigUint` (exact). Overflow and
//! negative intermediate results are reported instead of wrapping.

use std::collections::HashMap;
use std::fmt::{Debug, Display};

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::Nat;

/// Scalars the counting recurrences can run on.
pub trait CountScalar:
    Num + Clone + Ord + Debug + Display + CheckedAdd + CheckedSub + CheckedMul + FromPrimitive
{
}

impl<T> CountScalar for T where
    T: Num + Clone + Ord + Debug + Display + CheckedAdd + CheckedSub + CheckedMul + FromPrimitive
{
}

/// Memoized counts over one scalar type.
#[derive(Debug, Clone)]
pub struct Counts<T> {
    fact: Vec<T>,
    p: HashMap<(usize, usize), T>,
    d: HashMap<(usize, usize), T>,
    a: Vec<T>,
    s: Vec<T>,
    s_j: HashMap<(usize, usize), T>,
}

impl<T: CountScalar> Default for Counts<T> {
    fn default() -> Self {
        Self::new()
    }
}

fn add<T: CountScalar>(a: &T, b: &T, what: impl FnOnce() -> String) -> Result<T> {
    a.checked_add(b).ok_or_else(|| Error::Overflow(what()))
}

fn mul<T: CountScalar>(a: &T, b: &T, what: impl FnOnce() -> String) -> Result<T> {
    a.checked_mul(b).ok_or_else(|| Error::Overflow(what()))
}

fn sub<T: CountScalar>(a: &T, b: &T, what: impl FnOnce() -> String) -> Result<T> {
    if a < b {
        return Err(Error::NegativeResult(what()));
    }
    a.checked_sub(b).ok_or_else(|| Error::Overflow(what()))
}

fn lift<T: CountScalar>(x: usize, what: impl FnOnce() -> String) -> Result<T> {
    T::from_usize(x).ok_or_else(|| Error::Overflow(what()))
}

impl<T: CountScalar> Counts<T> {
    pub fn new() -> Self {
        Counts {
            fact: vec![T::one()],
            p: HashMap::new(),
            d: HashMap::new(),
            a: Vec::new(),
            s: Vec::new(),
            s_j: HashMap::new(),
        }
    }

    pub fn factorial(&mut self, k: usize) -> Result<T> {
        while self.fact.len() <= k {
            let m = self.fact.len();
            let next = mul(&self.fact[m - 1], &lift(m, || format!("{m}!"))?, || format!("{m}!"))?;
            self.fact.push(next);
        }
        Ok(self.fact[k].clone())
    }

    /// Words of `i` distinct letters from `[n]` whose complement is periodic.
    pub fn p(&mut self, i: usize, n: usize) -> Result<T> {
        if n < 2 || i + 2 > n {
            return Err(Error::OutOfRange(format!("p needs 0 <= i <= n - 2, got i = {i}, n = {n}")));
        }
        if let Some(v) = self.p.get(&(i, n)) {
            return Ok(v.clone());
        }
        let label = || format!("p({i},{n})");
        let m = n - i - 1;
        // Progressions of length m + 1 and step d: n - d m starting points.
        let progressions: usize = (1..=n / m).map(|d| n - d * m).sum();
        let v = mul(&self.factorial(i)?, &lift(progressions, label)?, label)?;
        self.p.insert((i, n), v.clone());
        Ok(v)
    }

    /// Size of `D(i, n)`.
    pub fn d(&mut self, i: usize, n: usize) -> Result<T> {
        if n < 3 || i == 0 || i + 2 > n {
            return Err(Error::OutOfRange(format!("d needs 1 <= i <= n - 2, got i = {i}, n = {n}")));
        }
        if let Some(v) = self.d.get(&(i, n)) {
            return Ok(v.clone());
        }
        for k in 1..i {
            self.d(k, n)?;
        }
        let label = || format!("d({i},{n})");
        let mut acc = T::zero();
        for k in 1..i {
            let term = mul(&self.p(i - k, n - k)?, &self.d[&(k, n)], label)?;
            acc = add(&acc, &term, label)?;
        }
        let v = sub(&self.p(i, n)?, &acc, label)?;
        self.d.insert((i, n), v.clone());
        Ok(v)
    }

    /// Non-interval permutations of length `m >= 2`.
    pub fn a(&mut self, m: usize) -> Result<T> {
        if m < 2 {
            return Err(Error::OutOfRange(format!("a needs m >= 2, got {m}")));
        }
        // self.a[k] holds a_{k + 2}.
        while self.a.len() + 2 <= m {
            let next = self.a.len() + 2;
            let label = || format!("a({next})");
            let v = if next == 2 {
                lift(2, label)?
            } else {
                let i = next - 1;
                let mut acc = T::zero();
                for k in 1..i {
                    let f = self.factorial(i - k + 1)?;
                    let term = mul(&self.a[k - 1], &f, label)?;
                    acc = add(&acc, &term, label)?;
                }
                sub(&self.factorial(next)?, &acc, label)?
            };
            self.a.push(v);
        }
        Ok(self.a[m - 2].clone())
    }

    /// Number of strong-shift classes of `S_n`.
    pub fn s(&mut self, n: usize) -> Result<T> {
        if n == 0 {
            return Err(Error::OutOfRange("s needs n >= 1".into()));
        }
        // self.s[k] holds s_{k + 1}.
        while self.s.len() < n {
            let m = self.s.len() + 1;
            let v = match m {
                1 | 2 => T::one(),
                3 => lift(2, || "s(3)".into())?,
                _ => {
                    let label = || format!("s({m})");
                    let mut acc = self.s[m - 2].clone();
                    for i in 2..=m - 2 {
                        let term = mul(&self.d(i, m)?, &self.s[m - i - 1], label)?;
                        acc = add(&acc, &term, label)?;
                    }
                    acc
                }
            };
            self.s.push(v);
        }
        Ok(self.s[n - 1].clone())
    }

    /// Number of strong-shift classes of `S_n` with exactly `2^j` members.
    pub fn s_j(&mut self, j: usize, n: usize) -> Result<T> {
        if n < 2 {
            return Err(Error::OutOfRange(format!("s_j needs n >= 2, got {n}")));
        }
        if j == 0 || j > n - 1 {
            return Ok(T::zero());
        }
        if n <= 3 {
            // s_{1,2} = s_{1,3} = s_{2,3} = 1.
            return Ok(T::one());
        }
        if let Some(v) = self.s_j.get(&(j, n)) {
            return Ok(v.clone());
        }
        let label = || format!("s_{j}({n})");
        let mut acc = if j == 1 { T::zero() } else { self.s_j(j - 1, n - 1)? };
        for k in 2..n.saturating_sub(j) {
            let term = mul(&self.d(k, n)?, &self.s_j(j, n - k)?, label)?;
            acc = add(&acc, &term, label)?;
        }
        self.s_j.insert((j, n), acc.clone());
        Ok(acc)
    }

    /// `(s_{1,n}, ..., s_{n-1,n})`.
    pub fn s_j_row(&mut self, n: usize) -> Result<Vec<T>> {
        (1..n).map(|j| self.s_j(j, n)).collect()
    }

    /// Number of shift classes of `S_n`.
    pub fn sh(&mut self, n: usize) -> Result<T> {
        if n == 0 {
            return Err(Error::OutOfRange("sh needs n >= 1".into()));
        }
        if n <= 2 {
            return Ok(T::one());
        }
        let s = self.s(n)?;
        let two = lift::<T>(2, || format!("sh({n})"))?;
        if !(s.clone() % two.clone()).is_zero() {
            return Err(Error::ParityViolation(n));
        }
        add(&T::one(), &(s / two), || format!("sh({n})"))
    }
}

pub fn p_count(i: usize, n: usize) -> Result<Nat> {
    Counts::<Nat>::new().p(i, n)
}

pub fn d_count(i: usize, n: usize) -> Result<Nat> {
    Counts::<Nat>::new().d(i, n)
}

pub fn a_noninterval(m: usize) -> Result<Nat> {
    Counts::<Nat>::new().a(m)
}

pub fn s_count(n: usize) -> Result<Nat> {
    Counts::<Nat>::new().s(n)
}

pub fn s_j_count(j: usize, n: usize) -> Result<Nat> {
    Counts::<Nat>::new().s_j(j, n)
}

pub fn sh_count(n: usize) -> Result<Nat> {
    Counts::<Nat>::new().sh(n)
}
