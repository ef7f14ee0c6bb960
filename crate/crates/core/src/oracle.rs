//! Brute-force ground truth for the recurrences and bijections.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::Counts;
use crate::error::{Error, Result};
use crate::perm::{Letter, Permutation};
use crate::pyramid::{canonical_member, pyramid_key, pyramidal_sequence, DiffVector};
use crate::shift::shift_orbit;
use crate::trapezoid::{is_periodic_set, next_permutation, prefixes_D, PrefixWord};
use crate::Nat;

pub const DEFAULT_SS_LIMIT: usize = 9;
pub const DEFAULT_SHIFT_LIMIT: usize = 7;

/// Largest `n` whose permutations fit the 4-bit packing.
pub const MAX_PACKED_N: usize = 16;

/// Lexicographic iterator over `S_n`.
#[derive(Debug, Clone)]
pub struct PermutationsLex {
    next: Option<Vec<Letter>>,
}

impl Iterator for PermutationsLex {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation::from_vec_unchecked(cur))
    }
}

pub fn permutations_lex(n: usize) -> PermutationsLex {
    let first = (n > 0).then(|| (1..=n as Letter).collect());
    PermutationsLex { next: first }
}

/// Packs a permutation of length at most 16 into 4 bits per letter.
pub fn pack(u: &[Letter]) -> u64 {
    debug_assert!(u.len() <= MAX_PACKED_N);
    u.iter().fold(0u64, |acc, &l| acc << 4 | u64::from(l - 1))
}

pub fn unpack(code: u64, n: usize) -> Permutation {
    let letters = (0..n)
        .rev()
        .map(|k| ((code >> (4 * k)) & 0xf) as Letter + 1)
        .collect();
    Permutation::from_vec_unchecked(letters)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    /// Hex form of the canonical pyramid key.
    pub key: String,
    pub size: u64,
    /// Lexicographically smallest member.
    pub representative: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPartitionReport {
    pub n: usize,
    pub class_count: u64,
    /// Exponent `j` of the class size `2^j`, mapped to the number of classes.
    pub histogram: BTreeMap<u32, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassEntry>>,
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub limit: usize,
    /// Worker threads for the partition sweep; `None` uses the global pool.
    pub threads: Option<usize>,
    pub with_classes: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            limit: DEFAULT_SS_LIMIT,
            threads: None,
            with_classes: false,
        }
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn exponent_of(size: u64) -> Result<u32> {
    if !size.is_power_of_two() {
        return Err(Error::Invariant(format!("class of size {size}")));
    }
    Ok(size.trailing_zeros())
}

type Block = HashMap<Vec<u8>, (u64, u64)>;

/// Classes met in the block of permutations starting with `a b`.
fn sweep_block(n: usize, a: Letter, b: Letter) -> Block {
    let mut block = Block::new();
    let mut u: Vec<Letter> = vec![a, b];
    u.extend((1..=n as Letter).filter(|&l| l != a && l != b));
    loop {
        let code = pack(&u);
        let e = block.entry(pyramid_key(&u)).or_insert((0, code));
        e.0 += 1;
        // Lexicographic sweep: the first member seen is the smallest.
        if !next_permutation(&mut u[2..]) {
            break;
        }
    }
    block
}

fn merge_blocks(mut a: Block, b: Block) -> Block {
    for (k, (c, rep)) in b {
        let e = a.entry(k).or_insert((0, rep));
        e.0 += c;
        e.1 = e.1.min(rep);
    }
    a
}

fn report_from(n: usize, classes: Vec<(Vec<u8>, u64, Permutation)>, with_classes: bool) -> Result<ClassPartitionReport> {
    let mut histogram = BTreeMap::new();
    for (_, size, _) in &classes {
        *histogram.entry(exponent_of(*size)?).or_insert(0) += 1;
    }
    let entries = with_classes.then(|| {
        let mut v: Vec<ClassEntry> = classes
            .into_iter()
            .map(|(key, size, representative)| ClassEntry {
                key: hex(&key),
                size,
                representative,
            })
            .collect();
        v.sort_by(|x, y| x.representative.cmp(&y.representative));
        v
    });
    let class_count = histogram.values().sum();
    Ok(ClassPartitionReport {
        n,
        class_count,
        histogram,
        classes: entries,
    })
}

/// Groups all of `S_n` by pyramid key.
pub fn bruteforce_ss_partition(n: usize, opts: &OracleOptions) -> Result<ClassPartitionReport> {
    if n > opts.limit || n > MAX_PACKED_N {
        return Err(Error::LimitExceeded {
            n,
            limit: opts.limit.min(MAX_PACKED_N),
        });
    }
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    let heads: Vec<(Letter, Letter)> = (1..=n as Letter)
        .flat_map(|a| (1..=n as Letter).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let run = || {
        heads
            .par_iter()
            .map(|&(a, b)| sweep_block(n, a, b))
            .reduce(Block::new, merge_blocks)
    };
    let merged = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Invariant(e.to_string()))?
            .install(run),
        None => run(),
    };
    let classes = merged
        .into_iter()
        .map(|(k, (c, rep))| (k, c, unpack(rep, n)))
        .collect();
    report_from(n, classes, opts.with_classes)
}

/// `D(i, n)` straight from the definition: every injective word of length
/// `i` whose complement is periodic while no proper prefix has that property.
#[allow(non_snake_case)]
pub fn bruteforce_D(i: usize, n: usize, limit: usize) -> Result<Vec<PrefixWord>> {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    if n < 3 || i == 0 || i + 2 > n {
        return Err(Error::OutOfRange(format!("(i, n) = ({i}, {n})")));
    }
    let periodic_after = |w: &[Letter]| -> bool {
        let rest: BTreeSet<u32> = (1..=n as u32).filter(|l| !w.contains(l)).collect();
        is_periodic_set(&rest).unwrap_or(false)
    };
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(i);
    fn extend(
        word: &mut Vec<Letter>,
        i: usize,
        n: usize,
        ok: &dyn Fn(&[Letter]) -> bool,
        out: &mut Vec<Vec<Letter>>,
    ) {
        if word.len() == i {
            if ok(word) {
                out.push(word.clone());
            }
            return;
        }
        for l in 1..=n as Letter {
            if word.contains(&l) {
                continue;
            }
            word.push(l);
            extend(word, i, n, ok, out);
            word.pop();
        }
    }
    let ok = |w: &[Letter]| periodic_after(w) && (1..w.len()).all(|j| !periodic_after(&w[..j]));
    extend(&mut word, i, n, &ok, &mut out);
    out.into_iter().map(|w| PrefixWord::new(w, n)).collect()
}

/// Orbit partition of `S_n` under rigid shifts, plus reversals if asked.
pub fn bruteforce_shift_partition(
    n: usize,
    with_reversals: bool,
    limit: usize,
    with_classes: bool,
) -> Result<ClassPartitionReport> {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit });
    }
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    let mut seen: BTreeSet<Permutation> = BTreeSet::new();
    let mut classes = Vec::new();
    for u in permutations_lex(n) {
        if seen.contains(&u) {
            continue;
        }
        let orbit = shift_orbit(&u, with_reversals);
        let key = pyramid_key(u.letters());
        classes.push((key, orbit.len() as u64, u.clone()));
        seen.extend(orbit);
    }
    report_from(n, classes, with_classes)
}

/// Every orbit of `S_n` under rigid shifts (and reversals), each sorted,
/// listed by smallest member.
pub fn shift_orbits(n: usize, with_reversals: bool) -> Vec<BTreeSet<Permutation>> {
    let mut seen: BTreeSet<Permutation> = BTreeSet::new();
    let mut out = Vec::new();
    for u in permutations_lex(n) {
        if !seen.contains(&u) {
            let orbit = shift_orbit(&u, with_reversals);
            seen.extend(orbit.iter().cloned());
            out.push(orbit);
        }
    }
    out
}

fn children(v: &[u32]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (0..v.len() - 1)
        .map(|k| {
            let mut c = v[..k].to_vec();
            c.push(v[k] + v[k + 1]);
            c.extend_from_slice(&v[k + 2..]);
            c
        })
        .collect();
    out.push(v[1..].to_vec());
    if v[1..] != v[..v.len() - 1] {
        out.push(v[..v.len() - 1].to_vec());
    }
    out
}

fn chains_from(v: Vec<u32>, memo: &mut HashMap<Vec<u32>, BTreeMap<u32, Nat>>) -> BTreeMap<u32, Nat> {
    if let Some(h) = memo.get(&v) {
        return h.clone();
    }
    let mut hist = BTreeMap::new();
    if v.len() == 1 {
        hist.insert(1, Nat::from(1u32));
    } else {
        let period = DiffVector::from_vec_unchecked(v.clone()).period();
        for c in children(&v) {
            let bonus = match period {
                Some(d) => u32::from(DiffVector::from_vec_unchecked(c.clone()).period() == Some(d)),
                None => 0,
            };
            for (j, count) in chains_from(c, memo) {
                *hist.entry(j + bonus).or_insert_with(|| Nat::from(0u32)) += count;
            }
        }
    }
    memo.insert(v, hist.clone());
    hist
}

/// Number of pyramids of size `n` by class-size exponent, counted by walking
/// the level transition rules directly rather than through the recurrences.
pub fn pyramid_count_by_rules(n: usize) -> Result<BTreeMap<u32, Nat>> {
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    let mut memo = HashMap::new();
    Ok(chains_from(vec![1; n - 1], &mut memo))
}

/// One disagreement found by a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub check: String,
    pub n: usize,
    pub detail: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] n = {}: {}", self.check, self.n, self.detail)
    }
}

fn mismatch(check: &str, n: usize, detail: String) -> Mismatch {
    Mismatch {
        check: check.into(),
        n,
        detail,
    }
}

/// Brute-force ss partitions against `s_n`, `s_{j,n}` and the rule count.
pub fn check_ss(n_max: usize, opts: &OracleOptions) -> Result<Vec<Mismatch>> {
    let mut counts = Counts::<Nat>::new();
    let mut out = Vec::new();
    let opts = OracleOptions {
        with_classes: true,
        ..opts.clone()
    };
    for n in 2..=n_max {
        let report = bruteforce_ss_partition(n, &opts)?;
        let s = counts.s(n)?;
        if Nat::from(report.class_count) != s {
            out.push(mismatch("ss", n, format!("{} classes, recurrence gives {s}", report.class_count)));
        }
        for j in 1..n as u32 {
            let want = counts.s_j(j as usize, n)?;
            let got = report.histogram.get(&j).copied().unwrap_or(0);
            if Nat::from(got) != want {
                out.push(mismatch("ss", n, format!("{got} classes of size 2^{j}, recurrence gives {want}")));
            }
        }
        let rules = pyramid_count_by_rules(n)?;
        let brute: BTreeMap<u32, Nat> = report.histogram.iter().map(|(&j, &c)| (j, Nat::from(c))).collect();
        if rules != brute {
            out.push(mismatch("ss", n, format!("rule count {rules:?} differs from {brute:?}")));
        }
        for class in report.classes.iter().flatten() {
            let back = canonical_member(&pyramidal_sequence(&class.representative)?)?;
            if pyramid_key(back.letters()) != pyramid_key(class.representative.letters()) {
                out.push(mismatch(
                    "ss",
                    n,
                    format!("canonical member {back} left the class of {}", class.representative),
                ));
            }
        }
    }
    Ok(out)
}

/// Rigid-shift orbits against ss-classes, and shift classes against `sh_n`.
pub fn check_shift(n_max: usize, limit: usize) -> Result<Vec<Mismatch>> {
    if n_max > limit {
        return Err(Error::LimitExceeded { n: n_max, limit });
    }
    let mut counts = Counts::<Nat>::new();
    let mut out = Vec::new();
    for n in 2..=n_max {
        for orbit in shift_orbits(n, false) {
            let u = orbit.first().expect("orbits are non-empty");
            let key = pyramid_key(u.letters());
            let members = crate::pyramid::class_members(&pyramidal_sequence(u)?)?;
            let class: BTreeSet<Permutation> = members.into_iter().collect();
            if class != orbit {
                out.push(mismatch(
                    "shift",
                    n,
                    format!("orbit of {u} has {} members, its class {}", orbit.len(), class.len()),
                ));
            }
            if orbit.iter().any(|v| pyramid_key(v.letters()) != key) {
                out.push(mismatch("shift", n, format!("orbit of {u} crosses classes")));
            }
        }
        let with_rev = shift_orbits(n, true);
        let sh = counts.sh(n)?;
        if Nat::from(with_rev.len()) != sh {
            out.push(mismatch("shift", n, format!("{} shift classes, formula gives {sh}", with_rev.len())));
        }
        if n >= 3 {
            let fixed: Vec<String> = shift_orbits(n, false)
                .into_iter()
                .filter(|o| o.contains(&o.first().expect("non-empty").reversal()))
                .map(|o| o.first().expect("non-empty").to_string())
                .collect();
            if fixed.len() != 2 {
                out.push(mismatch("shift", n, format!("reversal-invariant classes: {fixed:?}")));
            }
        }
    }
    Ok(out)
}

/// Definition-level `D(i, n)` against the memoized construction and `d_{i,n}`.
pub fn check_prefixes(n_max: usize, limit: usize) -> Result<Vec<Mismatch>> {
    let mut counts = Counts::<Nat>::new();
    let mut out = Vec::new();
    for n in 3..=n_max {
        for i in 1..=n - 2 {
            let brute = bruteforce_D(i, n, limit)?;
            let fast = prefixes_D(i, n)?;
            if brute != fast {
                out.push(mismatch(
                    "prefixes",
                    n,
                    format!("D({i},{n}): {} words by definition, {} constructed", brute.len(), fast.len()),
                ));
            }
            let d = counts.d(i, n)?;
            if Nat::from(brute.len()) != d {
                out.push(mismatch("prefixes", n, format!("|D({i},{n})| = {}, recurrence gives {d}", brute.len())));
            }
        }
    }
    Ok(out)
}
