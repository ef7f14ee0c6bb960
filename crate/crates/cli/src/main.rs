//! `wilf`: pyramids, class counts, representatives and brute-force checks
//! for super-strong Wilf and shift equivalence of permutations.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use wilf_core::oracle::{
    bruteforce_shift_partition, bruteforce_ss_partition, check_prefixes, check_shift, check_ss, Mismatch,
    OracleOptions, DEFAULT_SHIFT_LIMIT, DEFAULT_SS_LIMIT,
};
use wilf_core::representatives::Representative;
use wilf_core::shift::shift_witness;
use wilf_core::*;

mod render;

use render::{grid, json_nat, number};

#[derive(Parser)]
#[command(name = "wilf", version, about = "Super-strong Wilf and shift equivalence classes of permutations")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Group digits in threes in text output.
    #[arg(long, global = true)]
    thousands: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pyramid of a permutation, its class-size exponent and canonical member.
    Pyramid {
        /// One-line notation, e.g. 592738164 or "10 2 3 1 ...".
        perm: String,
    },
    /// Values of the counting recurrences.
    Count {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        /// Print the whole table up to --n-max.
        #[arg(long)]
        table: bool,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Decide whether two permutations are related.
    Equiv {
        u: String,
        v: String,
        #[arg(long, value_enum, default_value_t = Relation::Ss)]
        relation: Relation,
        /// Print a sequence of moves turning u into v.
        #[arg(long)]
        witness: bool,
        /// Exit with status 1 when the answer is false.
        #[arg(long)]
        strict: bool,
    },
    /// One representative per class.
    Reps {
        #[arg(long)]
        n: usize,
        /// List the inverses instead.
        #[arg(long)]
        invert: bool,
        /// Show prefix height, prefix and reduced tail.
        #[arg(long)]
        decompose: bool,
        #[arg(long, env = "WILF_REPS_LIMIT", default_value_t = 10)]
        limit: usize,
    },
    /// Minimal prefixes with periodic complement.
    Prefixes {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: usize,
        /// Also print the trapezoid of each prefix.
        #[arg(long)]
        trapezoids: bool,
    },
    /// Orbit of a permutation under rigid shifts.
    ShiftOrbit {
        perm: String,
        #[arg(long)]
        with_reversals: bool,
    },
    /// Compare brute force with the recurrences and constructions.
    Oracle {
        #[arg(long, value_enum, required_unless_present = "report")]
        check: Option<Check>,
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        /// Print one partition report instead of running checks.
        #[arg(long, value_enum, conflicts_with = "check", requires = "n")]
        report: Option<ReportKind>,
        #[arg(long)]
        n: Option<usize>,
        /// Include every class in the report.
        #[arg(long)]
        classes: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, env = "WILF_ORACLE_LIMIT", default_value_t = DEFAULT_SS_LIMIT)]
        limit: usize,
        #[arg(long, env = "WILF_SHIFT_LIMIT", default_value_t = DEFAULT_SHIFT_LIMIT)]
        shift_limit: usize,
    },
    /// Reproduce one of the reference tables (1: d, 2: s, 3: sh, 4: s_j, 5: R_n).
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        number: u8,
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Family {
    S,
    Sjn,
    D,
    P,
    A,
    Sh,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Relation {
    Ss,
    StrongShift,
    Shift,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Ss,
    Shift,
    Prefixes,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportKind {
    Ss,
    Shift,
    ShiftReversals,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = std::result::Result<(String, u8), Failure>;

struct Ctx {
    json: bool,
    thousands: bool,
}

impl Ctx {
    fn num(&self, x: &Nat) -> String {
        number(x, self.thousands)
    }

    fn emit(&self, text: String, value: Value) -> String {
        if self.json {
            let mut s = serde_json::to_string_pretty(&value).expect("serializable");
            s.push('\n');
            s
        } else {
            text
        }
    }
}

fn need(x: Option<usize>, flag: &str) -> std::result::Result<usize, Failure> {
    x.ok_or_else(|| Failure::Usage(format!("--{flag} is required here")))
}

fn cmd_pyramid(ctx: &Ctx, text: &str) -> Run {
    let u = parse_permutation(text, None)?;
    if u.len() == 1 {
        let out = "n = 1: the pyramid is empty\nexponent  0\nclass size  1\ncanonical member  1\n";
        let v = json!({"permutation": u, "levels": [], "exponent": 0, "class_size": 1, "canonical_member": u});
        return Ok((ctx.emit(out.into(), v), 0));
    }
    let p = pyramidal_sequence(&u)?;
    let j = class_size_exponent(&p);
    let c = canonical_member(&p)?;
    let n = u.len();
    let w = p.levels().iter().flat_map(|l| l.entries()).map(|d| d.to_string().len()).max().unwrap_or(1);
    let mut out = String::new();
    for (idx, level) in p.levels().iter().enumerate().rev() {
        let indent = (n - 1 - level.len()) * (w + 1) / 2;
        let cells: Vec<String> = level.entries().iter().map(|d| format!("{d:>w$}")).collect();
        let label = format!("Δ{}", idx + 1);
        writeln!(out, "{label:<4}{}{}", " ".repeat(indent), cells.join(" ")).unwrap();
    }
    writeln!(out, "exponent  {j}").unwrap();
    writeln!(out, "class size  {}", ctx.num(&(Nat::from(1u32) << j))).unwrap();
    writeln!(out, "canonical member  {c}").unwrap();
    let v = json!({
        "permutation": u,
        "levels": p,
        "exponent": j,
        "class_size": json_nat(&(Nat::from(1u32) << j)),
        "canonical_member": c,
    });
    Ok((ctx.emit(out, v), 0))
}

fn count_one(c: &mut CountTable, family: Family, n: Option<usize>, i: Option<usize>, j: Option<usize>) -> std::result::Result<(Nat, Value), Failure> {
    let n = need(n, "n")?;
    Ok(match family {
        Family::S => (c.s(n)?, json!({"family": family, "n": n})),
        Family::Sh => (c.sh(n)?, json!({"family": family, "n": n})),
        Family::A => (c.a(n)?, json!({"family": family, "n": n})),
        Family::Sjn => {
            let j = need(j, "j")?;
            (c.s_j(j, n)?, json!({"family": family, "j": j, "n": n}))
        }
        Family::D => {
            let i = need(i, "i")?;
            (c.d(i, n)?, json!({"family": family, "i": i, "n": n}))
        }
        Family::P => {
            let i = need(i, "i")?;
            (c.p(i, n)?, json!({"family": family, "i": i, "n": n}))
        }
    })
}

/// A count table: header row, labelled rows, and the same cells for JSON.
fn count_table(ctx: &Ctx, family: Family, n_max: usize) -> Run {
    let mut c = CountTable::new();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut cells: Vec<Value> = Vec::new();
    let mut cell = |row_key: &str, row: usize, n: usize, x: &Nat| {
        cells.push(json!({row_key: row, "n": n, "value": json_nat(x)}));
        ctx.num(x)
    };
    match family {
        Family::D | Family::P => {
            let (lo_i, lo_n) = if family == Family::D { (1, 3) } else { (0, 2) };
            let mut head = vec!["i\\n".to_string()];
            head.extend((lo_n..=n_max).map(|n| n.to_string()));
            rows.push(head);
            for i in lo_i..=n_max.saturating_sub(2) {
                let mut row = vec![i.to_string()];
                for n in lo_n..=n_max {
                    if i + 2 <= n {
                        let x = if family == Family::D { c.d(i, n)? } else { c.p(i, n)? };
                        row.push(cell("i", i, n, &x));
                    } else {
                        row.push(String::new());
                    }
                }
                rows.push(row);
            }
        }
        Family::Sjn => {
            let mut head = vec!["j\\n".to_string()];
            head.extend((2..=n_max).map(|n| n.to_string()));
            rows.push(head);
            for j in 1..n_max {
                let mut row = vec![j.to_string()];
                for n in 2..=n_max {
                    if j < n {
                        let x = c.s_j(j, n)?;
                        row.push(cell("j", j, n, &x));
                    } else {
                        row.push(String::new());
                    }
                }
                rows.push(row);
            }
        }
        Family::S | Family::Sh | Family::A => {
            let lo = if family == Family::A { 2 } else { 1 };
            let label = match family {
                Family::S => "s_n",
                Family::Sh => "sh_n",
                _ => "a_n",
            };
            let mut head = vec!["n".to_string()];
            head.extend((lo..=n_max).map(|n| n.to_string()));
            let mut row = vec![label.to_string()];
            for n in lo..=n_max {
                let x = match family {
                    Family::S => c.s(n)?,
                    Family::Sh => c.sh(n)?,
                    _ => c.a(n)?,
                };
                row.push(cell("row", 0, n, &x));
            }
            rows.push(head);
            rows.push(row);
        }
    }
    let v = json!({"family": family, "n_max": n_max, "cells": cells});
    Ok((ctx.emit(grid(&rows), v), 0))
}

fn cmd_count(ctx: &Ctx, family: Family, n: Option<usize>, i: Option<usize>, j: Option<usize>, table: bool, n_max: usize) -> Run {
    if table {
        return count_table(ctx, family, n_max);
    }
    let mut c = CountTable::new();
    let (x, mut v) = count_one(&mut c, family, n, i, j)?;
    v["value"] = json_nat(&x);
    Ok((ctx.emit(format!("{}\n", ctx.num(&x)), v), 0))
}

fn cmd_equiv(ctx: &Ctx, u: &str, v: &str, relation: Relation, witness: bool, strict: bool) -> Run {
    let u = parse_permutation(u, None)?;
    let v = parse_permutation(v, None)?;
    let related = match relation {
        Relation::Ss => is_ss_equivalent(&u, &v)?,
        Relation::StrongShift => is_strongly_shift_equivalent(&u, &v)?,
        Relation::Shift => is_shift_equivalent(&u, &v)?,
    };
    let steps = if witness && related && relation != Relation::Ss {
        shift_witness(&u, &v, relation == Relation::Shift)?
    } else {
        None
    };
    let mut out = format!("{related}\n");
    if let Some(steps) = &steps {
        let mut at = u.clone();
        for (k, step) in steps.iter().enumerate() {
            at = shift::apply_steps(&at, std::slice::from_ref(step))?;
            writeln!(out, "{:>3}. {step}  -> {at}", k + 1).unwrap();
        }
    }
    let mut value = json!({"u": u, "v": v, "relation": relation, "equivalent": related});
    if let Some(steps) = steps {
        value["witness"] = json!(steps);
    }
    let code = u8::from(strict && !related);
    Ok((ctx.emit(out, value), code))
}

fn join_prefix_groups(reps: &[&Representative]) -> String {
    let mut groups: Vec<Vec<String>> = Vec::new();
    let mut last: Option<&[Letter]> = None;
    for r in reps {
        let tail: String = r.word.letters()[r.height..].iter().map(|l| l.to_string()).collect();
        let prefix: String = r.prefix.iter().map(|l| l.to_string()).collect();
        let item = format!("{prefix}|{tail}");
        if last == Some(r.prefix.as_slice()) {
            groups.last_mut().expect("started").push(item);
        } else {
            groups.push(vec![item]);
            last = Some(&r.prefix);
        }
    }
    let sep = if groups.iter().all(|g| g.len() == 1) { ", " } else { "; " };
    groups.iter().map(|g| g.join(", ")).collect::<Vec<_>>().join(sep)
}

fn cmd_reps(ctx: &Ctx, n: usize, invert: bool, decompose: bool, limit: usize) -> Run {
    if n > limit {
        return Err(Error::LimitExceeded { n, limit }.into());
    }
    let reps = representatives_decomposed(n)?;
    let mut out = String::new();
    let mut members = Vec::with_capacity(reps.len());
    for r in &reps {
        let shown = if invert { r.word.inverse() } else { r.word.clone() };
        if decompose {
            let prefix: Vec<String> = r.prefix.iter().map(|l| l.to_string()).collect();
            writeln!(out, "{shown}  {}  {}  {}", r.height, prefix.join(" "), r.tau).unwrap();
            let mut m = json!(r);
            if invert {
                m["inverse"] = json!(shown);
            }
            members.push(m);
        } else {
            writeln!(out, "{shown}").unwrap();
            members.push(json!(shown));
        }
    }
    let v = json!({"n": n, "set": if invert { "C" } else { "R" }, "count": reps.len(), "members": members});
    Ok((ctx.emit(out, v), 0))
}

fn cmd_prefixes(ctx: &Ctx, i: usize, n: usize, trapezoids: bool) -> Run {
    let words = prefixes_D(i, n)?;
    let mut out = String::new();
    let mut items = Vec::with_capacity(words.len());
    for w in &words {
        if trapezoids {
            let t = phi(w)?;
            let levels: Vec<String> = t.levels().iter().map(|l| l.to_string()).collect();
            writeln!(out, "{w}  {}", levels.join(" ")).unwrap();
            items.push(json!({"word": w.letters(), "trapezoid": t.levels()}));
        } else {
            writeln!(out, "{w}").unwrap();
            items.push(json!(w.letters()));
        }
    }
    let v = json!({"i": i, "n": n, "count": words.len(), "words": items});
    Ok((ctx.emit(out, v), 0))
}

fn cmd_shift_orbit(ctx: &Ctx, text: &str, with_reversals: bool) -> Run {
    let u = parse_permutation(text, None)?;
    let orbit = shift_orbit(&u, with_reversals);
    let mut out = String::new();
    for p in &orbit {
        writeln!(out, "{p}").unwrap();
    }
    let v = json!({"permutation": u, "with_reversals": with_reversals, "size": orbit.len(), "orbit": orbit});
    Ok((ctx.emit(out, v), 0))
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    ctx: &Ctx,
    check: Option<Check>,
    n_max: usize,
    report: Option<ReportKind>,
    n: Option<usize>,
    classes: bool,
    threads: Option<usize>,
    limit: usize,
    shift_limit: usize,
) -> Run {
    let opts = OracleOptions {
        limit,
        threads,
        with_classes: classes,
    };
    if let Some(kind) = report {
        let n = need(n, "n")?;
        let r = match kind {
            ReportKind::Ss => bruteforce_ss_partition(n, &opts)?,
            ReportKind::Shift => bruteforce_shift_partition(n, false, shift_limit, classes)?,
            ReportKind::ShiftReversals => bruteforce_shift_partition(n, true, shift_limit, classes)?,
        };
        let mut out = format!("n = {}: {} classes\n", r.n, ctx.num(&Nat::from(r.class_count)));
        let mut rows = vec![vec!["j".to_string(), "classes".to_string()]];
        rows.extend(r.histogram.iter().map(|(j, c)| vec![j.to_string(), ctx.num(&Nat::from(*c))]));
        out.push_str(&grid(&rows));
        for c in r.classes.iter().flatten() {
            writeln!(out, "{}  {}  {}", c.representative, c.size, c.key).unwrap();
        }
        let v = serde_json::to_value(&r).expect("serializable");
        return Ok((ctx.emit(out, v), 0));
    }
    let check = check.expect("clap requires --check or --report");
    let mut runs: Vec<(&str, String, Vec<Mismatch>)> = Vec::new();
    if matches!(check, Check::Ss | Check::All) {
        runs.push(("ss", format!("n = 2..{n_max}"), check_ss(n_max, &opts)?));
    }
    if matches!(check, Check::Shift | Check::All) {
        runs.push(("shift", format!("n = 2..{n_max}"), check_shift(n_max, shift_limit)?));
    }
    if matches!(check, Check::Prefixes | Check::All) {
        runs.push(("prefixes", format!("n = 3..{n_max}"), check_prefixes(n_max, limit)?));
    }
    let mut rows = Vec::new();
    let mut details = String::new();
    let mut ok = true;
    let mut json_runs = Vec::new();
    for (name, range, mismatches) in &runs {
        let status = if mismatches.is_empty() { "ok" } else { "MISMATCH" };
        ok &= mismatches.is_empty();
        rows.push(vec![name.to_string(), range.clone(), status.to_string()]);
        for m in mismatches {
            writeln!(details, "{m}").unwrap();
        }
        json_runs.push(json!({"check": name, "range": range, "mismatches": mismatches}));
    }
    let mut summary = String::new();
    for row in &rows {
        writeln!(summary, "{:<10}{:<12}{}", row[0], row[1], row[2]).unwrap();
    }
    let out = format!("{summary}{details}{}\n", if ok { "PASS" } else { "FAIL" });
    let v = json!({"n_max": n_max, "ok": ok, "checks": json_runs});
    Ok((ctx.emit(out, v), u8::from(!ok)))
}

fn cmd_table(ctx: &Ctx, number: u8, n_max: Option<usize>) -> Run {
    match number {
        1 => count_table(ctx, Family::D, n_max.unwrap_or(12)),
        2 => count_table(ctx, Family::S, n_max.unwrap_or(12)),
        3 => count_table(ctx, Family::Sh, n_max.unwrap_or(12)),
        4 => count_table(ctx, Family::Sjn, n_max.unwrap_or(12)),
        _ => {
            let top = n_max.unwrap_or(6);
            if top > 8 {
                return Err(Error::LimitExceeded { n: top, limit: 8 }.into());
            }
            let mut out = String::from("n  R_n\n");
            let mut sets = Vec::new();
            for n in 3..=top {
                let reps = representatives_decomposed(n)?;
                for (k, h) in (1..=n - 2).enumerate() {
                    let group: Vec<&Representative> = reps.iter().filter(|r| r.height == h).collect();
                    if group.is_empty() {
                        continue;
                    }
                    let label = if k == 0 { n.to_string() } else { String::new() };
                    writeln!(out, "{label:<3}{}", join_prefix_groups(&group)).unwrap();
                }
                sets.push(json!({"n": n, "members": reps}));
            }
            Ok((ctx.emit(out, json!({"table": 5, "sets": sets})), 0))
        }
    }
}

fn run(cli: Cli) -> Run {
    let ctx = Ctx {
        json: cli.json,
        thousands: cli.thousands,
    };
    match cli.command {
        Command::Pyramid { perm } => cmd_pyramid(&ctx, &perm),
        Command::Count {
            family,
            n,
            i,
            j,
            table,
            n_max,
        } => cmd_count(&ctx, family, n, i, j, table, n_max),
        Command::Equiv {
            u,
            v,
            relation,
            witness,
            strict,
        } => cmd_equiv(&ctx, &u, &v, relation, witness, strict),
        Command::Reps {
            n,
            invert,
            decompose,
            limit,
        } => cmd_reps(&ctx, n, invert, decompose, limit),
        Command::Prefixes { i, n, trapezoids } => cmd_prefixes(&ctx, i, n, trapezoids),
        Command::ShiftOrbit { perm, with_reversals } => cmd_shift_orbit(&ctx, &perm, with_reversals),
        Command::Oracle {
            check,
            n_max,
            report,
            n,
            classes,
            threads,
            limit,
            shift_limit,
        } => cmd_oracle(&ctx, check, n_max, report, n, classes, threads, limit, shift_limit),
        Command::Table { number, n_max } => cmd_table(&ctx, number, n_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Invariant(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
