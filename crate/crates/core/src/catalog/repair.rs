//! Completion of coverings that were transcribed short of their blocks.

use crate::catalog::{check, CycleClaim, Fixture, FixtureKind, Marks, Provenance};
use crate::cycle::{find_alternating_cycle, infer_joins, verify_cah, ColoredCycle};
use crate::design::{covering_number, Block, PairTable, Point, SetSystem};
use crate::error::{Error, Result};
use crate::report::ViolationKind;

/// Most blocks of the transcription that may be dropped to make room.
const MAX_REMOVED: usize = 2;
/// Candidate completions tried per removal set.
const MAX_COMPLETIONS: usize = 64;
/// Insertion orders tried per completion before falling back to search.
const INSERTION_BUDGET: usize = 200_000;

/// Completes a covering fixture to a minimum covering with a verified
/// cycle of the claimed kind.
///
/// Removes as few transcribed blocks as possible (none first), covers the
/// uncovered pairs with the triples still allowed by the covering number,
/// then threads the new triples into the printed cycle. The randomized
/// cycle search used as a last resort is seeded with `seed`, which is
/// recorded in the result. An already valid fixture is returned unchanged.
pub fn repair(f: &Fixture, seed: u64) -> Result<Fixture> {
    if f.kind != FixtureKind::Covering {
        return Err(Error::Precondition(format!(
            "cannot repair a {} fixture",
            f.kind.as_str()
        )));
    }
    if let Some(b) = f.blocks.iter().find(|b| b.len() != 3) {
        return Err(Error::Precondition(format!("block {b:?} is not a triple")));
    }
    let report = check(f);
    if report.is_valid() {
        return Ok(f.clone());
    }
    let repairable = [
        ViolationKind::UncoveredPair,
        ViolationKind::WrongSize,
        ViolationKind::BadJoin,
        ViolationKind::NotAlternating,
        ViolationKind::NotColorful,
    ];
    if let Some(v) = report
        .violations
        .iter()
        .find(|v| !repairable.contains(&v.kind))
    {
        return Err(Error::Precondition(format!(
            "structural violation: {}",
            v.detail
        )));
    }
    let target = covering_number(f.n)?;
    let have = f.blocks.len();
    if have > target {
        return Err(Error::Precondition(format!(
            "{have} blocks exceed the covering number {target}"
        )));
    }
    let system = f.system()?;
    let colorful = f.cycle == CycleClaim::Cah;

    for removed in 0..=MAX_REMOVED.min(have) {
        let need = target - (have - removed);
        for drop in combinations(have, removed) {
            let mut table = PairTable::new(f.n);
            for (i, b) in system.blocks().iter().enumerate() {
                if !drop.contains(&i) {
                    for (x, y) in b.pairs() {
                        table.add(x, y);
                    }
                }
            }
            let mut completions = Vec::new();
            cover_pairs(&mut table, f.n, need, &mut Vec::new(), &mut completions);
            for added in completions {
                let kept: Vec<usize> = (0..have).filter(|i| !drop.contains(i)).collect();
                if let Some(out) = stitch(f, &kept, &added, colorful, seed) {
                    return Ok(out);
                }
            }
        }
    }
    Err(Error::Exhausted(format!(
        "no completion of {} within {MAX_REMOVED} removals",
        f.key()
    )))
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// Enumerates sets of exactly `need` triples covering every uncovered pair,
/// branching on the first uncovered pair in lexicographic order.
fn cover_pairs(
    table: &mut PairTable,
    n: usize,
    need: usize,
    chosen: &mut Vec<[Point; 3]>,
    out: &mut Vec<Vec<[Point; 3]>>,
) {
    if out.len() >= MAX_COMPLETIONS {
        return;
    }
    let first = table.iter().find(|&(_, _, c)| c == 0);
    let Some((x, y, _)) = first else {
        // pad with arbitrary triples when pairs run out before blocks do
        if chosen.len() == need {
            out.push(chosen.clone());
        }
        return;
    };
    if chosen.len() == need {
        return;
    }
    let uncovered = table.iter().filter(|&(_, _, c)| c == 0).count();
    if uncovered > 3 * (need - chosen.len()) {
        return;
    }
    for z in 1..=n as Point {
        if z == x || z == y {
            continue;
        }
        let mut t = [x, y, z];
        t.sort_unstable();
        for (a, b) in [(x, y), (x, z), (y, z)] {
            table.add(a, b);
        }
        chosen.push(t);
        cover_pairs(table, n, need, chosen, out);
        chosen.pop();
        for (a, b) in [(x, y), (x, z), (y, z)] {
            table.remove(a, b);
        }
    }
}

/// Threads the added triples into the kept cycle order, trying insertion
/// positions before falling back to a seeded cycle search.
fn stitch(
    f: &Fixture,
    kept: &[usize],
    added: &[[Point; 3]],
    colorful: bool,
    seed: u64,
) -> Option<Fixture> {
    let mut lists: Vec<Vec<Point>> = kept.iter().map(|&i| f.blocks[i].clone()).collect();
    lists.extend(added.iter().map(|t| t.to_vec()));
    let system = SetSystem::from_lists(f.n, lists.iter().map(|b| b.iter().copied())).ok()?;
    if system
        .blocks()
        .iter()
        .collect::<std::collections::HashSet<&Block>>()
        .len()
        != system.len()
    {
        return None;
    }
    let base: Vec<usize> = (0..kept.len()).collect();
    let extra: Vec<usize> = (kept.len()..system.len()).collect();
    let accept = |c: &ColoredCycle| verify_cah(&system, c, colorful).is_valid();

    let mut tried = 0usize;
    let cycle = insert_all(&system, base, &extra, &accept, &mut tried)
        .or_else(|| find_alternating_cycle(&system, colorful, seed, 200_000, 50).ok())?;

    let mut out = Fixture::new(f.kind, f.n);
    out.cycle = f.cycle;
    out.provenance = Provenance::Repaired;
    out.seed = Some(seed);
    out.comments = f.comments.clone();
    let dropped: Vec<String> = (0..f.blocks.len())
        .filter(|i| !kept.contains(i))
        .map(|i| format!("{:?}", f.blocks[i]))
        .collect();
    let new: Vec<String> = added.iter().map(|t| format!("{t:?}")).collect();
    out.comments.push(format!(
        "repaired: removed [{}], added [{}]",
        dropped.join(" "),
        new.join(" ")
    ));
    for (i, &b) in cycle.blocks().iter().enumerate() {
        out.blocks.push(lists[b].clone());
        out.marks.push(if b < kept.len() {
            f.marks[kept[b]]
        } else {
            Marks::default()
        });
        out.joins.push(Some(cycle.joins()[i]));
    }
    Some(out)
}

fn insert_all(
    s: &SetSystem,
    order: Vec<usize>,
    extra: &[usize],
    accept: &dyn Fn(&ColoredCycle) -> bool,
    tried: &mut usize,
) -> Option<ColoredCycle> {
    let Some((&next, rest)) = extra.split_first() else {
        *tried += 1;
        let c = infer_joins(s, &order).ok()?;
        return accept(&c).then_some(c);
    };
    for pos in 1..=order.len() {
        if *tried >= INSERTION_BUDGET {
            return None;
        }
        // the new block must meet both neighbours
        let blocks = s.blocks();
        let (p, q) = (order[pos - 1], order[pos % order.len()]);
        if blocks[p].intersection(&blocks[next]).is_empty()
            || blocks[q].intersection(&blocks[next]).is_empty()
        {
            continue;
        }
        let mut o = order.clone();
        o.insert(pos, next);
        if let Some(c) = insert_all(s, o, rest, accept, tried) {
            return Some(c);
        }
    }
    None
}
