//! Set systems, group divisible designs and their exact verifiers.
//!
//! Points are the integers `1..=n`. Pair coverage is tallied in a single
//! triangular multiplicity table ([`PairTable`]) so that covering, PBD and
//! GDD checks all read the same counts.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::report::{VerificationReport, Violation, ViolationKind};

pub type Point = u32;

/// A block: a set of distinct points, stored in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Vec<Point>);

impl Block {
    pub fn new(points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut pts: Vec<Point> = points.into_iter().collect();
        pts.sort_unstable();
        if let Some(w) = pts.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Precondition(format!("block repeats point {}", w[0])));
        }
        Ok(Block(pts))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    /// Common points in ascending order.
    pub fn intersection(&self, other: &Block) -> Vec<Point> {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let p = &self.0;
        (0..p.len()).flat_map(move |i| (i + 1..p.len()).map(move |j| (p[i], p[j])))
    }

    fn map(&self, f: impl Fn(Point) -> Point) -> Result<Block> {
        Block::new(self.0.iter().map(|&p| f(p)))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// A set system of order `n` on the points `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    order: usize,
    blocks: Vec<Block>,
}

impl SetSystem {
    pub fn new(order: usize, blocks: Vec<Block>) -> Result<Self> {
        for b in &blocks {
            if let Some(&p) = b.points().iter().find(|&&p| p == 0 || p as usize > order) {
                return Err(Error::Precondition(format!(
                    "point {p} of block {b} outside 1..={order}"
                )));
            }
        }
        Ok(SetSystem { order, blocks })
    }

    /// Builds a system from raw point lists.
    pub fn from_lists<I, B>(order: usize, lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = Point>,
    {
        let blocks = lists
            .into_iter()
            .map(Block::new)
            .collect::<Result<Vec<_>>>()?;
        SetSystem::new(order, blocks)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Relabels points through `f` into a system of order `order`.
    pub fn relabel(&self, order: usize, f: impl Fn(Point) -> Point) -> Result<SetSystem> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.map(&f))
            .collect::<Result<_>>()?;
        SetSystem::new(order, blocks)
    }

    /// The common block size, if every block has the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let k = self.blocks.first()?.len();
        self.blocks.iter().all(|b| b.len() == k).then_some(k)
    }

    /// Position of each distinct block; later duplicates are ignored.
    pub fn block_index(&self) -> HashMap<&Block, usize> {
        let mut idx = HashMap::with_capacity(self.blocks.len());
        for (i, b) in self.blocks.iter().enumerate() {
            idx.entry(b).or_insert(i);
        }
        idx
    }

    pub fn pair_table(&self) -> PairTable {
        let mut t = PairTable::new(self.order);
        for b in &self.blocks {
            for (x, y) in b.pairs() {
                t.add(x, y);
            }
        }
        t
    }
}

/// Pair multiplicities over `1..=n`, stored as a strict upper triangle.
#[derive(Clone, Debug)]
pub struct PairTable {
    order: usize,
    counts: Vec<u32>,
}

impl PairTable {
    pub fn new(order: usize) -> Self {
        PairTable {
            order,
            counts: vec![0; order * order.saturating_sub(1) / 2],
        }
    }

    fn index(&self, x: Point, y: Point) -> usize {
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        let (a, b) = (a as usize - 1, b as usize - 1);
        // row a holds pairs (a, a+1..n)
        a * (2 * self.order - a - 1) / 2 + (b - a - 1)
    }

    pub fn add(&mut self, x: Point, y: Point) {
        let i = self.index(x, y);
        self.counts[i] += 1;
    }

    pub fn remove(&mut self, x: Point, y: Point) {
        let i = self.index(x, y);
        self.counts[i] -= 1;
    }

    pub fn get(&self, x: Point, y: Point) -> u32 {
        self.counts[self.index(x, y)]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// All unordered pairs with their multiplicity, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Point, Point, u32)> + '_ {
        let n = self.order as Point;
        (1..=n).flat_map(move |x| (x + 1..=n).map(move |y| (x, y, self.get(x, y))))
    }
}

/// Multiset of group sizes, rendered as `g1^t1 g2^t2 …` in ascending size.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupType(BTreeMap<usize, usize>);

impl GroupType {
    pub fn from_sizes(sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut m = BTreeMap::new();
        for s in sizes {
            *m.entry(s).or_insert(0) += 1;
        }
        GroupType(m)
    }

    /// `g^t`, or `g^t u^1` when `u > 0`.
    pub fn uniform(g: usize, t: usize) -> Self {
        GroupType::from_sizes(std::iter::repeat_n(g, t))
    }

    pub fn with_extra(mut self, u: usize) -> Self {
        if u > 0 {
            *self.0.entry(u).or_insert(0) += 1;
        }
        self
    }

    /// `(size, multiplicity)` in ascending size.
    pub fn parts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&g, &t)| (g, t))
    }

    /// Group sizes in ascending order, with repetition.
    pub fn sizes(&self) -> Vec<usize> {
        self.parts()
            .flat_map(|(g, t)| std::iter::repeat_n(g, t))
            .collect()
    }

    pub fn total(&self) -> usize {
        self.parts().map(|(g, t)| g * t).sum()
    }

    pub fn group_count(&self) -> usize {
        self.0.values().sum()
    }

    /// Compact spelling used in fixture headers: `2^3,4^1`.
    pub fn compact(&self) -> String {
        self.parts()
            .map(|(g, t)| format!("{g}^{t}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .parts()
            .map(|(g, t)| format!("{g}^{t}"))
            .collect::<Vec<_>>()
            .join(" ");
        f.write_str(&s)
    }
}

impl FromStr for GroupType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            message: format!("bad group type {s:?}"),
        };
        let mut m = BTreeMap::new();
        for part in s.split([',', ' ']).filter(|p| !p.is_empty()) {
            let (g, t) = part.split_once('^').ok_or_else(bad)?;
            let t = t.trim_matches(|c| c == '{' || c == '}');
            let g: usize = g.parse().map_err(|_| bad())?;
            let t: usize = t.parse().map_err(|_| bad())?;
            if g == 0 || t == 0 {
                return Err(bad());
            }
            *m.entry(g).or_insert(0) += t;
        }
        if m.is_empty() {
            return Err(bad());
        }
        Ok(GroupType(m))
    }
}

/// A set system together with a partition of its points into groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupedDesign {
    system: SetSystem,
    groups: Vec<Vec<Point>>,
}

impl GroupedDesign {
    pub fn new(system: SetSystem, groups: Vec<Vec<Point>>) -> Result<Self> {
        let n = system.order();
        let mut seen = vec![false; n + 1];
        let mut groups = groups;
        for g in &mut groups {
            if g.is_empty() {
                return Err(Error::Precondition("empty group".into()));
            }
            g.sort_unstable();
            for &p in g.iter() {
                if p == 0 || p as usize > n {
                    return Err(Error::Precondition(format!(
                        "group point {p} outside 1..={n}"
                    )));
                }
                if std::mem::replace(&mut seen[p as usize], true) {
                    return Err(Error::Precondition(format!("point {p} in two groups")));
                }
            }
        }
        if let Some(p) = (1..=n).find(|&p| !seen[p]) {
            return Err(Error::Precondition(format!("point {p} in no group")));
        }
        Ok(GroupedDesign { system, groups })
    }

    /// Every point in its own group; a PBD viewed as a GDD of type `1^n`.
    pub fn singletons(system: SetSystem) -> Self {
        let groups = (1..=system.order() as Point).map(|p| vec![p]).collect();
        GroupedDesign { system, groups }
    }

    pub fn system(&self) -> &SetSystem {
        &self.system
    }

    pub fn groups(&self) -> &[Vec<Point>] {
        &self.groups
    }

    pub fn order(&self) -> usize {
        self.system.order()
    }

    pub fn group_type(&self) -> GroupType {
        GroupType::from_sizes(self.groups.iter().map(Vec::len))
    }

    /// Index of the group holding each point (`0` slot unused).
    pub fn group_of(&self) -> Vec<usize> {
        let mut g = vec![usize::MAX; self.order() + 1];
        for (i, grp) in self.groups.iter().enumerate() {
            for &p in grp {
                g[p as usize] = i;
            }
        }
        g
    }

    pub fn into_parts(self) -> (SetSystem, Vec<Vec<Point>>) {
        (self.system, self.groups)
    }
}

/// `C(n,3,2)`, the minimum number of triples covering all pairs of an
/// `n`-set, by exact integer evaluation of `⌈(n/3)·⌈(n−1)/2⌉⌉`.
pub fn covering_number(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "covering number needs n >= 3, got {n}"
        )));
    }
    let inner = (n - 1).div_ceil(2);
    Ok((n * inner).div_ceil(3))
}

pub fn verify_k_uniform(s: &SetSystem, sizes: &BTreeSet<usize>) -> VerificationReport {
    let mut r = VerificationReport::new();
    for (i, b) in s.blocks().iter().enumerate() {
        if !sizes.contains(&b.len()) {
            r.push(
                Violation::new(
                    ViolationKind::BadUniformity,
                    format!("block {i} {b} has size {}", b.len()),
                )
                .with_points(b.points().iter().copied())
                .with_blocks([i]),
            );
        }
    }
    r
}

fn report_duplicates(s: &SetSystem, r: &mut VerificationReport) {
    let mut first: HashMap<&Block, usize> = HashMap::new();
    for (i, b) in s.blocks().iter().enumerate() {
        if let Some(&j) = first.get(b) {
            r.push(
                Violation::new(
                    ViolationKind::DuplicateBlock,
                    format!("block {i} repeats block {j} {b}"),
                )
                .with_points(b.points().iter().copied())
                .with_blocks([j, i]),
            );
        } else {
            first.insert(b, i);
        }
    }
}

fn pair_violation(kind: ViolationKind, x: Point, y: Point, count: u32) -> Violation {
    Violation::new(kind, format!("pair {{{x},{y}}} covered {count} times")).with_points([x, y])
}

fn triples() -> BTreeSet<usize> {
    BTreeSet::from([3])
}

/// Checks that `s` is a 3-uniform `(n,3,2)`-covering and records whether it
/// is minimum.
pub fn verify_covering(s: &SetSystem) -> VerificationReport {
    let mut r = verify_k_uniform(s, &triples());
    report_duplicates(s, &mut r);
    let table = s.pair_table();
    for (x, y, c) in table.iter() {
        if c == 0 {
            r.push(pair_violation(ViolationKind::UncoveredPair, x, y, c));
        }
    }
    r.minimum = covering_number(s.order())
        .ok()
        .map(|c| r.is_valid() && s.len() == c);
    r
}

/// Checks that `s` is a PBD with block sizes in `sizes`.
pub fn verify_pbd(s: &SetSystem, sizes: &BTreeSet<usize>) -> VerificationReport {
    let mut r = verify_k_uniform(s, sizes);
    report_duplicates(s, &mut r);
    for (x, y, c) in s.pair_table().iter() {
        match c {
            1 => {}
            0 => r.push(pair_violation(ViolationKind::UncoveredPair, x, y, c)),
            _ => r.push(pair_violation(ViolationKind::OverCoveredPair, x, y, c)),
        }
    }
    r
}

/// Checks that `d` is a GDD with block sizes in `sizes`.
pub fn verify_gdd(d: &GroupedDesign, sizes: &BTreeSet<usize>) -> VerificationReport {
    let s = d.system();
    let mut r = verify_k_uniform(s, sizes);
    report_duplicates(s, &mut r);
    let group_of = d.group_of();
    for (i, b) in s.blocks().iter().enumerate() {
        let mut hit: BTreeMap<usize, Vec<Point>> = BTreeMap::new();
        for &p in b.points() {
            hit.entry(group_of[p as usize]).or_default().push(p);
        }
        for (g, pts) in hit.into_iter().filter(|(_, pts)| pts.len() > 1) {
            r.push(
                Violation::new(
                    ViolationKind::BadGroupMeet,
                    format!("block {i} {b} meets group {g} in {} points", pts.len()),
                )
                .with_points(pts)
                .with_blocks([i]),
            );
        }
    }
    for (x, y, c) in s.pair_table().iter() {
        if group_of[x as usize] == group_of[y as usize] {
            continue;
        }
        match c {
            1 => {}
            0 => r.push(pair_violation(ViolationKind::UncoveredPair, x, y, c)),
            _ => r.push(pair_violation(ViolationKind::OverCoveredPair, x, y, c)),
        }
    }
    r.group_type = Some(d.group_type());
    r
}

/// Existence of a {3}-GDD of type `g^t u^1`: all five conditions of the
/// Colbourn–Hoffman–Rees characterisation.
pub fn chr_feasible(g: usize, t: usize, u: usize) -> bool {
    let gt = g * t;
    let c1 = g == 0 || t >= 3 || (t == 2 && u == g) || (t == 1 && u == 0) || t == 0;
    let c2 = gt == 0 || u <= g * (t.saturating_sub(1));
    let c3 = gt == 0 || (g * t.saturating_sub(1) + u).is_multiple_of(2);
    let c4 = gt.is_multiple_of(2) || u == 0;
    let c5 = (g * g * (t * t.saturating_sub(1) / 2) + gt * u).is_multiple_of(3);
    c1 && c2 && c3 && c4 && c5
}

/// Existence of a {4}-GDD of type `g^t` (Brouwer–Schrijver–Hanani).
pub fn bsh_feasible(g: usize, t: usize) -> bool {
    if t < 4 || g == 0 || (g, t) == (2, 4) || (g, t) == (6, 4) {
        return false;
    }
    match g % 6 {
        1 | 5 => t % 12 == 1 || t % 12 == 4,
        2 | 4 => t % 3 == 1,
        3 => t.is_multiple_of(4) || t % 4 == 1,
        _ => true,
    }
}

/// Orders with no PBD(n, {4,5,6,7}).
pub const LENZ_EXCEPTIONS: [usize; 10] = [8, 9, 10, 11, 12, 14, 15, 18, 19, 23];

/// Existence of a PBD(n, {4,5,6,7}).
pub fn lenz_feasible(n: usize) -> bool {
    n == 1 || (n >= 4 && !LENZ_EXCEPTIONS.contains(&n))
}

/// Existence of a PBD(n, {3,4,5,6,8}).
pub fn gmp_feasible(n: usize) -> bool {
    n >= 3
}

pub fn sts_feasible(n: usize) -> bool {
    n % 6 == 1 || n % 6 == 3
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sts7() -> SetSystem {
        SetSystem::from_lists(
            7,
            [
                [5, 3, 1],
                [1, 7, 4],
                [4, 2, 3],
                [3, 6, 7],
                [7, 5, 2],
                [2, 1, 6],
                [6, 4, 5],
            ],
        )
        .unwrap()
    }

    #[test]
    fn covering_numbers() {
        assert_eq!(covering_number(3).unwrap(), 1);
        assert_eq!(covering_number(6).unwrap(), 6);
        assert_eq!(covering_number(7).unwrap(), 7);
        assert_eq!(covering_number(8).unwrap(), 11);
        assert_eq!(covering_number(10).unwrap(), 17);
        assert_eq!(covering_number(17).unwrap(), 46);
        assert_eq!(covering_number(18).unwrap(), 54);
        assert!(matches!(covering_number(2), Err(Error::Domain(_))));
    }

    #[test]
    fn pair_table_indexing_is_a_bijection() {
        for n in 2..12usize {
            let t = PairTable::new(n);
            let mut seen = vec![false; t.counts.len()];
            for x in 1..=n as Point {
                for y in x + 1..=n as Point {
                    let i = t.index(x, y);
                    assert!(!seen[i]);
                    seen[i] = true;
                    assert_eq!(i, t.index(y, x));
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn uniformity() {
        let k3 = triples();
        assert!(verify_k_uniform(&sts7(), &k3).is_valid());
        let s = SetSystem::from_lists(5, [vec![1, 2, 3, 4]]).unwrap();
        assert!(verify_k_uniform(&s, &k3).has(ViolationKind::BadUniformity));
        let empty = SetSystem::new(5, vec![]).unwrap();
        assert!(verify_k_uniform(&empty, &k3).is_valid());
    }

    #[test]
    fn covering_checks() {
        let r = verify_covering(&sts7());
        assert!(r.is_valid());
        assert_eq!(r.minimum, Some(true));
        let s = SetSystem::from_lists(4, [[1, 2, 3], [1, 2, 4]]).unwrap();
        let r = verify_covering(&s);
        assert_eq!(r.count(ViolationKind::UncoveredPair), 1);
        assert_eq!(r.violations[0].points, vec![3, 4]);
    }

    #[test]
    fn pbd_detects_duplicates() {
        let k3 = triples();
        assert!(verify_pbd(&sts7(), &k3).is_valid());
        let mut blocks = sts7().blocks().to_vec();
        blocks.push(blocks[0].clone());
        let r = verify_pbd(&SetSystem::new(7, blocks).unwrap(), &k3);
        assert!(r.has(ViolationKind::OverCoveredPair));
        assert!(r.has(ViolationKind::DuplicateBlock));
    }

    #[test]
    fn gdd_with_singleton_groups_matches_pbd() {
        let k3 = triples();
        let d = GroupedDesign::singletons(sts7());
        let r = verify_gdd(&d, &k3);
        assert!(r.is_valid());
        assert_eq!(r.group_type.unwrap().to_string(), "1^7");
    }

    #[test]
    fn group_type_round_trip() {
        let t: GroupType = "2^3 4^1".parse().unwrap();
        assert_eq!(t.to_string(), "2^3 4^1");
        assert_eq!(t.compact(), "2^3,4^1");
        assert_eq!(t.total(), 10);
        assert_eq!(t, "2^3,4^1".parse().unwrap());
        assert_eq!(t, GroupType::uniform(2, 3).with_extra(4));
        assert_eq!("1^{12},3^1".parse::<GroupType>().unwrap().total(), 15);
        assert!("3".parse::<GroupType>().is_err());
    }

    #[test]
    fn grouped_design_rejects_bad_partitions() {
        let s = sts7();
        assert!(GroupedDesign::new(s.clone(), vec![vec![1, 2, 3], vec![3, 4, 5, 6, 7]]).is_err());
        assert!(GroupedDesign::new(s.clone(), vec![vec![1, 2, 3], vec![4, 5, 6]]).is_err());
        assert!(GroupedDesign::new(s, vec![vec![1, 2, 3, 4, 5, 6, 7]]).is_ok());
    }

    #[test]
    fn chr_examples() {
        assert!(chr_feasible(2, 3, 0));
        assert!(chr_feasible(1, 7, 0));
        assert!(!chr_feasible(2, 2, 1));
        assert!(chr_feasible(6, 3, 10));
        assert!(chr_feasible(1, 6, 3));
        assert!(!chr_feasible(6, 2, 0));
        // a type 1^5 2^1 {3}-GDD fails pair counting
        assert!(!chr_feasible(1, 5, 2));
    }

    #[test]
    fn bsh_examples() {
        assert!(bsh_feasible(3, 4));
        assert!(bsh_feasible(3, 5));
        assert!(!bsh_feasible(2, 4));
        assert!(!bsh_feasible(6, 4));
        assert!(bsh_feasible(6, 5));
        assert!(!bsh_feasible(3, 3));
    }

    #[test]
    fn lenz_exceptions() {
        assert!(lenz_feasible(13));
        assert!(lenz_feasible(16));
        assert!(lenz_feasible(17));
        assert!(!lenz_feasible(15));
        assert!(!lenz_feasible(23));
    }
}
