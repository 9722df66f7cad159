//! Shift universal cycles and their correspondence with alternating
//! hamiltonian cycles.
//!
//! Windows start at even multiples of the shift: block `i` is
//! `{u[s·i], …, u[s·i + k − 1]}` with indices taken cyclically.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::cycle::{verify_cah, ColoredCycle};
use crate::design::{Block, Point, SetSystem};
use crate::error::{Error, Result};
use crate::report::{VerificationReport, Violation, ViolationKind};

/// A cyclic point sequence read through width-`k` windows at stride `s`.
///
/// The single-block case (one triple, no cycle) is represented by the block
/// itself and flagged [`is_degenerate`](ShiftUcycle::is_degenerate); its
/// length is `k` rather than a multiple of `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftUcycle {
    seq: Vec<Point>,
    s: usize,
    k: usize,
    n: usize,
    degenerate: bool,
}

impl ShiftUcycle {
    pub fn new(seq: Vec<Point>, s: usize, k: usize, n: usize) -> Result<Self> {
        if s == 0 || k == 0 {
            return Err(Error::Domain("shift and rank must be positive".into()));
        }
        if seq.is_empty() {
            return Err(Error::Domain("empty sequence".into()));
        }
        if let Some(&p) = seq.iter().find(|&&p| p == 0 || p as usize > n) {
            return Err(Error::Domain(format!("point {p} outside 1..={n}")));
        }
        let degenerate = !seq.len().is_multiple_of(s);
        if degenerate && seq.len() != k {
            return Err(Error::Domain(format!(
                "length {} is not a multiple of the shift {s}",
                seq.len()
            )));
        }
        Ok(ShiftUcycle {
            seq,
            s,
            k,
            n,
            degenerate,
        })
    }

    pub fn seq(&self) -> &[Point] {
        &self.seq
    }

    pub fn shift(&self) -> usize {
        self.s
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Number of windows.
    pub fn block_count(&self) -> usize {
        if self.degenerate {
            1
        } else {
            self.seq.len() / self.s
        }
    }

    fn window(&self, i: usize) -> impl Iterator<Item = Point> + '_ {
        let len = self.seq.len();
        (0..self.k).map(move |j| self.seq[(self.s * i + j) % len])
    }
}

impl fmt::Display for ShiftUcycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ucycle s={} k={} n={}:", self.s, self.k, self.n)?;
        for p in &self.seq {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

impl FromStr for ShiftUcycle {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| parse_err("no ucycle line"))?;
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| parse_err("missing ':'"))?;
        let mut words = head.split_whitespace();
        if words.next() != Some("ucycle") {
            return Err(parse_err("expected 'ucycle' header"));
        }
        let (mut s, mut k, mut n) = (None, None, None);
        for w in words {
            let (key, val) = w
                .split_once('=')
                .ok_or_else(|| parse_err("expected key=value"))?;
            let v: usize = val
                .parse()
                .map_err(|_| parse_err(&format!("bad number {val:?}")))?;
            match key {
                "s" => s = Some(v),
                "k" => k = Some(v),
                "n" => n = Some(v),
                _ => return Err(parse_err(&format!("unknown key {key:?}"))),
            }
        }
        let seq = body
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| parse_err(&format!("bad point {t:?}")))
            })
            .collect::<Result<Vec<Point>>>()?;
        let missing = |name: &str| parse_err(&format!("missing {name}="));
        ShiftUcycle::new(
            seq,
            s.ok_or_else(|| missing("s"))?,
            k.ok_or_else(|| missing("k"))?,
            n.ok_or_else(|| missing("n"))?,
        )
    }
}

fn parse_err(message: &str) -> Error {
    Error::Parse {
        line: 1,
        message: message.into(),
    }
}

/// The windows of `u` as blocks, in order.
pub fn blocks_of(u: &ShiftUcycle) -> Result<Vec<Block>> {
    (0..u.block_count())
        .map(|i| Block::new(u.window(i)).map_err(|_| Error::MalformedWindow { index: i }))
        .collect()
}

/// Checks that the windows of `u` are exactly the blocks of `s`, each once.
pub fn verify_shift_ucycle(u: &ShiftUcycle, s: &SetSystem) -> VerificationReport {
    let mut r = VerificationReport::new();
    if u.n != s.order() {
        r.push(Violation::new(
            ViolationKind::OutOfRange,
            format!(
                "ucycle order {} differs from system order {}",
                u.n,
                s.order()
            ),
        ));
    }
    let windows = match blocks_of(u) {
        Ok(w) => w,
        Err(Error::MalformedWindow { index }) => {
            r.push(
                Violation::new(
                    ViolationKind::MalformedWindow,
                    format!("window {index} repeats a point"),
                )
                .with_blocks([index]),
            );
            return r;
        }
        Err(e) => {
            r.push(Violation::new(
                ViolationKind::MalformedWindow,
                e.to_string(),
            ));
            return r;
        }
    };
    let mut expected: HashMap<&Block, usize> = HashMap::new();
    for b in s.blocks() {
        *expected.entry(b).or_default() += 1;
    }
    let mut seen: HashMap<&Block, usize> = HashMap::new();
    for (i, w) in windows.iter().enumerate() {
        let count = seen.entry(w).or_default();
        *count += 1;
        match expected.get(w) {
            None => r.push(
                Violation::new(
                    ViolationKind::ExtraBlock,
                    format!("window {i} = {w} is not a block"),
                )
                .with_blocks([i]),
            ),
            Some(&e) if *count > e => r.push(
                Violation::new(
                    ViolationKind::DuplicateBlock,
                    format!("window {i} repeats block {w}"),
                )
                .with_blocks([i]),
            ),
            _ => {}
        }
    }
    for (b, &e) in &expected {
        let got = seen.get(b).copied().unwrap_or(0);
        if got < e {
            r.push(Violation::new(
                ViolationKind::MissingBlock,
                format!("block {b} produced by no window"),
            ));
        }
    }
    r
}

/// Converts an alternating hamiltonian cycle of a `k`-uniform system into
/// a `(k−1)`-shift universal cycle.
///
/// Block `B_i` is read as `(c_{i−1}, interior ascending, c_i)` and
/// contributes all but its last point.
pub fn from_cah(s: &SetSystem, c: &ColoredCycle) -> Result<ShiftUcycle> {
    let k = s
        .uniform_size()
        .ok_or_else(|| Error::Precondition("system is not uniform".into()))?;
    let report = verify_cah(s, c, false);
    if !report.is_valid() {
        return Err(Error::Precondition(format!("invalid cycle: {report}")));
    }
    let blocks = s.blocks();
    if c.is_degenerate() {
        return ShiftUcycle::new(
            blocks[c.blocks()[0]].points().to_vec(),
            k.max(2) - 1,
            k,
            s.order(),
        );
    }
    if k < 3 {
        return Err(Error::Precondition(format!("rank {k} is below 3")));
    }
    let m = c.len();
    let mut seq = Vec::with_capacity(m * (k - 1));
    for i in 0..m {
        let prev = c.joins()[(i + m - 1) % m];
        let next = c.joins()[i];
        seq.push(prev);
        seq.extend(
            blocks[c.blocks()[i]]
                .points()
                .iter()
                .copied()
                .filter(|&p| p != prev && p != next),
        );
    }
    ShiftUcycle::new(seq, k - 1, k, s.order())
}

/// Recovers the colored cycle of a `(k−1)`-shift universal cycle: the join
/// between windows `i` and `i+1` is the point they share, `u[(i+1)(k−1)]`.
pub fn to_cah(u: &ShiftUcycle, s: &SetSystem) -> Result<ColoredCycle> {
    if u.k < 2 || u.s != u.k - 1 {
        return Err(Error::Precondition(format!(
            "shift {} is not rank {} minus one",
            u.s, u.k
        )));
    }
    let report = verify_shift_ucycle(u, s);
    if !report.is_valid() {
        return Err(Error::Precondition(format!("invalid ucycle: {report}")));
    }
    let index = s.block_index();
    let windows = blocks_of(u)?;
    let order: Vec<usize> = windows.iter().map(|w| index[w]).collect();
    if u.degenerate {
        return Ok(ColoredCycle::single(order[0]));
    }
    let len = u.seq.len();
    let m = order.len();
    let joins = (0..m).map(|i| u.seq[((i + 1) * u.s) % len]).collect();
    let c = ColoredCycle::new(order, joins)?;
    let report = verify_cah(s, &c, false);
    if !report.is_valid() {
        return Err(Error::Precondition(format!(
            "windows do not form a cycle: {report}"
        )));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::infer_joins;

    const U34: [Point; 14] = [1, 3, 7, 2, 6, 4, 3, 5, 2, 1, 4, 7, 5, 6];

    fn sts7_a() -> SetSystem {
        SetSystem::from_lists(
            7,
            [
                [1, 3, 7],
                [7, 2, 6],
                [6, 4, 3],
                [3, 5, 2],
                [2, 1, 4],
                [4, 7, 5],
                [5, 6, 1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn example_windows() {
        let u = ShiftUcycle::new(U34.to_vec(), 2, 3, 7).unwrap();
        let got = blocks_of(&u).unwrap();
        assert_eq!(got, sts7_a().blocks());
        assert!(verify_shift_ucycle(&u, &sts7_a()).is_valid());
    }

    #[test]
    fn unit_shift_windows() {
        let u = ShiftUcycle::new(vec![1, 2, 3], 1, 2, 3).unwrap();
        let b: Vec<String> = blocks_of(&u)
            .unwrap()
            .iter()
            .map(|b| b.to_string())
            .collect();
        assert_eq!(b, ["{1,2}", "{2,3}", "{1,3}"]);
    }

    #[test]
    fn repeated_point_window() {
        let u = ShiftUcycle::new(vec![1, 1, 2, 3], 2, 3, 3).unwrap();
        assert!(matches!(
            blocks_of(&u),
            Err(Error::MalformedWindow { index: 0 })
        ));
    }

    #[test]
    fn other_sts7_rejected() {
        let other = SetSystem::from_lists(
            7,
            [
                [1, 3, 4],
                [2, 3, 6],
                [2, 4, 7],
                [4, 5, 6],
                [1, 6, 7],
                [3, 5, 7],
                [1, 2, 5],
            ],
        )
        .unwrap();
        let u = ShiftUcycle::new(U34.to_vec(), 2, 3, 7).unwrap();
        let r = verify_shift_ucycle(&u, &other);
        assert!(r.has(ViolationKind::ExtraBlock) && r.has(ViolationKind::MissingBlock));
    }

    #[test]
    fn duplicate_windows() {
        let s = SetSystem::from_lists(3, [[1, 2, 3]]).unwrap();
        let u = ShiftUcycle::new(vec![1, 2, 3, 1, 2, 3], 2, 3, 3).unwrap();
        assert!(verify_shift_ucycle(&u, &s).has(ViolationKind::DuplicateBlock));
    }

    #[test]
    fn example_joins() {
        let u = ShiftUcycle::new(U34.to_vec(), 2, 3, 7).unwrap();
        let c = to_cah(&u, &sts7_a()).unwrap();
        assert_eq!(c.blocks(), &[0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(c.joins(), &[7, 6, 3, 2, 4, 5, 1]);
        assert_eq!(from_cah(&sts7_a(), &c).unwrap(), u);
    }

    #[test]
    fn n4_covering() {
        let s = SetSystem::from_lists(4, [[3, 1, 2], [2, 4, 1], [1, 4, 3]]).unwrap();
        let c = ColoredCycle::new(vec![0, 1, 2], vec![2, 4, 3]).unwrap();
        let u = from_cah(&s, &c).unwrap();
        assert_eq!(u.seq(), &[3, 1, 2, 1, 4, 1]);
        assert!(verify_shift_ucycle(&u, &s).is_valid());
        assert_eq!(to_cah(&u, &s).unwrap(), c);
    }

    #[test]
    fn degenerate_triple() {
        let s = SetSystem::from_lists(3, [[1, 2, 3]]).unwrap();
        let u = from_cah(&s, &ColoredCycle::single(0)).unwrap();
        assert!(u.is_degenerate());
        assert_eq!(u.seq(), &[1, 2, 3]);
        assert!(verify_shift_ucycle(&u, &s).is_valid());
        assert_eq!(to_cah(&u, &s).unwrap(), ColoredCycle::single(0));
    }

    #[test]
    fn adjacent_joins_differ() {
        let s = sts7_a();
        let c = infer_joins(&s, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        let u = from_cah(&s, &c).unwrap();
        let m = u.block_count();
        for i in 0..m {
            assert_ne!(u.seq()[2 * i], u.seq()[(2 * (i + 1)) % (2 * m)]);
        }
    }

    #[test]
    fn invalid_ucycle_has_no_cycle() {
        let mut seq = U34.to_vec();
        seq.swap(0, 1);
        let u = ShiftUcycle::new(seq, 2, 3, 7).unwrap();
        assert!(to_cah(&u, &sts7_a()).is_err());
    }

    #[test]
    fn text_round_trip() {
        let u = ShiftUcycle::new(U34.to_vec(), 2, 3, 7).unwrap();
        let text = u.to_string();
        assert!(text.starts_with("ucycle s=2 k=3 n=7: 1 3 7"));
        assert_eq!(text.parse::<ShiftUcycle>().unwrap(), u);
        assert!("ucycle s=2 k=3: 1 2".parse::<ShiftUcycle>().is_err());
    }
}
