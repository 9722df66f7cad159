//! k-radius sequences: defect, verification, conversion from shift
//! universal cycles, hill-climbing search, an exhaustive oracle for small
//! orders, and the known bounds.

mod bounds;
mod hillclimb;
mod oracle;
mod table;

use std::fmt;
use std::str::FromStr;

pub use bounds::{
    bound_2c1, bound_f1, bound_gilkerson, bound_l, gap, gap_piecewise, F2Known, F2_KNOWN, TABLE4,
};
pub use hillclimb::{hillclimb, RunStats, SearchOutcome, SearchParams};
pub use oracle::{exhaustive_f2, trivial_lower_bound, DEFAULT_ORACLE_CAP};
pub use table::{table, TableRow};

use crate::design::Point;
use crate::error::{Error, Result};
use crate::report::{VerificationReport, Violation, ViolationKind};
use crate::ucycle::ShiftUcycle;

/// A finite sequence over `1..=n` read with radius `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadiusSequence {
    n: usize,
    k: usize,
    seq: Vec<Point>,
}

impl RadiusSequence {
    pub fn new(n: usize, k: usize, seq: Vec<Point>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("radius must be positive".into()));
        }
        if seq.is_empty() {
            return Err(Error::Domain("empty sequence".into()));
        }
        if let Some(&p) = seq.iter().find(|&&p| p == 0 || p as usize > n) {
            return Err(Error::Domain(format!("entry {p} outside 1..={n}")));
        }
        Ok(RadiusSequence { n, k, seq })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.k
    }

    pub fn seq(&self) -> &[Point] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Pairs `{x, y}`, `x < y`, that never occur within distance `k`.
    pub fn missing_pairs(&self) -> Vec<(Point, Point)> {
        let seen = covered(self.n, self.k, &self.seq);
        let n = self.n;
        (1..=n)
            .flat_map(|x| (x + 1..=n).map(move |y| (x, y)))
            .filter(|&(x, y)| !seen[(x - 1) * n + (y - 1)])
            .map(|(x, y)| (x as Point, y as Point))
            .collect()
    }
}

fn covered(n: usize, k: usize, seq: &[Point]) -> Vec<bool> {
    let mut seen = vec![false; n * n];
    for (i, &a) in seq.iter().enumerate() {
        for &b in seq.iter().skip(i + 1).take(k) {
            if a != b {
                let (x, y) = if a < b { (a, b) } else { (b, a) };
                seen[(x as usize - 1) * n + (y as usize - 1)] = true;
            }
        }
    }
    seen
}

/// Number of pairs of `1..=n` that do not occur within distance `k`.
pub fn defect(s: &RadiusSequence) -> usize {
    let seen = covered(s.n, s.k, &s.seq);
    let n = s.n;
    let hit = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .filter(|&(x, y)| seen[x * n + y])
        .count();
    n * n.saturating_sub(1) / 2 - hit
}

/// Valid exactly when the defect is zero; each missing pair is reported.
pub fn verify_radius(s: &RadiusSequence) -> VerificationReport {
    let mut r = VerificationReport::new();
    for (x, y) in s.missing_pairs() {
        r.push(
            Violation::new(
                ViolationKind::UncoveredPair,
                format!("pair {{{x},{y}}} never within distance {}", s.k),
            )
            .with_points([x, y]),
        );
    }
    r
}

/// The 2-radius sequence `(u_0, …, u_{2m−1}, u_0)` of a 2-shift universal
/// cycle of triples; the single-triple case is the triple itself.
pub fn from_ucycle(u: &ShiftUcycle) -> Result<RadiusSequence> {
    if u.shift() != 2 || u.rank() != 3 {
        return Err(Error::Precondition(format!(
            "need a 2-shift cycle of triples, got s={} k={}",
            u.shift(),
            u.rank()
        )));
    }
    let mut seq = u.seq().to_vec();
    if !u.is_degenerate() {
        seq.push(seq[0]);
    }
    let r = RadiusSequence::new(u.order(), 2, seq)?;
    let d = defect(&r);
    if d != 0 {
        return Err(Error::Precondition(format!(
            "ucycle yields a sequence with defect {d}"
        )));
    }
    Ok(r)
}

impl fmt::Display for RadiusSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "radius n={} k={}:", self.n, self.k)?;
        for p in &self.seq {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

impl FromStr for RadiusSequence {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { line, message };
        let (line_no, line) = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .find(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| err(1, "no radius line".into()))?;
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| err(line_no, "missing ':'".into()))?;
        let mut words = head.split_whitespace();
        if words.next() != Some("radius") {
            return Err(err(line_no, "expected 'radius' header".into()));
        }
        let (mut n, mut k) = (None, None);
        for w in words {
            let (key, val) = w
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("expected key=value, got {w:?}")))?;
            let v: usize = val
                .parse()
                .map_err(|_| err(line_no, format!("bad number {val:?}")))?;
            match key {
                "n" => n = Some(v),
                "k" => k = Some(v),
                _ => return Err(err(line_no, format!("unknown key {key:?}"))),
            }
        }
        let seq = body
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| err(line_no, format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<Point>>>()?;
        RadiusSequence::new(
            n.ok_or_else(|| err(line_no, "missing n=".into()))?,
            k.unwrap_or(2),
            seq,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_defects() {
        assert_eq!(
            defect(&RadiusSequence::new(3, 2, vec![1, 2, 3]).unwrap()),
            0
        );
        let s = RadiusSequence::new(3, 2, vec![1, 2, 1, 2]).unwrap();
        assert_eq!(defect(&s), 2);
        assert_eq!(s.missing_pairs(), vec![(1, 3), (2, 3)]);
        assert_eq!(verify_radius(&s).count(ViolationKind::UncoveredPair), 2);
    }

    #[test]
    fn ucycle_to_sequence() {
        let u = ShiftUcycle::new(vec![1, 3, 7, 2, 6, 4, 3, 5, 2, 1, 4, 7, 5, 6], 2, 3, 7).unwrap();
        let r = from_ucycle(&u).unwrap();
        assert_eq!(r.len(), 15);
        assert_eq!(r.seq()[14], 1);
        let d = ShiftUcycle::new(vec![1, 2, 3], 2, 3, 3).unwrap();
        assert_eq!(from_ucycle(&d).unwrap().seq(), &[1, 2, 3]);
    }

    #[test]
    fn text_round_trip() {
        let s = RadiusSequence::new(3, 2, vec![1, 2, 3]).unwrap();
        assert_eq!(s.to_string(), "radius n=3 k=2: 1 2 3");
        assert_eq!(s.to_string().parse::<RadiusSequence>().unwrap(), s);
        assert!("radius n=3 k=2: 1 4".parse::<RadiusSequence>().is_err());
    }
}
