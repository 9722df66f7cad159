//! Bundled design fixtures, their verification and repair, and the
//! on-disk cache of searched ingredients.
//!
//! Fixture text format, one record per line:
//!
//! ```text
//! # free-form comment
//! fixture kind=gdd3 n=6 type=2^3 cycle=alt provenance=paper
//! group: 1 4
//! block: 1 2 3 !bold
//! join: 2
//! ```
//!
//! Blocks appear in cycle order with points as printed. A `join:` line
//! pins the color between its block and the next one; when any block lacks
//! one, joins are inferred.

mod check;
mod repair;
mod store;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use check::check;
pub use repair::repair;
pub use store::{bundled, bundled_keys, get, Cache, REPAIR_SEED};

use crate::cycle::{infer_joins, ColoredCycle};
use crate::design::{Block, GroupType, GroupedDesign, Point, SetSystem};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixtureKind {
    Sts,
    Covering,
    Gdd3,
    Gdd4,
    Gdd47,
    Pbd,
}

impl FixtureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FixtureKind::Sts => "sts",
            FixtureKind::Covering => "covering",
            FixtureKind::Gdd3 => "gdd3",
            FixtureKind::Gdd4 => "gdd4",
            FixtureKind::Gdd47 => "gdd47",
            FixtureKind::Pbd => "pbd",
        }
    }

    pub fn is_gdd(self) -> bool {
        matches!(
            self,
            FixtureKind::Gdd3 | FixtureKind::Gdd4 | FixtureKind::Gdd47
        )
    }

    /// Block sizes implied by the kind; `None` for PBDs, which name theirs.
    pub fn block_sizes(self) -> Option<BTreeSet<usize>> {
        match self {
            FixtureKind::Sts | FixtureKind::Covering | FixtureKind::Gdd3 => {
                Some(BTreeSet::from([3]))
            }
            FixtureKind::Gdd4 => Some(BTreeSet::from([4])),
            FixtureKind::Gdd47 => Some(BTreeSet::from([4, 7])),
            FixtureKind::Pbd => None,
        }
    }
}

impl FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sts" => FixtureKind::Sts,
            "covering" => FixtureKind::Covering,
            "gdd3" => FixtureKind::Gdd3,
            "gdd4" => FixtureKind::Gdd4,
            "gdd47" => FixtureKind::Gdd47,
            "pbd" => FixtureKind::Pbd,
            _ => {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("unknown kind {s:?}"),
                })
            }
        })
    }
}

/// The cycle property a fixture claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleClaim {
    /// Colorful alternating hamiltonian.
    Cah,
    /// Alternating hamiltonian only.
    Alt,
    None,
}

impl CycleClaim {
    pub fn as_str(self) -> &'static str {
        match self {
            CycleClaim::Cah => "cah",
            CycleClaim::Alt => "alt",
            CycleClaim::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Paper,
    Repaired,
    Searched,
    /// Produced by the recursive constructions.
    Constructed,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Paper => "paper",
            Provenance::Repaired => "repaired",
            Provenance::Searched => "searched",
            Provenance::Constructed => "constructed",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Marks {
    pub bold: bool,
    pub italic: bool,
}

/// A design as stored on disk: blocks in cycle order with their marks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub n: usize,
    pub group_type: Option<GroupType>,
    /// Block sizes of a PBD.
    pub sizes: Option<BTreeSet<usize>>,
    pub cycle: CycleClaim,
    pub provenance: Provenance,
    pub seed: Option<u64>,
    pub comments: Vec<String>,
    pub groups: Vec<Vec<Point>>,
    /// Points of each block in printed order.
    pub blocks: Vec<Vec<Point>>,
    pub marks: Vec<Marks>,
    pub joins: Vec<Option<Point>>,
}

impl Fixture {
    pub fn new(kind: FixtureKind, n: usize) -> Self {
        Fixture {
            kind,
            n,
            group_type: None,
            sizes: None,
            cycle: CycleClaim::None,
            provenance: Provenance::Paper,
            seed: None,
            comments: Vec::new(),
            groups: Vec::new(),
            blocks: Vec::new(),
            marks: Vec::new(),
            joins: Vec::new(),
        }
    }

    /// Parses the fixture text format.
    pub fn load(text: &str) -> Result<Self> {
        let mut fixture: Option<Fixture> = None;
        let mut comments = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                comments.push(c.trim().to_string());
                continue;
            }
            let Some(f) = fixture.as_mut() else {
                fixture = Some(parse_header(line).map_err(err)?);
                continue;
            };
            let (tag, rest) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected 'tag: ...', got {line:?}")))?;
            match tag.trim() {
                "group" => f.groups.push(parse_points(rest).map_err(err)?),
                "block" => {
                    let mut marks = Marks::default();
                    let mut pts = Vec::new();
                    for w in rest.split_whitespace() {
                        match w {
                            "!bold" => marks.bold = true,
                            "!italic" => marks.italic = true,
                            _ => pts.push(w.parse().map_err(|_| err(format!("bad point {w:?}")))?),
                        }
                    }
                    if pts.is_empty() {
                        return Err(err("empty block".into()));
                    }
                    f.blocks.push(pts);
                    f.marks.push(marks);
                    f.joins.push(None);
                }
                "join" => {
                    let c = rest
                        .trim()
                        .parse()
                        .map_err(|_| err(format!("bad join {:?}", rest.trim())))?;
                    match f.joins.last_mut() {
                        Some(slot @ None) => *slot = Some(c),
                        Some(Some(_)) => return Err(err("second join for one block".into())),
                        None => return Err(err("join before any block".into())),
                    }
                }
                other => return Err(err(format!("unknown line tag {other:?}"))),
            }
        }
        let mut f = fixture.ok_or(Error::Parse {
            line: 0,
            message: "missing fixture header".into(),
        })?;
        f.comments = comments;
        Ok(f)
    }

    /// Renders the fixture; `load` of the result gives back `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str(&format!("fixture kind={} n={}", self.kind.as_str(), self.n));
        if let Some(t) = &self.group_type {
            out.push_str(&format!(" type={}", t.compact()));
        }
        if let Some(k) = &self.sizes {
            let k: Vec<String> = k.iter().map(usize::to_string).collect();
            out.push_str(&format!(" K={}", k.join(",")));
        }
        out.push_str(&format!(
            " cycle={} provenance={}",
            self.cycle.as_str(),
            self.provenance.as_str()
        ));
        if let Some(s) = self.seed {
            out.push_str(&format!(" seed={s}"));
        }
        out.push('\n');
        for g in &self.groups {
            out.push_str(&format!("group:{}\n", join_points(g)));
        }
        for (i, b) in self.blocks.iter().enumerate() {
            out.push_str(&format!("block:{}", join_points(b)));
            if self.marks[i].bold {
                out.push_str(" !bold");
            }
            if self.marks[i].italic {
                out.push_str(" !italic");
            }
            out.push('\n');
            if let Some(c) = self.joins[i] {
                out.push_str(&format!("join: {c}\n"));
            }
        }
        out
    }

    /// Catalog key, also the file stem: `sts-7`, `gdd3-2^3-4^1`, `pbd-14-k3,4,5`.
    pub fn key(&self) -> String {
        fixture_key(
            self.kind,
            self.n,
            self.group_type.as_ref(),
            self.sizes.as_ref(),
        )
    }

    pub fn system(&self) -> Result<SetSystem> {
        SetSystem::from_lists(self.n, self.blocks.iter().map(|b| b.iter().copied()))
    }

    pub fn grouped(&self) -> Result<GroupedDesign> {
        let groups = if self.groups.is_empty() && !self.kind.is_gdd() {
            (1..=self.n as Point).map(|p| vec![p]).collect()
        } else {
            self.groups.clone()
        };
        GroupedDesign::new(self.system()?, groups)
    }

    /// Block sizes the fixture's design must use.
    pub fn block_sizes(&self) -> BTreeSet<usize> {
        self.kind
            .block_sizes()
            .or_else(|| self.sizes.clone())
            .unwrap_or_default()
    }

    /// The cycle through the blocks in listed order, from pinned joins when
    /// every block has one, otherwise inferred.
    pub fn colored_cycle(&self) -> Result<ColoredCycle> {
        let order: Vec<usize> = (0..self.blocks.len()).collect();
        if self.blocks.len() > 1 && self.joins.iter().all(Option::is_some) {
            return ColoredCycle::new(order, self.joins.iter().map(|j| j.unwrap()).collect());
        }
        infer_joins(&self.system()?, &order)
    }

    /// Indices of blocks carrying the given marks.
    pub fn marked(&self, bold: bool, italic: bool) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&i| (bold && self.marks[i].bold) || (italic && self.marks[i].italic))
            .collect()
    }

    /// Builds a fixture from a design and its cycle, blocks listed in
    /// cycle order with joins pinned.
    pub fn from_design(
        kind: FixtureKind,
        design: &GroupedDesign,
        cycle: Option<&ColoredCycle>,
        claim: CycleClaim,
        provenance: Provenance,
    ) -> Self {
        let s = design.system();
        let mut f = Fixture::new(kind, s.order());
        f.cycle = claim;
        f.provenance = provenance;
        if kind.is_gdd() {
            f.group_type = Some(design.group_type());
            f.groups = design.groups().to_vec();
        }
        if kind == FixtureKind::Pbd {
            f.sizes = Some(s.blocks().iter().map(Block::len).collect());
        }
        let order: Vec<usize> = match cycle {
            Some(c) => c.blocks().to_vec(),
            None => (0..s.len()).collect(),
        };
        for (i, &b) in order.iter().enumerate() {
            f.blocks.push(s.blocks()[b].points().to_vec());
            f.marks.push(Marks::default());
            f.joins.push(cycle.and_then(|c| c.joins().get(i).copied()));
        }
        f
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The catalog key of a fixture with the given parameters.
pub fn fixture_key(
    kind: FixtureKind,
    n: usize,
    ty: Option<&GroupType>,
    sizes: Option<&BTreeSet<usize>>,
) -> String {
    match (kind, ty) {
        (k, Some(t)) if k.is_gdd() => format!("{}-{}", k.as_str(), t.compact().replace(',', "-")),
        (FixtureKind::Pbd, _) => {
            let k: Vec<String> = sizes.into_iter().flatten().map(usize::to_string).collect();
            format!("pbd-{n}-k{}", k.join(","))
        }
        (k, _) => format!("{}-{n}", k.as_str()),
    }
}

fn join_points(pts: &[Point]) -> String {
    pts.iter().map(|p| format!(" {p}")).collect()
}

fn parse_points(text: &str) -> std::result::Result<Vec<Point>, String> {
    text.split_whitespace()
        .map(|w| w.parse().map_err(|_| format!("bad point {w:?}")))
        .collect()
}

fn parse_header(line: &str) -> std::result::Result<Fixture, String> {
    let mut words = line.split_whitespace();
    if words.next() != Some("fixture") {
        return Err(format!("expected fixture header, got {line:?}"));
    }
    let (mut kind, mut n) = (None, None);
    let mut f = Fixture::new(FixtureKind::Sts, 0);
    for w in words {
        let (key, val) = w
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {w:?}"))?;
        match key {
            "kind" => kind = Some(val.parse::<FixtureKind>().map_err(|e| e.to_string())?),
            "n" => {
                n = Some(
                    val.parse::<usize>()
                        .map_err(|_| format!("bad order {val:?}"))?,
                )
            }
            "type" => f.group_type = Some(val.parse().map_err(|e: Error| e.to_string())?),
            "K" => {
                f.sizes = Some(
                    val.split(',')
                        .map(|k| k.parse().map_err(|_| format!("bad block size {k:?}")))
                        .collect::<std::result::Result<_, _>>()?,
                )
            }
            "cycle" => {
                f.cycle = match val {
                    "cah" => CycleClaim::Cah,
                    "alt" => CycleClaim::Alt,
                    "none" => CycleClaim::None,
                    _ => return Err(format!("unknown cycle claim {val:?}")),
                }
            }
            "provenance" => {
                f.provenance = match val {
                    "paper" => Provenance::Paper,
                    "repaired" => Provenance::Repaired,
                    "searched" => Provenance::Searched,
                    "constructed" => Provenance::Constructed,
                    _ => return Err(format!("unknown provenance {val:?}")),
                }
            }
            "seed" => f.seed = Some(val.parse().map_err(|_| format!("bad seed {val:?}"))?),
            _ => return Err(format!("unknown header key {key:?}")),
        }
    }
    f.kind = kind.ok_or("header lacks kind=")?;
    f.n = n.ok_or("header lacks n=")?;
    Ok(f)
}
