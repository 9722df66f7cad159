//! Recursive constructions of coverings and {3}-GDDs that carry colorful
//! alternating hamiltonian cycles.
//!
//! Every combinator verifies its output design and cycle before returning.

mod direct;
mod factory;
mod recursive;
mod wfc;

use std::collections::BTreeSet;

pub use direct::{
    affine_plane, bose_sts, extend_affine, projective_plane_3, skolem_sts, steiner_triple_system,
};
pub use factory::{build_covering, build_gdd_6t, build_gdd_6t_u, Factory, DEFAULT_SEED};
pub use recursive::{adjoin_and_break, adjoin_and_fill, fill_in_groups};
pub use wfc::{wfc, WeightFn};

use crate::catalog::{CycleClaim, Fixture, FixtureKind, Provenance};
use crate::cycle::{assemble, verify_cah, ColoredCycle};
use crate::design::{
    verify_covering, verify_gdd, Block, GroupType, GroupedDesign, Point, SetSystem,
};
use crate::error::{Error, Result};

/// A design together with a verified alternating hamiltonian cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CahDesign {
    design: GroupedDesign,
    cycle: ColoredCycle,
    colorful: bool,
}

impl CahDesign {
    /// Pairs a design with its cycle after checking the cycle.
    pub fn new(design: GroupedDesign, cycle: ColoredCycle) -> Result<Self> {
        let report = verify_cah(design.system(), &cycle, false);
        if !report.is_valid() {
            return Err(Error::Unverified {
                what: "cycle".into(),
                report: Box::new(report),
            });
        }
        Ok(CahDesign {
            design,
            cycle,
            colorful: report.colorful == Some(true),
        })
    }

    pub fn from_fixture(f: &Fixture) -> Result<Self> {
        CahDesign::new(f.grouped()?, f.colored_cycle()?)
    }

    /// The fixture for this design, blocks in cycle order.
    pub fn to_fixture(&self, kind: FixtureKind, provenance: Provenance) -> Fixture {
        let claim = if self.colorful {
            CycleClaim::Cah
        } else {
            CycleClaim::Alt
        };
        Fixture::from_design(kind, &self.design, Some(&self.cycle), claim, provenance)
    }

    pub fn design(&self) -> &GroupedDesign {
        &self.design
    }

    pub fn system(&self) -> &SetSystem {
        self.design.system()
    }

    pub fn groups(&self) -> &[Vec<Point>] {
        self.design.groups()
    }

    pub fn cycle(&self) -> &ColoredCycle {
        &self.cycle
    }

    pub fn is_colorful(&self) -> bool {
        self.colorful
    }

    pub fn order(&self) -> usize {
        self.design.order()
    }

    pub fn group_type(&self) -> GroupType {
        self.design.group_type()
    }

    /// Number of blocks.
    pub fn size(&self) -> usize {
        self.system().len()
    }
}

/// Point relabelling `old → map[old]` (slot 0 unused).
pub(crate) type PointMap = Vec<Point>;

/// Accumulates relabelled component designs and their cycles in one host.
pub(crate) struct Union {
    order: usize,
    blocks: Vec<Block>,
    cycles: Vec<ColoredCycle>,
    firsts: Vec<usize>,
}

impl Union {
    pub(crate) fn new(order: usize) -> Self {
        Union {
            order,
            blocks: Vec::new(),
            cycles: Vec::new(),
            firsts: Vec::new(),
        }
    }

    /// Adds `d` with its points mapped through `map`; returns the index of
    /// its cycle.
    pub(crate) fn add(&mut self, d: &CahDesign, map: &PointMap) -> Result<usize> {
        let offset = self.blocks.len();
        for b in d.system().blocks() {
            self.blocks
                .push(Block::new(b.points().iter().map(|&p| map[p as usize]))?);
        }
        let c = d
            .cycle()
            .map_blocks(|b| b + offset)
            .map_colors(|p| map[p as usize]);
        self.firsts.push(c.blocks()[0]);
        self.cycles.push(c);
        Ok(self.cycles.len() - 1)
    }

    /// Host block index of the first block of component `i`.
    pub(crate) fn first_block(&self, i: usize) -> usize {
        self.firsts[i]
    }

    /// Merges all component cycles and verifies the result against
    /// `verify`, which returns the design report.
    pub(crate) fn finish(
        self,
        groups: Vec<Vec<Point>>,
        seeds: &[usize],
        what: &str,
        require_colorful: bool,
        verify: impl Fn(&GroupedDesign) -> crate::report::VerificationReport,
    ) -> Result<CahDesign> {
        let system = SetSystem::new(self.order, self.blocks)?;
        let cycle = assemble(self.cycles, &system, seeds)?;
        let design = GroupedDesign::new(system, groups)?;
        let mut report = verify(&design);
        report.merge(verify_cah(design.system(), &cycle, require_colorful));
        if !report.is_valid() {
            return Err(Error::Unverified {
                what: what.to_string(),
                report: Box::new(report),
            });
        }
        let colorful = report.colorful == Some(true);
        Ok(CahDesign {
            design,
            cycle,
            colorful,
        })
    }
}

pub(crate) fn verify_as_covering(d: &GroupedDesign) -> crate::report::VerificationReport {
    verify_covering(d.system())
}

pub(crate) fn verify_as_gdd3(d: &GroupedDesign) -> crate::report::VerificationReport {
    verify_gdd(d, &BTreeSet::from([3]))
}

/// Maps the filler's points onto `targets`: the points of its designated
/// group of size `y` (the last such group, or its last `y` points when it
/// has none) go to `adjoined`, the rest in ascending order to `base`.
pub(crate) fn filler_map(
    filler: &CahDesign,
    base: &[Point],
    adjoined: &[Point],
) -> Result<PointMap> {
    let y = adjoined.len();
    let n = filler.order();
    if n != base.len() + y {
        return Err(Error::Precondition(format!(
            "filler of order {n} cannot cover {} + {y} points",
            base.len()
        )));
    }
    let special: Vec<Point> = if y == 0 {
        Vec::new()
    } else {
        match filler.groups().iter().rev().find(|g| g.len() == y) {
            Some(g) => g.clone(),
            None => ((n - y + 1) as Point..=n as Point).collect(),
        }
    };
    let mut map = vec![0; n + 1];
    for (p, &t) in special.iter().zip(adjoined) {
        map[*p as usize] = t;
    }
    let rest = (1..=n as Point).filter(|p| !special.contains(p));
    for (p, &t) in rest.zip(base) {
        map[p as usize] = t;
    }
    Ok(map)
}
