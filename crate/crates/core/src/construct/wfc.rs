//! Weighting of a master GDD with ingredient {3}-GDDs on each block.

use std::sync::Arc;

use crate::construct::{verify_as_gdd3, CahDesign, Union};
use crate::design::{GroupType, GroupedDesign, Point};
use crate::error::{Error, Result};

/// Nonnegative weight of each master point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFn(Vec<usize>);

impl WeightFn {
    /// Weight `w` on every point of an order-`n` master.
    pub fn constant(n: usize, w: usize) -> Self {
        WeightFn(vec![w; n + 1])
    }

    pub fn set(&mut self, p: Point, w: usize) {
        self.0[p as usize] = w;
    }

    pub fn get(&self, p: Point) -> usize {
        self.0[p as usize]
    }

    /// The output group type: total weight of each master group, empty
    /// groups dropped.
    pub fn group_type(&self, groups: &[Vec<Point>]) -> GroupType {
        GroupType::from_sizes(
            groups
                .iter()
                .map(|g| g.iter().map(|&p| self.get(p)).sum::<usize>())
                .filter(|&s| s > 0),
        )
    }
}

/// Expands each master point `x` into `w(x)` points and replaces each block
/// `A` by an ingredient {3}-GDD of type `[w(a) : a ∈ A]` whose groups sit
/// on the expanded points. The ingredient cycles are merged, starting from
/// the cycles of the `seeds` master blocks.
pub fn wfc(
    master: &GroupedDesign,
    w: &WeightFn,
    ingredient: &mut dyn FnMut(&GroupType) -> Result<Arc<CahDesign>>,
    seeds: &[usize],
) -> Result<CahDesign> {
    let n = master.order();
    let mut expansion: Vec<Vec<Point>> = vec![Vec::new(); n + 1];
    let mut next: Point = 1;
    for p in 1..=n as Point {
        let k = w.get(p) as Point;
        expansion[p as usize] = (next..next + k).collect();
        next += k;
    }
    let order = (next - 1) as usize;
    let mut union = Union::new(order);
    let mut cycle_of = vec![usize::MAX; master.system().len()];
    for (ai, block) in master.system().blocks().iter().enumerate() {
        let mut pts: Vec<Point> = block
            .points()
            .iter()
            .copied()
            .filter(|&p| w.get(p) > 0)
            .collect();
        match pts.len() {
            0 | 1 => continue,
            2 => {
                return Err(Error::Precondition(format!(
                    "block {block} keeps only two weighted points"
                )))
            }
            _ => {}
        }
        pts.sort_by_key(|&p| (w.get(p), p));
        let ty = GroupType::from_sizes(pts.iter().map(|&p| w.get(p)));
        let d = ingredient(&ty)?;
        if d.group_type() != ty {
            return Err(Error::Precondition(format!(
                "ingredient has type {}, expected {ty}",
                d.group_type()
            )));
        }
        let mut groups: Vec<&Vec<Point>> = d.groups().iter().collect();
        groups.sort_by_key(|g| g.len());
        let mut map = vec![0; d.order() + 1];
        for (g, &p) in groups.iter().zip(&pts) {
            for (&q, &t) in g.iter().zip(&expansion[p as usize]) {
                map[q as usize] = t;
            }
        }
        cycle_of[ai] = union.add(&d, &map)?;
    }
    let seed_blocks: Vec<usize> = seeds
        .iter()
        .filter_map(|&a| cycle_of.get(a).copied())
        .filter(|&c| c != usize::MAX)
        .map(|c| union.first_block(c))
        .collect();
    let groups: Vec<Vec<Point>> = master
        .groups()
        .iter()
        .map(|g| {
            g.iter()
                .flat_map(|&p| expansion[p as usize].iter().copied())
                .collect::<Vec<_>>()
        })
        .filter(|g| !g.is_empty())
        .collect();
    union.finish(groups, &seed_blocks, "weighted GDD", false, verify_as_gdd3)
}
