//! Filling in groups, adjoining points, and breaking up groups.

use std::collections::BTreeMap;

use crate::construct::{
    filler_map, verify_as_covering, verify_as_gdd3, CahDesign, PointMap, Union,
};
use crate::design::{GroupType, Point};
use crate::error::{Error, Result};

/// Fills every group of a colorful {3}-GDD with a covering on that group,
/// giving a covering of the whole point set. `fillers` maps a group size to
/// a covering of that order.
pub fn fill_in_groups(
    master: &CahDesign,
    fillers: &BTreeMap<usize, CahDesign>,
) -> Result<CahDesign> {
    adjoin_and_fill(master, 0, None, fillers)
}

/// Adjoins `y` new points to a colorful {3}-GDD and fills each group `G`
/// together with the new points.
///
/// Each filler is a design of order `g + y` whose size-`y` group (or last
/// `y` points) lands on the adjoined points. The last master group takes
/// `last_filler` when given, normally a covering; every other group of size
/// `g` takes `fillers[g]`, normally a {3}-GDD of type `1^g y^1`.
pub fn adjoin_and_fill(
    master: &CahDesign,
    y: usize,
    last_filler: Option<&CahDesign>,
    fillers: &BTreeMap<usize, CahDesign>,
) -> Result<CahDesign> {
    if !master.is_colorful() {
        return Err(Error::Precondition("master cycle is not colorful".into()));
    }
    let report = verify_as_gdd3(master.design());
    if !report.is_valid() {
        return Err(Error::Precondition(format!(
            "master is not a {{3}}-GDD: {report}"
        )));
    }
    let m = master.order();
    let n = m + y;
    let adjoined: Vec<Point> = (m as Point + 1..=n as Point).collect();
    let mut union = Union::new(n);
    let identity: PointMap = (0..=m as Point).collect();
    union.add(master, &identity)?;
    let last = master.groups().len() - 1;
    for (i, group) in master.groups().iter().enumerate() {
        let g = group.len();
        if g + y < 2 {
            continue;
        }
        let chosen = if i == last { last_filler } else { None };
        let filler = chosen.or_else(|| fillers.get(&g)).ok_or_else(|| {
            Error::Precondition(format!(
                "no filler for a group of size {g} with {y} adjoined points"
            ))
        })?;
        let map = filler_map(filler, group, &adjoined)?;
        union.add(filler, &map)?;
    }
    let groups = (1..=n as Point).map(|p| vec![p]).collect();
    let out = union.finish(groups, &[], "filled covering", false, verify_as_covering)?;
    Ok(out)
}

/// Adjoins `y` points and breaks each group of size `g` into `g / h`
/// groups of size `h` using a {3}-GDD of type `h^{g/h} y^1` from `fillers`.
pub fn adjoin_and_break(
    master: &CahDesign,
    y: usize,
    h: usize,
    fillers: &BTreeMap<usize, CahDesign>,
) -> Result<CahDesign> {
    if h == 0 {
        return Err(Error::Domain("group size h must be positive".into()));
    }
    if let Some(g) = master.groups().iter().map(Vec::len).find(|g| g % h != 0) {
        return Err(Error::Precondition(format!(
            "{h} does not divide group size {g}"
        )));
    }
    let m = master.order();
    let n = m + y;
    let adjoined: Vec<Point> = (m as Point + 1..=n as Point).collect();
    let mut union = Union::new(n);
    let identity: PointMap = (0..=m as Point).collect();
    union.add(master, &identity)?;
    let mut groups: Vec<Vec<Point>> = Vec::new();
    for group in master.groups() {
        let g = group.len();
        let chunks: Vec<Vec<Point>> = group.chunks(h).map(<[Point]>::to_vec).collect();
        groups.extend(chunks.iter().cloned());
        if chunks.len() == 1 && y == 0 {
            continue;
        }
        let filler = fillers
            .get(&g)
            .ok_or_else(|| Error::Precondition(format!("no filler for a group of size {g}")))?;
        let want = GroupType::uniform(h, g / h).with_extra(y);
        if filler.group_type() != want {
            return Err(Error::Precondition(format!(
                "filler has type {}, expected {want}",
                filler.group_type()
            )));
        }
        union.add(filler, &break_map(filler, &chunks, &adjoined)?)?;
    }
    if y > 0 {
        groups.push(adjoined);
    }
    union.finish(groups, &[], "broken GDD", false, verify_as_gdd3)
}

/// Sends the filler's last size-`y` group to `adjoined` and its other
/// groups, in order, onto `chunks`.
fn break_map(filler: &CahDesign, chunks: &[Vec<Point>], adjoined: &[Point]) -> Result<PointMap> {
    let y = adjoined.len();
    let special = if y == 0 {
        None
    } else {
        filler.groups().iter().rposition(|g| g.len() == y)
    };
    let mut map = vec![0; filler.order() + 1];
    let mut chunk = chunks.iter();
    for (i, g) in filler.groups().iter().enumerate() {
        let target: &[Point] = if Some(i) == special {
            adjoined
        } else {
            chunk
                .next()
                .ok_or_else(|| Error::Precondition("filler has too many groups".into()))?
        };
        for (&p, &t) in g.iter().zip(target) {
            map[p as usize] = t;
        }
    }
    Ok(map)
}
