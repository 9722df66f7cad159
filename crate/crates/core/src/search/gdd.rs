//! Stinson-style hill-climbing for {3}-GDDs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::design::{chr_feasible, Block, GroupType, GroupedDesign, Point, SetSystem};
use crate::error::{Error, Result};

/// Searches for a {3}-GDD of the given type, points numbered group by
/// group from 1.
///
/// Each step takes a point `x` with an uncovered cross pair, two of its
/// uncovered partners `y`, `z` from different groups, evicts the block
/// holding `{y, z}` if any, and adds `{x, y, z}`.
pub fn search_gdd3(ty: &GroupType, seed: u64, max_steps: u64) -> Result<GroupedDesign> {
    if !gdd3_feasible(ty) {
        return Err(Error::Infeasible {
            request: format!("{{3}}-GDD of type {ty}"),
            reason: "necessary divisibility conditions fail".into(),
        });
    }
    let sizes = ty.sizes();
    let n = ty.total();
    let mut group = vec![0usize; n + 1];
    let mut groups: Vec<Vec<Point>> = Vec::new();
    let mut next = 1;
    for (g, &size) in sizes.iter().enumerate() {
        groups.push((next..next + size as Point).collect());
        for p in next..next + size as Point {
            group[p as usize] = g;
        }
        next += size as Point;
    }
    let cross_pairs: usize = (n * n - sizes.iter().map(|g| g * g).sum::<usize>()) / 2;
    let target = cross_pairs / 3;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // third[x][y] = 0 when {x,y} is uncovered, else the third point
    let mut third = vec![vec![0 as Point; n + 1]; n + 1];
    let mut blocks = 0usize;
    let mut partners: Vec<Point> = Vec::with_capacity(n);
    for _ in 0..max_steps {
        if blocks == target {
            break;
        }
        let live: Vec<Point> = (1..=n as Point)
            .filter(|&x| {
                (1..=n as Point).any(|y| {
                    group[y as usize] != group[x as usize] && third[x as usize][y as usize] == 0
                })
            })
            .collect();
        let x = live[rng.gen_range(0..live.len())];
        partners.clear();
        partners.extend((1..=n as Point).filter(|&y| {
            group[y as usize] != group[x as usize] && third[x as usize][y as usize] == 0
        }));
        partners.shuffle(&mut rng);
        let Some((y, z)) = partners.iter().enumerate().find_map(|(i, &y)| {
            partners[i + 1..]
                .iter()
                .find(|&&z| group[z as usize] != group[y as usize])
                .map(|&z| (y, z))
        }) else {
            continue;
        };
        let w = third[y as usize][z as usize];
        if w != 0 {
            for (a, b) in [(y, z), (y, w), (z, w)] {
                third[a as usize][b as usize] = 0;
                third[b as usize][a as usize] = 0;
            }
            blocks -= 1;
        }
        for (a, b, c) in [(x, y, z), (y, z, x), (x, z, y)] {
            third[a as usize][b as usize] = c;
            third[b as usize][a as usize] = c;
        }
        blocks += 1;
    }
    if blocks != target {
        return Err(Error::Exhausted(format!(
            "{{3}}-GDD of type {ty}: {blocks} of {target} blocks after {max_steps} steps"
        )));
    }
    let mut out = Vec::with_capacity(target);
    for x in 1..=n as Point {
        for y in x + 1..=n as Point {
            let z = third[x as usize][y as usize];
            if z > y {
                out.push(Block::new([x, y, z])?);
            }
        }
    }
    GroupedDesign::new(SetSystem::new(n, out)?, groups)
}

/// Necessary conditions for a {3}-GDD: every point's cross degree is even
/// and the number of cross pairs is divisible by three.
pub fn gdd3_feasible(ty: &GroupType) -> bool {
    let sizes = ty.sizes();
    let n = ty.total();
    if sizes.len() < 3 {
        return false;
    }
    let parts: Vec<(usize, usize)> = ty.parts().collect();
    if let [(g, t)] = parts[..] {
        return chr_feasible(g, t, 0);
    }
    let cross = (n * n - sizes.iter().map(|g| g * g).sum::<usize>()) / 2;
    sizes.iter().all(|g| (n - g).is_multiple_of(2)) && cross.is_multiple_of(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::verify_gdd;
    use std::collections::BTreeSet;

    #[test]
    fn finds_small_gdds() {
        for ty in ["2^3", "3^3", "1^6 3^1", "6^3 4^1"] {
            let t: GroupType = ty.parse().unwrap();
            let d = search_gdd3(&t, 1, 200_000).unwrap();
            let r = verify_gdd(&d, &BTreeSet::from([3]));
            assert!(r.is_valid(), "{ty}: {r}");
            assert_eq!(d.group_type(), t);
        }
    }

    #[test]
    fn rejects_infeasible() {
        let t: GroupType = "1^5 2^1".parse().unwrap();
        assert!(matches!(
            search_gdd3(&t, 1, 10),
            Err(Error::Infeasible { .. })
        ));
    }
}
