//! Bounded searches backing the ingredient factory and catalog repair.

mod dlx;
mod gdd;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use dlx::ExactCover;
pub use gdd::{gdd3_feasible, search_gdd3};

use crate::design::{Block, Point, SetSystem};
use crate::error::{Error, Result};

/// Searches for a PBD(n, K) by exact cover of the pairs with all subsets of
/// the allowed sizes. Practical for orders up to about 20.
pub fn search_pbd(n: usize, sizes: &BTreeSet<usize>, seed: u64, budget: u64) -> Result<SetSystem> {
    if n > 24 {
        return Err(Error::Refused(format!(
            "exact-cover PBD search is limited to 24 points, got {n}"
        )));
    }
    let pair = |a: usize, b: usize| a * (2 * n - a - 1) / 2 + (b - a - 1);
    let mut x = ExactCover::new(n * (n - 1) / 2, 0);
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for &k in sizes.iter().filter(|&&k| k >= 2 && k <= n) {
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            let cols = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .map(|(i, j)| pair(cur[i], cur[j]))
                .collect();
            x.add_row(cols);
            subsets.push(cur.clone());
            // next k-subset in lexicographic order
            let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
                break;
            };
            cur[i] += 1;
            for j in i + 1..k {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = x.solve(budget, Some(&mut rng))?;
    let mut blocks = rows
        .iter()
        .map(|&r| Block::new(subsets[r].iter().map(|&p| p as Point + 1)))
        .collect::<Result<Vec<_>>>()?;
    blocks.sort();
    SetSystem::new(n, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::verify_pbd;

    #[test]
    fn pbd_by_exact_cover() {
        let k = BTreeSet::from([3, 4, 5]);
        let s = search_pbd(14, &k, 3, 10_000_000).unwrap();
        assert!(verify_pbd(&s, &k).is_valid());
        assert!(matches!(
            search_pbd(6, &BTreeSet::from([3]), 1, 1_000_000),
            Err(Error::Infeasible { .. })
        ));
    }
}
