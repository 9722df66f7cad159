//! Dancing-links exact cover.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An exact cover instance. Primary columns must be covered exactly once,
/// secondary columns at most once.
#[derive(Clone, Debug)]
pub struct ExactCover {
    primary: usize,
    secondary: usize,
    rows: Vec<Vec<usize>>,
}

impl ExactCover {
    pub fn new(primary: usize, secondary: usize) -> Self {
        ExactCover {
            primary,
            secondary,
            rows: Vec::new(),
        }
    }

    /// Adds a row and returns its index.
    pub fn add_row(&mut self, columns: Vec<usize>) -> usize {
        debug_assert!(columns.iter().all(|&c| c < self.primary + self.secondary));
        self.rows.push(columns);
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Finds one solution as a list of row indices.
    ///
    /// Rows are visited in a shuffled order when `rng` is given. Fails with
    /// [`Error::Exhausted`] after `budget` row selections and with
    /// [`Error::Infeasible`] when the search space is empty.
    pub fn solve(&self, budget: u64, rng: Option<&mut ChaCha8Rng>) -> Result<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        if let Some(rng) = rng {
            order.shuffle(rng);
        }
        let mut links = Links::build(self.primary, self.secondary, &self.rows, &order);
        let mut nodes = 0u64;
        match links.search(budget, &mut nodes) {
            Some(true) => Ok(links.solution.iter().map(|&n| links.row_of[n]).collect()),
            Some(false) => Err(Error::Infeasible {
                request: format!("exact cover of {} columns", self.primary),
                reason: "no solution exists".into(),
            }),
            None => Err(Error::Exhausted(format!(
                "exact cover after {budget} nodes"
            ))),
        }
    }
}

struct Links {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    size: Vec<usize>,
    row_of: Vec<usize>,
    solution: Vec<usize>,
}

const ROOT: usize = 0;

impl Links {
    fn build(primary: usize, secondary: usize, rows: &[Vec<usize>], order: &[usize]) -> Links {
        let cols = primary + secondary;
        let headers = cols + 1;
        let mut l = Links {
            left: (0..headers)
                .map(|i| if i == 0 { primary } else { i - 1 })
                .collect(),
            right: (0..headers)
                .map(|i| if i == primary { 0 } else { i + 1 })
                .collect(),
            up: (0..headers).collect(),
            down: (0..headers).collect(),
            col: (0..headers).collect(),
            size: vec![0; headers],
            row_of: vec![usize::MAX; headers],
            solution: Vec::new(),
        };
        // secondary headers link only to themselves
        for c in primary + 1..headers {
            l.left[c] = c;
            l.right[c] = c;
        }
        if primary == 0 {
            l.left[0] = 0;
            l.right[0] = 0;
        }
        for &r in order {
            let mut first = usize::MAX;
            for &c in &rows[r] {
                let h = c + 1;
                let n = l.col.len();
                l.col.push(h);
                l.row_of.push(r);
                l.up.push(l.up[h]);
                l.down.push(h);
                let last = l.up[h];
                l.down[last] = n;
                l.up[h] = n;
                l.size[h] += 1;
                if first == usize::MAX {
                    first = n;
                    l.left.push(n);
                    l.right.push(n);
                } else {
                    let before = l.left[first];
                    l.left.push(before);
                    l.right.push(first);
                    l.right[before] = n;
                    l.left[first] = n;
                }
            }
        }
        l
    }

    fn cover(&mut self, c: usize) {
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = rc;
        self.left[rc] = lc;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = c;
        self.left[rc] = c;
    }

    /// `Some(true)` on success, `Some(false)` when exhausted without a
    /// solution, `None` when the node budget ran out.
    fn search(&mut self, budget: u64, nodes: &mut u64) -> Option<bool> {
        if self.right[ROOT] == ROOT {
            return Some(true);
        }
        let mut best = self.right[ROOT];
        let mut c = best;
        while c != ROOT {
            if self.size[c] < self.size[best] {
                best = c;
            }
            c = self.right[c];
        }
        if self.size[best] == 0 {
            return Some(false);
        }
        self.cover(best);
        let mut r = self.down[best];
        let mut result = Some(false);
        while r != best {
            *nodes += 1;
            if *nodes > budget {
                result = None;
                break;
            }
            self.solution.push(r);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            let found = self.search(budget, nodes);
            if found == Some(true) {
                return Some(true);
            }
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            self.solution.pop();
            if found.is_none() {
                result = None;
                break;
            }
            r = self.down[r];
        }
        self.uncover(best);
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knuth_example() {
        // columns A..G, the classic six-row instance
        let mut x = ExactCover::new(7, 0);
        for row in [
            vec![2, 4, 5],
            vec![0, 3, 6],
            vec![1, 2, 5],
            vec![0, 3],
            vec![1, 6],
            vec![3, 4, 6],
        ] {
            x.add_row(row);
        }
        let mut sol = x.solve(1000, None).unwrap();
        sol.sort();
        assert_eq!(sol, vec![0, 3, 4]);
    }

    #[test]
    fn infeasible_and_budget() {
        let mut x = ExactCover::new(2, 0);
        x.add_row(vec![0, 1]);
        x.add_row(vec![0]);
        assert_eq!(x.solve(10, None).unwrap(), vec![0]);
        let mut y = ExactCover::new(3, 0);
        y.add_row(vec![0, 1]);
        y.add_row(vec![1, 2]);
        assert!(matches!(y.solve(10, None), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn secondary_columns_at_most_once() {
        let mut x = ExactCover::new(2, 1);
        x.add_row(vec![0, 2]);
        x.add_row(vec![1, 2]);
        x.add_row(vec![1]);
        let mut sol = x.solve(100, None).unwrap();
        sol.sort();
        assert_eq!(sol, vec![0, 2]);
    }
}
