//! Exhaustive determination of the shortest 2-radius sequence for small
//! orders by iterative deepening.

use crate::error::{Error, Result};

/// Largest order the oracle accepts unless a higher cap is given.
pub const DEFAULT_ORACLE_CAP: usize = 6;

/// Counting bound: a sequence of length `m ≥ 2` has at most `2m − 3`
/// position pairs within distance 2.
pub fn trivial_lower_bound(n: usize) -> usize {
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs == 0 {
        1
    } else {
        (pairs + 3).div_ceil(2)
    }
}

struct Dfs {
    n: usize,
    len: usize,
    index: Vec<usize>,
    full: u64,
    seq: Vec<usize>,
}

impl Dfs {
    fn bit(&self, a: usize, b: usize) -> u64 {
        if a == b {
            0
        } else {
            1 << self.index[a * self.n + b]
        }
    }

    /// Labels `0..used` have appeared; the next new label must be `used`.
    fn go(&mut self, covered: u64, used: usize) -> bool {
        if covered == self.full {
            return true;
        }
        let left = self.len - self.seq.len();
        let missing = (self.full & !covered).count_ones() as usize;
        if left == 0 || missing > 2 * left {
            return false;
        }
        let p = self.seq.len();
        for v in 0..(used + 1).min(self.n) {
            if p > 0 && self.seq[p - 1] == v {
                continue;
            }
            let mut add = 0;
            if p > 0 {
                add |= self.bit(v, self.seq[p - 1]);
            }
            if p > 1 {
                add |= self.bit(v, self.seq[p - 2]);
            }
            self.seq.push(v);
            if self.go(covered | add, used.max(v + 1)) {
                return true;
            }
            self.seq.pop();
        }
        false
    }
}

/// Exact shortest 2-radius sequence length of order `n` if it is at most
/// `max_len`, else `None`. Orders above `cap` are refused.
pub fn exhaustive_f2(n: usize, max_len: usize, cap: usize) -> Result<Option<usize>> {
    if n > cap {
        return Err(Error::Refused(format!(
            "order {n} exceeds oracle cap {cap}"
        )));
    }
    if n <= 1 {
        return Ok(Some(1).filter(|&l| l <= max_len));
    }
    let mut index = vec![0; n * n];
    let mut next = 0;
    for a in 0..n {
        for b in a + 1..n {
            index[a * n + b] = next;
            index[b * n + a] = next;
            next += 1;
        }
    }
    if next > 64 {
        return Err(Error::Refused(format!(
            "order {n} has too many pairs for the oracle"
        )));
    }
    let full = if next == 64 {
        u64::MAX
    } else {
        (1u64 << next) - 1
    };
    for len in trivial_lower_bound(n)..=max_len {
        let mut dfs = Dfs {
            n,
            len,
            index: index.clone(),
            full,
            seq: Vec::with_capacity(len),
        };
        if dfs.go(0, 0) {
            return Ok(Some(len));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        assert_eq!(exhaustive_f2(2, 10, 6).unwrap(), Some(2));
        assert_eq!(exhaustive_f2(3, 10, 6).unwrap(), Some(3));
        assert_eq!(exhaustive_f2(4, 10, 6).unwrap(), Some(5));
        assert_eq!(exhaustive_f2(5, 10, 6).unwrap(), Some(7));
        assert_eq!(exhaustive_f2(5, 6, 6).unwrap(), None);
        assert!(matches!(exhaustive_f2(7, 20, 6), Err(Error::Refused(_))));
    }
}
