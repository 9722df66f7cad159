//! Randomized hill-climbing for k-radius sequences of a fixed length.
//!
//! Each move redraws three distinct positions uniformly at random and is
//! kept unless the defect grows. A replica restarts from a fresh random
//! sequence once `stall_limit` moves pass without a strict improvement.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{defect, RadiusSequence};
use crate::design::Point;
use crate::error::{Error, Result};

/// Budget and seeding for [`hillclimb`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub seed: u64,
    /// Total moves per replica, summed over restarts.
    pub max_iterations: u64,
    /// Moves without a strict improvement before a restart; `None` means
    /// `200·m`.
    pub stall_limit: Option<u64>,
    /// Maximum number of restarts per replica.
    pub restarts: u64,
    pub time_limit: Option<Duration>,
    /// Independent replicas; replica `r` uses seed `seed + r`.
    pub threads: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            seed: 2011,
            max_iterations: 200_000_000,
            stall_limit: None,
            restarts: 1_000_000,
            time_limit: Some(Duration::from_secs(60)),
            threads: 1,
        }
    }
}

impl SearchParams {
    pub fn with_seed(seed: u64) -> Self {
        SearchParams {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let zero_time = self.time_limit.is_some_and(|t| t.is_zero());
        if self.max_iterations == 0
            || self.stall_limit == Some(0)
            || self.restarts == 0
            || self.threads == 0
            || zero_time
        {
            return Err(Error::Domain("search parameters must be positive".into()));
        }
        Ok(())
    }
}

/// Defect trajectory of one restart epoch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epoch {
    pub start_defect: usize,
    pub end_defect: usize,
    pub iterations: u64,
    /// Accepted moves that raised the defect. Always zero.
    pub increases: u64,
}

/// Statistics for a search, aggregated over replicas.
#[derive(Clone, Debug, Default)]
pub struct RunStats {
    pub iterations: u64,
    pub restarts: u64,
    pub best_defect: usize,
    pub winning_seed: Option<u64>,
    pub elapsed: Duration,
    pub epochs: Vec<Epoch>,
}

impl RunStats {
    /// True when no epoch ever accepted a move that raised the defect.
    pub fn epochs_monotone(&self) -> bool {
        self.epochs
            .iter()
            .all(|e| e.increases == 0 && e.end_defect <= e.start_defect)
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found {
        seq: RadiusSequence,
        stats: RunStats,
    },
    Failed {
        best: RadiusSequence,
        stats: RunStats,
    },
}

impl SearchOutcome {
    pub fn stats(&self) -> &RunStats {
        match self {
            SearchOutcome::Found { stats, .. } | SearchOutcome::Failed { stats, .. } => stats,
        }
    }

    pub fn found(&self) -> Option<&RadiusSequence> {
        match self {
            SearchOutcome::Found { seq, .. } => Some(seq),
            SearchOutcome::Failed { .. } => None,
        }
    }
}

/// Windowed pair-multiplicity table over a mutable sequence.
struct Window {
    n: usize,
    k: usize,
    seq: Vec<Point>,
    count: Vec<u32>,
    zeros: usize,
}

impl Window {
    fn new(n: usize, k: usize, seq: Vec<Point>) -> Self {
        let mut w = Window {
            n,
            k,
            seq,
            count: vec![0; n * n],
            zeros: n * n.saturating_sub(1) / 2,
        };
        for i in 0..w.seq.len() {
            for j in i + 1..(i + k + 1).min(w.seq.len()) {
                w.bump(i, j, true);
            }
        }
        w
    }

    fn bump(&mut self, i: usize, j: usize, add: bool) {
        let (a, b) = (self.seq[i], self.seq[j]);
        if a == b {
            return;
        }
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        let c = &mut self.count[(x as usize - 1) * self.n + (y as usize - 1)];
        if add {
            if *c == 0 {
                self.zeros -= 1;
            }
            *c += 1;
        } else {
            *c -= 1;
            if *c == 0 {
                self.zeros += 1;
            }
        }
    }

    /// Adds or removes every position pair within distance `k` that touches
    /// one of `pos`, each pair once.
    fn touch(&mut self, pos: &[usize], add: bool) {
        let m = self.seq.len();
        for &p in pos {
            for q in p.saturating_sub(self.k)..(p + self.k + 1).min(m) {
                if q == p || (q < p && pos.contains(&q)) {
                    continue;
                }
                self.bump(p.min(q), p.max(q), add);
            }
        }
    }

    fn assign(&mut self, pos: &[usize], vals: &[Point]) {
        self.touch(pos, false);
        for (&p, &v) in pos.iter().zip(vals) {
            self.seq[p] = v;
        }
        self.touch(pos, true);
    }
}

struct Replica<'a> {
    n: usize,
    m: usize,
    k: usize,
    seed: u64,
    params: &'a SearchParams,
    stop: &'a AtomicBool,
    start: Instant,
}

struct ReplicaResult {
    seq: Vec<Point>,
    defect: usize,
    iterations: u64,
    restarts: u64,
    epochs: Vec<Epoch>,
}

impl Replica<'_> {
    fn random_seq(&self, rng: &mut ChaCha8Rng) -> Vec<Point> {
        (0..self.m)
            .map(|_| rng.gen_range(1..=self.n as Point))
            .collect()
    }

    fn out_of_time(&self) -> bool {
        self.params
            .time_limit
            .is_some_and(|t| self.start.elapsed() >= t)
    }

    fn run(&self) -> ReplicaResult {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let stall = self.params.stall_limit.unwrap_or(200 * self.m as u64);
        let picks = self.m.min(3);
        let mut w = Window::new(self.n, self.k, self.random_seq(&mut rng));
        let mut best = (w.zeros, w.seq.clone());
        let mut epoch = Epoch {
            start_defect: w.zeros,
            end_defect: w.zeros,
            iterations: 0,
            increases: 0,
        };
        let mut epochs = Vec::new();
        let (mut iterations, mut restarts, mut since) = (0u64, 0u64, 0u64);
        let mut pos = [0usize; 3];
        let mut old = [0 as Point; 3];
        let mut new = [0 as Point; 3];

        while w.zeros > 0 && iterations < self.params.max_iterations {
            if iterations % 256 == 0 && (self.stop.load(Ordering::Relaxed) || self.out_of_time()) {
                break;
            }
            if since >= stall {
                if restarts >= self.params.restarts {
                    break;
                }
                epochs.push(epoch);
                restarts += 1;
                since = 0;
                w = Window::new(self.n, self.k, self.random_seq(&mut rng));
                epoch = Epoch {
                    start_defect: w.zeros,
                    end_defect: w.zeros,
                    iterations: 0,
                    increases: 0,
                };
            }
            iterations += 1;
            epoch.iterations += 1;
            since += 1;

            for (slot, idx) in pos.iter_mut().zip(sample(&mut rng, self.m, picks).iter()) {
                *slot = idx;
            }
            let pos = &pos[..picks];
            for i in 0..picks {
                old[i] = w.seq[pos[i]];
                new[i] = rng.gen_range(1..=self.n as Point);
            }
            let before = w.zeros;
            w.assign(pos, &new[..picks]);
            if w.zeros > before {
                w.assign(pos, &old[..picks]);
            } else if w.zeros < before {
                since = 0;
            }
            if w.zeros > epoch.end_defect {
                epoch.increases += 1;
            }
            epoch.end_defect = w.zeros;
            if w.zeros < best.0 {
                best = (w.zeros, w.seq.clone());
            }
        }
        epochs.push(epoch);
        ReplicaResult {
            seq: best.1,
            defect: best.0,
            iterations,
            restarts,
            epochs,
        }
    }
}

/// Searches for a k-radius sequence of order `n` and length exactly `m`.
pub fn hillclimb(n: usize, m: usize, k: usize, params: &SearchParams) -> Result<SearchOutcome> {
    params.validate()?;
    if n == 0 || m == 0 || k == 0 {
        return Err(Error::Domain(
            "order, length and radius must be positive".into(),
        ));
    }
    let start = Instant::now();
    let stop = AtomicBool::new(false);
    let replica = |r: usize| {
        let seed = params.seed.wrapping_add(r as u64);
        let res = Replica {
            n,
            m,
            k,
            seed,
            params,
            stop: &stop,
            start,
        }
        .run();
        let won = res.defect == 0
            && stop
                .compare_exchange(false, true, Ordering::SeqCst, Ordering::SeqCst)
                .is_ok();
        (seed, won, res)
    };
    let results: Vec<_> = if params.threads == 1 {
        vec![replica(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..params.threads)
                .map(|r| s.spawn(move || replica(r)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("replica panicked"))
                .collect()
        })
    };

    let mut stats = RunStats {
        best_defect: usize::MAX,
        ..RunStats::default()
    };
    for (_, _, r) in &results {
        stats.iterations += r.iterations;
        stats.restarts += r.restarts;
        stats.best_defect = stats.best_defect.min(r.defect);
        stats.epochs.extend(r.epochs.iter().cloned());
    }
    stats.elapsed = start.elapsed();
    let winner = results.iter().find(|(_, won, _)| *won);
    if let Some((seed, _, r)) = winner {
        stats.winning_seed = Some(*seed);
        let seq = RadiusSequence::new(n, k, r.seq.clone())?;
        debug_assert_eq!(defect(&seq), 0);
        return Ok(SearchOutcome::Found { seq, stats });
    }
    let (_, _, r) = results
        .iter()
        .min_by_key(|(_, _, r)| r.defect)
        .expect("at least one replica");
    let best = RadiusSequence::new(n, k, r.seq.clone())?;
    Ok(SearchOutcome::Failed { best, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    proptest::proptest! {
        #[test]
        fn incremental_matches_naive(
            n in 2usize..9,
            k in 1usize..4,
            seed in proptest::prelude::any::<u64>(),
            m in 3usize..30,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let seq: Vec<Point> = (0..m).map(|_| rng.gen_range(1..=n as Point)).collect();
            let mut w = Window::new(n, k, seq);
            for _ in 0..50 {
                let pos: Vec<usize> = sample(&mut rng, m, 3).into_vec();
                let vals: Vec<Point> = (0..3).map(|_| rng.gen_range(1..=n as Point)).collect();
                w.assign(&pos, &vals);
                let naive = defect(&RadiusSequence::new(n, k, w.seq.clone()).unwrap());
                proptest::prop_assert_eq!(w.zeros, naive);
            }
        }
    }

    #[test]
    fn trivial_order_three() {
        let out = hillclimb(3, 3, 2, &SearchParams::with_seed(1)).unwrap();
        let seq = out.found().expect("found");
        let mut sorted = seq.seq().to_vec();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2, 3]);
        assert!(out.stats().epochs_monotone());
    }

    #[test]
    fn below_lower_bound_fails() {
        let p = SearchParams {
            max_iterations: 20_000,
            ..SearchParams::with_seed(3)
        };
        match hillclimb(8, 16, 2, &p).unwrap() {
            SearchOutcome::Failed { best, stats } => {
                assert!(stats.best_defect >= 1);
                assert_eq!(defect(&best), stats.best_defect);
                assert!(stats.epochs_monotone());
            }
            SearchOutcome::Found { .. } => panic!("length 16 cannot work for n = 8"),
        }
    }

    #[test]
    fn rejects_zero_params() {
        let p = SearchParams {
            threads: 0,
            ..SearchParams::default()
        };
        assert!(hillclimb(3, 3, 2, &p).is_err());
    }
}
