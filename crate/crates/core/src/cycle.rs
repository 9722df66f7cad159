//! Edge-colored block intersection graphs and alternating cycles.
//!
//! A [`ColoredCycle`] lists block indices of a host [`SetSystem`] in cyclic
//! order together with the color (a shared point) chosen for each
//! adjacency. Joins are stored rather than recomputed because blocks that
//! meet in two or more points leave the choice open.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::design::{Point, SetSystem};
use crate::error::{Error, Result};
use crate::report::{VerificationReport, Violation, ViolationKind};

/// A cyclic sequence of blocks with one join color per adjacency.
///
/// `joins[i]` colors the edge between `blocks[i]` and `blocks[i + 1]`
/// (indices mod `m`). A single-block cycle carries no joins.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredCycle {
    blocks: Vec<usize>,
    joins: Vec<Point>,
}

impl ColoredCycle {
    pub fn new(blocks: Vec<usize>, joins: Vec<Point>) -> Result<Self> {
        let ok = match blocks.len() {
            0 => false,
            1 => joins.is_empty(),
            m => joins.len() == m,
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "cycle with {} blocks needs {} joins, got {}",
                blocks.len(),
                if blocks.len() == 1 { 0 } else { blocks.len() },
                joins.len()
            )));
        }
        Ok(ColoredCycle { blocks, joins })
    }

    /// The degenerate one-block cycle.
    pub fn single(block: usize) -> Self {
        ColoredCycle {
            blocks: vec![block],
            joins: Vec::new(),
        }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn joins(&self) -> &[Point] {
        &self.joins
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn colors(&self) -> BTreeSet<Point> {
        self.joins.iter().copied().collect()
    }

    /// Maps block indices through `f`, e.g. when a sub-design's blocks are
    /// appended to a larger host.
    pub fn map_blocks(&self, f: impl Fn(usize) -> usize) -> Self {
        ColoredCycle {
            blocks: self.blocks.iter().map(|&b| f(b)).collect(),
            joins: self.joins.clone(),
        }
    }

    /// Maps join colors through `f`, used when the host points are relabelled.
    pub fn map_colors(&self, f: impl Fn(Point) -> Point) -> Self {
        ColoredCycle {
            blocks: self.blocks.clone(),
            joins: self.joins.iter().map(|&c| f(c)).collect(),
        }
    }

    /// Same cycle starting at position `start`.
    pub fn rotate(&self, start: usize) -> Self {
        let m = self.len();
        let s = start % m;
        let mut blocks = self.blocks.clone();
        let mut joins = self.joins.clone();
        blocks.rotate_left(s);
        if !joins.is_empty() {
            joins.rotate_left(s);
        }
        ColoredCycle { blocks, joins }
    }
}

/// Block intersection graph: one vertex per block, `|A ∩ A'|` parallel
/// edges between distinct blocks, each colored by a distinct shared point.
#[derive(Clone, Debug)]
pub struct BiGraph {
    adjacency: Vec<BTreeMap<usize, Vec<Point>>>,
}

impl BiGraph {
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.colors(a, b).len()
    }

    /// Colors available between `a` and `b`, ascending.
    pub fn colors(&self, a: usize, b: usize) -> &[Point] {
        self.adjacency[a].get(&b).map_or(&[], Vec::as_slice)
    }

    /// Neighbours of `a` with their edge colors.
    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = (usize, &[Point])> + '_ {
        self.adjacency[a].iter().map(|(&b, c)| (b, c.as_slice()))
    }

    pub fn degree(&self, a: usize) -> usize {
        self.adjacency[a].len()
    }
}

pub fn build_big(s: &SetSystem) -> BiGraph {
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); s.order() + 1];
    for (i, b) in s.blocks().iter().enumerate() {
        for &p in b.points() {
            incidence[p as usize].push(i);
        }
    }
    let mut adjacency = vec![BTreeMap::new(); s.len()];
    for (p, blocks) in incidence.iter().enumerate() {
        for (x, &a) in blocks.iter().enumerate() {
            for &b in &blocks[x + 1..] {
                adjacency[a]
                    .entry(b)
                    .or_insert_with(Vec::new)
                    .push(p as Point);
                adjacency[b]
                    .entry(a)
                    .or_insert_with(Vec::new)
                    .push(p as Point);
            }
        }
    }
    BiGraph { adjacency }
}

/// Join and alternation invariants, without hamiltonicity.
pub fn check_cycle(s: &SetSystem, c: &ColoredCycle) -> VerificationReport {
    let mut r = VerificationReport::new();
    let m = c.len();
    if let Some(&b) = c.blocks.iter().find(|&&b| b >= s.len()) {
        r.push(Violation::new(
            ViolationKind::OutOfRange,
            format!("block index {b} outside host of {} blocks", s.len()),
        ));
        return r;
    }
    if m == 1 {
        return r;
    }
    let blocks = s.blocks();
    for i in 0..m {
        let (a, b) = (c.blocks[i], c.blocks[(i + 1) % m]);
        let color = c.joins[i];
        if !blocks[a].contains(color) || !blocks[b].contains(color) {
            r.push(
                Violation::new(
                    ViolationKind::BadJoin,
                    format!(
                        "join {i} color {color} not shared by {} and {}",
                        blocks[a], blocks[b]
                    ),
                )
                .with_points([color])
                .with_blocks([a, b]),
            );
        }
        let prev = c.joins[(i + m - 1) % m];
        if prev == color {
            r.push(
                Violation::new(
                    ViolationKind::NotAlternating,
                    format!("both edges at position {i} have color {color}"),
                )
                .with_points([color])
                .with_blocks([c.blocks[i]]),
            );
        }
    }
    r
}

/// Verifies that `c` is an alternating hamiltonian cycle of `s`, and
/// colorful when `require_colorful` is set.
pub fn verify_cah(s: &SetSystem, c: &ColoredCycle, require_colorful: bool) -> VerificationReport {
    let mut r = check_cycle(s, c);
    let m = c.len();
    if m == 2 {
        r.push(Violation::new(
            ViolationKind::NotHamiltonian,
            "two blocks do not form a simple cycle",
        ));
    }
    if m != s.len() {
        r.push(Violation::new(
            ViolationKind::NotHamiltonian,
            format!("cycle visits {m} blocks, host has {}", s.len()),
        ));
    }
    let mut seen = HashSet::with_capacity(m);
    for (i, &b) in c.blocks.iter().enumerate() {
        if !seen.insert(b) {
            r.push(
                Violation::new(
                    ViolationKind::NotHamiltonian,
                    format!("block {b} visited again at position {i}"),
                )
                .with_blocks([b]),
            );
        }
    }
    let colorful = if m == 1 {
        true
    } else {
        let colors = c.colors();
        let missing: Vec<Point> = (1..=s.order() as Point)
            .filter(|p| !colors.contains(p))
            .collect();
        if require_colorful && !missing.is_empty() {
            r.push(
                Violation::new(
                    ViolationKind::NotColorful,
                    format!("{} points never used as a join color", missing.len()),
                )
                .with_points(missing.iter().copied()),
            );
        }
        missing.is_empty()
    };
    r.colorful = Some(colorful);
    r
}

/// Chooses one color per adjacency of `order` so that adjacent joins
/// differ. Candidates are tried in ascending order, so the result is the
/// lexicographically smallest valid assignment.
pub fn infer_joins(s: &SetSystem, order: &[usize]) -> Result<ColoredCycle> {
    let m = order.len();
    if m == 0 {
        return Err(Error::Precondition("empty block order".into()));
    }
    if let Some(&b) = order.iter().find(|&&b| b >= s.len()) {
        return Err(Error::Precondition(format!("block index {b} outside host")));
    }
    if m == 1 {
        return Ok(ColoredCycle::single(order[0]));
    }
    let blocks = s.blocks();
    let inter: Vec<Vec<Point>> = (0..m)
        .map(|i| blocks[order[i]].intersection(&blocks[order[(i + 1) % m]]))
        .collect();
    if let Some(i) = inter.iter().position(Vec::is_empty) {
        return Err(Error::NoJoinAssignment { adjacency: i });
    }
    let mut deepest = 1;
    for &first in &inter[0] {
        let mut joins = vec![first; m];
        let mut next = vec![0usize; m];
        // (position, previous color) pairs known to have no completion
        let mut dead: HashSet<(usize, Point)> = HashSet::new();
        let mut i = 1;
        while i > 0 {
            if i == m {
                return ColoredCycle::new(order.to_vec(), joins);
            }
            deepest = deepest.max(i);
            let prev = joins[i - 1];
            let mut found = false;
            if !dead.contains(&(i, prev)) {
                while next[i] < inter[i].len() {
                    let c = inter[i][next[i]];
                    next[i] += 1;
                    if c == prev || (i == m - 1 && c == first) {
                        continue;
                    }
                    joins[i] = c;
                    found = true;
                    break;
                }
            }
            if found {
                i += 1;
                if i < m {
                    next[i] = 0;
                }
            } else {
                dead.insert((i, prev));
                i -= 1;
            }
        }
    }
    Err(Error::NoJoinAssignment { adjacency: deepest })
}

/// Combines two vertex-disjoint alternating cycles through two edges of the
/// same color `x`: edges `(a,b)` of `c1` and `(c,d)` of `c2` are replaced
/// by `(a,c)` and `(b,d)`, both colored `x`.
///
/// `at` gives the edge positions in `c1` and `c2`.
pub fn merge_cycles(
    c1: &ColoredCycle,
    c2: &ColoredCycle,
    at: (usize, usize),
) -> Result<ColoredCycle> {
    let (m1, m2) = (c1.len(), c2.len());
    if m1 < 2 || m2 < 2 {
        return Err(Error::Precondition(
            "cannot merge through a single-block cycle".into(),
        ));
    }
    let (i1, i2) = (at.0 % m1, at.1 % m2);
    let x = c1.joins[i1];
    if c2.joins[i2] != x {
        return Err(Error::Precondition(format!(
            "edge colors differ: {x} vs {}",
            c2.joins[i2]
        )));
    }
    let left: HashSet<usize> = c1.blocks.iter().copied().collect();
    if let Some(&b) = c2.blocks.iter().find(|b| left.contains(b)) {
        return Err(Error::Precondition(format!("cycles share block {b}")));
    }
    let mut blocks = Vec::with_capacity(m1 + m2);
    let mut joins = Vec::with_capacity(m1 + m2);
    // b .. a around c1
    for step in 1..=m1 {
        blocks.push(c1.blocks[(i1 + step) % m1]);
        if step < m1 {
            joins.push(c1.joins[(i1 + step) % m1]);
        }
    }
    joins.push(x);
    // c .. d backwards around c2
    for step in 0..m2 {
        let j = (i2 + m2 - step) % m2;
        blocks.push(c2.blocks[j]);
        if step + 1 < m2 {
            joins.push(c2.joins[(j + m2 - 1) % m2]);
        }
    }
    joins.push(x);
    ColoredCycle::new(blocks, joins)
}

/// Inserts a single block into a cycle between two consecutive blocks,
/// choosing colors so the result stays alternating.
fn splice_block(s: &SetSystem, c: &ColoredCycle, block: usize) -> Option<ColoredCycle> {
    let m = c.len();
    let blocks = s.blocks();
    let new = &blocks[block];
    if m == 1 {
        let old = &blocks[c.blocks[0]];
        let shared = old.intersection(new);
        if shared.len() < 2 {
            return None;
        }
        return ColoredCycle::new(vec![c.blocks[0], block], vec![shared[0], shared[1]]).ok();
    }
    for i in 0..m {
        let (p, q) = (c.blocks[i], c.blocks[(i + 1) % m]);
        let before = c.joins[(i + m - 1) % m];
        let after = c.joins[(i + 1) % m];
        for &y in blocks[p].intersection(new).iter().filter(|&&y| y != before) {
            if let Some(&z) = blocks[q]
                .intersection(new)
                .iter()
                .find(|&&z| z != after && z != y)
            {
                let mut bl = c.blocks.clone();
                let mut jn = c.joins.clone();
                bl.insert(i + 1, block);
                jn[i] = y;
                jn.insert(i + 1, z);
                return ColoredCycle::new(bl, jn).ok();
            }
        }
    }
    None
}

fn color_components(cycles: &[&ColoredCycle], s: &SetSystem) -> Vec<Vec<usize>> {
    // union-find over cycles linked by a shared color (or point, for single blocks)
    let mut parent: Vec<usize> = (0..cycles.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let mut owner: BTreeMap<Point, usize> = BTreeMap::new();
    for (i, c) in cycles.iter().enumerate() {
        let colors: BTreeSet<Point> = if c.is_degenerate() {
            s.blocks()[c.blocks[0]].points().iter().copied().collect()
        } else {
            c.colors()
        };
        for col in colors {
            match owner.get(&col) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
                None => {
                    owner.insert(col, i);
                }
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..cycles.len() {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    comps.into_values().collect()
}

/// Merges block-disjoint alternating cycles that jointly cover `host` into
/// one alternating hamiltonian cycle.
///
/// The cycle holding the first `seed` block (or the longest cycle) absorbs,
/// one at a time, the remaining cycle sharing the most join colors with it.
/// Merging preserves the multiset of join colors, so this succeeds exactly
/// when the color-sharing graph on the inputs is connected; otherwise the
/// components are returned in [`Error::AssemblyStuck`].
pub fn assemble(
    cycles: Vec<ColoredCycle>,
    host: &SetSystem,
    seeds: &[usize],
) -> Result<ColoredCycle> {
    if cycles.is_empty() {
        return Err(Error::Precondition("no cycles to assemble".into()));
    }
    let mut owner = vec![usize::MAX; host.len()];
    for (ci, c) in cycles.iter().enumerate() {
        for &b in c.blocks() {
            if b >= host.len() {
                return Err(Error::Precondition(format!("block index {b} outside host")));
            }
            if owner[b] != usize::MAX {
                return Err(Error::Precondition(format!(
                    "block {b} appears in cycles {} and {ci}",
                    owner[b]
                )));
            }
            owner[b] = ci;
        }
    }
    if let Some(b) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::Precondition(format!(
            "block {b} is in no input cycle"
        )));
    }

    let stuck = |cycles: &[ColoredCycle]| {
        let refs: Vec<&ColoredCycle> = cycles.iter().collect();
        Error::AssemblyStuck {
            components: color_components(&refs, host),
        }
    };

    let (singles, mut rest): (Vec<ColoredCycle>, Vec<ColoredCycle>) = cycles
        .iter()
        .cloned()
        .partition(|c| c.is_degenerate() && cycles.len() > 1);
    if rest.is_empty() {
        // only single blocks: start from one of them
        rest.push(singles[0].clone());
    }
    let start = seeds
        .iter()
        .find_map(|&b| rest.iter().position(|c| c.blocks.contains(&b)))
        .unwrap_or_else(|| {
            (0..rest.len())
                .max_by_key(|&i| (rest[i].len(), std::cmp::Reverse(i)))
                .unwrap_or(0)
        });
    let mut base = rest.swap_remove(start);
    let mut colors = base.colors();
    // keep input order deterministic after swap_remove
    rest.sort_by_key(|c| c.blocks[0]);

    while !rest.is_empty() {
        let best = rest
            .iter()
            .enumerate()
            .map(|(i, c)| (c.joins.iter().filter(|j| colors.contains(j)).count(), i))
            .filter(|&(shared, _)| shared > 0)
            .max_by_key(|&(shared, i)| (shared, std::cmp::Reverse(i)));
        let Some((_, idx)) = best else {
            let mut all = vec![base];
            all.extend(rest);
            return Err(stuck(&all));
        };
        let other = rest.remove(idx);
        let x = *other
            .joins
            .iter()
            .filter(|j| colors.contains(j))
            .min()
            .expect("shared color");
        let i1 = base
            .joins
            .iter()
            .position(|&j| j == x)
            .expect("color in base");
        let i2 = other
            .joins
            .iter()
            .position(|&j| j == x)
            .expect("color in other");
        base = merge_cycles(&base, &other, (i1, i2))?;
        colors.extend(other.joins.iter().copied());
    }

    let anchor = base.blocks[0];
    for single in singles.iter().filter(|c| c.blocks[0] != anchor) {
        match splice_block(host, &base, single.blocks[0]) {
            Some(c) => base = c,
            None => {
                let mut all = vec![base];
                all.extend(singles.iter().cloned());
                return Err(stuck(&all));
            }
        }
    }

    let report = verify_cah(host, &base, false);
    if !report.is_valid() {
        return Err(Error::Unverified {
            what: "assembled cycle".into(),
            report: Box::new(report),
        });
    }
    Ok(base)
}

/// Randomised depth-first search for an alternating hamiltonian cycle,
/// restarting after `node_budget` extensions until `restarts` attempts are
/// spent.
pub fn find_alternating_cycle(
    s: &SetSystem,
    require_colorful: bool,
    seed: u64,
    node_budget: u64,
    restarts: u32,
) -> Result<ColoredCycle> {
    let b = s.len();
    if b == 0 {
        return Err(Error::Precondition("empty system".into()));
    }
    if b == 1 {
        return Ok(ColoredCycle::single(0));
    }
    let g = build_big(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts.max(1) {
        if let Some(c) = dfs_cycle(s, &g, require_colorful, &mut rng, node_budget) {
            return Ok(c);
        }
    }
    Err(Error::Exhausted(format!(
        "no alternating hamiltonian cycle found in {} restarts",
        restarts.max(1)
    )))
}

fn dfs_cycle(
    s: &SetSystem,
    g: &BiGraph,
    require_colorful: bool,
    rng: &mut ChaCha8Rng,
    budget: u64,
) -> Option<ColoredCycle> {
    let b = s.len();
    let start = rng.gen_range(0..b);
    let mut used = vec![false; b];
    let mut path = vec![start];
    // joins[i] colors the edge path[i] -> path[i+1]
    let mut joins: Vec<Point> = Vec::new();
    let mut frames: Vec<Vec<(usize, Point)>> = Vec::new();
    used[start] = true;
    let mut nodes = 0u64;

    let candidates = |path: &[usize], joins: &[Point], used: &[bool], rng: &mut ChaCha8Rng| {
        let last = *path.last().unwrap();
        let incoming = joins.last().copied();
        let mut c: Vec<(usize, usize, Point)> = Vec::new();
        for (nb, colors) in g.neighbors(last) {
            if used[nb] {
                continue;
            }
            let free = g.neighbors(nb).filter(|(x, _)| !used[*x]).count();
            for &col in colors {
                if Some(col) != incoming {
                    c.push((free, nb, col));
                }
            }
        }
        c.shuffle(rng);
        // fewest onward options first; the stack pops from the back
        c.sort_by_key(|&(free, _, _)| std::cmp::Reverse(free));
        c.into_iter()
            .map(|(_, nb, col)| (nb, col))
            .collect::<Vec<_>>()
    };

    frames.push(candidates(&path, &joins, &used, rng));
    while let Some(frame) = frames.last_mut() {
        if path.len() == b {
            let first_out = joins[0];
            let last_in = *joins.last().unwrap();
            let closing = s.blocks()[path[b - 1]]
                .intersection(&s.blocks()[path[0]])
                .into_iter()
                .filter(|&c| c != first_out && c != last_in)
                .find(|&c| {
                    !require_colorful || {
                        let mut all: BTreeSet<Point> = joins.iter().copied().collect();
                        all.insert(c);
                        all.len() == s.order()
                    }
                });
            if let Some(c) = closing {
                let mut j = joins.clone();
                j.push(c);
                return ColoredCycle::new(path, j).ok();
            }
            frames.pop();
            let last = path.pop().unwrap();
            used[last] = false;
            joins.pop();
            continue;
        }
        match frame.pop() {
            Some((nb, col)) => {
                nodes += 1;
                if nodes > budget {
                    return None;
                }
                used[nb] = true;
                path.push(nb);
                joins.push(col);
                let next = candidates(&path, &joins, &used, rng);
                frames.push(next);
            }
            None => {
                frames.pop();
                if path.len() == 1 {
                    return None;
                }
                let last = path.pop().unwrap();
                used[last] = false;
                joins.pop();
            }
        }
    }
    None
}
