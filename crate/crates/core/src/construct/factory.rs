//! Ingredient resolution and the recipe dispatch for coverings and the
//! {3}-GDDs of types `6^t` and `6^t u^1`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::catalog::{bundled, check, fixture_key, Cache, Fixture, FixtureKind, Provenance};
use crate::construct::direct::{extend_affine, projective_plane_3, steiner_triple_system};
use crate::construct::{
    adjoin_and_break, adjoin_and_fill, fill_in_groups, wfc, CahDesign, WeightFn,
};
use crate::cycle::find_alternating_cycle;
use crate::design::{
    covering_number, verify_pbd, Block, GroupType, GroupedDesign, Point, SetSystem,
};
use crate::error::{Error, Result};
use crate::search::{gdd3_feasible, search_gdd3, search_pbd};

/// Seed used when the caller does not choose one.
pub const DEFAULT_SEED: u64 = 2011;

const GDD_STEPS: u64 = 5_000_000;
const GDD_ATTEMPTS: u64 = 20;
const CYCLE_NODES: u64 = 2_000_000;
const CYCLE_RESTARTS: u32 = 50;
const PBD_NODES: u64 = 20_000_000;

/// Resolves ingredient designs from the catalog, the recipes, the cache,
/// and finally search, memoising every result.
pub struct Factory {
    seed: u64,
    cache: Option<Cache>,
    gdds: HashMap<GroupType, Arc<CahDesign>>,
    coverings: HashMap<usize, Arc<CahDesign>>,
}

impl Factory {
    pub fn new(seed: u64) -> Self {
        Factory {
            seed,
            cache: None,
            gdds: HashMap::new(),
            coverings: HashMap::new(),
        }
    }

    /// Also read and write searched designs in `cache`.
    pub fn with_cache(mut self, cache: Cache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn seed_for(&self, key: &str) -> u64 {
        // FNV-1a keeps per-request seeds stable across builds
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in key.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h ^ self.seed
    }

    /// A {3}-GDD of type `ty` with an alternating hamiltonian cycle,
    /// colorful whenever the recipe or search provides one.
    pub fn gdd3(&mut self, ty: &GroupType) -> Result<Arc<CahDesign>> {
        if let Some(d) = self.gdds.get(ty) {
            return Ok(d.clone());
        }
        let d = Arc::new(self.make_gdd3(ty)?);
        self.gdds.insert(ty.clone(), d.clone());
        Ok(d)
    }

    fn make_gdd3(&mut self, ty: &GroupType) -> Result<CahDesign> {
        if !gdd3_feasible(ty) {
            return Err(Error::Infeasible {
                request: format!("{{3}}-GDD of type {ty}"),
                reason: "necessary conditions fail".into(),
            });
        }
        let parts: Vec<(usize, usize)> = ty.parts().collect();
        if let [(1, v)] = parts[..] {
            return self.sts(v).map(|d| (*d).clone());
        }
        let key = fixture_key(FixtureKind::Gdd3, ty.total(), Some(ty), None);
        if let Some(f) = bundled(&key, false) {
            return verified_fixture(&f);
        }
        match parts[..] {
            [(6, t)] => return build_gdd_6t(self, t),
            [(u @ 4, 1), (6, t)] | [(6, t), (u @ 8, 1)] => return build_gdd_6t_u(self, t, u),
            _ => {}
        }
        self.searched_gdd3(ty, &key)
    }

    fn searched_gdd3(&mut self, ty: &GroupType, key: &str) -> Result<CahDesign> {
        if let Some(cache) = &self.cache {
            if let Some(f) = cache.load(key)? {
                if check(&f).is_valid() {
                    return CahDesign::from_fixture(&f);
                }
            }
        }
        let base = self.seed_for(key);
        let mut last = None;
        for attempt in 0..GDD_ATTEMPTS {
            let seed = base.wrapping_add(attempt);
            let design = match search_gdd3(ty, seed, GDD_STEPS) {
                Ok(d) => d,
                Err(e @ Error::Exhausted(_)) => {
                    last = Some(e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let cycle = match find_alternating_cycle(
                design.system(),
                true,
                seed,
                CYCLE_NODES,
                CYCLE_RESTARTS,
            ) {
                Ok(c) => c,
                Err(e) => {
                    last = Some(e);
                    continue;
                }
            };
            let d = CahDesign::new(design, cycle)?;
            if let Some(cache) = &self.cache {
                let mut f = d.to_fixture(FixtureKind::Gdd3, Provenance::Searched);
                f.seed = Some(seed);
                f.comments
                    .push(format!("{{3}}-GDD of type {ty} found by hill-climbing"));
                cache.store(&f)?;
            }
            return Ok(d);
        }
        Err(last.unwrap_or_else(|| Error::Exhausted(format!("{{3}}-GDD of type {ty}"))))
    }

    /// A Steiner triple system of order `v` with an alternating hamiltonian
    /// cycle, as a GDD with singleton groups.
    pub fn sts(&mut self, v: usize) -> Result<Arc<CahDesign>> {
        let ty = GroupType::uniform(1, v);
        if let Some(d) = self.gdds.get(&ty) {
            return Ok(d.clone());
        }
        let key = fixture_key(FixtureKind::Sts, v, None, None);
        let d = match bundled(&key, false) {
            Some(f) => verified_fixture(&f)?,
            None => {
                let s = steiner_triple_system(v)?;
                let c = find_alternating_cycle(
                    &s,
                    true,
                    self.seed_for(&key),
                    CYCLE_NODES,
                    CYCLE_RESTARTS,
                )?;
                CahDesign::new(GroupedDesign::singletons(s), c)?
            }
        };
        let d = Arc::new(d);
        self.gdds.insert(ty, d.clone());
        Ok(d)
    }

    /// A minimum `(n,3,2)`-covering with an alternating hamiltonian cycle,
    /// colorful for `n ∉ {4, 5}`.
    pub fn covering(&mut self, n: usize) -> Result<Arc<CahDesign>> {
        if let Some(d) = self.coverings.get(&n) {
            return Ok(d.clone());
        }
        let d = Arc::new(self.make_covering(n)?);
        let target = covering_number(n)?;
        if d.size() != target {
            return Err(Error::Unverified {
                what: format!(
                    "({n},3,2)-covering with {} blocks, minimum is {target}",
                    d.size()
                ),
                report: Box::default(),
            });
        }
        if n >= 6 && !d.is_colorful() {
            return Err(Error::Unverified {
                what: format!("({n},3,2)-covering cycle is not colorful"),
                report: Box::default(),
            });
        }
        self.coverings.insert(n, d.clone());
        Ok(d)
    }

    fn make_covering(&mut self, n: usize) -> Result<CahDesign> {
        if n < 3 {
            return Err(Error::Domain(format!("coverings need n >= 3, got {n}")));
        }
        let key = fixture_key(FixtureKind::Covering, n, None, None);
        if let Some(f) = bundled(&key, false) {
            return verified_fixture(&f);
        }
        let sts_key = fixture_key(FixtureKind::Sts, n, None, None);
        if let Some(f) = bundled(&sts_key, false) {
            return verified_fixture(&f);
        }
        let six = |k: usize| GroupType::uniform(6, k);
        let one = |d: Arc<CahDesign>, g: usize| BTreeMap::from([(g, (*d).clone())]);
        if n == 17 {
            let master = self.gdd3(&GroupType::uniform(5, 3))?;
            let sts7 = self.sts(7)?;
            return adjoin_and_fill(&master, 2, None, &one(sts7, 5));
        }
        match n % 6 {
            0 => {
                let master = self.gdd3(&six(n / 6))?;
                let c6 = self.covering(6)?;
                fill_in_groups(&master, &one(c6, 6))
            }
            1 => {
                let master = self.gdd3(&six((n - 1) / 6))?;
                let sts7 = self.sts(7)?;
                adjoin_and_fill(&master, 1, None, &one(sts7, 6))
            }
            2 => {
                let master = self.gdd3(&six((n - 8) / 6).with_extra(8))?;
                let mut fillers = one(self.covering(6)?, 6);
                fillers.insert(8, (*self.covering(8)?).clone());
                fill_in_groups(&master, &fillers)
            }
            3 => {
                let master = self.gdd3(&six((n - 3) / 6))?;
                let gdd = self.gdd3(&GroupType::from_sizes([1, 1, 1, 1, 1, 1, 3]))?;
                let sts9 = self.sts(9)?;
                adjoin_and_fill(&master, 3, Some(&sts9), &one(gdd, 6))
            }
            4 => {
                let master = self.gdd3(&six((n - 4) / 6).with_extra(4))?;
                let mut fillers = one(self.covering(6)?, 6);
                fillers.insert(4, (*self.covering(4)?).clone());
                fill_in_groups(&master, &fillers)
            }
            _ => {
                let master = self.gdd3(&six((n - 5) / 6).with_extra(4))?;
                let sts7 = self.sts(7)?;
                let c5 = self.covering(5)?;
                adjoin_and_fill(&master, 1, Some(&c5), &one(sts7, 6))
            }
        }
    }

    /// A PBD(t, {3,4,5}) master.
    fn pbd345(&mut self, t: usize) -> Result<SetSystem> {
        let s = match t {
            _ if t % 6 == 1 || t % 6 == 3 => steiner_triple_system(t)?,
            4 => SetSystem::from_lists(4, [[1, 2, 3, 4]])?,
            5 => SetSystem::from_lists(5, [[1, 2, 3, 4, 5]])?,
            10 => extend_affine(3, 1, false)?,
            11 => {
                let ty = GroupType::from_sizes([1, 1, 1, 1, 1, 1, 5]);
                let key = fixture_key(FixtureKind::Gdd3, 11, Some(&ty), None);
                let d = search_gdd3(&ty, self.seed_for(&key), GDD_STEPS)?;
                let big = d
                    .groups()
                    .iter()
                    .find(|g| g.len() == 5)
                    .cloned()
                    .expect("size-5 group");
                let mut blocks = d.system().blocks().to_vec();
                blocks.push(Block::new(big)?);
                SetSystem::new(11, blocks)?
            }
            12 => extend_affine(3, 3, true)?,
            16 => extend_affine(4, 0, false)?,
            _ => {
                let key = format!("pbd-{t}-k3,4,5");
                let k = BTreeSet::from([3, 4, 5]);
                search_pbd(t, &k, self.seed_for(&key), PBD_NODES)?
            }
        };
        let report = verify_pbd(&s, &BTreeSet::from([3, 4, 5]));
        if !report.is_valid() {
            return Err(Error::Unverified {
                what: format!("PBD({t}, {{3,4,5}})"),
                report: Box::new(report),
            });
        }
        Ok(s)
    }
}

fn verified_fixture(f: &Fixture) -> Result<CahDesign> {
    let report = check(f);
    if !report.is_valid() {
        return Err(Error::Unverified {
            what: f.key(),
            report: Box::new(report),
        });
    }
    CahDesign::from_fixture(f)
}

fn master_fixture(key: &str) -> Result<Fixture> {
    let f = bundled(key, false).ok_or_else(|| Error::NotAvailable(format!("master {key}")))?;
    let report = check(&f);
    if !report.is_valid() {
        return Err(Error::Unverified {
            what: key.to_string(),
            report: Box::new(report),
        });
    }
    Ok(f)
}

fn expect_type(d: CahDesign, want: &GroupType) -> Result<CahDesign> {
    if d.group_type() != *want {
        return Err(Error::Precondition(format!(
            "recipe produced type {}, expected {want}",
            d.group_type()
        )));
    }
    if !d.is_colorful() {
        return Err(Error::Unverified {
            what: format!("{{3}}-GDD of type {want}: cycle is not colorful"),
            report: Box::default(),
        });
    }
    Ok(d)
}

/// A colorful {3}-GDD of type `6^t`.
///
/// Weights 3 on the bundled GDDs of type `2^t` (t = 3, 4, 6), weights 2 on
/// the {4}-GDDs of type `3^t` (t = 5, 8), otherwise weight 6 on a
/// PBD(t, {3,4,5}).
pub fn build_gdd_6t(factory: &mut Factory, t: usize) -> Result<CahDesign> {
    if t < 3 {
        return Err(Error::Domain(format!("type 6^{t} needs t >= 3")));
    }
    let want = GroupType::uniform(6, t);
    let d = match t {
        3 | 4 | 6 => {
            let f = master_fixture(&format!("gdd3-2^{t}"))?;
            let master = f.grouped()?;
            let w = WeightFn::constant(master.order(), 3);
            wfc(&master, &w, &mut |ty| factory.gdd3(ty), &[])?
        }
        5 | 8 => {
            let f = master_fixture(&format!("gdd4-3^{t}"))?;
            let master = f.grouped()?;
            let w = WeightFn::constant(master.order(), 2);
            wfc(
                &master,
                &w,
                &mut |ty| factory.gdd3(ty),
                &f.marked(true, false),
            )?
        }
        _ => {
            let master = GroupedDesign::singletons(factory.pbd345(t)?);
            let w = WeightFn::constant(t, 6);
            wfc(&master, &w, &mut |ty| factory.gdd3(ty), &[])?
        }
    };
    expect_type(d, &want)
}

/// A colorful {3}-GDD of type `6^t u^1`, `u ∈ {4, 8}`, for `3 ≤ t ≤ 16`.
pub fn build_gdd_6t_u(factory: &mut Factory, t: usize, u: usize) -> Result<CahDesign> {
    if t < 3 || (u != 4 && u != 8) {
        return Err(Error::Domain(format!(
            "type 6^{t} {u}^1 needs t >= 3 and u in {{4, 8}}"
        )));
    }
    let want = GroupType::uniform(6, t).with_extra(u);
    let d = match t {
        3 | 4 | 7 | 8 | 11 => {
            // {4}-GDD of type 3^{t+1}; the last point carries the u-group
            let f = master_fixture(&format!("gdd4-3^{}", t + 1))?;
            let master = f.grouped()?;
            let mut w = WeightFn::constant(master.order(), 2);
            w.set(3 * (t as Point + 1), if u == 4 { 0 } else { 4 });
            wfc(
                &master,
                &w,
                &mut |ty| factory.gdd3(ty),
                &f.marked(true, false),
            )?
        }
        5 | 6 | 10 => {
            let big = if t == 10 { 12 } else { 6 };
            let f = master_fixture(&format!("gdd47-3^{t}-{big}^1"))?;
            let master = f.grouped()?;
            let mut w = WeightFn::constant(master.order(), 2);
            let group = master
                .groups()
                .iter()
                .find(|g| g.len() == big)
                .ok_or_else(|| Error::Precondition("master lacks its large group".into()))?;
            for &p in group.iter().rev().take(big - u / 2) {
                w.set(p, 0);
            }
            wfc(
                &master,
                &w,
                &mut |ty| factory.gdd3(ty),
                &f.marked(true, u == 8),
            )?
        }
        9 => {
            let master = factory.gdd3(&GroupType::uniform(3, 3))?;
            let w = WeightFn::constant(master.order(), 6);
            let big = wfc(master.design(), &w, &mut |ty| factory.gdd3(ty), &[])?;
            let filler = factory.gdd3(&GroupType::uniform(6, 3).with_extra(u))?;
            adjoin_and_break(&big, u, 6, &BTreeMap::from([(18, (*filler).clone())]))?
        }
        13 | 14 => {
            let last = if t == 13 { 8 } else { 10 };
            let master = factory.gdd3(&GroupType::uniform(6, 3).with_extra(last))?;
            let w = WeightFn::constant(master.order(), 3);
            let big = wfc(master.design(), &w, &mut |ty| factory.gdd3(ty), &[])?;
            let f18 = factory.gdd3(&GroupType::uniform(6, 3).with_extra(u))?;
            let fl = factory.gdd3(&GroupType::uniform(6, last / 2).with_extra(u))?;
            let fillers = BTreeMap::from([(18, (*f18).clone()), (3 * last, (*fl).clone())]);
            adjoin_and_break(&big, u, 6, &fillers)?
        }
        12 | 15 | 16 => {
            let s = match t {
                12 => projective_plane_3()?,
                15 => extend_affine(4, 0, false)?,
                _ => extend_affine(4, 1, false)?,
            };
            let master = GroupedDesign::singletons(s);
            let mut w = WeightFn::constant(t + 1, 6);
            w.set(t as Point + 1, u);
            wfc(&master, &w, &mut |ty| factory.gdd3(ty), &[])?
        }
        _ => {
            return Err(Error::NotAvailable(format!(
                "type 6^{t} {u}^1: recipes cover 3 <= t <= 16"
            )))
        }
    };
    expect_type(d, &want)
}

/// A verified minimum `(n,3,2)`-covering with an alternating hamiltonian
/// cycle (colorful for `n ≥ 6`), built with a fresh factory.
pub fn build_covering(n: usize, seed: u64) -> Result<CahDesign> {
    let mut f = Factory::new(seed);
    f.covering(n).map(|d| (*d).clone())
}
