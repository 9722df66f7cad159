//! Subcommand implementations. Each returns `Ok(true)` on success and
//! `Ok(false)` when a verification or search fails.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use ucover::catalog::{self, check, Cache, Fixture, FixtureKind, Provenance, REPAIR_SEED};
use ucover::construct::Factory;
use ucover::radius::{self, RadiusSequence, SearchOutcome, SearchParams, TableRow};
use ucover::{from_cah, verify_shift_ucycle, ShiftUcycle, VerificationReport};

use crate::{
    BuildArgs, CatalogAction, CatalogArgs, Command, Emit, Kind, OracleCommand, SearchArgs,
    TableArgs, VerifyArgs,
};

/// An invalid flag combination or unreadable input.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    let usage = e.chain().any(|c| {
        c.is::<Usage>()
            || c.is::<io::Error>()
            || matches!(
                c.downcast_ref::<ucover::Error>(),
                Some(
                    ucover::Error::Domain(_)
                        | ucover::Error::Parse { .. }
                        | ucover::Error::Io { .. }
                )
            )
    });
    if usage {
        2
    } else {
        1
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Build(a) => build(a),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Oracle {
            which: OracleCommand::F2 { n, max_len, cap },
        } => oracle_f2(n, max_len, cap),
        Command::Table(a) => table(a),
        Command::Catalog(a) => catalog_cmd(a),
    }
}

/// Covering, ucycle and radius sequence for order `n`, each verified.
struct Built {
    fixture: Fixture,
    ucycle: ShiftUcycle,
    radius: RadiusSequence,
}

fn build_all(factory: &mut Factory, n: usize) -> Result<Built> {
    let d = factory.covering(n)?;
    let fixture = d.to_fixture(FixtureKind::Covering, Provenance::Constructed);
    let report = check(&fixture);
    anyhow::ensure!(
        report.is_valid(),
        "built covering failed verification: {report}"
    );
    let ucycle = from_cah(d.system(), d.cycle())?;
    let report = verify_shift_ucycle(&ucycle, d.system());
    anyhow::ensure!(
        report.is_valid(),
        "built ucycle failed verification: {report}"
    );
    let radius = radius::from_ucycle(&ucycle)?;
    Ok(Built {
        fixture,
        ucycle,
        radius,
    })
}

fn build(a: BuildArgs) -> Result<bool> {
    if a.n < 3 {
        return Err(usage(format!("--n must be at least 3, got {}", a.n)));
    }
    let mut factory = Factory::new(a.seed);
    let built = build_all(&mut factory, a.n)?;
    let body = match a.emit {
        Emit::Covering => built.fixture.to_text(),
        Emit::Ucycle => format!("{}\n", built.ucycle),
        Emit::Radius => format!("{}\n", built.radius),
    };
    let text = format!("# seed={}\n{body}", a.seed);
    match &a.out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            println!("# seed={}", a.seed);
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(true)
}

fn print_report(r: &VerificationReport) -> bool {
    println!("{r}");
    r.is_valid()
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let text = read(&a.file)?;
    if a.design.is_some() && a.kind != Kind::Ucycle {
        return Err(usage("--design applies only to --kind ucycle"));
    }
    match a.kind {
        Kind::Covering | Kind::Pbd | Kind::Gdd => {
            let f = Fixture::load(&text)?;
            let fits = match a.kind {
                Kind::Covering => f.kind == FixtureKind::Covering,
                Kind::Pbd => matches!(f.kind, FixtureKind::Pbd | FixtureKind::Sts),
                _ => f.kind.is_gdd(),
            };
            if !fits {
                return Err(usage(format!("file holds a {} fixture", f.kind.as_str())));
            }
            Ok(print_report(&check(&f)))
        }
        Kind::Ucycle => {
            let u: ShiftUcycle = text.parse()?;
            let report = match &a.design {
                Some(path) => {
                    let f = Fixture::load(&read(path)?)?;
                    verify_shift_ucycle(&u, &f.system()?)
                }
                None => {
                    let blocks = ucover::blocks_of(&u)?;
                    let s = ucover::SetSystem::new(u.order(), blocks)?;
                    let mut r = verify_shift_ucycle(&u, &s);
                    r.merge(ucover::design::verify_covering(&s));
                    r
                }
            };
            Ok(print_report(&report))
        }
        Kind::Radius => {
            let s: RadiusSequence = text.parse()?;
            let report = radius::verify_radius(&s);
            println!("length: {}, defect: {}", s.len(), radius::defect(&s));
            Ok(print_report(&report))
        }
    }
}

fn search(a: SearchArgs) -> Result<bool> {
    if !(a.time_limit.is_finite() && a.time_limit > 0.0) {
        return Err(usage("--time-limit must be positive"));
    }
    let params = SearchParams {
        seed: a.seed,
        max_iterations: a.max_iterations,
        stall_limit: a.stall,
        restarts: a.restarts,
        time_limit: Some(Duration::from_secs_f64(a.time_limit)),
        threads: a.threads,
    };
    let out = radius::hillclimb(a.n, a.len, a.k, &params)?;
    let stats = out.stats();
    println!("# seed={}", a.seed);
    eprintln!(
        "iterations: {}, restarts: {}, best defect: {}, elapsed: {:.3}s",
        stats.iterations,
        stats.restarts,
        stats.best_defect,
        stats.elapsed.as_secs_f64()
    );
    match &out {
        SearchOutcome::Found { seq, stats } => {
            if let Some(w) = stats.winning_seed {
                eprintln!("winning seed: {w}");
            }
            println!("{seq}");
            Ok(true)
        }
        SearchOutcome::Failed { stats, .. } => {
            println!("no sequence found: best defect {}", stats.best_defect);
            Ok(false)
        }
    }
}

fn oracle_f2(n: usize, max_len: Option<usize>, cap: usize) -> Result<bool> {
    if n < 2 {
        return Err(usage(format!("--n must be at least 2, got {n}")));
    }
    let max_len = max_len.unwrap_or(radius::bound_f1(n)?);
    match radius::exhaustive_f2(n, max_len, cap) {
        Ok(Some(v)) => {
            println!("f2({n}) = {v}");
            Ok(true)
        }
        Ok(None) => {
            println!("f2({n}) > {max_len}: unresolved");
            Ok(false)
        }
        Err(ucover::Error::Refused(msg)) => Err(usage(msg)),
        Err(e) => Err(e.into()),
    }
}

fn table(a: TableArgs) -> Result<bool> {
    if a.from < 3 || a.from > a.to {
        return Err(usage(format!(
            "need 3 <= --from <= --to, got {}..{}",
            a.from, a.to
        )));
    }
    let mut factory = Factory::new(a.seed);
    let mut achieve = |n: usize| -> ucover::Result<usize> {
        let d = factory.covering(n)?;
        let r = radius::from_ucycle(&from_cah(d.system(), d.cycle())?)?;
        Ok(r.len())
    };
    let rows = radius::table(
        a.from,
        a.to,
        if a.run_pipeline {
            Some(&mut achieve)
        } else {
            None
        },
    )?;
    let ok = rows
        .iter()
        .all(|r| r.achieved.is_none_or(|v| v == r.covering));
    if a.csv {
        write_csv(&rows, a.run_pipeline)?;
    } else {
        write_text(&rows, a.run_pipeline);
    }
    Ok(ok)
}

fn cells(r: &TableRow, pipeline: bool) -> Vec<String> {
    let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
    let mut c = vec![
        r.n.to_string(),
        r.lower.to_string(),
        r.covering.to_string(),
        r.gilkerson.to_string(),
        opt(r.reference),
    ];
    if pipeline {
        c.push(opt(r.achieved));
    }
    c
}

fn header(pipeline: bool) -> Vec<&'static str> {
    let mut h = vec!["n", "lower", "covering", "n2/3+n", "nt_construction"];
    if pipeline {
        h.push("achieved");
    }
    h
}

fn write_csv(rows: &[TableRow], pipeline: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(io::stdout());
    w.write_record(header(pipeline))?;
    for r in rows {
        w.write_record(cells(r, pipeline))?;
    }
    w.flush()?;
    Ok(())
}

fn write_text(rows: &[TableRow], pipeline: bool) {
    let head: Vec<String> = header(pipeline).into_iter().map(String::from).collect();
    let body: Vec<Vec<String>> = rows.iter().map(|r| cells(r, pipeline)).collect();
    let widths: Vec<usize> = (0..head.len())
        .map(|i| {
            body.iter()
                .chain([&head])
                .map(|c| c[i].len())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for row in [&head].into_iter().chain(&body) {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", line.join("  "));
    }
}

fn catalog_cmd(a: CatalogArgs) -> Result<bool> {
    let cache = a.cache.map(Cache::new).unwrap_or_else(Cache::from_env);
    match a.action {
        CatalogAction::List => {
            for key in catalog::bundled_keys() {
                let f = catalog::bundled(key, false).expect("bundled key");
                println!(
                    "{key}\tbundled\t{}\tn={}\tblocks={}",
                    f.provenance.as_str(),
                    f.n,
                    f.blocks.len()
                );
            }
            for key in cache.keys()? {
                println!("{key}\tcache\t{}", cache.dir().display());
            }
            Ok(true)
        }
        CatalogAction::Check { raw } => {
            let mut ok = true;
            let mut show = |key: &str, f: &Fixture| {
                let r = check(f);
                if r.is_valid() {
                    println!("{key}: ok");
                } else {
                    ok = false;
                    let kinds: Vec<String> =
                        r.violations.iter().map(|v| v.kind.to_string()).collect();
                    println!("{key}: invalid ({})", kinds.join(", "));
                }
            };
            for key in catalog::bundled_keys() {
                show(key, &catalog::bundled(key, raw).expect("bundled key"));
            }
            for key in cache.keys()? {
                if let Some(f) = cache.load(&key)? {
                    show(&format!("cache/{key}"), &f);
                }
            }
            Ok(ok)
        }
        CatalogAction::Repair { out_dir } => {
            if let Some(dir) = &out_dir {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            let mut ok = true;
            for key in catalog::bundled_keys() {
                let f = catalog::bundled(key, true).expect("bundled key");
                if check(&f).is_valid() {
                    continue;
                }
                match catalog::repair(&f, REPAIR_SEED) {
                    Ok(fixed) => {
                        let note = fixed.comments.iter().find(|c| c.starts_with("repaired"));
                        println!("{key}: {}", note.map_or("repaired", String::as_str));
                        if let Some(dir) = &out_dir {
                            let path = dir.join(format!("{key}.fix"));
                            fs::write(&path, fixed.to_text())
                                .with_context(|| format!("writing {}", path.display()))?;
                        }
                    }
                    Err(e) => {
                        ok = false;
                        println!("{key}: not repairable: {e}");
                    }
                }
            }
            println!("seed={REPAIR_SEED}");
            Ok(ok)
        }
    }
}
