use crate::catalog::{CycleClaim, Fixture, FixtureKind};
use crate::cycle::verify_cah;
use crate::design::{covering_number, verify_covering, verify_gdd, verify_pbd};
use crate::error::Error;
use crate::report::{VerificationReport, Violation, ViolationKind};

/// Verifies a fixture's design, minimality for coverings, and its claimed
/// cycle property.
pub fn check(f: &Fixture) -> VerificationReport {
    let mut r = VerificationReport::new();
    if f.blocks.len() != f.marks.len() || f.blocks.len() != f.joins.len() {
        r.push(Violation::new(
            ViolationKind::WrongSize,
            "block, mark and join lists differ in length",
        ));
        return r;
    }
    let design = match f.grouped() {
        Ok(d) => d,
        Err(e) => {
            r.push(Violation::new(ViolationKind::OutOfRange, e.to_string()));
            return r;
        }
    };
    let s = design.system();
    match f.kind {
        FixtureKind::Sts => r.merge(verify_pbd(s, &f.block_sizes())),
        FixtureKind::Pbd => r.merge(verify_pbd(s, &f.block_sizes())),
        FixtureKind::Covering => {
            r.merge(verify_covering(s));
            if let Ok(c) = covering_number(f.n) {
                if s.len() != c {
                    r.push(Violation::new(
                        ViolationKind::WrongSize,
                        format!("{} blocks, covering number is {c}", s.len()),
                    ));
                }
            }
        }
        FixtureKind::Gdd3 | FixtureKind::Gdd4 | FixtureKind::Gdd47 => {
            r.merge(verify_gdd(&design, &f.block_sizes()));
            if let Some(t) = &f.group_type {
                if *t != design.group_type() {
                    r.push(Violation::new(
                        ViolationKind::WrongSize,
                        format!("groups have type {}, header says {t}", design.group_type()),
                    ));
                }
            }
        }
    }
    if f.cycle != CycleClaim::None {
        match f.colored_cycle() {
            Ok(c) => r.merge(verify_cah(s, &c, f.cycle == CycleClaim::Cah)),
            Err(Error::NoJoinAssignment { adjacency }) => r.push(
                Violation::new(
                    ViolationKind::NotAlternating,
                    format!("no alternating joins; adjacency {adjacency} fails"),
                )
                .with_blocks([adjacency]),
            ),
            Err(e) => r.push(Violation::new(ViolationKind::BadJoin, e.to_string())),
        }
    }
    r
}
