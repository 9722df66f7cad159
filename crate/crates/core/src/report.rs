//! Verification reports shared by every verifier in the crate.

use std::fmt;

use crate::design::{GroupType, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    UncoveredPair,
    OverCoveredPair,
    BadUniformity,
    BadGroupMeet,
    DuplicateBlock,
    OutOfRange,
    WrongSize,
    /// A join color that is not in both incident blocks.
    BadJoin,
    /// Two adjacent cycle edges with the same color.
    NotAlternating,
    NotHamiltonian,
    NotColorful,
    MalformedWindow,
    /// A host block that no window produces.
    MissingBlock,
    /// A window that is not a host block.
    ExtraBlock,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::UncoveredPair => "uncovered-pair",
            ViolationKind::OverCoveredPair => "over-covered-pair",
            ViolationKind::BadUniformity => "bad-uniformity",
            ViolationKind::BadGroupMeet => "bad-group-meet",
            ViolationKind::DuplicateBlock => "duplicate-block",
            ViolationKind::OutOfRange => "out-of-range",
            ViolationKind::WrongSize => "wrong-size",
            ViolationKind::BadJoin => "bad-join",
            ViolationKind::NotAlternating => "not-alternating",
            ViolationKind::NotHamiltonian => "not-hamiltonian",
            ViolationKind::NotColorful => "not-colorful",
            ViolationKind::MalformedWindow => "malformed-window",
            ViolationKind::MissingBlock => "missing-block",
            ViolationKind::ExtraBlock => "extra-block",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
    /// Points involved, if any.
    pub points: Vec<Point>,
    /// Block (or window / position) indices involved, if any.
    pub blocks: Vec<usize>,
}

impl Violation {
    pub fn new(kind: ViolationKind, detail: impl Into<String>) -> Self {
        Violation {
            kind,
            detail: detail.into(),
            points: Vec::new(),
            blocks: Vec::new(),
        }
    }

    pub fn with_points(mut self, points: impl IntoIterator<Item = Point>) -> Self {
        self.points = points.into_iter().collect();
        self
    }

    pub fn with_blocks(mut self, blocks: impl IntoIterator<Item = usize>) -> Self {
        self.blocks = blocks.into_iter().collect();
        self
    }
}

/// Outcome of a verifier. The report is valid exactly when it carries no
/// violations; the optional facts are filled in by the verifiers that
/// compute them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
    /// For coverings: whether the block count equals the covering number.
    pub minimum: Option<bool>,
    /// For GDD checks: the group type that was verified.
    pub group_type: Option<GroupType>,
    /// For cycle checks: whether every point occurs as a join color.
    pub colorful: Option<bool>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, violation: Violation) {
        self.violations.push(violation);
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    /// Appends the violations of `other` and keeps any facts it carries.
    pub fn merge(&mut self, other: VerificationReport) {
        self.violations.extend(other.violations);
        self.minimum = other.minimum.or(self.minimum);
        self.group_type = other.group_type.or(self.group_type.take());
        self.colorful = other.colorful.or(self.colorful);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "valid: {}", self.is_valid())?;
        if let Some(m) = self.minimum {
            write!(f, ", minimum: {m}")?;
        }
        if let Some(t) = &self.group_type {
            write!(f, ", type: {t}")?;
        }
        if let Some(c) = self.colorful {
            write!(f, ", colorful: {c}")?;
        }
        for v in &self.violations {
            write!(f, "\n  {}: {}", v.kind, v.detail)?;
        }
        Ok(())
    }
}
