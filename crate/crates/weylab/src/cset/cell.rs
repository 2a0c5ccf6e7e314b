//! The four canonical cell kinds and their well-formedness checks.

use std::collections::BTreeSet;
use std::fmt;

use num::rational::BigRational;
use num::{Signed, Zero};

use super::complex::{rat_str, ExactComplex};
use super::CsetError;

/// A canonical sequence tail {limit + rate/n : n ≥ n0, n ∉ excluded}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SeqTail {
    pub limit: ExactComplex,
    pub rate: ExactComplex,
    pub n0: u64,
    pub excluded: BTreeSet<u64>,
}

impl SeqTail {
    pub fn new(limit: ExactComplex, rate: ExactComplex, n0: u64) -> Self {
        SeqTail {
            limit,
            rate,
            n0,
            excluded: BTreeSet::new(),
        }
    }

    pub fn member(&self, n: u64) -> ExactComplex {
        ExactComplex::seq_member(&self.limit, &self.rate, n)
    }

    pub fn contains(&self, p: &ExactComplex) -> bool {
        match ExactComplex::solve_seq_index(&self.limit, &self.rate, p) {
            Some(n) => n >= self.n0 && !self.excluded.contains(&n),
            None => false,
        }
    }

    pub fn validate(&self) -> Result<(), CsetError> {
        if self.rate.is_zero() {
            return Err(CsetError::MalformedCell("sequence rate must be nonzero".into()));
        }
        if self.n0 == 0 {
            return Err(CsetError::MalformedCell("sequence start must be ≥ 1".into()));
        }
        if self.excluded.iter().any(|&e| e < self.n0) {
            return Err(CsetError::MalformedCell(
                "excluded sequence index below the start".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for SeqTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seq({}+({})/n, n≥{}", self.limit, self.rate, self.n0)?;
        if !self.excluded.is_empty() {
            write!(f, ", excl{:?}", self.excluded)?;
        }
        write!(f, ")")
    }
}

/// A circle minus finitely many of its points.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CircleCell {
    pub center: ExactComplex,
    pub radius: BigRational,
    pub excluded: BTreeSet<ExactComplex>,
}

impl CircleCell {
    pub fn new(center: ExactComplex, radius: BigRational) -> Self {
        CircleCell {
            center,
            radius,
            excluded: BTreeSet::new(),
        }
    }

    pub fn on_circle(&self, p: &ExactComplex) -> bool {
        (p - &self.center).norm_sq() == &self.radius * &self.radius
    }

    pub fn contains(&self, p: &ExactComplex) -> bool {
        self.on_circle(p) && !self.excluded.contains(p)
    }

    pub fn validate(&self) -> Result<(), CsetError> {
        if !self.radius.is_positive() {
            return Err(CsetError::MalformedCell("circle radius must be positive".into()));
        }
        for p in &self.excluded {
            if !self.on_circle(p) {
                return Err(CsetError::MalformedCell(format!(
                    "excluded point {p} does not lie on the circle"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CircleCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "circle(c={}, ρ={}", self.center, rat_str(&self.radius))?;
        if !self.excluded.is_empty() {
            write!(f, ", excl{:?}", self.excluded)?;
        }
        write!(f, ")")
    }
}

/// An open ring {ρ₁ < |z−a| < ρ₂} minus excluded points and sequence tails.
/// The center is never a member: inner radius 0 encodes a punctured disk.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AnnulusCell {
    pub center: ExactComplex,
    pub inner: BigRational,
    pub outer: BigRational,
    pub excluded_points: BTreeSet<ExactComplex>,
    pub excluded_seqs: Vec<SeqTail>,
}

impl AnnulusCell {
    pub fn new(center: ExactComplex, inner: BigRational, outer: BigRational) -> Self {
        AnnulusCell {
            center,
            inner,
            outer,
            excluded_points: BTreeSet::new(),
            excluded_seqs: Vec::new(),
        }
    }

    /// Strictly inside the ring region (before exclusions).
    pub fn in_ring(&self, p: &ExactComplex) -> bool {
        let d = (p - &self.center).norm_sq();
        d > &self.inner * &self.inner && d < &self.outer * &self.outer
    }

    pub fn contains(&self, p: &ExactComplex) -> bool {
        self.in_ring(p)
            && !self.excluded_points.contains(p)
            && !self.excluded_seqs.iter().any(|s| s.contains(p))
    }

    pub fn validate(&self) -> Result<(), CsetError> {
        if self.inner.is_negative() {
            return Err(CsetError::MalformedCell("annulus inner radius must be ≥ 0".into()));
        }
        if self.outer <= self.inner {
            return Err(CsetError::MalformedCell(
                "annulus outer radius must exceed the inner radius".into(),
            ));
        }
        for p in &self.excluded_points {
            if !self.in_ring(p) {
                return Err(CsetError::MalformedCell(format!(
                    "excluded point {p} is not strictly inside the annulus"
                )));
            }
            if self.excluded_seqs.iter().any(|s| s.contains(p)) {
                return Err(CsetError::MalformedCell(format!(
                    "excluded point {p} already removed by an excluded sequence"
                )));
            }
        }
        let mut limits: Vec<&ExactComplex> = Vec::new();
        for s in &self.excluded_seqs {
            s.validate()?;
            if limits.contains(&&s.limit) {
                return Err(CsetError::MalformedCell(
                    "two excluded sequences share a limit; merge them".into(),
                ));
            }
            limits.push(&s.limit);
            // Every member must lie strictly inside the ring.
            let inside = super::snf::quad::members_in_open_span(
                &s.limit,
                &s.rate,
                &self.center,
                &self.inner,
                &self.outer,
            )?;
            let members = super::intset::IntSet::tail(s.n0, &s.excluded);
            if !members.minus(&inside).is_empty() {
                return Err(CsetError::MalformedCell(
                    "excluded sequence is not fully inside the annulus".into(),
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AnnulusCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "annulus(c={}, {}<|z|<{}",
            self.center,
            rat_str(&self.inner),
            rat_str(&self.outer)
        )?;
        if !self.excluded_points.is_empty() {
            write!(f, ", exclPts{:?}", self.excluded_points)?;
        }
        if !self.excluded_seqs.is_empty() {
            write!(f, ", exclSeqs{:?}", self.excluded_seqs)?;
        }
        write!(f, ")")
    }
}

/// One canonical piece of a representable subset of ℂ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cell {
    Point(ExactComplex),
    Seq(SeqTail),
    Circle(CircleCell),
    Annulus(AnnulusCell),
}

impl Cell {
    pub fn point(p: ExactComplex) -> Cell {
        Cell::Point(p)
    }

    pub fn contains(&self, p: &ExactComplex) -> bool {
        match self {
            Cell::Point(q) => q == p,
            Cell::Seq(s) => s.contains(p),
            Cell::Circle(c) => c.contains(p),
            Cell::Annulus(a) => a.contains(p),
        }
    }

    pub fn validate(&self) -> Result<(), CsetError> {
        match self {
            Cell::Point(_) => Ok(()),
            Cell::Seq(s) => s.validate(),
            Cell::Circle(c) => c.validate(),
            Cell::Annulus(a) => a.validate(),
        }
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Point(p) => write!(f, "point({p})"),
            Cell::Seq(s) => write!(f, "{s:?}"),
            Cell::Circle(c) => write!(f, "{c:?}"),
            Cell::Annulus(a) => write!(f, "{a:?}"),
        }
    }
}
