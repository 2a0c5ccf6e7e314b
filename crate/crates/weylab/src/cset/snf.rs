//! Semantic normal form for representable subsets of ℂ.
//!
//! A representable set is held as three layers that interact only at
//! finitely many computable points:
//!
//!   * disk families — per center, a radial set of circles/rings, with
//!     point, circle-point and sequence holes;
//!   * sequence families — per limit, one rate and an infinite member set;
//!   * free points.
//!
//! Canonical constraints: one rate per limit across the whole set, disk
//! families with distinct centers have disjoint closed hulls, members
//! covered by a region never appear as standalone cells, and radial spans
//! are maximal. Under these constraints the emitted cell list is a unique
//! representation of the set, so structural equality is set equality.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::BigRational;
use num::{Signed, Zero};

use super::cell::{AnnulusCell, Cell, CircleCell, SeqTail};
use super::complex::ExactComplex;
use super::intset::IntSet;
use super::radial::{RSpan, RadialSet, RadiusClass};
use super::{CsetError, SetOp};

/// Quadratic classification of sequence members against concentric geometry.
pub(crate) mod quad {
    use super::*;
    use num::bigint::BigInt;
    use num::One;

    /// Comparison relations against zero.
    #[derive(Clone, Copy, Debug)]
    pub enum Rel {
        Lt,
        Eq,
        Gt,
        Le,
        Ge,
    }

    impl Rel {
        fn test(self, v: &BigRational) -> bool {
            match self {
                Rel::Lt => v.is_negative(),
                Rel::Eq => v.is_zero(),
                Rel::Gt => v.is_positive(),
                Rel::Le => !v.is_positive(),
                Rel::Ge => !v.is_negative(),
            }
        }
    }

    const SCAN_CAP: u64 = 4_000_000;

    /// {n ≥ 1 : a·n² + b·n + e REL 0} as an eventually-constant set.
    /// Sign changes of a rational quadratic happen below a Cauchy-style
    /// bound on its roots; beyond it the sign is the leading coefficient's.
    pub fn sign_set(
        a: &BigRational,
        b: &BigRational,
        e: &BigRational,
        rel: Rel,
    ) -> Result<IntSet, CsetError> {
        if a.is_zero() && b.is_zero() {
            if e.is_zero() {
                return Ok(match rel {
                    Rel::Lt | Rel::Gt => IntSet::empty(),
                    _ => IntSet::all(),
                });
            }
            return Ok(if rel.test(e) { IntSet::all() } else { IntSet::empty() });
        }

        let (eventual_value, bound): (BigRational, BigRational) = if !a.is_zero() {
            let m = if b.abs() > e.abs() { b.abs() } else { e.abs() };
            (a.clone(), BigRational::one() + m / a.abs())
        } else {
            (b.clone(), BigRational::one() + e.abs() / b.abs())
        };
        let eventual = rel.test(&eventual_value);

        let n_max = bound.ceil().to_integer();
        let n_max: u64 = match super::super::complex::big_to_u64(&n_max) {
            Some(v) if v <= SCAN_CAP => v,
            _ => {
                return Err(CsetError::BoundOverflow(format!(
                    "quadratic stability bound {n_max} exceeds scan cap"
                )))
            }
        };

        let mut exceptions = BTreeSet::new();
        for n in 1..=n_max {
            let nr = BigRational::from_integer(BigInt::from(n));
            let v = a * &nr * &nr + b * &nr + e;
            if rel.test(&v) != eventual {
                exceptions.insert(n);
            }
        }
        Ok(IntSet { eventually: eventual, exceptions })
    }

    /// {n : |limit + rate/n − center|² REL t}. Multiplying the squared
    /// distance by n² > 0 gives the quadratic (|w|²−t)n² + 2⟨w,r⟩n + |r|²
    /// with w = limit − center.
    pub fn dist_sq_set(
        limit: &ExactComplex,
        rate: &ExactComplex,
        center: &ExactComplex,
        t: &BigRational,
        rel: Rel,
    ) -> Result<IntSet, CsetError> {
        let w = limit - center;
        let a = w.norm_sq() - t;
        let b = BigRational::from_integer(2.into()) * w.dot(rate);
        let e = rate.norm_sq();
        sign_set(&a, &b, &e, rel)
    }

    /// Members strictly between radii lo and hi (squared comparisons).
    pub fn members_in_open_span(
        limit: &ExactComplex,
        rate: &ExactComplex,
        center: &ExactComplex,
        lo: &BigRational,
        hi: &BigRational,
    ) -> Result<IntSet, CsetError> {
        let lo_sq = lo * lo;
        let hi_sq = hi * hi;
        let above = dist_sq_set(limit, rate, center, &lo_sq, Rel::Gt)?;
        let below = dist_sq_set(limit, rate, center, &hi_sq, Rel::Lt)?;
        Ok(above.and(&below))
    }

    /// Members exactly on the circle of the given radius.
    pub fn members_on_circle(
        limit: &ExactComplex,
        rate: &ExactComplex,
        center: &ExactComplex,
        radius: &BigRational,
    ) -> Result<IntSet, CsetError> {
        let r_sq = radius * radius;
        dist_sq_set(limit, rate, center, &r_sq, Rel::Eq)
    }

    /// Coincident member pairs of two families with distinct limits:
    /// (n, m) with ℓ₁ + r₁/n = ℓ₂ + r₂/m. Any coincidence point is within
    /// distance |r|/n of its limit, and the two limits are |d| apart, so
    /// n ≤ 2|r₁|/|d| or m ≤ 2|r₂|/|d|; both sides are enumerated.
    pub fn coincidences(
        l1: &ExactComplex,
        r1: &ExactComplex,
        l2: &ExactComplex,
        r2: &ExactComplex,
    ) -> Result<Vec<(u64, u64)>, CsetError> {
        let d_sq = (l1 - l2).norm_sq();
        assert!(!d_sq.is_zero(), "coincidences requires distinct limits");
        let four = BigRational::from_integer(4.into());

        let mut out = Vec::new();
        let mut push_unique = |pair: (u64, u64), out: &mut Vec<(u64, u64)>| {
            if !out.contains(&pair) {
                out.push(pair);
            }
        };

        let enumerate = |limit: &ExactComplex,
                         rate: &ExactComplex,
                         other_l: &ExactComplex,
                         other_r: &ExactComplex,
                         out: &mut Vec<(u64, u64)>,
                         swap: bool|
         -> Result<(), CsetError> {
            let cap = &four * rate.norm_sq();
            let mut n: u64 = 1;
            loop {
                let n_sq = BigRational::from_integer(num::bigint::BigInt::from(n) * num::bigint::BigInt::from(n));
                if n_sq * &d_sq > cap {
                    break;
                }
                if n > SCAN_CAP {
                    return Err(CsetError::BoundOverflow(
                        "coincidence enumeration bound exceeds scan cap".into(),
                    ));
                }
                let z = ExactComplex::seq_member(limit, rate, n);
                if let Some(m) = ExactComplex::solve_seq_index(other_l, other_r, &z) {
                    let pair = if swap { (m, n) } else { (n, m) };
                    push_unique(pair, out);
                }
                n += 1;
            }
            Ok(())
        };

        enumerate(l1, r1, l2, r2, &mut out, false)?;
        enumerate(l2, r2, l1, r1, &mut out, true)?;
        out.sort();
        Ok(out)
    }
}

/// One sequence family: a rate shared by every tail at this limit, plus the
/// member index set (infinite for top-level families, infinite for hole
/// families by construction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TailFam {
    pub rate: ExactComplex,
    pub members: IntSet,
}

/// All concentric structure at one center.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct DiskFamily {
    pub radial: RadialSet,
    /// Excluded points on closed circle radii, keyed by radius.
    pub circle_excl: BTreeMap<BigRational, BTreeSet<ExactComplex>>,
    /// Excluded points strictly inside open ring parts.
    pub hole_points: BTreeSet<ExactComplex>,
    /// Excluded sequences with every member strictly inside open ring parts.
    pub hole_seqs: BTreeMap<ExactComplex, TailFam>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Snf {
    pub disks: BTreeMap<ExactComplex, DiskFamily>,
    pub tails: BTreeMap<ExactComplex, TailFam>,
    pub points: BTreeSet<ExactComplex>,
}

/// Location of a point relative to the disk layer.
enum DiskLoc {
    OnCircle(ExactComplex, BigRational),
    OpenInterior(ExactComplex),
    Outside,
}

impl Snf {
    pub fn empty() -> Self {
        Snf::default()
    }

    pub fn singleton(cell: &Cell) -> Snf {
        let mut s = Snf::empty();
        match cell {
            Cell::Point(p) => {
                s.points.insert(p.clone());
            }
            Cell::Seq(t) => {
                s.tails.insert(
                    t.limit.clone(),
                    TailFam {
                        rate: t.rate.clone(),
                        members: IntSet::tail(t.n0, &t.excluded),
                    },
                );
            }
            Cell::Circle(c) => {
                let mut fam = DiskFamily {
                    radial: RadialSet::single(RSpan::circle(c.radius.clone())),
                    ..Default::default()
                };
                if !c.excluded.is_empty() {
                    fam.circle_excl.insert(c.radius.clone(), c.excluded.clone());
                }
                s.disks.insert(c.center.clone(), fam);
            }
            Cell::Annulus(a) => {
                let mut fam = DiskFamily {
                    radial: RadialSet::single(RSpan::open(a.inner.clone(), a.outer.clone())),
                    hole_points: a.excluded_points.clone(),
                    ..Default::default()
                };
                for t in &a.excluded_seqs {
                    fam.hole_seqs.insert(
                        t.limit.clone(),
                        TailFam {
                            rate: t.rate.clone(),
                            members: IntSet::tail(t.n0, &t.excluded),
                        },
                    );
                }
                s.disks.insert(a.center.clone(), fam);
            }
        }
        s
    }

    /// Rebuild from the canonical cell list of a normalized set. Skips the
    /// compatibility checks and semantic reclassification that raw input
    /// needs; sound only for canonical input.
    pub fn from_canonical(cells: &[Cell]) -> Snf {
        let mut s = Snf::empty();
        for cell in cells {
            match cell {
                Cell::Point(p) => {
                    s.points.insert(p.clone());
                }
                Cell::Seq(t) => {
                    let members = IntSet::tail(t.n0, &t.excluded);
                    s.tails
                        .entry(t.limit.clone())
                        .and_modify(|tf| tf.members = tf.members.or(&members))
                        .or_insert(TailFam { rate: t.rate.clone(), members });
                }
                Cell::Circle(c) => {
                    let fam = s.disks.entry(c.center.clone()).or_default();
                    fam.radial = fam.radial.union(&RadialSet::single(RSpan::circle(c.radius.clone())));
                    if !c.excluded.is_empty() {
                        fam.circle_excl
                            .entry(c.radius.clone())
                            .or_default()
                            .extend(c.excluded.iter().cloned());
                    }
                }
                Cell::Annulus(a) => {
                    let fam = s.disks.entry(a.center.clone()).or_default();
                    fam.radial = fam
                        .radial
                        .union(&RadialSet::single(RSpan::open(a.inner.clone(), a.outer.clone())));
                    fam.hole_points.extend(a.excluded_points.iter().cloned());
                    for t in &a.excluded_seqs {
                        let members = IntSet::tail(t.n0, &t.excluded);
                        fam.hole_seqs
                            .entry(t.limit.clone())
                            .and_modify(|tf| tf.members = tf.members.or(&members))
                            .or_insert(TailFam { rate: t.rate.clone(), members });
                    }
                }
            }
        }
        s
    }

    /// limit → rate over every tail-like object in the set.
    fn rate_map(&self) -> BTreeMap<ExactComplex, ExactComplex> {
        let mut m = BTreeMap::new();
        for (l, tf) in &self.tails {
            m.insert(l.clone(), tf.rate.clone());
        }
        for fam in self.disks.values() {
            for (l, tf) in &fam.hole_seqs {
                m.insert(l.clone(), tf.rate.clone());
            }
        }
        m
    }

    fn locate(&self, p: &ExactComplex) -> DiskLoc {
        for (center, fam) in &self.disks {
            let d_sq = (p - center).norm_sq();
            match fam.radial.classify_sq(&d_sq) {
                RadiusClass::OnCircle => {
                    // Recover the radius exactly: it is the unique closed
                    // radius whose square equals d_sq.
                    for rho in fam.radial.circle_radii() {
                        if &rho * &rho == d_sq {
                            return DiskLoc::OnCircle(center.clone(), rho);
                        }
                    }
                    unreachable!("classify_sq said OnCircle but no radius matched");
                }
                RadiusClass::OpenInterior => return DiskLoc::OpenInterior(center.clone()),
                RadiusClass::Outside => {}
            }
        }
        DiskLoc::Outside
    }

    pub fn member(&self, p: &ExactComplex) -> bool {
        if self.points.contains(p) {
            return true;
        }
        match self.locate(p) {
            DiskLoc::OnCircle(center, rho) => {
                let fam = &self.disks[&center];
                return fam
                    .circle_excl
                    .get(&rho)
                    .map_or(true, |excl| !excl.contains(p));
            }
            DiskLoc::OpenInterior(center) => {
                let fam = &self.disks[&center];
                if fam.hole_points.contains(p) {
                    return false;
                }
                for (l, tf) in &fam.hole_seqs {
                    if let Some(n) = ExactComplex::solve_seq_index(l, &tf.rate, p) {
                        if tf.members.contains(n) {
                            return false;
                        }
                    }
                }
                return true;
            }
            DiskLoc::Outside => {}
        }
        for (l, tf) in &self.tails {
            if let Some(n) = ExactComplex::solve_seq_index(l, &tf.rate, p) {
                if tf.members.contains(n) {
                    return true;
                }
            }
        }
        false
    }

    /// Semantic member set of the family (limit, rate): all n ≥ 1 whose
    /// member point belongs to this set, through whatever layer.
    fn sem_members(&self, limit: &ExactComplex, rate: &ExactComplex) -> Result<IntSet, CsetError> {
        let mut acc = IntSet::empty();

        if let Some(tf) = self.tails.get(limit) {
            acc = acc.or(&tf.members);
        }
        for (l2, tf2) in &self.tails {
            if l2 == limit {
                continue;
            }
            let mut hits = BTreeSet::new();
            for (n, m) in quad::coincidences(limit, rate, l2, &tf2.rate)? {
                if tf2.members.contains(m) {
                    hits.insert(n);
                }
            }
            acc = acc.or(&IntSet::finite(hits));
        }
        for p in &self.points {
            if let Some(n) = ExactComplex::solve_seq_index(limit, rate, p) {
                acc = acc.or(&IntSet::finite([n]));
            }
        }

        for (center, fam) in &self.disks {
            let mut reg = IntSet::empty();
            for span in &fam.radial.spans {
                if span.is_point() {
                    reg = reg.or(&quad::members_on_circle(limit, rate, center, &span.lo)?);
                } else {
                    reg = reg.or(&quad::members_in_open_span(limit, rate, center, &span.lo, &span.hi)?);
                    if span.lo_in {
                        reg = reg.or(&quad::members_on_circle(limit, rate, center, &span.lo)?);
                    }
                    if span.hi_in {
                        reg = reg.or(&quad::members_on_circle(limit, rate, center, &span.hi)?);
                    }
                }
            }
            if reg.is_empty() {
                continue;
            }
            let mut excl = IntSet::empty();
            for pts in fam.circle_excl.values() {
                for p in pts {
                    if let Some(n) = ExactComplex::solve_seq_index(limit, rate, p) {
                        excl = excl.or(&IntSet::finite([n]));
                    }
                }
            }
            for p in &fam.hole_points {
                if let Some(n) = ExactComplex::solve_seq_index(limit, rate, p) {
                    excl = excl.or(&IntSet::finite([n]));
                }
            }
            for (l2, tf2) in &fam.hole_seqs {
                if l2 == limit {
                    excl = excl.or(&tf2.members);
                } else {
                    let mut hits = BTreeSet::new();
                    for (n, m) in quad::coincidences(limit, rate, l2, &tf2.rate)? {
                        if tf2.members.contains(m) {
                            hits.insert(n);
                        }
                    }
                    excl = excl.or(&IntSet::finite(hits));
                }
            }
            acc = acc.or(&reg.minus(&excl));
        }

        Ok(acc)
    }

    /// Exceptional points: everywhere membership can deviate from the
    /// region- and family-level bulk behaviour.
    fn candidate_points(&self, out: &mut BTreeSet<ExactComplex>) {
        out.extend(self.points.iter().cloned());
        for (center, fam) in &self.disks {
            out.insert(center.clone());
            for pts in fam.circle_excl.values() {
                out.extend(pts.iter().cloned());
            }
            out.extend(fam.hole_points.iter().cloned());
            for l in fam.hole_seqs.keys() {
                out.insert(l.clone());
            }
        }
        for l in self.tails.keys() {
            out.insert(l.clone());
        }
    }

    /// The maximal closed-hull radius of a disk family (for compatibility).
    fn hull_radius(fam: &DiskFamily) -> Option<&BigRational> {
        fam.radial.max_radius()
    }
}

fn compat_check(a: &Snf, b: &Snf) -> Result<(), CsetError> {
    let ra = a.rate_map();
    let rb = b.rate_map();
    for (l, r) in &ra {
        if let Some(r2) = rb.get(l) {
            if r2 != r {
                return Err(CsetError::SameLimitSequences(l.to_string()));
            }
        }
    }
    for (ca, fa) in &a.disks {
        for (cb, fb) in &b.disks {
            if ca == cb {
                continue;
            }
            let (ra, rb) = match (Snf::hull_radius(fa), Snf::hull_radius(fb)) {
                (Some(x), Some(y)) => (x, y),
                _ => continue,
            };
            let sum = ra + rb;
            if (ca - cb).norm_sq() <= &sum * &sum {
                return Err(CsetError::IncompatibleCells(format!(
                    "disk families at {ca} and {cb} are neither concentric nor \
                     hull-disjoint"
                )));
            }
        }
    }
    Ok(())
}

fn bool_op(kind: SetOp, a: bool, b: bool) -> bool {
    match kind {
        SetOp::Union => a || b,
        SetOp::Intersect => a && b,
        SetOp::Difference => a && !b,
    }
}

/// Exact pointwise set operation in normal form.
pub(crate) fn op(kind: SetOp, a: &Snf, b: &Snf) -> Result<Snf, CsetError> {
    compat_check(a, b)?;

    // Unified rate map; compat_check guarantees agreement on shared limits.
    let mut rates = a.rate_map();
    rates.extend(b.rate_map());

    // Stage 1: region algebra per center.
    let mut out = Snf::empty();
    let mut centers: BTreeSet<ExactComplex> = a.disks.keys().cloned().collect();
    centers.extend(b.disks.keys().cloned());
    for c in centers {
        let empty = RadialSet::empty();
        let ra = a.disks.get(&c).map_or(&empty, |f| &f.radial);
        let rb = b.disks.get(&c).map_or(&empty, |f| &f.radial);
        let r = match kind {
            SetOp::Union => ra.union(rb),
            SetOp::Intersect => ra.intersect(rb),
            SetOp::Difference => ra.difference(rb),
        };
        if !r.is_empty() {
            out.disks.insert(
                c,
                DiskFamily {
                    radial: r,
                    ..Default::default()
                },
            );
        }
    }

    // Stage 2: sequence families, in canonical limit order so coincidence
    // points are claimed deterministically by the earliest family.
    let mut claimed: BTreeMap<ExactComplex, (ExactComplex, IntSet)> = BTreeMap::new();
    for (limit, rate) in &rates {
        let sem_a = a.sem_members(limit, rate)?;
        let sem_b = b.sem_members(limit, rate)?;
        let sem = sem_a.combine(&sem_b, |x, y| bool_op(kind, x, y));

        // Classify members against the result's disk regions.
        let mut covered = IntSet::empty();
        let mut per_center_open: Vec<(ExactComplex, IntSet)> = Vec::new();
        let mut per_circle: Vec<(ExactComplex, BigRational, IntSet)> = Vec::new();
        for (center, fam) in &out.disks {
            let mut open_here = IntSet::empty();
            for span in &fam.radial.spans {
                if !span.is_point() {
                    open_here =
                        open_here.or(&quad::members_in_open_span(limit, rate, center, &span.lo, &span.hi)?);
                }
            }
            for rho in fam.radial.circle_radii() {
                let on = quad::members_on_circle(limit, rate, center, &rho)?;
                if !on.is_empty() {
                    covered = covered.or(&on);
                    per_circle.push((center.clone(), rho, on));
                }
            }
            if !open_here.is_empty() {
                covered = covered.or(&open_here);
                per_center_open.push((center.clone(), open_here));
            }
        }

        // Standalone members: semantic members not covered by the region,
        // minus coincidence points already claimed by an earlier family.
        let mut top = sem.minus(&covered);
        for (l2, (r2, top2)) in &claimed {
            let mut steal = BTreeSet::new();
            for (n, m) in quad::coincidences(limit, rate, l2, r2)? {
                if top2.contains(m) {
                    steal.insert(n);
                }
            }
            top = top.minus(&IntSet::finite(steal));
        }
        if top.is_infinite() {
            out.tails.insert(
                limit.clone(),
                TailFam {
                    rate: rate.clone(),
                    members: top.clone(),
                },
            );
        } else {
            for n in top.members() {
                out.points.insert(ExactComplex::seq_member(limit, rate, n));
            }
        }
        claimed.insert(limit.clone(), (rate.clone(), top));

        // Holes: member points inside the result region that the result set
        // does not contain.
        for (center, open_here) in per_center_open {
            let holes = open_here.minus(&sem);
            if holes.is_empty() {
                continue;
            }
            let fam = out.disks.get_mut(&center).expect("center present");
            if holes.is_infinite() {
                fam.hole_seqs.insert(
                    limit.clone(),
                    TailFam {
                        rate: rate.clone(),
                        members: holes,
                    },
                );
            } else {
                for n in holes.members() {
                    fam.hole_points.insert(ExactComplex::seq_member(limit, rate, n));
                }
            }
        }
        for (center, rho, on) in per_circle {
            let misses = on.minus(&sem);
            if misses.is_empty() {
                continue;
            }
            let fam = out.disks.get_mut(&center).expect("center present");
            let excl = fam.circle_excl.entry(rho).or_default();
            for n in misses.members() {
                excl.insert(ExactComplex::seq_member(limit, rate, n));
            }
        }
    }

    // Stage 3: exceptional points.
    let mut candidates = BTreeSet::new();
    a.candidate_points(&mut candidates);
    b.candidate_points(&mut candidates);
    for p in candidates {
        let family_form = rates
            .iter()
            .any(|(l, r)| ExactComplex::solve_seq_index(l, r, &p).is_some());
        if family_form {
            continue;
        }
        let m = bool_op(kind, a.member(&p), b.member(&p));
        match out.locate(&p) {
            DiskLoc::OnCircle(center, rho) => {
                if !m {
                    out.disks
                        .get_mut(&center)
                        .expect("center present")
                        .circle_excl
                        .entry(rho)
                        .or_default()
                        .insert(p);
                }
            }
            DiskLoc::OpenInterior(center) => {
                if !m {
                    out.disks
                        .get_mut(&center)
                        .expect("center present")
                        .hole_points
                        .insert(p);
                }
            }
            DiskLoc::Outside => {
                if m {
                    out.points.insert(p);
                }
            }
        }
    }

    Ok(out)
}

/// Fold a list of raw (validated) cells into the normal form of their union.
pub(crate) fn union_of_cells(cells: &[Cell]) -> Result<Snf, CsetError> {
    let mut acc = Snf::empty();
    for cell in cells {
        cell.validate()?;
        acc = op(SetOp::Union, &acc, &Snf::singleton(cell))?;
    }
    Ok(acc)
}

/// Canonical cell list of a normal form.
pub(crate) fn emit(s: &Snf) -> Result<Vec<Cell>, CsetError> {
    let mut cells: Vec<Cell> = Vec::new();

    for (center, fam) in &s.disks {
        for span in &fam.radial.spans {
            if span.is_point() {
                cells.push(circle_cell(center, &span.lo, fam));
                continue;
            }
            if span.lo_in {
                cells.push(circle_cell(center, &span.lo, fam));
            }

            let lo_sq = &span.lo * &span.lo;
            let hi_sq = &span.hi * &span.hi;
            let mut excl_points: BTreeSet<ExactComplex> = fam
                .hole_points
                .iter()
                .filter(|p| {
                    let d = (*p - center).norm_sq();
                    d > lo_sq && d < hi_sq
                })
                .cloned()
                .collect();
            let mut excl_seqs: Vec<SeqTail> = Vec::new();
            for (l, tf) in &fam.hole_seqs {
                let in_span = quad::members_in_open_span(l, &tf.rate, center, &span.lo, &span.hi)?;
                let here = tf.members.and(&in_span);
                if here.is_empty() {
                    continue;
                }
                if here.is_infinite() {
                    let (n0, excluded) = here.to_tail().expect("infinite set");
                    excl_seqs.push(SeqTail {
                        limit: l.clone(),
                        rate: tf.rate.clone(),
                        n0,
                        excluded,
                    });
                } else {
                    for n in here.members() {
                        excl_points.insert(ExactComplex::seq_member(l, &tf.rate, n));
                    }
                }
            }
            excl_seqs.sort();
            cells.push(Cell::Annulus(AnnulusCell {
                center: center.clone(),
                inner: span.lo.clone(),
                outer: span.hi.clone(),
                excluded_points: excl_points,
                excluded_seqs: excl_seqs,
            }));

            if span.hi_in {
                cells.push(circle_cell(center, &span.hi, fam));
            }
        }
    }

    for (l, tf) in &s.tails {
        let (n0, excluded) = tf.members.to_tail().expect("top tail families are infinite");
        cells.push(Cell::Seq(SeqTail {
            limit: l.clone(),
            rate: tf.rate.clone(),
            n0,
            excluded,
        }));
    }

    for p in &s.points {
        cells.push(Cell::Point(p.clone()));
    }

    cells.sort();
    Ok(cells)
}

fn circle_cell(center: &ExactComplex, radius: &BigRational, fam: &DiskFamily) -> Cell {
    Cell::Circle(CircleCell {
        center: center.clone(),
        radius: radius.clone(),
        excluded: fam.circle_excl.get(radius).cloned().unwrap_or_default(),
    })
}

/// Topology of a canonical set: isolated members, accumulation members,
/// and the 2-D interior.
pub(crate) fn topology(s: &Snf) -> Result<(Snf, Snf), CsetError> {
    // Closed hulls of the region layer, per center.
    let closure_spans: Vec<(ExactComplex, BigRational, BigRational, bool)> = s
        .disks
        .iter()
        .flat_map(|(c, fam)| {
            fam.radial.spans.iter().map(move |span| {
                (
                    c.clone(),
                    span.lo.clone(),
                    span.hi.clone(),
                    span.lo.is_zero(), // closure reaches the center
                )
            })
        })
        .collect();
    let infinite_limits: BTreeSet<ExactComplex> = s.tails.keys().cloned().collect();

    let in_region_closure = |p: &ExactComplex| -> bool {
        closure_spans.iter().any(|(c, lo, hi, touches_center)| {
            let d = (p - c).norm_sq();
            if d.is_zero() {
                return *touches_center;
            }
            d >= lo * lo && d <= hi * hi
        })
    };

    // Isolated free points.
    let mut iso = Snf::empty();
    for p in &s.points {
        if !in_region_closure(p) && !infinite_limits.contains(p) {
            iso.points.insert(p.clone());
        }
    }

    // Isolated tail members: all but the finitely many members that touch a
    // region closure or another family's limit.
    for (l, tf) in &s.tails {
        let mut acc_hits = IntSet::empty();
        for (c, lo, hi, touches_center) in &closure_spans {
            if !lo.is_zero() {
                acc_hits = acc_hits.or(&quad::members_on_circle(l, &tf.rate, c, lo)?);
            }
            acc_hits = acc_hits.or(&quad::members_on_circle(l, &tf.rate, c, hi)?);
            // Also anything strictly inside the closure (canonically should
            // be empty, but decide rather than assume).
            acc_hits = acc_hits.or(&quad::members_in_open_span(l, &tf.rate, c, lo, hi)?);
            if *touches_center {
                if let Some(n) = ExactComplex::solve_seq_index(l, &tf.rate, c) {
                    acc_hits = acc_hits.or(&IntSet::finite([n]));
                }
            }
        }
        for l2 in &infinite_limits {
            if l2 == l {
                continue;
            }
            if let Some(n) = ExactComplex::solve_seq_index(l, &tf.rate, l2) {
                acc_hits = acc_hits.or(&IntSet::finite([n]));
            }
        }
        let iso_members = tf.members.minus(&acc_hits);
        if iso_members.is_infinite() {
            iso.tails.insert(
                l.clone(),
                TailFam {
                    rate: tf.rate.clone(),
                    members: iso_members,
                },
            );
        } else {
            for n in iso_members.members() {
                iso.points.insert(ExactComplex::seq_member(l, &tf.rate, n));
            }
        }
    }

    // Interior: open ring parts minus holes and minus hole-sequence limits
    // that sit strictly inside, plus centers of member punctured disks.
    let mut interior = Snf::empty();
    for (c, fam) in &s.disks {
        let open = fam.radial.open_parts();
        if open.is_empty() {
            continue;
        }
        let mut hole_points = fam.hole_points.clone();
        for l in fam.hole_seqs.keys() {
            let d = (l - c).norm_sq();
            if open.spans.iter().any(|sp| d > &sp.lo * &sp.lo && d < &sp.hi * &sp.hi) {
                hole_points.insert(l.clone());
            }
        }
        interior.disks.insert(
            c.clone(),
            DiskFamily {
                radial: open,
                circle_excl: BTreeMap::new(),
                hole_points,
                hole_seqs: fam.hole_seqs.clone(),
            },
        );
        let center_in_disk = fam.radial.spans.iter().any(|sp| sp.lo.is_zero());
        let center_breaks = fam.hole_seqs.keys().any(|l| l == c);
        if center_in_disk && s.points.contains(c) && !center_breaks {
            interior.points.insert(c.clone());
        }
    }

    Ok((iso, interior))
}
