//! Exact one-dimensional set algebra over radii in (0, ∞).
//!
//! A concentric family of circles and annuli is fully described by the set of
//! radii it occupies: open intervals for annuli, single closed radii for
//! circles. This module keeps those radius sets in canonical maximal-span
//! form so that the 2-D boolean operations reduce to an interval sweep.

use num::rational::BigRational;
use num::Zero;

/// A maximal connected radius interval. `lo == hi` encodes a single circle
/// radius (both ends closed); otherwise `lo < hi` with independent closures.
/// `lo = 0` is allowed only with `lo_in = false` (a punctured disk); radius 0
/// itself is never part of a radial set — the center is handled as a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSpan {
    pub lo: BigRational,
    pub lo_in: bool,
    pub hi: BigRational,
    pub hi_in: bool,
}

impl RSpan {
    pub fn circle(r: BigRational) -> Self {
        RSpan {
            lo: r.clone(),
            lo_in: true,
            hi: r,
            hi_in: true,
        }
    }

    pub fn open(lo: BigRational, hi: BigRational) -> Self {
        RSpan {
            lo,
            lo_in: false,
            hi,
            hi_in: false,
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        let above = r > &self.lo || (self.lo_in && r == &self.lo);
        let below = r < &self.hi || (self.hi_in && r == &self.hi);
        above && below
    }
}

/// Where a radius sits relative to a radial set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadiusClass {
    /// Exactly on a closed radius: the circle at this radius is in the set.
    OnCircle,
    /// Strictly inside the open part of some span.
    OpenInterior,
    Outside,
}

/// Canonical finite union of disjoint, non-adjacent maximal spans.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RadialSet {
    pub spans: Vec<RSpan>,
}

impl RadialSet {
    pub fn empty() -> Self {
        RadialSet { spans: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn single(span: RSpan) -> Self {
        RadialSet { spans: vec![span] }
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.spans.iter().any(|s| s.contains(r))
    }

    /// Largest radius in the closure; `None` when empty.
    pub fn max_radius(&self) -> Option<&BigRational> {
        self.spans.last().map(|s| &s.hi)
    }

    /// Classify a radius. A closed endpoint (or point span) is `OnCircle`;
    /// strictly between endpoints of a span is `OpenInterior`.
    pub fn classify(&self, r: &BigRational) -> RadiusClass {
        for s in &self.spans {
            if (r == &s.lo && s.lo_in) || (r == &s.hi && s.hi_in) {
                return RadiusClass::OnCircle;
            }
            if r > &s.lo && r < &s.hi {
                return RadiusClass::OpenInterior;
            }
        }
        RadiusClass::Outside
    }

    /// Classify a squared radius against squared endpoints. All radii are
    /// nonnegative, so `r² ⋈ e²` decides `r ⋈ e` exactly.
    pub fn classify_sq(&self, r_sq: &BigRational) -> RadiusClass {
        for s in &self.spans {
            let lo_sq = &s.lo * &s.lo;
            let hi_sq = &s.hi * &s.hi;
            if (*r_sq == lo_sq && s.lo_in) || (*r_sq == hi_sq && s.hi_in) {
                return RadiusClass::OnCircle;
            }
            if *r_sq > lo_sq && *r_sq < hi_sq {
                return RadiusClass::OpenInterior;
            }
        }
        RadiusClass::Outside
    }

    pub fn union(&self, other: &RadialSet) -> RadialSet {
        sweep(self, other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &RadialSet) -> RadialSet {
        sweep(self, other, |a, b| a && b)
    }

    pub fn difference(&self, other: &RadialSet) -> RadialSet {
        sweep(self, other, |a, b| a && !b)
    }

    /// All closed radii (circles) of the set, in order.
    pub fn circle_radii(&self) -> Vec<BigRational> {
        let mut out = Vec::new();
        for s in &self.spans {
            if s.is_point() {
                out.push(s.lo.clone());
            } else {
                if s.lo_in {
                    out.push(s.lo.clone());
                }
                if s.hi_in {
                    out.push(s.hi.clone());
                }
            }
        }
        out
    }

    /// Open interiors of all spans, as a radial set of open spans.
    pub fn open_parts(&self) -> RadialSet {
        let spans = self
            .spans
            .iter()
            .filter(|s| !s.is_point())
            .map(|s| RSpan::open(s.lo.clone(), s.hi.clone()))
            .collect();
        RadialSet { spans }
    }
}

/// Boolean combination via an elementary-piece sweep: every distinct endpoint
/// is a piece, as is each open gap between consecutive endpoints. Membership
/// of each piece is constant for both operands, so the op is evaluated
/// piecewise and maximal spans are rebuilt.
fn sweep(a: &RadialSet, b: &RadialSet, op: impl Fn(bool, bool) -> bool) -> RadialSet {
    let mut endpoints: Vec<BigRational> = Vec::new();
    for s in a.spans.iter().chain(b.spans.iter()) {
        endpoints.push(s.lo.clone());
        endpoints.push(s.hi.clone());
    }
    endpoints.sort();
    endpoints.dedup();
    endpoints.retain(|e| !e.is_zero());

    // Elementary pieces in ascending order: (prev, e), {e}, ... with prev
    // starting at 0 (radius 0 excluded by construction).
    #[derive(Clone)]
    enum Piece {
        Gap(BigRational, BigRational), // open interval (lo, hi)
        At(BigRational),
    }
    let mut pieces = Vec::new();
    let mut prev = BigRational::zero();
    for e in &endpoints {
        if &prev < e {
            pieces.push(Piece::Gap(prev.clone(), e.clone()));
        }
        pieces.push(Piece::At(e.clone()));
        prev = e.clone();
    }

    let mut result: Vec<(BigRational, bool, BigRational, bool)> = Vec::new();
    let two = BigRational::from_integer(2.into());
    for piece in pieces {
        let (keep, lo, lo_in, hi, hi_in) = match piece {
            Piece::Gap(lo, hi) => {
                let mid = (&lo + &hi) / &two;
                (op(a.contains(&mid), b.contains(&mid)), lo, false, hi, false)
            }
            Piece::At(e) => {
                let keep = op(a.contains(&e), b.contains(&e));
                (keep, e.clone(), true, e, true)
            }
        };
        if !keep {
            continue;
        }
        // Merge with previous piece when contiguous: previous hi equals this
        // lo and at least one side includes the shared endpoint.
        if let Some(last) = result.last_mut() {
            if last.2 == lo && (last.3 || lo_in) {
                last.2 = hi;
                last.3 = hi_in;
                continue;
            }
        }
        result.push((lo, lo_in, hi, hi_in));
    }

    RadialSet {
        spans: result
            .into_iter()
            .map(|(lo, lo_in, hi, hi_in)| RSpan { lo, lo_in, hi, hi_in })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::complex::rat;

    fn open(l: i64, h: i64) -> RSpan {
        RSpan::open(rat(l, 1), rat(h, 1))
    }

    #[test]
    fn union_merges_adjacent_pieces() {
        // (0,1) ∪ {1} ∪ (1,2) = (0,2)
        let a = RadialSet {
            spans: vec![open(0, 1), open(1, 2)],
        };
        let b = RadialSet::single(RSpan::circle(rat(1, 1)));
        let u = a.union(&b);
        assert_eq!(u.spans.len(), 1);
        assert_eq!(u.spans[0], RSpan::open(rat(0, 1), rat(2, 1)));
    }

    #[test]
    fn difference_exposes_boundary() {
        // (0,2) \ (0,1) = [1,2)
        let a = RadialSet::single(open(0, 2));
        let b = RadialSet::single(open(0, 1));
        let d = a.difference(&b);
        assert_eq!(
            d.spans,
            vec![RSpan {
                lo: rat(1, 1),
                lo_in: true,
                hi: rat(2, 1),
                hi_in: false
            }]
        );
        assert_eq!(d.classify(&rat(1, 1)), RadiusClass::OnCircle);
        assert_eq!(d.classify(&rat(3, 2)), RadiusClass::OpenInterior);
        assert_eq!(d.classify(&rat(2, 1)), RadiusClass::Outside);
    }

    #[test]
    fn intersect_point_and_interval() {
        let a = RadialSet::single(RSpan::circle(rat(1, 1)));
        let b = RadialSet::single(open(0, 2));
        assert_eq!(a.intersect(&b), a);
        let c = RadialSet::single(open(1, 2));
        assert!(a.intersect(&c).is_empty());
    }

    #[test]
    fn classify_squared() {
        let a = RadialSet::single(open(0, 1));
        assert_eq!(a.classify_sq(&rat(1, 2)), RadiusClass::OpenInterior);
        assert_eq!(a.classify_sq(&rat(1, 1)), RadiusClass::Outside);
        assert_eq!(a.classify_sq(&rat(0, 1)), RadiusClass::Outside);
    }
}
