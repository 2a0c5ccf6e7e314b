//! Finite/cofinite subsets of the sequence index domain {1, 2, 3, …}.
//!
//! Every set that arises from intersecting a canonical sequence family
//! `c + r/n` with points, circles and annuli is either finite or cofinite,
//! so exceptions-plus-eventual-value is a complete representation.

use std::collections::BTreeSet;

/// A subset of {n ≥ 1} that is eventually constant: `n` is a member iff
/// `eventually`, flipped for the finitely many `exceptions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSet {
    pub eventually: bool,
    pub exceptions: BTreeSet<u64>,
}

impl IntSet {
    pub fn empty() -> Self {
        IntSet {
            eventually: false,
            exceptions: BTreeSet::new(),
        }
    }

    pub fn all() -> Self {
        IntSet {
            eventually: true,
            exceptions: BTreeSet::new(),
        }
    }

    pub fn finite(members: impl IntoIterator<Item = u64>) -> Self {
        IntSet {
            eventually: false,
            exceptions: members.into_iter().filter(|&n| n >= 1).collect(),
        }
    }

    /// {n : n ≥ n0} minus exclusions.
    pub fn tail(n0: u64, excluded: &BTreeSet<u64>) -> Self {
        let mut exceptions: BTreeSet<u64> = (1..n0).collect();
        for &e in excluded {
            if e >= n0 {
                exceptions.insert(e);
            }
        }
        IntSet {
            eventually: true,
            exceptions,
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        if n < 1 {
            return false;
        }
        self.eventually ^ self.exceptions.contains(&n)
    }

    pub fn is_empty(&self) -> bool {
        !self.eventually && self.exceptions.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        self.eventually
    }

    pub fn complement(&self) -> IntSet {
        IntSet {
            eventually: !self.eventually,
            exceptions: self.exceptions.clone(),
        }
    }

    pub fn combine(&self, other: &IntSet, op: impl Fn(bool, bool) -> bool) -> IntSet {
        let eventually = op(self.eventually, other.eventually);
        let mut exceptions = BTreeSet::new();
        for &n in self.exceptions.iter().chain(other.exceptions.iter()) {
            if op(self.contains(n), other.contains(n)) != eventually {
                exceptions.insert(n);
            }
        }
        IntSet { eventually, exceptions }
    }

    pub fn and(&self, other: &IntSet) -> IntSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn or(&self, other: &IntSet) -> IntSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn minus(&self, other: &IntSet) -> IntSet {
        self.combine(other, |a, b| a && !b)
    }

    /// Members of a finite set, ascending. Panics if infinite.
    pub fn members(&self) -> Vec<u64> {
        assert!(!self.eventually, "members() on an infinite IntSet");
        self.exceptions.iter().copied().collect()
    }

    /// Canonical (n0, excluded) form of an infinite set: n0 is the least
    /// member and every exclusion lies strictly above it.
    pub fn to_tail(&self) -> Option<(u64, BTreeSet<u64>)> {
        if !self.eventually {
            return None;
        }
        let mut n0 = 1u64;
        while self.exceptions.contains(&n0) {
            n0 += 1;
        }
        let excluded: BTreeSet<u64> = self
            .exceptions
            .iter()
            .copied()
            .filter(|&e| e > n0)
            .collect();
        Some((n0, excluded))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_and_ops() {
        let a = IntSet::tail(3, &BTreeSet::from([5]));
        assert!(!a.contains(2));
        assert!(a.contains(3));
        assert!(!a.contains(5));
        assert!(a.contains(6));

        let b = IntSet::finite([1, 5, 6]);
        let u = a.or(&b);
        assert!(u.contains(1) && !u.contains(2) && u.contains(5));

        let d = a.minus(&b);
        assert!(!d.contains(5) && !d.contains(6) && d.contains(7));

        let i = a.and(&b);
        assert_eq!(i.members(), vec![6]);
    }

    #[test]
    fn canonical_tail_form() {
        let s = IntSet {
            eventually: true,
            exceptions: BTreeSet::from([1, 2, 4]),
        };
        let (n0, excl) = s.to_tail().unwrap();
        assert_eq!(n0, 3);
        assert_eq!(excl, BTreeSet::from([4]));
    }

    #[test]
    fn difference_of_tails_is_finite() {
        let a = IntSet::tail(1, &BTreeSet::new());
        let b = IntSet::tail(4, &BTreeSet::from([6]));
        let d = a.minus(&b);
        assert!(!d.is_infinite());
        assert_eq!(d.members(), vec![1, 2, 3, 6]);
    }
}
