//! Gaussian-rational points of the complex plane.
//!
//! Every coordinate is a reduced `BigRational`, so equality is structural and
//! all geometric comparisons (squared moduli, dot products) stay inside ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// A point of ℂ with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactComplex { re, im }
    }

    pub fn zero() -> Self {
        ExactComplex {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    /// Build from integer pairs `(rn/rd, in_/id)`; panics on zero denominators,
    /// so only use with literal arguments (tests, catalogs).
    pub fn from_ints(rn: i64, rd: i64, in_: i64, id: i64) -> Self {
        ExactComplex {
            re: rat(rn, rd),
            im: rat(in_, id),
        }
    }

    pub fn real(re: BigRational) -> Self {
        ExactComplex {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// |z|² as a rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Real part of `self · conj(other)`, i.e. the Euclidean dot product.
    pub fn dot(&self, other: &ExactComplex) -> BigRational {
        &self.re * &other.re + &self.im * &other.im
    }

    /// Exact division; `None` when `other` is zero.
    pub fn div(&self, other: &ExactComplex) -> Option<ExactComplex> {
        if other.is_zero() {
            return None;
        }
        let d = other.norm_sq();
        // self * conj(other) / |other|^2
        let re = (&self.re * &other.re + &self.im * &other.im) / &d;
        let im = (&self.im * &other.re - &self.re * &other.im) / &d;
        Some(ExactComplex { re, im })
    }

    /// Divide by a positive integer, exact.
    pub fn div_int(&self, n: u64) -> ExactComplex {
        let d = BigRational::from_integer(BigInt::from(n));
        ExactComplex {
            re: &self.re / &d,
            im: &self.im / &d,
        }
    }

    /// `limit + rate/n`: the n-th member of a canonical sequence family.
    pub fn seq_member(limit: &ExactComplex, rate: &ExactComplex, n: u64) -> ExactComplex {
        limit + &rate.div_int(n)
    }

    /// Solve `p = limit + rate/n` for a positive integer n.
    pub fn solve_seq_index(limit: &ExactComplex, rate: &ExactComplex, p: &ExactComplex) -> Option<u64> {
        let d = p - limit;
        if d.is_zero() {
            return None;
        }
        let q = rate.div(&d)?;
        if !q.im.is_zero() {
            return None;
        }
        if !q.re.is_integer() || !q.re.is_positive() {
            return None;
        }
        big_to_u64(q.re.numer())
    }
}

pub(crate) fn big_to_u64(b: &BigInt) -> Option<u64> {
    use num::ToPrimitive;
    b.to_u64()
}

/// Shorthand rational constructor for literals.
pub fn rat(n: i64, d: i64) -> BigRational {
    assert!(d != 0, "zero denominator in rational literal");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Render a rational as `p` or `p/q` (never decimals).
pub fn rat_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q`; `None` on malformed input or zero denominator.
pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", rat_str(&self.re));
        }
        let im_abs = rat_str(&self.im.abs());
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", rat_str(&self.re), sign, im_abs)
    }
}

// Debug = Display keeps set dumps readable in test failures.
impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seq_index_solving() {
        let zero = ExactComplex::zero();
        let one = ExactComplex::from_ints(1, 1, 0, 1);
        let p = ExactComplex::from_ints(1, 3, 0, 1);
        assert_eq!(ExactComplex::solve_seq_index(&zero, &one, &p), Some(3));
        // 2/3 is not of the form 1/n
        let q = ExactComplex::from_ints(2, 3, 0, 1);
        assert_eq!(ExactComplex::solve_seq_index(&zero, &one, &q), None);
        // complex rate: (1+i)/2 at n=2
        let r = ExactComplex::from_ints(1, 1, 1, 1);
        let m = ExactComplex::seq_member(&zero, &r, 2);
        assert_eq!(ExactComplex::solve_seq_index(&zero, &r, &m), Some(2));
        // the limit itself is never a member
        assert_eq!(ExactComplex::solve_seq_index(&zero, &one, &zero), None);
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(rat_str(&rat(1, 2)), "1/2");
        assert_eq!(rat_str(&rat(0, 5)), "0");
        assert_eq!(rat_str(&rat(-3, 6)), "-1/2");
        assert_eq!(parse_rat("7/2"), Some(rat(7, 2)));
        assert_eq!(parse_rat("-4"), Some(rat(-4, 1)));
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(ExactComplex::from_ints(1, 2, 0, 1).to_string(), "1/2");
        assert_eq!(ExactComplex::from_ints(1, 2, -1, 3).to_string(), "1/2-1/3i");
        assert_eq!(ExactComplex::from_ints(0, 1, 2, 1).to_string(), "0+2i");
    }
}
