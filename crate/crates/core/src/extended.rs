//! Positive integers and reals extended by a single point at infinity.
//!
//! `ExtNat` orders `1 < 2 < ... < ∞` and multiplies with `∞ · n = ∞`.
//! `ExtReal` adds with `x + ∞ = ∞`, and `ExtNat::log2` sends `∞` to `∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Serialize, Serializer};

/// Absolute tolerance for every real comparison in the crate.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    pub fn log2(self) -> ExtReal {
        match self {
            ExtNat::Fin(n) => ExtReal::Fin((n as f64).log2()),
            ExtNat::Inf => ExtReal::Inf,
        }
    }

    /// `t ≥ |S|` for a finite set size; an infinite degree dominates every set.
    pub fn dominates_count(self, size: u64) -> bool {
        match self {
            ExtNat::Fin(t) => t >= size,
            ExtNat::Inf => true,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.cmp(b),
            (ExtNat::Fin(_), ExtNat::Inf) => Ordering::Less,
            (ExtNat::Inf, ExtNat::Fin(_)) => Ordering::Greater,
            (ExtNat::Inf, ExtNat::Inf) => Ordering::Equal,
        }
    }
}

impl Mul for ExtNat {
    type Output = ExtNat;

    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.checked_mul(b).map_or(ExtNat::Inf, ExtNat::Fin),
            _ => ExtNat::Inf,
        }
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(n)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(n) => s.serialize_u64(*n),
            ExtNat::Inf => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Fin(f64),
    Inf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Fin(0.0);

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Fin(x) => Some(x),
            ExtReal::Inf => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Fin(_))
    }

    /// Equality at [`TOLERANCE`]; two infinities are equal.
    pub fn approx_eq(self, other: ExtReal) -> bool {
        match (self, other) {
            (ExtReal::Fin(a), ExtReal::Fin(b)) => (a - b).abs() <= TOLERANCE,
            (ExtReal::Inf, ExtReal::Inf) => true,
            _ => false,
        }
    }

    /// `self ≤ other` at [`TOLERANCE`].
    pub fn approx_le(self, other: ExtReal) -> bool {
        match (self, other) {
            (ExtReal::Fin(a), ExtReal::Fin(b)) => a <= b + TOLERANCE,
            (_, ExtReal::Inf) => true,
            (ExtReal::Inf, ExtReal::Fin(_)) => false,
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if other.approx_le(self) && !self.approx_eq(other) {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self.approx_le(other) && !self.approx_eq(other) {
            other
        } else {
            self
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Fin(a), ExtReal::Fin(b)) => ExtReal::Fin(a + b),
            _ => ExtReal::Inf,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::Fin(x)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Fin(x) => write!(f, "{x:.9}"),
            ExtReal::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Fin(x) => s.serialize_f64(*x),
            ExtReal::Inf => s.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_nat_order_and_product() {
        assert!(ExtNat::Fin(1) < ExtNat::Fin(2));
        assert!(ExtNat::Fin(u64::MAX) < ExtNat::Inf);
        assert_eq!(ExtNat::Fin(3) * ExtNat::Fin(4), ExtNat::Fin(12));
        assert_eq!(ExtNat::Inf * ExtNat::Fin(2), ExtNat::Inf);
        assert_eq!(ExtNat::Fin(2) * ExtNat::Inf, ExtNat::Inf);
        assert!(ExtNat::Inf.dominates_count(10));
        assert!(!ExtNat::Fin(3).dominates_count(4));
    }

    #[test]
    fn ext_real_arithmetic() {
        assert_eq!(ExtReal::Fin(1.0) + ExtReal::Inf, ExtReal::Inf);
        assert!(ExtNat::Fin(2).log2().approx_eq(ExtReal::Fin(1.0)));
        assert_eq!(ExtNat::Inf.log2(), ExtReal::Inf);
        assert!(ExtReal::Fin(1.0).approx_le(ExtReal::Fin(1.0 + 1e-12)));
        assert!(ExtReal::Fin(5.0).approx_le(ExtReal::Inf));
        assert!(!ExtReal::Inf.approx_le(ExtReal::Fin(5.0)));
        assert_eq!(ExtReal::Fin(2.0).min(ExtReal::Fin(1.0)), ExtReal::Fin(1.0));
    }
}
