//! Exact values in one third of the integers.
//!
//! Every quantity in the hive/web calculus lives in `(1/3)Z`. A [`Third`]
//! stores the numerator over 3 as an `i64`; all arithmetic is integer
//! arithmetic on that numerator and panics instead of wrapping.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the magnitude of externally supplied numerators.
///
/// Every formula in the crate sums at most a few dozen inputs, so values
/// below this bound never come near `i64::MAX`.
pub const DEFAULT_MAX_THIRDS: i64 = 1_000_000_000_000;

/// A value `thirds / 3`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Third {
    pub thirds: i64,
}

impl Third {
    pub const ZERO: Third = Third { thirds: 0 };

    pub const fn from_thirds(thirds: i64) -> Self {
        Third { thirds }
    }

    /// The integer `n` as a third (`3n / 3`).
    pub fn from_int(n: i64) -> Self {
        Third {
            thirds: n.checked_mul(3).expect("Third overflow"),
        }
    }

    pub fn is_integer(self) -> bool {
        is_integer(self)
    }

    /// The integer value, if this is one.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.thirds / 3)
    }

    pub fn checked_add(self, rhs: Third) -> Result<Third> {
        self.thirds
            .checked_add(rhs.thirds)
            .map(Third::from_thirds)
            .ok_or(Error::Overflow)
    }

    pub fn checked_sub(self, rhs: Third) -> Result<Third> {
        self.thirds
            .checked_sub(rhs.thirds)
            .map(Third::from_thirds)
            .ok_or(Error::Overflow)
    }

    /// Integer multiple, used for `2a - b` style strand counts.
    pub fn scale(self, k: i64) -> Third {
        Third {
            thirds: self.thirds.checked_mul(k).expect("Third overflow"),
        }
    }

    /// Reject values whose magnitude exceeds `limit` thirds.
    pub fn check_bound(self, limit: i64) -> Result<Third> {
        if self.thirds.checked_abs().is_none_or(|m| m > limit) {
            Err(Error::OutOfRange {
                value: self.thirds,
                limit,
            })
        } else {
            Ok(self)
        }
    }
}

/// True iff `v` is an integer, i.e. its numerator is divisible by 3.
pub fn is_integer(v: Third) -> bool {
    v.thirds.rem_euclid(3) == 0
}

impl Add for Third {
    type Output = Third;

    fn add(self, rhs: Third) -> Third {
        self.checked_add(rhs).expect("Third overflow")
    }
}

impl Sub for Third {
    type Output = Third;

    fn sub(self, rhs: Third) -> Third {
        self.checked_sub(rhs).expect("Third overflow")
    }
}

impl Neg for Third {
    type Output = Third;

    fn neg(self) -> Third {
        Third {
            thirds: self.thirds.checked_neg().expect("Third overflow"),
        }
    }
}

impl std::iter::Sum for Third {
    fn sum<I: Iterator<Item = Third>>(iter: I) -> Third {
        iter.fold(Third::ZERO, Add::add)
    }
}

impl fmt::Display for Third {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_int() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/3", self.thirds),
        }
    }
}

/// A vertex of the integer lattice `Z^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl std::str::FromStr for LatticePoint {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| format!("expected \"x,y\", got {s:?}"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad coordinate {t:?}: {e}"))
        };
        Ok(LatticePoint::new(parse(x)?, parse(y)?))
    }
}
