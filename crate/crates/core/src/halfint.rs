use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::CoreError;

/// An element of `(1/2)Z`, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };
    pub const HALF: HalfInt = HalfInt { doubled: 1 };
    pub const ONE: HalfInt = HalfInt { doubled: 2 };

    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt { doubled }
    }

    pub const fn int(n: i64) -> Self {
        HalfInt { doubled: 2 * n }
    }

    pub const fn doubled(self) -> i64 {
        self.doubled
    }

    pub const fn is_integral(self) -> bool {
        self.doubled % 2 == 0
    }

    /// The class of `self` modulo Z, as `0` or `1/2`.
    pub const fn class(self) -> HalfInt {
        HalfInt { doubled: self.doubled.rem_euclid(2) }
    }

    pub fn same_class(self, other: HalfInt) -> bool {
        (self.doubled - other.doubled) % 2 == 0
    }

    /// Returns the integer value when `self` is integral.
    pub fn to_int(self) -> Option<i64> {
        self.is_integral().then_some(self.doubled / 2)
    }

    pub fn add_int(self, n: i64) -> Self {
        HalfInt { doubled: self.doubled + 2 * n }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { doubled: self.doubled + rhs.doubled }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { doubled: self.doubled - rhs.doubled }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { doubled: -self.doubled }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl FromStr for HalfInt {
    type Err = CoreError;

    /// Accepts `n` or `n/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoreError::Parse(format!("not an integer or half-integer literal: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::int).map_err(|_| bad()),
            Some((num, den)) => {
                if den.trim() != "2" {
                    return Err(bad());
                }
                num.trim().parse::<i64>().map(HalfInt::from_doubled).map_err(|_| bad())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        for d in -9..=9 {
            let h = HalfInt::from_doubled(d);
            assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
        }
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(3));
        assert_eq!("-4".parse::<HalfInt>().unwrap(), HalfInt::int(-4));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::int(2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.5".parse::<HalfInt>().is_err());
    }

    #[test]
    fn class_is_nonnegative() {
        assert_eq!(HalfInt::from_doubled(-3).class(), HalfInt::HALF);
        assert_eq!(HalfInt::int(-3).class(), HalfInt::ZERO);
    }
}
