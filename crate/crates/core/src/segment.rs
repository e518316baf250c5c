use std::cmp::Ordering;
use std::fmt;

use crate::error::{CoreError, Result};
use crate::halfint::HalfInt;

/// A segment `[a,b]` of exponents with `b - a` integral and `b >= a - 1`.
///
/// `[a, a-1]` is the empty segment; empty segments keep their `a` and sort
/// into their own positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Segment {
    a: HalfInt,
    b: HalfInt,
}

impl Segment {
    pub fn new(a: HalfInt, b: HalfInt) -> Result<Self> {
        if !a.same_class(b) {
            return Err(CoreError::InvalidSegment {
                a: a.to_string(),
                b: b.to_string(),
                why: "end points differ by a non-integer",
            });
        }
        if b.doubled() < a.doubled() - 2 {
            return Err(CoreError::InvalidSegment {
                a: a.to_string(),
                b: b.to_string(),
                why: "end lies below start - 1",
            });
        }
        Ok(Segment { a, b })
    }

    /// Builds a segment from doubled end points. Panics on invalid input; meant
    /// for literals in tests and for values already known to be valid.
    pub fn d(a2: i64, b2: i64) -> Self {
        Segment::new(HalfInt::from_doubled(a2), HalfInt::from_doubled(b2)).expect("valid segment")
    }

    /// Integer end points.
    pub fn i(a: i64, b: i64) -> Self {
        Segment::d(2 * a, 2 * b)
    }

    pub fn empty_at(a: HalfInt) -> Self {
        Segment { a, b: a.add_int(-1) }
    }

    pub fn singleton(x: HalfInt) -> Self {
        Segment { a: x, b: x }
    }

    pub fn a(&self) -> HalfInt {
        self.a
    }

    pub fn b(&self) -> HalfInt {
        self.b
    }

    pub fn is_empty(&self) -> bool {
        self.b.doubled() < self.a.doubled()
    }

    /// Number of exponents in the segment.
    pub fn len(&self) -> i64 {
        (self.b.doubled() - self.a.doubled()) / 2 + 1
    }

    /// `b - a`, as used in width vectors of ladders.
    pub fn width(&self) -> i64 {
        (self.b.doubled() - self.a.doubled()) / 2
    }

    pub fn class(&self) -> HalfInt {
        self.a.class()
    }

    /// Sum `a + b`; standard modules require it to be positive.
    pub fn exponent_sum(&self) -> HalfInt {
        self.a + self.b
    }

    pub fn with_end(&self, b: HalfInt) -> Result<Self> {
        Segment::new(self.a, b)
    }

    pub fn shortened(&self) -> Self {
        Segment { a: self.a, b: self.b.add_int(-1) }
    }

    pub fn lengthened(&self) -> Self {
        Segment { a: self.a, b: self.b.add_int(1) }
    }

    pub fn contains_point(&self, x: HalfInt) -> bool {
        self.a <= x && x <= self.b
    }

    /// Exponents from `a` to `b` in steps of one.
    pub fn points(&self) -> impl Iterator<Item = HalfInt> + '_ {
        (0..self.len().max(0)).map(move |i| self.a.add_int(i))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.b.cmp(&other.b).then(self.a.cmp(&other.a))
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

/// `[a,b] < [c,d]` iff `b < d`, or `b = d` and `a < c`.
pub fn compare_lex(s1: &Segment, s2: &Segment) -> Result<Ordering> {
    if !s1.a.same_class(s2.a) {
        return Err(CoreError::ClassMismatch(s1.to_string(), s2.to_string()));
    }
    Ok(s1.cmp(s2))
}

pub fn contains(s1: &Segment, s2: &Segment) -> bool {
    s1.a <= s2.a && s2.b <= s1.b
}

/// `a2 = b1 + 1` or `a1 = b2 + 1`. False for empty input.
pub fn adjacent(s1: &Segment, s2: &Segment) -> bool {
    if s1.is_empty() || s2.is_empty() || !s1.a.same_class(s2.a) {
        return false;
    }
    s2.a == s1.b.add_int(1) || s1.a == s2.b.add_int(1)
}

/// Neither segment contains the other and their union is a segment.
/// False for empty input.
pub fn linked(s1: &Segment, s2: &Segment) -> bool {
    if s1.is_empty() || s2.is_empty() || !s1.a.same_class(s2.a) {
        return false;
    }
    if contains(s1, s2) || contains(s2, s1) {
        return false;
    }
    let (lo, hi) = if s1.a <= s2.a { (s1, s2) } else { (s2, s1) };
    hi.a <= lo.b.add_int(1)
}

/// `[a,b]` to `[-b,-a]`; empty segments stay empty.
pub fn contragredient(s: &Segment) -> Segment {
    Segment { a: -s.b, b: -s.a }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicates_on_listed_pairs() {
        assert!(linked(&Segment::i(1, 3), &Segment::i(2, 4)));
        assert!(adjacent(&Segment::i(4, 5), &Segment::i(6, 7)));
        assert!(!linked(&Segment::i(1, 5), &Segment::i(2, 4)));
        assert!(linked(&Segment::i(4, 5), &Segment::i(6, 7)));
        assert!(!linked(&Segment::i(1, 2), &Segment::i(4, 5)));
        assert!(!linked(&Segment::i(3, 2), &Segment::i(1, 2)));
        assert!(!adjacent(&Segment::i(3, 2), &Segment::i(3, 3)));
    }

    #[test]
    fn ordering_examples() {
        assert_eq!(compare_lex(&Segment::i(3, 4), &Segment::i(2, 4)).unwrap(), Ordering::Greater);
        assert_eq!(compare_lex(&Segment::i(1, 1), &Segment::i(1, 1)).unwrap(), Ordering::Equal);
        assert_eq!(compare_lex(&Segment::i(5, 4), &Segment::i(4, 3)).unwrap(), Ordering::Greater);
        assert!(compare_lex(&Segment::i(1, 1), &Segment::d(1, 1)).is_err());
    }

    #[test]
    fn contragredient_examples() {
        assert_eq!(contragredient(&Segment::i(1, 3)), Segment::i(-3, -1));
        assert_eq!(contragredient(&Segment::i(0, 0)), Segment::i(0, 0));
        let e = contragredient(&Segment::i(5, 4));
        assert!(e.is_empty());
        assert_eq!((e.a(), e.b()), (HalfInt::int(-4), HalfInt::int(-5)));
    }

    #[test]
    fn rejects_bad_segments() {
        assert!(Segment::new(HalfInt::int(1), HalfInt::from_doubled(3)).is_err());
        assert!(Segment::new(HalfInt::int(3), HalfInt::int(1)).is_err());
        assert!(Segment::new(HalfInt::int(3), HalfInt::int(2)).unwrap().is_empty());
    }
}
