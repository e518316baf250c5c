//! Formal two-leg expansions of Jacquet modules: `m*`, `M*` and the
//! classical `mu*` of an induced representation, with GL products kept as
//! unexpanded words.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::model::Form;
use crate::segment::{contragredient, Segment};

/// A formal product of segment representations, as a sorted multiset.
/// Empty segments are dropped and singletons are always stored as Delta.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GLWord(Vec<(Segment, Form)>);

impl GLWord {
    pub fn one() -> Self {
        GLWord(Vec::new())
    }

    pub fn factor(s: Segment, form: Form) -> Self {
        GLWord::from_factors([(s, form)])
    }

    pub fn from_factors(it: impl IntoIterator<Item = (Segment, Form)>) -> Self {
        let mut v: Vec<(Segment, Form)> = it
            .into_iter()
            .filter(|(s, _)| !s.is_empty())
            .map(|(s, f)| if s.len() == 1 { (s, Form::Delta) } else { (s, f) })
            .collect();
        v.sort();
        GLWord(v)
    }

    pub fn factors(&self) -> &[(Segment, Form)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &GLWord) -> GLWord {
        GLWord::from_factors(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(s, _)| s.len()).sum()
    }

    /// Twice the sum of all exponents.
    pub fn exponent_sum2(&self) -> i64 {
        self.0.iter().map(|(s, _)| s.exponent_sum().doubled()).sum()
    }

    pub fn contragredient(&self) -> GLWord {
        GLWord::from_factors(self.0.iter().map(|(s, f)| (contragredient(s), *f)))
    }

    /// `big - self` as multisets, if `self` is contained in `big`.
    pub fn remainder_in(&self, big: &GLWord) -> Option<GLWord> {
        let mut rest = big.0.clone();
        for x in &self.0 {
            let i = rest.iter().position(|y| y == x)?;
            rest.remove(i);
        }
        Some(GLWord(rest))
    }
}

impl fmt::Display for GLWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (s, form)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            match form {
                _ if s.len() == 1 => write!(f, "|.|^{}", s.a())?,
                Form::Delta => write!(f, "D{s}")?,
                Form::Zeta => write!(f, "Z{s}")?,
            }
        }
        Ok(())
    }
}

/// The classical part of a right leg: nothing, the tempered representation
/// itself, or an unknown piece of its Jacquet module.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tail {
    None,
    TauHat,
    Bottom,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RightLeg {
    pub word: GLWord,
    pub tail: Tail,
}

impl RightLeg {
    pub fn gl(word: GLWord) -> Self {
        RightLeg { word, tail: Tail::None }
    }

    fn times(&self, other: &RightLeg) -> RightLeg {
        let tail = self.tail.max(other.tail);
        let word = if tail == Tail::Bottom { GLWord::one() } else { self.word.concat(&other.word) };
        RightLeg { word, tail }
    }
}

impl fmt::Display for RightLeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tail {
            Tail::None => write!(f, "{}", self.word),
            Tail::TauHat if self.word.is_one() => f.write_str("tau"),
            Tail::TauHat => write!(f, "{} >< tau", self.word),
            Tail::Bottom => f.write_str("?"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RingElement {
    terms: BTreeMap<(GLWord, RightLeg), BigInt>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    /// `1 (x) 1`.
    pub fn one() -> Self {
        let mut r = RingElement::zero();
        r.add(GLWord::one(), RightLeg::gl(GLWord::one()), BigInt::one());
        r
    }

    /// `1 (x) tau + ?`.
    pub fn tempered_tail() -> Self {
        let mut r = RingElement::zero();
        r.add(GLWord::one(), RightLeg { word: GLWord::one(), tail: Tail::TauHat }, BigInt::one());
        r.add(GLWord::one(), RightLeg { word: GLWord::one(), tail: Tail::Bottom }, BigInt::one());
        r
    }

    pub fn add(&mut self, left: GLWord, right: RightLeg, c: BigInt) {
        let key = (left, right);
        let entry = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GLWord, &RightLeg, &BigInt)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    /// Number of distinct terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients: the number of terms counted with repetition.
    pub fn total(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn mult(&self, other: &RingElement) -> RingElement {
        self.mult_keeping(other, &|_| true)
    }

    /// Product restricted to terms whose left leg passes `keep`.
    pub fn mult_keeping(&self, other: &RingElement, keep: &dyn Fn(&GLWord) -> bool) -> RingElement {
        let mut out = RingElement::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                let left = l1.concat(l2);
                if keep(&left) {
                    out.add(left, r1.times(r2), c1 * c2);
                }
            }
        }
        out
    }

    /// Canonical text, one term per line in key order.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for ((l, r), c) in &self.terms {
            let sign = if c.is_negative() { "-" } else { "+" };
            s.push_str(&format!("{sign}{} {l} (x) {r}\n", c.abs()));
        }
        s
    }
}

fn seg_or_empty(a: crate::HalfInt, b: crate::HalfInt) -> Segment {
    Segment::new(a, b).unwrap_or_else(|_| Segment::empty_at(a))
}

pub fn m_star(s: Segment, form: Form) -> RingElement {
    let mut out = RingElement::zero();
    if s.is_empty() {
        return RingElement::one();
    }
    let (a, b) = (s.a(), s.b());
    let mut i = a.add_int(-1);
    while i <= b {
        let low = seg_or_empty(a, i);
        let high = seg_or_empty(i.add_int(1), b);
        let (l, r) = match form {
            Form::Delta => (high, low),
            Form::Zeta => (low, high),
        };
        out.add(GLWord::factor(l, form), RightLeg::gl(GLWord::factor(r, form)), BigInt::one());
        i = i.add_int(1);
    }
    out
}

/// `m*` of a formal word, as the product of `m*` of its factors.
pub fn m_star_word(w: &GLWord) -> RingElement {
    w.factors().iter().fold(RingElement::one(), |acc, &(s, f)| acc.mult(&m_star(s, f)))
}

/// `M* = (m x 1) o (~ x m*) o swap o m*`.
pub fn big_m_star(s: Segment, form: Form) -> RingElement {
    let mut out = RingElement::zero();
    for (x, y, c) in m_star(s, form).terms() {
        let dual = y.word.contragredient();
        for (x1, x2, c2) in m_star_word(x).terms() {
            out.add(dual.concat(x1), x2.clone(), c * c2);
        }
    }
    out
}

/// `M*(d_1) x .. x M*(d_r) >< (1 (x) tau + ?)`.
pub fn mu_star_product(deltas: &[(Segment, Form)]) -> RingElement {
    deltas
        .iter()
        .fold(RingElement::one(), |acc, &(s, f)| acc.mult(&big_m_star(s, f)))
        .mult(&RingElement::tempered_tail())
}

/// How many terms of [`mu_star_product`] have left leg exactly `target`.
/// A `?`-tailed term counts when the piece it would have to supply has
/// nonnegative exponent sum; otherwise the tempered Jacquet module cannot
/// supply it. Left legs only grow under multiplication, so any partial
/// product not contained in `target` is dropped on the spot.
pub fn count_leading(deltas: &[(Segment, Form)], target: &GLWord) -> BigInt {
    let fits = |w: &GLWord| w.remainder_in(target).is_some();
    let partial = deltas
        .iter()
        .fold(RingElement::one(), |acc, &(s, f)| acc.mult_keeping(&big_m_star(s, f), &fits));
    let mut count = BigInt::zero();
    for (left, _, c) in partial.terms() {
        let rest = left.remainder_in(target).expect("pruned");
        if rest.is_one() {
            count += c;
        } else if rest.exponent_sum2() >= 0 {
            count += c;
        }
    }
    count
}

type ThreeLeg = BTreeMap<(GLWord, GLWord, GLWord), BigInt>;

fn add3(map: &mut ThreeLeg, k: (GLWord, GLWord, GLWord), c: BigInt) {
    *map.entry(k).or_insert_with(BigInt::zero) += c;
}

/// `(m* x id) o m* = (id x m*) o m*` on one factor, compared as
/// three-leg expansions.
pub fn coassociative(s: Segment, form: Form) -> bool {
    let base = m_star(s, form);
    let mut lhs = ThreeLeg::new();
    let mut rhs = ThreeLeg::new();
    for (x, y, c) in base.terms() {
        for (x1, x2, c2) in m_star_word(x).terms() {
            add3(&mut lhs, (x1.clone(), x2.word.clone(), y.word.clone()), c * c2);
        }
        for (y1, y2, c2) in m_star_word(&y.word).terms() {
            add3(&mut rhs, (x.clone(), y1.clone(), y2.word.clone()), c * c2);
        }
    }
    lhs.retain(|_, c| !c.is_zero());
    rhs.retain(|_, c| !c.is_zero());
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(a: i64, b: i64) -> Segment {
        Segment::i(a, b)
    }

    #[test]
    fn m_star_of_short_delta() {
        let r = m_star(d(0, 1), Form::Delta);
        assert_eq!(r.render(), "+1 1 (x) D[0,1]\n+1 D[0,1] (x) 1\n+1 |.|^1 (x) |.|^0\n");
        assert_eq!(m_star(Segment::empty_at(crate::HalfInt::int(3)), Form::Delta), RingElement::one());
    }

    #[test]
    fn zeta_splits_the_other_way() {
        let r = m_star(d(0, 1), Form::Zeta);
        assert_eq!(r.render(), "+1 1 (x) Z[0,1]\n+1 |.|^0 (x) |.|^1\n+1 Z[0,1] (x) 1\n");
    }

    #[test]
    fn big_m_star_of_point() {
        let r = big_m_star(d(0, 0), Form::Delta);
        assert_eq!(r.render(), "+1 1 (x) |.|^0\n+2 |.|^0 (x) 1\n");
    }

    #[test]
    fn unit_and_grading() {
        let x = m_star(d(0, 0), Form::Delta).mult(&m_star(d(1, 1), Form::Delta));
        assert_eq!(RingElement::one().mult(&x), x);
        assert_eq!(x.len(), 4);
        assert!(x.terms().all(|(l, r, _)| l.degree() + r.word.degree() == 2));
    }

    #[test]
    fn tail_alone() {
        let r = mu_star_product(&[]);
        assert_eq!(r.render(), "+1 1 (x) tau\n+1 1 (x) ?\n");
    }

    #[test]
    fn absent_exponent_gives_zero() {
        let target = GLWord::factor(d(-9, -9), Form::Delta);
        assert!(count_leading(&[(d(1, 2), Form::Delta)], &target).is_zero());
    }
}
