//! Exhaustive enumeration of small alpha-blocks and of the standard modules
//! built on them.

use crate::error::{CoreError, Result};
use crate::halfint::HalfInt;
use crate::model::{AlphaBlock, Pair, StandardModule};
use crate::segment::Segment;
use crate::tempered::TemperedToken;

pub const MAX_SEGMENTS: usize = 5;
/// Largest allowed `|2 * end|`.
pub const MAX_END2: i64 = 12;

/// All nonempty segments with both ends in `alpha + Z` and `|end| <= max_end`,
/// largest first.
fn kinds(max_end: HalfInt, alpha: HalfInt) -> Vec<Segment> {
    let m2 = max_end.doubled();
    let points: Vec<HalfInt> = (-m2..=m2)
        .map(HalfInt::from_doubled)
        .filter(|x| x.class() == alpha)
        .collect();
    let mut out = Vec::new();
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i..] {
            out.push(Segment::new(a, b).expect("a <= b"));
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |c, i| c * (n - i) / (i + 1))
}

/// Number of blocks [`enumerate_corpus`] would produce.
pub fn estimate(max_segments: usize, max_end: HalfInt, alpha: HalfInt) -> u128 {
    let n = kinds(max_end, alpha).len() as u128;
    (0..=max_segments as u128).map(|s| if n == 0 && s > 0 { 0 } else { binom(n + s - 1, s) }).sum()
}

/// Every sorted block of at most `max_segments` segments with ends in
/// `[-max_end, max_end]`, by size and then in decreasing order.
pub fn enumerate_corpus(max_segments: usize, max_end: HalfInt, alpha: HalfInt) -> Result<Vec<AlphaBlock>> {
    if alpha != HalfInt::ZERO && alpha != HalfInt::HALF {
        return Err(CoreError::InvalidParameter(format!("alpha must be 0 or 1/2, got {alpha}")));
    }
    let bound = HalfInt::from_doubled(max_end.doubled().abs());
    if max_segments > MAX_SEGMENTS || bound.doubled() > MAX_END2 {
        return Err(CoreError::BoundsTooLarge { estimate: estimate(max_segments, bound, alpha) });
    }
    let kinds = kinds(bound, alpha);
    let mut out = Vec::new();
    for size in 0..=max_segments {
        let mut pick = Vec::with_capacity(size);
        multisets(&kinds, 0, size, &mut pick, &mut |segs| {
            out.push(AlphaBlock::from_segments(alpha, segs).expect("classes match"));
        });
    }
    Ok(out)
}

fn multisets(kinds: &[Segment], from: usize, left: usize, pick: &mut Vec<Segment>, emit: &mut dyn FnMut(&[Segment])) {
    if left == 0 {
        emit(pick);
        return;
    }
    for i in from..kinds.len() {
        pick.push(kinds[i]);
        multisets(kinds, i, left - 1, pick, emit);
        pick.pop();
    }
}

/// Whether every segment has `a + b > 0`, as in a standard module.
pub fn is_positive(block: &AlphaBlock) -> bool {
    block.segments().map(|s| s.iter().all(|x| x.exponent_sum().doubled() > 0)).unwrap_or(false)
}

/// Tempered atoms with `l` from -1 (or 0) to 5 in the parity of kappa and,
/// for `l > 0`, both parities of `m(S_l)`.
pub fn tempered_sweep(kappa: i64) -> Vec<TemperedToken> {
    let mut out = Vec::new();
    for l in -1..=5 {
        if (l - kappa).rem_euclid(2) != 0 {
            continue;
        }
        if l > 0 {
            out.push(TemperedToken::atom_with("tau", l, &[(l, 1)]));
            out.push(TemperedToken::atom_with("tau", l, &[(l, 2)]));
        } else {
            out.push(TemperedToken::atom(l));
        }
    }
    out
}

/// Standard modules on the positive blocks of the corpus for `pair`, one per
/// tempered atom of the sweep.
pub fn module_corpus(pair: Pair, max_segments: usize, max_end: HalfInt) -> Result<Vec<StandardModule>> {
    let blocks = enumerate_corpus(max_segments, max_end, pair.alpha())?;
    let sweep = tempered_sweep(pair.kappa());
    let mut out = Vec::new();
    for b in blocks.iter().filter(|b| is_positive(b)) {
        let segs = b.segments()?;
        for t in &sweep {
            out.push(StandardModule::simple(pair, &segs, t.clone())?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_segments_up_to_one() {
        let c = enumerate_corpus(1, HalfInt::int(1), HalfInt::ZERO).unwrap();
        assert_eq!(c.len(), 7);
        assert!(c[0].is_empty());
        let listed: Vec<String> = c[1..].iter().map(|b| b.segments().unwrap()[0].to_string()).collect();
        assert_eq!(listed, ["[1,1]", "[0,1]", "[-1,1]", "[0,0]", "[-1,0]", "[-1,-1]"]);
    }

    #[test]
    fn zero_segments() {
        let c = enumerate_corpus(0, HalfInt::int(3), HalfInt::ZERO).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].is_empty());
    }

    #[test]
    fn refuses_large_bounds() {
        match enumerate_corpus(6, HalfInt::int(3), HalfInt::ZERO) {
            Err(CoreError::BoundsTooLarge { estimate }) => assert!(estimate > 0),
            other => panic!("{other:?}"),
        }
        assert!(enumerate_corpus(2, HalfInt::int(7), HalfInt::ZERO).is_err());
    }

    #[test]
    fn blocks_are_sorted_and_distinct() {
        let c = enumerate_corpus(3, HalfInt::from_doubled(3), HalfInt::HALF).unwrap();
        assert!(c.iter().all(|b| b.is_sorted()));
        let set: std::collections::HashSet<_> = c.iter().collect();
        assert_eq!(set.len(), c.len());
        assert_eq!(c.len() as u128, estimate(3, HalfInt::from_doubled(3), HalfInt::HALF));
    }
}
