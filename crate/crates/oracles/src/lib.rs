//! Brute-force reference computations over raw segments.
//!
//! Everything here works on doubled end points `(2a, 2b)` and plain vectors,
//! shares no code with the main library, and favours exhaustive enumeration
//! over cleverness. Inputs are expected to be small.

/// A segment `[a,b]` stored as `(2a, 2b)`.
pub type Seg = (i64, i64);

/// A factor of a formal product: segment plus `true` for the Zeta form.
/// Singletons are always stored with `false`.
pub type Fac = (i64, i64, bool);

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1u32 << n)).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

/// Longest subsequence `[c_1,d_1], .., [c_f,d_f]` of `seq` (in the given
/// order) with `d_{i+1} = d_i + 1`, `c_i < c_{i+1}`, `d_1 = (l+1)/2`, and,
/// when `l > 0` and `mult_l_even`, `c_1 != (1-l)/2`.
pub fn occurrence_f(seq: &[Seg], l: i64, mult_l_even: bool) -> usize {
    let mut best = 0;
    for idx in subsets(seq.len()) {
        if idx.is_empty() {
            continue;
        }
        let s: Vec<Seg> = idx.iter().map(|&i| seq[i]).collect();
        let chain = s.windows(2).all(|w| w[1].1 == w[0].1 + 2 && w[0].0 < w[1].0);
        let bottom = s[0].1 == l + 1;
        let restricted = l > 0 && mult_l_even && s[0].0 == 1 - l;
        if chain && bottom && !restricted {
            best = best.max(s.len());
        }
    }
    best
}

/// Longest ladder whose top is the shortest segment ending in `k`, with the
/// bottom rung satisfying `c_1 + d_1 > 1` unless `c_1 = d_1 = 1/2` (only when
/// there is more than one rung). Ties go to the lexicographically smallest
/// width vector read from the top. Returns rungs bottom first.
pub fn longest_ladder(block: &[Seg], k2: i64) -> Vec<Seg> {
    let top = match block.iter().filter(|s| s.1 == k2).map(|s| s.0).max() {
        Some(a) => (a, k2),
        None => return Vec::new(),
    };
    let mut best: Option<(usize, Vec<i64>, Vec<Seg>)> = None;
    for idx in subsets(block.len()) {
        let mut s: Vec<Seg> = idx.iter().map(|&i| block[i]).collect();
        s.sort_by_key(|x| (x.1, x.0));
        if s.last() != Some(&top) {
            continue;
        }
        if !s.windows(2).all(|w| w[1].1 == w[0].1 + 2 && w[0].0 < w[1].0) {
            continue;
        }
        if s.len() > 1 {
            let (c, d) = s[0];
            if !((c == 1 && d == 1) || c + d > 2) {
                continue;
            }
        }
        let widths: Vec<i64> = s.iter().rev().map(|x| (x.1 - x.0) / 2).collect();
        let better = match &best {
            None => true,
            Some((len, w, _)) => s.len() > *len || (s.len() == *len && widths < *w),
        };
        if better {
            best = Some((s.len(), widths, s));
        }
    }
    best.map(|b| b.2).unwrap_or_default()
}

fn seg_or_empty(a2: i64, b2: i64) -> Option<Seg> {
    (b2 >= a2).then_some((a2, b2))
}

fn push(word: &mut Vec<Fac>, s: Option<Seg>, zeta: bool) {
    if let Some((a, b)) = s {
        word.push((a, b, zeta && a != b));
    }
}

fn normalized(mut w: Vec<Fac>) -> Vec<Fac> {
    w.sort();
    w
}

/// One term of a two-leg expansion, legs as sorted factor lists.
pub type Term = (Vec<Fac>, Vec<Fac>);

/// The displayed double sum for `M^*` of `D[a,b]` or `Z[a,b]`, one entry per
/// `(i, j)` with `a-1 <= i <= j <= b`.
pub fn big_m_star(a2: i64, b2: i64, zeta: bool) -> Vec<Term> {
    let mut out = Vec::new();
    let mut i = a2 - 2;
    while i <= b2 {
        let mut j = i;
        while j <= b2 {
            let mut left = Vec::new();
            let mut right = Vec::new();
            if zeta {
                push(&mut left, seg_or_empty(-b2, -(j + 2)), true);
                push(&mut left, seg_or_empty(a2, i), true);
                push(&mut right, seg_or_empty(i + 2, j), true);
            } else {
                push(&mut left, seg_or_empty(-i, -a2), false);
                push(&mut left, seg_or_empty(j + 2, b2), false);
                push(&mut right, seg_or_empty(i + 2, j), false);
            }
            out.push((normalized(left), normalized(right)));
            j += 2;
        }
        i += 2;
    }
    out
}

/// The displayed single sum for `m^*`.
pub fn m_star(a2: i64, b2: i64, zeta: bool) -> Vec<Term> {
    let mut out = Vec::new();
    let mut i = a2 - 2;
    while i <= b2 {
        let mut left = Vec::new();
        let mut right = Vec::new();
        if zeta {
            push(&mut left, seg_or_empty(a2, i), true);
            push(&mut right, seg_or_empty(i + 2, b2), true);
        } else {
            push(&mut left, seg_or_empty(i + 2, b2), false);
            push(&mut right, seg_or_empty(a2, i), false);
        }
        out.push((normalized(left), normalized(right)));
        i += 2;
    }
    out
}

fn exponent_sum(w: &[Fac]) -> i64 {
    w.iter().map(|&(a, b, _)| (a + b) * ((b - a) / 2 + 1)).sum()
}

fn sub_multiset(small: &[Fac], big: &[Fac]) -> Option<Vec<Fac>> {
    let mut rest = big.to_vec();
    for x in small {
        let i = rest.iter().position(|y| y == x)?;
        rest.remove(i);
    }
    Some(rest)
}

/// Counts, over every choice of one `(i, j)` term per factor and both tails
/// of the tempered part, the products whose GL leg is exactly `target`.
/// Unknown-tail terms whose missing part has negative exponent sum are
/// dropped; the rest are counted.
pub fn count_leading(factors: &[Fac], target: &[Fac]) -> u64 {
    let target = normalized(target.to_vec());
    let expansions: Vec<Vec<Term>> = factors.iter().map(|&(a, b, z)| big_m_star(a, b, z)).collect();
    let mut count = 0;
    let mut choice = vec![0usize; factors.len()];
    loop {
        let mut left = Vec::new();
        for (f, &c) in choice.iter().enumerate() {
            left.extend(expansions[f][c].0.iter().copied());
        }
        let left = normalized(left);
        if left == target {
            count += 1;
        } else if let Some(rest) = sub_multiset(&left, &target) {
            if !rest.is_empty() && exponent_sum(&rest) >= 0 {
                count += 1;
            }
        }
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return count;
            }
            choice[pos] += 1;
            if choice[pos] < expansions[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Number of sorted multisets of size at most `max_segments` drawn from all
/// nonempty segments with end points in `[-max2, max2]` (doubled) and
/// parity `alpha2`.
pub fn corpus_size(max_segments: usize, max2: i64, alpha2: i64) -> u128 {
    let mut kinds: u128 = 0;
    let mut a = -max2;
    while a <= max2 {
        if (a - alpha2).rem_euclid(2) == 0 {
            kinds += ((max2 - a) / 2 + 1) as u128;
        }
        a += 1;
    }
    // Multisets of size s from n kinds: C(n+s-1, s).
    let mut total = 0u128;
    for s in 0..=max_segments as u128 {
        let mut c = 1u128;
        for i in 0..s {
            c = c * (kinds + i) / (i + 1);
        }
        total += c;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_star_of_two_point_segment() {
        let t = m_star(0, 2, false);
        assert_eq!(t.len(), 3);
        assert!(t.contains(&(vec![], vec![(0, 2, false)])));
        assert!(t.contains(&(vec![(2, 2, false)], vec![(0, 0, false)])));
        assert!(t.contains(&(vec![(0, 2, false)], vec![])));
    }

    #[test]
    fn big_m_star_of_point() {
        let t = big_m_star(0, 0, false);
        assert_eq!(t.len(), 3);
        assert_eq!(t.iter().filter(|x| x.0 == vec![(0, 0, false)] && x.1.is_empty()).count(), 2);
    }

    #[test]
    fn corpus_count_small() {
        // Segments with ends in {-1,0,1}: 6 kinds; sizes 0 and 1.
        assert_eq!(corpus_size(1, 2, 0), 7);
    }
}
