//! First occurrence on the going-down and going-up towers.

use std::collections::HashMap;

use crate::error::{CoreError, Result};
use crate::halfint::HalfInt;
use crate::model::StandardModule;
use crate::rearrange::{Chains, Ladder};
use crate::segment::Segment;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OccurrenceReport {
    pub l_tau: i64,
    pub f: usize,
    pub l_down: i64,
    pub l_up: i64,
    pub m_down: Option<i64>,
    pub m_up: Option<i64>,
    pub witness: Ladder,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Tower {
    Down,
    Up,
}

impl std::fmt::Display for Tower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Tower::Down => "down",
            Tower::Up => "up",
        })
    }
}

/// Longest chains with bottom end `(l+1)/2`, consecutive ends and strictly
/// increasing starts, as `(all, avoiding)` where `avoiding` excludes the
/// bottom `[(1-l)/2, (l+1)/2]`. Each comes with a witness.
fn chains_from_bottom(segs: &[Segment], l: i64) -> ((usize, Ladder), (usize, Ladder)) {
    if l < 0 {
        return ((0, Ladder::default()), (0, Ladder::default()));
    }
    let chains = Chains::new(segs);
    let d1 = HalfInt::from_doubled(l + 1);
    let st = HalfInt::from_doubled(1 - l);
    let mut memo = HashMap::new();
    let mut bottoms: Vec<(usize, Segment)> =
        chains.ending_in(d1).map(|s| (chains.longest_up(s, &mut memo), s)).collect();
    // Longest first, then widest.
    bottoms.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.a().cmp(&y.1.a())));
    let best = |skip_st: bool| -> (usize, Ladder) {
        bottoms
            .iter()
            .find(|(_, s)| !(skip_st && s.a() == st))
            .map(|&(len, s)| (len, chains.pick_up(s, len)))
            .unwrap_or((0, Ladder::default()))
    };
    (best(false), best(l > 0))
}

/// `f` for `l(tau) = l`, looking up the parity of `m(S_l)` only when the
/// answer depends on it.
fn f_value(m: &StandardModule, segs: &[Segment], l: i64) -> Result<(usize, Ladder)> {
    let (all, avoiding) = chains_from_bottom(segs, l);
    if all.0 == avoiding.0 {
        return Ok(all);
    }
    if m.tempered.mult_odd_or_err(l)? {
        Ok(all)
    } else {
        Ok(avoiding)
    }
}

pub fn first_occurrence(m: &StandardModule) -> Result<OccurrenceReport> {
    let l = m.tempered.l_exact().ok_or_else(|| {
        CoreError::AttributesRequired(format!("l of the tempered part {} is not known", m.tempered))
    })?;
    let segs = m.block.segments()?;
    let (f, witness) = f_value(m, &segs, l)?;
    let l_down = l + 2 * f as i64;
    let l_up = -l_down - 2;
    let dims = m.n.map(|n| (n + m.epsilon - l_down, n + m.epsilon - l_up));
    Ok(OccurrenceReport {
        l_tau: l,
        f,
        l_down,
        l_up,
        m_down: dims.map(|d| d.0),
        m_up: dims.map(|d| d.1),
        witness,
    })
}

/// What is known about the first occurrence level on the going-down tower.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LDownBounds {
    pub lo: i64,
    pub hi: Option<i64>,
}

/// Bounds on `l(pi)` that hold even when the tempered part is only partly
/// known. With a lower bound `lo` on `l(tau)`, `lo + 2f` is a lower bound when
/// `f` avoids the exceptional bottom (or `m(S_lo)` is known odd): dropping
/// the first rung of a ladder for `l` gives one for `l + 2`.
pub fn l_down_bounds(m: &StandardModule) -> Result<LDownBounds> {
    let segs = m.block.segments()?;
    let trivial = m.kappa() - 2;
    if let Some(l) = m.tempered.l_exact() {
        let (all, avoiding) = chains_from_bottom(&segs, l);
        if all.0 == avoiding.0 || m.tempered.mult_odd(l).is_some() {
            let (f, _) = f_value(m, &segs, l)?;
            let v = l + 2 * f as i64;
            return Ok(LDownBounds { lo: v, hi: Some(v) });
        }
        return Ok(LDownBounds { lo: l + 2 * avoiding.0 as i64, hi: Some(l + 2 * all.0 as i64) });
    }
    match m.tempered.l_lower() {
        Some(lo) if lo >= 0 => {
            let (all, avoiding) = chains_from_bottom(&segs, lo);
            let f = if m.tempered.mult_odd(lo) == Some(true) { all.0 } else { avoiding.0 };
            Ok(LDownBounds { lo: lo + 2 * f as i64, hi: None })
        }
        Some(lo) => Ok(LDownBounds { lo: lo.max(trivial), hi: None }),
        None => Ok(LDownBounds { lo: trivial, hi: None }),
    }
}

/// The levels `l = kappa (mod 2)` with `l <= max` on one tower.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LevelSet {
    pub max: i64,
    pub kappa: i64,
}

impl LevelSet {
    pub fn contains(&self, level: i64) -> bool {
        level <= self.max && (level - self.kappa).rem_euclid(2) == 0
    }

    /// The largest `count` members, highest first.
    pub fn top(&self, count: usize) -> Vec<i64> {
        (0..count as i64).map(|i| self.max - 2 * i).collect()
    }
}

pub fn nonzero_levels(m: &StandardModule, tower: Tower) -> Result<LevelSet> {
    let r = first_occurrence(m)?;
    let max = match tower {
        Tower::Down => r.l_down,
        Tower::Up => r.l_up,
    };
    Ok(LevelSet { max, kappa: m.kappa() })
}

/// Whether the lift at `level` is nonzero, deciding from bounds when the
/// tempered part is symbolic.
pub fn is_nonzero(m: &StandardModule, level: i64, tower: Tower) -> Result<bool> {
    let b = l_down_bounds(m)?;
    let undecided =
        || CoreError::AttributesRequired(format!("cannot decide whether level {level} on the {tower} tower is nonzero"));
    match tower {
        Tower::Down => {
            if level <= b.lo {
                Ok(true)
            } else if b.hi.is_some_and(|hi| level > hi) {
                Ok(false)
            } else {
                Err(undecided())
            }
        }
        Tower::Up => {
            if level > -b.lo - 2 {
                Ok(false)
            } else if b.hi.is_some_and(|hi| level <= -hi - 2) {
                Ok(true)
            } else {
                Err(undecided())
            }
        }
    }
}
