//! Explicit theta lifts of standard modules.

use std::collections::HashMap;

use crate::error::{CoreError, Result};
use crate::halfint::HalfInt;
use crate::model::{sort_desc, AlphaBlock, StandardModule};
use crate::occurrence::is_nonzero;
pub use crate::occurrence::Tower;
use crate::rearrange::{pad_with_empties, remove_one, Chains, Ladder};
use crate::segment::Segment;
use crate::tempered::TemperedToken;

/// Which branch of the lift description produced a result.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LiftCase {
    /// Going down, positive level: ladder shortened, tempered part lifted.
    LowRank { t: usize },
    /// Same, but the bottom rung was the Steinberg segment and was absorbed.
    LowRankSteinberg { t: usize },
    LevelZero,
    /// Going down, negative level: a character chain is inserted.
    HighRank,
    /// Going up: ladder lengthened.
    GoingUp { t: usize, steinberg: bool },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LiftResult {
    Zero,
    Module { module: StandardModule, level: i64, tower: Tower, case: LiftCase },
}

impl LiftResult {
    pub fn module(&self) -> Option<&StandardModule> {
        match self {
            LiftResult::Zero => None,
            LiftResult::Module { module, .. } => Some(module),
        }
    }
}

/// `[c,d]` with `d = (l-1)/2`: the segment that kills a lift at level `l`.
pub fn is_exceptional_steinberg(seg: Segment, l: i64) -> bool {
    !seg.is_empty() && seg.b().doubled() == l - 1
}

pub fn simplify_tempered(token: &TemperedToken) -> TemperedToken {
    token.simplify()
}

pub fn lift(m: &StandardModule, level: i64, tower: Tower) -> Result<LiftResult> {
    lift_with(m, level, tower, false)
}

/// Like [`lift`]; with `normalize`, a tempered slot `theta_j(X)` lying below
/// the first occurrence `l(X)` is expanded into the characters
/// `|.|^{(l(X)-1)/2}, .., |.|^{(j+1)/2}` over `theta_{l(X)}(X)`.
pub fn lift_with(m: &StandardModule, level: i64, tower: Tower, normalize: bool) -> Result<LiftResult> {
    m.validate()?;
    let kappa = m.kappa();
    if (level - kappa).rem_euclid(2) != 0 {
        return Err(CoreError::LevelParity { level, kappa });
    }
    if !is_nonzero(m, level, tower)? {
        return Ok(LiftResult::Zero);
    }
    let segs = m.block.segments()?;
    let (mut segs, mut tempered, case) = match tower {
        Tower::Down if level > 0 => low_rank(m, segs, level)?,
        Tower::Down if level == 0 => (segs, m.tempered.clone().lift(0), LiftCase::LevelZero),
        Tower::Down => high_rank(m, segs, -level),
        Tower::Up => match m.tempered.l_exact() {
            Some(-1) => high_rank(m, segs, -level),
            Some(l0) => going_up(m, segs, -level, l0)?,
            None => {
                return Err(CoreError::AttributesRequired(format!(
                    "lifting up needs l of {}",
                    m.tempered
                )))
            }
        },
    };
    if normalize {
        if let Some((chars, base)) = expand_below_first(&tempered) {
            segs.extend(chars);
            tempered = base;
        }
    }
    sort_desc(&mut segs);
    let module = StandardModule {
        pair: m.pair,
        side: m.side.flip(),
        xi: m.xi.clone(),
        block: AlphaBlock::from_segments(m.block.alpha, &segs)?,
        tempered,
        n: m.n.map(|n| n + m.epsilon - level),
        epsilon: -m.epsilon,
    };
    module.validate()?;
    Ok(LiftResult::Module { module, level, tower, case })
}

fn expand_below_first(token: &TemperedToken) -> Option<(Vec<Segment>, TemperedToken)> {
    let TemperedToken::Lift { inner, level: j } = token else { return None };
    let lx = inner.l_exact()?;
    if *j < 0 || *j >= lx {
        return None;
    }
    let chars = (0..)
        .map(|i| j + 1 + 2 * i)
        .take_while(|&x2| x2 < lx)
        .map(|x2| Segment::singleton(HalfInt::from_doubled(x2)))
        .collect();
    Some((chars, inner.as_ref().clone().lift(lx)))
}

/// Whether `theta_j` of the tempered part is nonzero on the going-down tower.
fn tempered_lifts(t: &TemperedToken, j: i64) -> Result<bool> {
    let b = t.bounds();
    if b.lo.is_some_and(|lo| j <= lo) {
        return Ok(true);
    }
    if b.exact.is_some_and(|l| j > l) {
        return Ok(false);
    }
    Err(CoreError::AttributesRequired(format!("cannot decide whether theta_{j}({t}) is nonzero")))
}

/// The ladder of exactly `t` rungs topped at end `top_end` that minimizes
/// widths from the top, among those whose bottom passes `bottom_ok`.
fn narrowest_down(
    chains: &Chains,
    top_end: HalfInt,
    t: usize,
    bottom_ok: &dyn Fn(&Segment) -> bool,
) -> Option<Ladder> {
    let mut tops: Vec<Segment> = chains.ending_in(top_end).collect();
    tops.sort_by(|x, y| y.a().cmp(&x.a()));
    tops.into_iter().find_map(|top| chains.pick_down(top, t, bottom_ok))
}

type Parts = (Vec<Segment>, TemperedToken, LiftCase);

fn low_rank(m: &StandardModule, mut segs: Vec<Segment>, l: i64) -> Result<Parts> {
    let chains = Chains::new(&segs);
    let top_end = HalfInt::from_doubled(l - 1);
    let tau = &m.tempered;
    let mut t = (l / 2) as usize;
    loop {
        let j = l - 2 * t as i64;
        if t == 0 {
            if !tempered_lifts(tau, j)? {
                return Err(CoreError::Inconsistent(format!(
                    "level {l} is nonzero but no ladder and theta_{l}({tau}) = 0"
                )));
            }
            return Ok((segs, tau.clone().lift(l), LiftCase::LowRank { t: 0 }));
        }
        if !tempered_lifts(tau, j)? {
            t -= 1;
            continue;
        }
        let any = |_: &Segment| true;
        let Some(ladder) = narrowest_down(&chains, top_end, t, &any) else {
            t -= 1;
            continue;
        };
        let st_start = HalfInt::from_doubled(1 - j);
        let is_st = |s: &Segment| s.a() == st_start;
        let (ladder, steinberg) = if j == 0 || !is_st(&ladder.rungs[0]) {
            (ladder, false)
        } else if tau.mult_odd_or_err(j)? {
            (ladder, true)
        } else {
            match narrowest_down(&chains, top_end, t, &|s: &Segment| !is_st(s)) {
                Some(other) => (other, false),
                None => {
                    t -= 1;
                    continue;
                }
            }
        };
        let skip = usize::from(steinberg);
        for (i, rung) in ladder.rungs.iter().enumerate() {
            remove_one(&mut segs, *rung);
            let short = rung.shortened();
            if i >= skip && !short.is_empty() {
                segs.push(short);
            }
        }
        return Ok(if steinberg {
            (segs, tau.clone().st_wrap(j + 1).lift(j + 2), LiftCase::LowRankSteinberg { t })
        } else {
            (segs, tau.clone().lift(j), LiftCase::LowRank { t })
        });
    }
}

fn high_rank(m: &StandardModule, mut segs: Vec<Segment>, l: i64) -> Parts {
    let kappa = m.kappa();
    let mut x2 = 3 - kappa;
    while x2 <= l - 1 {
        segs.push(Segment::singleton(HalfInt::from_doubled(x2)));
        x2 += 2;
    }
    (segs, m.tempered.clone().lift(kappa - 2), LiftCase::HighRank)
}

fn going_up(m: &StandardModule, mut segs: Vec<Segment>, l: i64, l0: i64) -> Result<Parts> {
    let tau = &m.tempered;
    let t = ((l - l0) / 2 - 1) as usize;
    // Parity of m(S_{l0}) matters for both the bottom rung and the tempered slot.
    let odd = l0 == 0 || tau.mult_odd_or_err(l0)?;
    let chains = Chains::new(&segs);
    let d1 = HalfInt::from_doubled(l0 + 1);
    let st = Segment::new(HalfInt::from_doubled(1 - l0), d1)?;
    if t > 0 {
        let mut memo = HashMap::new();
        let mut bottoms: Vec<(usize, Segment)> = chains
            .ending_in(d1)
            .filter(|s| odd || *s != st)
            .map(|s| (chains.longest_up(s, &mut memo).min(t), s))
            .collect();
        bottoms.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.a().cmp(&y.1.a())));
        let mut ladder = match bottoms.first() {
            Some(&(_, s)) => chains.pick_up(s, t),
            None => Ladder { rungs: vec![Segment::empty_at(d1.add_int(1))] },
        };
        pad_with_empties(&mut ladder, t);
        for rung in &ladder.rungs {
            if !rung.is_empty() {
                remove_one(&mut segs, *rung);
            }
            segs.push(rung.lengthened());
        }
    }
    let lifted = tau.clone().lift(-2 - l0);
    Ok(if odd {
        (segs, lifted, LiftCase::GoingUp { t, steinberg: false })
    } else {
        segs.push(st);
        (segs, lifted.sigma_of(), LiftCase::GoingUp { t, steinberg: true })
    })
}

/// Lifts at a negative `level` and back at `-level` on the going-down tower,
/// and checks the original module comes back. Vacuously true for `level >= 0`.
pub fn round_trip(m: &StandardModule, level: i64, tower: Tower) -> Result<bool> {
    if level >= 0 {
        return Ok(true);
    }
    let there = match lift(m, level, tower)? {
        LiftResult::Zero => {
            return Err(CoreError::Precondition(format!("the {tower} lift at level {level} is zero")))
        }
        LiftResult::Module { module, .. } => module,
    };
    let back = match lift(&there, -level, Tower::Down)? {
        LiftResult::Zero => return Ok(false),
        LiftResult::Module { module, .. } => module,
    };
    Ok(canonical(&back)? == canonical(m)?)
}

fn canonical(m: &StandardModule) -> Result<StandardModule> {
    let mut s = m.sorted()?;
    s.tempered = s.tempered.simplify();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Pair, Side};

    fn module(segs: &[(i64, i64)], t: TemperedToken) -> StandardModule {
        let v: Vec<Segment> = segs.iter().map(|&(a, b)| Segment::i(a, b)).collect();
        StandardModule::simple(Pair::SpO, &v, t).unwrap()
    }

    fn staircase(mult3: Option<u64>) -> StandardModule {
        let tau = match mult3 {
            Some(c) => TemperedToken::atom_with("tau", 3, &[(3, c)]),
            None => TemperedToken::atom(3),
        };
        module(&[(4, 5), (3, 4), (2, 3), (1, 2)], tau)
    }

    #[test]
    fn staircase_at_first_occurrence() {
        let LiftResult::Module { module, case, .. } = lift(&staircase(None), 11, Tower::Down).unwrap() else {
            panic!()
        };
        assert_eq!(case, LiftCase::LowRank { t: 4 });
        assert_eq!(module.block.to_string(), "|.|^4 x |.|^3 x |.|^2 x |.|^1");
        assert_eq!(module.tempered.to_string(), "theta_3(tau)");
        assert_eq!(module.side, Side::V);
        assert_eq!(lift(&staircase(None), 13, Tower::Down).unwrap(), LiftResult::Zero);
    }

    #[test]
    fn staircase_round_trips() {
        assert!(round_trip(&staircase(None), -1, Tower::Down).unwrap());
        assert!(round_trip(&staircase(None), -7, Tower::Down).unwrap());
        // Going up needs the parity of m(S_3); a discrete series has it odd.
        assert!(round_trip(&staircase(Some(1)), -13, Tower::Up).unwrap());
        assert!(round_trip(&staircase(Some(1)), -17, Tower::Up).unwrap());
        assert!(matches!(round_trip(&staircase(None), -13, Tower::Up), Err(CoreError::AttributesRequired(_))));
        assert!(round_trip(&staircase(None), 11, Tower::Down).unwrap());
    }

    #[test]
    fn high_rank_inserts_characters() {
        let LiftResult::Module { module, .. } = lift(&staircase(None), -7, Tower::Down).unwrap() else { panic!() };
        let mut want = vec![Segment::i(4, 5), Segment::i(3, 4), Segment::i(2, 3), Segment::i(1, 2)];
        want.extend((1..=3).map(|x| Segment::i(x, x)));
        sort_desc(&mut want);
        assert_eq!(module.block.segments().unwrap(), want);
        assert_eq!(module.tempered.to_string(), "theta_-1(tau)");
    }

    #[test]
    fn steinberg_bottom_is_absorbed() {
        // [0,1] sits at the bottom of the only ladder for l = 3; m(S_1) odd.
        let m = module(&[(0, 1)], TemperedToken::atom_with("tau", 1, &[(1, 1)]));
        let LiftResult::Module { module, case, .. } = lift(&m, 3, Tower::Down).unwrap() else { panic!() };
        assert_eq!(case, LiftCase::LowRankSteinberg { t: 1 });
        assert!(module.block.is_empty());
        assert_eq!(module.tempered.to_string(), "theta_3(stwrap_2(tau))");
        assert_eq!(module.tempered.l_exact(), Some(1));
    }

    #[test]
    fn going_up_with_even_multiplicity_inserts_steinberg() {
        let m = module(&[(1, 2)], TemperedToken::atom_with("tau", 1, &[(1, 2)]));
        let LiftResult::Module { module, case, .. } = lift(&m, -5, Tower::Up).unwrap() else { panic!() };
        assert_eq!(case, LiftCase::GoingUp { t: 1, steinberg: true });
        // No segment ends in 1, so the single rung is empty and becomes |.|^2.
        assert_eq!(module.block.segments().unwrap(), vec![Segment::i(2, 2), Segment::i(1, 2), Segment::i(0, 1)]);
        assert_eq!(module.tempered.to_string(), "sigma(theta_-3(tau))");
        assert!(round_trip(&m, -5, Tower::Up).unwrap());
    }

    #[test]
    fn parity_of_level_is_checked() {
        assert!(matches!(lift(&staircase(None), 4, Tower::Down), Err(CoreError::LevelParity { .. })));
    }

    #[test]
    fn normalize_expands_slot_below_first_occurrence() {
        let m = module(&[(2, 2)], TemperedToken::atom(5));
        // Nothing ends in 1, so at level 3 only the tempered part moves.
        let LiftResult::Module { module, .. } = lift_with(&m, 3, Tower::Down, false).unwrap() else { panic!() };
        assert_eq!(module.tempered.to_string(), "theta_3(tau)");
        assert_eq!(module.block.to_string(), "|.|^2");
        let LiftResult::Module { module, .. } = lift_with(&m, 3, Tower::Down, true).unwrap() else { panic!() };
        assert_eq!(module.tempered.to_string(), "theta_5(tau)");
        assert_eq!(module.block.to_string(), "|.|^2 x |.|^2");
    }

    #[test]
    fn exceptional_steinberg() {
        assert!(is_exceptional_steinberg(Segment::i(1, 2), 5));
        assert!(!is_exceptional_steinberg(Segment::i(1, 3), 5));
        assert!(is_exceptional_steinberg(Segment::i(-1, 2), 5));
    }
}
