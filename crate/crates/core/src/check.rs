//! Property suites over the enumerated corpus. Each suite reports
//! counterexamples as module sources that `parse` accepts.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use thetalift_oracles as oracle;

use crate::corpus::{enumerate_corpus, is_positive, module_corpus};
use crate::dsl::{render, render_block};
use crate::error::{CoreError, Result};
use crate::grothendieck::{self, GLWord, RingElement};
use crate::halfint::HalfInt;
use crate::lifts::{lift, round_trip, LiftResult};
use crate::model::{AlphaBlock, Form, GLFactor, Pair, StandardModule};
use crate::occurrence::{first_occurrence, Tower};
use crate::rearrange::{
    invert, ladder_transform, len_k, longest_ladder, reduce_chain, run_algorithm, ReduceCase, Rearranged,
};
use crate::segment::{contragredient, Segment};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Reversibility,
    Equivalence,
    OccurrenceOracle,
    Conservation,
    Roundtrip,
    Ring,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Reversibility,
        Suite::Equivalence,
        Suite::OccurrenceOracle,
        Suite::Conservation,
        Suite::Roundtrip,
        Suite::Ring,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Reversibility => "reversibility",
            Suite::Equivalence => "equivalence",
            Suite::OccurrenceOracle => "occurrence-oracle",
            Suite::Conservation => "conservation",
            Suite::Roundtrip => "roundtrip",
            Suite::Ring => "ring",
        })
    }
}

impl FromStr for Suite {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| CoreError::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

/// Corpus bounds for the suites.
#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub max_segments: usize,
    pub max_end: HalfInt,
    /// Block size for the Case-1 multiplicity sweep of the ring suite.
    pub ring_segments: usize,
    /// Largest segment length in the coassociativity sweep.
    pub ring_len: i64,
    /// How far past the first occurrence the round trip explores.
    pub extra_levels: i64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { max_segments: 4, max_end: HalfInt::int(3), ring_segments: 3, ring_len: 5, extra_levels: 6 }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub source: String,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub suite: Suite,
    pub cases: usize,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{}: {} cases, {} counterexamples, {:.2?}\n",
            self.suite,
            self.cases,
            self.counterexamples.len(),
            self.elapsed
        );
        for c in &self.counterexamples {
            s.push_str(&format!("counterexample: {}\n  {}\n", c.source, c.detail));
        }
        s
    }
}

/// One case: `Ok(())`, or a counterexample.
type Outcome = std::result::Result<(), Counterexample>;

fn fail(source: String, detail: impl Into<String>) -> Outcome {
    Err(Counterexample { source, detail: detail.into() })
}

fn finish(suite: Suite, start: Instant, outcomes: Vec<Outcome>) -> CheckReport {
    let cases = outcomes.len();
    let counterexamples = outcomes.into_iter().filter_map(|o| o.err()).collect();
    CheckReport { suite, cases, counterexamples, elapsed: start.elapsed() }
}

pub fn run(suite: Suite, cfg: &CheckConfig) -> Result<CheckReport> {
    let start = Instant::now();
    let outcomes = match suite {
        Suite::Reversibility => algorithm_cases(cfg, reversibility)?,
        Suite::Equivalence => algorithm_cases(cfg, equivalence)?,
        Suite::OccurrenceOracle => module_cases(cfg, occurrence_oracle)?,
        Suite::Conservation => module_cases(cfg, conservation)?,
        Suite::Roundtrip => module_cases(cfg, |m| roundtrip(m, cfg.extra_levels))?,
        Suite::Ring => ring(cfg)?,
    };
    Ok(finish(suite, start, outcomes))
}

/// Positive blocks of both classes, with every `k` that ends a segment.
fn algorithm_inputs(cfg: &CheckConfig) -> Result<Vec<(Pair, AlphaBlock, HalfInt)>> {
    let mut out = Vec::new();
    for pair in [Pair::SpO, Pair::MpO] {
        for block in enumerate_corpus(cfg.max_segments, cfg.max_end, pair.alpha())? {
            if !is_positive(&block) {
                continue;
            }
            let mut ends: Vec<HalfInt> = block.segments()?.iter().map(|s| s.b()).collect();
            ends.dedup();
            for k in ends {
                out.push((pair, block.clone(), k));
            }
        }
    }
    Ok(out)
}

fn algorithm_cases(
    cfg: &CheckConfig,
    f: fn(Pair, &AlphaBlock, HalfInt) -> Option<Outcome>,
) -> Result<Vec<Outcome>> {
    let inputs = algorithm_inputs(cfg)?;
    Ok(inputs.par_iter().filter_map(|(p, b, k)| f(*p, b, *k)).collect())
}

fn module_cases(cfg: &CheckConfig, f: impl Fn(&StandardModule) -> Outcome + Sync + Send) -> Result<Vec<Outcome>> {
    let mut modules = module_corpus(Pair::SpO, cfg.max_segments, cfg.max_end)?;
    modules.extend(module_corpus(Pair::MpO, cfg.max_segments, cfg.max_end)?);
    Ok(modules.par_iter().map(f).collect())
}

fn err_detail(e: &CoreError) -> String {
    format!("error: {e}")
}

/// Undoing the algorithm recovers the block; only runs with at least one
/// iteration count.
fn reversibility(pair: Pair, block: &AlphaBlock, k: HalfInt) -> Option<Outcome> {
    let src = || render_block(pair, &block.factors);
    let r = match run_algorithm(block, k, false) {
        Ok((r, _)) => r,
        Err(e) => return Some(fail(src(), format!("k = {k}: {}", err_detail(&e)))),
    };
    if r.iterations == 0 {
        return None;
    }
    Some(match invert(&r) {
        Ok(back) if back == *block => Ok(()),
        Ok(back) => fail(src(), format!("k = {k}: output {r} inverts to {back}")),
        Err(e) => fail(src(), format!("k = {k}: output {r}: {}", err_detail(&e))),
    })
}

fn doubled(s: &Segment) -> oracle::Seg {
    (s.a().doubled(), s.b().doubled())
}

/// The literal algorithm against the ladder description, and its iteration
/// count against an exhaustive ladder search.
fn equivalence(pair: Pair, block: &AlphaBlock, k: HalfInt) -> Option<Outcome> {
    let src = || render_block(pair, &block.factors);
    let run = || -> Result<Outcome> {
        let (r, _) = run_algorithm(block, k, false)?;
        let via_ladder = ladder_transform(block, k)?;
        if r != via_ladder {
            return Ok(fail(src(), format!("k = {k}: algorithm gives {r}, ladder gives {via_ladder}")));
        }
        let segs: Vec<oracle::Seg> = block.segments()?.iter().map(doubled).collect();
        let brute = oracle::longest_ladder(&segs, k.doubled());
        let ours: Vec<oracle::Seg> = longest_ladder(block, k)?.rungs.iter().map(doubled).collect();
        let len = len_k(block, k)?;
        if ours != brute || len != brute.len() {
            return Ok(fail(src(), format!("k = {k}: len_k = {len}, ladder {ours:?}, exhaustive {brute:?}")));
        }
        Ok(Ok(()))
    };
    Some(run().unwrap_or_else(|e| fail(src(), format!("k = {k}: {}", err_detail(&e)))))
}

fn l_and_parity(m: &StandardModule) -> (i64, bool) {
    match &m.tempered {
        crate::tempered::TemperedToken::Atom { l_down, mult, .. } => {
            (*l_down, mult.get(l_down).is_some_and(|c| c % 2 == 0))
        }
        _ => unreachable!("corpus modules have atoms"),
    }
}

fn occurrence_oracle(m: &StandardModule) -> Outcome {
    let src = render(m);
    let r = match first_occurrence(m) {
        Ok(r) => r,
        Err(e) => return fail(src, err_detail(&e)),
    };
    let (l, even) = l_and_parity(m);
    let mut seq: Vec<oracle::Seg> = m.block.segments().expect("delta block").iter().map(doubled).collect();
    seq.reverse();
    let brute = oracle::occurrence_f(&seq, l, even);
    if r.f != brute {
        return fail(src, format!("f = {}, exhaustive search gives {brute}", r.f));
    }
    if !r.witness.is_ladder() || r.witness.len() != r.f {
        return fail(src, format!("witness {} does not have {} rungs", r.witness, r.f));
    }
    Ok(())
}

fn conservation(m: &StandardModule) -> Outcome {
    let degree: i64 = m.block.segments().expect("delta block").iter().map(|s| s.len()).sum();
    for epsilon in [1, -1] {
        let mut m = m.clone();
        m.n = Some(degree + 24);
        m.epsilon = epsilon;
        let src = render(&m);
        let run = || -> Result<Option<String>> {
            let r = first_occurrence(&m)?;
            let n = m.n.expect("set above");
            if r.l_up + r.l_down != -2 {
                return Ok(Some(format!("l_up + l_down = {}", r.l_up + r.l_down)));
            }
            let dims = r.m_up.zip(r.m_down).map(|(a, b)| a + b);
            if dims != Some(2 * n + 2 * epsilon + 2) {
                return Ok(Some(format!("m_up + m_down = {dims:?}, expected {}", 2 * n + 2 * epsilon + 2)));
            }
            for (tower, first) in [(Tower::Down, r.l_down), (Tower::Up, r.l_up)] {
                if lift(&m, first, tower)? == LiftResult::Zero {
                    return Ok(Some(format!("{tower} lift at the first occurrence {first} is zero")));
                }
                if lift(&m, first + 2, tower)? != LiftResult::Zero {
                    return Ok(Some(format!("{tower} lift at {} should be zero", first + 2)));
                }
            }
            Ok(None)
        };
        match run() {
            Ok(None) => {}
            Ok(Some(d)) => return fail(src, d),
            Err(e) => return fail(src, err_detail(&e)),
        }
    }
    Ok(())
}

/// Negative levels examined for one module: on the going-down tower every
/// negative level down to `-(l_down + 2 extra)`, on the going-up tower the
/// first occurrence and `extra` levels past it.
pub fn roundtrip_levels(m: &StandardModule, extra: i64) -> Result<Vec<(i64, Tower)>> {
    let r = first_occurrence(m)?;
    let kappa = m.kappa();
    let mut out = Vec::new();
    let mut l = kappa;
    while l <= r.l_down.max(0) + 2 * extra {
        out.push((-l, Tower::Down));
        l += 2;
    }
    for i in 0..=extra {
        out.push((r.l_up - 2 * i, Tower::Up));
    }
    Ok(out)
}

fn roundtrip(m: &StandardModule, extra: i64) -> Outcome {
    let src = render(m);
    let levels = match roundtrip_levels(m, extra) {
        Ok(v) => v,
        Err(e) => return fail(src, err_detail(&e)),
    };
    for (level, tower) in levels {
        match round_trip(m, level, tower) {
            Ok(true) => {}
            Ok(false) => {
                let there = lift(m, level, tower).ok().and_then(|r| r.module().map(render));
                return fail(src, format!("{tower} level {level}: lift {there:?} does not lift back"));
            }
            Err(e) => return fail(src, format!("{tower} level {level}: {}", err_detail(&e))),
        }
    }
    Ok(())
}

fn to_fac(s: &Segment, zeta: bool) -> oracle::Fac {
    (s.a().doubled(), s.b().doubled(), zeta && s.len() > 1)
}

fn ring_terms(r: &RingElement) -> Vec<(oracle::Term, BigInt)> {
    let mut out: Vec<(oracle::Term, BigInt)> = r
        .terms()
        .map(|(l, rt, c)| {
            let conv = |w: &GLWord| -> Vec<oracle::Fac> {
                let mut v: Vec<oracle::Fac> = w.factors().iter().map(|(s, f)| to_fac(s, *f == Form::Zeta)).collect();
                v.sort();
                v
            };
            ((conv(l), conv(&rt.word)), c.clone())
        })
        .collect();
    out.sort();
    out
}

fn oracle_terms(terms: Vec<oracle::Term>) -> Vec<(oracle::Term, BigInt)> {
    let mut map = std::collections::BTreeMap::<oracle::Term, BigInt>::new();
    for t in terms {
        *map.entry(t).or_insert_with(BigInt::default) += 1;
    }
    map.into_iter().collect()
}

fn ring_segments(cfg: &CheckConfig) -> Vec<Segment> {
    let mut out = Vec::new();
    let m2 = cfg.max_end.doubled();
    for a2 in -m2..=m2 {
        for len in 1..=cfg.ring_len {
            out.push(Segment::d(a2, a2 + 2 * (len - 1)));
        }
    }
    out
}

fn ring(cfg: &CheckConfig) -> Result<Vec<Outcome>> {
    let segs = ring_segments(cfg);
    let forms = [Form::Delta, Form::Zeta];
    let word_src = |s: &Segment, f: Form| {
        let fac = if f == Form::Zeta { GLFactor::Zeta(*s) } else { GLFactor::Delta(*s) };
        let pair = if s.class() == HalfInt::ZERO { Pair::SpO } else { Pair::MpO };
        render_block(pair, &[fac])
    };
    let mut outcomes: Vec<Outcome> = segs
        .par_iter()
        .flat_map_iter(|s| forms.iter().map(move |&f| (*s, f)))
        .map(|(s, f)| {
            if !grothendieck::coassociative(s, f) {
                return fail(word_src(&s, f), "m* is not coassociative here");
            }
            let w = s.len() + 1;
            let ours = grothendieck::big_m_star(s, f);
            if ours.total() != BigInt::from(w * (w + 1) / 2) {
                return fail(word_src(&s, f), format!("M* has {} terms", ours.total()));
            }
            let zeta = f == Form::Zeta;
            let brute = oracle_terms(oracle::big_m_star(s.a().doubled(), s.b().doubled(), zeta));
            if ring_terms(&ours) != brute {
                return fail(word_src(&s, f), "M* differs from the literal double sum");
            }
            let small = oracle_terms(oracle::m_star(s.a().doubled(), s.b().doubled(), zeta));
            if ring_terms(&grothendieck::m_star(s, f)) != small {
                return fail(word_src(&s, f), "m* differs from the literal sum");
            }
            Ok(())
        })
        .collect();
    outcomes.extend(grading_cases());
    outcomes.extend(case_one_cases(cfg)?);
    Ok(outcomes)
}

/// Products of up to three `m*` and `M*` factors keep total degree.
fn grading_cases() -> Vec<Outcome> {
    let pool: Vec<(Segment, Form)> = vec![
        (Segment::i(0, 0), Form::Delta),
        (Segment::i(1, 2), Form::Delta),
        (Segment::i(-1, 1), Form::Zeta),
        (Segment::d(1, 3), Form::Delta),
        (Segment::d(-1, 3), Form::Zeta),
    ];
    let mut combos: Vec<Vec<(Segment, Form)>> = vec![vec![]];
    for _ in 0..3 {
        let next: Vec<Vec<(Segment, Form)>> =
            combos.iter().flat_map(|c| pool.iter().map(move |x| [c.clone(), vec![*x]].concat())).collect();
        combos.extend(next.into_iter().filter(|c| c.len() <= 3));
    }
    combos.sort();
    combos.dedup();
    combos
        .par_iter()
        .map(|c| {
            let deg: i64 = c.iter().map(|(s, _)| s.len()).sum();
            let small = c.iter().fold(RingElement::one(), |acc, (s, f)| acc.mult(&grothendieck::m_star(*s, *f)));
            let big = c.iter().fold(RingElement::one(), |acc, (s, f)| acc.mult(&grothendieck::big_m_star(*s, *f)));
            let ok = |r: &RingElement| r.terms().all(|(l, rt, _)| l.degree() + rt.word.degree() == deg);
            let mu = grothendieck::mu_star_product(c);
            let mu_ok = mu.terms().all(|(l, _, _)| l.degree() <= deg);
            if ok(&small) && ok(&big) && mu_ok {
                Ok(())
            } else {
                let names: Vec<String> = c.iter().map(|(s, f)| format!("{f:?}{s}")).collect();
                fail(format!("pair=SpO; ; tau(l=-1)"), format!("grading fails for {}", names.join(" x ")))
            }
        })
        .collect()
}

/// One Case-1 state met while reducing an algorithm output: the leading
/// `m` copies of `[a,b]` are peeled off and `m` copies of `[-b,-a]` are
/// counted among the left legs of the full expansion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CaseOneCount {
    pub source: String,
    pub target: String,
    pub count: BigInt,
    pub exhaustive: u64,
    /// The peeled segment is its own dual, `a + b = 0`.
    pub self_dual: bool,
}

/// Every distinct Case-1 state of the reduction chains over positive blocks
/// with at most `ring_segments` segments.
pub fn case_one_counts(cfg: &CheckConfig) -> Result<Vec<CaseOneCount>> {
    let small = CheckConfig { max_segments: cfg.ring_segments, ..*cfg };
    let inputs = algorithm_inputs(&small)?;
    let per_input: Vec<Result<Vec<(Pair, Rearranged, Vec<Segment>)>>> = inputs
        .par_iter()
        .map(|(pair, block, k)| {
            let (r, _) = run_algorithm(block, *k, false)?;
            let mut found = Vec::new();
            let mut state = r.clone();
            for step in reduce_chain(&r)? {
                if step.case == ReduceCase::Case1 {
                    found.push((*pair, state.clone(), step.delta.clone()));
                }
                state = step.residual;
            }
            Ok(found)
        })
        .collect();
    let mut states: Vec<(String, Pair, Rearranged, Vec<Segment>)> = Vec::new();
    for found in per_input {
        for (pair, r, delta) in found? {
            states.push((render_block(pair, &r.factors()), pair, r, delta));
        }
    }
    states.sort_by(|x, y| x.0.cmp(&y.0));
    states.dedup_by(|x, y| x.0 == y.0);
    Ok(states
        .par_iter()
        .map(|(src, _, state, delta)| {
            let factors: Vec<(Segment, Form)> = state
                .factors()
                .iter()
                .map(|f| match f {
                    GLFactor::Zeta(s) => (*s, Form::Zeta),
                    other => (other.as_delta().expect("D or Z"), Form::Delta),
                })
                .collect();
            let target = GLWord::from_factors(delta.iter().map(|s| (contragredient(s), Form::Delta)));
            let facs: Vec<oracle::Fac> = factors.iter().map(|(s, f)| to_fac(s, *f == Form::Zeta)).collect();
            let tfacs: Vec<oracle::Fac> = delta.iter().map(|s| to_fac(&contragredient(s), false)).collect();
            CaseOneCount {
                source: src.clone(),
                target: target.to_string(),
                count: grothendieck::count_leading(&factors, &target),
                exhaustive: oracle::count_leading(&facs, &tfacs),
                self_dual: delta.first().is_some_and(|s| s.exponent_sum() == HalfInt::ZERO),
            }
        })
        .collect())
}

fn case_one_cases(cfg: &CheckConfig) -> Result<Vec<Outcome>> {
    Ok(case_one_counts(cfg)?
        .into_iter()
        .map(|c| {
            if c.count != BigInt::from(c.exhaustive) {
                fail(c.source, format!("count_leading = {}, exhaustive expansion gives {}", c.count, c.exhaustive))
            } else if !c.count.is_one() {
                let why = if c.self_dual { " (self-dual leading segment)" } else { "" };
                fail(c.source, format!("target {} appears {} times{why}", c.target, c.count))
            } else {
                Ok(())
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> CheckConfig {
        CheckConfig { max_segments: 2, max_end: HalfInt::int(2), ring_segments: 2, ring_len: 3, extra_levels: 2 }
    }

    #[test]
    fn suites_pass_on_a_tiny_corpus() {
        for suite in Suite::ALL {
            let r = run(suite, &tiny()).unwrap();
            assert!(r.cases > 0, "{suite} ran no cases");
            if suite == Suite::Ring {
                assert!(r.counterexamples.iter().all(|c| c.detail.contains("self-dual")), "{}", r.render());
            } else {
                assert!(r.passed(), "{}", r.render());
            }
        }
    }

    #[test]
    fn case_one_counts_split_on_self_duality() {
        let counts = case_one_counts(&tiny()).unwrap();
        assert!(counts.iter().any(|c| !c.self_dual));
        for c in &counts {
            assert_eq!(c.count, BigInt::from(c.exhaustive), "{}", c.source);
            let want = if c.self_dual { 3 } else { 1 };
            assert_eq!(c.count, BigInt::from(want), "{}", c.source);
        }
        let zero = counts.iter().find(|c| c.source == "pair=SpO; D[0,0] x Z[1,1] ; tau(l=-1)").unwrap();
        assert!(zero.self_dual);
    }

    #[test]
    fn suite_names_parse() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
