//! The rearrangement algorithm on sorted alpha-blocks, its ladder form, its
//! inverse, and the reduction steps used to prove the unique-quotient property.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{CoreError, Result};
use crate::halfint::HalfInt;
use crate::model::{sort_desc, write_factors, AlphaBlock, GLFactor};
use crate::segment::Segment;

/// Output shape `D[a_r,b_r] x .. x D[a_j,b_j] x Z[b_j+1,k] x D[a_{j-1},b_{j-1}] x .. x D[a_1,b_1]`.
///
/// Empty segments are never stored. With zero iterations `zeta` is the empty
/// `[k+1,k]`, `prefix` is the whole block and `suffix` is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rearranged {
    pub alpha: HalfInt,
    pub prefix: Vec<Segment>,
    pub zeta: Segment,
    pub suffix: Vec<Segment>,
    pub k: HalfInt,
    pub iterations: usize,
}

impl Rearranged {
    pub fn unchanged(block: &AlphaBlock, k: HalfInt) -> Result<Self> {
        Ok(Rearranged {
            alpha: block.alpha,
            prefix: block.segments()?,
            zeta: Segment::empty_at(k.add_int(1)),
            suffix: Vec::new(),
            k,
            iterations: 0,
        })
    }

    /// Reads a factor list with at most one Z factor. Without one, `k` must be
    /// given and the result has zero iterations.
    pub fn from_factors(alpha: HalfInt, factors: &[GLFactor], k: Option<HalfInt>) -> Result<Self> {
        let mut prefix = Vec::new();
        let mut suffix = Vec::new();
        let mut zeta = None;
        for f in factors {
            match f {
                GLFactor::Delta(s) if s.is_empty() => {}
                GLFactor::Delta(s) if zeta.is_none() => prefix.push(*s),
                GLFactor::Delta(s) => suffix.push(*s),
                GLFactor::Zeta(z) if zeta.is_none() => zeta = Some(*z),
                GLFactor::Zeta(_) => return Err(CoreError::Structural("more than one Z factor".into())),
                GLFactor::LQ { .. } => return Err(CoreError::UnsupportedForm(f.to_string())),
            }
        }
        for s in prefix.iter().chain(&suffix) {
            if s.class() != alpha {
                return Err(CoreError::ClassMismatch(s.to_string(), format!("alpha = {alpha}")));
            }
        }
        let r = match zeta {
            None => {
                let k = k.ok_or_else(|| CoreError::Structural("no Z factor and no k given".into()))?;
                Rearranged { alpha, prefix, zeta: Segment::empty_at(k.add_int(1)), suffix, k, iterations: 0 }
            }
            Some(z) => {
                if z.class() != alpha {
                    return Err(CoreError::ClassMismatch(z.to_string(), format!("alpha = {alpha}")));
                }
                if let Some(k) = k {
                    if k != z.b() {
                        return Err(CoreError::Structural(format!("Z{z} does not end in k = {k}")));
                    }
                }
                Rearranged { alpha, prefix, zeta: z, suffix, k: z.b(), iterations: z.len().max(0) as usize }
            }
        };
        r.check_shape()?;
        Ok(r)
    }

    /// Ordering and zeta bookkeeping.
    pub fn check_shape(&self) -> Result<()> {
        let all: Vec<Segment> = self.prefix.iter().chain(&self.suffix).copied().collect();
        if all.windows(2).any(|w| w[0] < w[1]) {
            return Err(CoreError::Structural(format!("segments of {self} are not in decreasing order")));
        }
        if all.iter().any(|s| s.is_empty()) {
            return Err(CoreError::Structural("empty segments are not stored".into()));
        }
        if self.zeta.b() != self.k && !self.zeta.is_empty() {
            return Err(CoreError::Structural(format!("Z{} does not end in k = {}", self.zeta, self.k)));
        }
        if self.zeta.len().max(0) as usize != self.iterations {
            return Err(CoreError::Structural("iteration count differs from the length of Z".into()));
        }
        if self.iterations == 0 && !self.suffix.is_empty() {
            return Err(CoreError::Structural("segments after an empty Z".into()));
        }
        Ok(())
    }

    /// `b_j = k - iterations`.
    pub fn b_j(&self) -> HalfInt {
        self.zeta.a().add_int(-1)
    }

    /// `[a_j,b_j]`: the last prefix segment if it ends in `b_j`, else empty.
    pub fn altered_bottom(&self) -> Segment {
        let bj = self.b_j();
        match self.prefix.last() {
            Some(s) if s.b() == bj => *s,
            _ => Segment::empty_at(bj.add_int(1)),
        }
    }

    pub fn factors(&self) -> Vec<GLFactor> {
        let mut out: Vec<GLFactor> = self.prefix.iter().map(|s| GLFactor::Delta(*s)).collect();
        if !self.zeta.is_empty() {
            out.push(GLFactor::Zeta(self.zeta));
        }
        out.extend(self.suffix.iter().map(|s| GLFactor::Delta(*s)));
        out
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.prefix.iter().chain(&self.suffix).copied().collect()
    }

    /// Sum of segment lengths including Z. Every reduction step lowers it.
    pub fn degree(&self) -> i64 {
        self.segments().iter().map(|s| s.len()).sum::<i64>() + self.zeta.len().max(0)
    }
}

impl fmt::Display for Rearranged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_factors(f, &self.factors())
    }
}

/// Rungs listed bottom to top: `[c_1,d_1], .., [c_t,d_t]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Ladder {
    pub rungs: Vec<Segment>,
}

impl Ladder {
    pub fn len(&self) -> usize {
        self.rungs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rungs.is_empty()
    }

    /// Consecutive ends and strictly increasing starts.
    pub fn is_ladder(&self) -> bool {
        self.rungs.windows(2).all(|w| w[1].b() == w[0].b().add_int(1) && w[0].a() < w[1].a())
    }

    pub fn widths(&self) -> Vec<i64> {
        self.rungs.iter().map(|s| s.width()).collect()
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.rungs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Chains of distinct segments with consecutive ends and strictly monotone
/// starts. Shared by the ladder searches here, in occurrence and in lifts.
pub(crate) struct Chains {
    distinct: Vec<Segment>,
}

impl Chains {
    pub(crate) fn new(segs: &[Segment]) -> Self {
        let set: BTreeSet<Segment> = segs.iter().copied().filter(|s| !s.is_empty()).collect();
        Chains { distinct: set.into_iter().collect() }
    }

    pub(crate) fn ending_in(&self, d: HalfInt) -> impl Iterator<Item = Segment> + '_ {
        self.distinct.iter().copied().filter(move |s| s.b() == d)
    }

    fn below(&self, s: Segment) -> impl Iterator<Item = Segment> + '_ {
        let d = s.b().add_int(-1);
        self.ending_in(d).filter(move |x| x.a() < s.a())
    }

    fn above(&self, s: Segment) -> impl Iterator<Item = Segment> + '_ {
        let d = s.b().add_int(1);
        self.ending_in(d).filter(move |x| x.a() > s.a())
    }

    /// Whether a chain of exactly `len` rungs hangs down from `s` with a bottom
    /// rung accepted by `bottom_ok`.
    fn reach_down(
        &self,
        s: Segment,
        len: usize,
        bottom_ok: &dyn Fn(&Segment) -> bool,
        memo: &mut HashMap<(Segment, usize), bool>,
    ) -> bool {
        if len == 0 {
            return false;
        }
        if len == 1 {
            return bottom_ok(&s);
        }
        if let Some(&v) = memo.get(&(s, len)) {
            return v;
        }
        let v = self.below(s).any(|x| self.reach_down(x, len - 1, bottom_ok, memo));
        memo.insert((s, len), v);
        v
    }

    /// Longest `len` for which `reach_down(s, len)` holds, 0 if none.
    pub(crate) fn longest_down(&self, s: Segment, bottom_ok: &dyn Fn(&Segment) -> bool) -> usize {
        let mut memo = HashMap::new();
        let max = self.depth_down(s);
        (1..=max).rev().find(|&l| self.reach_down(s, l, bottom_ok, &mut memo)).unwrap_or(0)
    }

    fn depth_down(&self, s: Segment) -> usize {
        1 + self.below(s).map(|x| self.depth_down(x)).max().unwrap_or(0)
    }

    /// The chain of exactly `len` rungs from `top` downwards that minimizes
    /// widths from the top, returned bottom first. `None` if there is none.
    pub(crate) fn pick_down(
        &self,
        top: Segment,
        len: usize,
        bottom_ok: &dyn Fn(&Segment) -> bool,
    ) -> Option<Ladder> {
        let mut memo = HashMap::new();
        if !self.reach_down(top, len, bottom_ok, &mut memo) {
            return None;
        }
        let mut rungs = vec![top];
        let mut cur = top;
        for left in (1..len).rev() {
            cur = self
                .below(cur)
                .filter(|x| self.reach_down(*x, left, bottom_ok, &mut memo))
                .max_by_key(|x| x.a())
                .expect("reachability promised a rung");
            rungs.push(cur);
        }
        rungs.reverse();
        Some(Ladder { rungs })
    }

    /// Longest chain going up from `s` (counting `s`).
    pub(crate) fn longest_up(&self, s: Segment, memo: &mut HashMap<Segment, usize>) -> usize {
        if let Some(&v) = memo.get(&s) {
            return v;
        }
        let v = 1 + self.above(s).map(|x| self.longest_up(x, memo)).max().unwrap_or(0);
        memo.insert(s, v);
        v
    }

    /// The upward chain from `bottom` of length `min(longest, cap)` that
    /// maximizes widths from the bottom. `bottom` itself may be empty or
    /// absent from the set.
    pub(crate) fn pick_up(&self, bottom: Segment, cap: usize) -> Ladder {
        let mut memo = HashMap::new();
        let target = self.longest_up(bottom, &mut memo).min(cap);
        let mut rungs = vec![bottom];
        let mut cur = bottom;
        while rungs.len() < target {
            let need = target - rungs.len();
            cur = self
                .above(cur)
                .filter(|x| self.longest_up(*x, &mut memo) >= need)
                .min_by_key(|x| x.a())
                .expect("length promised a rung");
            rungs.push(cur);
        }
        Ladder { rungs }
    }
}

/// Pads `ladder` upwards with empty segments `[d+1,d]` to length `t`.
pub(crate) fn pad_with_empties(ladder: &mut Ladder, t: usize) {
    while ladder.rungs.len() < t {
        let d = ladder.rungs.last().expect("nonempty ladder").b().add_int(1);
        ladder.rungs.push(Segment::empty_at(d.add_int(1)));
    }
}

/// Removes one copy of `s`; returns whether it was present.
pub(crate) fn remove_one(v: &mut Vec<Segment>, s: Segment) -> bool {
    match v.iter().position(|x| *x == s) {
        Some(i) => {
            v.remove(i);
            true
        }
        None => false,
    }
}

/// Number of entries of a decreasing list that are `>= s`, i.e. the
/// position immediately right of every copy of `s`.
pub(crate) fn insertion_point(sorted_desc: &[Segment], s: Segment) -> usize {
    sorted_desc.iter().take_while(|x| **x >= s).count()
}

/// `[b_0,k]`: the shortest segment ending in `k`.
pub fn shortest_ending_in(segs: &[Segment], k: HalfInt) -> Option<Segment> {
    segs.iter().copied().filter(|s| s.b() == k && !s.is_empty()).max_by_key(|s| s.a())
}

fn check_input(block: &AlphaBlock, k: HalfInt) -> Result<Vec<Segment>> {
    let segs = block.segments()?;
    if !k.same_class(block.alpha) {
        return Err(CoreError::ClassMismatch(format!("k = {k}"), format!("alpha = {}", block.alpha)));
    }
    if let Some(w) = segs.windows(2).find(|w| w[0] < w[1]) {
        return Err(CoreError::NotSorted(format!("{} precedes {}", w[0], w[1])));
    }
    if segs.iter().any(|s| s.is_empty()) {
        return Err(CoreError::Precondition("empty segment in block".into()));
    }
    Ok(segs)
}

/// State of the block after one pseudocode line, `None` if nothing happened.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IterationRecord {
    pub l_factor: GLFactor,
    pub line6: Option<Vec<GLFactor>>,
    pub line7: Option<Vec<GLFactor>>,
    pub line8: Option<Vec<GLFactor>>,
    pub line9: Option<Vec<GLFactor>>,
    /// `(a, e, b)` set by lines 10-12, `None` on exit.
    pub next: Option<(HalfInt, HalfInt, HalfInt)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgTrace {
    pub k: HalfInt,
    pub b0: Option<HalfInt>,
    pub initial: Vec<GLFactor>,
    pub iterations: Vec<IterationRecord>,
}

impl AlgTrace {
    /// Last recorded block state.
    pub fn final_state(&self) -> Vec<GLFactor> {
        let mut state = self.initial.clone();
        for it in &self.iterations {
            for s in [&it.line6, &it.line7, &it.line8, &it.line9].into_iter().flatten() {
                state = s.clone();
            }
        }
        state
    }

    /// One line per pseudocode line per iteration. `tail` is appended to
    /// every block state, e.g. `"; tau"`.
    pub fn render(&self, tail: &str) -> String {
        let mut out = String::new();
        let state = |f: &[GLFactor]| -> String {
            let mut s = String::new();
            for (i, x) in f.iter().enumerate() {
                if i > 0 {
                    s.push_str(" x ");
                }
                match x {
                    GLFactor::LQ { .. } => s.push('L'),
                    other => s.push_str(&other.to_string()),
                }
            }
            if !tail.is_empty() {
                s.push(' ');
                s.push_str(tail);
            }
            s
        };
        out.push_str(&format!("k = {}\n", self.k));
        match self.b0 {
            None => {
                out.push_str(&format!("3: no segment ends in {}\n", self.k));
                out.push_str(&format!("result: {}\n", state(&self.initial)));
                return out;
            }
            Some(b0) => out.push_str(&format!("3: b0 = {b0}, e = {}\n", self.k)),
        }
        for (i, it) in self.iterations.iter().enumerate() {
            out.push_str(&format!("iteration {}\n", i + 1));
            let l_text = match it.l_factor {
                GLFactor::LQ { zeta, delta } if zeta.is_empty() => GLFactor::Delta(delta).to_string(),
                GLFactor::LQ { zeta, delta } => {
                    format!("L({} x {})", GLFactor::Zeta(zeta), GLFactor::Delta(delta))
                }
                other => other.to_string(),
            };
            out.push_str(&format!("5: L = {l_text}\n"));
            for (n, line) in [(6, &it.line6), (7, &it.line7), (8, &it.line8), (9, &it.line9)] {
                match line {
                    None => out.push_str(&format!("{n}: nothing happens\n")),
                    Some(f) => out.push_str(&format!("{n}: {}\n", state(f))),
                }
            }
            match it.next {
                Some((a, e, b)) => out.push_str(&format!("10-12: a = {a}, e = {e}, b = {b}\n")),
                None => out.push_str("10: exit\n"),
            }
        }
        out.push_str(&format!("result: {}\n", state(&self.final_state())));
        out
    }
}

/// Runs the pseudocode literally on a sorted block of D factors.
pub fn run_algorithm(block: &AlphaBlock, k: HalfInt, want_trace: bool) -> Result<(Rearranged, Option<AlgTrace>)> {
    let segs = check_input(block, k)?;
    let initial: Vec<GLFactor> = segs.iter().map(|s| GLFactor::Delta(*s)).collect();
    let Some(top) = shortest_ending_in(&segs, k) else {
        let trace = AlgTrace { k, b0: None, initial, iterations: Vec::new() };
        return Ok((Rearranged::unchanged(block, k)?, want_trace.then_some(trace)));
    };
    let three_halves = HalfInt::from_doubled(3);
    let mut items = initial.clone();
    let mut records = Vec::new();
    let mut b = top.a();
    let mut e = k;
    let mut first = true;
    loop {
        // Lines 5 and 6.
        let (mut pos, l_factor, line6) = if first {
            let pos = items.iter().position(|f| *f == GLFactor::Delta(top)).expect("top is in the block");
            let l = GLFactor::lq(Segment::empty_at(k.add_int(1)), top)?;
            items[pos] = l;
            (pos, l, None)
        } else {
            let z = items
                .iter()
                .position(|f| matches!(f, GLFactor::Zeta(_)))
                .ok_or_else(|| CoreError::Inconsistent("lost the Z factor".into()))?;
            let GLFactor::Zeta(zeta) = items[z] else { unreachable!() };
            let target = GLFactor::Delta(Segment::new(b, e)?);
            let d = items[z + 1..]
                .iter()
                .position(|f| *f == target)
                .map(|i| i + z + 1)
                .ok_or_else(|| CoreError::Inconsistent(format!("no {target} right of Z")))?;
            items.remove(d);
            let l = GLFactor::lq(zeta, Segment::new(b, e)?)?;
            items[z] = l;
            (z, l, Some(items.clone()))
        };
        // Line 7.
        let start = pos;
        while pos + 1 < items.len() {
            match items[pos + 1] {
                GLFactor::Delta(s) if s.b() == e && s.a() <= b => {
                    items.swap(pos, pos + 1);
                    pos += 1;
                }
                _ => break,
            }
        }
        let line7 = (pos != start).then(|| items.clone());
        // Line 8.
        let start = pos;
        while pos + 1 < items.len() {
            match items[pos + 1] {
                GLFactor::Delta(s) if s.b() == e.add_int(-1) && s.a() >= b => {
                    items.swap(pos, pos + 1);
                    pos += 1;
                }
                _ => break,
            }
        }
        let line8 = (pos != start).then(|| items.clone());
        // Line 9.
        let shortened = Segment::new(b, e.add_int(-1))?;
        let zeta = Segment::new(e, k)?;
        items[pos] = GLFactor::Zeta(zeta);
        if !shortened.is_empty() {
            items.insert(pos, GLFactor::Delta(shortened));
        }
        let line9 = (!(b == k && e == k)).then(|| items.clone());
        // Line 10.
        let d = e.add_int(-1);
        let a = items
            .iter()
            .filter_map(GLFactor::as_delta)
            .filter(|s| s.b() == d && s.a() < b && (e == three_halves || s.a() != HalfInt::int(2) - e))
            .map(|s| s.a())
            .max();
        let next = a.map(|a| (a, d, a));
        records.push(IterationRecord { l_factor, line6, line7, line8, line9, next });
        match a {
            None => break,
            Some(a) => {
                e = d;
                b = a;
                first = false;
            }
        }
    }
    let z = items.iter().position(|f| matches!(f, GLFactor::Zeta(_))).expect("Z present");
    let GLFactor::Zeta(zeta) = items[z] else { unreachable!() };
    let collect = |fs: &[GLFactor]| -> Result<Vec<Segment>> {
        fs.iter().map(|f| f.as_delta().ok_or_else(|| CoreError::Inconsistent(format!("stray {f}")))).collect()
    };
    let r = Rearranged {
        alpha: block.alpha,
        prefix: collect(&items[..z])?,
        zeta,
        suffix: collect(&items[z + 1..])?,
        k,
        iterations: records.len(),
    };
    let trace = AlgTrace { k, b0: Some(top.a()), initial, iterations: records };
    Ok((r, want_trace.then_some(trace)))
}

/// The accepted bottom rung below a top: `c_1 + d_1 > 1` unless `c_1 = d_1 = 1/2`.
fn ladder_bottom_ok(s: &Segment) -> bool {
    let half = HalfInt::HALF;
    (s.a() == half && s.b() == half) || s.exponent_sum().doubled() > 2
}

/// Longest ladder topped by the shortest segment ending in `k`, minimizing
/// widths from the top. Empty if no segment ends in `k`.
pub fn longest_ladder(block: &AlphaBlock, k: HalfInt) -> Result<Ladder> {
    let segs = check_input(block, k)?;
    let Some(top) = shortest_ending_in(&segs, k) else { return Ok(Ladder::default()) };
    let chains = Chains::new(&segs);
    // The top rung is exempt from the bottom condition: it is always used.
    let below_ok = |s: &Segment| *s == top || ladder_bottom_ok(s);
    let mut best = 1;
    for x in chains.below(top) {
        let l = chains.longest_down(x, &ladder_bottom_ok);
        best = best.max(l + 1);
    }
    Ok(chains.pick_down(top, best, &below_ok).expect("length was computed"))
}

/// Shortens every rung, re-sorts, and inserts `Z[k-t+1,k]` right after every
/// copy of `[c_1,d_1-1]`.
pub fn ladder_transform(block: &AlphaBlock, k: HalfInt) -> Result<Rearranged> {
    let ladder = longest_ladder(block, k)?;
    if ladder.is_empty() {
        return Rearranged::unchanged(block, k);
    }
    let mut segs = block.segments()?;
    for r in &ladder.rungs {
        remove_one(&mut segs, *r);
        let s = r.shortened();
        if !s.is_empty() {
            segs.push(s);
        }
    }
    sort_desc(&mut segs);
    let t = ladder.len();
    let split = insertion_point(&segs, ladder.rungs[0].shortened());
    let suffix = segs.split_off(split);
    Ok(Rearranged {
        alpha: block.alpha,
        prefix: segs,
        zeta: Segment::new(k.add_int(1 - t as i64), k)?,
        suffix,
        k,
        iterations: t,
    })
}

pub fn len_k(block: &AlphaBlock, k: HalfInt) -> Result<usize> {
    Ok(run_algorithm(block, k, false)?.0.iterations)
}

/// The ladder of the inverse transformation: starts at `[a_j,b_j]`, climbs
/// through the prefix maximizing widths, padded with empties to `k - b_j`.
pub fn inverse_ladder(r: &Rearranged) -> Result<Ladder> {
    r.check_shape()?;
    let t = r.iterations;
    let chains = Chains::new(&r.prefix);
    let mut ladder = chains.pick_up(r.altered_bottom(), t);
    pad_with_empties(&mut ladder, t);
    Ok(ladder)
}

/// Reconstructs the input block of the algorithm, or reports that `r` is not
/// an output.
pub fn invert(r: &Rearranged) -> Result<AlphaBlock> {
    r.check_shape()?;
    if r.iterations == 0 {
        return AlphaBlock::from_segments(r.alpha, &r.segments());
    }
    let bottom = r.altered_bottom();
    if !bottom.is_empty() && r.suffix.first() == Some(&bottom) {
        return Err(CoreError::NotAnOutput(format!("{bottom} appears on both sides of Z")));
    }
    let ladder = inverse_ladder(r)?;
    let mut segs = r.segments();
    for rung in &ladder.rungs {
        if !rung.is_empty() && !remove_one(&mut segs, *rung) {
            return Err(CoreError::Inconsistent(format!("rung {rung} missing")));
        }
        segs.push(rung.lengthened());
    }
    sort_desc(&mut segs);
    let top = ladder.rungs.last().expect("t >= 1").lengthened();
    if shortest_ending_in(&segs, r.k) != Some(top) {
        return Err(CoreError::NotAnOutput(format!(
            "reconstructed {top} is not the shortest segment ending in {}",
            r.k
        )));
    }
    AlphaBlock::from_segments(r.alpha, &segs)
}

/// `T(k-b', shift)`: keeps `Z[b'+1,k]` and moves it `shift` places right of
/// the altered segment ending in `b'`. With `shorten = 0` the Z factor is
/// empty and only the D factors remain.
pub fn transform_t(r: &Rearranged, shorten: usize, shift: usize) -> Result<Vec<GLFactor>> {
    r.check_shape()?;
    let segs = r.segments();
    let mut out: Vec<GLFactor> = segs.iter().map(|s| GLFactor::Delta(*s)).collect();
    if shorten == 0 {
        if shift != 0 {
            return Err(CoreError::InvalidParameter("an empty Z has no position to shift".into()));
        }
        return Ok(out);
    }
    if shorten > r.iterations {
        return Err(CoreError::InvalidParameter(format!(
            "no altered segment ends in k - {shorten} (only {} iterations ran)",
            r.iterations
        )));
    }
    let ladder = inverse_ladder(r)?;
    let p_idx = r.iterations - shorten;
    let altered = ladder.rungs[p_idx];
    let p_end = if altered.is_empty() {
        insertion_point(&segs, altered)
    } else {
        r.prefix
            .iter()
            .rposition(|s| *s == altered)
            .map(|i| i + 1)
            .ok_or_else(|| CoreError::Inconsistent(format!("altered {altered} not in prefix")))?
    };
    let at = p_end + shift;
    if at > segs.len() {
        return Err(CoreError::InvalidParameter(format!("shift {shift} runs past the last factor")));
    }
    let b_prime = r.k.add_int(-(shorten as i64));
    out.insert(at, GLFactor::Zeta(Segment::new(b_prime.add_int(1), r.k)?));
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ReduceCase {
    Case1,
    Case21,
    Case22,
    Base,
}

impl fmt::Display for ReduceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReduceCase::Case1 => "1",
            ReduceCase::Case21 => "2.1",
            ReduceCase::Case22 => "2.2",
            ReduceCase::Base => "base",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReduceStep {
    pub case: ReduceCase,
    pub delta: Vec<Segment>,
    pub residual: Rearranged,
}

/// One inductive step: split off `Delta` and return the smaller output.
pub fn reduce_step(r: &Rearranged) -> Result<ReduceStep> {
    r.check_shape()?;
    if r.iterations == 0 {
        return Ok(ReduceStep { case: ReduceCase::Base, delta: Vec::new(), residual: r.clone() });
    }
    let original = invert(r)?.segments()?;
    let k = r.k;
    let b0 = shortest_ending_in(&original, k).expect("invert checked the top").a();
    let mut res = r.clone();
    if let Some(first) = r.prefix.first().copied().filter(|s| s.b() != k) {
        let m = r.prefix.iter().take_while(|s| **s == first).count();
        res.prefix.drain(..m);
        return Ok(ReduceStep { case: ReduceCase::Case1, delta: vec![first; m], residual: res });
    }
    if b0 < k {
        let km1 = k.add_int(-1);
        let c = r
            .prefix
            .iter()
            .filter(|s| s.b() == km1)
            .map(|s| s.a())
            .max()
            .ok_or_else(|| CoreError::Inconsistent(format!("no segment ends in {km1}")))?;
        let ck = Segment::new(c, k)?;
        let ck1 = Segment::new(c, km1)?;
        let m1 = r.prefix.iter().filter(|s| **s == ck).count();
        let m2 = r.prefix.iter().filter(|s| **s == ck1).count();
        let mut prefix = vec![Segment::singleton(k); m1];
        prefix.extend(r.prefix.iter().copied().filter(|s| *s != ck && *s != ck1));
        res.prefix = prefix;
        return Ok(ReduceStep { case: ReduceCase::Case21, delta: vec![ck1; m1 + m2], residual: res });
    }
    let kk = Segment::singleton(k);
    let m = original.iter().filter(|s| **s == kk).count();
    res.prefix.retain(|s| *s != kk);
    res.k = k.add_int(-1);
    res.iterations -= 1;
    res.zeta = Segment::new(r.zeta.a(), res.k)?;
    if res.iterations == 0 {
        res.prefix.append(&mut res.suffix);
    }
    Ok(ReduceStep { case: ReduceCase::Case22, delta: vec![kk; m], residual: res })
}

/// Reduction steps until the base case, which is included last.
pub fn reduce_chain(r: &Rearranged) -> Result<Vec<ReduceStep>> {
    let mut steps = Vec::new();
    let mut cur = r.clone();
    loop {
        let step = reduce_step(&cur)?;
        let done = step.case == ReduceCase::Base;
        if !done && step.residual.degree() >= cur.degree() {
            return Err(CoreError::Inconsistent("reduction did not lower the degree".into()));
        }
        cur = step.residual.clone();
        steps.push(step);
        if done {
            return Ok(steps);
        }
    }
}
