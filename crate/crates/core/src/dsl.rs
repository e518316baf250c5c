//! Text syntax for standard modules.
//!
//! ```text
//! pair=SpO; side=V; xi=chi1,chi2; D[4,5] x D[3,4] x |.|^2 ; tau(l=3, m={3:1}) ; n=12, eps=-1
//! ```
//!
//! Sections are separated by `;`: the pair, optional `side=` and `xi=`
//! sections, the block (possibly empty), the tempered part, and an optional
//! trailing `n=`/`eps=` section. Factors are `D[a,b]`, `Z[a,b]` or `|.|^x`;
//! numbers are integers or `k/2`. The tempered part is an atom
//! `label(l=.., m={dim:count, ..}, n=..)` or one of the wrappers
//! `theta_j(..)`, `stwrap_s(..)`, `sigma(..)`.

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::halfint::HalfInt;
use crate::model::{AlphaBlock, GLFactor, Pair, Side, StandardModule};
use crate::rearrange::Rearranged;
use crate::segment::Segment;
use crate::tempered::TemperedToken;

/// Everything the syntax can express, before any validation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Parts {
    pub pair: Pair,
    pub side: Side,
    pub xi: Vec<String>,
    pub factors: Vec<GLFactor>,
    pub tempered: TemperedToken,
    pub n: Option<i64>,
    pub epsilon: i64,
}

impl Parts {
    pub fn module(self) -> Result<StandardModule> {
        let m = StandardModule {
            pair: self.pair,
            side: self.side,
            xi: self.xi,
            // Class problems surface through validate with the invariant named.
            block: AlphaBlock { alpha: self.pair.alpha(), factors: self.factors },
            tempered: self.tempered,
            n: self.n,
            epsilon: self.epsilon,
        };
        m.validate()?;
        Ok(m)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.chars().collect(), pos: 0 }
    }

    fn here(&self) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(CoreError::Syntax { line, col, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(got) => self.err(format!("expected '{c}', found '{got}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars[self.pos..].iter().take(n).copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        if start == self.pos || !self.chars[start].is_alphabetic() {
            self.pos = start;
            return self.err("expected a name");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// Looks ahead for `name =` without consuming anything.
    fn at_key(&mut self) -> Option<String> {
        let save = self.pos;
        let key = self.ident().ok();
        let is_key = key.is_some() && self.peek() == Some('=');
        self.pos = save;
        if is_key {
            key
        } else {
            None
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.chars.len() && (self.chars[self.pos] == '-' || self.chars[self.pos] == '+') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits == self.pos {
            self.pos = start;
            return self.err("expected an integer");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err(format!("integer {text} is out of range"))
            }
        }
    }

    fn number(&mut self) -> Result<HalfInt> {
        let n = self.int()?;
        if self.eat('/') {
            let (line, col) = self.here();
            let d = self.int()?;
            if d != 2 {
                return Err(CoreError::Syntax { line, col, msg: "only halves are allowed: write k/2".into() });
            }
            if n.rem_euclid(2) == 0 {
                return Err(CoreError::Syntax { line, col, msg: format!("{n}/2 is an integer; write {}", n / 2) });
            }
            Ok(HalfInt::from_doubled(n))
        } else {
            Ok(HalfInt::int(n))
        }
    }

    fn segment(&mut self) -> Result<Segment> {
        self.expect('[')?;
        let a = self.number()?;
        self.expect(',')?;
        let b = self.number()?;
        self.expect(']')?;
        match Segment::new(a, b) {
            Ok(s) if !s.is_empty() => Ok(s),
            Ok(_) => self.err(format!("[{a},{b}] is empty")),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn factor(&mut self) -> Result<GLFactor> {
        match self.peek() {
            Some('D') => {
                self.pos += 1;
                Ok(GLFactor::Delta(self.segment()?))
            }
            Some('Z') => {
                self.pos += 1;
                Ok(GLFactor::Zeta(self.segment()?))
            }
            Some('|') => {
                if !self.eat_str("|.|^") {
                    return self.err("expected |.|^x");
                }
                Ok(GLFactor::Delta(Segment::singleton(self.number()?)))
            }
            Some(c) => self.err(format!("expected D[a,b], Z[a,b] or |.|^x, found '{c}'")),
            None => self.err("expected a factor, found end of input"),
        }
    }

    fn block(&mut self) -> Result<Vec<GLFactor>> {
        let mut out = Vec::new();
        if matches!(self.peek(), Some(';') | None) {
            return Ok(out);
        }
        out.push(self.factor()?);
        while self.peek() == Some('x') {
            self.pos += 1;
            out.push(self.factor()?);
        }
        Ok(out)
    }

    fn token(&mut self, n: &mut Option<i64>) -> Result<TemperedToken> {
        let name = self.ident()?;
        let wrapper = |p: &mut Parser, prefix: &str| -> Result<Option<i64>> {
            match name.strip_prefix(prefix) {
                None => Ok(None),
                Some("") => p.int().map(Some),
                Some(rest) => match rest.parse() {
                    Ok(v) => Ok(Some(v)),
                    Err(_) => p.err(format!("bad index in {name}")),
                },
            }
        };
        if let Some(j) = wrapper(self, "theta_")? {
            self.expect('(')?;
            let inner = self.token(n)?;
            self.expect(')')?;
            return Ok(inner.lift(j));
        }
        if let Some(s) = wrapper(self, "stwrap_")? {
            self.expect('(')?;
            let inner = self.token(n)?;
            self.expect(')')?;
            return Ok(inner.st_wrap(s));
        }
        if name == "sigma" {
            self.expect('(')?;
            let inner = self.token(n)?;
            self.expect(')')?;
            return Ok(inner.sigma_of());
        }
        self.atom(name, n)
    }

    fn atom(&mut self, label: String, n: &mut Option<i64>) -> Result<TemperedToken> {
        self.expect('(')?;
        let mut l = None;
        let mut mult = BTreeMap::new();
        loop {
            let key = self.ident()?;
            self.expect('=')?;
            match key.as_str() {
                "l" => l = Some(self.int()?),
                "n" => *n = Some(self.int()?),
                "m" => {
                    self.expect('{')?;
                    if !self.eat('}') {
                        loop {
                            let dim = self.int()?;
                            self.expect(':')?;
                            let count = self.int()?;
                            if count < 0 {
                                return self.err("multiplicities are nonnegative");
                            }
                            if mult.insert(dim, count as u64).is_some() {
                                return self.err(format!("m({dim}) given twice"));
                            }
                            if !self.eat(',') {
                                break;
                            }
                        }
                        self.expect('}')?;
                    }
                }
                other => return self.err(format!("unknown attribute '{other}' (expected l, m or n)")),
            }
            if !self.eat(',') {
                break;
            }
        }
        self.expect(')')?;
        let Some(l_down) = l else { return self.err(format!("{label}(..) needs l=")) };
        Ok(TemperedToken::Atom { label, l_down, mult })
    }

    fn parts(&mut self) -> Result<Parts> {
        if self.ident()? != "pair" {
            self.pos = 0;
            return self.err("input must start with pair=SpO or pair=MpO");
        }
        self.expect('=')?;
        let pair = match self.ident()?.as_str() {
            "SpO" => Pair::SpO,
            "MpO" => Pair::MpO,
            other => return self.err(format!("unknown pair '{other}'")),
        };
        self.expect(';')?;
        let mut side = Side::W;
        let mut xi = Vec::new();
        while let Some(key) = self.at_key() {
            self.ident()?;
            self.expect('=')?;
            match key.as_str() {
                "side" => {
                    side = match self.ident()?.as_str() {
                        "W" => Side::W,
                        "V" => Side::V,
                        other => return self.err(format!("side must be W or V, got '{other}'")),
                    }
                }
                "xi" => loop {
                    xi.push(self.ident()?);
                    if !self.eat(',') {
                        break;
                    }
                },
                other => return self.err(format!("unknown section '{other}'")),
            }
            self.expect(';')?;
        }
        let factors = self.block()?;
        self.expect(';')?;
        let mut n = None;
        let tempered = self.token(&mut n)?;
        let mut epsilon = 1;
        if self.eat(';') && self.peek().is_some() {
            loop {
                let key = self.ident()?;
                self.expect('=')?;
                match key.as_str() {
                    "n" => n = Some(self.int()?),
                    "eps" => epsilon = self.int()?,
                    other => return self.err(format!("unknown setting '{other}' (expected n or eps)")),
                }
                if !self.eat(',') {
                    break;
                }
            }
            self.eat(';');
        }
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected '{c}' after the module"));
        }
        Ok(Parts { pair, side, xi, factors, tempered, n, epsilon })
    }
}

/// Syntax only; no module invariants are checked.
pub fn parse_parts(text: &str) -> Result<Parts> {
    Parser::new(text).parts()
}

pub fn parse(text: &str) -> Result<StandardModule> {
    parse_parts(text)?.module()
}

/// Reads an algorithm output (D factors with at most one Z factor). The
/// tempered part is returned alongside for display.
pub fn parse_rearranged(text: &str, k: Option<HalfInt>) -> Result<(Rearranged, Parts)> {
    let parts = parse_parts(text)?;
    let r = Rearranged::from_factors(parts.pair.alpha(), &parts.factors, k)?;
    Ok((r, parts))
}

/// A segment on its own, as in `D[0,1]` or `Z[1/2,5/2]`.
pub fn parse_factor(text: &str) -> Result<GLFactor> {
    let mut p = Parser::new(text);
    let f = p.factor()?;
    if let Some(c) = p.peek() {
        return p.err(format!("unexpected '{c}'"));
    }
    Ok(f)
}

fn render_factor(f: &GLFactor) -> String {
    match f {
        GLFactor::Delta(s) => format!("D{s}"),
        GLFactor::Zeta(s) => format!("Z{s}"),
        GLFactor::LQ { .. } => f.to_string(),
    }
}

pub fn render_factors(factors: &[GLFactor]) -> String {
    factors.iter().map(render_factor).collect::<Vec<_>>().join(" x ")
}

/// The tempered part with every attribute spelled out.
pub fn render_token(t: &TemperedToken) -> String {
    match t {
        TemperedToken::Atom { label, l_down, mult } => {
            if mult.is_empty() {
                format!("{label}(l={l_down})")
            } else {
                let m: Vec<String> = mult.iter().map(|(d, c)| format!("{d}:{c}")).collect();
                format!("{label}(l={l_down}, m={{{}}})", m.join(","))
            }
        }
        TemperedToken::Lift { inner, level } => format!("theta_{level}({})", render_token(inner)),
        TemperedToken::StWrap { st_dim, inner } => format!("stwrap_{st_dim}({})", render_token(inner)),
        TemperedToken::SigmaOf(inner) => format!("sigma({})", render_token(inner)),
    }
}

fn render_head(pair: Pair, side: Side, xi: &[String]) -> String {
    let mut s = format!("pair={pair}; ");
    if side != Side::W {
        s.push_str(&format!("side={side}; "));
    }
    if !xi.is_empty() {
        s.push_str(&format!("xi={}; ", xi.join(",")));
    }
    s
}

fn render_tail(n: Option<i64>, epsilon: i64) -> String {
    match (n, epsilon) {
        (None, 1) => String::new(),
        (None, e) => format!(" ; eps={e}"),
        (Some(n), e) => format!(" ; n={n}, eps={e}"),
    }
}

/// Canonical text; `parse(render(m)) == m`.
pub fn render(m: &StandardModule) -> String {
    format!(
        "{}{} ; {}{}",
        render_head(m.pair, m.side, &m.xi),
        render_factors(&m.block.factors),
        render_token(&m.tempered),
        render_tail(m.n, m.epsilon)
    )
}

/// Canonical text of an algorithm output over the tempered part of `parts`.
pub fn render_rearranged(r: &Rearranged, parts: &Parts) -> String {
    format!(
        "{}{} ; {}{}",
        render_head(parts.pair, parts.side, &parts.xi),
        render_factors(&r.factors()),
        render_token(&parts.tempered),
        render_tail(parts.n, parts.epsilon)
    )
}

/// The syntax tree back to text, without any validation.
pub fn render_parts(parts: &Parts) -> String {
    format!(
        "{}{} ; {}{}",
        render_head(parts.pair, parts.side, &parts.xi),
        render_factors(&parts.factors),
        render_token(&parts.tempered),
        render_tail(parts.n, parts.epsilon)
    )
}

/// A bare block as a module source with a placeholder tempered part, for
/// reporting counterexamples that only involve the block.
pub fn render_block(pair: Pair, factors: &[GLFactor]) -> String {
    format!("pair={pair}; {} ; tau(l={})", render_factors(factors), pair.kappa() - 2)
}

/// Close to the written notation: `chi_V |.|^4 x D[3,4] >< theta_3(tau)`.
pub fn display(m: &StandardModule) -> String {
    let chi = match m.side {
        Side::W => "chi_V",
        Side::V => "chi_W",
    };
    let mut s = String::new();
    for x in &m.xi {
        s.push_str(&format!("{chi} {x} x "));
    }
    if !m.block.is_empty() {
        s.push_str(&format!("{chi} {} ", m.block));
    }
    s.push_str(&format!(">< {}", m.tempered));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_source() {
        let m = parse("pair=SpO; D[4,5] x D[3,4] x D[2,3] x D[1,2] ; tau(l=3)").unwrap();
        assert_eq!(m.block.len(), 4);
        assert_eq!(m.tempered, TemperedToken::atom(3));
        assert_eq!(parse(&render(&m)).unwrap(), m);
    }

    #[test]
    fn empty_block_and_half_integers() {
        let m = parse("pair=SpO; ; tau(l=-1)").unwrap();
        assert!(m.block.is_empty());
        let m = parse("pair=MpO; D[1/2,3/2] ; tau(l=0)").unwrap();
        assert_eq!(m.block.segments().unwrap(), vec![Segment::d(1, 3)]);
        assert_eq!(render(&m), "pair=MpO; D[1/2,3/2] ; tau(l=0)");
    }

    #[test]
    fn everything_round_trips() {
        let text = "pair=SpO; side=V; xi=chi1,rho; D[4,5] x D[1,1] ; theta_-3(sigma(stwrap_2(tau(l=1, m={1:2})))) ; n=7, eps=-1";
        let m = parse(text).unwrap();
        assert_eq!(render(&m), text);
        assert_eq!(parse(&render(&m)).unwrap(), m);
        let m2 = parse("pair=SpO;D[1,1];tau(l=1,n=4)").unwrap();
        assert_eq!(m2.n, Some(4));
    }

    #[test]
    fn diagnostics_carry_position() {
        match parse("pair=SpO;\n D[1,2] x E[1,1] ; tau(l=1)") {
            Err(CoreError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 11)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("pair=SpO; D[1.5,2] ; tau(l=1)"), Err(CoreError::Syntax { .. })));
        assert!(matches!(parse("pair=SpO; D[1,2] ; tau(m={1:1})"), Err(CoreError::Syntax { .. })));
    }

    #[test]
    fn validation_failures_name_the_invariant() {
        match parse("pair=MpO; D[1,2] ; tau(l=0)") {
            Err(CoreError::Validation { invariant, .. }) => assert_eq!(invariant, "alpha-kappa"),
            other => panic!("{other:?}"),
        }
        match parse("pair=SpO; D[1,2] ; tau(l=5, m={3:2})") {
            Err(CoreError::Validation { invariant, .. }) => assert_eq!(invariant, "mult-odd"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rearranged_output_parses() {
        let (r, _) = parse_rearranged("pair=SpO; D[4,5] x Z[4,6] x D[1,1] ; tau(l=1)", None).unwrap();
        assert_eq!(r.iterations, 3);
        assert_eq!(r.suffix, vec![Segment::i(1, 1)]);
    }
}
