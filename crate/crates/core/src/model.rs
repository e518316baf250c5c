use std::fmt;

use crate::error::{CoreError, Result};
use crate::halfint::HalfInt;
use crate::segment::Segment;
use crate::tempered::TemperedToken;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Form {
    Delta,
    Zeta,
}

/// A GL factor of a block. `LQ` is the Langlands quotient `L(zeta x delta)`
/// that the rearrangement algorithm carries around between lines 5 and 9.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GLFactor {
    Delta(Segment),
    Zeta(Segment),
    LQ { zeta: Segment, delta: Segment },
}

impl GLFactor {
    pub fn lq(zeta: Segment, delta: Segment) -> Result<Self> {
        if zeta.a() != delta.b().add_int(1) {
            return Err(CoreError::InvalidParameter(format!(
                "L(Z{zeta} x D{delta}) needs Z to start right after D ends"
            )));
        }
        Ok(GLFactor::LQ { zeta, delta })
    }

    pub fn as_delta(&self) -> Option<Segment> {
        match self {
            GLFactor::Delta(s) => Some(*s),
            _ => None,
        }
    }

    fn exponents(&self) -> Vec<HalfInt> {
        match self {
            GLFactor::Delta(s) | GLFactor::Zeta(s) => vec![s.a(), s.b()],
            GLFactor::LQ { zeta, delta } => vec![zeta.a(), zeta.b(), delta.a(), delta.b()],
        }
    }
}

/// Writes `|.|^x` for singletons of either form, `D[a,b]`, `Z[a,b]`, and `L(Z[..] x D[..])`.
impl fmt::Display for GLFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GLFactor::Delta(s) | GLFactor::Zeta(s) if s.len() == 1 => write!(f, "|.|^{}", s.a()),
            GLFactor::Delta(s) => write!(f, "D{s}"),
            GLFactor::Zeta(s) => write!(f, "Z{s}"),
            GLFactor::LQ { zeta, delta } if zeta.is_empty() => write!(f, "L(D{delta})"),
            GLFactor::LQ { zeta, delta } => write!(f, "L(Z{zeta} x D{delta})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlphaBlock {
    pub alpha: HalfInt,
    pub factors: Vec<GLFactor>,
}

impl AlphaBlock {
    pub fn new(alpha: HalfInt, factors: Vec<GLFactor>) -> Result<Self> {
        if alpha != HalfInt::ZERO && alpha != HalfInt::HALF {
            return Err(CoreError::InvalidParameter(format!("alpha must be 0 or 1/2, got {alpha}")));
        }
        for fac in &factors {
            for x in fac.exponents() {
                if x.class() != alpha {
                    return Err(CoreError::ClassMismatch(fac.to_string(), format!("alpha = {alpha}")));
                }
            }
        }
        Ok(AlphaBlock { alpha, factors })
    }

    pub fn from_segments(alpha: HalfInt, segs: &[Segment]) -> Result<Self> {
        AlphaBlock::new(alpha, segs.iter().map(|s| GLFactor::Delta(*s)).collect())
    }

    pub fn empty(alpha: HalfInt) -> Self {
        AlphaBlock { alpha, factors: Vec::new() }
    }

    /// The Delta segments; errors if any factor has another form.
    pub fn segments(&self) -> Result<Vec<Segment>> {
        self.factors
            .iter()
            .map(|f| f.as_delta().ok_or_else(|| CoreError::UnsupportedForm(f.to_string())))
            .collect()
    }

    pub fn is_sorted(&self) -> bool {
        match self.segments() {
            Ok(segs) => segs.windows(2).all(|w| w[0] >= w[1]),
            Err(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for AlphaBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_factors(f, &self.factors)
    }
}

pub(crate) fn write_factors(f: &mut fmt::Formatter<'_>, factors: &[GLFactor]) -> fmt::Result {
    for (i, fac) in factors.iter().enumerate() {
        if i > 0 {
            f.write_str(" x ")?;
        }
        write!(f, "{fac}")?;
    }
    Ok(())
}

/// Stable sort, largest segment leftmost.
pub fn sort_block(block: &AlphaBlock) -> Result<AlphaBlock> {
    let mut segs = block.segments()?;
    segs.sort_by(|x, y| y.cmp(x));
    AlphaBlock::from_segments(block.alpha, &segs)
}

pub(crate) fn sort_desc(segs: &mut [Segment]) {
    segs.sort_by(|x, y| y.cmp(x));
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Pair {
    /// Symplectic with even orthogonal.
    SpO,
    /// Metaplectic with odd orthogonal.
    MpO,
}

impl Pair {
    pub fn kappa(self) -> i64 {
        match self {
            Pair::SpO => 1,
            Pair::MpO => 2,
        }
    }

    /// Exponent class of the block: integral when kappa is 1.
    pub fn alpha(self) -> HalfInt {
        match self {
            Pair::SpO => HalfInt::ZERO,
            Pair::MpO => HalfInt::HALF,
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pair::SpO => "SpO",
            Pair::MpO => "MpO",
        })
    }
}

/// Which member of the dual pair the module lives on; decides the chi twist.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    W,
    V,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::W => Side::V,
            Side::V => Side::W,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::W => "W",
            Side::V => "V",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StandardModule {
    pub pair: Pair,
    pub side: Side,
    pub xi: Vec<String>,
    pub block: AlphaBlock,
    pub tempered: TemperedToken,
    pub n: Option<i64>,
    pub epsilon: i64,
}

impl StandardModule {
    pub fn kappa(&self) -> i64 {
        self.pair.kappa()
    }

    /// Builds and validates a module on side W with epsilon 1.
    pub fn simple(pair: Pair, segs: &[Segment], tempered: TemperedToken) -> Result<Self> {
        let m = StandardModule {
            pair,
            side: Side::W,
            xi: Vec::new(),
            block: AlphaBlock::from_segments(pair.alpha(), segs)?,
            tempered,
            n: None,
            epsilon: 1,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |invariant: &'static str, detail: String| Err(CoreError::Validation { invariant, detail });
        if self.block.alpha != self.pair.alpha() {
            return bad(
                "alpha-kappa",
                format!("pair {} needs alpha = {}, block has {}", self.pair, self.pair.alpha(), self.block.alpha),
            );
        }
        if self.epsilon != 1 && self.epsilon != -1 {
            return bad("epsilon", format!("epsilon must be 1 or -1, got {}", self.epsilon));
        }
        if let Some(n) = self.n {
            if n < 0 {
                return bad("rank", format!("n must be nonnegative, got {n}"));
            }
        }
        for fac in &self.block.factors {
            let s = match fac.as_delta() {
                Some(s) => s,
                None => return bad("delta-form", format!("standard modules hold only D factors, found {fac}")),
            };
            if s.class() != self.block.alpha {
                return bad("alpha-kappa", format!("{s} is not in the class of alpha = {}", self.block.alpha));
            }
            if s.is_empty() {
                return bad("nonempty", format!("empty segment {s} in a standard module"));
            }
            if s.exponent_sum().doubled() <= 0 {
                return bad("positivity", format!("{s} has a + b <= 0"));
            }
        }
        self.tempered.validate(self.kappa())
    }

    pub fn sorted(&self) -> Result<Self> {
        Ok(StandardModule { block: sort_block(&self.block)?, ..self.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tempered::TemperedToken;

    fn block(segs: &[Segment]) -> AlphaBlock {
        AlphaBlock::from_segments(HalfInt::ZERO, segs).unwrap()
    }

    #[test]
    fn sort_small_block() {
        let b = block(&[Segment::i(2, 4), Segment::i(3, 6), Segment::i(3, 4)]);
        let s = sort_block(&b).unwrap();
        assert_eq!(s.segments().unwrap(), vec![Segment::i(3, 6), Segment::i(3, 4), Segment::i(2, 4)]);
        assert!(sort_block(&block(&[])).unwrap().is_empty());
    }

    #[test]
    fn sort_rejects_zeta() {
        let b = AlphaBlock::new(HalfInt::ZERO, vec![GLFactor::Zeta(Segment::i(1, 2))]).unwrap();
        assert!(matches!(sort_block(&b), Err(CoreError::UnsupportedForm(_))));
    }

    #[test]
    fn lq_requires_adjacency() {
        assert!(GLFactor::lq(Segment::i(5, 5), Segment::i(3, 4)).is_ok());
        assert!(GLFactor::lq(Segment::i(5, 5), Segment::i(3, 3)).is_err());
    }

    #[test]
    fn validation_names_the_invariant() {
        let t = TemperedToken::atom(3);
        let wrong_alpha = StandardModule {
            pair: Pair::MpO,
            side: Side::W,
            xi: vec![],
            block: block(&[Segment::i(1, 2)]),
            tempered: TemperedToken::atom(2),
            n: None,
            epsilon: 1,
        };
        match wrong_alpha.validate() {
            Err(CoreError::Validation { invariant, .. }) => assert_eq!(invariant, "alpha-kappa"),
            other => panic!("{other:?}"),
        }
        let neg = StandardModule::simple(Pair::SpO, &[Segment::i(-1, 0)], t.clone());
        assert!(matches!(neg, Err(CoreError::Validation { invariant: "positivity", .. })));
        assert!(StandardModule::simple(Pair::SpO, &[Segment::i(1, 2)], TemperedToken::atom(2)).is_err());
        assert!(StandardModule::simple(Pair::SpO, &[Segment::i(1, 2)], t).is_ok());
    }
}
