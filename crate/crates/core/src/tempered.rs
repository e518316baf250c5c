use std::collections::BTreeMap;
use std::fmt;

use crate::error::{CoreError, Result};

/// Symbolic tempered part of a standard module.
///
/// Only the attributes that can be justified are ever derived: the first
/// occurrence index `l` of an atom, the multiplicities it was given, and the
/// few identities the lift theorem forces on wrapped tokens.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TemperedToken {
    Atom { label: String, l_down: i64, mult: BTreeMap<i64, u64> },
    /// `theta_level(inner)` on the other member of the dual pair.
    Lift { inner: Box<TemperedToken>, level: i64 },
    /// `L(St_dim nu^(1/2); inner)`.
    StWrap { st_dim: i64, inner: Box<TemperedToken> },
    /// The tempered `sigma` with `theta(inner) = L(St nu^(1/2); sigma)`.
    SigmaOf(Box<TemperedToken>),
}

/// What is known about `l(token)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LBounds {
    pub lo: Option<i64>,
    pub exact: Option<i64>,
}

impl TemperedToken {
    pub fn atom(l_down: i64) -> Self {
        TemperedToken::Atom { label: "tau".into(), l_down, mult: BTreeMap::new() }
    }

    pub fn atom_with(label: &str, l_down: i64, mult: &[(i64, u64)]) -> Self {
        TemperedToken::Atom { label: label.into(), l_down, mult: mult.iter().copied().collect() }
    }

    pub fn lift(self, level: i64) -> Self {
        TemperedToken::Lift { inner: Box::new(self), level }
    }

    pub fn st_wrap(self, st_dim: i64) -> Self {
        TemperedToken::StWrap { st_dim, inner: Box::new(self) }
    }

    pub fn sigma_of(self) -> Self {
        TemperedToken::SigmaOf(Box::new(self))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, TemperedToken::Atom { .. })
    }

    pub fn validate(&self, kappa: i64) -> Result<()> {
        let bad = |invariant: &'static str, detail: String| Err(CoreError::Validation { invariant, detail });
        match self {
            TemperedToken::Atom { label, l_down, mult } => {
                let l = *l_down;
                if l < -1 {
                    return bad("l-range", format!("{label}: l = {l} is below -1"));
                }
                if (l - kappa).rem_euclid(2) != 0 {
                    return bad("l-parity", format!("{label}: l = {l} must have the parity of kappa = {kappa}"));
                }
                for (&a, &c) in mult {
                    if a < 1 || (a - l).rem_euclid(2) != 0 {
                        return bad(
                            "mult-key",
                            format!("{label}: multiplicity key {a} must be a positive dimension of the parity of l"),
                        );
                    }
                    if 0 < a && a < l && c % 2 == 0 {
                        return bad("mult-odd", format!("{label}: m({a}) = {c} must be odd since {a} < l = {l}"));
                    }
                    if a == l && c == 0 {
                        return bad("mult-positive", format!("{label}: m(l) must be at least 1 when l > 0"));
                    }
                }
                Ok(())
            }
            TemperedToken::Lift { inner, .. } | TemperedToken::StWrap { inner, .. } => inner.validate(kappa),
            TemperedToken::SigmaOf(inner) => inner.validate(kappa),
        }
    }

    /// Exact `l`, where it is known.
    pub fn l_exact(&self) -> Option<i64> {
        match self {
            TemperedToken::Atom { l_down, .. } => Some(*l_down),
            TemperedToken::Lift { inner, level } => match inner.as_ref() {
                // theta_{s+1}(L(St_s nu^(1/2); tau)) has l = s - 1.
                TemperedToken::StWrap { st_dim, .. } if *level == st_dim + 1 => Some(st_dim - 1),
                _ => None,
            },
            _ => None,
        }
    }

    /// A lower bound for `l`, where one follows.
    pub fn l_lower(&self) -> Option<i64> {
        if let Some(l) = self.l_exact() {
            return Some(l);
        }
        match self {
            // theta_j(X) != 0 lifts back to X at level -j.
            TemperedToken::Lift { inner, level } => {
                let lo = inner.l_lower()?;
                (*level <= lo).then_some(-level)
            }
            TemperedToken::SigmaOf(_) => self.sigma_data().map(|(l0, _)| l0),
            _ => None,
        }
    }

    pub fn bounds(&self) -> LBounds {
        LBounds { lo: self.l_lower(), exact: self.l_exact() }
    }

    /// For `SigmaOf(Lift(X, -2-l0))` with `l(X) = l0 > 0` and `m_X(l0)` even,
    /// returns `(l0, X)`.
    fn sigma_data(&self) -> Option<(i64, &TemperedToken)> {
        let TemperedToken::SigmaOf(inner) = self else { return None };
        let TemperedToken::Lift { inner: x, level } = inner.as_ref() else { return None };
        let l0 = x.l_exact()?;
        if l0 > 0 && *level == -2 - l0 && x.mult_odd(l0) == Some(false) {
            Some((l0, x))
        } else {
            None
        }
    }

    /// Parity of `m(chi S_a)`: `Some(true)` when odd. `None` when unknown.
    pub fn mult_odd(&self, a: i64) -> Option<bool> {
        if let TemperedToken::Atom { mult, .. } = self {
            if let Some(c) = mult.get(&a) {
                return Some(c % 2 == 1);
            }
        }
        if let Some((l0, _)) = self.sigma_data() {
            if a == l0 {
                return Some(true);
            }
        }
        let lo = self.l_lower()?;
        (0 < a && a < lo && (a - lo).rem_euclid(2) == 0).then_some(true)
    }

    pub fn mult_odd_or_err(&self, a: i64) -> Result<bool> {
        self.mult_odd(a).ok_or_else(|| {
            CoreError::AttributesRequired(format!("parity of m(S_{a}) for {self} is not known; supply m={{{a}:..}}"))
        })
    }

    /// The cancellation rules the lift theorem justifies, applied bottom up.
    pub fn simplify(&self) -> TemperedToken {
        match self {
            TemperedToken::Atom { .. } => self.clone(),
            TemperedToken::Lift { inner, level } => {
                let inner = inner.simplify();
                if let TemperedToken::Lift { inner: x, level: j } = &inner {
                    if *j == -level && x.l_lower().is_some_and(|lo| *j <= lo) {
                        return x.as_ref().clone();
                    }
                }
                inner.lift(*level)
            }
            TemperedToken::StWrap { st_dim, inner } => {
                let inner = inner.simplify();
                let l0 = inner.sigma_data().map(|(l0, _)| l0);
                match inner {
                    TemperedToken::SigmaOf(lifted) if l0 == Some(st_dim - 1) => *lifted,
                    inner => inner.st_wrap(*st_dim),
                }
            }
            TemperedToken::SigmaOf(inner) => inner.simplify().sigma_of(),
        }
    }

    /// Label of the innermost atom.
    pub fn base_label(&self) -> &str {
        match self {
            TemperedToken::Atom { label, .. } => label,
            TemperedToken::Lift { inner, .. } | TemperedToken::StWrap { inner, .. } => inner.base_label(),
            TemperedToken::SigmaOf(inner) => inner.base_label(),
        }
    }
}

/// Short form: `tau`, `theta_3(tau)`, `stwrap_2(tau)`, `sigma(..)`.
impl fmt::Display for TemperedToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemperedToken::Atom { label, .. } => f.write_str(label),
            TemperedToken::Lift { inner, level } => write!(f, "theta_{level}({inner})"),
            TemperedToken::StWrap { st_dim, inner } => write!(f, "stwrap_{st_dim}({inner})"),
            TemperedToken::SigmaOf(inner) => write!(f, "sigma({inner})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancel_lift_pair() {
        let t = TemperedToken::atom(3);
        assert_eq!(t.clone().lift(3).lift(-3).simplify(), t);
        assert_eq!(t.clone().lift(-5).lift(5).simplify(), t);
        // Level above l(tau): the inner lift is zero, nothing to cancel.
        let far = t.clone().lift(5).lift(-5);
        assert_eq!(far.simplify(), far);
        assert_eq!(t.simplify(), t);
    }

    #[test]
    fn wrapped_lift_knows_its_l() {
        let t = TemperedToken::atom(3).st_wrap(2).lift(3);
        assert_eq!(t.l_exact(), Some(1));
        assert_eq!(t.simplify(), t);
    }

    #[test]
    fn sigma_round_trip() {
        let x = TemperedToken::atom_with("tau", 3, &[(1, 1), (3, 2)]);
        let sigma = x.clone().lift(-5).sigma_of();
        assert_eq!(sigma.l_lower(), Some(3));
        assert_eq!(sigma.mult_odd(3), Some(true));
        let back = sigma.st_wrap(4).lift(5);
        assert_eq!(back.simplify(), x);
    }

    #[test]
    fn implied_parity_below_l() {
        let t = TemperedToken::atom(5);
        assert_eq!(t.mult_odd(1), Some(true));
        assert_eq!(t.mult_odd(3), Some(true));
        assert_eq!(t.mult_odd(5), None);
        assert!(t.mult_odd_or_err(5).is_err());
    }

    #[test]
    fn atom_validation() {
        assert!(TemperedToken::atom(-1).validate(1).is_ok());
        assert!(TemperedToken::atom(-1).validate(2).is_err());
        assert!(TemperedToken::atom(0).validate(2).is_ok());
        assert!(TemperedToken::atom_with("t", 3, &[(1, 2)]).validate(1).is_err());
        assert!(TemperedToken::atom_with("t", 3, &[(2, 1)]).validate(1).is_err());
        assert!(TemperedToken::atom_with("t", 3, &[(3, 0)]).validate(1).is_err());
        assert!(TemperedToken::atom_with("t", 3, &[(3, 2), (5, 0)]).validate(1).is_ok());
    }
}
