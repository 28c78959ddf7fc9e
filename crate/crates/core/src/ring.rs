//! Coefficients: finite F₂-sums of monomials `U^a V^b`.
//!
//! Two modes are supported. [`RingMode::Polynomial`] is F₂[U,V] with
//! non-negative exponents; [`RingMode::Localized`] allows arbitrary integer
//! exponents, i.e. the ring obtained by inverting `UV` (which already makes
//! `U` and `V` individually invertible).
//!
//! The one-variable ring F₂[U,U⁻¹] of filtered complexes is the diagonal
//! `U := U¹V¹`, so a single two-variable monomial also encodes the pair of
//! filtration drops of a filtered arrow.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingMode {
    Polynomial,
    Localized,
}

impl fmt::Display for RingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingMode::Polynomial => write!(f, "polynomial"),
            RingMode::Localized => write!(f, "localized"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mode mismatch: {0} vs {1}")]
    ModeMismatch(RingMode, RingMode),
    #[error("negative exponent U^{0} V^{1} in polynomial mode")]
    NegativeExponent(i64, i64),
    #[error("element {0} is not invertible")]
    NotInvertible(String),
    #[error("cannot parse ring element {0:?}: {1}")]
    Parse(String, String),
}

/// `U^u V^v`. Ordered lexicographically by `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub u: i64,
    pub v: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: 0, v: 0 };

    pub fn new(u: i64, v: i64) -> Self {
        Monomial { u, v }
    }

    /// `(UV)^k`, the k-th power of the one-variable `U`.
    pub fn diag(k: i64) -> Self {
        Monomial { u: k, v: k }
    }

    pub fn mul(self, o: Monomial) -> Monomial {
        Monomial { u: self.u + o.u, v: self.v + o.v }
    }

    pub fn inv(self) -> Monomial {
        Monomial { u: -self.u, v: -self.v }
    }

    pub fn is_one(self) -> bool {
        self.u == 0 && self.v == 0
    }

    pub fn is_polynomial(self) -> bool {
        self.u >= 0 && self.v >= 0
    }

    /// `self` divides `o` in F₂[U,V].
    pub fn divides(self, o: Monomial) -> bool {
        self.u <= o.u && self.v <= o.v
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |f: &mut fmt::Formatter<'_>, sym: &str, e: i64| -> fmt::Result {
            if e == 1 {
                write!(f, "{sym}")
            } else {
                write!(f, "{sym}^{e}")
            }
        };
        match (self.u, self.v) {
            (0, 0) => write!(f, "1"),
            (u, 0) => pow(f, "U", u),
            (0, v) => pow(f, "V", v),
            (u, v) => {
                pow(f, "U", u)?;
                write!(f, " ")?;
                pow(f, "V", v)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    mode: RingMode,
    terms: BTreeSet<Monomial>,
}

impl RingElement {
    pub fn zero(mode: RingMode) -> Self {
        RingElement { mode, terms: BTreeSet::new() }
    }

    pub fn one(mode: RingMode) -> Self {
        Self::monomial(mode, Monomial::ONE).expect("1 is valid in every mode")
    }

    pub fn monomial(mode: RingMode, m: Monomial) -> Result<Self, RingError> {
        Self::from_terms(mode, [m])
    }

    /// Builds a sum; repeated monomials cancel in pairs.
    pub fn from_terms(
        mode: RingMode,
        terms: impl IntoIterator<Item = Monomial>,
    ) -> Result<Self, RingError> {
        let mut out = BTreeSet::new();
        for m in terms {
            if mode == RingMode::Polynomial && !m.is_polynomial() {
                return Err(RingError::NegativeExponent(m.u, m.v));
            }
            if !out.insert(m) {
                out.remove(&m);
            }
        }
        Ok(RingElement { mode, terms: out })
    }

    pub fn mode(&self) -> RingMode {
        self.mode
    }

    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// The single monomial, if this element is one.
    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.terms.len() == 1 {
            self.terms.iter().next().copied()
        } else {
            None
        }
    }

    pub fn add(&self, o: &RingElement) -> Result<RingElement, RingError> {
        if self.mode != o.mode {
            return Err(RingError::ModeMismatch(self.mode, o.mode));
        }
        let terms = self.terms.symmetric_difference(&o.terms).copied().collect();
        Ok(RingElement { mode: self.mode, terms })
    }

    pub fn mul(&self, o: &RingElement) -> Result<RingElement, RingError> {
        if self.mode != o.mode {
            return Err(RingError::ModeMismatch(self.mode, o.mode));
        }
        let prods = self
            .terms
            .iter()
            .flat_map(|a| o.terms.iter().map(move |b| a.mul(*b)));
        Self::from_terms(self.mode, prods)
    }

    pub fn is_unit(&self) -> bool {
        match (self.mode, self.as_monomial()) {
            (RingMode::Polynomial, Some(m)) => m.is_one(),
            (RingMode::Localized, Some(_)) => true,
            _ => false,
        }
    }

    pub fn inverse(&self) -> Result<RingElement, RingError> {
        if !self.is_unit() {
            return Err(RingError::NotInvertible(self.to_string()));
        }
        let m = self.as_monomial().expect("units are monomials");
        Self::monomial(self.mode, m.inv())
    }

    /// Same terms, reinterpreted in another mode.
    pub fn with_mode(&self, mode: RingMode) -> Result<RingElement, RingError> {
        Self::from_terms(mode, self.terms.iter().copied())
    }

    /// Parses the rendering grammar: `0`, or `+`-separated terms such as
    /// `1`, `U`, `V^3`, `U^2 V^-1`.
    pub fn parse(mode: RingMode, s: &str) -> Result<RingElement, RingError> {
        let err = |why: &str| RingError::Parse(s.to_string(), why.to_string());
        let t = s.trim();
        if t == "0" || t.is_empty() {
            return Ok(Self::zero(mode));
        }
        let mut monos = Vec::new();
        for term in t.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let (mut u, mut v) = (0i64, 0i64);
            if term != "1" {
                for factor in term.split_whitespace() {
                    let (sym, exp) = match factor.split_once('^') {
                        Some((sym, e)) => (sym, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
                        None => (factor, 1),
                    };
                    match sym {
                        "U" => u += exp,
                        "V" => v += exp,
                        _ => return Err(err("unknown symbol")),
                    }
                }
            }
            monos.push(Monomial::new(u, v));
        }
        Self::from_terms(mode, monos)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = RingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RingElement::parse(RingMode::Localized, s)?
            .as_monomial()
            .ok_or_else(|| RingError::Parse(s.to_string(), "not a single monomial".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> RingElement {
        RingElement::parse(RingMode::Polynomial, s).unwrap()
    }

    #[test]
    fn add_cancels_in_characteristic_two() {
        assert!(p("U").add(&p("U")).unwrap().is_zero());
        assert_eq!(p("U V").add(&p("U^2")).unwrap(), p("U V + U^2"));
        let n2 = p("U V^2 + U^2 V");
        assert_eq!(n2.add(&p("U V^2")).unwrap(), p("U^2 V"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("U").mul(&p("V")).unwrap(), p("U V"));
        assert_eq!(p("1 + U").mul(&p("1 + U")).unwrap(), p("1 + U^2"));
        assert_eq!(p("U^2 V^3").mul(&p("U V")).unwrap(), p("U^3 V^4"));
    }

    #[test]
    fn units() {
        assert!(p("1").is_unit());
        assert!(!p("U").is_unit());
        let l = RingElement::parse(RingMode::Localized, "U^-1 V^-1").unwrap();
        assert!(l.is_unit());
        assert_eq!(l.mul(&l.inverse().unwrap()).unwrap(), RingElement::one(RingMode::Localized));
    }

    #[test]
    fn polynomial_rejects_negative_exponents() {
        assert!(RingElement::parse(RingMode::Polynomial, "U^-1").is_err());
        let a = RingElement::parse(RingMode::Localized, "U").unwrap();
        assert!(a.add(&p("U")).is_err());
    }

    #[test]
    fn render_parse_round_trip() {
        for s in ["0", "1", "U", "V^3", "U^2 V^5 + U^4", "U^-1 V^2"] {
            let e = RingElement::parse(RingMode::Localized, s).unwrap();
            assert_eq!(RingElement::parse(RingMode::Localized, &e.to_string()).unwrap(), e);
        }
    }
}
