//! Finitely generated bigraded chain complexes over F₂[U,V] (or its
//! localization at `UV`).
//!
//! A generator carries the pair `(gr_u, gr_v)`; its Alexander grading is
//! `(gr_u − gr_v)/2`. A differential term `U^a V^b · y` in `∂x` must satisfy
//!
//! ```text
//! gr_u(y) = gr_u(x) − 1 + 2a,     gr_v(y) = gr_v(x) − 1 + 2b
//! ```
//!
//! so every coefficient between two generators is either zero or the single
//! monomial forced by their gradings. Much of the crate exploits this: a
//! homogeneous vector is determined by its grading and its support, and
//! chain maps reduce to F₂ matrices (see [`Specialized`]).
//!
//! The filtered one-variable picture of CFK∞ is the same data read through
//! `U := UV`: the undecorated generator `x` sits at `(i, j) = (0, A(x))` with
//! Maslov grading `gr_u(x)`, the translate `U^k x` at `(−k, A(x) − k)`, and a
//! term `U^a V^b y` of `∂x` is an arrow dropping the two filtrations by `a`
//! and `b`.

pub mod maps;
mod ops;
pub mod region;
pub mod split;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::BitVec;
use crate::ring::{Monomial, RingElement, RingError, RingMode};

pub use maps::{is_isomorphic, MapSpace};
pub use ops::{express_in_basis, support_to_vector, vector_grading, FilteredView, LocalizedHomology, Reduction};
pub use region::{Region, Subquotient};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("ring mode mismatch: {0} vs {1}")]
    ModeMismatch(RingMode, RingMode),
    #[error("generator {0}: gr_u − gr_v = {1} is odd")]
    OddAlexander(String, i64),
    #[error("term {term} in ∂{from} → {to} is incompatible with the gradings")]
    Grading { from: String, to: String, term: String },
    #[error("∂² ≠ 0")]
    DSquared,
    #[error("generator index {0} out of range")]
    Index(usize),
    #[error("unknown generator name {0:?}")]
    UnknownName(String),
    #[error("basis change is not invertible")]
    NotInvertible,
    #[error("basis change is not homogeneous or not filtered: {0}")]
    NotFiltered(String),
    #[error("region is not closed under betweenness")]
    NotBetweennessClosed,
    #[error("region is unbounded along U-orbits; a Maslov window is required")]
    Unbounded,
    #[error("size bound exceeded: {0} generators (bound {1})")]
    SizeBound(usize, usize),
    #[error("no non-negative rescaling exists (a cycle of arrows has negative total exponent)")]
    NotConvertible,
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ComplexError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub gr_u: i64,
    pub gr_v: i64,
}

impl Generator {
    pub fn new(name: impl Into<String>, gr_u: i64, gr_v: i64) -> Self {
        Generator { name: name.into(), gr_u, gr_v }
    }

    pub fn alex(&self) -> i64 {
        (self.gr_u - self.gr_v) / 2
    }

    pub fn grading(&self) -> (i64, i64) {
        (self.gr_u, self.gr_v)
    }
}

/// The monomial `m` with `gr(m·y) = gr(x) − (1,1)`, i.e. the only possible
/// coefficient of `y` in `∂x`. `None` if parities do not match.
pub fn arrow_monomial(x: (i64, i64), y: (i64, i64)) -> Option<Monomial> {
    let du = y.0 - x.0 + 1;
    let dv = y.1 - x.1 + 1;
    (du % 2 == 0 && dv % 2 == 0).then(|| Monomial::new(du / 2, dv / 2))
}

/// The monomial `m` with `gr(m·y) = g`. `None` if parities do not match.
pub fn shift_monomial(g: (i64, i64), y: (i64, i64)) -> Option<Monomial> {
    let du = y.0 - g.0;
    let dv = y.1 - g.1;
    (du % 2 == 0 && dv % 2 == 0).then(|| Monomial::new(du / 2, dv / 2))
}

/// A vector: generator index → coefficient.
pub type Vector = BTreeMap<usize, RingElement>;

/// Adds `c · w` into `acc`.
pub fn axpy(acc: &mut Vector, c: &RingElement, w: &Vector) -> Result<()> {
    for (k, e) in w {
        let t = c.mul(e)?;
        let cur = acc.remove(k).unwrap_or_else(|| RingElement::zero(t.mode()));
        let s = cur.add(&t)?;
        if !s.is_zero() {
            acc.insert(*k, s);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    mode: RingMode,
    gens: Vec<Generator>,
    /// `diff[x]` is `∂x`, i.e. column `x` of the differential.
    diff: Vec<Vector>,
}

/// `make_complex` from explicit arrows `(from, to, coefficient)`; repeated
/// arrows add.
pub fn make_complex(
    mode: RingMode,
    gens: Vec<Generator>,
    arrows: impl IntoIterator<Item = (usize, usize, RingElement)>,
) -> Result<ChainComplex> {
    let n = gens.len();
    let mut diff = vec![Vector::new(); n];
    for (x, y, c) in arrows {
        if x >= n {
            return Err(ComplexError::Index(x));
        }
        if y >= n {
            return Err(ComplexError::Index(y));
        }
        if c.mode() != mode {
            return Err(ComplexError::ModeMismatch(mode, c.mode()));
        }
        let mut single = Vector::new();
        single.insert(y, RingElement::one(mode));
        axpy(&mut diff[x], &c, &single)?;
    }
    let c = ChainComplex { mode, gens, diff };
    c.validate()?;
    Ok(c)
}

impl ChainComplex {
    /// Builds a complex from arrows whose coefficients are forced by the
    /// gradings.
    pub fn from_forced_arrows(
        mode: RingMode,
        gens: Vec<Generator>,
        arrows: &[(usize, usize)],
    ) -> Result<ChainComplex> {
        let mut list = Vec::new();
        for &(x, y) in arrows {
            let (gx, gy) = (
                gens.get(x).ok_or(ComplexError::Index(x))?.grading(),
                gens.get(y).ok_or(ComplexError::Index(y))?.grading(),
            );
            let m = arrow_monomial(gx, gy).ok_or_else(|| ComplexError::Grading {
                from: gens[x].name.clone(),
                to: gens[y].name.clone(),
                term: "?".into(),
            })?;
            list.push((x, y, RingElement::monomial(mode, m)?));
        }
        make_complex(mode, gens, list)
    }

    /// Skips validation; used internally where the construction guarantees it.
    pub(crate) fn from_parts(mode: RingMode, gens: Vec<Generator>, diff: Vec<Vector>) -> ChainComplex {
        let c = ChainComplex { mode, gens, diff };
        debug_assert!(c.validate().is_ok(), "internal construction produced an invalid complex");
        c
    }

    pub fn zero(mode: RingMode) -> ChainComplex {
        ChainComplex { mode, gens: vec![], diff: vec![] }
    }

    /// The rank-one complex `F[U,V]` with a single generator in grading `(d, d)`.
    pub fn trivial(mode: RingMode, d: i64) -> ChainComplex {
        ChainComplex { mode, gens: vec![Generator::new("1", d, d)], diff: vec![Vector::new()] }
    }

    fn validate(&self) -> Result<()> {
        for g in &self.gens {
            if (g.gr_u - g.gr_v).rem_euclid(2) != 0 {
                return Err(ComplexError::OddAlexander(g.name.clone(), g.gr_u - g.gr_v));
            }
        }
        for (x, col) in self.diff.iter().enumerate() {
            for (&y, c) in col {
                if c.mode() != self.mode {
                    return Err(ComplexError::ModeMismatch(self.mode, c.mode()));
                }
                let ok = c.len() == 1
                    && arrow_monomial(self.gens[x].grading(), self.gens[y].grading()) == c.as_monomial();
                if !ok {
                    return Err(ComplexError::Grading {
                        from: self.gens[x].name.clone(),
                        to: self.gens[y].name.clone(),
                        term: c.to_string(),
                    });
                }
            }
        }
        if !self.verify_d_squared() {
            return Err(ComplexError::DSquared);
        }
        Ok(())
    }

    pub fn mode(&self) -> RingMode {
        self.mode
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gen(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| ComplexError::UnknownName(name.to_string()))
    }

    /// `∂x`.
    pub fn d(&self, x: usize) -> &Vector {
        &self.diff[x]
    }

    /// Coefficient of `y` in `∂x`.
    pub fn coeff(&self, y: usize, x: usize) -> RingElement {
        self.diff[x].get(&y).cloned().unwrap_or_else(|| RingElement::zero(self.mode))
    }

    /// All arrows `(from, to, monomial)` in index order.
    pub fn arrows(&self) -> Vec<(usize, usize, Monomial)> {
        let mut out = Vec::new();
        for (x, col) in self.diff.iter().enumerate() {
            for (&y, c) in col {
                for m in c.terms() {
                    out.push((x, y, m));
                }
            }
        }
        out
    }

    pub fn apply_d(&self, v: &Vector) -> Result<Vector> {
        let mut out = Vector::new();
        for (x, c) in v {
            axpy(&mut out, c, &self.diff[*x])?;
        }
        Ok(out)
    }

    pub fn verify_d_squared(&self) -> bool {
        (0..self.len()).all(|x| matches!(self.apply_d(&self.diff[x]), Ok(v) if v.is_empty()))
    }

    /// Renames generators; `f` receives the old name and index.
    pub fn renamed(&self, f: impl Fn(usize, &str) -> String) -> ChainComplex {
        let mut c = self.clone();
        for (i, g) in c.gens.iter_mut().enumerate() {
            g.name = f(i, &g.name);
        }
        c
    }

    /// Shifts every generator's bigrading by `(du, dv)`.
    pub fn shifted(&self, du: i64, dv: i64) -> Result<ChainComplex> {
        if (du - dv).rem_euclid(2) != 0 {
            return Err(ComplexError::OddAlexander("shift".into(), du - dv));
        }
        let mut c = self.clone();
        for g in &mut c.gens {
            g.gr_u += du;
            g.gr_v += dv;
        }
        Ok(c)
    }

    pub fn tensor(&self, o: &ChainComplex) -> Result<ChainComplex> {
        if self.mode != o.mode {
            return Err(ComplexError::ModeMismatch(self.mode, o.mode));
        }
        let m = o.len();
        let idx = |a: usize, b: usize| a * m + b;
        let mut gens = Vec::with_capacity(self.len() * m);
        for a in &self.gens {
            for b in &o.gens {
                gens.push(Generator::new(format!("{}⊗{}", a.name, b.name), a.gr_u + b.gr_u, a.gr_v + b.gr_v));
            }
        }
        let mut diff = vec![Vector::new(); gens.len()];
        let one = RingElement::one(self.mode);
        for a in 0..self.len() {
            for b in 0..m {
                let col = &mut diff[idx(a, b)];
                for (&a2, c) in &self.diff[a] {
                    let mut t = Vector::new();
                    t.insert(idx(a2, b), one.clone());
                    axpy(col, c, &t)?;
                }
                for (&b2, c) in &o.diff[b] {
                    let mut t = Vector::new();
                    t.insert(idx(a, b2), one.clone());
                    axpy(col, c, &t)?;
                }
            }
        }
        Ok(ChainComplex::from_parts(self.mode, gens, diff))
    }

    pub fn dual(&self) -> ChainComplex {
        let gens = self
            .gens
            .iter()
            .map(|g| Generator::new(format!("{}*", g.name), -g.gr_u, -g.gr_v))
            .collect();
        let mut diff = vec![Vector::new(); self.len()];
        for (x, col) in self.diff.iter().enumerate() {
            for (&y, c) in col {
                diff[y].insert(x, c.clone());
            }
        }
        ChainComplex::from_parts(self.mode, gens, diff)
    }

    pub fn direct_sum(&self, o: &ChainComplex) -> Result<ChainComplex> {
        if self.mode != o.mode {
            return Err(ComplexError::ModeMismatch(self.mode, o.mode));
        }
        let n = self.len();
        let mut gens = self.gens.clone();
        gens.extend(o.gens.iter().cloned());
        let mut diff = self.diff.clone();
        diff.extend(o.diff.iter().map(|col| col.iter().map(|(y, c)| (y + n, c.clone())).collect()));
        Ok(ChainComplex::from_parts(self.mode, gens, diff))
    }

    /// Restriction to a set of generators spanning a subcomplex or a
    /// quotient complex (arrows leaving the set are dropped).
    pub fn restrict(&self, keep: &[usize]) -> ChainComplex {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let gens = keep.iter().map(|&x| self.gens[x].clone()).collect();
        let diff = keep
            .iter()
            .map(|&x| {
                self.diff[x]
                    .iter()
                    .filter_map(|(y, c)| pos.get(y).map(|&k| (k, c.clone())))
                    .collect()
            })
            .collect();
        ChainComplex::from_parts(self.mode, gens, diff)
    }

    /// Permutes generators: new generator `k` is old generator `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> ChainComplex {
        self.restrict(order)
    }

    pub fn specialized(&self) -> Specialized {
        Specialized::of(self)
    }

    /// True if no arrow has coefficient 1 (every term lowers a filtration).
    pub fn is_reduced(&self) -> bool {
        self.arrows().iter().all(|(_, _, m)| !m.is_one())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ComplexFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<ChainComplex> {
        let f: ComplexFile = serde_json::from_str(s)?;
        f.into_complex()
    }
}

/// Homogeneous-vector picture of a complex: `d[x]` is the support of `∂x`.
///
/// Because every coefficient is forced by gradings, a homogeneous vector of
/// known grading is determined by its support, and every grading-preserving
/// module map is an F₂ matrix on supports (the specialization `U = V = 1`
/// with grading bookkeeping).
#[derive(Debug, Clone)]
pub struct Specialized {
    pub mode: RingMode,
    pub grades: Vec<(i64, i64)>,
    pub d: Vec<BitVec>,
}

impl Specialized {
    pub fn of(c: &ChainComplex) -> Specialized {
        let n = c.len();
        Specialized {
            mode: c.mode,
            grades: c.gens.iter().map(|g| g.grading()).collect(),
            d: c.diff.iter().map(|col| BitVec::from_ones(n, col.keys().copied())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    /// Whether generator `y` can occur in a homogeneous vector of grading `g`.
    pub fn admissible(&self, g: (i64, i64), y: usize) -> bool {
        match shift_monomial(g, self.grades[y]) {
            None => false,
            Some(m) => self.mode == RingMode::Localized || m.is_polynomial(),
        }
    }

    pub fn boundary(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len());
        for x in v.ones() {
            out.xor_assign(&self.d[x]);
        }
        out
    }

    /// Rebuilds a complex from supports, with generator data `gens`.
    pub fn rebuild(mode: RingMode, gens: Vec<Generator>, d: &[BitVec]) -> Result<ChainComplex> {
        let mut arrows = Vec::new();
        for (x, col) in d.iter().enumerate() {
            for y in col.ones() {
                let m = arrow_monomial(gens[x].grading(), gens[y].grading()).ok_or_else(|| {
                    ComplexError::Grading { from: gens[x].name.clone(), to: gens[y].name.clone(), term: "?".into() }
                })?;
                arrows.push((x, y, RingElement::monomial(mode, m)?));
            }
        }
        make_complex(mode, gens, arrows)
    }
}

/// Serialized form: `mode`, `generators [{name, gr_u, gr_v}]`,
/// `differential [{from, to, terms [{u, v}]}]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexFile {
    pub mode: RingMode,
    pub generators: Vec<Generator>,
    pub differential: Vec<ArrowRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowRecord {
    pub from: String,
    pub to: String,
    pub terms: Vec<Monomial>,
}

impl From<&ChainComplex> for ComplexFile {
    fn from(c: &ChainComplex) -> Self {
        let mut differential = Vec::new();
        for (x, col) in c.diff.iter().enumerate() {
            for (&y, coef) in col {
                differential.push(ArrowRecord {
                    from: c.gens[x].name.clone(),
                    to: c.gens[y].name.clone(),
                    terms: coef.terms().collect(),
                });
            }
        }
        ComplexFile { mode: c.mode, generators: c.gens.clone(), differential }
    }
}

impl ComplexFile {
    pub fn into_complex(self) -> Result<ChainComplex> {
        let names: BTreeMap<&str, usize> =
            self.generators.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
        if names.len() != self.generators.len() {
            return Err(ComplexError::UnknownName("duplicate generator name".into()));
        }
        let mut arrows = Vec::new();
        for a in &self.differential {
            let x = *names.get(a.from.as_str()).ok_or_else(|| ComplexError::UnknownName(a.from.clone()))?;
            let y = *names.get(a.to.as_str()).ok_or_else(|| ComplexError::UnknownName(a.to.clone()))?;
            arrows.push((x, y, RingElement::from_terms(self.mode, a.terms.iter().copied())?));
        }
        make_complex(self.mode, self.generators.clone(), arrows)
    }
}

impl fmt::Display for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complex ({}, {} generators)", self.mode, self.len())?;
        for (x, g) in self.gens.iter().enumerate() {
            write!(f, "  {} ({}, {})", g.name, g.gr_u, g.gr_v)?;
            let terms: Vec<String> = self.diff[x]
                .iter()
                .map(|(y, c)| format!("{} {}", c, self.gens[*y].name))
                .collect();
            if terms.is_empty() {
                writeln!(f)?;
            } else {
                writeln!(f, "  ∂ = {}", terms.join(" + "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> RingElement {
        RingElement::parse(RingMode::Polynomial, s).unwrap()
    }

    fn trefoil() -> ChainComplex {
        // x0 → V·a + U·b with a = x²₁, b = x¹₁
        let gens = vec![Generator::new("b", 0, -2), Generator::new("x0", -1, -1), Generator::new("a", -2, 0)];
        make_complex(RingMode::Polynomial, gens, [(1, 0, poly("U")), (1, 2, poly("V"))]).unwrap()
    }

    #[test]
    fn make_complex_examples() {
        assert_eq!(trefoil().len(), 3);
        assert!(make_complex(RingMode::Polynomial, vec![], []).unwrap().is_empty());
        // ∂a = b, ∂b = a is rejected (gradings already fail; ∂² ≠ 0 too)
        let gens = vec![Generator::new("a", 0, 0), Generator::new("b", -1, -1)];
        assert!(make_complex(RingMode::Polynomial, gens, [(0, 1, poly("1")), (1, 0, poly("U V"))]).is_err());
    }

    #[test]
    fn grading_rule_rejects_wrong_exponent() {
        let gens = vec![Generator::new("x", 0, 0), Generator::new("y", -1, -1)];
        assert!(make_complex(RingMode::Polynomial, gens, [(0, 1, poly("U"))]).is_err());
    }

    #[test]
    fn dual_and_tensor_shapes() {
        let t = trefoil();
        let d = t.dual();
        assert_eq!(d.gen(1).grading(), (1, 1));
        assert_eq!(d.coeff(1, 0), poly("U"));
        let tt = t.tensor(&d).unwrap();
        assert_eq!(tt.len(), 9);
        assert!(tt.verify_d_squared());
        assert_eq!(tt.gen(0).name, "b⊗b*");
    }

    #[test]
    fn corrupted_differential_fails_d_squared() {
        let mut c = trefoil().tensor(&trefoil()).unwrap();
        // drop one arrow by hand
        let x = c.diff.iter().position(|col| col.len() == 2).unwrap();
        let y = *c.diff[x].keys().next().unwrap();
        c.diff[x].remove(&y);
        assert!(!c.verify_d_squared());
    }

    #[test]
    fn json_round_trip() {
        let t = trefoil();
        let back = ChainComplex::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
