//! Splitting off locally acyclic summands.
//!
//! The greedy pass looks for a "box edge": an arrow `a → b` with
//! coefficient `c` such that `c` divides every other term of `∂a` and every
//! other coefficient of `b` in a boundary. After the filtered change of
//! basis `b' = ∂a / c`, `z' = z + (f_z / c)·a`, the pair `{a, b'}` is a
//! direct summand with `∂a = c·b'`, hence acyclic after inverting `UV`.
//! Whole components with vanishing localized homology are removed as well.
//!
//! For small complexes the result is compared with [`brute_force_connected`],
//! which computes the image of a maximal self-local equivalence directly.

use std::collections::BTreeMap;

use super::maps::MapSpace;
use super::ops::express_in_basis;
use super::{is_isomorphic, ChainComplex, ComplexError, Generator, Result, Specialized, Vector};
use crate::f2::{BitVec, Echelon, Mat};
use crate::ring::{RingElement, RingMode};

/// Largest complex handed to the brute-force oracle.
pub const ORACLE_BOUND: usize = 9;

/// Largest chain-map space the oracle enumerates.
pub const ORACLE_MAX_DIM: usize = 24;

#[derive(Debug, Clone)]
pub struct Split {
    pub conn: ChainComplex,
    pub acyclic: ChainComplex,
    /// Whether the brute-force oracle was run.
    pub oracle_checked: bool,
    /// The oracle found a smaller connected complex than the greedy pass;
    /// `conn` is then the oracle's answer.
    pub greedy_disagreed: bool,
}

/// Greedy splitting only.
pub fn split_greedy(c: &ChainComplex) -> (ChainComplex, ChainComplex) {
    let mut cur = c.clone();
    let mut acyclic = ChainComplex::zero(c.mode());
    loop {
        if let Some((next, pair)) = split_one_pair(&cur) {
            acyclic = acyclic.direct_sum(&pair).expect("same mode");
            cur = next;
            continue;
        }
        if let Some((next, comp)) = split_acyclic_component(&cur) {
            acyclic = acyclic.direct_sum(&comp).expect("same mode");
            cur = next;
            continue;
        }
        break;
    }
    (cur, acyclic)
}

/// Greedy splitting, confirmed (or corrected) by the oracle when the
/// complex is small enough.
pub fn split_acyclic(c: &ChainComplex) -> Result<Split> {
    let reduced = c.reduce();
    let (conn, acyclic) = split_greedy(&reduced);
    if reduced.len() > ORACLE_BOUND {
        return Ok(Split { conn, acyclic, oracle_checked: false, greedy_disagreed: false });
    }
    match brute_force_split(&reduced) {
        Ok((oconn, oacyc)) => {
            let agree = oconn.len() == conn.len() && is_isomorphic(&oconn, &conn)?;
            if agree {
                Ok(Split { conn, acyclic, oracle_checked: true, greedy_disagreed: false })
            } else {
                Ok(Split { conn: oconn, acyclic: oacyc, oracle_checked: true, greedy_disagreed: true })
            }
        }
        Err(ComplexError::SizeBound(..)) => Ok(Split { conn, acyclic, oracle_checked: false, greedy_disagreed: false }),
        Err(e) => Err(e),
    }
}

fn split_one_pair(c: &ChainComplex) -> Option<(ChainComplex, ChainComplex)> {
    let n = c.len();
    for a in 0..n {
        for (&b, cab) in c.d(a) {
            let m = cab.as_monomial()?;
            let ok_out = c.d(a).iter().all(|(&w, e)| w == b || m.divides(e.as_monomial().expect("homogeneous")));
            if !ok_out {
                continue;
            }
            let into_b: Vec<(usize, RingElement)> =
                (0..n).filter(|&z| z != a).filter_map(|z| c.d(z).get(&b).map(|e| (z, e.clone()))).collect();
            if !into_b.iter().all(|(_, e)| m.divides(e.as_monomial().expect("homogeneous"))) {
                continue;
            }
            return Some(split_pair(c, a, b, &into_b));
        }
    }
    None
}

fn split_pair(c: &ChainComplex, a: usize, b: usize, into_b: &[(usize, RingElement)]) -> (ChainComplex, ChainComplex) {
    let mode = c.mode();
    let m = c.coeff(b, a).as_monomial().expect("arrow");
    let inv = |e: &RingElement| {
        let q = e.as_monomial().expect("homogeneous");
        RingElement::monomial(mode, q.mul(m.inv())).expect("divisible")
    };
    let mut new: Vec<(String, Vector)> = (0..c.len())
        .map(|x| (c.gen(x).name.clone(), Vector::from([(x, RingElement::one(mode))])))
        .collect();
    new[b].1 = c.d(a).iter().map(|(&w, e)| (w, inv(e))).collect();
    for (z, e) in into_b {
        new[*z].1.insert(a, inv(e));
    }
    let changed = c.change_basis(&new).expect("box-edge basis change is invertible");
    let keep: Vec<usize> = (0..c.len()).filter(|&x| x != a && x != b).collect();
    debug_assert!(changed.d(b).is_empty());
    debug_assert!(keep.iter().all(|&z| !changed.d(z).contains_key(&a) && !changed.d(z).contains_key(&b)));
    (changed.restrict(&keep), changed.restrict(&[a, b]))
}

fn split_acyclic_component(c: &ChainComplex) -> Option<(ChainComplex, ChainComplex)> {
    let n = c.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while comp[r] != r {
            r = comp[r];
        }
        comp[x] = r;
        r
    }
    for (x, y, _) in c.arrows() {
        let (rx, ry) = (find(&mut comp, x), find(&mut comp, y));
        comp[rx.max(ry)] = rx.min(ry);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut comp, x);
        groups.entry(r).or_default().push(x);
    }
    if groups.len() < 2 && c.localized_homology_rank() != 0 {
        return None;
    }
    for members in groups.values() {
        let part = c.restrict(members);
        if part.localized_homology_rank() == 0 {
            let keep: Vec<usize> = (0..n).filter(|x| !members.contains(x)).collect();
            return Some((c.restrict(&keep), part));
        }
    }
    None
}

/// The image of a maximal self-local equivalence, by exhaustive search.
pub fn brute_force_connected(c: &ChainComplex) -> Result<ChainComplex> {
    Ok(brute_force_split(c)?.0)
}

/// `(im f^N, C / im f^N)` for a self-local equivalence `f` whose stable
/// image has the fewest generators (equivalently the largest stable
/// kernel); ties go to the first map in enumeration order.
pub fn brute_force_split(c: &ChainComplex) -> Result<(ChainComplex, ChainComplex)> {
    if c.len() > ORACLE_BOUND {
        return Err(ComplexError::SizeBound(c.len(), ORACLE_BOUND));
    }
    if c.mode() != RingMode::Polynomial {
        return Err(ComplexError::ModeMismatch(RingMode::Polynomial, c.mode()));
    }
    let n = c.len();
    let space = MapSpace::new(c, c)?;
    let lambda = space.local_functional().ok_or(ComplexError::NotInvertible)?;
    // affine subspace {μ : λ(Σ μ_k B_k) = 1}
    let lam: Vec<bool> = space.basis.iter().map(|b| lambda.dot(b)).collect();
    let pivot = lam.iter().position(|&v| v).ok_or(ComplexError::NotInvertible)?;
    let free: Vec<usize> = (0..space.dim()).filter(|&k| k != pivot).collect();
    if free.len() > ORACLE_MAX_DIM {
        return Err(ComplexError::SizeBound(free.len(), ORACLE_MAX_DIM));
    }
    let sp = &space.src;
    let unit_part = |cols: &[BitVec]| Mat {
        n,
        rows: (0..n)
            .map(|x| BitVec::from_ones(n, cols[x].ones().filter(|&y| sp.grades[y] == sp.grades[x])))
            .collect(),
    };
    let mut best: Option<(usize, Vec<BitVec>)> = None;
    for mask in 0u64..1 << free.len() {
        let mut coords = BitVec::zeros(space.dim());
        let mut parity = false;
        for (t, &k) in free.iter().enumerate() {
            if mask >> t & 1 == 1 {
                coords.set(k, true);
                parity ^= lam[k];
            }
        }
        if !parity {
            coords.set(pivot, true);
        }
        let cols = space.columns(&space.combine(&coords));
        let r = unit_part(&cols).stable_rank();
        if best.as_ref().is_none_or(|(br, _)| r < *br) {
            best = Some((r, cols));
        }
    }
    let (_, f) = best.expect("the identity is a self-local equivalence");
    // f^N
    let mut fnn: Vec<BitVec> = (0..n).map(|x| BitVec::unit(n, x)).collect();
    for _ in 0..n.max(1) {
        fnn = fnn.iter().map(|v| apply(&f, v, n)).collect();
    }
    image_and_quotient(c, sp, &fnn)
}

fn apply(cols: &[BitVec], v: &BitVec, n: usize) -> BitVec {
    let mut out = BitVec::zeros(n);
    for x in v.ones() {
        out.xor_assign(&cols[x]);
    }
    out
}

/// Splits `C` along the direct summand spanned by the homogeneous vectors
/// `images[x]` (of grading `gr(x)`), returning the summand and the quotient.
fn image_and_quotient(c: &ChainComplex, sp: &Specialized, images: &[BitVec]) -> Result<(ChainComplex, ChainComplex)> {
    let n = c.len();
    let unit = |g: (i64, i64), v: &BitVec| BitVec::from_ones(n, v.ones().filter(|&y| sp.grades[y] == g));
    let mut ech = Echelon::new(n);
    let mut chosen = Vec::new();
    for x in 0..n {
        if ech.insert(&unit(sp.grades[x], &images[x])).is_ok() {
            chosen.push(x);
        }
    }
    let mut complement = Vec::new();
    for x in 0..n {
        if ech.insert(&BitVec::unit(n, x)).is_ok() {
            complement.push(x);
        }
    }
    let mut grades: Vec<(i64, i64)> = chosen.iter().map(|&x| sp.grades[x]).collect();
    let mut supports: Vec<BitVec> = chosen.iter().map(|&x| images[x].clone()).collect();
    grades.extend(complement.iter().map(|&x| sp.grades[x]));
    supports.extend(complement.iter().map(|&x| BitVec::unit(n, x)));
    let k = chosen.len();
    let mut cols = Vec::with_capacity(n);
    for t in 0..n {
        let g = (grades[t].0 - 1, grades[t].1 - 1);
        let db = sp.boundary(&supports[t]);
        let coeffs = express_in_basis(sp, &grades, &supports, g, &db).ok_or(ComplexError::NotInvertible)?;
        if t < k && coeffs.ones().any(|s| s >= k) {
            return Err(ComplexError::NotFiltered("image is not a subcomplex".into()));
        }
        cols.push(coeffs);
    }
    let names: Vec<Generator> = chosen
        .iter()
        .chain(&complement)
        .map(|&x| c.gen(x).clone())
        .collect();
    let image_cols: Vec<BitVec> = cols[..k].iter().map(|v| v.slice(0, k)).collect();
    let quot_cols: Vec<BitVec> = cols[k..].iter().map(|v| v.slice(k, n)).collect();
    let image = Specialized::rebuild(c.mode(), names[..k].to_vec(), &image_cols)?;
    let quotient = Specialized::rebuild(c.mode(), names[k..].to_vec(), &quot_cols)?;
    Ok((image, quotient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::make_complex;

    fn p(s: &str) -> RingElement {
        RingElement::parse(RingMode::Polynomial, s).unwrap()
    }

    fn trefoil() -> ChainComplex {
        let gens = vec![Generator::new("b", 0, -2), Generator::new("x0", -1, -1), Generator::new("a", -2, 0)];
        make_complex(RingMode::Polynomial, gens, [(1, 0, p("U")), (1, 2, p("V"))]).unwrap()
    }

    fn box_complex() -> ChainComplex {
        // a → b with coefficient UV
        let gens = vec![Generator::new("p", 5, 5), Generator::new("q", 6, 6)];
        make_complex(RingMode::Polynomial, gens, [(0, 1, p("U V"))]).unwrap()
    }

    #[test]
    fn connected_complex_is_untouched() {
        let s = split_acyclic(&trefoil()).unwrap();
        assert_eq!(s.conn.len(), 3);
        assert!(s.acyclic.is_empty());
        assert!(s.oracle_checked && !s.greedy_disagreed);
    }

    #[test]
    fn box_summand_is_removed() {
        let c = trefoil().direct_sum(&box_complex()).unwrap();
        let s = split_acyclic(&c).unwrap();
        assert!(is_isomorphic(&s.conn, &trefoil()).unwrap());
        assert_eq!(s.acyclic.localized_homology_rank(), 0);
        assert!(is_isomorphic(&brute_force_connected(&c).unwrap(), &trefoil()).unwrap());
    }
}
