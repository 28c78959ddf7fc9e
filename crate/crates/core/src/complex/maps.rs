//! Grading-preserving module maps and chain maps between complexes.
//!
//! An entry `x ↦ y` of a grading-preserving map can only carry the monomial
//! `m` with `gr(m·y) = gr(x)`, so a map is a set of admissible entries and
//! the chain-map equation `∂f = f∂` is F₂-linear in them.

use std::collections::BTreeMap;

use super::{ChainComplex, ComplexError, Result, Specialized};
use crate::f2::{nullspace, rank, solve, BitVec, Echelon, Mat};
use crate::ring::RingMode;

/// The F₂-space of chain maps `C → D`.
#[derive(Debug, Clone)]
pub struct MapSpace {
    pub src: Specialized,
    pub dst: Specialized,
    /// Admissible entries `(x, y)`.
    pub entries: Vec<(usize, usize)>,
    /// Basis of chain maps, as vectors over `entries`.
    pub basis: Vec<BitVec>,
}

impl MapSpace {
    pub fn new(c: &ChainComplex, d: &ChainComplex) -> Result<MapSpace> {
        if c.mode() != d.mode() {
            return Err(ComplexError::ModeMismatch(c.mode(), d.mode()));
        }
        let src = c.specialized();
        let dst = d.specialized();
        let mut entries = Vec::new();
        for x in 0..src.len() {
            for y in 0..dst.len() {
                if dst.admissible(src.grades[x], y) {
                    entries.push((x, y));
                }
            }
        }
        let var: BTreeMap<(usize, usize), usize> = entries.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        // equations indexed by (x, w): coefficient of w in (∂f + f∂)(x)
        let mut eq_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut cols: Vec<Vec<usize>> = vec![vec![]; entries.len()];
        let mut touch = |k: usize, key: (usize, usize), cols: &mut Vec<Vec<usize>>| {
            let next = eq_index.len();
            let e = *eq_index.entry(key).or_insert(next);
            cols[k].push(e);
        };
        for (k, &(x, y)) in entries.iter().enumerate() {
            for w in dst.d[y].ones() {
                touch(k, (x, w), &mut cols);
            }
        }
        for x in 0..src.len() {
            for z in src.d[x].ones() {
                for w in 0..dst.len() {
                    if let Some(&k) = var.get(&(z, w)) {
                        touch(k, (x, w), &mut cols);
                    }
                }
            }
        }
        let m = eq_index.len();
        let colvecs: Vec<BitVec> = cols
            .iter()
            .map(|c| {
                let mut v = BitVec::zeros(m);
                for &e in c {
                    v.flip(e);
                }
                v
            })
            .collect();
        let basis = nullspace(&colvecs, m);
        Ok(MapSpace { src, dst, entries, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The map with the given coordinates in the chain-map basis, as entry
    /// indicators.
    pub fn combine(&self, coords: &BitVec) -> BitVec {
        let mut f = BitVec::zeros(self.entries.len());
        for k in coords.ones() {
            f.xor_assign(&self.basis[k]);
        }
        f
    }

    /// Column `x` of the map: support of `f(x)` in the target.
    pub fn columns(&self, f: &BitVec) -> Vec<BitVec> {
        let mut cols = vec![BitVec::zeros(self.dst.len()); self.src.len()];
        for k in f.ones() {
            let (x, y) = self.entries[k];
            cols[x].flip(y);
        }
        cols
    }

    /// The linear functional `f ↦ [f is a local map]` on entries, valid when
    /// both localized homologies have rank one.
    pub fn local_functional(&self) -> Option<BitVec> {
        let z = localized_cycle(&self.src)?;
        let phi = localized_cocycle(&self.dst)?;
        Some(BitVec::from_ones(
            self.entries.len(),
            (0..self.entries.len()).filter(|&k| {
                let (x, y) = self.entries[k];
                z.get(x) && phi.get(y)
            }),
        ))
    }

    /// Some chain map sending the localized generator to a generator.
    pub fn find_local_map(&self) -> Option<BitVec> {
        let lambda = self.local_functional()?;
        // coefficient vector μ with λ(Σ μ_k basis_k) = 1
        let k = (0..self.dim()).find(|&k| lambda.dot(&self.basis[k]))?;
        Some(self.basis[k].clone())
    }
}

/// A cycle of the specialization `U = V = 1` representing a nonzero class,
/// when the localized homology has rank one.
pub fn localized_cycle(sp: &Specialized) -> Option<BitVec> {
    let n = sp.len();
    let cycles = nullspace(&sp.d, n);
    let mut bnd = Echelon::new(n);
    for col in &sp.d {
        let _ = bnd.insert(col);
    }
    cycles.into_iter().map(|c| BitVec::from_ones(n, c.ones())).find(|z| !bnd.contains(z))
}

/// A functional vanishing on boundaries and equal to 1 on
/// [`localized_cycle`].
pub fn localized_cocycle(sp: &Specialized) -> Option<BitVec> {
    let n = sp.len();
    let z = localized_cycle(sp)?;
    // φ with φ·d[x] = 0 for all x: nullspace of the transposed columns
    let m = sp.len();
    let cols: Vec<BitVec> = (0..n).map(|t| BitVec::from_ones(m, (0..m).filter(|&x| sp.d[x].get(t)))).collect();
    nullspace(&cols, m).into_iter().find(|phi| phi.dot(&z))
}

/// Whether a grading-preserving chain isomorphism exists.
pub fn is_isomorphic(c: &ChainComplex, d: &ChainComplex) -> Result<bool> {
    is_isomorphic_bounded(c, d, 12)
}

pub fn is_isomorphic_bounded(c: &ChainComplex, d: &ChainComplex, bound: usize) -> Result<bool> {
    if c.len() > bound || d.len() > bound {
        return Err(ComplexError::SizeBound(c.len().max(d.len()), bound));
    }
    if c.mode() != d.mode() {
        return Ok(false);
    }
    let mut gc: Vec<_> = c.gens().iter().map(|g| g.grading()).collect();
    let mut gd: Vec<_> = d.gens().iter().map(|g| g.grading()).collect();
    gc.sort_unstable();
    gd.sort_unstable();
    if gc != gd {
        return Ok(false);
    }
    let space = MapSpace::new(c, d)?;
    match c.mode() {
        RingMode::Polynomial => polynomial_iso_exists(&space),
        RingMode::Localized => {
            if space.dim() > 20 {
                return Err(ComplexError::SizeBound(space.dim(), 20));
            }
            let n = c.len();
            Ok((0u64..1 << space.dim()).any(|mask| {
                let coords = BitVec::from_ones(space.dim(), (0..space.dim()).filter(|&k| mask >> k & 1 == 1));
                let cols = space.columns(&space.combine(&coords));
                Mat { n, rows: cols }.is_invertible()
            }))
        }
    }
}

/// Over F₂[U,V] a homogeneous map is invertible iff its grading-preserving
/// constant part is; that part is block diagonal by grading, so each block
/// is pinned to an invertible matrix and the resulting affine system solved.
fn polynomial_iso_exists(space: &MapSpace) -> Result<bool> {
    let mut blocks: BTreeMap<(i64, i64), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (x, g) in space.src.grades.iter().enumerate() {
        blocks.entry(*g).or_default().0.push(x);
    }
    for (y, g) in space.dst.grades.iter().enumerate() {
        blocks.entry(*g).or_default().1.push(y);
    }
    let entry_of: BTreeMap<(usize, usize), usize> =
        space.entries.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    // per block: list of entry variables, in row-major (x, y) order
    let block_list: Vec<(Vec<usize>, Vec<usize>)> = blocks.into_values().collect();
    if let Some((xs, _)) = block_list.iter().find(|(xs, _)| xs.len() > 4) {
        return Err(ComplexError::SizeBound(xs.len(), 4));
    }
    let choices: Vec<Vec<Mat>> = block_list.iter().map(|(xs, _)| invertible_matrices(xs.len())).collect();
    let dim = space.dim();
    // linear map μ ↦ value of entry k
    let entry_row = |k: usize| BitVec::from_ones(dim, (0..dim).filter(|&b| space.basis[b].get(k)));
    let mut idx = vec![0usize; choices.len()];
    loop {
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (b, (xs, ys)) in block_list.iter().enumerate() {
            let p = &choices[b][idx[b]];
            for (r, &x) in xs.iter().enumerate() {
                for (s, &y) in ys.iter().enumerate() {
                    rows.push(entry_row(entry_of[&(x, y)]));
                    rhs.push(p.rows[r].get(s));
                }
            }
        }
        if affine_solvable(&rows, &rhs, dim) {
            return Ok(true);
        }
        // advance the mixed-radix counter
        let mut b = 0;
        loop {
            if b == idx.len() {
                return Ok(false);
            }
            idx[b] += 1;
            if idx[b] < choices[b].len() {
                break;
            }
            idx[b] = 0;
            b += 1;
        }
    }
}

/// Whether `rows · μ = rhs` has a solution.
fn affine_solvable(rows: &[BitVec], rhs: &[bool], dim: usize) -> bool {
    let m = rows.len();
    // columns of the system matrix
    let cols: Vec<BitVec> = (0..dim).map(|b| BitVec::from_ones(m, (0..m).filter(|&r| rows[r].get(b)))).collect();
    let target = BitVec::from_ones(m, (0..m).filter(|&r| rhs[r]));
    solve(&cols, &target).is_some()
}

/// All invertible `k × k` matrices over F₂ (used for `k ≤ 4`).
fn invertible_matrices(k: usize) -> Vec<Mat> {
    let total = 1u64 << (k * k);
    (0..total)
        .map(|mask| Mat {
            n: k,
            rows: (0..k).map(|r| BitVec::from_ones(k, (0..k).filter(|&s| mask >> (r * k + s) & 1 == 1))).collect(),
        })
        .filter(|m| m.is_invertible())
        .collect()
}

/// Rank of a map given by columns.
pub fn map_rank(cols: &[BitVec], n: usize) -> usize {
    rank(cols, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{make_complex, Generator};
    use crate::ring::RingElement;

    fn p(s: &str) -> RingElement {
        RingElement::parse(RingMode::Polynomial, s).unwrap()
    }

    fn trefoil() -> ChainComplex {
        let gens = vec![Generator::new("b", 0, -2), Generator::new("x0", -1, -1), Generator::new("a", -2, 0)];
        make_complex(RingMode::Polynomial, gens, [(1, 0, p("U")), (1, 2, p("V"))]).unwrap()
    }

    #[test]
    fn iso_to_self_and_permutation() {
        let t = trefoil();
        assert!(is_isomorphic(&t, &t).unwrap());
        assert!(is_isomorphic(&t, &t.permuted(&[2, 0, 1])).unwrap());
        assert!(!is_isomorphic(&t, &t.dual()).unwrap());
    }

    #[test]
    fn identity_is_a_local_self_map() {
        let t = trefoil();
        let s = MapSpace::new(&t, &t).unwrap();
        assert!(s.find_local_map().is_some());
        let lambda = s.local_functional().unwrap();
        // identity map
        let id = BitVec::from_ones(s.entries.len(), (0..s.entries.len()).filter(|&k| s.entries[k].0 == s.entries[k].1));
        assert!(lambda.dot(&id));
    }

    #[test]
    fn size_bound() {
        let t = trefoil().tensor(&trefoil()).unwrap().tensor(&trefoil()).unwrap();
        assert!(matches!(is_isomorphic(&t, &t), Err(ComplexError::SizeBound(27, 12))));
    }
}
