//! Reduction, basis change, homology engines and mode conversion.

use std::collections::{BTreeMap, VecDeque};

use super::{
    arrow_monomial, shift_monomial, ChainComplex, ComplexError, Generator, Result, Specialized, Vector,
};
use crate::f2::{rank, solve, BitVec, F2Complex, Key, Mat};
use crate::ring::{Monomial, RingElement, RingMode};

/// Output of [`ChainComplex::reduce_tracked`].
#[derive(Debug, Clone)]
pub struct Reduction {
    pub complex: ChainComplex,
    /// Original index of each surviving generator.
    pub survivors: Vec<usize>,
    /// Image of each surviving generator under the inclusion of the reduced
    /// complex, as a support over the original generators (homogeneous of the
    /// survivor's grading).
    pub reps: Vec<BitVec>,
}

impl Reduction {
    /// The representative of survivor `k` as a ring vector.
    pub fn rep_vector(&self, original: &ChainComplex, k: usize) -> Vector {
        support_to_vector(original, self.complex.gen(k).grading(), &self.reps[k])
    }
}

/// A homogeneous vector of grading `g` with the given support.
pub fn support_to_vector(c: &ChainComplex, g: (i64, i64), s: &BitVec) -> Vector {
    s.ones()
        .map(|y| {
            let m = shift_monomial(g, c.gen(y).grading()).expect("support must be admissible");
            (y, RingElement::monomial(c.mode(), m).expect("support must be admissible"))
        })
        .collect()
}

/// The grading of a nonzero homogeneous vector, or an error if its terms
/// disagree.
pub fn vector_grading(c: &ChainComplex, v: &Vector) -> Result<Option<(i64, i64)>> {
    let mut g = None;
    for (&y, e) in v {
        for m in e.terms() {
            let gy = c.gen(y).grading();
            let here = (gy.0 - 2 * m.u, gy.1 - 2 * m.v);
            match g {
                None => g = Some(here),
                Some(prev) if prev != here => {
                    return Err(ComplexError::NotFiltered(format!("vector mixes gradings {prev:?} and {here:?}")))
                }
                _ => {}
            }
        }
    }
    Ok(g)
}

/// Expresses a homogeneous vector (grading `g`, support `target`) in a basis
/// of homogeneous vectors. Returns the F₂ coefficients; the ring coefficient
/// of basis vector `k` is the monomial shifting its grading to `g`.
pub fn express_in_basis(
    sp: &Specialized,
    basis_grades: &[(i64, i64)],
    basis: &[BitVec],
    g: (i64, i64),
    target: &BitVec,
) -> Option<BitVec> {
    let usable: Vec<usize> = (0..basis.len())
        .filter(|&k| match shift_monomial(g, basis_grades[k]) {
            None => false,
            Some(m) => sp.mode == RingMode::Localized || m.is_polynomial(),
        })
        .collect();
    let cols: Vec<BitVec> = usable.iter().map(|&k| basis[k].clone()).collect();
    let sol = solve(&cols, target)?;
    Some(BitVec::from_ones(basis.len(), sol.ones().map(|t| usable[t])))
}

/// Graded Euler characteristic data and homology tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedHomology {
    pub rank: usize,
    /// Rank in even and in odd Maslov parity.
    pub by_parity: [usize; 2],
}

/// Standard presentation in the `(i, j)` plane; see [`ChainComplex::filtered_view`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredView {
    /// Filtration point of the chosen translate of each generator.
    pub points: Vec<(i64, i64)>,
    /// Maslov grading of that translate.
    pub maslov: Vec<i64>,
    /// Arrows `(from, to, k)`: `∂` of the chosen translate of `from`
    /// contains `U^k` times the chosen translate of `to`.
    pub arrows: Vec<(usize, usize, i64)>,
}

impl ChainComplex {
    /// Cancels every unit-coefficient arrow.
    pub fn reduce(&self) -> ChainComplex {
        self.reduce_tracked().complex
    }

    /// Cancellation with representative tracking. Pairs are chosen
    /// deterministically: the lowest-index source with a unit arrow, and its
    /// lowest-index unit target.
    pub fn reduce_tracked(&self) -> Reduction {
        let n = self.len();
        let sp = self.specialized();
        let mut d = sp.d.clone();
        let mut reps: Vec<BitVec> = (0..n).map(|x| BitVec::unit(n, x)).collect();
        let mut alive = vec![true; n];
        let is_unit = |x: usize, y: usize| {
            self.mode == RingMode::Localized
                || arrow_monomial(sp.grades[x], sp.grades[y]).is_some_and(|m| m.is_one())
        };
        // incoming[y] = sources whose boundary contains y
        let mut incoming: Vec<BitVec> = vec![BitVec::zeros(n); n];
        for (x, col) in d.iter().enumerate() {
            for y in col.ones() {
                incoming[y].set(x, true);
            }
        }
        loop {
            let pair = (0..n).filter(|&x| alive[x]).find_map(|x| d[x].ones().find(|&y| is_unit(x, y)).map(|y| (x, y)));
            let Some((x, y)) = pair else { break };
            let dx = d[x].clone();
            let rx = reps[x].clone();
            let sources: Vec<usize> = incoming[y].ones().filter(|&z| z != x).collect();
            for z in sources {
                for w in dx.ones() {
                    d[z].flip(w);
                    incoming[w].flip(z);
                }
                reps[z].xor_assign(&rx);
            }
            for v in [x, y] {
                alive[v] = false;
                for w in d[v].ones().collect::<Vec<_>>() {
                    incoming[w].set(v, false);
                }
                d[v] = BitVec::zeros(n);
                for z in incoming[v].ones().collect::<Vec<_>>() {
                    d[z].set(v, false);
                }
                incoming[v] = BitVec::zeros(n);
            }
        }
        let survivors: Vec<usize> = (0..n).filter(|&x| alive[x]).collect();
        let pos: BTreeMap<usize, usize> = survivors.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let m = survivors.len();
        let gens: Vec<Generator> = survivors.iter().map(|&x| self.gens[x].clone()).collect();
        let cols: Vec<BitVec> = survivors.iter().map(|&x| BitVec::from_ones(m, d[x].ones().map(|y| pos[&y]))).collect();
        let complex = Specialized::rebuild(self.mode, gens, &cols).expect("cancellation preserves validity");
        let reps = survivors.iter().map(|&x| reps[x].clone()).collect();
        Reduction { complex, survivors, reps }
    }

    /// Rewrites the complex in a new basis given as homogeneous vectors in
    /// the old one. In polynomial mode the change must be invertible over
    /// F₂[U,V], i.e. its constant part must be an invertible F₂ matrix.
    pub fn change_basis(&self, new: &[(String, Vector)]) -> Result<ChainComplex> {
        let n = self.len();
        if new.len() != n {
            return Err(ComplexError::NotInvertible);
        }
        let mut grades = Vec::with_capacity(n);
        let mut supports = Vec::with_capacity(n);
        for (name, v) in new {
            for e in v.values() {
                if e.mode() != self.mode {
                    return Err(ComplexError::ModeMismatch(self.mode, e.mode()));
                }
            }
            let g = vector_grading(self, v)?.ok_or_else(|| ComplexError::NotFiltered(format!("{name} is zero")))?;
            grades.push(g);
            supports.push(BitVec::from_ones(n, v.keys().copied()));
        }
        let sp = self.specialized();
        let invertible = match self.mode {
            RingMode::Polynomial => {
                // constant part: entry (k, y) if y occurs in b_k with coefficient 1
                let rows = (0..n)
                    .map(|k| BitVec::from_ones(n, supports[k].ones().filter(|&y| sp.grades[y] == grades[k])))
                    .collect();
                Mat { n, rows }.is_invertible()
            }
            RingMode::Localized => Mat { n, rows: supports.clone() }.is_invertible(),
        };
        if !invertible {
            return Err(ComplexError::NotInvertible);
        }
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let db = sp.boundary(&supports[k]);
            let g = (grades[k].0 - 1, grades[k].1 - 1);
            let coeffs = express_in_basis(&sp, &grades, &supports, g, &db).ok_or(ComplexError::NotInvertible)?;
            cols.push(coeffs);
        }
        let gens = new.iter().zip(&grades).map(|((name, _), g)| Generator::new(name.clone(), g.0, g.1)).collect();
        Specialized::rebuild(self.mode, gens, &cols)
    }

    /// `C/(U,V)`: keys are `(alex, gr_u)`, arrows are the coefficient-1 terms.
    pub fn hat_f2(&self) -> F2Complex {
        let keys = self.gens.iter().map(|g| (g.alex(), g.gr_u)).collect();
        let d = self
            .diff
            .iter()
            .map(|col| col.iter().filter(|(_, c)| c.as_monomial() == Some(Monomial::ONE)).map(|(y, _)| *y).collect())
            .collect();
        F2Complex::new(keys, d)
    }

    /// Graded dimensions of `H(C/(U,V))`, keyed by `(alex, maslov)`.
    pub fn homology(&self) -> BTreeMap<Key, usize> {
        self.hat_f2().homology_by_rank()
    }

    /// Rank of homology after inverting `UV`, computed on the
    /// specialization `U = V = 1`.
    pub fn localized_homology(&self) -> LocalizedHomology {
        let sp = self.specialized();
        let n = self.len();
        let parity = |x: usize| sp.grades[x].0.rem_euclid(2) as usize;
        let mut by_parity = [0usize; 2];
        for p in 0..2 {
            let here: Vec<BitVec> = (0..n).filter(|&x| parity(x) == p).map(|x| sp.d[x].clone()).collect();
            let above: Vec<BitVec> = (0..n).filter(|&x| parity(x) != p).map(|x| sp.d[x].clone()).collect();
            by_parity[p] = here.len() - rank(&here, n) - rank(&above, n);
        }
        LocalizedHomology { rank: by_parity[0] + by_parity[1], by_parity }
    }

    pub fn localized_homology_rank(&self) -> usize {
        self.localized_homology().rank
    }

    /// `C/(U = 0)` with `V = 1`, graded by `gr_u`.
    pub fn vertical_f2(&self) -> F2Complex {
        let keys = self.gens.iter().map(|g| (0, g.gr_u)).collect();
        let d = self
            .diff
            .iter()
            .map(|col| {
                col.iter()
                    .filter(|(_, c)| c.as_monomial().is_some_and(|m| m.u == 0))
                    .map(|(y, _)| *y)
                    .collect()
            })
            .collect();
        F2Complex::new(keys, d)
    }

    pub fn vertical_homology_dim(&self) -> usize {
        self.vertical_f2().total_homology()
    }

    /// Both homology engines agree on the hat and vertical complexes.
    pub fn homology_engines_agree(&self) -> bool {
        [self.hat_f2(), self.vertical_f2()]
            .iter()
            .all(|f| f.homology_by_rank() == f.homology_by_cancellation())
    }

    /// Changes the ring mode. Polynomial → localized only retags; localized →
    /// polynomial rescales each generator by a power of `UV` so that every
    /// exponent becomes non-negative (shortest-path potentials).
    pub fn convert_mode(&self, target: RingMode) -> Result<ChainComplex> {
        if target == self.mode {
            return Ok(self.clone());
        }
        match target {
            RingMode::Localized => {
                let mut diff = Vec::with_capacity(self.len());
                for col in &self.diff {
                    let mut out = Vector::new();
                    for (y, c) in col {
                        out.insert(*y, c.with_mode(target)?);
                    }
                    diff.push(out);
                }
                Ok(ChainComplex::from_parts(target, self.gens.clone(), diff))
            }
            RingMode::Polynomial => {
                let n = self.len();
                let arrows = self.arrows();
                let mut t = vec![0i64; n];
                for round in 0..=n {
                    let mut changed = false;
                    for &(x, y, m) in &arrows {
                        let bound = t[x] + m.u.min(m.v);
                        if t[y] > bound {
                            t[y] = bound;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                    if round == n {
                        return Err(ComplexError::NotConvertible);
                    }
                }
                let gens: Vec<Generator> = self
                    .gens
                    .iter()
                    .zip(&t)
                    .map(|(g, &tx)| Generator::new(g.name.clone(), g.gr_u - 2 * tx, g.gr_v - 2 * tx))
                    .collect();
                let cols: Vec<BitVec> = self.specialized().d;
                Specialized::rebuild(target, gens, &cols)
            }
        }
    }

    /// Places one translate of every generator in the `(i, j)` plane: a root
    /// per connected component (the first generator of Alexander grading 0,
    /// else the first generator) at `(0, alex)`, then breadth-first along
    /// arrows so that tree arrows carry no power of `U`.
    pub fn filtered_view(&self) -> FilteredView {
        let n = self.len();
        let arrows = self.arrows();
        let mut adj: Vec<Vec<(usize, Monomial, bool)>> = vec![vec![]; n];
        for &(x, y, m) in &arrows {
            adj[x].push((y, m, true));
            adj[y].push((x, m, false));
        }
        let mut comp = vec![usize::MAX; n];
        let mut ncomp = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut q = VecDeque::from([s]);
            comp[s] = ncomp;
            while let Some(x) = q.pop_front() {
                for &(y, _, _) in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = ncomp;
                        q.push_back(y);
                    }
                }
            }
            ncomp += 1;
        }
        let mut points = vec![(0i64, 0i64); n];
        let mut maslov = vec![0i64; n];
        let mut placed = vec![false; n];
        for c in 0..ncomp {
            let members: Vec<usize> = (0..n).filter(|&x| comp[x] == c).collect();
            let root = members.iter().copied().find(|&x| self.gens[x].alex() == 0).unwrap_or(members[0]);
            points[root] = (0, self.gens[root].alex());
            maslov[root] = self.gens[root].gr_u;
            placed[root] = true;
            let mut q = VecDeque::from([root]);
            while let Some(x) = q.pop_front() {
                for &(y, m, forward) in &adj[x] {
                    if placed[y] {
                        continue;
                    }
                    let (i, j) = points[x];
                    if forward {
                        points[y] = (i - m.u, j - m.v);
                        maslov[y] = maslov[x] - 1;
                    } else {
                        points[y] = (i + m.u, j + m.v);
                        maslov[y] = maslov[x] + 1;
                    }
                    placed[y] = true;
                    q.push_back(y);
                }
            }
        }
        let view_arrows = arrows
            .iter()
            .map(|&(x, y, m)| (x, y, points[y].0 - points[x].0 + m.u))
            .collect();
        FilteredView { points, maslov, arrows: view_arrows }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::make_complex;

    fn p(s: &str) -> RingElement {
        RingElement::parse(RingMode::Polynomial, s).unwrap()
    }

    #[test]
    fn single_cancellation_gives_zero() {
        let gens = vec![Generator::new("x", 0, 0), Generator::new("y", -1, -1)];
        let c = make_complex(RingMode::Polynomial, gens, [(0, 1, p("1"))]).unwrap();
        assert!(c.reduce().is_empty());
        assert_eq!(c.localized_homology_rank(), 0);
    }

    #[test]
    fn reduce_tracks_representatives() {
        // z → y (1), x → y (1), x → w (U): cancelling x→y makes z ↦ z + x
        let gens = vec![
            Generator::new("x", 0, 0),
            Generator::new("y", -1, -1),
            Generator::new("z", 0, 0),
            Generator::new("w", 1, -1),
        ];
        let c = make_complex(RingMode::Polynomial, gens, [(0, 1, p("1")), (0, 3, p("U")), (2, 1, p("1"))]).unwrap();
        let r = c.reduce_tracked();
        assert_eq!(r.survivors, vec![2, 3]);
        assert_eq!(r.reps[0].ones().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(r.complex.coeff(1, 0), p("U"));
    }

    #[test]
    fn convert_round_trip() {
        let gens = vec![Generator::new("b", 0, -2), Generator::new("x0", -1, -1), Generator::new("a", -2, 0)];
        let c = make_complex(RingMode::Polynomial, gens, [(1, 0, p("U")), (1, 2, p("V"))]).unwrap();
        let l = c.convert_mode(RingMode::Localized).unwrap();
        assert_eq!(l.convert_mode(RingMode::Polynomial).unwrap(), c);
        let v = c.filtered_view();
        assert_eq!(v.points, vec![(-1, 0), (0, 0), (0, -1)]);
    }
}
