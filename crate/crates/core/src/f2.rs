//! Dense F₂ linear algebra and finite F₂ chain complexes.
//!
//! Every homology computation in the crate ends up here: subquotients,
//! specializations (`U = V = 1`, `U = 0`) and hat complexes are all finite
//! graded F₂-complexes. Two independent engines are provided so they can be
//! cross-checked: boundary-matrix rank and arrow cancellation.

use std::collections::{BTreeMap, BTreeSet};

/// Fixed-length bit vector over F₂.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, o: &BitVec) {
        debug_assert_eq!(self.len, o.len);
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    pub fn dot(&self, o: &BitVec) -> bool {
        self.words.iter().zip(&o.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    /// Concatenation `self ‖ o`.
    pub fn concat(&self, o: &BitVec) -> BitVec {
        BitVec::from_ones(self.len + o.len, self.ones().chain(o.ones().map(|i| i + self.len)))
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        BitVec::from_ones(end - start, self.ones().filter(|&i| i >= start && i < end).map(|i| i - start))
    }
}

/// Row-echelon basis of a subspace of F₂ⁿ, keyed by lowest set bit. Each
/// stored vector optionally carries a tag recording which inserted vectors
/// it combines, which is how kernels and solutions are recovered.
#[derive(Clone, Debug)]
pub struct Echelon {
    n: usize,
    rows: BTreeMap<usize, (BitVec, BitVec)>,
    inserted: usize,
    tag_len: usize,
}

impl Echelon {
    pub fn new(n: usize) -> Self {
        Self::with_tags(n, 0)
    }

    /// `tag_len` bounds the number of vectors that will be inserted.
    pub fn with_tags(n: usize, tag_len: usize) -> Self {
        Echelon { n, rows: BTreeMap::new(), inserted: 0, tag_len }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Reduces `v` modulo the subspace; returns the remainder and the tag of
    /// the combination that was subtracted.
    pub fn reduce_tagged(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut v = v.clone();
        let mut tag = BitVec::zeros(self.tag_len);
        for (&p, (row, rtag)) in &self.rows {
            if v.get(p) {
                v.xor_assign(row);
                tag.xor_assign(rtag);
            }
        }
        (v, tag)
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (&p, (row, _)) in &self.rows {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns `Err(tag)` when `v` was dependent, with `tag`
    /// the dependency among inserted vectors (including `v` itself).
    pub fn insert(&mut self, v: &BitVec) -> Result<(), BitVec> {
        let k = self.inserted;
        self.inserted += 1;
        let (r, mut tag) = self.reduce_tagged(v);
        if self.tag_len > 0 {
            tag.flip(k);
        }
        match r.first_one() {
            None => Err(tag),
            Some(p) => {
                self.rows.insert(p, (r, tag));
                Ok(())
            }
        }
    }

    pub fn basis(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.values().map(|(r, _)| r)
    }
}

/// Rank of the span of `vecs`.
pub fn rank(vecs: &[BitVec], n: usize) -> usize {
    let mut e = Echelon::new(n);
    for v in vecs {
        let _ = e.insert(v);
    }
    e.dim()
}

/// Basis of `{c : Σ c_i vecs_i = 0}`.
pub fn nullspace(vecs: &[BitVec], n: usize) -> Vec<BitVec> {
    let mut e = Echelon::with_tags(n, vecs.len());
    vecs.iter().filter_map(|v| e.insert(v).err()).collect()
}

/// Some `c` with `Σ c_i vecs_i = target`.
pub fn solve(vecs: &[BitVec], target: &BitVec) -> Option<BitVec> {
    let mut e = Echelon::with_tags(target.len(), vecs.len() + 1);
    for v in vecs {
        let _ = e.insert(v);
    }
    let (r, tag) = e.reduce_tagged(target);
    r.is_zero().then(|| tag.slice(0, vecs.len()))
}

/// Square matrix over F₂ stored as rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub n: usize,
    pub rows: Vec<BitVec>,
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        Mat { n, rows: vec![BitVec::zeros(n); n] }
    }

    pub fn identity(n: usize) -> Self {
        Mat { n, rows: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(o.n);
                for k in r.ones() {
                    acc.xor_assign(&o.rows[k]);
                }
                acc
            })
            .collect();
        Mat { n: self.n, rows }
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows, self.n)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Rank of `self^k` for `k ≥ n` (Fitting stable rank).
    pub fn stable_rank(&self) -> usize {
        let mut p = self.clone();
        let mut r = p.rank();
        loop {
            let q = p.mul(self);
            let rq = q.rank();
            if rq == r {
                return r;
            }
            p = q;
            r = rq;
        }
    }

    pub fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r].get(col))?;
            a.swap(col, piv);
            inv.swap(col, piv);
            for r in 0..n {
                if r != col && a[r].get(col) {
                    let (ar, ic) = (a[col].clone(), inv[col].clone());
                    a[r].xor_assign(&ar);
                    inv[r].xor_assign(&ic);
                }
            }
        }
        Some(Mat { n, rows: inv })
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.n);
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }
}

/// Grading of a basis element of an [`F2Complex`]: a block label that the
/// differential preserves, and a homological degree it lowers by one.
pub type Key = (i64, i64);

/// Finite graded chain complex over F₂. `d[x]` lists the targets of `x`.
#[derive(Clone, Debug)]
pub struct F2Complex {
    pub keys: Vec<Key>,
    pub d: Vec<Vec<usize>>,
}

impl F2Complex {
    pub fn new(keys: Vec<Key>, d: Vec<Vec<usize>>) -> Self {
        let c = F2Complex { keys, d };
        debug_assert!(c.is_graded(), "F2Complex differential is not homogeneous");
        c
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn is_graded(&self) -> bool {
        self.d.iter().enumerate().all(|(x, ts)| {
            ts.iter().all(|&y| self.keys[y] == (self.keys[x].0, self.keys[x].1 - 1))
        })
    }

    pub fn d_squared_is_zero(&self) -> bool {
        (0..self.len()).all(|x| {
            let b = self.boundary(&BitVec::unit(self.len(), x));
            self.boundary(&b).is_zero()
        })
    }

    pub fn boundary(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len());
        for x in v.ones() {
            for &y in &self.d[x] {
                out.flip(y);
            }
        }
        out
    }

    fn groups(&self) -> BTreeMap<Key, Vec<usize>> {
        let mut g: BTreeMap<Key, Vec<usize>> = BTreeMap::new();
        for (i, k) in self.keys.iter().enumerate() {
            g.entry(*k).or_default().push(i);
        }
        g
    }

    /// Homology dimensions via boundary-matrix ranks.
    pub fn homology_by_rank(&self) -> BTreeMap<Key, usize> {
        let n = self.len();
        let mut out = BTreeMap::new();
        let groups = self.groups();
        let col = |x: usize| BitVec::from_ones(n, self.d[x].iter().copied());
        for (k, members) in &groups {
            let outgoing: Vec<BitVec> = members.iter().map(|&x| col(x)).collect();
            let above = (k.0, k.1 + 1);
            let incoming: Vec<BitVec> = groups
                .get(&above)
                .map(|m| m.iter().map(|&x| col(x)).collect())
                .unwrap_or_default();
            let dim = members.len() - rank(&outgoing, n) - rank(&incoming, n);
            if dim > 0 {
                out.insert(*k, dim);
            }
        }
        out
    }

    /// Homology dimensions via repeated cancellation of arrows.
    pub fn homology_by_cancellation(&self) -> BTreeMap<Key, usize> {
        let n = self.len();
        let mut out: Vec<BTreeSet<usize>> = self.d.iter().map(|t| t.iter().copied().collect()).collect();
        let mut inc: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (x, ts) in out.iter().enumerate() {
            for &y in ts {
                inc[y].insert(x);
            }
        }
        let mut alive = vec![true; n];
        while let Some(x) = (0..n).find(|&x| alive[x] && !out[x].is_empty()) {
            let y = *out[x].iter().next().expect("nonempty");
            let tx: Vec<usize> = out[x].iter().copied().collect();
            let sources: Vec<usize> = inc[y].iter().copied().filter(|&z| z != x).collect();
            for z in sources {
                for &w in &tx {
                    if !out[z].remove(&w) {
                        out[z].insert(w);
                        inc[w].insert(z);
                    } else {
                        inc[w].remove(&z);
                    }
                }
            }
            for v in [x, y] {
                alive[v] = false;
                for w in std::mem::take(&mut out[v]) {
                    inc[w].remove(&v);
                }
                for z in std::mem::take(&mut inc[v]) {
                    out[z].remove(&v);
                }
            }
        }
        let mut dims = BTreeMap::new();
        for (i, k) in self.keys.iter().enumerate() {
            if alive[i] {
                *dims.entry(*k).or_insert(0) += 1;
            }
        }
        dims
    }

    pub fn total_homology(&self) -> usize {
        self.homology_by_rank().values().sum()
    }

    /// Cycles and boundaries of the degree-`k` piece, as vectors in F₂^len.
    pub fn cycles_and_boundaries(&self, k: Key) -> (Vec<BitVec>, Vec<BitVec>) {
        let n = self.len();
        let members: Vec<usize> = (0..n).filter(|&i| self.keys[i] == k).collect();
        let cols: Vec<BitVec> = members.iter().map(|&x| BitVec::from_ones(n, self.d[x].iter().copied())).collect();
        let cycles = nullspace(&cols, n)
            .into_iter()
            .map(|c| BitVec::from_ones(n, c.ones().map(|t| members[t])))
            .collect();
        let above = (k.0, k.1 + 1);
        let boundaries = (0..n)
            .filter(|&i| self.keys[i] == above)
            .map(|x| BitVec::from_ones(n, self.d[x].iter().copied()))
            .collect();
        (cycles, boundaries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvec_basics() {
        let mut v = BitVec::zeros(130);
        v.set(3, true);
        v.set(129, true);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(v.first_one(), Some(3));
        v.flip(3);
        assert_eq!(v.first_one(), Some(129));
    }

    #[test]
    fn nullspace_and_solve() {
        let a = BitVec::from_ones(3, [0, 1]);
        let b = BitVec::from_ones(3, [1, 2]);
        let c = BitVec::from_ones(3, [0, 2]);
        let ns = nullspace(&[a.clone(), b.clone(), c.clone()], 3);
        assert_eq!(ns, vec![BitVec::from_ones(3, [0, 1, 2])]);
        let s = solve(&[a, b], &c).unwrap();
        assert_eq!(s, BitVec::from_ones(2, [0, 1]));
    }

    #[test]
    fn matrix_inverse() {
        let m = Mat { n: 2, rows: vec![BitVec::from_ones(2, [0, 1]), BitVec::from_ones(2, [1])] };
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert!(Mat::zero(2).inverse().is_none());
    }

    #[test]
    fn engines_agree_on_a_square() {
        // a → b, a → c, b → d, c → d : acyclic
        let c = F2Complex::new(vec![(0, 2), (0, 1), (0, 1), (0, 0)], vec![vec![1, 2], vec![3], vec![3], vec![]]);
        assert!(c.d_squared_is_zero());
        assert!(c.homology_by_rank().is_empty());
        assert!(c.homology_by_cancellation().is_empty());
    }
}
