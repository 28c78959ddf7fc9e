//! Regions of the `(i, j)` plane and the subquotient complexes `CX`.
//!
//! A region is a finite union of conjunctions of constraints `form ⋈ c`
//! where `form` is one of `i`, `j`, `max(i, j−s)`, `min(i, j−s)`, `j−i`.
//! The subquotient `CX` is spanned over F₂ by the translates `U^k x` whose
//! filtration point lies in `X`; it is a complex when `X` is closed under
//! betweenness (`a ≤ b ≤ c` componentwise with `a, c ∈ X` forces `b ∈ X`).

use std::collections::HashMap;

use super::{ChainComplex, ComplexError, Result};
use crate::f2::{BitVec, F2Complex, Key};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    I,
    J,
    /// `max(i, j − s)`
    Max(i64),
    /// `min(i, j − s)`
    Min(i64),
    /// `j − i`
    Diag,
}

impl Form {
    pub fn eval(self, i: i64, j: i64) -> i64 {
        match self {
            Form::I => i,
            Form::J => j,
            Form::Max(s) => i.max(j - s),
            Form::Min(s) => i.min(j - s),
            Form::Diag => j - i,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraint {
    pub form: Form,
    pub rel: Rel,
    pub c: i64,
}

impl Constraint {
    pub fn new(form: Form, rel: Rel, c: i64) -> Self {
        Constraint { form, rel, c }
    }

    pub fn holds(&self, i: i64, j: i64) -> bool {
        let v = self.form.eval(i, j);
        match self.rel {
            Rel::Eq => v == self.c,
            Rel::Le => v <= self.c,
            Rel::Ge => v >= self.c,
        }
    }

    /// Range of `k` for which the translate at `(−k, a − k)` satisfies the
    /// constraint: `(lo, hi)` inclusive, `None` meaning unbounded. Returns
    /// `Err(())` when the constraint never holds on the orbit.
    fn orbit_range(&self, a: i64) -> std::result::Result<(Option<i64>, Option<i64>), ()> {
        // every form except j − i decreases by exactly 1 per step in k
        let f0 = self.form.eval(0, a);
        if self.form == Form::Diag {
            return if self.holds(0, a) { Ok((None, None)) } else { Err(()) };
        }
        let k = f0 - self.c;
        Ok(match self.rel {
            Rel::Eq => (Some(k), Some(k)),
            Rel::Le => (Some(k), None),
            Rel::Ge => (None, Some(k)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    clauses: Vec<Vec<Constraint>>,
}

impl Region {
    /// Union of the given conjunctions.
    pub fn new(clauses: Vec<Vec<Constraint>>) -> Self {
        Region { clauses }
    }

    pub fn everything() -> Self {
        Region { clauses: vec![vec![]] }
    }

    /// `{i = i0}`
    pub fn column(i0: i64) -> Self {
        Region::new(vec![vec![Constraint::new(Form::I, Rel::Eq, i0)]])
    }

    /// `{i ≥ c}`
    pub fn i_at_least(c: i64) -> Self {
        Region::new(vec![vec![Constraint::new(Form::I, Rel::Ge, c)]])
    }

    /// `{i = 0, j ≤ s}`
    pub fn column_below(s: i64) -> Self {
        Region::new(vec![vec![Constraint::new(Form::I, Rel::Eq, 0), Constraint::new(Form::J, Rel::Le, s)]])
    }

    /// `{max(i, j − s) = 0}`
    pub fn max_level(s: i64) -> Self {
        Region::new(vec![vec![Constraint::new(Form::Max(s), Rel::Eq, 0)]])
    }

    /// `{min(i, j − s) = 0}`
    pub fn min_level(s: i64) -> Self {
        Region::new(vec![vec![Constraint::new(Form::Min(s), Rel::Eq, 0)]])
    }

    /// `{i ≤ 0, j = s}`
    pub fn row_left(s: i64) -> Self {
        Region::new(vec![vec![Constraint::new(Form::I, Rel::Le, 0), Constraint::new(Form::J, Rel::Eq, s)]])
    }

    pub fn point(i: i64, j: i64) -> Self {
        Region::new(vec![vec![Constraint::new(Form::I, Rel::Eq, i), Constraint::new(Form::J, Rel::Eq, j)]])
    }

    pub fn contains(&self, i: i64, j: i64) -> bool {
        self.clauses.iter().any(|cl| cl.iter().all(|c| c.holds(i, j)))
    }

    fn scale(&self) -> i64 {
        let mut r = 0;
        for c in self.clauses.iter().flatten() {
            let s = match c.form {
                Form::Max(s) | Form::Min(s) => s.abs(),
                _ => 0,
            };
            r = r.max(c.c.abs() + s);
        }
        r
    }

    /// Checks betweenness on a grid large enough to contain every corner of
    /// the constraint lines.
    pub fn is_betweenness_closed(&self) -> bool {
        let r = 2 * self.scale() + 4;
        let w = (2 * r + 1) as usize;
        let at = |i: i64, j: i64| ((i + r) as usize) * w + (j + r) as usize;
        let mut inside = vec![false; w * w];
        for i in -r..=r {
            for j in -r..=r {
                inside[at(i, j)] = self.contains(i, j);
            }
        }
        // above[p]: some point of X is ≥ p; below[p]: some point of X is ≤ p
        let mut above = inside.clone();
        for i in (-r..=r).rev() {
            for j in (-r..=r).rev() {
                let mut v = above[at(i, j)];
                if i < r {
                    v |= above[at(i + 1, j)];
                }
                if j < r {
                    v |= above[at(i, j + 1)];
                }
                above[at(i, j)] = v;
            }
        }
        let mut below = inside.clone();
        for i in -r..=r {
            for j in -r..=r {
                let mut v = below[at(i, j)];
                if i > -r {
                    v |= below[at(i - 1, j)];
                }
                if j > -r {
                    v |= below[at(i, j - 1)];
                }
                below[at(i, j)] = v;
            }
        }
        (0..w * w).all(|p| !(above[p] && below[p]) || inside[p])
    }

    /// The `k` with `U^k x ∈ X` for a generator of Alexander grading `a`,
    /// as a union of inclusive intervals.
    pub fn orbit_ranges(&self, a: i64) -> Vec<(Option<i64>, Option<i64>)> {
        let mut out = Vec::new();
        'clause: for cl in &self.clauses {
            let (mut lo, mut hi): (Option<i64>, Option<i64>) = (None, None);
            for c in cl {
                let Ok((l, h)) = c.orbit_range(a) else { continue 'clause };
                lo = match (lo, l) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                };
                hi = match (hi, h) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
            }
            if let (Some(l), Some(h)) = (lo, hi) {
                if l > h {
                    continue;
                }
            }
            out.push((lo, hi));
        }
        out
    }
}

/// An F₂ subquotient complex with its basis of translates `(generator, k)`.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub basis: Vec<(usize, i64)>,
    pub index: HashMap<(usize, i64), usize>,
    /// Keys are `(0, maslov)`.
    pub f2: F2Complex,
}

impl Subquotient {
    fn build(c: &ChainComplex, mut basis: Vec<(usize, i64)>) -> Subquotient {
        basis.sort_unstable();
        basis.dedup();
        let index: HashMap<(usize, i64), usize> = basis.iter().enumerate().map(|(t, &b)| (b, t)).collect();
        let keys: Vec<Key> = basis.iter().map(|&(x, k)| (0, c.gen(x).gr_u - 2 * k)).collect();
        let d = basis
            .iter()
            .map(|&(x, k)| {
                let mut ts = Vec::new();
                for (y, e) in c.d(x) {
                    for m in e.terms() {
                        if let Some(&t) = index.get(&(*y, k + m.u)) {
                            ts.push(t);
                        }
                    }
                }
                ts
            })
            .collect();
        Subquotient { basis, index, f2: F2Complex::new(keys, d) }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn maslov(&self, t: usize) -> i64 {
        self.f2.keys[t].1
    }

    /// Homology dimension by Maslov grading.
    pub fn homology(&self) -> std::collections::BTreeMap<i64, usize> {
        self.f2.homology_by_rank().into_iter().map(|((_, m), d)| (m, d)).collect()
    }

    pub fn total_homology(&self) -> usize {
        self.f2.total_homology()
    }

    /// Maps a vector of another subquotient on the same complex into this
    /// one, dropping translates that are not present.
    pub fn transport(&self, from: &Subquotient, v: &BitVec) -> BitVec {
        BitVec::from_ones(self.len(), v.ones().filter_map(|t| self.index.get(&from.basis[t]).copied()))
    }
}

/// Filtration spread of a complex: Alexander span plus the largest arrow
/// exponent.
pub fn filtration_diameter(c: &ChainComplex) -> i64 {
    let alex: Vec<i64> = c.gens().iter().map(|g| g.alex()).collect();
    let span = match (alex.iter().min(), alex.iter().max()) {
        (Some(lo), Some(hi)) => hi - lo,
        _ => 0,
    };
    let drop = c.arrows().iter().map(|(_, _, m)| m.u.max(m.v)).max().unwrap_or(0);
    span + drop
}

impl ChainComplex {
    /// `CX`. Unbounded orbits are truncated to `|k| ≤ diameter + 1 + scale`
    /// of the region, which is exact for the bounded regions used by the
    /// invariants and an approximation near the cut otherwise.
    pub fn subquotient(&self, x: &Region) -> Result<Subquotient> {
        if !x.is_betweenness_closed() {
            return Err(ComplexError::NotBetweennessClosed);
        }
        let w = filtration_diameter(self) + 1 + x.scale();
        let mut basis = Vec::new();
        for (g, gen) in self.gens().iter().enumerate() {
            for (lo, hi) in x.orbit_ranges(gen.alex()) {
                let lo = lo.unwrap_or(-w).max(-w);
                let hi = hi.unwrap_or(w).min(w);
                basis.extend((lo..=hi).map(|k| (g, k)));
            }
        }
        Ok(Subquotient::build(self, basis))
    }

    /// `CX` restricted to Maslov gradings `m − 1 ..= m + 1`; its homology in
    /// grading `m` equals that of the full subquotient.
    pub fn subquotient_at(&self, x: &Region, m: i64) -> Result<Subquotient> {
        if !x.is_betweenness_closed() {
            return Err(ComplexError::NotBetweennessClosed);
        }
        let mut basis = Vec::new();
        for (g, gen) in self.gens().iter().enumerate() {
            let ranges = x.orbit_ranges(gen.alex());
            for mm in m - 1..=m + 1 {
                let diff = gen.gr_u - mm;
                if diff.rem_euclid(2) != 0 {
                    continue;
                }
                let k = diff / 2;
                let hit = ranges
                    .iter()
                    .any(|(lo, hi)| lo.is_none_or(|l| l <= k) && hi.is_none_or(|h| k <= h));
                if hit {
                    basis.push((g, k));
                }
            }
        }
        Ok(Subquotient::build(self, basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_regions_are_closed() {
        for r in [
            Region::column(0),
            Region::i_at_least(0),
            Region::column_below(2),
            Region::max_level(1),
            Region::min_level(-1),
            Region::row_left(3),
            Region::everything(),
        ] {
            assert!(r.is_betweenness_closed(), "{r:?}");
        }
        let two_points = Region::new(vec![
            vec![Constraint::new(Form::I, Rel::Eq, 0), Constraint::new(Form::J, Rel::Eq, 0)],
            vec![Constraint::new(Form::I, Rel::Eq, 2), Constraint::new(Form::J, Rel::Eq, 2)],
        ]);
        assert!(!two_points.is_betweenness_closed());
    }

    #[test]
    fn orbit_ranges_match_membership() {
        for r in [Region::max_level(1), Region::min_level(-1), Region::column_below(0), Region::i_at_least(-2)] {
            for a in -3..=3 {
                let ranges = r.orbit_ranges(a);
                for k in -8..=8 {
                    let by_range = ranges.iter().any(|(lo, hi)| lo.is_none_or(|l| l <= k) && hi.is_none_or(|h| k <= h));
                    assert_eq!(by_range, r.contains(-k, a - k), "{r:?} a={a} k={k}");
                }
            }
        }
    }
}
