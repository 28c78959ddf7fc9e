//! The filtered mapping cone for +1 surgery and the reduced complex of the
//! dual knot.
//!
//! Copies `A_s` (`1−g ≤ s ≤ g`) and `B_s` (`2−g ≤ s ≤ g`) of the staircase
//! are glued by `v_s = id: A_s → B_s` and `h_s = U^s φ: A_s → B_{s+1}`. The
//! element `U^k x` at `(i, j)` in `A_s` gets the bifiltration
//! `(max(i, j−s), max(i+s−1, j))`, and in `B_s` the bifiltration
//! `(i, i+s−1)`. Maslov gradings are shifted by `a_s = s(s−1)` on `A_s` and
//! `b_s = s(s−1) − 1` on `B_s`, so `v` and `h` lower the grading by one.
//!
//! The cone is written as a complex over F₂[U,V] whose one-variable view
//! has the bifiltration above as its `(i, j)` coordinates.

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::region::{Region, Subquotient};
use crate::complex::{make_complex, ChainComplex, ComplexError, Generator, Reduction};
use crate::ring::{Monomial, RingElement, RingMode};
use crate::staircase::{staircase, LSpaceKnotData, Staircase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    B,
    A,
}

/// A generator of the cone: a staircase generator in one copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeIndex {
    pub part: Part,
    pub s: i64,
    /// Staircase generator index.
    pub x: usize,
    /// Bifiltration of the canonical translate `U^0 x` (at `(0, A(x))`).
    pub i0: i64,
    pub j0: i64,
    /// Maslov grading of that translate.
    pub m0: i64,
}

/// The symmetry `φ(x) = U^{−A(x)} σ(x)` of a staircase, `σ` the superscript swap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipMap {
    pub perm: Vec<usize>,
    /// One-variable power: `φ(U^k x) = U^{k + power[x]} σ(x)`.
    pub power: Vec<i64>,
}

impl FlipMap {
    pub fn of(st: &Staircase) -> FlipMap {
        let c = &st.complex;
        FlipMap {
            perm: (0..c.len()).map(|x| st.flip_index(x)).collect(),
            power: c.gens().iter().map(|g| -g.alex()).collect(),
        }
    }

    pub fn is_involution(&self) -> bool {
        (0..self.perm.len()).all(|x| self.perm[self.perm[x]] == x)
    }

    /// `φ` is a grading-preserving chain map exchanging the two filtrations:
    /// gradings are swapped and every arrow `U^a V^b` becomes `U^b V^a`.
    pub fn is_valid_for(&self, c: &ChainComplex) -> bool {
        let swap_ok = (0..c.len()).all(|x| {
            let (g, h) = (c.gen(x), c.gen(self.perm[x]));
            (g.gr_u, g.gr_v) == (h.gr_v, h.gr_u)
        });
        let arrows_ok = c.arrows().iter().all(|&(x, y, m)| {
            c.coeff(self.perm[y], self.perm[x]).as_monomial() == Some(Monomial::new(m.v, m.u))
        });
        swap_ok && arrows_ok && self.is_involution()
    }
}

pub fn flip_map(st: &Staircase) -> Result<FlipMap, ComplexError> {
    let f = FlipMap::of(st);
    if f.is_valid_for(&st.complex) {
        Ok(f)
    } else {
        Err(ComplexError::NotFiltered("staircase has no transposition symmetry".into()))
    }
}

#[derive(Debug, Clone)]
pub struct MappingCone {
    pub stair: Staircase,
    pub index: Vec<ConeIndex>,
    pub complex: ChainComplex,
}

fn grading_shift(part: Part, s: i64) -> i64 {
    match part {
        Part::A => s * (s - 1),
        Part::B => s * (s - 1) - 1,
    }
}

fn bifiltration(part: Part, s: i64, i: i64, j: i64) -> (i64, i64) {
    match part {
        Part::A => (i.max(j - s), (i + s - 1).max(j)),
        Part::B => (i, i + s - 1),
    }
}

impl MappingCone {
    pub fn locate(&self, part: Part, s: i64, x: usize) -> Option<usize> {
        self.index.iter().position(|c| c.part == part && c.s == s && c.x == x)
    }

    pub fn name_of(st: &Staircase, part: Part, s: i64, x: usize) -> String {
        let prime = if part == Part::B { "'" } else { "" };
        format!("({}){}_{}", st.labels[x].name(), prime, s)
    }

    /// The cone generator and translate `k` (in the one-variable view of the
    /// cone complex) of the element written `U^p (x)_s` relative to the
    /// picture translate of `x`.
    pub fn element(&self, part: Part, s: i64, x: usize, p: i64) -> Option<(usize, i64)> {
        let c = self.locate(part, s, x)?;
        let i_pic = self.stair.picture_points()[x].0 .0;
        // U^p(picture translate) = U^{p − i_pic}(canonical translate)
        Some((c, p - i_pic - self.index[c].i0))
    }
}

/// `X∞` for +1 surgery. B-copies come first in the generator order, which
/// fixes the cancellation order of [`ChainComplex::reduce`].
pub fn build_mapping_cone(st: &Staircase, phi: &FlipMap) -> MappingCone {
    let c = &st.complex;
    let g = st.data.genus();
    let mut index = Vec::new();
    for (part, lo) in [(Part::B, 2 - g), (Part::A, 1 - g)] {
        for s in lo..=g {
            for x in 0..c.len() {
                let gen = c.gen(x);
                let (i0, j0) = bifiltration(part, s, 0, gen.alex());
                index.push(ConeIndex { part, s, x, i0, j0, m0: gen.gr_u + grading_shift(part, s) });
            }
        }
    }
    let pos: BTreeMap<(Part, i64, usize), usize> =
        index.iter().enumerate().map(|(k, ci)| ((ci.part, ci.s, ci.x), k)).collect();
    let gens: Vec<Generator> = index
        .iter()
        .map(|ci| {
            Generator::new(MappingCone::name_of(st, ci.part, ci.s, ci.x), ci.m0 - 2 * ci.i0, ci.m0 - 2 * ci.j0)
        })
        .collect();

    // (source, target, one-variable power of the target's canonical translate)
    let mut raw: Vec<(usize, usize, i64)> = Vec::new();
    for (k, ci) in index.iter().enumerate() {
        for (y, m) in c.d(ci.x).iter().map(|(y, e)| (*y, e.as_monomial().expect("homogeneous"))) {
            raw.push((k, pos[&(ci.part, ci.s, y)], m.u));
        }
        if ci.part == Part::A {
            if let Some(&t) = pos.get(&(Part::B, ci.s, ci.x)) {
                raw.push((k, t, 0));
            }
            if let Some(&t) = pos.get(&(Part::B, ci.s + 1, phi.perm[ci.x])) {
                raw.push((k, t, ci.s + phi.power[ci.x]));
            }
        }
    }
    let arrows = raw.into_iter().map(|(a, b, kpow)| {
        let (sa, sb) = (&index[a], &index[b]);
        let di = sa.i0 - (sb.i0 - kpow);
        let dj = sa.j0 - (sb.j0 - kpow);
        assert!(di >= 0 && dj >= 0, "cone map is not filtered");
        (a, b, RingElement::monomial(RingMode::Polynomial, Monomial::new(di, dj)).expect("filtered"))
    });
    let complex = make_complex(RingMode::Polynomial, gens, arrows).expect("mapping cone is a valid complex");
    MappingCone { stair: st.clone(), index, complex }
}

/// The hat-flavored summand in Alexander grading `j`: the `{i = 0, j}`
/// subquotient of the cone.
pub fn hat_summand(cone: &MappingCone, j: i64) -> Result<Subquotient, ComplexError> {
    let g = cone.stair.data.genus();
    if j.abs() > g {
        return Err(ComplexError::NotFiltered(format!("Alexander level {j} outside [−{g}, {g}]")));
    }
    cone.complex.subquotient(&Region::point(0, j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Corner {
    /// Lower corner `g_j`.
    G,
    Beta,
    Alpha,
    /// Unclassified (does not occur for staircase inputs).
    Other,
}

#[derive(Debug, Clone)]
pub struct SurgeryDual {
    pub cone: MappingCone,
    pub reduction: Reduction,
    /// The reduced complex, generators renamed `g_j`, `α_j`, `β_j`.
    pub complex: ChainComplex,
    pub kinds: Vec<Corner>,
    /// Representative of each generator: its coefficient-one terms in the
    /// cone, written `U^p (x)_s` against the picture translates.
    pub reps: Vec<String>,
}

pub fn level_name(kind: Corner, j: i64) -> String {
    match kind {
        Corner::G => format!("g{j}"),
        Corner::Alpha => format!("α{j}"),
        Corner::Beta => format!("β{j}"),
        Corner::Other => format!("u{j}"),
    }
}

fn u_power(p: i64) -> String {
    match p {
        0 => String::new(),
        1 => "U".into(),
        _ => format!("U^{p}"),
    }
}

/// Reduced complex of the dual knot of +1 surgery on an L-space knot.
pub fn surgery_dual_complex(data: &LSpaceKnotData) -> SurgeryDual {
    let st = staircase(data);
    let phi = flip_map(&st).expect("staircases are symmetric");
    let cone = build_mapping_cone(&st, &phi);
    surgery_dual_from_cone(cone)
}

pub fn surgery_dual_from_cone(cone: MappingCone) -> SurgeryDual {
    let red = cone.complex.reduce_tracked();
    let c = &red.complex;
    let n = c.len();
    let kinds: Vec<Corner> = (0..n)
        .map(|z| {
            let ci = cone.index[red.survivors[z]];
            if ci.part == Part::B {
                return Corner::G;
            }
            let j = c.gen(z).alex();
            let mut levels: Vec<i64> = c.d(z).keys().map(|&y| c.gen(y).alex()).collect();
            levels.sort_unstable();
            levels.dedup();
            if levels == [j + 1] || levels == [j, j + 1] {
                Corner::Alpha
            } else if levels == [j - 1] || levels == [j - 1, j] {
                Corner::Beta
            } else {
                Corner::Other
            }
        })
        .collect();
    let pic = cone.stair.picture_points();
    let reps: Vec<String> = (0..n)
        .map(|z| {
            let g = c.gen(z).grading();
            let mut unit: Vec<usize> = red.reps[z].ones().filter(|&k| cone.complex.gen(k).grading() == g).collect();
            unit.sort_by_key(|&k| (cone.index[k].part == Part::B, cone.index[k].s, cone.index[k].x));
            let terms: Vec<String> = unit
                .into_iter()
                .map(|k| {
                    let ci = cone.index[k];
                    let p = ci.i0 + pic[ci.x].0 .0;
                    format!("{}{}", u_power(p), MappingCone::name_of(&cone.stair, ci.part, ci.s, ci.x))
                })
                .collect();
            terms.join(" + ")
        })
        .collect();
    let names: Vec<String> = (0..n).map(|z| level_name(kinds[z], c.gen(z).alex())).collect();
    let complex = c.renamed(|z, _| names[z].clone());
    SurgeryDual { cone, reduction: red, complex, kinds, reps }
}

/// Outcome of the structural checks on a reduced surgery dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    /// `2 n_m − 1` lower corners, one per level `|j| < n_m`, each `(x^1_m)'_{j+1}`.
    pub lower_corners: bool,
    pub lower_corners_are_cycles: bool,
    pub each_hit_twice: bool,
    /// Every other generator is an α or a β.
    pub upper_patterns: bool,
    /// Comparability of upper corners at distinct non-negative levels.
    pub comparable_levels: bool,
    /// Comparability of `α_j` and `β_j` at the same non-negative level.
    pub comparable_pairs: bool,
}

impl StructureReport {
    pub fn all(&self) -> bool {
        self.lower_corners
            && self.lower_corners_are_cycles
            && self.each_hit_twice
            && self.upper_patterns
            && self.comparable_levels
            && self.comparable_pairs
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lower={} cycles={} hit_twice={} patterns={} comparable={} pairs={}",
            self.lower_corners,
            self.lower_corners_are_cycles,
            self.each_hit_twice,
            self.upper_patterns,
            self.comparable_levels,
            self.comparable_pairs
        )
    }
}

/// `U^t a` and `U^s b` with equal Maslov grading sit at points with
/// `(i₁, j₁) ≤ (i₂, j₂)` componentwise (vacuous for different parities).
fn precedes(a: &Generator, b: &Generator) -> bool {
    let d = a.gr_u - b.gr_u;
    if d.rem_euclid(2) != 0 {
        return true;
    }
    // t − s = d/2; i₁ − i₂ = s − t, j₁ − j₂ = A(a) − A(b) + s − t
    let st = -d / 2;
    st <= 0 && a.alex() - b.alex() + st <= 0
}

impl SurgeryDual {
    pub fn structure(&self) -> StructureReport {
        let c = &self.complex;
        let nm = self.cone.stair.data.genus();
        let m = self.cone.stair.data.m();
        let top = self.cone.stair.index(crate::staircase::StairLabel::Arm { t: 1, s: m });
        let gs: Vec<usize> = (0..c.len()).filter(|&z| self.kinds[z] == Corner::G).collect();
        let mut levels: Vec<i64> = gs.iter().map(|&z| c.gen(z).alex()).collect();
        levels.sort_unstable();
        let lower_corners = levels == (1 - nm..nm).collect::<Vec<_>>()
            && gs.iter().all(|&z| {
                let ci = self.cone.index[self.reduction.survivors[z]];
                ci.x == top && ci.s == c.gen(z).alex() + 1
            });
        let lower_corners_are_cycles = gs.iter().all(|&z| c.d(z).is_empty());
        let each_hit_twice = gs.iter().all(|&g| (0..c.len()).filter(|&z| c.d(z).contains_key(&g)).count() == 2)
            && (0..c.len()).all(|z| self.kinds[z] == Corner::G || c.d(z).keys().all(|y| self.kinds[*y] == Corner::G));
        let upper_patterns = self.kinds.iter().all(|&k| k != Corner::Other);
        let uppers: Vec<usize> =
            (0..c.len()).filter(|&z| self.kinds[z] != Corner::G && c.gen(z).alex() >= 0).collect();
        let mut comparable_levels = true;
        let mut comparable_pairs = true;
        for &a in &uppers {
            for &b in &uppers {
                let (ja, jb) = (c.gen(a).alex(), c.gen(b).alex());
                if ja > jb && !precedes(c.gen(a), c.gen(b)) {
                    comparable_levels = false;
                }
                if ja == jb
                    && self.kinds[a] == Corner::Alpha
                    && self.kinds[b] == Corner::Beta
                    && !precedes(c.gen(a), c.gen(b))
                {
                    comparable_pairs = false;
                }
            }
        }
        StructureReport {
            lower_corners,
            lower_corners_are_cycles,
            each_hit_twice,
            upper_patterns,
            comparable_levels,
            comparable_pairs,
        }
    }

    /// Rows `(alex, name, maslov, ∂)` ordered by descending Alexander
    /// grading, then `g < β < α`. `∂` is written in the `g_j` with the power
    /// of `U` read off the first variable.
    pub fn table_rows(&self) -> Vec<(i64, String, i64, String)> {
        let c = &self.complex;
        let mut order: Vec<usize> = (0..c.len()).collect();
        order.sort_by_key(|&z| (-c.gen(z).alex(), self.kinds[z], z));
        order
            .into_iter()
            .map(|z| {
                let mut terms: Vec<(i64, i64, String)> = c
                    .d(z)
                    .iter()
                    .map(|(&y, e)| {
                        let m = e.as_monomial().expect("homogeneous");
                        (m.u, c.gen(y).alex(), c.gen(y).name.clone())
                    })
                    .collect();
                terms.sort();
                let d = if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.iter().map(|(p, _, name)| format!("{}{}", u_power(*p), name)).collect::<Vec<_>>().join(" + ")
                };
                (c.gen(z).alex(), c.gen(z).name.clone(), c.gen(z).gr_u, d)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::staircase::torus_alexander;

    #[test]
    fn flip_is_a_valid_involution() {
        for (p, q) in [(2, 3), (3, 5), (3, 4)] {
            let st = staircase(&torus_alexander(p, q).unwrap());
            let f = flip_map(&st).unwrap();
            assert!(f.is_involution());
        }
    }

    #[test]
    fn cone_size_for_t35() {
        let d = torus_alexander(3, 5).unwrap();
        let st = staircase(&d);
        let cone = build_mapping_cone(&st, &flip_map(&st).unwrap());
        assert_eq!(cone.complex.len(), 105);
        assert!(cone.complex.verify_d_squared());
    }

    #[test]
    fn t35_reduces_to_fifteen() {
        let sd = surgery_dual_complex(&torus_alexander(3, 5).unwrap());
        assert_eq!(sd.complex.len(), 15);
    }
}
