//! τ, ν, ν′ and ε from subquotient homology, computed one Maslov grading at
//! a time.
//!
//! Everything happens inside `C{i ≥ 0}` (the plus complex):
//!
//! * the tower `T` is the image of `H(C{i ≥ −N})` under the quotient map,
//!   `N` the filtration diameter plus one (checked to be stable at `N + 1`);
//! * `τ` is the least `s` for which some class of `C{i = 0, j ≤ s}` maps to
//!   a nonzero tower class;
//! * `ν` is the same with `C{max(i, j − s) = 0}` (translates with `i < 0`
//!   map to zero);
//! * `ν′` is the largest `s` such that every class of `C{i = 0}` hitting a
//!   nonzero tower class survives in `C{min(i, j − s) = 0}`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::complex::region::{filtration_diameter, Constraint, Form, Region, Rel, Subquotient};
use crate::complex::{ChainComplex, ComplexError};
use crate::f2::{nullspace, BitVec, Echelon};
use crate::staircase::Laurent;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("tower image did not stabilize at N = {0}")]
    Unstable(i64),
    #[error("no tower class in range; localized homology is not rank one")]
    NoTower,
}

type Result<T> = std::result::Result<T, InvariantError>;

fn span(vs: impl IntoIterator<Item = BitVec>, n: usize) -> Echelon {
    let mut e = Echelon::new(n);
    for v in vs {
        let _ = e.insert(&v);
    }
    e
}

fn cycles_at(sq: &Subquotient, m: i64) -> Vec<BitVec> {
    sq.f2.cycles_and_boundaries((0, m)).0
}

fn boundaries_at(sq: &Subquotient, m: i64) -> Vec<BitVec> {
    sq.f2.cycles_and_boundaries((0, m)).1
}

/// Homology data of `C{i ≥ 0}` in one Maslov grading.
struct PlusData {
    plus: Subquotient,
    /// `B`
    bnd: Echelon,
    /// `T + B`
    tower: Echelon,
}

struct Ctx<'a> {
    c: &'a ChainComplex,
    gradings: Vec<i64>,
    lo: i64,
    hi: i64,
    plus: Vec<PlusData>,
}

impl<'a> Ctx<'a> {
    fn new(c: &'a ChainComplex) -> Result<Ctx<'a>> {
        let gradings: Vec<i64> =
            c.gens().iter().map(|g| g.gr_u).collect::<BTreeSet<_>>().into_iter().collect();
        let alex: Vec<i64> = c.gens().iter().map(|g| g.alex()).collect();
        let lo = alex.iter().min().copied().unwrap_or(0) - 1;
        let hi = alex.iter().max().copied().unwrap_or(0) + 1;
        let n_win = filtration_diameter(c) + 1;
        let mut plus = Vec::new();
        for &m in &gradings {
            let p = c.subquotient_at(&Region::i_at_least(0), m)?;
            let len = p.len();
            let bnd = span(boundaries_at(&p, m), len);
            let tower_at = |nn: i64| -> Result<Echelon> {
                let big = c.subquotient_at(&Region::i_at_least(-nn), m)?;
                let mut e = span(boundaries_at(&p, m), len);
                for z in cycles_at(&big, m) {
                    let _ = e.insert(&p.transport(&big, &z));
                }
                Ok(e)
            };
            let t1 = tower_at(n_win)?;
            let t2 = tower_at(n_win + 1)?;
            if t1.dim() != t2.dim() || t2.basis().any(|v| !t1.contains(v)) {
                return Err(InvariantError::Unstable(n_win));
            }
            plus.push(PlusData { plus: p, bnd, tower: t1 });
        }
        Ok(Ctx { c, gradings, lo, hi, plus })
    }

    /// Some class coming from `region` (mapped by coordinates) is a nonzero
    /// tower class in grading `gradings[t]`.
    fn hits_tower(&self, region: &Region, t: usize) -> Result<bool> {
        let m = self.gradings[t];
        let pd = &self.plus[t];
        let src = self.c.subquotient_at(region, m)?;
        let len = pd.plus.len();
        let mut image = span(boundaries_at(&pd.plus, m), len);
        for z in cycles_at(&src, m) {
            let _ = image.insert(&pd.plus.transport(&src, &z));
        }
        // dim((V+B) ∩ (T+B)) > dim B
        let mut sum = Echelon::new(len);
        for v in image.basis().chain(pd.tower.basis()) {
            let _ = sum.insert(v);
        }
        Ok(image.dim() + pd.tower.dim() - sum.dim() > pd.bnd.dim())
    }

    fn min_s_hitting(&self, region: impl Fn(i64) -> Region) -> Result<i64> {
        for s in self.lo..=self.hi {
            for t in 0..self.gradings.len() {
                if self.hits_tower(&region(s), t)? {
                    return Ok(s);
                }
            }
        }
        Err(InvariantError::NoTower)
    }

    /// Every tower-hitting class of `Ĥ` in grading `gradings[t]` survives in
    /// `C{min(i, j − s) = 0}`.
    fn survives(&self, s: i64, t: usize) -> Result<bool> {
        let m = self.gradings[t];
        let pd = &self.plus[t];
        let col = self.c.subquotient_at(&Region::column(0), m)?;
        let hook = self.c.subquotient_at(&Region::min_level(s), m)?;
        let hook_bnd = span(boundaries_at(&hook, m), hook.len());
        let zs = cycles_at(&col, m);
        // combined residues: ρ(z) mod (T + B) ⊕ v′(z) mod B_hook
        let upper_part =
            Region::new(vec![vec![Constraint::new(Form::I, Rel::Eq, 0), Constraint::new(Form::J, Rel::Ge, s)]]);
        let keep = |v: &BitVec| {
            BitVec::from_ones(
                col.len(),
                v.ones().filter(|&k| {
                    let (g, kk) = col.basis[k];
                    upper_part.contains(-kk, self.c.gen(g).alex() - kk)
                }),
            )
        };
        let residues: Vec<BitVec> = zs
            .iter()
            .map(|z| {
                let r1 = pd.tower.reduce(&pd.plus.transport(&col, z));
                let r2 = hook_bnd.reduce(&hook.transport(&col, &keep(z)));
                r1.concat(&r2)
            })
            .collect();
        let total = residues.first().map_or(0, |r| r.len());
        for combo in nullspace(&residues, total) {
            let mut z = BitVec::zeros(col.len());
            for k in combo.ones() {
                z.xor_assign(&zs[k]);
            }
            if !pd.bnd.contains(&pd.plus.transport(&col, &z)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn tau(c: &ChainComplex) -> Result<i64> {
    Ctx::new(c)?.min_s_hitting(Region::column_below)
}

pub fn nu(c: &ChainComplex) -> Result<i64> {
    Ctx::new(c)?.min_s_hitting(Region::max_level)
}

pub fn nu_prime(c: &ChainComplex) -> Result<i64> {
    let ctx = Ctx::new(c)?;
    nu_prime_in(&ctx)
}

fn nu_prime_in(ctx: &Ctx<'_>) -> Result<i64> {
    let mut best = None;
    for s in ctx.lo..=ctx.hi {
        let mut ok = true;
        for t in 0..ctx.gradings.len() {
            if !ctx.survives(s, t)? {
                ok = false;
                break;
            }
        }
        if ok {
            best = Some(s);
        }
    }
    best.ok_or(InvariantError::NoTower)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Invariants {
    pub tau: i64,
    pub nu: i64,
    pub nu_prime: i64,
    pub epsilon: i64,
}

/// All four invariants sharing one set of tower computations.
pub fn invariants(c: &ChainComplex) -> Result<Invariants> {
    let ctx = Ctx::new(c)?;
    let tau = ctx.min_s_hitting(Region::column_below)?;
    let nu = ctx.min_s_hitting(Region::max_level)?;
    let nu_prime = nu_prime_in(&ctx)?;
    Ok(Invariants { tau, nu, nu_prime, epsilon: epsilon_from(tau, nu, nu_prime) })
}

/// `−1` if `ν = τ + 1`, `+1` if `ν′ = τ − 1`, else `0`.
pub fn epsilon_from(tau: i64, nu: i64, nu_prime: i64) -> i64 {
    if nu == tau + 1 {
        -1
    } else if nu_prime == tau - 1 {
        1
    } else {
        0
    }
}

pub fn epsilon(c: &ChainComplex) -> Result<i64> {
    Ok(invariants(c)?.epsilon)
}

/// Graded Euler characteristic `Σ_j (−1)^M dim Ĥ(C, j, M) t^j`.
pub fn alexander_from_complex(c: &ChainComplex) -> Laurent {
    let mut p = Laurent::new();
    for ((a, m), d) in c.homology() {
        let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        *p.entry(a).or_insert(0) += sign * d as i64;
    }
    p.retain(|_, v| *v != 0);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingMode;
    use crate::staircase::{cn_dual_model, cn_model, staircase, torus_alexander};

    #[test]
    fn trefoil_values() {
        let s = staircase(&torus_alexander(2, 3).unwrap());
        let inv = invariants(&s.complex).unwrap();
        assert_eq!(inv, Invariants { tau: 1, nu: 1, nu_prime: 0, epsilon: 1 });
        let d = invariants(&s.complex.dual()).unwrap();
        assert_eq!((d.tau, d.epsilon), (-1, -1));
    }

    #[test]
    fn one_generator() {
        let c = ChainComplex::trivial(RingMode::Polynomial, 0);
        let inv = invariants(&c).unwrap();
        assert_eq!((inv.tau, inv.nu, inv.nu_prime, inv.epsilon), (0, 0, 0, 0));
        assert_eq!(alexander_from_complex(&c), Laurent::from([(0, 1)]));
    }

    #[test]
    fn models() {
        for n in [2, 3] {
            let c = invariants(&cn_model(n).unwrap()).unwrap();
            let d = invariants(&cn_dual_model(n).unwrap()).unwrap();
            assert_eq!((c.tau, c.epsilon), (1, 0), "C_{n}");
            assert_eq!((d.tau, d.epsilon), (-1, 0), "C_{n}*");
        }
    }

    #[test]
    fn euler_characteristic_of_t35() {
        let d = torus_alexander(3, 5).unwrap();
        let s = staircase(&d);
        assert_eq!(alexander_from_complex(&s.complex), d.alexander_polynomial());
    }
}
