//! Staircase complexes of L-space knots and the model complexes `C_n`, `C_n*`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{make_complex, ChainComplex, Generator};
use crate::ring::{Monomial, RingElement, RingMode};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StaircaseError {
    #[error("gcd({0}, {1}) ≠ 1")]
    NotCoprime(i64, i64),
    #[error("torus parameters must be at least 2")]
    SmallTorus,
    #[error("exponents must be positive and strictly increasing: {0:?}")]
    BadExponents(Vec<i64>),
    #[error("n(K) = 0 (unknot-like data) is not supported")]
    TrivialN,
    #[error("Alexander polynomial is not of L-space form")]
    NotLSpace,
    #[error("model parameter out of range: {0}")]
    Range(String),
}

/// Laurent polynomial in `t` with integer coefficients, `exponent → coefficient`.
pub type Laurent = BTreeMap<i64, i64>;

/// Exponents `0 < n_1 < … < n_m` of an L-space knot's symmetrized Alexander
/// polynomial `(−1)^m + Σ (−1)^{m−i} (t^{n_i} + t^{−n_i})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LSpaceKnotData {
    exps: Vec<i64>,
}

impl LSpaceKnotData {
    pub fn new(exps: Vec<i64>) -> Result<Self, StaircaseError> {
        if exps.is_empty() || exps[0] <= 0 || exps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(StaircaseError::BadExponents(exps));
        }
        let d = LSpaceKnotData { exps };
        if d.n_of_k() < 1 {
            return Err(StaircaseError::TrivialN);
        }
        Ok(d)
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn m(&self) -> usize {
        self.exps.len()
    }

    pub fn genus(&self) -> i64 {
        *self.exps.last().expect("nonempty")
    }

    /// `n_s` with `n_0 = 0`.
    pub fn n_at(&self, s: usize) -> i64 {
        if s == 0 {
            0
        } else {
            self.exps[s - 1]
        }
    }

    /// `ℓ_s = n_s − n_{s−1}` for `1 ≤ s ≤ m`.
    pub fn ell(&self, s: usize) -> i64 {
        self.n_at(s) - self.n_at(s - 1)
    }

    /// `n(K) = n_m − n_{m−1} + … ± n_1`.
    pub fn n_of_k(&self) -> i64 {
        let m = self.m();
        (1..=m).map(|i| if (m - i).is_multiple_of(2) { self.n_at(i) } else { -self.n_at(i) }).sum()
    }

    /// `L_s = ℓ_m + ℓ_{m−2} + … + ℓ_{s+2}`.
    pub fn big_l(&self, s: i64) -> i64 {
        let mut sum = 0;
        let mut t = self.m() as i64;
        while t >= s + 2 && t >= 1 {
            sum += self.ell(t as usize);
            t -= 2;
        }
        sum
    }

    /// The symmetrized Alexander polynomial expanded from the exponents.
    pub fn alexander_polynomial(&self) -> Laurent {
        let m = self.m();
        let sign = |e: usize| if e.is_multiple_of(2) { 1 } else { -1 };
        let mut p = Laurent::new();
        p.insert(0, sign(m));
        for i in 1..=m {
            p.insert(self.n_at(i), sign(m - i));
            p.insert(-self.n_at(i), sign(m - i));
        }
        p
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Ordinary polynomial division; coefficients indexed by degree.
fn poly_div(num: &[i64], den: &[i64]) -> Option<Vec<i64>> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last()?;
    if r.len() < den.len() {
        return None;
    }
    let mut q = vec![0; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd];
        if c % lead != 0 {
            return None;
        }
        let c = c / lead;
        q[k] = c;
        for (t, &dv) in den.iter().enumerate() {
            r[k + t] -= c * dv;
        }
    }
    r.iter().all(|&c| c == 0).then_some(q)
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn t_pow_minus_one(k: usize) -> Vec<i64> {
    let mut v = vec![0; k + 1];
    v[0] = -1;
    v[k] = 1;
    v
}

/// Alexander data of `T(p, q)` from `(t^{pq} − 1)(t − 1) / ((t^p − 1)(t^q − 1))`.
pub fn torus_alexander(p: i64, q: i64) -> Result<LSpaceKnotData, StaircaseError> {
    if p < 2 || q < 2 {
        return Err(StaircaseError::SmallTorus);
    }
    if gcd(p, q) != 1 {
        return Err(StaircaseError::NotCoprime(p, q));
    }
    let num = poly_mul(&t_pow_minus_one((p * q) as usize), &t_pow_minus_one(1));
    let den = poly_mul(&t_pow_minus_one(p as usize), &t_pow_minus_one(q as usize));
    let coeffs = poly_div(&num, &den).ok_or(StaircaseError::NotLSpace)?;
    let g = ((coeffs.len() - 1) / 2) as i64;
    let sym: Laurent = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| (k as i64 - g, c))
        .collect();
    let exps: Vec<i64> = sym.keys().copied().filter(|&e| e > 0).collect();
    let data = LSpaceKnotData::new(exps)?;
    if data.alexander_polynomial() != sym {
        return Err(StaircaseError::NotLSpace);
    }
    Ok(data)
}

/// Position of a generator in the staircase: the center `x_0` or `x^t_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StairLabel {
    Center,
    Arm { t: u8, s: usize },
}

impl StairLabel {
    pub fn name(self) -> String {
        match self {
            StairLabel::Center => "x0".into(),
            StairLabel::Arm { t, s } => format!("x^{t}_{s}"),
        }
    }

    /// The superscript swap `1 ↔ 2`.
    pub fn flipped(self) -> StairLabel {
        match self {
            StairLabel::Center => StairLabel::Center,
            StairLabel::Arm { t, s } => StairLabel::Arm { t: 3 - t, s },
        }
    }
}

#[derive(Debug, Clone)]
pub struct Staircase {
    pub data: LSpaceKnotData,
    pub complex: ChainComplex,
    pub labels: Vec<StairLabel>,
    /// Filtration point of the drawn translate (`x_0` at the origin,
    /// `x^1_m` at `(−n, g − n)`).
    pub points: Vec<(i64, i64)>,
    /// Maslov grading of the drawn translate.
    pub maslov: Vec<i64>,
}

impl Staircase {
    /// Order: `x^1_m, …, x^1_1, x_0, x^2_1, …, x^2_m`.
    pub fn index(&self, l: StairLabel) -> usize {
        let m = self.data.m();
        match l {
            StairLabel::Center => m,
            StairLabel::Arm { t: 1, s } => m - s,
            StairLabel::Arm { s, .. } => m + s,
        }
    }

    /// Index of the mirror generator.
    pub fn flip_index(&self, x: usize) -> usize {
        self.index(self.labels[x].flipped())
    }

    /// Points shifted by `(n, n)` so that `x^1_m` sits on the `j`-axis at
    /// `(0, g)`; this is the translate drawn in the usual pictures.
    pub fn picture_points(&self) -> Vec<((i64, i64), i64)> {
        let n = self.data.n_of_k();
        self.points.iter().zip(&self.maslov).map(|(&(i, j), &mm)| ((i + n, j + n), mm + 2 * n)).collect()
    }
}

/// The staircase complex of an L-space knot over F₂[U,V].
pub fn staircase(data: &LSpaceKnotData) -> Staircase {
    let m = data.m();
    let g = data.genus();
    let n = data.n_of_k();
    let mut labels = Vec::with_capacity(2 * m + 1);
    labels.extend((1..=m).rev().map(|s| StairLabel::Arm { t: 1, s }));
    labels.push(StairLabel::Center);
    labels.extend((1..=m).map(|s| StairLabel::Arm { t: 2, s }));

    // arm 1, walking from x^1_m down to x_0
    let mut arm = vec![(0i64, 0i64); m + 1]; // arm[s] = point of x^1_s, arm[0] = x_0
    arm[m] = (-n, g - n);
    for t in (1..=m).rev() {
        let (i, j) = arm[t];
        arm[t - 1] = if (m - t).is_multiple_of(2) { (i + data.ell(t), j) } else { (i, j - data.ell(t)) };
    }
    debug_assert_eq!(arm[0], (0, 0));
    let point = |l: StairLabel| match l {
        StairLabel::Center => (0, 0),
        StairLabel::Arm { t: 1, s } => arm[s],
        StairLabel::Arm { s, .. } => (arm[s].1, arm[s].0),
    };
    let points: Vec<(i64, i64)> = labels.iter().map(|&l| point(l)).collect();

    // sources sit at arm positions of the parity of m + 1 (position 0 is x_0)
    let mut arrows: Vec<(StairLabel, StairLabel)> = Vec::new();
    for t in [1u8, 2] {
        let a = |s: usize| if s == 0 { StairLabel::Center } else { StairLabel::Arm { t, s } };
        for s in ((1 - m % 2)..m).step_by(2) {
            if s >= 1 {
                arrows.push((a(s), a(s - 1)));
            }
            arrows.push((a(s), a(s + 1)));
        }
    }
    arrows.sort();
    arrows.dedup();

    // Maslov gradings of drawn translates: x^1_m's picture translate has 0
    let idx = |l: StairLabel| labels.iter().position(|&x| x == l).expect("label");
    let mut maslov = vec![None; labels.len()];
    maslov[0] = Some(-2 * n);
    loop {
        let mut changed = false;
        for &(a, b) in &arrows {
            let (ia, ib) = (idx(a), idx(b));
            match (maslov[ia], maslov[ib]) {
                (Some(x), None) => {
                    maslov[ib] = Some(x - 1);
                    changed = true;
                }
                (None, Some(y)) => {
                    maslov[ia] = Some(y + 1);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let maslov: Vec<i64> = maslov.into_iter().map(|x| x.expect("staircase is connected")).collect();

    let gens: Vec<Generator> = labels
        .iter()
        .zip(&points)
        .zip(&maslov)
        .map(|((l, &(i, j)), &mm)| {
            let gr_u = mm - 2 * i;
            Generator::new(l.name(), gr_u, gr_u - 2 * (j - i))
        })
        .collect();
    let ring_arrows = arrows.iter().map(|&(a, b)| {
        let (pa, pb) = (point(a), point(b));
        let mono = Monomial::new(pa.0 - pb.0, pa.1 - pb.1);
        (idx(a), idx(b), RingElement::monomial(RingMode::Polynomial, mono).expect("arrows point down-left"))
    });
    let complex = make_complex(RingMode::Polynomial, gens, ring_arrows).expect("staircase is a valid complex");
    Staircase { data: data.clone(), complex, labels, points, maslov }
}

/// `C_n`: `∂y_1 = U^{n−1}V^n x_0 + U^n V^{n−1} x_1`.
pub fn cn_model(n: i64) -> Result<ChainComplex, StaircaseError> {
    if n < 1 {
        return Err(StaircaseError::Range(format!("n = {n}")));
    }
    let gens = vec![
        Generator::new("x0", -2, 0),
        Generator::new("x1", 0, -2),
        Generator::new("y1", -2 * n + 1, -2 * n + 1),
    ];
    let p = RingMode::Polynomial;
    let arrows = [
        (2, 0, RingElement::monomial(p, Monomial::new(n - 1, n)).expect("n ≥ 1")),
        (2, 1, RingElement::monomial(p, Monomial::new(n, n - 1)).expect("n ≥ 1")),
    ];
    Ok(make_complex(p, gens, arrows).expect("valid model"))
}

/// `C_n*`: `∂x_0* = U^{n−1}V^n y_1*`, `∂x_1* = U^n V^{n−1} y_1*`.
pub fn cn_dual_model(n: i64) -> Result<ChainComplex, StaircaseError> {
    if n < 1 {
        return Err(StaircaseError::Range(format!("n = {n}")));
    }
    let gens = vec![
        Generator::new("x0*", 2, 0),
        Generator::new("x1*", 0, 2),
        Generator::new("y1*", 2 * n - 1, 2 * n - 1),
    ];
    let p = RingMode::Polynomial;
    let arrows = [
        (0, 2, RingElement::monomial(p, Monomial::new(n - 1, n)).expect("n ≥ 1")),
        (1, 2, RingElement::monomial(p, Monomial::new(n, n - 1)).expect("n ≥ 1")),
    ];
    Ok(make_complex(p, gens, arrows).expect("valid model"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_data() {
        let t = torus_alexander(3, 5).unwrap();
        assert_eq!(t.exps(), &[1, 3, 4]);
        assert_eq!(t.n_of_k(), 2);
        assert_eq!(torus_alexander(2, 7).unwrap().exps(), &[1, 2, 3]);
        assert_eq!(torus_alexander(2, 7).unwrap().n_of_k(), 2);
        assert_eq!(torus_alexander(2, 3).unwrap().exps(), &[1]);
        assert_eq!(torus_alexander(3, 4).unwrap().exps(), &[2, 3]);
        assert_eq!(torus_alexander(4, 6), Err(StaircaseError::NotCoprime(4, 6)));
    }

    #[test]
    fn rejects_trivial_n() {
        assert!(LSpaceKnotData::new(vec![2, 1]).is_err());
        assert!(LSpaceKnotData::new(vec![]).is_err());
    }

    #[test]
    fn big_l_values() {
        let d = torus_alexander(3, 5).unwrap(); // ℓ = 1, 2, 1
        assert_eq!(d.big_l(1), 1);
        assert_eq!(d.big_l(3), 0);
        assert_eq!(d.big_l(0), 1);
        assert_eq!(d.big_l(-1), 1 + 1);
    }

    #[test]
    fn trefoil_staircase() {
        let s = staircase(&torus_alexander(2, 3).unwrap());
        assert_eq!(s.complex.len(), 3);
        let x0 = s.index(StairLabel::Center);
        assert_eq!(s.complex.d(x0).len(), 2);
        assert_eq!(s.points, vec![(-1, 0), (0, 0), (0, -1)]);
    }

    #[test]
    fn t35_points_and_picture_gradings() {
        let s = staircase(&torus_alexander(3, 5).unwrap());
        assert_eq!(s.points, vec![(-2, 2), (-1, 2), (-1, 0), (0, 0), (0, -1), (2, -1), (2, -2)]);
        let pic: Vec<i64> = s.picture_points().iter().map(|p| p.1).collect();
        assert_eq!(pic, vec![0, 1, 0, 1, 0, 1, 0]);
        assert!(s.complex.verify_d_squared());
    }

    #[test]
    fn model_gradings() {
        let c = cn_model(2).unwrap();
        assert_eq!(c.gen(2).grading(), (-3, -3));
        let d = cn_dual_model(2).unwrap();
        assert_eq!(d.gen(2).grading(), (3, 3));
    }
}
