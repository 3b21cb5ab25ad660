//! The rational quadratic space of signature (2,1) on trace-zero matrices,
//! its lattice L' = Z ⊕ ½Z ⊕ Z, the SL2(Z) action and the majorant at z.
//!
//! Coordinates λ = (λ1, λ2, λ3) ↔ M(λ) = [[λ2, λ1], [λ3, −λ2]], q = −det M.

use crate::error::{Error, Result};
use crate::hdomain::{HPoint, Mat2};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CosetId {
    #[serde(rename = "mu0")]
    Mu0,
    #[serde(rename = "mu1")]
    Mu1,
}

impl CosetId {
    pub const ALL: [CosetId; 2] = [CosetId::Mu0, CosetId::Mu1];

    pub fn name(self) -> &'static str {
        match self {
            CosetId::Mu0 => "mu0",
            CosetId::Mu1 => "mu1",
        }
    }

    fn parity(self) -> i64 {
        match self {
            CosetId::Mu0 => 0,
            CosetId::Mu1 => 1,
        }
    }
}

impl fmt::Display for CosetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Normalisation of the negative-line projection.
///
/// `One` gives q(λ_{z⊥}) = −D²/(4y²), the projection onto the line spanned by
/// M(z); `Four` scales it by 4 so that q((t,0,0)_z) = t²/y².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kappa {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "4")]
    Four,
}

impl Kappa {
    pub const BOTH: [Kappa; 2] = [Kappa::One, Kappa::Four];

    pub fn value(self) -> f64 {
        match self {
            Kappa::One => 1.0,
            Kappa::Four => 4.0,
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// λ ∈ L'. λ2 is stored doubled so all arithmetic stays in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector {
    pub l1: i64,
    /// 2·λ2
    pub m: i64,
    pub l3: i64,
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { l1: 0, m: 0, l3: 0 };

    pub fn new(l1: i64, l2: Rational64, l3: i64) -> Result<Self> {
        let twice = l2 * 2;
        if !twice.is_integer() {
            return Err(Error::Domain(format!("λ2 = {l2} is not in ½Z")));
        }
        Ok(Self { l1, m: twice.to_integer(), l3 })
    }

    /// From (λ1, 2λ2, λ3).
    pub const fn from_doubled(l1: i64, m: i64, l3: i64) -> Self {
        Self { l1, m, l3 }
    }

    pub fn l2(&self) -> Rational64 {
        Rational64::new(self.m, 2)
    }

    pub fn coset(&self) -> CosetId {
        if self.m.rem_euclid(2) == 0 {
            CosetId::Mu0
        } else {
            CosetId::Mu1
        }
    }

    pub fn neg(&self) -> Self {
        Self { l1: -self.l1, m: -self.m, l3: -self.l3 }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// 4·q(λ) as an integer.
    pub fn q4(&self) -> i64 {
        self.m * self.m + 4 * self.l1 * self.l3
    }

    pub fn as_f64(&self) -> [f64; 3] {
        [self.l1 as f64, 0.5 * self.m as f64, self.l3 as f64]
    }
}

/// q(λ) = λ2² + λ1λ3.
pub fn q_form(l: &LatticeVector) -> Rational64 {
    Rational64::new(l.q4(), 4)
}

/// (λ, μ) = 2λ2μ2 + λ1μ3 + λ3μ1.
pub fn bilinear(a: &LatticeVector, b: &LatticeVector) -> Rational64 {
    Rational64::new(a.m * b.m, 2) + Rational64::from_integer(a.l1 * b.l3 + a.l3 * b.l1)
}

/// Conjugation g·M(λ)·g⁻¹.
pub fn act(g: &Mat2, l: &LatticeVector) -> Result<LatticeVector> {
    if g.det() != 1 {
        return Err(Error::Domain(format!("act needs det 1, got {}", g.det())));
    }
    let (a, b, c, d) = (g.a, g.b, g.c, g.d);
    // entries of g M g⁻¹ with λ2 = m/2, written for m directly
    let m = (a * d + b * c) * l.m + 2 * b * d * l.l3 - 2 * a * c * l.l1;
    let l1 = a * a * l.l1 - a * b * l.m - b * b * l.l3;
    let l3 = d * d * l.l3 + c * d * l.m - c * c * l.l1;
    Ok(LatticeVector { l1, m, l3 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorantSplit {
    pub q_total: Rational64,
    /// q(λ_z) ≥ 0
    pub q_pos: f64,
    /// q(λ_{z⊥}) ≤ 0
    pub q_neg: f64,
    pub kappa: Kappa,
}

impl MajorantSplit {
    /// (λ,λ)_z = 2q_pos − 2q_neg.
    pub fn majorant(&self) -> f64 {
        2.0 * (self.q_pos - self.q_neg)
    }
}

/// D(λ, z) = λ1 + 2λ2x − λ3(x² + y²), so that (λ, M(z)) = −D/y.
pub fn pairing_d(l: &LatticeVector, z: HPoint) -> f64 {
    l.l1 as f64 + l.m as f64 * z.x - l.l3 as f64 * (z.x * z.x + z.y * z.y)
}

pub fn majorant_split(l: &LatticeVector, z: HPoint, kappa: Kappa) -> MajorantSplit {
    let d = pairing_d(l, z);
    let q_neg = -kappa.value() * d * d / (4.0 * z.y * z.y);
    let q_total = q_form(l);
    let q = l.q4() as f64 / 4.0;
    MajorantSplit { q_total, q_pos: q - q_neg, q_neg, kappa }
}

/// Gram matrix of (λ,λ)_z in the integer coordinates (λ1, 2λ2, λ3).
pub fn majorant_gram(z: HPoint, kappa: Kappa) -> [[f64; 3]; 3] {
    let k = kappa.value() / (z.y * z.y);
    let a = [1.0, z.x, -(z.x * z.x + z.y * z.y)];
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = k * a[i] * a[j];
        }
    }
    // 2q = m²/2 + 2λ1λ3
    g[1][1] += 0.5;
    g[0][2] += 1.0;
    g[2][0] += 1.0;
    g
}

/// Smallest eigenvalue of a symmetric 3×3 matrix (trigonometric solution).
pub fn min_eigenvalue(a: &[[f64; 3]; 3]) -> f64 {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let tr = a[0][0] + a[1][1] + a[2][2];
    if p1 == 0.0 {
        return a[0][0].min(a[1][1]).min(a[2][2]);
    }
    let q = tr / 3.0;
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos()
}

/// Default cap on the number of enumerated vectors.
pub const DEFAULT_ENUM_LIMIT: usize = 2_000_000;

/// All λ in the coset with (λ,λ)_z ≤ bound, ordered lexicographically by (λ3, 2λ2, λ1).
pub fn lattice_enum(coset: CosetId, z: HPoint, bound: f64, kappa: Kappa) -> Result<Vec<LatticeVector>> {
    lattice_enum_limited(coset, z, bound, kappa, DEFAULT_ENUM_LIMIT)
}

pub fn lattice_enum_limited(coset: CosetId, z: HPoint, bound: f64, kappa: Kappa, limit: usize) -> Result<Vec<LatticeVector>> {
    if !(bound > 0.0) || !bound.is_finite() {
        return Err(Error::Domain(format!("enumeration bound must be positive, got {bound}")));
    }
    let g = majorant_gram(z, kappa);
    // f(n) = Σ_i d_i (n_i + Σ_{j>i} u_ij n_j)²
    let mut d = [0.0; 3];
    let mut u = [[0.0; 3]; 3];
    for i in 0..3 {
        d[i] = g[i][i] - (0..i).map(|k| d[k] * u[k][i] * u[k][i]).sum::<f64>();
        if !(d[i] > 0.0) {
            return Err(Error::IllConditioned(format!("majorant not positive definite at {z:?}")));
        }
        for j in i + 1..3 {
            u[i][j] = (g[i][j] - (0..i).map(|k| d[k] * u[k][i] * u[k][j]).sum::<f64>()) / d[i];
        }
    }
    let slack = 1e-9 * bound.max(1.0);
    let exact = |l: &LatticeVector| majorant_split(l, z, kappa).majorant();
    let mut out = Vec::new();
    let r2 = ((bound + slack) / d[2]).sqrt();
    for n2 in (-r2.floor() as i64)..=(r2.floor() as i64) {
        let rem2 = bound + slack - d[2] * (n2 * n2) as f64;
        if rem2 < 0.0 {
            continue;
        }
        let c1 = -u[1][2] * n2 as f64;
        let r1 = (rem2 / d[1]).sqrt();
        let mut n1 = (c1 - r1).ceil() as i64;
        if n1.rem_euclid(2) != coset.parity() {
            n1 += 1;
        }
        while (n1 as f64) <= c1 + r1 {
            let t1 = n1 as f64 - c1;
            let rem1 = rem2 - d[1] * t1 * t1;
            if rem1 >= 0.0 {
                let c0 = -(u[0][1] * n1 as f64 + u[0][2] * n2 as f64);
                let r0 = (rem1 / d[0]).sqrt();
                for n0 in ((c0 - r0).ceil() as i64)..=((c0 + r0).floor() as i64) {
                    let l = LatticeVector { l1: n0, m: n1, l3: n2 };
                    if exact(&l) <= bound {
                        out.push(l);
                        if out.len() > limit {
                            return Err(Error::Budget { what: "lattice enumeration", limit });
                        }
                    }
                }
            }
            n1 += 2;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_examples() {
        assert_eq!(q_form(&LatticeVector::from_doubled(7, 0, 0)), Rational64::from_integer(0));
        assert_eq!(q_form(&LatticeVector::from_doubled(0, 2, 0)), Rational64::from_integer(1));
        assert_eq!(q_form(&LatticeVector::from_doubled(0, 1, 0)), Rational64::new(1, 4));
        assert!(LatticeVector::new(0, Rational64::new(1, 3), 0).is_err());
    }

    #[test]
    fn act_matches_matrix_conjugation() {
        let g = Mat2::new(2, 3, 1, 2);
        let l = LatticeVector::from_doubled(3, -5, 7);
        let r = act(&g, &l).unwrap();
        // M(λ) with doubled entries to stay integral
        let m = [[l.m, 2 * l.l1], [2 * l.l3, -l.m]];
        let gi = g.inverse();
        let mul = |x: [[i64; 2]; 2], y: [[i64; 2]; 2]| {
            [
                [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
                [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
            ]
        };
        let gm = [[g.a, g.b], [g.c, g.d]];
        let gim = [[gi.a, gi.b], [gi.c, gi.d]];
        let c = mul(mul(gm, m), gim);
        assert_eq!(c, [[r.m, 2 * r.l1], [2 * r.l3, -r.m]]);
    }

    #[test]
    fn majorant_anchor_values() {
        let z = HPoint::new(0.3, 1.7);
        let s = majorant_split(&LatticeVector::from_doubled(5, 0, 0), z, Kappa::Four);
        assert!((s.q_pos - 25.0 / (1.7 * 1.7)).abs() < 1e-13);
        let s = majorant_split(&LatticeVector::from_doubled(3, 4, 0), HPoint::i(), Kappa::One);
        assert!((s.majorant() - (9.0 + 2.0 * 4.0)).abs() < 1e-13);
    }

    #[test]
    fn enumeration_small_bound() {
        let v = lattice_enum(CosetId::Mu0, HPoint::i(), 0.5, Kappa::One).unwrap();
        assert_eq!(v, vec![LatticeVector::ZERO]);
        assert!(lattice_enum(CosetId::Mu1, HPoint::i(), 0.1, Kappa::One).unwrap().is_empty());
    }

    #[test]
    fn min_eigenvalue_diagonal_and_rotated() {
        assert_eq!(min_eigenvalue(&[[3.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]]), 1.0);
        let a = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]];
        assert!((min_eigenvalue(&a) - 1.0).abs() < 1e-14);
    }
}
