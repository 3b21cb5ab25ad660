//! Upper half-plane geometry: SL2(Z) reduction, the truncated regions and
//! adaptive quadrature against dμ = dx dy / y².

mod cells;
mod region;

pub use cells::{integrate, integrate_with, QuadratureConfig, QuadratureResult};
pub use region::{region_contains, volume, Region, DEFAULT_C_MAX};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(y > 0.0, "HPoint needs y > 0");
        Self { x, y }
    }

    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }

    /// e^{πi/3}, the corner of the fundamental domain.
    pub fn rho() -> Self {
        Self { x: 0.5, y: 3f64.sqrt() / 2.0 }
    }
}

/// Integer 2×2 matrix [[a, b], [c, d]].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Mat2 = Mat2 { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Mat2 = Mat2 { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { a, b, c, d }
    }

    pub fn translation(n: i64) -> Self {
        Self { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Möbius action z ↦ (az + b)/(cz + d).
    pub fn apply(&self, z: HPoint) -> HPoint {
        let zc = z.to_complex();
        let w = (zc * self.a as f64 + self.b as f64) / (zc * self.c as f64 + self.d as f64);
        // Im(γz) = y / |cz + d|² is formed directly to keep full relative accuracy.
        let den = (self.c as f64 * z.x + self.d as f64).powi(2) + (self.c as f64 * z.y).powi(2);
        HPoint { x: w.re, y: z.y / den }
    }
}

/// Reduces z into the closed fundamental domain; returns (z*, γ) with γz = z*.
pub fn reduce(z: HPoint) -> (HPoint, Mat2) {
    let mut g = Mat2::IDENTITY;
    let mut w = z;
    for _ in 0..10_000 {
        if w.x.abs() > 0.5 {
            let n = w.x.round() as i64;
            let t = Mat2::translation(-n);
            w = HPoint { x: w.x - n as f64, y: w.y };
            g = t.mul(&g);
            continue;
        }
        let r = w.x * w.x + w.y * w.y;
        // The slack keeps boundary points such as ρ from bouncing under S.
        if r < 1.0 - 1e-14 {
            w = HPoint { x: -w.x / r, y: w.y / r };
            g = Mat2::S.mul(&g);
            continue;
        }
        break;
    }
    (w, g)
}
