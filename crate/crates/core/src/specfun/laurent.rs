//! Laurent coefficients by trapezoidal quadrature on a circle.

use crate::error::{Error, Result};
use crate::quad::ComplexSum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Agreement required between the n- and 2n-point rules.
pub const LAURENT_TOL: f64 = 1e-10;

const MAX_DOUBLINGS: usize = 6;

/// Coefficients of (s - s0)^k for k = -2..=1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaurentData {
    pub s0: Complex64,
    pub c_m2: Complex64,
    pub c_m1: Complex64,
    pub c_0: Complex64,
    pub c_1: Complex64,
    pub radius: f64,
}

impl LaurentData {
    pub fn res(&self) -> Complex64 {
        self.c_m1
    }

    pub fn ct(&self) -> Complex64 {
        self.c_0
    }

    pub fn ft(&self) -> Complex64 {
        self.c_1
    }
}

// Coefficients k = -3..=1 from n equally spaced samples.
fn coeffs<F>(f: &F, s0: Complex64, radius: f64, n: usize) -> Result<([Complex64; 5], f64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut acc = [ComplexSum::new(); 5];
    let mut scale: f64 = 0.0;
    for j in 0..n {
        let theta = 2.0 * PI * (j as f64 + 0.5) / n as f64;
        let w = Complex64::from_polar(radius, theta);
        let v = f(s0 + w)?;
        if !v.is_finite() {
            return Err(Error::NonConvergence(format!("non-finite sample at s = {}", s0 + w)));
        }
        scale = scale.max(v.norm());
        // c_k = mean of F(s0 + w) w^{-k}
        let winv = w.inv();
        let mut p = w * w * w;
        for a in acc.iter_mut() {
            a.add(v * p);
            p *= winv;
        }
    }
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for (o, a) in out.iter_mut().zip(acc.iter()) {
        *o = a.value() / n as f64;
    }
    Ok((out, scale))
}

/// Extracts (c₋₂, c₋₁, c₀, c₁) of F at s0 from samples on |s - s0| = radius.
pub fn laurent_extract<F>(f: F, s0: Complex64, radius: f64, n: usize) -> Result<LaurentData>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if n < 16 {
        return Err(Error::Domain(format!("laurent_extract needs n >= 16, got {n}")));
    }
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("laurent_extract needs radius > 0, got {radius}")));
    }
    let (mut prev, _) = coeffs(&f, s0, radius, n)?;
    let mut m = n;
    for _ in 0..MAX_DOUBLINGS {
        m *= 2;
        let (cur, scale) = coeffs(&f, s0, radius, m)?;
        let moved = prev
            .iter()
            .zip(cur.iter())
            .all(|(a, b)| (a - b).norm() <= LAURENT_TOL * b.norm().max(1.0));
        if moved {
            // c_-3 is pure rounding, of order eps·max|F|·r³, unless the pole is of order 3 or more.
            if cur[0].norm() > 1e-9 * scale * radius.powi(3) {
                return Err(Error::NonConvergence(format!(
                    "pole of order > 2 at s0 = {s0} (c_-3 = {})",
                    cur[0]
                )));
            }
            return Ok(LaurentData { s0, c_m2: cur[1], c_m1: cur[2], c_0: cur[3], c_1: cur[4], radius });
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "Laurent coefficients at s0 = {s0}, radius {radius} did not stabilise"
    )))
}

/// f'(s0) of a function holomorphic on the closed disc of the given radius.
pub fn contour_derivative<F>(f: F, s0: Complex64, radius: f64, n: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let d = laurent_extract(f, s0, radius, n)?;
    Ok(d.c_1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn simple_pole() {
        let s0 = Complex64::new(0.3, -0.2);
        let d = laurent_extract(|s| Ok((s - s0).inv()), s0, 0.5, 32).unwrap();
        assert!((d.c_m1 - 1.0).norm() < 1e-14);
        assert!(d.c_m2.norm() < 1e-14 && d.c_0.norm() < 1e-14 && d.c_1.norm() < 1e-14);
    }

    #[test]
    fn taylor_series_of_exp() {
        let s0 = c(1.0);
        let d = laurent_extract(|s| Ok((s - s0).exp()), s0, 0.5, 32).unwrap();
        assert!((d.c_0 - 1.0).norm() < 1e-14 && (d.c_1 - 1.0).norm() < 1e-14);
        assert!(d.c_m1.norm() < 1e-15 && d.c_m2.norm() < 1e-15);
    }

    #[test]
    fn triple_pole_is_rejected() {
        let r = laurent_extract(|s: Complex64| Ok(s.powi(-3)), c(0.0), 0.5, 32);
        assert!(matches!(r, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn crossing_a_singularity_is_rejected() {
        // pole at 0.45 sits on/near the circle, trapezoid cannot settle
        let r = laurent_extract(|s: Complex64| Ok((s - 0.4999).inv()), c(0.0), 0.5, 16);
        assert!(r.is_err());
    }
}
