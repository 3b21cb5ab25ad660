//! Riemann zeta via the alternating (eta) series with Borwein weights.

use super::gamma::gamma_c;
use super::laurent::contour_derivative;
use crate::error::{Error, Result};
use crate::quad::ComplexSum;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const BORWEIN_N: usize = 64;
const DERIV_RADIUS: f64 = 0.25;
const DERIV_SAMPLES: usize = 32;

// (d_k - d_n) / d_n with alternating sign folded in, k = 0..n-1.
fn borwein_weights() -> &'static [f64] {
    static W: OnceLock<Vec<f64>> = OnceLock::new();
    W.get_or_init(|| {
        let n = BORWEIN_N;
        let nf = n as f64;
        let mut d = Vec::with_capacity(n + 1);
        let mut term = 1.0;
        let mut acc = 1.0;
        d.push(acc);
        for i in 1..=n {
            let fi = i as f64;
            term *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi - 1.0) * (2.0 * fi));
            acc += term;
            d.push(acc);
        }
        let dn = d[n];
        (0..n)
            .map(|k| {
                let w = (dn - d[k]) / dn;
                if k % 2 == 0 {
                    w
                } else {
                    -w
                }
            })
            .collect()
    })
}

// η(s) = Σ (-1)^k (k+1)^{-s}, accelerated.
fn eta(s: Complex64) -> Complex64 {
    let w = borwein_weights();
    let mut acc = ComplexSum::new();
    for (k, wk) in w.iter().enumerate() {
        let ln = ((k + 1) as f64).ln();
        acc.add((-s * ln).exp() * *wk);
    }
    acc.value()
}

fn zeta_right(s: Complex64) -> Complex64 {
    // 1 - 2^{1-s} = -expm1((1-s) ln 2), written to stay accurate near s = 1.
    let z = (Complex64::new(1.0, 0.0) - s) * std::f64::consts::LN_2;
    let denom = -expm1_c(z);
    eta(s) / denom
}

fn expm1_c(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // short Taylor series
        let mut t = z;
        let mut s = z;
        for k in 2..8 {
            t *= z / k as f64;
            s += t;
        }
        s
    } else {
        z.exp() - 1.0
    }
}

/// ζ(s) for complex s ≠ 1.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { func: "zeta", at: "1".into() });
    }
    // Near s = 0 the reflection pairs a zero of sin with the pole at 1; the
    // accelerated series is accurate there.
    if s.re >= 0.5 || s.norm() < 0.25 {
        return Ok(zeta_right(s));
    }
    // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
    let one = Complex64::new(1.0, 0.0);
    let t = one - s;
    let f = Complex64::new(2.0, 0.0).powc(s) * Complex64::new(PI, 0.0).powc(s - 1.0) * (s * PI / 2.0).sin() * gamma_c(t);
    Ok(f * zeta_right(t))
}

/// ζ'(s) by Cauchy's formula on a circle of radius 1/4.
pub fn zeta_prime(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if s == one {
        return Err(Error::Pole { func: "zeta_prime", at: "1".into() });
    }
    if (s - one).norm() < 2.0 * DERIV_RADIUS {
        // (w-1)ζ(w) is entire; ζ' = (g'(s) - ζ(s)) / (s - 1).
        let g = |w: Complex64| -> Result<Complex64> {
            if (w - one).norm() < 1e-300 {
                Ok(one)
            } else {
                Ok((w - one) * zeta(w)?)
            }
        };
        let gp = contour_derivative(g, s, DERIV_RADIUS, DERIV_SAMPLES)?;
        return Ok((gp - zeta(s)?) / (s - one));
    }
    contour_derivative(zeta, s, DERIV_RADIUS, DERIV_SAMPLES)
}

/// ζ*(s) = π^{-s/2} Γ(s/2) ζ(s).
pub fn zeta_star(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(0.0, 0.0) || s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { func: "zeta_star", at: format!("{}", s.re) });
    }
    // At the trivial zeros Γ(s/2) has poles; evaluate the mirror point there.
    let k = (-s.re / 2.0).round();
    let near_trivial_zero = s.re < 0.0 && k >= 1.0 && (s + 2.0 * k).norm() < 1e-2;
    let s = if near_trivial_zero { Complex64::new(1.0, 0.0) - s } else { s };
    Ok(Complex64::new(PI, 0.0).powc(-s / 2.0) * gamma_c(s / 2.0) * zeta(s)?)
}

/// d/ds ζ*(s) by Cauchy's formula.
pub fn zeta_star_prime(s: Complex64) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    if s == zero || s == one {
        return Err(Error::Pole { func: "zeta_star_prime", at: format!("{}", s.re) });
    }
    let near0 = s.norm() < 2.0 * DERIV_RADIUS;
    let near1 = (s - one).norm() < 2.0 * DERIV_RADIUS;
    if near0 || near1 {
        // w(w-1)ζ*(w) is entire with value -1 at w = 0 and 1 at w = 1.
        let g = |w: Complex64| -> Result<Complex64> {
            if w.norm() < 1e-300 {
                Ok(-one)
            } else if (w - one).norm() < 1e-300 {
                Ok(one)
            } else {
                Ok(w * (w - one) * zeta_star(w)?)
            }
        };
        let gp = contour_derivative(g, s, DERIV_RADIUS, DERIV_SAMPLES)?;
        let p = s * (s - one);
        let dp = 2.0 * s - 1.0;
        return Ok((gp - dp * zeta_star(s)?) / p);
    }
    contour_derivative(zeta_star, s, DERIV_RADIUS, DERIV_SAMPLES)
}
