//! The non-holomorphic Eisenstein series E(z,s) = Σ_{Γ∞\SL2(Z)} Im(γz)^s,
//! its scattering term, the truncated integral over X^{mod,T̂} in closed form,
//! and constants built from its Laurent data.

use crate::error::{Error, Result};
use crate::hdomain::{reduce, HPoint};
use crate::quad::{ComplexSum, NeumaierSum};
use crate::specfun::{bessel_k_complex, contour_derivative, laurent_extract, zeta_prime, zeta_star, EULER_GAMMA};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EisensteinConfig {
    /// Largest Fourier mode the expansion may use.
    pub n_fourier: usize,
    /// Radius R of the disc |cz + d| ≤ R in the orbit sum.
    pub direct_sum_bound: u32,
}

impl Default for EisensteinConfig {
    fn default() -> Self {
        Self { n_fourier: 64, direct_sum_bound: 2000 }
    }
}

impl EisensteinConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_fourier < 1 || self.direct_sum_bound < 10 {
            return Err(Error::Domain(format!("invalid Eisenstein config {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EisensteinMode {
    Fourier,
    Direct,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// φ(s) = ζ*(2s − 1)/ζ*(2s).
pub fn phi_scattering(s: Complex64) -> Result<Complex64> {
    if s == c(1.0) || s == c(0.5) {
        return Err(Error::Pole { func: "phi_scattering", at: format!("{}", s.re) });
    }
    Ok(zeta_star(2.0 * s - 1.0)? / zeta_star(2.0 * s)?)
}

/// E(·, s) prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct EisensteinSeries {
    s: Complex64,
    phi: Complex64,
    nu: Complex64,
    /// 4 n^{s−1/2} σ_{1−2s}(n) / ζ*(2s), index n − 1
    coeffs: Vec<Complex64>,
}

impl EisensteinSeries {
    pub fn new(s: Complex64, cfg: &EisensteinConfig) -> Result<Self> {
        cfg.validate()?;
        let zs = zeta_star(2.0 * s)?;
        let phi = phi_scattering(s)?;
        let e = c(1.0) - 2.0 * s;
        let mut coeffs = Vec::with_capacity(cfg.n_fourier);
        for n in 1..=cfg.n_fourier {
            let mut sigma = ComplexSum::new();
            for d in 1..=n {
                if n % d == 0 {
                    sigma.add((e * (d as f64).ln()).exp());
                }
            }
            let pow = ((s - 0.5) * (n as f64).ln()).exp();
            coeffs.push(pow * sigma.value() * 4.0 / zs);
        }
        Ok(Self { s, phi, nu: s - 0.5, coeffs })
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    /// Constant Fourier term y^s + φ(s) y^{1−s}.
    pub fn constant_term(&self, y: f64) -> Complex64 {
        let ly = y.ln();
        (self.s * ly).exp() + self.phi * ((c(1.0) - self.s) * ly).exp()
    }

    /// E(z, s) from the Fourier expansion at the reduced point.
    pub fn eval(&self, z: HPoint) -> Result<Complex64> {
        let (w, _) = reduce(z);
        let (x, y) = (w.x, w.y);
        let mut acc = ComplexSum::new();
        acc.add(self.constant_term(y));
        let sy = y.sqrt();
        // past this argument K_ν decays monotonically with ratio ≤ e^{−2πy}
        let monotone = self.nu.norm_sqr() + self.nu.norm() + 1.0;
        for (i, a) in self.coeffs.iter().enumerate() {
            let n = (i + 1) as f64;
            let arg = 2.0 * PI * n * y;
            let k = bessel_k_complex(self.nu, arg)?;
            let term = *a * k * sy * (2.0 * PI * n * x).cos();
            acc.add(term);
            let size = (*a * k * sy).norm();
            if arg > monotone && size <= 1e-17 * acc.value().norm().max(1e-300) {
                return Ok(acc.value());
            }
        }
        Err(Error::NonConvergence(format!("Fourier series of E(z,{}) at y = {y} needs more than {} modes", self.s, self.coeffs.len())))
    }
}

/// E(z, s) by the Fourier expansion or by the orbit sum.
pub fn eisenstein_zagier(z: HPoint, s: Complex64, mode: EisensteinMode, cfg: &EisensteinConfig) -> Result<Complex64> {
    match mode {
        EisensteinMode::Fourier => EisensteinSeries::new(s, cfg)?.eval(z),
        EisensteinMode::Direct => eisenstein_direct(z, s, cfg),
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Σ over coprime (c,d) modulo ± with |cz+d| ≤ R of y^s/|cz+d|^{2s}, plus the
// mean-density tail (3/(πy)) y^s R^{2−2s}/(s − 1) for the rest.
fn eisenstein_direct(z: HPoint, s: Complex64, cfg: &EisensteinConfig) -> Result<Complex64> {
    cfg.validate()?;
    if s.re <= 1.0 {
        return Err(Error::NonConvergence(format!("orbit sum diverges for Re s = {} <= 1", s.re)));
    }
    let (x, y) = (z.x, z.y);
    let r = cfg.direct_sum_bound as f64;
    let r2 = r * r;
    let real = s.im == 0.0;
    let mut acc_re = NeumaierSum::new();
    let mut acc = ComplexSum::new();
    let cmax = (r / y).floor() as i64;
    for cc in (1..=cmax).rev() {
        let cf = cc as f64;
        let room = r2 - cf * cf * y * y;
        if room < 0.0 {
            continue;
        }
        let w = room.sqrt();
        let lo = (-cf * x - w).ceil() as i64;
        let hi = (-cf * x + w).floor() as i64;
        for d in lo..=hi {
            if gcd(cc, d) != 1 {
                continue;
            }
            let n2 = (cf * x + d as f64).powi(2) + cf * cf * y * y;
            if real {
                acc_re.add(n2.powf(-s.re));
            } else {
                acc.add((-s * n2.ln()).exp());
            }
        }
    }
    let inner = if real { c(acc_re.value()) } else { acc.value() };
    let ys = (s * y.ln()).exp();
    let tail = ys / y * 3.0 / PI * ((c(2.0) - 2.0 * s) * r.ln()).exp() / (s - 1.0);
    Ok(ys + ys * inner + tail)
}

/// ∫_{X^{mod,T̂}} E(z,s) dμ = T̂^{s−1}/(s−1) − φ(s) T̂^{−s}/s.
pub fn truncated_rs_closed(s: Complex64, t_hat: f64) -> Result<Complex64> {
    if s == c(0.0) || s == c(1.0) {
        return Err(Error::Pole { func: "truncated_rs_closed", at: format!("{}", s.re) });
    }
    if !(t_hat >= 1.0) {
        return Err(Error::Domain(format!("T̂ must be >= 1, got {t_hat}")));
    }
    let lt = t_hat.ln();
    Ok(((s - 1.0) * lt).exp() / (s - 1.0) - phi_scattering(s)? * (-s * lt).exp() / s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CtKind {
    /// CT_{s=0} of the closed form.
    CtS0,
    /// CT_{s=1} of the closed form.
    CtS1,
    /// CT_{s=0} of the s-derivative of the closed form.
    CtS0Log,
}

pub const CT_RADIUS: f64 = 0.25;
pub const CT_SAMPLES: usize = 32;
/// Radius of the inner circle used to differentiate in s.
pub const DERIV_RADIUS: f64 = 0.1;

/// Laurent data of the closed form (or its derivative) at the point for `kind`.
pub fn ct_powerint_laurent(kind: CtKind, t_hat: f64) -> Result<crate::specfun::LaurentData> {
    let closed = move |s: Complex64| truncated_rs_closed(s, t_hat);
    match kind {
        CtKind::CtS0 => laurent_extract(closed, c(0.0), CT_RADIUS, CT_SAMPLES),
        CtKind::CtS1 => laurent_extract(closed, c(1.0), CT_RADIUS, CT_SAMPLES),
        CtKind::CtS0Log => {
            let deriv = move |s: Complex64| contour_derivative(closed, s, DERIV_RADIUS, CT_SAMPLES);
            laurent_extract(deriv, c(0.0), CT_RADIUS, CT_SAMPLES)
        }
    }
}

pub fn ct_powerint(kind: CtKind, t_hat: f64) -> Result<f64> {
    Ok(ct_powerint_laurent(kind, t_hat)?.c_0.re)
}

/// The printed closed forms, kept only for comparison in reports.
pub mod printed {
    use super::*;
    use crate::specfun::zeta_star_prime;

    pub fn ct_s0(t_hat: f64) -> f64 {
        PI / 3.0 - 1.0 / t_hat
    }

    pub fn ct_s1(t_hat: f64) -> Result<f64> {
        let zs2 = PI / 6.0;
        let zsp2 = zeta_star_prime(c(2.0))?.re;
        let lt = t_hat.ln();
        Ok(3.0 / PI * (EULER_GAMMA + (PI / 4.0).ln() + zsp2 / zs2) / t_hat - (lt + 1.0) / (t_hat * 2.0 * zs2) + lt)
    }

    /// The bracket of the log-weighted constant term without the T̂ pieces.
    pub fn ct_s0_log_constant() -> Result<f64> {
        let zp = zeta_prime(c(-1.0))?.re;
        let zsp = zeta_star_prime(c(-1.0))?.re;
        let l2p = (2.0 * PI).ln();
        Ok(EULER_GAMMA + 1.5 * zsp + zp * (PI.ln() + 2.0 * EULER_GAMMA - 2.0 * l2p * (3.0 * l2p + 2f64.ln())))
    }

    pub fn ct_s0_log(t_hat: f64) -> Result<f64> {
        let lt = t_hat.ln();
        let zp = zeta_prime(c(-1.0))?.re;
        Ok(-(lt + 1.0) / t_hat + ct_s0_log_constant()? - 2.0 * zp * lt)
    }
}

/// 3(−12ζ'(2) + 2γπ² + π²(−γ − log 8))/π³.
pub fn weight32_a0_constant() -> Result<f64> {
    let zp2 = zeta_prime(c(2.0))?.re;
    let g = EULER_GAMMA;
    let p2 = PI * PI;
    Ok(3.0 * (-12.0 * zp2 + 2.0 * g * p2 + p2 * (-g - 8f64.ln())) / (p2 * PI))
}

/// A₀(v) = v + v^{1/2}·(the constant above).
pub fn weight32_a0(v: f64) -> Result<f64> {
    Ok(v + v.sqrt() * weight32_a0_constant()?)
}

/// Laurent data of s ↦ E(z, s) at s0 via the Fourier expansion.
pub fn eisenstein_laurent(z: HPoint, s0: Complex64, radius: f64, cfg: &EisensteinConfig) -> Result<crate::specfun::LaurentData> {
    laurent_extract(|s| EisensteinSeries::new(s, cfg)?.eval(z), s0, radius, CT_SAMPLES)
}
