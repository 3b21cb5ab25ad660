//! Jacobi and Siegel theta series for the lattice L', the splitting of
//! ϑ = v·θ by the sign of q(λ), and the Div/Conv decomposition.

use crate::error::{Error, Result};
use crate::hdomain::{reduce, HPoint};
use crate::qspace::{lattice_enum, majorant_gram, majorant_split, min_eigenvalue, CosetId, Kappa, LatticeVector};
use crate::quad::{self, ComplexSum, GaussRule};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_10, PI};

/// Terms below this magnitude are dropped from every series.
const TERM_CUTOFF_DIGITS: f64 = 18.0;

/// θ^{Jac}_μ(τ) = Σ_{n ∈ μ + Z} e^{2πin²τ}, with μ0 = Z and μ1 = ½ + Z.
pub fn jacobi_theta(tau: HPoint, coset: CosetId) -> Complex64 {
    let v = tau.y;
    let nmax = ((TERM_CUTOFF_DIGITS * LN_10) / (2.0 * PI * v)).sqrt().ceil() as i64 + 1;
    let term = |n: f64| Complex64::from_polar((-2.0 * PI * n * n * v).exp(), 2.0 * PI * n * n * tau.x);
    let mut acc = ComplexSum::new();
    match coset {
        CosetId::Mu0 => {
            // largest terms last for the compensated sum to see them with their tails
            for n in (1..=nmax).rev() {
                acc.add(term(n as f64) * 2.0);
            }
            acc.add(Complex64::new(1.0, 0.0));
        }
        CosetId::Mu1 => {
            for k in (0..=nmax).rev() {
                acc.add(term(k as f64 + 0.5) * 2.0);
            }
        }
    }
    acc.value()
}

/// A lattice sum together with what was enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaSum {
    pub value: Complex64,
    /// Bound on the discarded terms.
    pub tail_bound: f64,
    pub terms: usize,
}

/// Majorant level beyond which e^{−πv(λ,λ)_z} < 10^{−18}.
pub fn truncation_bound(v: f64) -> f64 {
    TERM_CUTOFF_DIGITS * LN_10 / (PI * v)
}

// Σ_{f(n) > B} e^{−πv f(n)} ≤ Σ_k e^{−πv(B+k)} N(B+k+1), with the lattice-point
// count N(t) ≤ (2√(t/λ_min) + 1)³ in the integer coordinates.
fn gaussian_tail(v: f64, bound: f64, lambda_min: f64) -> f64 {
    let mut s = 0.0;
    for k in 0..10_000 {
        let t = bound + k as f64;
        let n = (2.0 * ((t + 1.0) / lambda_min).sqrt() + 1.0).powi(3);
        let term = (-PI * v * t).exp() * n;
        s += term;
        if term < 1e-30 * s.max(1e-300) || term == 0.0 {
            break;
        }
    }
    s
}

/// Generic truncated sum Σ_{λ ∈ coset, keep(λ)} e^{2πiq(λ)u} e^{−2πv(q_pos − q_neg)}.
pub fn siegel_sum<K>(tau: HPoint, z: HPoint, coset: CosetId, kappa: Kappa, keep: K) -> Result<ThetaSum>
where
    K: Fn(&LatticeVector) -> bool,
{
    if !(tau.y > 0.0) || !(z.y > 0.0) {
        return Err(Error::Domain("theta needs points in the upper half-plane".into()));
    }
    // λ ↦ γλ permutes each coset, so the sum can be taken at the reduced point.
    let (zr, _) = reduce(z);
    let bound = truncation_bound(tau.y);
    let vecs = lattice_enum(coset, zr, bound, kappa)?;
    let mut acc = ComplexSum::new();
    let mut terms = 0;
    for l in vecs.iter().rev() {
        if !keep(l) {
            continue;
        }
        let s = majorant_split(l, zr, kappa);
        let q = l.q4() as f64 / 4.0;
        // phase e^{2πiqu} with q reduced mod 1 first for accuracy at large u
        let phase = 2.0 * PI * (q * tau.x).rem_euclid(1.0);
        acc.add(Complex64::from_polar((-2.0 * PI * tau.y * (s.q_pos - s.q_neg)).exp(), phase));
        terms += 1;
    }
    let lmin = min_eigenvalue(&majorant_gram(zr, kappa));
    Ok(ThetaSum { value: acc.value(), tail_bound: gaussian_tail(tau.y, bound, lmin), terms })
}

/// θ^{Sieg}_μ(τ, z).
pub fn siegel_theta(tau: HPoint, z: HPoint, coset: CosetId, kappa: Kappa) -> Result<Complex64> {
    Ok(siegel_sum(tau, z, coset, kappa, |_| true)?.value)
}

/// ϑ(τ, z, μ) = v·θ^{Sieg}_μ(τ, z).
pub fn vartheta(tau: HPoint, z: HPoint, coset: CosetId, kappa: Kappa) -> Result<Complex64> {
    Ok(siegel_theta(tau, z, coset, kappa)? * tau.y)
}

/// ϑ split by λ = 0, isotropic λ ≠ 0, q > 0 and q < 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaComponents {
    pub c00: Complex64,
    pub c0: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl ThetaComponents {
    pub fn total(&self) -> Complex64 {
        self.c00 + self.c0 + self.c1 + self.c2
    }
}

pub fn theta_components(tau: HPoint, z: HPoint, coset: CosetId, kappa: Kappa) -> Result<ThetaComponents> {
    let v = tau.y;
    let c00 = if coset == CosetId::Mu0 { Complex64::new(v, 0.0) } else { Complex64::new(0.0, 0.0) };
    let c0 = siegel_sum(tau, z, coset, kappa, |l| !l.is_zero() && l.q4() == 0)?.value * v;
    let c1 = siegel_sum(tau, z, coset, kappa, |l| l.q4() > 0)?.value * v;
    let c2 = siegel_sum(tau, z, coset, kappa, |l| l.q4() < 0)?.value * v;
    Ok(ThetaComponents { c00, c0, c1, c2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivMode {
    Closed,
    Integral,
}

/// Div(τ, z, μ) = y·Div(τ, i, μ) = y·v^{1/2}·θ^{Jac}_μ(τ).
pub fn div_part(tau: HPoint, z: HPoint, coset: CosetId, mode: DivMode) -> Result<Complex64> {
    let at_i = match mode {
        DivMode::Closed => jacobi_theta(tau, coset) * tau.y.sqrt(),
        DivMode::Integral => div_at_i_integral(tau, coset)?,
    };
    Ok(at_i * z.y)
}

// Σ_{x₀ ∈ μ + Z} v ∫_R e^{−π(v x_R² + 2v x₀²) + 2πiu x₀²} dx_R, each x_R-integral by quadrature.
fn div_at_i_integral(tau: HPoint, coset: CosetId) -> Result<Complex64> {
    let (u, v) = (tau.x, tau.y);
    let offset = match coset {
        CosetId::Mu0 => 0.0,
        CosetId::Mu1 => 0.5,
    };
    let kmax = ((TERM_CUTOFF_DIGITS * LN_10) / (2.0 * PI * v)).sqrt().ceil() as i64 + 1;
    // |x_R| beyond L contributes below 1e-18 relative
    let half_width = ((TERM_CUTOFF_DIGITS * LN_10 + 5.0) / (PI * v)).sqrt();
    let mut acc = ComplexSum::new();
    for k in (-kmax - 1..=kmax).rev() {
        let x0 = k as f64 + offset;
        let f = |xr: f64| {
            Complex64::from_polar((-PI * (v * xr * xr + 2.0 * v * x0 * x0)).exp(), 2.0 * PI * u * x0 * x0)
        };
        let (val, err) = quad::adaptive_c(&f, -half_width, half_width, 1e-20, 1e-14);
        if !(err <= 1e-12 * val.norm().max(1e-300)) && err > 1e-20 {
            return Err(Error::NonConvergence(format!("Div integral at x0 = {x0}: error {err:e}")));
        }
        acc.add(val * v);
    }
    Ok(acc.value())
}

/// Conv = ϑ − Div (closed form of Div).
pub fn conv_part(tau: HPoint, z: HPoint, coset: CosetId, kappa: Kappa) -> Result<Complex64> {
    Ok(vartheta(tau, z, coset, kappa)? - div_part(tau, z, coset, DivMode::Closed)?)
}

/// ∫_{−1/2}^{1/2} F(u + iv) du by Gauss–Legendre with doubling.
pub fn constant_u_term<F>(f: F, v: f64) -> Result<Complex64>
where
    F: Fn(HPoint) -> Result<Complex64>,
{
    let at = |u: f64| f(HPoint { x: u, y: v });
    let left = at(-0.5)?;
    let right = at(0.5)?;
    let gap = (left - right).norm();
    if gap > 1e-9 * left.norm().max(1.0) {
        return Err(Error::NonPeriodic(gap));
    }
    let mut n = 16;
    let mut prev: Option<Complex64> = None;
    while n <= 1024 {
        let g = GaussRule::legendre(n);
        let mut acc = ComplexSum::new();
        for (x, w) in g.nodes.iter().zip(&g.weights) {
            acc.add(at(0.5 * x)? * (0.5 * w));
        }
        let cur = acc.value();
        if let Some(p) = prev {
            if (cur - p).norm() <= 1e-11 * cur.norm().max(1.0) {
                return Ok(cur);
            }
        }
        prev = Some(cur);
        n *= 2;
    }
    Err(Error::NonConvergence("constant u-term did not stabilise".into()))
}
