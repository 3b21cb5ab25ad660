//! Modified Bessel function of the second kind from
//! K_ν(x) = ∫_0^∞ e^{-x cosh t} cosh(νt) dt, trapezoidal rule with step halving.

use crate::error::{Error, Result};
use crate::quad::{ComplexSum, NeumaierSum};
use num_complex::Complex64;

const REL_TOL: f64 = 1e-15;

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_k needs x > 0, got {x}")));
    }
    Ok(())
}

// Upper cut so that the integrand is below 1e-18 of its peak.
fn cutoff(nu_re: f64, x: f64) -> f64 {
    let a = nu_re.abs();
    let log_f = |t: f64| -x * t.cosh() + a * t;
    let t_peak = (a / x).asinh();
    let peak = log_f(t_peak);
    let mut t = t_peak + 0.5;
    while log_f(t) > peak - 43.0 {
        t += 0.5 + 0.5 * t;
    }
    t
}

fn initial_step(x: f64) -> f64 {
    // Width of the peak shrinks like x^{-1/2} for large x.
    0.5f64.min(1.0 / x.sqrt())
}

// K_{n+1/2}(x) = √(π/2x) e^{-x} Σ_{k=0}^{n} (n+k)! / (k! (n-k)! (2x)^k)
fn half_integer(n: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut s = 1.0;
    for k in 1..=n {
        let k = k as f64;
        let n = n as f64;
        term *= (n + k) * (n - k + 1.0) / (k * 2.0 * x);
        s += term;
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * s
}

/// K_ν(x) for real order.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    let twice = 2.0 * nu.abs();
    if twice.fract() == 0.0 && (twice as u64) % 2 == 1 && twice < 60.0 {
        return Ok(half_integer(((twice as u32) - 1) / 2, x));
    }
    integral_real(nu, x)
}

fn integral_real(nu: f64, x: f64) -> Result<f64> {
    let tmax = cutoff(nu, x);
    let f = |t: f64| (-x * t.cosh()).exp() * (nu * t).cosh();
    let mut h = initial_step(x);
    let mut sum = {
        let mut s = NeumaierSum::new();
        s.add(0.5 * f(0.0));
        let mut k = 1;
        while (k as f64) * h <= tmax {
            s.add(f(k as f64 * h));
            k += 1;
        }
        s
    };
    let mut value = h * sum.value();
    for _ in 0..30 {
        // Adding the odd midpoints halves the step.
        let mut k = 0;
        loop {
            let t = (2 * k + 1) as f64 * h * 0.5;
            if t > tmax {
                break;
            }
            sum.add(f(t));
            k += 1;
        }
        h *= 0.5;
        let next = h * sum.value();
        let done = (next - value).abs() <= REL_TOL * next.abs();
        value = next;
        if done {
            return Ok(value);
        }
    }
    Err(Error::NonConvergence(format!("bessel_k({nu}, {x})")))
}

/// K_ν(x) for complex order and real x > 0.
pub fn bessel_k_complex(nu: Complex64, x: f64) -> Result<Complex64> {
    check_x(x)?;
    if nu.im == 0.0 {
        return bessel_k(nu.re, x).map(|v| Complex64::new(v, 0.0));
    }
    let tmax = cutoff(nu.re, x);
    let f = |t: f64| (nu * t).cosh() * (-x * t.cosh()).exp();
    let mut h = initial_step(x).min(0.5 / (1.0 + nu.im.abs()).sqrt());
    let mut sum = ComplexSum::new();
    sum.add(f(0.0) * 0.5);
    let mut k = 1;
    while (k as f64) * h <= tmax {
        sum.add(f(k as f64 * h));
        k += 1;
    }
    let mut value = sum.value() * h;
    for _ in 0..30 {
        let mut k = 0;
        loop {
            let t = (2 * k + 1) as f64 * h * 0.5;
            if t > tmax {
                break;
            }
            sum.add(f(t));
            k += 1;
        }
        h *= 0.5;
        let next = sum.value() * h;
        let done = (next - value).norm() <= REL_TOL * next.norm();
        value = next;
        if done {
            return Ok(value);
        }
    }
    Err(Error::NonConvergence(format!("bessel_k_complex({nu}, {x})")))
}
