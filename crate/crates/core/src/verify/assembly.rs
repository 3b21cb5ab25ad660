use super::div::k184;
use super::{quad, AVariant, ConfigSnapshot, Provenance, Tagged, VerificationReport, VerifyOptions};
use crate::borcherds::{borcherds_product_log, delta_log, WeaklyHolomorphicInput, GAMMA_PRIME_ONE};
use crate::eisenstein::{printed, weight32_a0};
use crate::error::{Error, Result};
use crate::hdomain::{HPoint, Region};
use crate::qspace::CosetId;
use crate::specfun::{erf, gamma, zeta_prime, zeta_star, zeta_star_prime, EULER_GAMMA};
use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// What the ordinary-case assembly needs besides T̂.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinaryCaseInputs {
    pub f: WeaklyHolomorphicInput,
    /// b_μ(m) for every m > 0 in the principal part of f.
    pub b_values: BTreeMap<(CosetId, Rational64), f64>,
    pub a_variant: AVariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremTerm {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainTheoremBreakdown {
    pub t_hat: f64,
    pub c00: f64,
    pub terms: Vec<TheoremTerm>,
    pub total: f64,
    /// Coefficient of log T̂ in the assembled expansion.
    pub log_t_hat_coefficient: f64,
    /// Coefficients of log T from the fundamental-domain integral and from
    /// the Eisenstein constant term; they cancel.
    pub log_t_coefficients: [f64; 2],
    pub kappa_mu0_zero: f64,
}

/// κ_{μ0}(0) with the constant assembled from A, erf(√(π/2)), the
/// log-weighted constant term and K.
fn kappa_mu0_zero(a: f64) -> Result<f64> {
    let e = erf((PI / 2.0).sqrt());
    let cst = a / 2.0 - 12.0 / PI * e * printed::ct_s0_log_constant()? + 6.0 / PI * k184();
    Ok(cst + weight32_a0(1.0)? - (GAMMA_PRIME_ONE / 2.0 + 1.0 + (2.0 * PI).sqrt().ln()))
}

/// CT_{s=1} of φ(s) as assembled from Γ(1/2), Γ'(1/2) and ζ*.
fn ct_phi_printed() -> Result<f64> {
    let zs2 = zeta_star(c(2.0))?.re;
    let zsp2 = zeta_star_prime(c(2.0))?.re;
    let g = gamma(0.5);
    let gp = g * (-EULER_GAMMA - 2.0 * 2f64.ln());
    Ok(PI.powf(-0.5) / zs2 * (EULER_GAMMA * g + 0.5 * (PI.ln() * g + gp) + zsp2 * g / (2.0 * zs2)))
}

/// The ordinary-case expansion of ∫_{X^{mod,T̂}} log‖Ψ(z, f)‖ dμ up to
/// O(e^{−T̂}) terms.
pub fn assemble_main_theorem(inputs: &OrdinaryCaseInputs, t_hat: f64) -> Result<MainTheoremBreakdown> {
    if !(t_hat >= 1.0) {
        return Err(Error::Domain(format!("T̂ must be >= 1, got {t_hat}")));
    }
    inputs.f.validate()?;
    let vol = PI / 3.0;
    let c00 = inputs.f.c00();
    let a = inputs.a_variant.value();
    let e = erf((PI / 2.0).sqrt());
    let k0 = kappa_mu0_zero(a)?;
    let mut b_block = 0.0;
    for (coset, m, coeff) in inputs.f.principal_part() {
        let b = inputs
            .b_values
            .get(&(coset, m))
            .ok_or_else(|| Error::MissingInput(format!("b-value for {} at m = {m}", coset.name())))?;
        b_block += coeff.re * b;
    }
    let lt = t_hat.ln();
    let zp = zeta_prime(c(-1.0))?.re;
    let zs2 = zeta_star(c(2.0))?.re;
    let log_coeff = -c00 * (4.0 * zp * e + 0.25);
    let terms = vec![
        TheoremTerm { label: "constant_term_block".into(), value: -(vol / 2.0) * c00 * k0 },
        TheoremTerm { label: "principal_part_block".into(), value: -(vol / 2.0) * b_block },
        TheoremTerm { label: "log_t_hat".into(), value: log_coeff * lt },
        TheoremTerm {
            label: "log_t_hat_plus_one_over_t_hat".into(),
            value: c00 * (lt + 1.0) / t_hat * (-2.0 * e + 1.0 / (8.0 * zs2)),
        },
        TheoremTerm {
            label: "inverse_t_hat".into(),
            value: -(c00 / t_hat)
                * ((ct_phi_printed()? - a) / (4.0 * t_hat) + 3.0 / PI * (GAMMA_PRIME_ONE / 2.0 + (2.0 * PI).sqrt().ln())),
        },
    ];
    let total = terms.iter().map(|t| t.value).sum();
    Ok(MainTheoremBreakdown {
        t_hat,
        c00,
        terms,
        total,
        log_t_hat_coefficient: log_coeff,
        log_t_coefficients: [vol * c00, -2.0 * vol * c00 * 0.5],
        kappa_mu0_zero: k0,
    })
}

/// ∫_{X^{mod,T̂}} log‖Δ‖_Pet dμ by quadrature.
fn delta_integral(t_hat: f64, tol: f64) -> Result<f64> {
    Ok(quad(|z| Ok(c(delta_log(z).log_pet)), &Region::FundamentalTruncated { t_hat }, tol)?.value.re)
}

/// The assembled expansion against the direct integral of log‖Ψ‖ for an
/// input whose product is Δ.
pub fn verify_mainresult(f: &WeaklyHolomorphicInput, t_hat: f64, variant: AVariant, opts: &VerifyOptions) -> Result<VerificationReport> {
    for z in [HPoint::new(0.1, 1.2), HPoint::new(-0.4, 0.95)] {
        let p = borcherds_product_log(f, z)?;
        let d = delta_log(z).log_abs;
        if (p - d).abs() > 1e-10 * d.abs().max(1.0) {
            return Err(Error::Precondition(format!(
                "the input's product does not reproduce Delta at {z:?} ({p} vs {d})"
            )));
        }
    }
    let (tol, _) = opts.tolerances.get("mainresult");
    let lhs = delta_integral(t_hat, tol * 1e-4)?;
    let b = assemble_main_theorem(&OrdinaryCaseInputs { f: f.clone(), b_values: BTreeMap::new(), a_variant: variant }, t_hat)?;
    let cfg = ConfigSnapshot {
        t_hat: Some(t_hat),
        variant: Some(variant.name().to_string()),
        input: Some("delta".into()),
        ..Default::default()
    };
    let mut r = VerificationReport::compare(
        "mainresult",
        Tagged::real(lhs, Provenance::Quadrature),
        Tagged::real(b.total, Provenance::PrintedForm),
        opts,
        cfg,
    )?;
    for t in &b.terms {
        r = r.with_note(format!("{} = {:.15e}", t.label, t.value));
    }
    Ok(r.with_note(format!("c_mu0(0) = {}", b.c00)))
}

/// Least-squares line I(T̂) ≈ a + b·log T̂ through the direct integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceFit {
    pub t_hats: Vec<f64>,
    pub integrals: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    /// rms residual over |slope|.
    pub relative_residual: f64,
}

fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    (slope, intercept, rms)
}

pub fn divergence_fit(t_hats: &[f64], opts: &VerifyOptions) -> Result<DivergenceFit> {
    if t_hats.len() < 4 {
        return Err(Error::Domain(format!("the fit needs at least 4 values of T̂, got {}", t_hats.len())));
    }
    if t_hats.windows(2).any(|w| !(w[1] > w[0])) || !(t_hats[0] >= 1.0) {
        return Err(Error::Domain("T̂ values must be >= 1 and strictly increasing".into()));
    }
    if t_hats[t_hats.len() - 1] > 128.0 {
        return Err(Error::Domain("T̂ values above 128 are out of range for the quadrature".into()));
    }
    let (tol, _) = opts.tolerances.get("divergence");
    let mut integrals = Vec::with_capacity(t_hats.len());
    for &t in t_hats {
        integrals.push(delta_integral(t, tol * 1e-4)?);
    }
    let xs: Vec<f64> = t_hats.iter().map(|t| t.ln()).collect();
    let (slope, intercept, rms) = line_fit(&xs, &integrals);
    Ok(DivergenceFit {
        t_hats: t_hats.to_vec(),
        integrals,
        slope,
        intercept,
        rms_residual: rms,
        relative_residual: rms / slope.abs(),
    })
}

/// The fitted log T̂ slope against −2π (the Weyl-term rate −2πy·c/12 with
/// c = 12, integrated against dμ) and the fit residual against 0.
pub fn verify_divergence(t_hats: &[f64], opts: &VerifyOptions) -> Result<Vec<VerificationReport>> {
    let fit = divergence_fit(t_hats, opts)?;
    let cfg = ConfigSnapshot { list: t_hats.to_vec(), input: Some("delta".into()), ..Default::default() };
    let e = erf((PI / 2.0).sqrt());
    let zp = zeta_prime(c(-1.0))?.re;
    let printed_coeff = |c00: f64| -c00 * (4.0 * zp * e + 0.25);
    let corrected: Vec<f64> = fit
        .t_hats
        .iter()
        .zip(&fit.integrals)
        .map(|(t, i)| i + 6.0 * (t.ln() + 1.0) / t)
        .collect();
    let xs: Vec<f64> = fit.t_hats.iter().map(|t| t.ln()).collect();
    let (cslope, _, crms) = line_fit(&xs, &corrected);
    let mut slope = VerificationReport::compare(
        "divergence",
        Tagged::real(fit.slope, Provenance::Fit),
        Tagged::real(-2.0 * PI, Provenance::ClosedForm),
        opts,
        cfg.clone(),
    )?;
    for (t, i) in fit.t_hats.iter().zip(&fit.integrals) {
        slope = slope.with_note(format!("I({t}) = {i:.15e}"));
    }
    slope = slope
        .with_note(format!(
            "printed log T^ coefficient: {:.15e} at c = 12 (ratio {:.4}), {:.15e} at c = 24 (ratio {:.4})",
            printed_coeff(12.0),
            fit.slope / printed_coeff(12.0),
            printed_coeff(24.0),
            fit.slope / printed_coeff(24.0)
        ))
        .with_note(format!(
            "slope after adding 6(log T^ + 1)/T^: {cslope:.15e} (rms residual {crms:.3e})"
        ));
    let resid = VerificationReport::compare(
        "divergence_residual",
        Tagged::real(fit.relative_residual, Provenance::Fit),
        Tagged::real(0.0, Provenance::ClosedForm),
        opts,
        cfg,
    )?
    .with_note(format!("rms residual {:.6e}, intercept {:.15e}", fit.rms_residual, fit.intercept));
    Ok(vec![slope, resid])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_b_value_is_an_error() {
        let f = WeaklyHolomorphicInput::from_json(
            r#"{"weight": "-1/2", "cosets": {"mu0": [["-1", 1], ["0", 2]], "mu1": []}}"#,
        )
        .unwrap();
        let mut inputs = OrdinaryCaseInputs { f, b_values: BTreeMap::new(), a_variant: AVariant::Printed };
        assert!(matches!(assemble_main_theorem(&inputs, 2.0), Err(Error::MissingInput(_))));
        inputs.b_values.insert((CosetId::Mu0, Rational64::from_integer(1)), 0.5);
        let b = assemble_main_theorem(&inputs, 2.0).unwrap();
        let block = b.terms.iter().find(|t| t.label == "principal_part_block").unwrap();
        assert!((block.value + PI / 6.0 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn log_t_cancels() {
        let inputs = OrdinaryCaseInputs {
            f: WeaklyHolomorphicInput::constant(3.0),
            b_values: BTreeMap::new(),
            a_variant: AVariant::Printed,
        };
        let b = assemble_main_theorem(&inputs, 5.0).unwrap();
        assert_eq!(b.log_t_coefficients[0] + b.log_t_coefficients[1], 0.0);
    }

    #[test]
    fn line_fit_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 - 3.0 * x).collect();
        let (s, i, r) = line_fit(&xs, &ys);
        assert!((s + 3.0).abs() < 1e-14 && (i - 2.0).abs() < 1e-14 && r < 1e-14);
    }
}
