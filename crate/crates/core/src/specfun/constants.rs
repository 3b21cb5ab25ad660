//! The constants A and B̃ built from erf and the incomplete Gamma function.

use super::gamma::{erf, gamma_upper, gamma_upper_da, EULER_GAMMA};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaperConstants {
    #[serde(rename = "A")]
    pub a: f64,
    pub b_tilde: f64,
    pub gamma_em: f64,
}

/// Evaluates A from scratch:
/// 2erf(√(π/2))(-4(γ+1) + log 2 + π log(π/2)) + 2π log(2/π) + √π ∂ₐΓ(-1/2, π/2).
pub fn assemble_a() -> f64 {
    let e = erf((PI / 2.0).sqrt());
    let da = gamma_upper_da(-0.5, PI / 2.0).expect("x = π/2 is in the domain");
    2.0 * e * (-4.0 * (EULER_GAMMA + 1.0) + 2f64.ln() + PI * (PI / 2.0).ln())
        + 2.0 * PI * (2.0 / PI).ln()
        + PI.sqrt() * da
}

/// Evaluates B̃ = √(π/2)(∂ₐΓ(-1/2, π/2) - Γ(-1/2, π/2) log(π/2)) from scratch.
pub fn assemble_btilde() -> f64 {
    let x = PI / 2.0;
    let da = gamma_upper_da(-0.5, x).expect("x = π/2 is in the domain");
    let g = gamma_upper(-0.5, x).expect("x = π/2 is in the domain");
    (PI / 2.0).sqrt() * (da - g * x.ln())
}

pub fn paper_constants() -> PaperConstants {
    static C: OnceLock<PaperConstants> = OnceLock::new();
    *C.get_or_init(|| PaperConstants { a: assemble_a(), b_tilde: assemble_btilde(), gamma_em: EULER_GAMMA })
}

pub fn constant_a() -> f64 {
    paper_constants().a
}

pub fn constant_btilde() -> f64 {
    paper_constants().b_tilde
}

/// The competing assembly √2·B̃ + (8(Γ'(1) - 1) + log 4)·erf(√(π/2)), with Γ'(1) = -γ.
pub fn constant_a_alternative() -> f64 {
    let e = erf((PI / 2.0).sqrt());
    2f64.sqrt() * constant_btilde() + (8.0 * (-EULER_GAMMA - 1.0) + 4f64.ln()) * e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cached_matches_fresh_assembly() {
        assert!((constant_a() - assemble_a()).abs() < 1e-13);
        assert!((constant_btilde() - assemble_btilde()).abs() < 1e-15);
    }

    #[test]
    fn reference_values() {
        // 40-digit references from an independent arbitrary-precision library.
        assert!((constant_a() + 10.508_815_706_441_589_712).abs() < 1e-13);
        assert!((constant_btilde() - 0.023_345_745_822_353_365_548).abs() < 1e-15);
        assert!((constant_a_alternative() + 10.341_240_706_676_346_251).abs() < 1e-13);
    }

    #[test]
    fn euler_gamma_by_harmonic_limit() {
        // H_n - log n - 1/(2n) + 1/(12n²) - 1/(120n⁴) + 1/(252n⁶)
        let n = 1000u32;
        let mut h = crate::quad::NeumaierSum::new();
        for k in (1..=n).rev() {
            h.add(1.0 / k as f64);
        }
        let nf = n as f64;
        let g = h.value() - nf.ln() - 0.5 / nf + 1.0 / (12.0 * nf * nf) - 1.0 / (120.0 * nf.powi(4))
            + 1.0 / (252.0 * nf.powi(6));
        assert!((g - paper_constants().gamma_em).abs() < 1e-12);
    }
}
