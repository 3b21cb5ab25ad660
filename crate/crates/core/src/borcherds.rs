//! The discriminant Δ and its Petersson norm, the input-form table for the
//! theta lift, and the right-hand side of the log-norm relation.

use crate::error::{Error, Result};
use crate::hdomain::HPoint;
use crate::qspace::CosetId;
use crate::quad::NeumaierSum;
use crate::specfun::EULER_GAMMA;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::f64::consts::PI;
use std::path::Path;

/// Weight of Δ as an elliptic modular form.
pub const DELTA_WEIGHT: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeterssonValue {
    /// log|Ψ(z)|
    pub log_abs: f64,
    /// log|Ψ(z)| + (w/2) log y
    pub log_pet: f64,
}

/// log|Δ(z)| and log‖Δ(z)‖ from the product q∏(1 − qⁿ)²⁴.
pub fn delta_log(z: HPoint) -> PeterssonValue {
    let y = z.y;
    // |qⁿ| = e^{−2πny} < 1e−18 beyond this n
    let nmax = (18.0 * std::f64::consts::LN_10 / (2.0 * PI * y)).ceil() as u64 + 1;
    let mut acc = NeumaierSum::new();
    for n in (1..=nmax).rev() {
        let n = n as f64;
        let r = (-2.0 * PI * n * y).exp();
        let c = (2.0 * PI * n * z.x).cos();
        // log|1 − w| = ½ log1p(−2 Re w + |w|²)
        acc.add(12.0 * (-2.0 * r * c + r * r).ln_1p());
    }
    acc.add(-2.0 * PI * y);
    let log_abs = acc.value();
    PeterssonValue { log_abs, log_pet: log_abs + 0.5 * DELTA_WEIGHT * y.ln() }
}

/// One Fourier term c·qⁿ of an input form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub exponent: Rational64,
    pub coefficient: Complex64,
}

/// Fourier coefficient table of a vector-valued weakly holomorphic form
/// f = f_{μ0} φ_{μ0} + f_{μ1} φ_{μ1}.
#[derive(Debug, Clone, PartialEq)]
pub struct WeaklyHolomorphicInput {
    pub weight: Rational64,
    pub mu0: Vec<Term>,
    pub mu1: Vec<Term>,
}

fn parse_rational(v: &Value) -> Result<Rational64> {
    match v {
        Value::String(s) => s.trim().parse::<Rational64>().map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(Rational64::from_integer)
            .ok_or_else(|| Error::Parse(format!("exponent {n} is not an integer; use \"p/q\""))),
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

fn parse_coefficient(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(n) => n.as_f64().map(|x| Complex64::new(x, 0.0)).ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        Value::Array(a) if a.len() == 2 => {
            let re = a[0].as_f64().ok_or_else(|| Error::Parse("coefficient real part".into()))?;
            let im = a[1].as_f64().ok_or_else(|| Error::Parse("coefficient imaginary part".into()))?;
            Ok(Complex64::new(re, im))
        }
        other => Err(Error::Parse(format!("expected coefficient, got {other}"))),
    }
}

fn parse_terms(v: Option<&Value>) -> Result<Vec<Term>> {
    let Some(v) = v else { return Ok(Vec::new()) };
    let arr = v.as_array().ok_or_else(|| Error::Parse("coset entry must be a list of [n, c] pairs".into()))?;
    arr.iter()
        .map(|pair| {
            let p = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::Parse(format!("expected [n, c], got {pair}")))?;
            Ok(Term { exponent: parse_rational(&p[0])?, coefficient: parse_coefficient(&p[1])? })
        })
        .collect()
}

fn rational_string(r: Rational64) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn frac(r: Rational64) -> Rational64 {
    r - r.floor()
}

impl WeaklyHolomorphicInput {
    /// The form c·φ_{μ0}.
    pub fn constant(c0: f64) -> Self {
        Self {
            weight: Rational64::new(-1, 2),
            mu0: vec![Term { exponent: Rational64::zero(), coefficient: Complex64::new(c0, 0.0) }],
            mu1: Vec::new(),
        }
    }

    /// 12·θ in vector form, the input whose product is Δ. μ0 carries
    /// 12 + 24Σ q^{m²} and μ1 carries 24Σ q^{(k+1/2)²}, truncated after `terms`
    /// exponents per coset.
    pub fn delta(terms: usize) -> Self {
        let mut mu0 = vec![Term { exponent: Rational64::zero(), coefficient: Complex64::new(12.0, 0.0) }];
        let mut mu1 = Vec::with_capacity(terms);
        for m in 1..=terms as i64 {
            mu0.push(Term { exponent: Rational64::from_integer(m * m), coefficient: Complex64::new(24.0, 0.0) });
            let k = 2 * m - 1;
            mu1.push(Term { exponent: Rational64::new(k * k, 4), coefficient: Complex64::new(24.0, 0.0) });
        }
        Self { weight: Rational64::new(1, 2), mu0, mu1 }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let weight = parse_rational(v.get("weight").ok_or_else(|| Error::Parse("missing \"weight\"".into()))?)?;
        let cosets = v.get("cosets").ok_or_else(|| Error::Parse("missing \"cosets\"".into()))?;
        let obj = cosets.as_object().ok_or_else(|| Error::Parse("\"cosets\" must be an object".into()))?;
        if let Some(k) = obj.keys().find(|k| *k != "mu0" && *k != "mu1") {
            return Err(Error::Parse(format!("unknown coset {k:?}")));
        }
        let f = Self { weight, mu0: parse_terms(obj.get("mu0"))?, mu1: parse_terms(obj.get("mu1"))? };
        f.validate()?;
        Ok(f)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::MissingInput(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Value {
        let terms = |ts: &[Term]| {
            Value::Array(
                ts.iter()
                    .map(|t| {
                        let c = if t.coefficient.im == 0.0 {
                            serde_json::json!(t.coefficient.re)
                        } else {
                            serde_json::json!([t.coefficient.re, t.coefficient.im])
                        };
                        serde_json::json!([rational_string(t.exponent), c])
                    })
                    .collect(),
            )
        };
        serde_json::json!({
            "weight": rational_string(self.weight),
            "cosets": { "mu0": terms(&self.mu0), "mu1": terms(&self.mu1) },
        })
    }

    /// Fractional part every μ1 exponent must have.
    pub fn mu1_class(&self) -> Rational64 {
        if self.weight > Rational64::zero() {
            Rational64::new(1, 4)
        } else {
            Rational64::new(3, 4)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let half = Rational64::new(1, 2);
        if self.weight != half && self.weight != -half {
            return Err(Error::Domain(format!("input weight must be ±1/2, got {}", self.weight)));
        }
        for (coset, terms) in [(CosetId::Mu0, &self.mu0), (CosetId::Mu1, &self.mu1)] {
            let class = match coset {
                CosetId::Mu0 => Rational64::zero(),
                CosetId::Mu1 => self.mu1_class(),
            };
            let mut seen: Vec<Rational64> = Vec::with_capacity(terms.len());
            for t in terms {
                if frac(t.exponent) != class {
                    return Err(Error::Domain(format!(
                        "{coset:?} exponent {} is not in {} + Z",
                        t.exponent, class
                    )));
                }
                if seen.contains(&t.exponent) {
                    return Err(Error::Domain(format!("{coset:?} exponent {} listed twice", t.exponent)));
                }
                if !t.coefficient.is_finite() {
                    return Err(Error::Domain(format!("non-finite coefficient at {coset:?} {}", t.exponent)));
                }
                seen.push(t.exponent);
            }
        }
        if !self.mu0.iter().any(|t| t.exponent.is_zero()) {
            return Err(Error::Domain("c_mu0(0) must be present (it may be 0)".into()));
        }
        Ok(())
    }

    pub fn terms(&self, coset: CosetId) -> &[Term] {
        match coset {
            CosetId::Mu0 => &self.mu0,
            CosetId::Mu1 => &self.mu1,
        }
    }

    /// c_μ(n), zero when absent.
    pub fn coefficient(&self, coset: CosetId, n: Rational64) -> Complex64 {
        self.terms(coset).iter().find(|t| t.exponent == n).map_or(Complex64::zero(), |t| t.coefficient)
    }

    /// Real part of c_{μ0}(0).
    pub fn c00(&self) -> f64 {
        self.coefficient(CosetId::Mu0, Rational64::zero()).re
    }

    /// (coset, m, c_μ(−m)) for every m > 0 with a nonzero coefficient.
    pub fn principal_part(&self) -> Vec<(CosetId, Rational64, Complex64)> {
        let mut out = Vec::new();
        for coset in [CosetId::Mu0, CosetId::Mu1] {
            for t in self.terms(coset) {
                if t.exponent < Rational64::zero() && !t.coefficient.is_zero() {
                    out.push((coset, -t.exponent, t.coefficient));
                }
            }
        }
        out
    }

    /// f_μ(τ) = Σ c_μ(n) e^{2πinτ} over the listed terms.
    pub fn eval(&self, coset: CosetId, tau: HPoint) -> Complex64 {
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        for t in self.terms(coset) {
            let n = *t.exponent.numer() as f64 / *t.exponent.denom() as f64;
            // phase reduced mod 1 before scaling
            let phase = 2.0 * PI * (n * tau.x).rem_euclid(1.0);
            let v = t.coefficient * Complex64::from_polar((-2.0 * PI * n * tau.y).exp(), phase);
            re.add(v.re);
            im.add(v.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// Largest listed exponent in the coset, if any.
    pub fn max_exponent(&self, coset: CosetId) -> Option<Rational64> {
        self.terms(coset).iter().map(|t| t.exponent).max()
    }

    pub fn is_one(&self) -> bool {
        self.mu1.is_empty() && self.mu0.len() == 1 && self.mu0[0].exponent.is_zero() && self.mu0[0].coefficient == Complex64::one()
    }
}

/// log|q^{c_{μ0}(0)/12} ∏_{n≥1} (1 − qⁿ)^{c(n²/4)}| for an input with no
/// principal part, where the coefficient for n comes from μ0 when n is even
/// and from μ1 when n is odd.
pub fn borcherds_product_log(f: &WeaklyHolomorphicInput, z: HPoint) -> Result<f64> {
    if !(z.y > 0.0) {
        return Err(Error::Domain("product needs a point in the upper half-plane".into()));
    }
    if !f.principal_part().is_empty() {
        return Err(Error::Precondition("product expansion only for inputs without principal part".into()));
    }
    let nmax = (18.0 * std::f64::consts::LN_10 / (2.0 * PI * z.y)).ceil() as i64 + 1;
    let mut acc = NeumaierSum::new();
    for n in (1..=nmax).rev() {
        let coset = if n % 2 == 0 { CosetId::Mu0 } else { CosetId::Mu1 };
        let m = Rational64::new(n * n, 4);
        if f.max_exponent(coset).map_or(true, |top| top < m) {
            return Err(Error::MissingInput(format!("coefficient {coset:?} at {m} needed at y = {}", z.y)));
        }
        let c = f.coefficient(coset, m).re;
        if c == 0.0 {
            continue;
        }
        let n = n as f64;
        let r = (-2.0 * PI * n * z.y).exp();
        let cs = (2.0 * PI * n * z.x).cos();
        acc.add(0.5 * c * (-2.0 * r * cs + r * r).ln_1p());
    }
    acc.add(-2.0 * PI * z.y * f.c00() / 12.0);
    Ok(acc.value())
}

/// Γ'(1) = −γ.
pub const GAMMA_PRIME_ONE: f64 = -EULER_GAMMA;

/// −Φ/4 − (c_{μ0}(0)/2)(log y + Γ'(1)/2 + log√(2π)).
pub fn borcherds_relation_rhs(f: &WeaklyHolomorphicInput, phi_value: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y must be positive, got {y}")));
    }
    let c0 = f.c00();
    Ok(-phi_value / 4.0 - 0.5 * c0 * (y.ln() + GAMMA_PRIME_ONE / 2.0 + (2.0 * PI).sqrt().ln()))
}
