use super::HPoint;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_C_MAX: u32 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// |x| ≤ 1/2, x² + y² ≥ 1, y < T̂.
    FundamentalTruncated { t_hat: f64 },
    /// |x| ≤ 1/2, 1 < y < T.
    CuspBox { t: f64 },
    /// |x| ≤ 1/2, x² + y² ≥ 1, y ≤ 1.
    FundCompactPart,
    /// |x| ≤ 1/2, 0 < y ≤ T̂, outside the discs of radius 1/(2c²T̂) tangent
    /// to the real axis at a/c for coprime a/c with c ≤ c_max.
    ZagierStrip { t_hat: f64, c_max: u32 },
}

impl Region {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Region::FundamentalTruncated { t_hat } | Region::ZagierStrip { t_hat, .. } if !(t_hat >= 1.0) => {
                Err(Error::Domain(format!("truncation height must be >= 1, got {t_hat}")))
            }
            Region::CuspBox { t } if !(t >= 1.0) => Err(Error::Domain(format!("cusp box height must be >= 1, got {t}"))),
            _ => Ok(()),
        }
    }
}

pub fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Radius of the excised disc at a cusp of denominator c.
pub fn ford_radius(c: u32, t_hat: f64) -> f64 {
    1.0 / (2.0 * (c as f64).powi(2) * t_hat)
}

/// Whether z lies in the open disc S_{a/c} for some coprime a/c with c ≤ c_max,
/// with x taken modulo 1.
pub fn in_ford_disc(z: HPoint, t_hat: f64, c_max: u32) -> bool {
    // Only discs taller than y can contain z: 1/(c² T̂) > y.
    let c_lim = ((1.0 / (t_hat * z.y)).sqrt().floor() as u64).min(c_max as u64);
    for c in 1..=c_lim {
        let cf = c as f64;
        let r = 1.0 / (2.0 * cf * cf * t_hat);
        let base = (z.x * cf).round() as i64;
        for a in [base - 1, base, base + 1] {
            if gcd(a, c as i64) != 1 {
                continue;
            }
            let cx = a as f64 / cf;
            // periodic images of the centre
            for shift in [-1.0, 0.0, 1.0] {
                let dx = z.x - (cx + shift);
                let dy = z.y - r;
                if dx * dx + dy * dy < r * r {
                    return true;
                }
            }
        }
    }
    false
}

pub fn region_contains(r: &Region, z: HPoint) -> bool {
    if !(z.y > 0.0) || z.x.abs() > 0.5 {
        return false;
    }
    match *r {
        Region::FundamentalTruncated { t_hat } => z.x * z.x + z.y * z.y >= 1.0 && z.y < t_hat,
        Region::CuspBox { t } => z.y > 1.0 && z.y < t,
        Region::FundCompactPart => z.x * z.x + z.y * z.y >= 1.0 && z.y <= 1.0,
        Region::ZagierStrip { t_hat, c_max } => z.y <= t_hat && !in_ford_disc(z, t_hat, c_max),
    }
}

/// Hyperbolic area from the closed forms.
pub fn volume(r: &Region) -> Result<f64> {
    r.validate()?;
    match *r {
        Region::FundamentalTruncated { t_hat } => Ok(PI / 3.0 - 1.0 / t_hat),
        Region::CuspBox { t } => Ok(1.0 - 1.0 / t),
        Region::FundCompactPart => Ok(PI / 3.0 - 1.0),
        Region::ZagierStrip { c_max, .. } => Err(Error::DivergentRegion(format!(
            "the strip minus finitely many discs (c_max = {c_max}) reaches the real axis"
        ))),
    }
}
