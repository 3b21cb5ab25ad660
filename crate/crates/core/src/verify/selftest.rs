//! Property batteries for the special functions and the theta kernels,
//! runnable from the command line.

use crate::error::Result;
use crate::hdomain::{HPoint, Mat2};
use crate::qspace::{majorant_split, CosetId, Kappa, LatticeVector};
use crate::specfun::{bessel_k, gamma_upper, laurent_extract, zeta, zeta_star};
use crate::theta::{siegel_theta, theta_components, vartheta};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryCheck {
    pub name: String,
    pub samples: usize,
    pub max_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl BatteryCheck {
    fn new(name: &str, samples: usize, max_err: f64, tolerance: f64) -> Self {
        Self { name: name.into(), samples, max_err, tolerance, pass: max_err <= tolerance }
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn specfun_battery(seed: u64) -> Result<Vec<BatteryCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = rng.gen_range(-2.0..3.0);
        let x = rng.gen_range(0.1..20.0);
        let lhs = gamma_upper(a + 1.0, x)?;
        let rhs = a * gamma_upper(a, x)? + x.powf(a) * (-x).exp();
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
    }
    out.push(BatteryCheck::new("upper_gamma_recurrence", 100, worst, 1e-12));

    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 50 {
        let s = Complex64::from_polar(rng.gen_range(0.0..10.0), rng.gen_range(0.0..2.0 * PI));
        if s.norm() < 0.2 || (s - 1.0).norm() < 0.2 {
            continue;
        }
        let a = zeta_star(s)?;
        let b = zeta_star(c(1.0) - s)?;
        worst = worst.max((a - b).norm() / a.norm().max(1.0));
        n += 1;
    }
    out.push(BatteryCheck::new("completed_zeta_symmetry", 50, worst, 1e-10));

    let mut worst: f64 = 0.0;
    for x in [0.01, 0.3, 1.0, 4.5, 20.0, 90.0] {
        let want = (PI / (2.0 * x)).sqrt() * (-x).exp();
        worst = worst.max((bessel_k(0.5, x)? - want).abs() / want);
    }
    out.push(BatteryCheck::new("bessel_k_half", 6, worst, 1e-13));

    let f = |s: Complex64| Ok(zeta(2.0 * s + 1.0)? * (s + 0.3).exp());
    let a = laurent_extract(f, c(0.0), 0.1, 32)?;
    let b = laurent_extract(f, c(0.0), 0.2, 32)?;
    let worst = [(a.c_m2, b.c_m2), (a.c_m1, b.c_m1), (a.c_0, b.c_0), (a.c_1, b.c_1)]
        .iter()
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    out.push(BatteryCheck::new("laurent_radius_independence", 4, worst, 1e-10));
    Ok(out)
}

fn rand_point(rng: &mut ChaCha8Rng, ylo: f64, yhi: f64) -> HPoint {
    HPoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(ylo..yhi))
}

pub fn theta_battery(seed: u64) -> Result<Vec<BatteryCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let tau = rand_point(&mut rng, 0.6, 2.0);
        let z = rand_point(&mut rng, 0.5, 2.0);
        for k in Kappa::BOTH {
            for cs in CosetId::ALL {
                let t0 = siegel_theta(tau, z, cs, k)?;
                for g in [Mat2::S, Mat2::T] {
                    let t1 = siegel_theta(tau, g.apply(z), cs, k)?;
                    worst = worst.max((t1 - t0).norm() / t0.norm().max(1.0));
                }
            }
        }
    }
    out.push(BatteryCheck::new("siegel_theta_z_invariance", 5, worst, 1e-9));

    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let tau = rand_point(&mut rng, 0.6, 2.0);
        let z = rand_point(&mut rng, 0.4, 3.0);
        for k in Kappa::BOTH {
            for cs in CosetId::ALL {
                let comp = theta_components(tau, z, cs, k)?;
                worst = worst.max((comp.total() - vartheta(tau, z, cs, k)?).norm());
            }
        }
    }
    out.push(BatteryCheck::new("component_partition", 5, worst, 1e-10));

    let mut worst: f64 = 0.0;
    for k in Kappa::BOTH {
        for cs in CosetId::ALL {
            let mut terms = Vec::new();
            for l1 in -12i64..=12 {
                for m in -24i64..=24 {
                    for l3 in -12i64..=12 {
                        let l = LatticeVector::from_doubled(l1, m, l3);
                        if l.coset() != cs {
                            continue;
                        }
                        let s = majorant_split(&l, HPoint::i(), k);
                        terms.push((-2.0 * PI * (s.q_pos - s.q_neg)).exp());
                    }
                }
            }
            terms.sort_by(f64::total_cmp);
            let brute: f64 = terms.iter().sum();
            worst = worst.max((siegel_theta(HPoint::i(), HPoint::i(), cs, k)? - brute).norm());
        }
    }
    out.push(BatteryCheck::new("brute_force_box_at_i_i", 4, worst, 1e-12));
    Ok(out)
}
