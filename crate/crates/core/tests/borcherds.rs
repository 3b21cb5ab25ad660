use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::path::PathBuf;
use swb_core::borcherds::{borcherds_product_log, borcherds_relation_rhs, delta_log, WeaklyHolomorphicInput};
use swb_core::hdomain::{reduce, HPoint, Mat2};

fn delta_input_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/delta_input.json")
}

// Ramanujan τ(n) for n ≤ nmax from the product, in exact integers.
fn ramanujan_tau(nmax: usize) -> Vec<i128> {
    let mut c = vec![0i128; nmax + 1];
    c[0] = 1;
    for n in 1..nmax {
        for _ in 0..24 {
            for k in (n..=nmax).rev() {
                c[k] -= c[k - n];
            }
        }
    }
    // shift by the leading q
    let mut tau = vec![0i128; nmax + 1];
    tau[1..].copy_from_slice(&c[..nmax]);
    tau
}

#[test]
fn petersson_norm_is_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let z = HPoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.25..2.5));
        let (zr, _) = reduce(z);
        let a = delta_log(z).log_pet;
        let b = delta_log(zr).log_pet;
        assert!((a - b).abs() < 1e-9, "{z:?}: {a} vs {b}");
    }
    let s = Mat2::new(0, -1, 1, 0);
    let z = HPoint::new(0.17, 0.9);
    let d = delta_log(s.apply(z)).log_pet - delta_log(z).log_pet;
    assert!(d.abs() < 1e-12, "{d}");
}

#[test]
fn cusp_asymptotic() {
    let z = HPoint::new(0.3, 20.0);
    let v = delta_log(z);
    assert!((v.log_abs + 2.0 * PI * 20.0).abs() < 1e-12);
    assert!((v.log_pet - v.log_abs - 6.0 * 20f64.ln()).abs() < 1e-12);
}

#[test]
fn matches_q_series() {
    let tau = ramanujan_tau(50);
    assert_eq!(&tau[1..6], &[1, -24, 252, -1472, 4830]);
    for z in [HPoint::new(0.0, 2.0), HPoint::new(0.3, 1.1), HPoint::new(-0.45, 0.8)] {
        let q = Complex64::from_polar((-2.0 * PI * z.y).exp(), 2.0 * PI * z.x);
        let mut s = Complex64::new(0.0, 0.0);
        for n in (1..=50).rev() {
            s += q.powi(n as i32) * tau[n] as f64;
        }
        let want = s.norm().ln();
        let got = delta_log(z).log_abs;
        assert!((got - want).abs() < 1e-12 * want.abs(), "{z:?}: {got} vs {want}");
    }
}

#[test]
fn log_abs_is_harmonic() {
    let c = HPoint::new(0.21, 1.3);
    let r = 0.2;
    let n = 256;
    let mean: f64 = (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            delta_log(HPoint::new(c.x + r * t.cos(), c.y + r * t.sin())).log_abs
        })
        .sum::<f64>()
        / n as f64;
    assert!((mean - delta_log(c).log_abs).abs() < 1e-11);
}

#[test]
fn second_differences() {
    let h = 1e-3;
    for z in [HPoint::new(0.0, 1.0), HPoint::new(0.4, 0.9), HPoint::new(-0.2, 3.0)] {
        let f = |dx: f64, dy: f64| delta_log(HPoint::new(z.x + dx, z.y + dy));
        let lap = |g: &dyn Fn(f64, f64) -> f64| (g(h, 0.0) + g(-h, 0.0) + g(0.0, h) + g(0.0, -h) - 4.0 * g(0.0, 0.0)) / (h * h);
        let la = lap(&|a, b| f(a, b).log_abs);
        let lp = lap(&|a, b| f(a, b).log_pet);
        assert!(la.abs() < 1e-4, "{la}");
        // Δ(6 log y) = −6/y²
        assert!((lp * z.y * z.y + 6.0).abs() < 1e-4, "{lp}");
    }
}

#[test]
fn weight_calibration() {
    let (y1, y2) = (1.3, 4.0);
    let gap = |y: f64| {
        let v = delta_log(HPoint::new(0.1, y));
        v.log_abs - v.log_pet
    };
    let observed = gap(y1) - gap(y2);
    let predicted = |c00: f64| -(c00 / 2.0) * (y1.ln() - y2.ln());
    assert!((observed - predicted(12.0)).abs() < 1e-12);
    assert!((observed - predicted(24.0)).abs() > 1.0);
    assert!((predicted(24.0) / observed - 2.0).abs() < 1e-12);
}

#[test]
fn product_from_input_file() {
    let f = WeaklyHolomorphicInput::from_file(&delta_input_path()).unwrap();
    assert_eq!(f.c00(), 12.0);
    for z in [HPoint::new(0.0, 1.0), HPoint::new(0.37, 0.5), HPoint::new(-0.1, 2.2)] {
        let got = borcherds_product_log(&f, z).unwrap();
        let want = delta_log(z).log_abs;
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{got} vs {want}");
    }
    // the table stops at (40/2)², so very small y needs more terms than it holds
    assert!(borcherds_product_log(&f, HPoint::new(0.0, 0.05)).is_err());
}

#[test]
fn relation_rhs_tracks_weight_term() {
    let f = WeaklyHolomorphicInput::from_file(&delta_input_path()).unwrap();
    let a = borcherds_relation_rhs(&f, 0.0, 1.0).unwrap();
    let b = borcherds_relation_rhs(&f, 0.0, 2.0).unwrap();
    assert!((a - b - 6.0 * 2f64.ln()).abs() < 1e-14);
    assert!(borcherds_relation_rhs(&f, 0.0, -1.0).is_err());
}

#[test]
fn shipped_file_matches_constructor() {
    let f = WeaklyHolomorphicInput::from_file(&delta_input_path()).unwrap();
    assert_eq!(f, WeaklyHolomorphicInput::delta(20));
}
