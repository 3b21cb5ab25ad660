use num_complex::Complex64;
use std::f64::consts::PI;
use swb_core::hdomain::{integrate, reduce, region_contains, volume, HPoint, Region};

fn re(f: impl Fn(HPoint) -> f64 + Sync) -> impl Fn(HPoint) -> Complex64 + Sync {
    move |z| Complex64::new(f(z), 0.0)
}

fn totient(c: u32) -> u32 {
    (1..=c).filter(|&a| swb_gcd(a, c) == 1).count() as u32
}

fn swb_gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// ∫ y² dμ over the strip is its Euclidean area.
fn strip_area(t_hat: f64, c_max: u32) -> f64 {
    let mut s = t_hat;
    for c in 1..=c_max {
        let r = 1.0 / (2.0 * (c as f64).powi(2) * t_hat);
        s -= totient(c) as f64 * PI * r * r;
    }
    s
}

#[test]
fn volumes_agree_with_quadrature() {
    for r in [
        Region::FundamentalTruncated { t_hat: 3.0 },
        Region::CuspBox { t: 7.5 },
        Region::FundCompactPart,
    ] {
        let q = integrate(|_| Complex64::new(1.0, 0.0), &r, 1e-12).unwrap();
        assert!((q.value.re - volume(&r).unwrap()).abs() < 1e-11, "{r:?}");
    }
}

#[test]
fn additivity_of_the_truncated_domain() {
    let f = re(|z: HPoint| (z.x * 3.0).cos() * z.y.powf(0.7) + 1.0 / z.y);
    let tol = 1e-11;
    let whole = integrate(&f, &Region::FundamentalTruncated { t_hat: 5.0 }, tol).unwrap();
    let lower = integrate(&f, &Region::FundCompactPart, tol).unwrap();
    let upper = integrate(&f, &Region::CuspBox { t: 5.0 }, tol).unwrap();
    assert!((whole.value - lower.value - upper.value).norm() < 1e-10);
}

#[test]
fn halving_tolerance_stays_within_estimate() {
    let f = re(|z: HPoint| (-z.y).exp() * (1.0 + z.x * z.x) * z.y.powi(3));
    let r = Region::FundamentalTruncated { t_hat: 20.0 };
    let a = integrate(&f, &r, 1e-8).unwrap();
    let b = integrate(&f, &r, 5e-9).unwrap();
    assert!((a.value - b.value).norm() <= 3.0 * a.abs_error_estimate.max(1e-15));
}

#[test]
fn sqrt_y_cusp_integral_closed_form() {
    for t in [4.0, 50.0, 1e3] {
        let q = integrate(re(|z: HPoint| z.y.sqrt()), &Region::CuspBox { t }, 1e-12).unwrap();
        assert!((q.value.re - 2.0 * (1.0 - 1.0 / f64::sqrt(t))).abs() < 1e-11);
    }
}

#[test]
fn y_over_compact_part() {
    // ∫_{F₁} y dμ = -½∫_{-1/2}^{1/2} ln(1 - x²) dx = ln(2/√3) - 2 atanh(1/2) + 1
    let q = integrate(re(|z: HPoint| z.y), &Region::FundCompactPart, 1e-13).unwrap();
    let closed = (2.0 / 3f64.sqrt()).ln() - 2.0 * 0.5f64.atanh() + 1.0;
    assert!((q.value.re - closed).abs() < 1e-12, "{}", q.value.re);
    assert!((closed - 0.045_228_747_557_780_8).abs() < 1e-15);
}

#[test]
fn strip_area_matches_disc_count() {
    for (t_hat, c_max) in [(1.0, 30), (2.0, 200), (10.0, 60)] {
        let r = Region::ZagierStrip { t_hat, c_max };
        let q = integrate(re(|z: HPoint| z.y * z.y), &r, 1e-10).unwrap();
        let want = strip_area(t_hat, c_max);
        assert!((q.value.re - want).abs() < 1e-9, "{t_hat} {c_max}: {} vs {want}", q.value.re);
    }
}

#[test]
fn strip_c_max_sensitivity_matches_area_formula() {
    // The excised area between c_max = 200 and 400 is Σ φ(c) π r_c², about 4.5e-6 / T̂².
    let t_hat = 10.0;
    let a = integrate(re(|z: HPoint| z.y * z.y), &Region::ZagierStrip { t_hat, c_max: 200 }, 1e-11).unwrap();
    let b = integrate(re(|z: HPoint| z.y * z.y), &Region::ZagierStrip { t_hat, c_max: 400 }, 1e-11).unwrap();
    let want = strip_area(t_hat, 400) - strip_area(t_hat, 200);
    assert!(((b.value.re - a.value.re) - want).abs() < 1e-10);
}

#[test]
fn reduced_points_lie_in_the_closed_domain() {
    let r = Region::FundamentalTruncated { t_hat: 1e9 };
    for i in 0..50 {
        for j in 1..50 {
            let z = HPoint::new(-3.0 + 0.13 * i as f64, 0.003 * (j * j) as f64);
            let (w, g) = reduce(z);
            assert_eq!(g.det(), 1);
            assert!(region_contains(&r, w) || (w.x * w.x + w.y * w.y - 1.0).abs() < 1e-12);
            assert_eq!(reduce(w).0, w);
        }
    }
}
