use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use swb_core::hdomain::{HPoint, Mat2};
use swb_core::qspace::*;
use swb_core::theta::*;

fn random_sl2(rng: &mut ChaCha8Rng) -> Mat2 {
    let mut g = Mat2::IDENTITY;
    for _ in 0..rng.gen_range(1..6) {
        let step = if rng.gen_bool(0.5) { Mat2::S } else { Mat2::translation(rng.gen_range(-2..=2)) };
        g = g.mul(&step);
    }
    g
}

fn random_vector(rng: &mut ChaCha8Rng) -> LatticeVector {
    LatticeVector::from_doubled(rng.gen_range(-6..=6), rng.gen_range(-9..=9), rng.gen_range(-6..=6))
}

#[test]
fn action_preserves_form_and_coset() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let g = random_sl2(&mut rng);
        let l = random_vector(&mut rng);
        let r = act(&g, &l).unwrap();
        assert_eq!(q_form(&r), q_form(&l));
        assert_eq!(r.coset(), l.coset());
    }
    let half = LatticeVector::new(0, Rational64::new(1, 2), 0).unwrap();
    for g in [Mat2::S, Mat2::T] {
        assert_eq!(act(&g, &half).unwrap().coset(), CosetId::Mu1);
    }
    assert_eq!(act(&Mat2::IDENTITY, &half).unwrap(), half);
    assert!(act(&Mat2::new(2, 0, 0, 1), &half).is_err());
}

#[test]
fn gram_signature_is_two_one() {
    // q(λ) = λ2² + λ1λ3 has Gram [[0,0,1/2],[0,1,0],[1/2,0,0]] with eigenvalues 1, 1/2, -1/2
    let g = [[0.0, 0.0, 0.5], [0.0, 1.0, 0.0], [0.5, 0.0, 0.0]];
    assert!((min_eigenvalue(&g) + 0.5).abs() < 1e-15);
    let neg = [[0.0, 0.0, -0.5], [0.0, -1.0, 0.0], [-0.5, 0.0, 0.0]];
    assert!((min_eigenvalue(&neg) + 1.0).abs() < 1e-15);
}

#[test]
fn split_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let g = random_sl2(&mut rng);
        let l = random_vector(&mut rng);
        let z = HPoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.3..3.0));
        for k in Kappa::BOTH {
            let a = majorant_split(&l, z, k);
            let b = majorant_split(&act(&g, &l).unwrap(), g.apply(z), k);
            assert!((a.q_pos - b.q_pos).abs() < 1e-11 * a.q_pos.abs().max(1.0), "{g:?} {l:?} {z:?}");
        }
    }
}

proptest! {
    #[test]
    fn split_adds_up_and_has_signs(l1 in -20i64..20, m in -20i64..20, l3 in -20i64..20,
                                   x in -2.0f64..2.0, y in 0.05f64..5.0, four in any::<bool>()) {
        let k = if four { Kappa::Four } else { Kappa::One };
        let l = LatticeVector::from_doubled(l1, m, l3);
        let s = majorant_split(&l, HPoint::new(x, y), k);
        let q = l.q4() as f64 / 4.0;
        prop_assert!((s.q_pos + s.q_neg - q).abs() <= 1e-12 * (1.0 + s.q_pos.abs()));
        prop_assert!(s.q_neg <= 0.0);
        prop_assert!(s.q_pos >= -1e-12 * (1.0 + s.q_neg.abs()));
        if !l.is_zero() && l.q4() >= 0 {
            prop_assert!(s.q_pos > 0.0);
        }
    }
}

#[test]
fn enumeration_matches_box_scan() {
    let z = HPoint::i();
    for k in Kappa::BOTH {
        let got = lattice_enum(CosetId::Mu0, z, 10.0, k).unwrap();
        let mut want = Vec::new();
        for l3 in -10i64..=10 {
            for l2 in -10i64..=10 {
                for l1 in -10i64..=10 {
                    let l = LatticeVector::from_doubled(l1, 2 * l2, l3);
                    if majorant_split(&l, z, k).majorant() <= 10.0 {
                        want.push(l);
                    }
                }
            }
        }
        want.sort_by_key(|l| (l.l3, l.m, l.l1));
        assert_eq!(got, want);
        for l in &got {
            assert!(got.contains(&l.neg()));
        }
    }
}

#[test]
fn enumeration_budget() {
    let r = lattice_enum_limited(CosetId::Mu0, HPoint::i(), 50.0, Kappa::One, 10);
    assert!(matches!(r, Err(swb_core::Error::Budget { .. })));
}

fn rand_point(rng: &mut ChaCha8Rng, ylo: f64, yhi: f64) -> HPoint {
    HPoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(ylo..yhi))
}

#[test]
fn siegel_theta_modular_in_z() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let tau = rand_point(&mut rng, 0.6, 2.0);
        let z = rand_point(&mut rng, 0.5, 2.0);
        for k in Kappa::BOTH {
            for c in CosetId::ALL {
                let t0 = siegel_sum(tau, z, c, k, |_| true).unwrap();
                for g in [Mat2::S, Mat2::T] {
                    let t1 = siegel_theta(tau, g.apply(z), c, k).unwrap();
                    assert!((t1 - t0.value).norm() < 1e-9 * t0.value.norm().max(1.0));
                }
                assert!(t0.tail_bound < 1e-14, "{}", t0.tail_bound);
            }
        }
    }
}

#[test]
fn components_partition_theta() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..25 {
        let tau = rand_point(&mut rng, 0.6, 2.0);
        let z = rand_point(&mut rng, 0.4, 3.0);
        for k in Kappa::BOTH {
            for c in CosetId::ALL {
                let comp = theta_components(tau, z, c, k).unwrap();
                let th = vartheta(tau, z, c, k).unwrap();
                assert!((comp.total() - th).norm() < 1e-10);
            }
        }
    }
    let comp = theta_components(HPoint::i(), HPoint::rho(), CosetId::Mu0, Kappa::One).unwrap();
    assert_eq!(comp.c00, Complex64::new(1.0, 0.0));
}

#[test]
fn brute_force_box_at_i_i() {
    for k in Kappa::BOTH {
        for c in CosetId::ALL {
            let mut terms = Vec::new();
            for l1 in -12i64..=12 {
                for m in -24i64..=24 {
                    for l3 in -12i64..=12 {
                        let l = LatticeVector::from_doubled(l1, m, l3);
                        if l.coset() != c {
                            continue;
                        }
                        let s = majorant_split(&l, HPoint::i(), k);
                        terms.push((-2.0 * PI * (s.q_pos - s.q_neg)).exp());
                    }
                }
            }
            terms.sort_by(|a, b| a.total_cmp(b));
            let brute: f64 = terms.iter().sum();
            let t = siegel_theta(HPoint::i(), HPoint::i(), c, k).unwrap();
            assert!((t.re - brute).abs() < 1e-12 && t.im.abs() < 1e-15, "{t} vs {brute}");
        }
    }
}

#[test]
fn u_periodicity_on_mu0() {
    let z = HPoint::new(0.21, 1.3);
    let a = siegel_theta(HPoint::new(0.37, 0.9), z, CosetId::Mu0, Kappa::One).unwrap();
    let b = siegel_theta(HPoint::new(1.37, 0.9), z, CosetId::Mu0, Kappa::One).unwrap();
    assert!((a - b).norm() < 1e-12);
}

#[test]
fn isotropic_part() {
    let z = HPoint::new(0.1, 1.2);
    for k in Kappa::BOTH {
        let c = theta_components(HPoint::new(0.2, 1.0), z, CosetId::Mu1, k).unwrap();
        assert_eq!(c.c0, Complex64::new(0.0, 0.0));
        assert_eq!(c.c00, Complex64::new(0.0, 0.0));
        let z = HPoint::new(0.1, 2.0);
        let c5 = theta_components(HPoint::new(0.0, 5.0), z, CosetId::Mu0, k).unwrap().c0.norm();
        let c10 = theta_components(HPoint::new(0.0, 10.0), z, CosetId::Mu0, k).unwrap().c0.norm();
        // e^{−πv m} decay with m = κ/y² the smallest isotropic majorant, from (1,0,0)
        let rate = ((c5 / 5.0) / (c10 / 10.0)).ln() / 5.0;
        let want = PI * k.value() / (z.y * z.y);
        assert!((rate / want - 1.0).abs() < 0.05, "{rate} {want}");
    }
}

#[test]
fn div_closed_and_integral_agree() {
    for tau in [HPoint::i(), HPoint::new(0.3, 0.7)] {
        for c in CosetId::ALL {
            let a = div_part(tau, HPoint::i(), c, DivMode::Closed).unwrap();
            let b = div_part(tau, HPoint::i(), c, DivMode::Integral).unwrap();
            assert!((a - b).norm() < 1e-10, "{a} {b}");
        }
    }
    let tau = HPoint::new(0.3, 0.7);
    let a = div_part(tau, HPoint::new(0.4, 2.0), CosetId::Mu0, DivMode::Closed).unwrap();
    let b = div_part(tau, HPoint::new(-0.1, 1.0), CosetId::Mu0, DivMode::Closed).unwrap();
    assert!((a - 2.0 * b).norm() < 1e-15);
    let v = 2.0;
    let d = div_part(HPoint::new(0.0, v), HPoint::i(), CosetId::Mu1, DivMode::Closed).unwrap();
    let lead = v.sqrt() * 2.0 * (-2.0 * PI * v / 4.0).exp();
    assert!((d.re / lead - 1.0).abs() < 2.0 * (-4.0 * PI * v).exp());
}

#[test]
fn conv_decays_under_the_gaussian_normalisation() {
    let tau = HPoint::i();
    let c1 = conv_part(tau, HPoint::new(0.2, 1.0), CosetId::Mu0, Kappa::One).unwrap().norm();
    let c8 = conv_part(tau, HPoint::new(0.2, 8.0), CosetId::Mu0, Kappa::One).unwrap().norm();
    assert!(c8 < (-8.0f64).exp() * c1, "{c1} {c8}");
    // large v keeps conv above the rounding floor up to y = 8
    let l: Vec<f64> = [2.0, 4.0, 8.0]
        .iter()
        .map(|&y| conv_part(HPoint::new(0.3, 20.0), HPoint::new(0.0, y), CosetId::Mu0, Kappa::One).unwrap().norm().ln())
        .collect();
    let s1 = (l[1] - l[0]) / 2.0;
    let s2 = (l[2] - l[1]) / 4.0;
    assert!(s1 < 0.0 && s2 < s1, "{l:?}");
}

#[test]
fn conv_under_kappa_four_keeps_half_of_div() {
    // With κ = 4 the λ3 = 0 sum Poisson-resums to y v^{1/2} θ^{Jac} / 2, so ϑ − Div
    // tends to −Div/2 instead of decaying.
    let tau = HPoint::new(0.1, 1.3);
    let z = HPoint::new(0.0, 8.0);
    let conv = conv_part(tau, z, CosetId::Mu0, Kappa::Four).unwrap();
    let div = div_part(tau, z, CosetId::Mu0, DivMode::Closed).unwrap();
    assert!((conv + div * 0.5).norm() < 1e-10 * div.norm());
}

#[test]
fn constant_terms_in_u() {
    let z = HPoint::new(0.15, 1.4);
    let v = 1.2;
    let got = constant_u_term(|t| vartheta(t, z, CosetId::Mu0, Kappa::One), v).unwrap();
    let iso = siegel_sum(HPoint::new(0.0, v), z, CosetId::Mu0, Kappa::One, |l| l.q4() == 0).unwrap().value * v;
    assert!((got - iso).norm() < 1e-11);
    let conv0 = constant_u_term(|t| conv_part(t, z, CosetId::Mu0, Kappa::One), v).unwrap();
    let comp = theta_components(HPoint::new(0.0, v), z, CosetId::Mu0, Kappa::One).unwrap();
    let div0 = z.y * v.sqrt();
    assert!((conv0 - (comp.c0 + comp.c00 - div0)).norm() < 1e-11);
}
