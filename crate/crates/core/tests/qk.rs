use dtrans_core::angle::{level_modulus, Angle, RationalAngle};
use dtrans_core::natset::gap_profile;
use dtrans_core::qk::*;
use dtrans_core::sobolev::{delta_distance, gram_matrix};
use num_bigint::{BigUint, RandBigInt};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn angle(m: u64, level: u32) -> RationalAngle {
    RationalAngle::new(m.into(), level).unwrap()
}

fn random_angle(rng: &mut ChaCha8Rng, level: u32) -> RationalAngle {
    RationalAngle::new(rng.gen_biguint_below(&level_modulus(level)), level).unwrap()
}

fn h_k(k: &BigUint, t: &RationalAngle) -> Complex64 {
    DiagonalSymbol::MixingDifference { k: k.clone() }
        .multiplier(t)
        .unwrap_or(re(1.0))
}

#[test]
fn level_one_examples() {
    let pts = enumerate_k_level(1).unwrap();
    assert_eq!(pts, vec![angle(0, 1), angle(1, 1)]);
    let t = &pts[1];
    assert!(periodicity_check(t, &64u32.into()).unwrap());
    assert!(!periodicity_check(t, &32u32.into()).unwrap());
    assert!(periodicity_check(t, &0u32.into()).is_err());
    // e^{32it} = -1 at t = 2π/64, so h_32 = 2(-1) - 1
    let m = DiagonalSymbol::mixing_difference(32).multiplier(t).unwrap();
    assert!((m - re(-3.0)).norm() < 1e-15);
    assert_eq!(DiagonalSymbol::mixing_difference(64).multiplier(t), None);
}

#[test]
fn level_three_has_eight_sorted_points() {
    let pts = enumerate_k_level(3).unwrap();
    assert_eq!(pts.len(), 8);
    assert!(pts.windows(2).all(|w| w[0] < w[1]));
    assert!(pts.iter().all(|p| p.period() <= level_modulus(3)));
}

#[test]
fn full_period_is_bit_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for level in 1..=2 {
        let p = level_modulus(level);
        let support = enumerate_k_level(level).unwrap();
        let coeffs: Vec<Complex64> = (0..support.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let v = DualVector::new(support.clone(), coeffs).unwrap();
        for t in &support {
            assert!(periodicity_check(t, &p).unwrap());
        }
        for s in [DiagonalSymbol::Power { n: p.clone() }, DiagonalSymbol::MixingDifference { k: p.clone() }] {
            let img = apply_symbol(&s, &v);
            let same = img.coeffs().iter().zip(v.coeffs()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
            assert!(same, "level {level}");
        }
        // multipliers only see k modulo the period
        for k in [1u64, 7, 63, 1000] {
            let a = DiagonalSymbol::mixing_difference(k);
            let b = DiagonalSymbol::MixingDifference { k: &p + k };
            for t in &support {
                assert_eq!(a.multiplier(t), b.multiplier(t));
            }
        }
    }
}

#[test]
fn mixing_symbol_is_bounded_by_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let support = enumerate_k_level(3).unwrap();
    for k in (1u64..=300).chain([1 << 36, (1 << 36) - 1]) {
        let k = BigUint::from(k);
        for t in &support {
            assert!(h_k(&k, t).norm() <= 3.0 + 1e-12);
        }
    }
    for _ in 0..1000 {
        let t = random_angle(&mut rng, 3);
        let k = rng.gen_biguint(80);
        assert!(h_k(&k, &t).norm() <= 3.0 + 1e-12);
    }
}

#[test]
fn mixing_symbol_is_lipschitz() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let k: u64 = rng.gen_range(1..5000);
        let s = random_angle(&mut rng, 2);
        let t = random_angle(&mut rng, 2);
        let kb = BigUint::from(k);
        let lhs = (h_k(&kb, &s) - h_k(&kb, &t)).norm();
        assert!(lhs <= 6.0 * k as f64 * s.diff(&t).abs() + 1e-12);
    }
}

#[test]
fn periodic_points_approach_level_three_angles() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let target = random_angle(&mut rng, 3);
        let mut last = f64::INFINITY;
        for level in 1..=2u32 {
            // truncate the binary expansion to the coarser level
            let drop = 216 - 6usize.pow(level);
            let approx = RationalAngle::new(target.numerator() >> drop, level).unwrap();
            assert!(approx.period() <= level_modulus(level));
            let d = delta_distance(&Angle::from(target.clone()), &Angle::from(approx), 256);
            assert!(d <= last);
            last = d;
        }
        assert!(last < 1e-5, "{last}");
    }
}

#[test]
fn huge_target_ball_is_always_hit() {
    let cfg = SeparationConfig {
        basis_size: 64,
        v: DualBall {
            center: vec![re(0.0); 4],
            radius: 100.0,
        },
        k_list: (1..=40).collect(),
        ..Default::default()
    };
    let rep = separation_experiment(&cfg).unwrap();
    assert_eq!(rep.hits.len(), 40);
    assert!(rep.undecided.is_empty());
    assert!(gap_profile(&rep.hits, 1).syndetic.is_holds());
}

#[test]
fn separation_cases_are_consistent() {
    let cfg = SeparationConfig {
        basis_size: 64,
        k_list: vec![1, 8, 9, 32, 63, 64, 65],
        ..Default::default()
    };
    let rep = separation_experiment(&cfg).unwrap();
    for c in &rep.cases {
        assert!(c.distance_lower <= c.distance + 1e-12, "k = {}", c.k);
        assert_eq!(rep.hits.contains(c.k), c.status == Status::Hit);
    }
    assert_eq!(rep.hits.start(), 1);
    let bad = SeparationConfig {
        u: DualBall {
            center: vec![re(1.0)],
            radius: 0.1,
        },
        ..Default::default()
    };
    assert!(separation_experiment(&bad).is_err());
}

#[test]
fn ball_shrink_holds_around_random_centres() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let support = enumerate_k_level(2).unwrap();
    for seed in 0..3 {
        let coeffs: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let x = DualVector::new(support.clone(), coeffs).unwrap();
        let g = gram_matrix(&x.points(), 128).unwrap();
        let v = ball_shrink_check(&x, 0.05, 500, &g, seed).unwrap();
        assert!(v.is_holds(), "{v:?}");
        assert_eq!(v, ball_shrink_check(&x, 0.05, 500, &g, seed).unwrap());
    }
}

#[test]
fn dual_vectors_reject_duplicates_and_mismatches() {
    let a = angle(1, 1);
    let b = a.lift(2).unwrap();
    assert!(DualVector::new(vec![a.clone(), b], vec![re(1.0), re(2.0)]).is_err());
    assert!(DualVector::new(vec![a.clone()], vec![]).is_err());
    let v = DualVector::delta(a);
    let json = serde_json::to_string(&v).unwrap();
    assert_eq!(serde_json::from_str::<DualVector>(&json).unwrap(), v);
    assert!(serde_json::from_str::<DualVector>(r#"{"support":[],"coeffs":[],"x":1}"#).is_err());
}

#[test]
fn symbols_accept_string_integers() {
    let s: DiagonalSymbol = serde_json::from_str(r#"{"kind":"power","n":"68719476736"}"#).unwrap();
    assert_eq!(s, DiagonalSymbol::Power { n: BigUint::from(1u64 << 36) });
    let s: DiagonalSymbol = serde_json::from_str(r#"{"kind":"mixing_difference","k":63}"#).unwrap();
    assert_eq!(s, DiagonalSymbol::mixing_difference(63));
}

proptest! {
    #[test]
    fn norms_scale_linearly(re_a in -3.0f64..3.0, im_a in -3.0f64..3.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let support = enumerate_k_level(2).unwrap();
        let coeffs: Vec<Complex64> = (0..4).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let v = DualVector::new(support, coeffs).unwrap();
        let g = gram_matrix(&v.points(), 64).unwrap();
        let a = Complex64::new(re_a, im_a);
        let lhs = xk_norm(&v.scale(a), &g).unwrap();
        let rhs = a.norm() * xk_norm(&v, &g).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1e-12));
    }

    #[test]
    fn power_symbols_compose(n1 in 1u64..10_000, n2 in 1u64..10_000, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_angle(&mut rng, 2);
        let a = DiagonalSymbol::power(n1).multiplier(&t).unwrap_or(re(1.0));
        let b = DiagonalSymbol::power(n2).multiplier(&t).unwrap_or(re(1.0));
        let ab = DiagonalSymbol::power(n1 + n2).multiplier(&t).unwrap_or(re(1.0));
        prop_assert!((a * b - ab).norm() < 1e-9);
    }
}
