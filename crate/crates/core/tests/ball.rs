use proptest::prelude::*;
use robin_core::ball_spectrum::{
    lambda1_ball, lambda1_unit_ball, lambda2_ball, lambda2_unit_ball, neumann_wavenumber, radial_g, radial_h,
    second_radial_mode, BallSpec, Branch, RadialProfile, RobinParameter,
};
use robin_core::special_fns::{bessel_i, bessel_j, find_bracketed_root};

fn profile(n: usize, radius: f64, alpha: f64) -> RadialProfile {
    RadialProfile::new(BallSpec::new(n, radius).unwrap(), RobinParameter(alpha)).unwrap()
}

#[test]
fn lambda2_increases_with_a() {
    for n in [2usize, 3, 4] {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=16 {
            let a = -0.9 + 0.05 * i as f64;
            let lam = lambda2_unit_ball(n, RobinParameter(a)).unwrap().lambda;
            assert!(lam > prev, "n {n} a {a}");
            prev = lam;
        }
    }
}

#[test]
fn documented_examples() {
    let unit = BallSpec::unit(2).unwrap();
    assert_eq!(lambda2_unit_ball(2, RobinParameter(-1.0)).unwrap().lambda, 0.0);
    let xi = neumann_wavenumber(2).unwrap();
    assert!((lambda2_unit_ball(2, RobinParameter(0.0)).unwrap().lambda - xi * xi).abs() < 1e-12);
    assert!((xi - 1.841_183_781_340_659).abs() < 1e-10);
    let half = lambda2_unit_ball(2, RobinParameter(-0.5)).unwrap();
    assert!((half.wavenumber - 1.355).abs() < 0.01);
    let big = BallSpec::new(2, 2.0).unwrap();
    assert_eq!(lambda2_ball(big, RobinParameter(-0.5)).unwrap(), 0.0);
    let scaled = lambda2_ball(big, RobinParameter(-0.25)).unwrap();
    let base = lambda2_ball(unit, RobinParameter(-0.5)).unwrap();
    assert!((scaled - base / 4.0).abs() <= 1e-12 * base);
}

#[test]
fn three_dimensional_neumann_root() {
    // d/dt (t^{-1/2} J_{3/2}(t)) = 0  <=>  t J_{3/2}'(t) = J_{3/2}(t) / 2  <=>  tan t = 2t / (2 - t^2)
    let oracle = find_bracketed_root(|t: f64| (2.0 - t * t) * t.sin() - 2.0 * t * t.cos(), 1.0, 3.0, 1e-14).unwrap();
    assert!((neumann_wavenumber(3).unwrap() - oracle).abs() < 1e-10);
    assert!((oracle - 2.081_575_977_818_101).abs() < 1e-10);
}

#[test]
fn robin_condition_satisfied() {
    for n in [2usize, 3, 5] {
        for radius in [0.5, 1.0, 2.0] {
            for frac in [0.1, 0.4, 0.7, 0.95] {
                let p = profile(n, radius, -frac / radius);
                assert!(p.robin_residual() <= 1e-9, "n {n} R {radius} frac {frac}: {}", p.robin_residual());
            }
        }
    }
}

#[test]
fn profile_matches_bessel_definition() {
    let p = profile(3, 1.5, -0.3);
    let k = p.wavenumber;
    for r in [0.1f64, 0.7, 1.2, 1.5] {
        let want = r.powf(-0.5) * bessel_j(1.5, k * r / 1.5).unwrap();
        assert!((p.g(r) - want).abs() < 1e-12, "r {r}");
    }
    let outside = p.g(1.5) * (0.3f64 * 0.5).exp();
    assert!((p.g(2.0) - outside).abs() < 1e-14);
}

#[test]
fn profile_monotonicity() {
    for (n, radius, alpha) in [(2usize, 1.0, -0.5), (3, 1.0, -0.8), (2, 2.0, -0.1), (4, 0.7, -1.0)] {
        let p = profile(n, radius, alpha);
        let samples: Vec<f64> = (1..=600).map(|i| 3.0 * radius * i as f64 / 600.0).collect();
        for w in samples.windows(2) {
            let (a, b) = (w[0], w[1]);
            assert!(p.g(b).powi(2) >= p.g(a).powi(2) * (1.0 - 1e-12), "g^2 at {a}, {b}");
            assert!(p.h(b) <= p.h(a) + 1e-12 * p.h(a).abs().max(1.0), "h at {a}, {b}: {} {}", p.h(a), p.h(b));
        }
        // unit-ball statement r G' + a G > 0 pulled back to radius R, a = R alpha
        for &r in samples.iter().filter(|&&r| r < radius) {
            assert!(r * p.g_prime(r) + radius * alpha * p.g(r) > 0.0, "r g' + R alpha g at {r}");
        }
    }
}

#[test]
fn h_branches_agree_at_radius() {
    for (n, alpha) in [(2usize, -0.5), (3, -0.2), (6, -0.9)] {
        let p = profile(n, 1.0, alpha);
        let inner = p.h_definitional(1.0);
        let outer = p.h_outside(1.0);
        assert!((inner - outer).abs() <= 1e-9 * outer.abs().max(1.0), "n {n}: {inner} vs {outer}");
    }
}

#[test]
fn radial_function_arguments() {
    let ball = BallSpec::unit(2).unwrap();
    assert!(radial_h(ball, RobinParameter(-0.5), 0.0).is_err());
    assert!(radial_g(ball, RobinParameter(-0.5), -1.0).is_err());
    assert_eq!(radial_g(ball, RobinParameter(-0.5), 0.0).unwrap(), 0.0);
    assert!(radial_g(ball, RobinParameter(-1.0), 0.5).is_err());
    assert!(radial_g(ball, RobinParameter(0.0), 0.5).is_err());
}

#[test]
fn trichotomy() {
    for n in [2usize, 3] {
        let below = second_radial_mode(n, -1.2).unwrap();
        assert!(below.lambda < 0.0);
        assert_eq!(below.branch, Branch::Exponential);
        assert_eq!(second_radial_mode(n, -1.0).unwrap().lambda, 0.0);
        let above = second_radial_mode(n, -0.5).unwrap();
        assert!(above.lambda > 0.0);
        assert_eq!(above.branch, Branch::Oscillatory);
    }
    assert!(lambda2_unit_ball(2, RobinParameter(-1.2)).is_err());
}

#[test]
fn first_eigenvalue_against_bessel_i() {
    // n = 2, a = -0.5: kappa I_1(kappa) = 0.5 I_0(kappa)
    let oracle = find_bracketed_root(
        |k| k * bessel_i(1.0, k).unwrap() - 0.5 * bessel_i(0.0, k).unwrap(),
        0.1,
        3.0,
        1e-14,
    )
    .unwrap();
    let sol = lambda1_unit_ball(2, RobinParameter(-0.5)).unwrap();
    assert!((sol.wavenumber - oracle).abs() < 1e-10);
    assert!((sol.lambda + 1.135_686_481_876_106_5).abs() < 1e-9);
    assert_eq!(lambda1_unit_ball(2, RobinParameter(0.0)).unwrap().lambda, 0.0);
    let l1 = lambda1_ball(BallSpec::unit(2).unwrap(), RobinParameter(-0.5)).unwrap();
    let l2 = lambda2_ball(BallSpec::unit(2).unwrap(), RobinParameter(-0.5)).unwrap();
    assert!(l1 < 0.0 && l1 < l2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scaling_relation(n in 2usize..5, frac in 0.01f64..0.99, t in 0.3f64..4.0) {
        let a = -frac;
        let base = lambda2_unit_ball(n, RobinParameter(a)).unwrap().lambda;
        let scaled = lambda2_ball(BallSpec::new(n, t).unwrap(), RobinParameter(a / t)).unwrap();
        prop_assert!((scaled - base / (t * t)).abs() <= 1e-10 * base.abs().max(1e-300) / (t * t) + 1e-14);
        let b1 = lambda1_unit_ball(n, RobinParameter(a)).unwrap().lambda;
        let s1 = lambda1_ball(BallSpec::new(n, t).unwrap(), RobinParameter(a / t)).unwrap();
        prop_assert!((s1 - b1 / (t * t)).abs() <= 1e-10 * b1.abs() / (t * t));
    }

    #[test]
    fn ball_volume_round_trip(n in 2usize..6, r in 0.1f64..5.0) {
        let ball = BallSpec::new(n, r).unwrap();
        let back = BallSpec::with_volume(n, ball.volume()).unwrap();
        prop_assert!((back.radius - r).abs() <= 1e-13 * r);
    }
}
