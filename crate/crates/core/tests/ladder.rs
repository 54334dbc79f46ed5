mod common;

use common::{lab, ladder, num, table};
use jll_core::ladder::{eps_hat, g_weight, Ladder, LadderConfig, EULER_GAMMA};
use jll_core::quadrature::LadderMap;
use proptest::prelude::*;

fn cfg(a: f64) -> LadderConfig {
    LadderConfig {
        a_param: a,
        ..LadderConfig::default()
    }
}

#[test]
fn roots_match_oracle() {
    for row in table("ladder.csv") {
        let (t, a, phi, f) = (num(&row[0]), num(&row[1]), num(&row[2]), num(&row[3]));
        assert!((lab().quad().hl_cumulative(t).unwrap() / f - 1.0).abs() < 1e-9, "F({t})");
        let lad = Ladder::new(lab(), cfg(a)).unwrap();
        let p = lad.solve(t).unwrap();
        assert!(p.residual < 1e-8, "{t} {a}: residual {}", p.residual);
        assert!(((p.phi - phi) / phi).abs() < 1e-7, "{t} {a}: {} vs {phi}", p.phi);
        assert!(p.phi / 2.0 < t);
        assert_eq!(p.a_param, a);
    }
}

#[test]
fn continuum_of_ladders() {
    // mu = a x ln x lies far past where exp(-2t/x) dies, so a = 7 and a = 8
    // differ only through an x^(-14) tail
    let l7 = Ladder::new(lab(), cfg(7.0)).unwrap();
    let l8 = Ladder::new(lab(), cfg(8.0)).unwrap();
    let l75 = Ladder::new(lab(), cfg(7.5)).unwrap();
    for t in [1e3, 1e4, 1e5] {
        let (p7, p8, p75) = (l7.solve(t).unwrap(), l8.solve(t).unwrap(), l75.solve(t).unwrap());
        for p in [p7, p75, p8] {
            assert!(p.residual < 1e-8);
            let gap = t - p.phi / 2.0;
            let want = l7.gap_prediction(t).unwrap();
            assert!(gap / want > 0.5 && gap / want < 2.0, "{t}: {gap} {want}");
        }
        assert!(((p7.phi - p8.phi) / p7.phi).abs() < 1e-9);
    }
}

#[test]
fn tighter_tolerance_is_stable() {
    let coarse = ladder().solve(1e4).unwrap().phi;
    let fine = Ladder::new(
        lab(),
        LadderConfig {
            tol_residual: 1e-10,
            ..LadderConfig::default()
        },
    )
    .unwrap()
    .solve(1e4)
    .unwrap()
    .phi;
    assert!(((coarse - fine) / fine).abs() < 1e-6);
}

#[test]
fn residual_map_is_monotone() {
    let lad = ladder();
    for t in [1e3, 3e4] {
        let f = lab().quad().hl_cumulative(t).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..16 {
            let x = t + (1.2 * t) * k as f64 / 15.0;
            let g = lad.j(x).unwrap() - f;
            assert!(g > prev, "{t}: J not increasing at {x}");
            prev = g;
        }
    }
}

#[test]
fn below_domain_is_rejected() {
    assert!(ladder().solve(999.0).is_err());
    assert!(ladder().phi1_inverse(500.0).is_err());
    assert!(Ladder::new(lab(), cfg(6.5)).is_err());
}

#[test]
fn phi1_behaviour() {
    let lad = ladder();
    let t = 1e4;
    let y = lad.phi1(t).unwrap();
    assert!(y < t);
    assert!(lad.phi1(t + 100.0).unwrap() > y);
    let gap = 1e5 - lad.phi1(1e5).unwrap();
    let pred = (1.0 - EULER_GAMMA) * lab().primes().prime_pi(1e5).unwrap() as f64;
    assert!(gap / pred > 0.5 && gap / pred < 2.0, "{gap} {pred}");
    let mut prev = 0.0;
    for k in 0..12 {
        let v = lad.phi1(5e3 + 250.0 * k as f64).unwrap();
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn phi1_inverse_round_trip() {
    let lad = ladder();
    let y = 1e4;
    let t = lad.phi1_inverse(y).unwrap();
    assert!(t > y);
    assert!((lad.phi1(t).unwrap() - y).abs() < 1e-6, "{} {t}", lad.phi1(t).unwrap() - y);
    let a = lad.phi1_inverse(1e5).unwrap();
    let b = lad.phi1_inverse(1e5 + 2.0).unwrap();
    // the step is 2 / phi1'(t) locally, so it follows Z^2 rather than the mean gap law:
    // phi rises by 4 across [a, b], hence int_a^b Z^2 = 4 Phi' up to Phi'' terms
    let mass = lab().quad().integrate_z2(a, b, 1e-9).unwrap().value;
    let pp = lad.phi_prime(2e5).unwrap();
    assert!((mass / (4.0 * pp) - 1.0).abs() < 1e-3, "{} {mass} {pp}", b - a);
}

#[test]
fn phi_prime_band() {
    let lad = ladder();
    let t = 1e4;
    let phi = lad.solve(t).unwrap().phi;
    let (first, second) = lad.phi_prime_parts(phi).unwrap();
    let pp = first + second;
    assert!((pp - 0.5 * t.ln()).abs() < 5.0, "{pp}");
    assert!(second.abs() < 1e-10 * first);
    for phi in [1e3, 3e3, 1e4, 3e4, 1e5] {
        assert!(lad.phi_prime(phi).unwrap() > 0.0);
    }
}

#[test]
fn phi_second_bounds() {
    let lad = ladder();
    for phi in [1e3, 1e4, 1e5] {
        let v = lad.phi_second(phi).unwrap();
        let c = v.abs() * phi / (phi.ln() * phi.ln().ln());
        println!("phi {phi}: C = {c}");
        assert!(c < 1.0, "{phi}: {c}");
    }
    assert!(lad.q_term(1e3).unwrap().abs() < 1e-10);
    let (phi, h) = (1e4, 1.0);
    let fd = (lad.phi_prime(phi + h).unwrap() - lad.phi_prime(phi - h).unwrap()) / (2.0 * h);
    let exact = lad.phi_second(phi).unwrap();
    assert!(((fd - exact) / exact).abs() < 0.05, "{fd} {exact}");
}

#[test]
fn g_weight_extrema() {
    let phi = 1e4;
    let s = std::f64::consts::SQRT_2;
    assert_eq!(g_weight(0.0, phi, 7.0).unwrap(), 0.0);
    assert!(g_weight(phi, phi, 7.0).unwrap().abs() < 1e-12);
    let (tmin, tmax) = ((1.0 - 1.0 / s) * phi, (1.0 + 1.0 / s) * phi);
    let min = -(1.0 / s) * (1.0 - 1.0 / s) * (-2.0 + s).exp() * phi;
    let max = (1.0 / s) * (1.0 + 1.0 / s) * (-2.0 - s).exp() * phi;
    assert!((g_weight(tmin, phi, 7.0).unwrap() - min).abs() < 1e-12 * phi);
    assert!((g_weight(tmax, phi, 7.0).unwrap() - max).abs() < 1e-12 * phi);
    // they really are the extrema
    for k in 1..2000 {
        let t = 4.0 * phi * k as f64 / 2000.0;
        let g = g_weight(t, phi, 7.0).unwrap();
        assert!(g >= min - 1e-9 && g <= max + 1e-9);
    }
    assert!(g_weight(-1.0, phi, 7.0).is_err());
}

#[test]
fn ztilde2_shape() {
    let lad = ladder();
    let zs = lab().zeros().zeros_in(1e5, 1e5 + 3.0);
    assert!(lad.ztilde2(zs[0]).unwrap() < 1e-15);
    let mut seen = 0;
    for k in 0..60 {
        let t = 1e5 + 0.05 * k as f64;
        let z2 = lab().hz().eval_sq(t);
        let zt = lad.ztilde2(t).unwrap();
        assert!(zt >= 0.0);
        if (0.5..=3.0).contains(&z2) {
            seen += 1;
            let r = zt / (z2 / t.ln());
            assert!((r - 1.0).abs() < 0.3, "{t}: {r}");
        }
    }
    assert!(seen > 5);
}

#[test]
fn profile_properties() {
    let lad = ladder();
    let (t, u) = (1e4, 1e3);
    let p = lad.profile(t, u).unwrap();
    assert!(p.max_mid_deviation() <= 1e-5);
    assert!((p.phi1(t) - lad.phi1(t).unwrap()).abs() < 1e-9 * t);
    assert!((p.phi1(t + u) - lad.phi1(t + u).unwrap()).abs() < 1e-9 * t);
    let mid = t + 0.37 * u;
    let direct = lad.phi1(mid).unwrap();
    assert!(((p.phi1(mid) - direct) / direct).abs() < 1e-5);
    let mut prev = p.phi1(t);
    for k in 1..=2000 {
        let v = p.phi1(t + u * k as f64 / 2000.0);
        assert!(v >= prev);
        prev = v;
    }
    assert!(lad.profile(t, 2.0 * t / t.ln()).is_err());
}

#[test]
fn derivative_reproduces_z2() {
    // Z^2(t) = Phi'(phi(t)) phi'(t)
    let lad = ladder();
    let p = lad.profile(2e4, 20.0).unwrap();
    let mut checked = 0;
    for k in 1..200 {
        let t = 2e4 + 0.1 * k as f64;
        let z2 = lab().hz().eval_sq(t);
        if z2 <= 0.1 {
            continue;
        }
        let h = 1e-3;
        let dphi = 2.0 * p.phi1_delta(t + h, t - h) / (2.0 * h);
        let pp = lad.phi_prime(2.0 * p.phi1(t)).unwrap();
        assert!(((pp * dphi - z2) / z2).abs() < 0.01, "{t}");
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn transport_identity() {
    let lad = ladder();
    let p = lad.profile(1e4, 200.0).unwrap();
    let (a, b) = (1e4 + 10.0, 1e4 + 150.0);
    let n = 4000;
    let mut one = 0.0;
    for k in 0..n {
        let lo = a + (b - a) * k as f64 / n as f64;
        let hi = a + (b - a) * (k + 1) as f64 / n as f64;
        one += jll_core::quadrature::gl15().integrate(lo, hi, |t| p.ztilde2(t));
    }
    let image = p.phi1_delta(b, a);
    assert!(((one - image) / image).abs() < 1e-5, "{one} {image}");
    assert!(eps_hat(1e4) > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn phi1_increases(t in 1e3f64..9e4, d in 1.0f64..500.0) {
        let lad = ladder();
        prop_assert!(lad.phi1(t + d).unwrap() > lad.phi1(t).unwrap());
    }

    #[test]
    fn below_diagonal(t in 1e3f64..1e5) {
        let p = ladder().solve(t).unwrap();
        prop_assert!(p.phi / 2.0 < t);
        prop_assert!(p.residual < 1e-8);
    }
}
